#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "indflag/json_io.hpp"

namespace {

struct CommonArgs {
  std::string scenario;
  std::string out;
  std::string dot_dir = ".";
  long long max_radius = 0;
  CLI::Option* radius_opt = nullptr;
  bool timestamps = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_dot_dir) {
  cmd->add_option("--scenario", args.scenario, "Scenario JSON file")->required();
  cmd->add_option("--out", args.out, "Report destination (default: standard output)");
  if (with_dot_dir)
    cmd->add_option("--dot-dir", args.dot_dir, "Directory for DOT files from graph queries");
  args.radius_opt =
      cmd->add_option("--max-radius", args.max_radius,
                      "Default truncation radius for smooth queries")
          ->check(CLI::PositiveNumber);
  cmd->add_flag("--timestamps", args.timestamps, "Stamp the report with the generation time");
}

int execute(const CommonArgs& args, bool smooth_only) {
  indflag::jsonio::RunOptions opt;
  if (args.radius_opt->count() > 0) opt.max_radius = args.max_radius;
  opt.timestamps = args.timestamps;
  opt.smooth_only = smooth_only;

  indflag::jsonio::RunOutcome outcome;
  std::ifstream in(args.scenario);
  if (!in) {
    outcome.report = "{\n  \"version\": 1,\n  \"error\": {\n    \"code\": \"schema_error\",\n"
                     "    \"message\": \"cannot read " + args.scenario +
                     "\"\n  },\n  \"status\": \"schema\"\n}\n";
    outcome.exit_code = 1;
  } else {
    std::ostringstream buf;
    buf << in.rdbuf();
    outcome = indflag::jsonio::run_scenario(buf.str(), opt);
  }

  if (args.out.empty()) {
    std::cout << outcome.report;
  } else {
    std::ofstream os(args.out, std::ios::binary);
    if (!os) {
      std::cerr << "cannot write " << args.out << "\n";
      return 1;
    }
    os << outcome.report;
  }

  for (const auto& [name, content] : outcome.dot_files) {
    const std::filesystem::path path = std::filesystem::path(args.dot_dir) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) {
      std::cerr << "cannot write " << path.string() << "\n";
      return 1;
    }
    os << content;
  }
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schubert cell queries on finitely presented ind-flag varieties"};
  app.require_subcommand(1);

  CommonArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Execute every query in a scenario file");
  add_common(run, run_args, true);

  CommonArgs smooth_args;
  CLI::App* smooth =
      app.add_subcommand("smooth", "Execute only the smoothness queries of a scenario");
  add_common(smooth, smooth_args, false);

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return execute(run_args, false);
  return execute(smooth_args, true);
}
