#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "indflag/cells.hpp"
#include "indflag/oracle.hpp"

namespace indflag::jsonio {

struct RunOptions {
  std::optional<long long> max_radius;  // per-query default when unset
  bool timestamps = false;
  // Restrict execution to the smoothness query kinds (the smooth subcommand).
  bool smooth_only = false;
};

// Exit code buckets, most severe first: 1 malformed input, 2 unsupported
// rule combination, 3 enumeration cap exceeded, 0 otherwise.
struct RunOutcome {
  std::string report;  // serialized JSON document, newline terminated
  int exit_code = 0;
  // DOT documents produced by graph queries, in query order: name, content.
  std::vector<std::pair<std::string, std::string>> dot_files;
};

// Parse and execute one scenario. Scenario-level problems produce an error
// report and exit code 1; query-level problems become error objects in the
// report while the remaining queries still run.
RunOutcome run_scenario(const std::string& scenario_text, const RunOptions& opt);

// Building blocks, exposed for tests and tools.
std::string to_json_text(const ExtendedCount& c);
std::string to_json_text(const FinPerm& w);
std::string to_json_text(const oracle::RationalFlag& flag);

// Throws Error(schema_error) with a JSON-path diagnostic.
SurjectionSpec spec_from_json_text(const std::string& text);
std::string spec_to_json_text(const SurjectionSpec& spec);

}  // namespace indflag::jsonio
