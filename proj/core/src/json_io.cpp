#include "indflag/json_io.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "indflag/criteria.hpp"
#include "indflag/smoothness.hpp"
#include "json.hpp"

namespace indflag::jsonio {

using ojson = nlohmann::ordered_json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string elem(const std::string& path, size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
  fail(Errc::schema_error, path.empty() ? msg : path + ": " + msg);
}

const ojson& field(const ojson& j, const std::string& path, const char* key) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(path, std::string("missing field '") + key + "'");
  return *it;
}

long long int_at(const ojson& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  return j.get<long long>();
}

bool bool_at(const ojson& j, const std::string& path) {
  if (!j.is_boolean()) bad(path, "expected a boolean");
  return j.get<bool>();
}

std::string string_at(const ojson& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

Address address_at(const ojson& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) bad(path, "expected [block, offset]");
  return Address{static_cast<int>(int_at(j[0], elem(path, 0))),
                 int_at(j[1], elem(path, 1))};
}

BlockKind block_at(const ojson& j, const std::string& path) {
  const ojson& k = field(j, path, "kind");
  if (k.is_string()) {
    const std::string s = k.get<std::string>();
    if (s == "Z") return z_line();
    if (s == "omega") return omega_up();
    if (s == "omega_rev") return omega_down();
    bad(join(path, "kind"), "unknown kind '" + s + "'");
  }
  if (k.is_object() && k.contains("fin"))
    return fin_chain(int_at(k["fin"], join(path, "kind.fin")));
  bad(join(path, "kind"), "expected \"Z\", \"omega\", \"omega_rev\", or {\"fin\": n}");
}

OrderSpec order_at(const ojson& j, const std::string& path) {
  OrderSpec spec;
  const ojson& blocks = field(j, path, "blocks");
  if (!blocks.is_array() || blocks.empty())
    bad(join(path, "blocks"), "expected a non-empty array");
  for (size_t i = 0; i < blocks.size(); ++i)
    spec.blocks.push_back(block_at(blocks[i], elem(join(path, "blocks"), i)));
  if (j.contains("name")) spec.name = string_at(j["name"], join(path, "name"));
  return spec;
}

std::optional<InvolutionSpec> involution_at(const ojson& j, const std::string& path) {
  if (!j.is_object() || !j.contains("involution") || j["involution"].is_null())
    return std::nullopt;
  const ojson& v = j["involution"];
  const std::string p = join(path, "involution");
  InvolutionSpec inv;
  const ojson& pairing = field(v, p, "pairing");
  if (!pairing.is_array()) bad(join(p, "pairing"), "expected an array");
  for (size_t i = 0; i < pairing.size(); ++i) {
    const std::string pe = elem(join(p, "pairing"), i);
    const ojson& row = pairing[i];
    if (!row.is_array() || row.size() != 3) bad(pe, "expected [first, second, shift]");
    inv.pairing.push_back({static_cast<int>(int_at(row[0], elem(pe, 0))),
                           static_cast<int>(int_at(row[1], elem(pe, 1))),
                           int_at(row[2], elem(pe, 2))});
  }
  if (v.contains("fixed_point") && !v["fixed_point"].is_null())
    inv.fixed_point = address_at(v["fixed_point"], join(p, "fixed_point"));
  const std::string tag = string_at(field(v, p, "type_tag"), join(p, "type_tag"));
  if (tag != "B" && tag != "C" && tag != "D")
    bad(join(p, "type_tag"), "expected \"B\", \"C\", or \"D\"");
  inv.type_tag = tag[0];
  return inv;
}

LabelRule rule_at(const ojson& j, const std::string& path) {
  const std::string kind = string_at(field(j, path, "rule"), join(path, "rule"));
  if (kind == "const")
    return ConstRule{address_at(field(j, path, "alpha"), join(path, "alpha"))};
  if (kind == "mono") {
    MonoRule m;
    m.a_block =
        static_cast<int>(int_at(field(j, path, "a_block"), join(path, "a_block")));
    m.stride = int_at(field(j, path, "stride"), join(path, "stride"));
    m.base = int_at(field(j, path, "base"), join(path, "base"));
    return m;
  }
  if (kind == "periodic") {
    const ojson& pat = field(j, path, "pattern");
    if (!pat.is_array() || pat.empty())
      bad(join(path, "pattern"), "expected a non-empty array");
    PeriodicRule r;
    for (size_t i = 0; i < pat.size(); ++i)
      r.pattern.push_back(address_at(pat[i], elem(join(path, "pattern"), i)));
    return r;
  }
  if (kind == "list") {
    const ojson& labels = field(j, path, "labels");
    if (!labels.is_array()) bad(join(path, "labels"), "expected an array");
    ListRule r;
    for (size_t i = 0; i < labels.size(); ++i)
      r.labels.push_back(address_at(labels[i], elem(join(path, "labels"), i)));
    return r;
  }
  bad(join(path, "rule"), "unknown rule '" + kind + "'");
}

SurjectionSpec spec_at(const ojson& j, const std::string& path) {
  SurjectionSpec spec;
  const ojson& carrier = field(j, path, "carrier");
  spec.carrier = order_at(carrier, join(path, "carrier"));
  spec.involution = involution_at(carrier, join(path, "carrier"));
  const ojson& target = field(j, path, "target");
  spec.target.order = order_at(target, join(path, "target"));
  spec.target.involution = involution_at(target, join(path, "target"));
  const ojson& rules = field(j, path, "sigma0");
  if (!rules.is_array()) bad(join(path, "sigma0"), "expected an array");
  if (rules.size() != spec.carrier.blocks.size())
    bad(join(path, "sigma0"), "expected one rule per carrier block");
  for (size_t i = 0; i < rules.size(); ++i)
    spec.rules.push_back(rule_at(rules[i], elem(join(path, "sigma0"), i)));
  std::vector<std::string> reasons;
  if (!validate(spec, &reasons)) {
    std::string msg = "invalid surjection";
    for (const std::string& r : reasons) msg += "; " + r;
    bad(path, msg);
  }
  return spec;
}

FinPerm perm_at(const SurjectionSpec& spec, const ojson& j, const std::string& path) {
  const ojson& moves = field(j, path, "moves");
  if (!moves.is_array()) bad(join(path, "moves"), "expected an array");
  std::map<Address, Address> m;
  for (size_t i = 0; i < moves.size(); ++i) {
    const std::string pe = elem(join(path, "moves"), i);
    const ojson& row = moves[i];
    if (!row.is_array() || row.size() != 2) bad(pe, "expected [from, to]");
    m[address_at(row[0], elem(pe, 0))] = address_at(row[1], elem(pe, 1));
  }
  return make_fin_perm(spec.carrier, m);
}

ojson address_json(const Address& a) { return ojson::array({a.block, a.offset}); }

ojson count_json(const ExtendedCount& c) {
  if (c.is_infinite()) return ojson("infinite");
  return ojson{{"finite", c.value()}};
}

ojson perm_json(const FinPerm& w) {
  ojson moves = ojson::array();
  for (const auto& [from, to] : w.moves)
    moves.push_back(ojson::array({address_json(from), address_json(to)}));
  return ojson{{"moves", std::move(moves)}};
}

ojson block_json(const BlockKind& k) {
  switch (k.tag) {
    case BlockTag::fin_chain: return ojson{{"kind", ojson{{"fin", k.length}}}};
    case BlockTag::omega_up: return ojson{{"kind", "omega"}};
    case BlockTag::omega_down: return ojson{{"kind", "omega_rev"}};
    case BlockTag::z_line: return ojson{{"kind", "Z"}};
  }
  return ojson{{"kind", "Z"}};
}

ojson order_json(const OrderSpec& spec, const std::optional<InvolutionSpec>& inv) {
  ojson blocks = ojson::array();
  for (const BlockKind& k : spec.blocks) blocks.push_back(block_json(k));
  ojson out{{"blocks", std::move(blocks)}};
  if (inv) {
    ojson pairing = ojson::array();
    for (const PairingEntry& p : inv->pairing)
      pairing.push_back(ojson::array({p.first, p.second, p.shift}));
    ojson iv{{"pairing", std::move(pairing)}};
    iv["fixed_point"] = inv->fixed_point ? address_json(*inv->fixed_point) : ojson(nullptr);
    iv["type_tag"] = std::string(1, inv->type_tag);
    out["involution"] = std::move(iv);
  } else {
    out["involution"] = nullptr;
  }
  if (!spec.name.empty()) out["name"] = spec.name;
  return out;
}

ojson rule_json(const LabelRule& rule) {
  if (const auto* c = std::get_if<ConstRule>(&rule))
    return ojson{{"rule", "const"}, {"alpha", address_json(c->alpha)}};
  if (const auto* m = std::get_if<MonoRule>(&rule))
    return ojson{{"rule", "mono"}, {"a_block", m->a_block}, {"stride", m->stride},
                 {"base", m->base}};
  if (const auto* p = std::get_if<PeriodicRule>(&rule)) {
    ojson pat = ojson::array();
    for (const Address& a : p->pattern) pat.push_back(address_json(a));
    return ojson{{"rule", "periodic"}, {"pattern", std::move(pat)}};
  }
  ojson labels = ojson::array();
  for (const Address& a : std::get<ListRule>(rule).labels) labels.push_back(address_json(a));
  return ojson{{"rule", "list"}, {"labels", std::move(labels)}};
}

// Stable snake_case error identifiers for the report format.
const char* json_code(Errc c) {
  switch (c) {
    case Errc::invalid_address: return "invalid_address";
    case Errc::not_ordered: return "not_ordered";
    case Errc::carrier_mismatch: return "carrier_mismatch";
    case Errc::equal_addresses: return "equal_addresses";
    case Errc::fixed_point_argument: return "fixed_point_argument";
    case Errc::support_exceeds_truncation: return "support_exceeds_truncation";
    case Errc::unsupported_rule_combination: return "unsupported_rule_combination";
    case Errc::orbit_mismatch: return "orbit_mismatch";
    case Errc::size_mismatch: return "size_mismatch";
    case Errc::not_two_elements: return "not_two_elements";
    case Errc::unsupported_family: return "unsupported_family";
    case Errc::cap_exceeded: return "cap_exceeded";
    case Errc::not_member: return "not_member";
    case Errc::degenerate_flag: return "degenerate_flag";
    case Errc::not_nested: return "not_nested";
    case Errc::trivial_parabolic: return "trivial_parabolic";
    case Errc::unsupported_type: return "unsupported_type";
    case Errc::schema_error: return "schema_error";
    case Errc::internal: return "internal";
  }
  return "internal";
}

const char* exit_bucket_name(int code) {
  switch (code) {
    case 1: return "schema";
    case 2: return "unsupported";
    case 3: return "cap";
  }
  return "ok";
}

int bucket_of(Errc c) {
  switch (c) {
    case Errc::unsupported_rule_combination:
    case Errc::unsupported_family:
    case Errc::unsupported_type:
    case Errc::trivial_parabolic:
      return 2;
    case Errc::cap_exceeded:
      return 3;
    default:
      return 1;
  }
}

// Exit precedence: schema beats unsupported beats cap beats success.
int worse(int a, int b) {
  auto rank = [](int c) {
    switch (c) {
      case 1: return 3;
      case 2: return 2;
      case 3: return 1;
    }
    return 0;
  };
  return rank(a) >= rank(b) ? a : b;
}

ojson smooth_json(const SmoothnessReport& rep) {
  ojson out;
  switch (rep.verdict) {
    case SmoothVerdict::smooth: out["verdict"] = "smooth"; break;
    case SmoothVerdict::singular: out["verdict"] = "singular"; break;
    case SmoothVerdict::inconclusive: out["verdict"] = "inconclusive"; break;
  }
  if (!rep.witness.empty()) {
    ojson w = ojson::array();
    for (const Address& a : rep.witness) w.push_back(address_json(a));
    out["witness"] = std::move(w);
    out["pattern"] = rep.pattern;
  }
  if (rep.radius >= 0) out["radius"] = rep.radius;
  out["reason"] = rep.reason;
  return out;
}

// Inversion statistic of a window labeling; the omega variant counts one
// pair per mirror class with the lower coordinate in the left half.
long long window_inversions(const TargetOrder& target, const std::vector<Address>& lab,
                            bool omega) {
  const int n = static_cast<int>(lab.size());
  long long count = 0;
  for (int k = 0; k < n; ++k) {
    if (omega && 2 * k >= n - 1) continue;
    for (int l = k + 1; l < n; ++l) {
      if (omega && 2 * l >= n - 1 && l < n - 1 - k) continue;
      if (to_pos(target.order, lab[(size_t)l]) < to_pos(target.order, lab[(size_t)k]))
        ++count;
    }
  }
  return count;
}

ExtendedCount window_size(const OrderSpec& spec, long long radius) {
  const long long r = std::max<long long>(radius, 0);
  ExtendedCount total = ExtendedCount::finite(0);
  for (const BlockKind& k : spec.blocks) {
    switch (k.tag) {
      case BlockTag::fin_chain:
        total += ExtendedCount::finite((std::uint64_t)k.length);
        break;
      case BlockTag::omega_up:
      case BlockTag::omega_down:
        total += ExtendedCount::finite((std::uint64_t)r);
        break;
      case BlockTag::z_line:
        total += ExtendedCount::finite((std::uint64_t)(2 * r + 1));
        break;
    }
  }
  return total;
}

constexpr int kDotNodeCap = 10000;
constexpr int kGraphWindowCap = 20;
constexpr long long kTruncateCap = 100000;

struct GraphResult {
  std::string dot;
  long long nodes = 0;
  long long edges = 0;
  bool capped = false;
};

GraphResult interval_graph(const SurjectionSpec& spec, const FinPerm& w, bool omega,
                           long long radius) {
  if (omega && !spec.involution)
    fail(Errc::schema_error, "omega interval graphs need a carrier involution");
  if (window_size(spec.carrier, radius) > ExtendedCount::finite(kGraphWindowCap))
    fail(Errc::cap_exceeded, "interval graphs are limited to truncations of " +
                                 std::to_string(kGraphWindowCap) + " elements");
  const std::vector<Address> window =
      enumerate_truncation(spec.carrier, spec.involution, radius);
  const std::set<Address> inside(window.begin(), window.end());
  CellDescriptor cell =
      omega ? make_omega_cell(spec, make_omega_perm(spec.carrier, *spec.involution, w))
            : make_cell(spec, w);
  for (const Address& e : support(cell.w))
    if (!inside.count(e))
      fail(Errc::support_exceeds_truncation,
           "the permutation moves elements outside the chosen truncation");
  const int n = static_cast<int>(window.size());
  const int center = (n % 2) ? (n - 1) / 2 : -1;

  std::vector<Address> start(window.size());
  for (int i = 0; i < n; ++i) start[(size_t)i] = sigma_eval(cell, window[(size_t)i]);

  std::set<std::vector<Address>> seen{start};
  std::deque<std::vector<Address>> queue{start};
  bool capped = false;
  while (!queue.empty() && !capped) {
    const std::vector<Address> cur = std::move(queue.front());
    queue.pop_front();
    const long long cur_inv = window_inversions(spec.target, cur, omega);
    for (int k = 0; k < n && !capped; ++k)
      for (int l = k + 1; l < n; ++l) {
        if (cur[(size_t)k] == cur[(size_t)l]) continue;
        if (omega && (k == center || l == center)) continue;
        if (omega && k + l > n - 1) continue;  // mirror duplicate of an earlier pair
        std::vector<Address> nxt = cur;
        std::swap(nxt[(size_t)k], nxt[(size_t)l]);
        if (omega) {
          const int mk = n - 1 - k, ml = n - 1 - l;
          if (l != mk) std::swap(nxt[(size_t)ml], nxt[(size_t)mk]);
        }
        if (window_inversions(spec.target, nxt, omega) >= cur_inv) continue;
        if (seen.count(nxt)) continue;
        if (static_cast<int>(seen.size()) >= kDotNodeCap) {
          capped = true;
          break;
        }
        seen.insert(nxt);
        queue.push_back(std::move(nxt));
      }
  }

  std::vector<std::vector<Address>> nodes(seen.begin(), seen.end());
  std::map<std::vector<Address>, int> id;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) id[nodes[(size_t)i]] = i;

  std::ostringstream os;
  os << "digraph bruhat_interval {\n";
  os << "  rankdir=BT;\n";
  if (capped) os << "  // truncated at " << kDotNodeCap << " nodes\n";
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    os << "  n" << i << " [label=\"";
    for (size_t j = 0; j < nodes[(size_t)i].size(); ++j) {
      if (j) os << ' ';
      os << nodes[(size_t)i][j].block << ':' << nodes[(size_t)i][j].offset;
    }
    os << "\\ninv " << window_inversions(spec.target, nodes[(size_t)i], omega) << "\"];\n";
  }
  long long edge_count = 0;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    const std::vector<Address>& base = nodes[(size_t)i];
    const long long inv_i = window_inversions(spec.target, base, omega);
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l) {
        if (base[(size_t)k] == base[(size_t)l]) continue;
        if (omega && (k == center || l == center)) continue;
        if (omega && k + l > n - 1) continue;  // mirror duplicate of an earlier pair
        std::vector<Address> nxt = base;
        std::swap(nxt[(size_t)k], nxt[(size_t)l]);
        if (omega) {
          const int mk = n - 1 - k, ml = n - 1 - l;
          if (l != mk) std::swap(nxt[(size_t)ml], nxt[(size_t)mk]);
        }
        if (window_inversions(spec.target, nxt, omega) != inv_i + 1) continue;
        auto it = id.find(nxt);
        if (it == id.end()) continue;
        os << "  n" << i << " -> n" << it->second << ";\n";
        ++edge_count;
      }
  }
  os << "}\n";
  GraphResult out;
  out.dot = os.str();
  out.nodes = static_cast<long long>(nodes.size());
  out.edges = edge_count;
  out.capped = capped;
  return out;
}

struct QueryContext {
  const SurjectionSpec& spec;
  const RunOptions& opt;
  std::vector<std::pair<std::string, std::string>>* dot_files;
  int dot_serial = 0;
};

long long radius_arg(const ojson& q, const std::string& path, const QueryContext& ctx,
                     long long fallback) {
  if (q.contains("max_radius")) return int_at(q["max_radius"], join(path, "max_radius"));
  if (ctx.opt.max_radius) return *ctx.opt.max_radius;
  return fallback;
}

OmegaPerm omega_perm_of(const SurjectionSpec& spec, FinPerm w, const std::string& path) {
  if (!spec.involution) bad(path, "omega queries need a carrier involution");
  return make_omega_perm(spec.carrier, *spec.involution, std::move(w));
}

ojson run_query(QueryContext& ctx, const ojson& q, const std::string& path) {
  const SurjectionSpec& spec = ctx.spec;
  const std::string kind = string_at(field(q, path, "kind"), join(path, "kind"));
  const bool omega = q.contains("omega") && bool_at(q["omega"], join(path, "omega"));
  ojson out{{"kind", kind}};

  if (kind == "dim") {
    const FinPerm w = perm_at(spec, field(q, path, "w"), join(path, "w"));
    if (omega) {
      const CellDescriptor cell = make_omega_cell(spec, omega_perm_of(spec, w, path));
      out["dim"] = count_json(omega_inversion_number(cell));
    } else {
      out["dim"] = count_json(inversion_number(make_cell(spec, w)));
    }
    return out;
  }
  if (kind == "length") {
    const FinPerm w = perm_at(spec, field(q, path, "w"), join(path, "w"));
    out["length"] = count_json(omega ? length(omega_perm_of(spec, w, path)) : length(w));
    return out;
  }
  if (kind == "leq") {
    const FinPerm u = perm_at(spec, field(q, path, "u"), join(path, "u"));
    const FinPerm v = perm_at(spec, field(q, path, "v"), join(path, "v"));
    if (omega) {
      const CellDescriptor cu = make_omega_cell(spec, omega_perm_of(spec, u, path));
      const CellDescriptor cv = make_omega_cell(spec, omega_perm_of(spec, v, path));
      out["leq"] = omega_bruhat_leq(cu, cv);
    } else {
      out["leq"] = bruhat_leq(make_cell(spec, u), make_cell(spec, v));
    }
    return out;
  }
  if (kind == "criteria") {
    const std::optional<FinPerm> fixed = borel_fixed_point(spec);
    const bool finite = all_cells_finite(spec);
    out["fixed_point"] = fixed ? perm_json(*fixed) : ojson(nullptr);
    out["all_finite"] = finite;
    if (!fixed)
      out["reason"] = "no finite rearrangement makes the labeling nondecreasing";
    else if (finite)
      out["reason"] = "a zero-dimensional cell exists and every open interval is finite";
    else
      out["reason"] =
          "a zero-dimensional cell exists but some cells have infinite dimension";
    return out;
  }
  if (kind == "smooth") {
    const FinPerm w = perm_at(spec, field(q, path, "w"), join(path, "w"));
    const CellDescriptor cell =
        omega ? make_omega_cell(spec, omega_perm_of(spec, w, path)) : make_cell(spec, w);
    const long long radius = radius_arg(q, path, ctx, 12);
    const ojson rep = smooth_json(truncation_scan(cell, radius));
    for (auto it = rep.begin(); it != rep.end(); ++it) out[it.key()] = it.value();
    return out;
  }
  if (kind == "gr2") {
    const ojson& sig = field(q, path, "sigma");
    if (!sig.is_array() || sig.size() != 2)
      bad(join(path, "sigma"), "expected two addresses");
    std::vector<Address> sigma = {address_at(sig[0], elem(join(path, "sigma"), 0)),
                                  address_at(sig[1], elem(join(path, "sigma"), 1))};
    const ojson rep = smooth_json(gr2_smooth(spec.carrier, std::move(sigma)));
    for (auto it = rep.begin(); it != rep.end(); ++it) out[it.key()] = it.value();
    return out;
  }
  if (kind == "flag_pattern") {
    TwoOrderCarrier two;
    two.order_B = spec.carrier;
    two.order_F = order_at(field(q, path, "order_f"), join(path, "order_f"));
    const ojson& fm = field(q, path, "f_map");
    if (!fm.is_array()) bad(join(path, "f_map"), "expected an array");
    for (size_t i = 0; i < fm.size(); ++i) {
      const std::string pe = elem(join(path, "f_map"), i);
      BlockImage img;
      img.to_block =
          static_cast<int>(int_at(field(fm[i], pe, "to_block"), join(pe, "to_block")));
      img.reversed = bool_at(field(fm[i], pe, "reversed"), join(pe, "reversed"));
      img.shift = int_at(field(fm[i], pe, "shift"), join(pe, "shift"));
      two.f_map.push_back(img);
    }
    const FinPerm w = perm_at(spec, field(q, path, "w"), join(path, "w"));
    const ojson rep = smooth_json(maximal_flag_smooth(two, w));
    for (auto it = rep.begin(); it != rep.end(); ++it) out[it.key()] = it.value();
    return out;
  }
  if (kind == "truncate") {
    const long long radius = int_at(field(q, path, "radius"), join(path, "radius"));
    if (window_size(spec.carrier, radius) >
        ExtendedCount::finite((std::uint64_t)kTruncateCap))
      fail(Errc::cap_exceeded, "truncation listings are limited to " +
                                   std::to_string(kTruncateCap) + " elements");
    ojson elems = ojson::array();
    for (const Address& e : enumerate_truncation(spec.carrier, spec.involution, radius))
      elems.push_back(address_json(e));
    out["elements"] = std::move(elems);
    return out;
  }
  if (kind == "graph") {
    const FinPerm w = perm_at(spec, field(q, path, "w"), join(path, "w"));
    const long long radius = int_at(field(q, path, "radius"), join(path, "radius"));
    std::string file = "interval_" + std::to_string(ctx.dot_serial) + ".dot";
    if (q.contains("file")) file = string_at(q["file"], join(path, "file"));
    ++ctx.dot_serial;
    const GraphResult g = interval_graph(spec, w, omega, radius);
    ctx.dot_files->emplace_back(file, g.dot);
    out["file"] = file;
    out["nodes"] = g.nodes;
    out["edges"] = g.edges;
    out["capped"] = g.capped;
    return out;
  }
  bad(join(path, "kind"), "unknown query kind '" + kind + "'");
}

bool smooth_kind(const std::string& kind) {
  return kind == "smooth" || kind == "gr2" || kind == "flag_pattern";
}

std::string timestamp_now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

RunOutcome run_scenario(const std::string& scenario_text, const RunOptions& opt) {
  RunOutcome outcome;
  ojson report{{"version", 1}};
  if (opt.timestamps) report["generated_at"] = timestamp_now();

  ojson doc;
  try {
    doc = ojson::parse(scenario_text);
  } catch (const nlohmann::json::exception& e) {
    report["error"] = ojson{{"code", "schema_error"},
                            {"message", std::string("not valid JSON: ") + e.what()}};
    report["status"] = exit_bucket_name(1);
    outcome.exit_code = 1;
    outcome.report = report.dump(2) + "\n";
    return outcome;
  }

  int exit_code = 0;
  try {
    if (doc.contains("version") && int_at(doc["version"], "version") != 1)
      bad("version", "unsupported scenario version");
    const SurjectionSpec spec = spec_at(doc, "");
    report["scenario"] =
        doc.contains("name") ? string_at(doc["name"], "name") : std::string();

    const ojson& queries = field(doc, "", "queries");
    if (!queries.is_array()) bad("queries", "expected an array");

    QueryContext ctx{spec, opt, &outcome.dot_files, 0};
    ojson results = ojson::array();
    for (size_t i = 0; i < queries.size(); ++i) {
      const std::string path = elem("queries", i);
      std::string kind;
      try {
        kind = string_at(field(queries[i], path, "kind"), join(path, "kind"));
        if (opt.smooth_only && !smooth_kind(kind)) continue;
        results.push_back(run_query(ctx, queries[i], path));
      } catch (const Error& e) {
        ojson err{{"kind", kind}};
        err["error"] = ojson{{"code", json_code(e.code())}, {"message", e.what()}};
        results.push_back(std::move(err));
        exit_code = worse(exit_code, bucket_of(e.code()));
      }
    }
    report["results"] = std::move(results);
  } catch (const Error& e) {
    report["error"] = ojson{{"code", json_code(e.code())}, {"message", e.what()}};
    exit_code = worse(exit_code, bucket_of(e.code()));
  }

  report["status"] = exit_bucket_name(exit_code);
  outcome.exit_code = exit_code;
  outcome.report = report.dump(2) + "\n";
  return outcome;
}

std::string to_json_text(const ExtendedCount& c) { return count_json(c).dump(); }

std::string to_json_text(const FinPerm& w) { return perm_json(w).dump(); }

std::string to_json_text(const oracle::RationalFlag& flag) {
  ojson out = ojson::array();
  for (size_t i = 0; i < flag.labels.size(); ++i) {
    ojson rows = ojson::array();
    for (const auto& row : flag.bases[i]) {
      ojson r = ojson::array();
      for (const auto& v : row)
        r.push_back(ojson::array({boost::multiprecision::numerator(v).str(),
                                  boost::multiprecision::denominator(v).str()}));
      rows.push_back(std::move(r));
    }
    out.push_back(ojson{{"label", address_json(flag.labels[i])}, {"basis", std::move(rows)}});
  }
  return out.dump();
}

SurjectionSpec spec_from_json_text(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::schema_error, std::string("not valid JSON: ") + e.what());
  }
  return spec_at(doc, "");
}

std::string spec_to_json_text(const SurjectionSpec& spec) {
  ojson carrier = order_json(spec.carrier, spec.involution);
  ojson target = order_json(spec.target.order, spec.target.involution);
  ojson rules = ojson::array();
  for (const LabelRule& r : spec.rules) rules.push_back(rule_json(r));
  ojson out{{"carrier", std::move(carrier)}, {"target", std::move(target)},
            {"sigma0", std::move(rules)}};
  return out.dump(2) + "\n";
}

}  // namespace indflag::jsonio
