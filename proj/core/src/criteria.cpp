#include "indflag/criteria.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <vector>

namespace indflag {

namespace {

// Eventual label behaviour of one infinite carrier end. A constant end
// repeats a single label forever; a ramp end follows a strictly increasing
// rule whose labels are coinitial (side -1) or cofinal (side +1) in one
// target block. Each behaviour occupies a cut of the label chain, ordered
//   coinitial(t) < positions of t < cofinal(t) < coinitial(t+1) < ...
struct TailInfo {
  int side = 0;  // -1 coinitial ramp, 0 constant, +1 cofinal ramp
  int t = 0;
  long long stride = 1;
  long long base = 0;
  Pos label;  // constant ends only
};

int cut_block(const TailInfo& a) { return a.side == 0 ? a.label.block : a.t; }

int cut_compare(const TailInfo& a, const TailInfo& b) {
  if (cut_block(a) != cut_block(b)) return cut_block(a) < cut_block(b) ? -1 : 1;
  if (a.side != b.side) return a.side < b.side ? -1 : 1;
  if (a.side == 0 && a.label.p != b.label.p) return a.label.p < b.label.p ? -1 : 1;
  return 0;
}

struct TailScan {
  bool absent = false;            // an end already forces infinitely many descents
  std::vector<TailInfo> tails;    // carrier order, lower end before upper end
  std::vector<Pos> finite_labels; // label positions reachable from finite blocks
  long long finite_count = 0;     // number of finite-block elements
};

TailInfo const_tail(const TargetOrder& target, Address alpha) {
  TailInfo t;
  t.side = 0;
  t.label = to_pos(target.order, alpha);
  return t;
}

TailScan scan_tails(const SurjectionSpec& spec) {
  TailScan out;
  for (int b = 0; b < static_cast<int>(spec.carrier.blocks.size()); ++b) {
    const BlockKind k = spec.carrier.blocks[b];
    const LabelRule& rule = spec.rules[b];
    if (k.tag == BlockTag::fin_chain) {
      out.finite_count += k.length;
      if (const auto* c = std::get_if<ConstRule>(&rule)) {
        out.finite_labels.push_back(to_pos(spec.target.order, c->alpha));
      } else if (const auto* l = std::get_if<ListRule>(&rule)) {
        for (const Address& a : l->labels)
          out.finite_labels.push_back(to_pos(spec.target.order, a));
      } else if (const auto* m = std::get_if<MonoRule>(&rule)) {
        // Only the extreme labels matter for depth estimates.
        out.finite_labels.push_back(Pos{m->a_block, m->base});
        out.finite_labels.push_back(Pos{m->a_block, m->stride * (k.length - 1) + m->base});
      } else if (const auto* p = std::get_if<PeriodicRule>(&rule)) {
        for (const Address& a : p->pattern)
          out.finite_labels.push_back(to_pos(spec.target.order, a));
      }
      continue;
    }
    const bool lower = k.tag == BlockTag::omega_down || k.tag == BlockTag::z_line;
    const bool upper = k.tag == BlockTag::omega_up || k.tag == BlockTag::z_line;
    std::optional<TailInfo> lower_tail, upper_tail;
    if (const auto* c = std::get_if<ConstRule>(&rule)) {
      TailInfo t = const_tail(spec.target, c->alpha);
      if (lower) lower_tail = t;
      if (upper) upper_tail = t;
    } else if (const auto* p = std::get_if<PeriodicRule>(&rule)) {
      bool constant = true;
      for (const Address& a : p->pattern) constant = constant && a == p->pattern.front();
      if (!constant) {
        // Distinct labels recur at every scale: no finite rearrangement can
        // remove the descents between consecutive periods.
        out.absent = true;
        return out;
      }
      TailInfo t = const_tail(spec.target, p->pattern.front());
      if (lower) lower_tail = t;
      if (upper) upper_tail = t;
    } else if (const auto* m = std::get_if<MonoRule>(&rule)) {
      if (m->stride < 0) {
        // Labels strictly decrease along an infinite block.
        out.absent = true;
        return out;
      }
      if (m->stride == 0) {
        TailInfo t;
        t.side = 0;
        t.label = Pos{m->a_block, m->base};
        if (lower) lower_tail = t;
        if (upper) upper_tail = t;
      } else {
        TailInfo t;
        t.t = m->a_block;
        t.stride = m->stride;
        t.base = m->base;
        if (lower) {
          t.side = -1;
          lower_tail = t;
        }
        if (upper) {
          t.side = +1;
          upper_tail = t;
        }
      }
    } else {
      fail(Errc::internal, "list rule on an infinite block survived validation");
    }
    if (lower_tail) out.tails.push_back(*lower_tail);
    if (upper_tail) out.tails.push_back(*upper_tail);
  }
  return out;
}

// Whether the cut sequence of the infinite ends is strictly compatible with
// the carrier order. Equal cuts are fine for constant ends (same label twice)
// but fatal for ramps: two ends cofinal in the same target block interleave
// at every scale.
bool cuts_compatible(const std::vector<TailInfo>& tails) {
  for (size_t i = 0; i + 1 < tails.size(); ++i) {
    const int c = cut_compare(tails[i], tails[i + 1]);
    if (c > 0) return false;
    if (c == 0 && !(tails[i].side == 0 && tails[i + 1].side == 0)) return false;
  }
  return true;
}

// How deep a repair can reach into the infinite ends: a foreign label lands
// inside a ramp at the depth where the ramp passes it; everything else is
// bounded by the number of finite-block elements.
long long repair_radius(const TailScan& scan) {
  long long depth = 0;
  auto bump = [&depth](long long q, long long base, long long stride) {
    const long long span = q >= base ? q - base : base - q;
    depth = std::max(depth, span / std::max<long long>(1, stride) + 2);
  };
  for (const TailInfo& r : scan.tails) {
    if (r.side == 0) continue;
    for (const Pos& lp : scan.finite_labels)
      if (lp.block == r.t) bump(lp.p, r.base, r.stride);
    for (const TailInfo& c : scan.tails)
      if (c.side == 0 && c.label.block == r.t) bump(c.label.p, r.base, r.stride);
    for (const TailInfo& s : scan.tails)
      if (s.side != 0 && &s != &r && s.t == r.t)
        bump(s.base, r.base, std::min(s.stride, r.stride));
  }
  const long long ends = static_cast<long long>(scan.tails.size());
  return depth * (ends + 1) + scan.finite_count + 4;
}

// Sorts the labeling inside the radius-truncation and verifies the result
// globally. The nondecreasing arrangement of a label multiset on a finite
// chain is unique, so whenever some finite-support rearrangement sorts the
// labeling and the window covers it, this candidate is that arrangement.
std::optional<FinPerm> sorted_window_candidate(const SurjectionSpec& spec, long long radius) {
  const std::vector<Address> window =
      enumerate_truncation(spec.carrier, spec.involution, radius);
  const int n = static_cast<int>(window.size());
  std::vector<Pos> lab(n);
  for (int i = 0; i < n; ++i)
    lab[i] = to_pos(spec.target.order, sigma0_eval(spec, window[i]));
  std::vector<int> ord(n);
  std::iota(ord.begin(), ord.end(), 0);
  // Stability keeps each fiber in carrier order, which makes the matching
  // mirror-equivariant for equivariant specs.
  std::stable_sort(ord.begin(), ord.end(),
                   [&lab](int a, int b) { return lab[a] < lab[b]; });
  std::map<Address, Address> moves;
  for (int i = 0; i < n; ++i)
    if (ord[i] != i) moves[window[ord[i]]] = window[i];
  CellDescriptor cell = make_cell(spec, make_fin_perm(spec.carrier, moves));
  if (inversion_number(cell) != ExtendedCount::finite(0)) return std::nullopt;
  // The cell is radius-independent, so normalize the answer through it.
  return canonical_representative(cell);
}

constexpr long long kMaxRepairRadius = 4000;
constexpr long long kMaxWindowSize = 20000;

}  // namespace

std::optional<FinPerm> borel_fixed_point(const SurjectionSpec& spec) {
  std::vector<std::string> reasons;
  if (!validate(spec, &reasons)) {
    std::ostringstream os;
    os << "invalid surjection spec";
    for (const std::string& r : reasons) os << "; " << r;
    fail(Errc::schema_error, os.str());
  }
  // Already nondecreasing: the base point itself is the fixed point.
  const FinPerm id = identity_perm(spec.carrier);
  if (inversion_number(make_cell(spec, id)) == ExtendedCount::finite(0)) return id;

  const TailScan scan = scan_tails(spec);
  if (scan.absent) return std::nullopt;
  if (!cuts_compatible(scan.tails)) return std::nullopt;

  const long long rstar = repair_radius(scan);
  const long long ends = static_cast<long long>(scan.tails.size());
  if (rstar > kMaxRepairRadius ||
      scan.finite_count + ends * (rstar + 3) > kMaxWindowSize)
    fail(Errc::cap_exceeded, "fixed point search window exceeds the size cap");
  // The computed radius already covers any repair; the spare attempts guard
  // the estimate.
  for (long long extra = 0; extra < 4; ++extra)
    if (auto w = sorted_window_candidate(spec, rstar + extra)) return w;
  return std::nullopt;
}

bool exists_finite_dimensional_cell(const SurjectionSpec& spec) {
  return borel_fixed_point(spec).has_value();
}

bool all_cells_finite(const SurjectionSpec& spec) {
  ExtendedCount labels = ExtendedCount::finite(0);
  for (const BlockKind& k : spec.target.order.blocks)
    labels = labels + block_cardinality(k);
  if (labels == ExtendedCount::finite(1))
    fail(Errc::trivial_parabolic,
         "the dichotomy needs a proper parabolic: the label chain has one element");
  if (!borel_fixed_point(spec)) return false;
  return embeds_in_Z(spec.carrier);
}

bool is_flag(const TargetOrder& target) { return embeds_in_Z(target.order); }

}  // namespace indflag
