#include "indflag/smoothness.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace indflag {

namespace {

long long mod_floor(long long a, long long m) {
  const long long r = a % m;
  return r < 0 ? r + (m < 0 ? -m : m) : r;
}

// Image of a block's position set under an affine identification.
PRange image_range(BlockKind k, const BlockImage& img) {
  const PRange r = block_positions(k);
  PRange out;
  if (!img.reversed) {
    if (r.lo) out.lo = img.shift + *r.lo;
    if (r.hi) out.hi = img.shift + *r.hi;
  } else {
    if (r.hi) out.lo = img.shift - *r.hi;
    if (r.lo) out.hi = img.shift - *r.lo;
  }
  return out;
}

bool same_bound(const std::optional<long long>& a, const std::optional<long long>& b) {
  return a.has_value() == b.has_value() && (!a || *a == *b);
}

}  // namespace

bool validate(const TwoOrderCarrier& two, std::vector<std::string>* reasons) {
  bool ok = true;
  auto flag = [&](const std::string& msg) {
    ok = false;
    if (reasons) reasons->push_back(msg);
  };
  if (two.order_B.blocks.empty()) flag("order_B has no blocks");
  if (two.order_F.blocks.empty()) flag("order_F has no blocks");
  if (two.f_map.size() != two.order_B.blocks.size()) {
    flag("f_map must give one image per order_B block");
    return ok;
  }
  std::map<int, std::vector<PRange>> tiles;
  for (size_t k = 0; k < two.f_map.size(); ++k) {
    const BlockImage& img = two.f_map[k];
    if (img.to_block < 0 || img.to_block >= static_cast<int>(two.order_F.blocks.size())) {
      flag("f_map target block out of range");
      return ok;
    }
    const PRange r = image_range(two.order_B.blocks[k], img);
    const PRange host = block_positions(two.order_F.blocks[img.to_block]);
    if ((r.lo && !host.contains(*r.lo)) || (r.hi && !host.contains(*r.hi)) ||
        (!r.lo && host.lo) || (!r.hi && host.hi))
      flag("block image leaves its order_F block");
    tiles[img.to_block].push_back(r);
  }
  if (!ok) return ok;
  for (int t = 0; t < static_cast<int>(two.order_F.blocks.size()); ++t) {
    auto it = tiles.find(t);
    if (it == tiles.end()) {
      flag("order_F block not covered by any image");
      continue;
    }
    std::vector<PRange>& rs = it->second;
    std::sort(rs.begin(), rs.end(), [](const PRange& a, const PRange& b) {
      if (a.lo.has_value() != b.lo.has_value()) return !a.lo.has_value();
      if (!a.lo) return false;
      return *a.lo < *b.lo;
    });
    const PRange host = block_positions(two.order_F.blocks[t]);
    if (!same_bound(rs.front().lo, host.lo)) flag("images do not reach the block bottom");
    for (size_t i = 0; i + 1 < rs.size(); ++i) {
      if (!rs[i].hi || !rs[i + 1].lo || *rs[i].hi + 1 != *rs[i + 1].lo)
        flag("images overlap or leave a gap");
    }
    if (!same_bound(rs.back().hi, host.hi)) flag("images do not reach the block top");
  }
  return ok;
}

Pos f_pos(const TwoOrderCarrier& two, Address e) {
  check_address(two.order_B, e);
  const Pos p = to_pos(two.order_B, e);
  const BlockImage& img = two.f_map[p.block];
  return Pos{img.to_block, img.reversed ? img.shift - p.p : img.shift + p.p};
}

namespace {

// One window element: carrier address with its two order positions.
struct FItem {
  Address addr;
  Pos b;
  Pos f;
};

// First quadruple (ascending in order_B) realizing a forbidden pattern.
// items must be sorted by b.
struct PatternHit {
  std::array<int, 4> idx;
  const char* name;
};

std::optional<PatternHit> pattern_scan(const std::vector<FItem>& v) {
  const int n = static_cast<int>(v.size());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        // Both patterns put sigma(e3) below sigma(e1).
        if (!(v[c].f < v[a].f)) continue;
        for (int d = c + 1; d < n; ++d) {
          if (v[c].f < v[d].f && v[d].f < v[a].f && v[a].f < v[b].f)
            return PatternHit{{a, b, c, d}, "3412"};
          if (v[d].f < v[b].f && v[b].f < v[c].f)
            return PatternHit{{a, b, c, d}, "4231"};
        }
      }
  return std::nullopt;
}

// Background structure of one carrier block: F-position affine in the order
// position. Window candidates are taken near every cut (support positions
// and the points where the affine image crosses an explicit F-value) and
// near the block ends; within the remaining stretches the relative order of
// any tuple is constant, so three representatives per stretch, which the
// cuts' neighbourhoods already provide, witness every pattern that uses the
// stretch.
struct AffineBlock {
  int f_block = 0;
  bool reversed = false;
  long long shift = 0;
};

constexpr int kWindowCap = 220;

std::optional<std::vector<FItem>> build_window(
    const OrderSpec& border, const std::vector<AffineBlock>& affine,
    const std::vector<Address>& explicit_addrs,
    const std::function<Pos(Address)>& fvalue) {
  std::vector<Pos> explicit_f;
  explicit_f.reserve(explicit_addrs.size());
  for (const Address& e : explicit_addrs) explicit_f.push_back(fvalue(e));
  std::set<Address> out(explicit_addrs.begin(), explicit_addrs.end());
  for (int k = 0; k < static_cast<int>(border.blocks.size()); ++k) {
    const PRange r = block_positions(border.blocks[k]);
    std::set<long long> cand;
    auto add_around = [&](long long c) {
      for (long long d = -2; d <= 2; ++d)
        if (r.contains(c + d)) cand.insert(c + d);
    };
    for (const Address& e : explicit_addrs)
      if (e.block == k) add_around(to_pos(border, e).p);
    const AffineBlock& ab = affine[k];
    for (const Pos& fv : explicit_f)
      if (fv.block == ab.f_block)
        add_around(ab.reversed ? ab.shift - fv.p : fv.p - ab.shift);
    if (r.lo)
      for (long long d = 0; d < 3; ++d)
        if (r.contains(*r.lo + d)) cand.insert(*r.lo + d);
    if (r.hi)
      for (long long d = 0; d < 3; ++d)
        if (r.contains(*r.hi - d)) cand.insert(*r.hi - d);
    if (!r.lo && !r.hi)
      for (long long p = -1; p <= 1; ++p) cand.insert(p);
    for (long long p : cand) out.insert(to_address(border, Pos{k, p}));
  }
  if (static_cast<int>(out.size()) > kWindowCap) return std::nullopt;
  std::vector<FItem> items;
  items.reserve(out.size());
  for (const Address& e : out) items.push_back({e, to_pos(border, e), fvalue(e)});
  std::sort(items.begin(), items.end(),
            [](const FItem& a, const FItem& b) { return a.b < b.b; });
  return items;
}

SmoothnessReport singular_report(const std::vector<FItem>& items, const PatternHit& hit,
                                 long long radius) {
  SmoothnessReport rep;
  rep.verdict = SmoothVerdict::singular;
  for (int i : hit.idx) rep.witness.push_back(items[i].addr);
  rep.pattern = hit.name;
  rep.radius = radius;
  rep.reason = "quadruple realizes the forbidden pattern";
  return rep;
}

}  // namespace

SmoothnessReport maximal_flag_smooth(const TwoOrderCarrier& two, const FinPerm& sigma) {
  std::vector<std::string> reasons;
  if (!validate(two, &reasons)) {
    std::ostringstream os;
    os << "invalid two-order carrier";
    for (const std::string& r : reasons) os << "; " << r;
    fail(Errc::schema_error, os.str());
  }
  if (!(sigma.carrier == two.order_B))
    fail(Errc::carrier_mismatch, "sigma must permute the order_B carrier");

  std::vector<AffineBlock> affine;
  for (const BlockImage& img : two.f_map)
    affine.push_back({img.to_block, img.reversed, img.shift});
  auto fvalue = [&](Address e) { return f_pos(two, apply(sigma, e)); };
  auto window = build_window(two.order_B, affine, support(sigma), fvalue);
  if (!window) {
    SmoothnessReport rep;
    rep.reason = "support too large for the pattern window";
    return rep;
  }
  if (auto hit = pattern_scan(*window)) return singular_report(*window, *hit, -1);
  SmoothnessReport rep;
  if (embeds_in_Z(two.order_B) || embeds_in_Z(two.order_F)) {
    rep.verdict = SmoothVerdict::smooth;
    rep.reason = "no forbidden pattern in the structured window";
  } else {
    rep.reason = "neither order embeds into the integers";
  }
  return rep;
}

SmoothnessReport gr2_smooth(const OrderSpec& border, std::vector<Address> sigma) {
  if (sigma.size() != 2)
    fail(Errc::not_two_elements, "the two-row criterion needs exactly two addresses");
  for (const Address& e : sigma) check_address(border, e);
  if (to_pos(border, sigma[1]) < to_pos(border, sigma[0]))
    std::swap(sigma[0], sigma[1]);
  if (sigma[0] == sigma[1])
    fail(Errc::not_two_elements, "the two selected elements must be distinct");

  SmoothnessReport rep;
  const auto least = min_element(border);
  const bool at_bottom = least.has_value() && *least == sigma[0];
  const bool adjacent =
      interval_cardinality(border, sigma[0], sigma[1]) == ExtendedCount::finite(0);
  if (at_bottom || adjacent) {
    rep.verdict = SmoothVerdict::smooth;
    rep.reason = at_bottom ? "the lower selected element is the least element"
                           : "the selected elements are adjacent";
  } else {
    rep.verdict = SmoothVerdict::singular;
    rep.reason = "an isolated selected pair sits above unselected elements";
  }
  return rep;
}

namespace {

// Injectivity of the base labeling, decided on the rule grammar. Each rule
// claims a set of label positions; the labeling is injective when every
// claim is injective and the claims are pairwise disjoint.
struct ProgressionClaim {
  int t = 0;
  long long step = 1;  // |stride|
  long long residue = 0;
  PRange range;
};

long long egcd(long long a, long long b, long long& x, long long& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  long long x1 = 0, y1 = 0;
  const long long g = egcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

bool progressions_meet(const ProgressionClaim& a, const ProgressionClaim& b) {
  if (a.t != b.t) return false;
  const PRange common = intersect(a.range, b.range);
  if (common.is_empty()) return false;
  long long x = 0, y = 0;
  const long long g = egcd(a.step, b.step, x, y);
  if (mod_floor(b.residue - a.residue, g) != 0) return false;
  // One solution of the congruence pair: from a.step*x + b.step*y = g,
  // (a.step/g)*x is 1 mod b.step/g, so stepping a.step times the reduced
  // multiplier lands on b's residue class.
  const long long m2g = b.step / g;
  const long long l = a.step / g * b.step;
  const long long t = mod_floor((b.residue - a.residue) / g % m2g * x, m2g);
  const long long x0 = mod_floor(a.residue + a.step * t, l);
  if (!common.lo) return true;  // solutions extend down without bound
  const long long first = *common.lo + mod_floor(x0 - *common.lo, l);
  return !common.hi || first <= *common.hi;
}

bool position_in(const ProgressionClaim& c, Pos q) {
  return q.block == c.t && c.range.contains(q.p) &&
         mod_floor(q.p - c.residue, c.step) == 0;
}

bool is_injective_labeling(const SurjectionSpec& spec) {
  std::vector<Pos> singles;
  std::vector<ProgressionClaim> progs;
  for (size_t k = 0; k < spec.rules.size(); ++k) {
    const BlockKind block = spec.carrier.blocks[k];
    const ExtendedCount card = block_cardinality(block);
    if (const auto* c = std::get_if<ConstRule>(&spec.rules[k])) {
      if (!(card == ExtendedCount::finite(1))) return false;
      singles.push_back(to_pos(spec.target.order, c->alpha));
    } else if (const auto* l = std::get_if<ListRule>(&spec.rules[k])) {
      for (const Address& a : l->labels)
        singles.push_back(to_pos(spec.target.order, a));
    } else if (std::get_if<PeriodicRule>(&spec.rules[k])) {
      return false;  // infinite blocks only, so some fiber repeats
    } else if (const auto* m = std::get_if<MonoRule>(&spec.rules[k])) {
      if (m->stride == 0) {
        if (!(card == ExtendedCount::finite(1))) return false;
        singles.push_back(Pos{m->a_block, m->base});
        continue;
      }
      ProgressionClaim pc;
      pc.t = m->a_block;
      pc.step = m->stride < 0 ? -m->stride : m->stride;
      pc.residue = mod_floor(m->base, pc.step);
      const PRange r = block_positions(block);
      PRange img;
      if (m->stride > 0) {
        if (r.lo) img.lo = m->stride * *r.lo + m->base;
        if (r.hi) img.hi = m->stride * *r.hi + m->base;
      } else {
        if (r.hi) img.lo = m->stride * *r.hi + m->base;
        if (r.lo) img.hi = m->stride * *r.lo + m->base;
      }
      pc.range = img;
      progs.push_back(pc);
    }
  }
  std::sort(singles.begin(), singles.end());
  if (std::adjacent_find(singles.begin(), singles.end()) != singles.end()) return false;
  for (const Pos& q : singles)
    for (const ProgressionClaim& pc : progs)
      if (position_in(pc, q)) return false;
  for (size_t i = 0; i < progs.size(); ++i)
    for (size_t j = i + 1; j < progs.size(); ++j)
      if (progressions_meet(progs[i], progs[j])) return false;
  return true;
}

// Selected positions inside one truncation window, tested against the
// classical two-row shape: an initial prefix of the window plus at most one
// consecutive run.
bool window_two_label_smooth(const std::vector<int>& sel) {
  size_t i = 0;
  while (i < sel.size() && sel[i] == static_cast<int>(i)) ++i;
  for (size_t j = i + 1; j < sel.size(); ++j)
    if (sel[j] != sel[j - 1] + 1) return false;
  return true;
}

// The smallest truncation radius whose window contains the address.
long long enclosing_radius(const OrderSpec& spec, Address e) {
  const BlockKind k = spec.blocks[e.block];
  switch (k.tag) {
    case BlockTag::fin_chain:
      return 1;
    case BlockTag::omega_up:
    case BlockTag::omega_down:
      return e.offset + 1;
    case BlockTag::z_line: {
      const Pos p = to_pos(spec, e);
      return std::max(1LL, p.p >= 0 ? p.p : -p.p);
    }
  }
  return 1;
}

// A maximal run of the selected set, possibly spanning adjacent blocks.
// A missing bound means the run is unbounded at that side of its block.
struct Run {
  int start_block = 0;
  std::optional<long long> start;
  int end_block = 0;
  std::optional<long long> end;
};

struct RunList {
  bool certifiable = true;
  std::vector<Run> runs;
};

void push_run(RunList& rl, const OrderSpec& border, int block, PRange r) {
  if (r.is_empty()) return;
  if (!rl.runs.empty()) {
    Run& prev = rl.runs.back();
    if (prev.end_block == block && prev.end && r.lo && *prev.end + 1 == *r.lo) {
      prev.end = r.hi;
      return;
    }
    // Across a block boundary the order is consecutive exactly when the
    // earlier run fills its block to the top and the later one starts at
    // its block bottom.
    if (block == prev.end_block + 1 &&
        same_bound(prev.end, block_positions(border.blocks[prev.end_block]).hi) &&
        same_bound(r.lo, block_positions(border.blocks[block]).lo)) {
      prev.end_block = block;
      prev.end = r.hi;
      return;
    }
  }
  rl.runs.push_back({block, r.lo, block, r.hi});
}

// The element after the end bound of a run, when one exists. A missing end
// covers the whole top of end_block, so the candidate is the next block's
// least element; a block unbounded below has none.
std::optional<Pos> after_end(const OrderSpec& spec, int end_block,
                             std::optional<long long> end) {
  if (end && block_positions(spec.blocks[end_block]).contains(*end + 1))
    return Pos{end_block, *end + 1};
  const int b = end_block + 1;
  if (b >= static_cast<int>(spec.blocks.size())) return std::nullopt;
  const PRange r = block_positions(spec.blocks[b]);
  if (!r.lo) return std::nullopt;
  return Pos{b, *r.lo};
}

// Largest element strictly below q, as a run end bound (block, optional p).
// Caller guarantees one exists. A missing p means the previous block's
// unbounded top.
std::pair<int, std::optional<long long>> edge_below(const OrderSpec& spec, Pos q) {
  if (block_positions(spec.blocks[q.block]).contains(q.p - 1))
    return {q.block, q.p - 1};
  return {q.block - 1, block_positions(spec.blocks[q.block - 1]).hi};
}

// Least element strictly above q, as a run start bound.
std::pair<int, std::optional<long long>> edge_above(const OrderSpec& spec, Pos q) {
  if (block_positions(spec.blocks[q.block]).contains(q.p + 1))
    return {q.block, q.p + 1};
  return {q.block + 1, block_positions(spec.blocks[q.block + 1]).lo};
}

bool run_contains(const Run& r, Pos q) {
  if (q.block < r.start_block || q.block > r.end_block) return false;
  if (q.block == r.start_block && r.start && q.p < *r.start) return false;
  if (q.block == r.end_block && r.end && q.p > *r.end) return false;
  return true;
}

// Flip the selection status of one position inside a canonical run list.
void apply_edit(std::vector<Run>& runs, const OrderSpec& spec, Pos q, bool select) {
  size_t i = 0;
  while (i < runs.size() && !run_contains(runs[i], q) &&
         (runs[i].start_block < q.block ||
          (runs[i].start_block == q.block && (!runs[i].start || *runs[i].start < q.p))))
    ++i;
  const bool inside = i < runs.size() && run_contains(runs[i], q);
  if (!select) {
    if (!inside) return;
    Run r = runs[i];
    runs.erase(runs.begin() + i);
    const bool is_start =
        r.start && r.start_block == q.block && *r.start == q.p;
    const bool is_end = r.end && r.end_block == q.block && *r.end == q.p;
    if (!is_end) {
      const auto [sb, sp] = edge_above(spec, q);
      runs.insert(runs.begin() + i, Run{sb, sp, r.end_block, r.end});
    }
    if (!is_start) {
      const auto [eb, ep] = edge_below(spec, q);
      runs.insert(runs.begin() + i, Run{r.start_block, r.start, eb, ep});
    }
    return;
  }
  if (inside) return;
  Run piece{q.block, q.p, q.block, q.p};
  if (i < runs.size()) {
    const Run& next = runs[i];
    const std::optional<Pos> up = after_end(spec, q.block, q.p);
    if (up && next.start && Pos{next.start_block, *next.start} == *up) {
      piece.end_block = next.end_block;
      piece.end = next.end;
      runs.erase(runs.begin() + i);
    }
  }
  if (i > 0) {
    const Run& prev = runs[i - 1];
    const std::optional<Pos> up = after_end(spec, prev.end_block, prev.end);
    if (up && *up == q) {
      piece.start_block = prev.start_block;
      piece.start = prev.start;
      runs.erase(runs.begin() + (i - 1));
      --i;
    }
  }
  runs.insert(runs.begin() + i, piece);
}

RunList selected_runs(const CellDescriptor& cell, Pos low_label) {
  RunList rl;
  const SurjectionSpec& base = cell.base;
  // Structural pass over the base labeling; the permutation's finitely many
  // displacements are spliced in afterwards as point edits.
  for (int k = 0; k < static_cast<int>(base.carrier.blocks.size()); ++k) {
    const BlockKind block = base.carrier.blocks[k];
    const PRange all = block_positions(block);
    std::vector<PRange> bruns;
    const LabelRule& rule = base.rules[k];
    if (block.tag == BlockTag::fin_chain) {
      std::optional<long long> start;
      for (long long p = *all.lo; p <= *all.hi; ++p) {
        const Address e = to_address(base.carrier, Pos{k, p});
        const bool sel =
            to_pos(base.target.order, sigma0_eval(base, e)) == low_label;
        if (sel && !start) start = p;
        if (!sel && start) {
          bruns.push_back(PRange::closed(*start, p - 1));
          start.reset();
        }
      }
      if (start) bruns.push_back(PRange::closed(*start, *all.hi));
    } else if (const auto* c = std::get_if<ConstRule>(&rule)) {
      if (to_pos(base.target.order, c->alpha) == low_label) bruns.push_back(all);
    } else if (const auto* p = std::get_if<PeriodicRule>(&rule)) {
      bool any = false, every = true;
      for (const Address& a : p->pattern) {
        const bool sel = to_pos(base.target.order, a) == low_label;
        any = any || sel;
        every = every && sel;
      }
      if (every)
        bruns.push_back(all);
      else if (any) {
        rl.certifiable = false;
        return rl;
      }
    } else if (const auto* m = std::get_if<MonoRule>(&rule)) {
      if (m->stride == 0) {
        if (Pos{m->a_block, m->base} == low_label) bruns.push_back(all);
      } else {
        rl.certifiable = false;
        return rl;
      }
    } else {
      rl.certifiable = false;
      return rl;
    }
    for (const PRange& r : bruns) push_run(rl, base.carrier, k, r);
  }
  for (const Address& e : support(cell.w)) {
    const bool now =
        to_pos(base.target.order, sigma_eval(cell, e)) == low_label;
    const bool was =
        to_pos(base.target.order, sigma0_eval(base, e)) == low_label;
    if (now != was) apply_edit(rl.runs, base.carrier, to_pos(base.carrier, e), now);
  }
  return rl;
}

bool run_touches_bottom(const OrderSpec& border, const Run& run) {
  return run.start_block == 0 &&
         same_bound(run.start, block_positions(border.blocks[0]).lo);
}

SmoothnessReport inconclusive(std::string reason, long long radius = -1) {
  SmoothnessReport rep;
  rep.reason = std::move(reason);
  rep.radius = radius;
  return rep;
}

}  // namespace

SmoothnessReport truncation_scan(const CellDescriptor& cell, long long max_radius) {
  const SurjectionSpec& base = cell.base;
  ExtendedCount label_count = ExtendedCount::finite(0);
  for (const BlockKind& k : base.target.order.blocks)
    label_count = label_count + block_cardinality(k);
  const bool two_label = label_count == ExtendedCount::finite(2);
  const bool flag_family = !two_label && is_injective_labeling(base);
  if (!two_label && !flag_family)
    fail(Errc::unsupported_family,
         "the scan covers injective labelings and two-label specs only");

  const bool hyp = two_label
                       ? embeds_in_Z(base.carrier)
                       : embeds_in_Z(base.carrier) || embeds_in_Z(base.target.order);

  if (flag_family) {
    // Structural window first: exact on affine backgrounds.
    long long finite_total = 0;
    bool affine_ok = true;
    std::vector<AffineBlock> affine(base.carrier.blocks.size());
    std::vector<Address> explicit_addrs = support(cell.w);
    for (int k = 0; k < static_cast<int>(base.carrier.blocks.size()); ++k) {
      const BlockKind block = base.carrier.blocks[k];
      if (block.tag == BlockTag::fin_chain) {
        finite_total += block.length;
        const PRange all = block_positions(block);
        for (long long p = *all.lo; p <= *all.hi; ++p)
          explicit_addrs.push_back(to_address(base.carrier, Pos{k, p}));
        affine[k] = {0, false, 0};  // unused: every element is explicit
        continue;
      }
      const auto* m = std::get_if<MonoRule>(&base.rules[k]);
      if (!m || (m->stride != 1 && m->stride != -1)) {
        affine_ok = false;
        break;
      }
      affine[k] = {m->a_block, m->stride < 0, m->base};
    }
    if (affine_ok && finite_total <= 200) {
      std::sort(explicit_addrs.begin(), explicit_addrs.end());
      explicit_addrs.erase(std::unique(explicit_addrs.begin(), explicit_addrs.end()),
                           explicit_addrs.end());
      auto fvalue = [&](Address e) {
        return to_pos(base.target.order, sigma_eval(cell, e));
      };
      auto window = build_window(base.carrier, affine, explicit_addrs, fvalue);
      if (window) {
        if (auto hit = pattern_scan(*window)) {
          long long r0 = 1;
          for (int i : hit->idx)
            r0 = std::max(r0, enclosing_radius(base.carrier, (*window)[i].addr));
          const std::vector<Address> win =
              enumerate_truncation(base.carrier, base.involution, r0);
          if (win.size() <= 600) {
            std::vector<FItem> items;
            items.reserve(win.size());
            for (const Address& e : win)
              items.push_back({e, to_pos(base.carrier, e), fvalue(e)});
            if (!pattern_scan(items))
              fail(Errc::internal, "witness radius misses its own pattern");
          }
          return singular_report(*window, *hit, r0);
        }
        if (hyp) {
          SmoothnessReport rep;
          rep.verdict = SmoothVerdict::smooth;
          rep.radius = max_radius;
          rep.reason = "no forbidden pattern in the structured window";
          return rep;
        }
        return inconclusive("neither order embeds into the integers");
      }
    }
    // Fall back to plain truncation sweeps.
    for (long long r = 1; r <= max_radius; ++r) {
      const std::vector<Address> win =
          enumerate_truncation(base.carrier, base.involution, r);
      if (win.size() > 260) break;
      std::vector<FItem> items;
      items.reserve(win.size());
      for (const Address& e : win)
        items.push_back({e, to_pos(base.carrier, e),
                         to_pos(base.target.order, sigma_eval(cell, e))});
      if (auto hit = pattern_scan(items)) return singular_report(items, *hit, r);
    }
    return inconclusive("no certificate within the radius budget", max_radius);
  }

  // Two labels: the lower one marks the selected set.
  const Pos low_label =
      to_pos(base.target.order, *min_element(base.target.order));

  const RunList rl = selected_runs(cell, low_label);
  if (rl.certifiable) {
    const bool shape_smooth =
        rl.runs.size() == 1 ||
        (rl.runs.size() == 2 && run_touches_bottom(base.carrier, rl.runs.front()));
    if (shape_smooth) {
      if (!hyp) return inconclusive("the carrier does not embed into the integers");
      SmoothnessReport rep;
      rep.verdict = SmoothVerdict::smooth;
      rep.radius = max_radius;
      rep.reason = rl.runs.size() == 1
                       ? "the selected set is a single run"
                       : "the selected set is an initial segment plus one run";
      return rep;
    }
  }
  for (long long r = 1; r <= max_radius; ++r) {
    const std::vector<Address> win =
        enumerate_truncation(base.carrier, base.involution, r);
    std::vector<int> sel;
    for (int i = 0; i < static_cast<int>(win.size()); ++i)
      if (to_pos(base.target.order, sigma_eval(cell, win[i])) == low_label)
        sel.push_back(i);
    if (!window_two_label_smooth(sel)) {
      SmoothnessReport rep;
      rep.verdict = SmoothVerdict::singular;
      rep.radius = r;
      rep.reason = "a truncation violates the two-row shape; singular persists upward";
      return rep;
    }
  }
  return inconclusive("no certificate within the radius budget", max_radius);
}

}  // namespace indflag
