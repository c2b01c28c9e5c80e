#include "counting.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace indflag::counting {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr long long kLLMin = std::numeric_limits<long long>::min();
constexpr long long kLLMax = std::numeric_limits<long long>::max();
constexpr i128 kU64Max = std::numeric_limits<std::uint64_t>::max();

i128 floor_div128(i128 a, i128 b) {
  i128 q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
i128 ceil_div128(i128 a, i128 b) { return -floor_div128(-a, b); }

// sum_{i=0}^{n-1} floor((a*i + b) / c) with a, b >= 0, c > 0. Every partial
// quantity is bounded by the final sum, so u128 suffices whenever the true
// sum does (callers bound it by 2^64 * 2^64).
u128 floor_sum_nn(u128 n, u128 a, u128 b, u128 c) {
  if (c == 0) fail(Errc::internal, "floor_sum_nn domain");
  u128 ans = 0;
  while (n > 0) {
    if (a >= c) {
      ans += n * (n - 1) / 2 * (a / c);
      a %= c;
    }
    if (b >= c) {
      ans += n * (b / c);
      b %= c;
    }
    u128 y = a * n + b;
    if (y < c) break;
    n = y / c;
    b = y % c;
    std::swap(a, c);
  }
  return ans;
}

// Intersect r with {p : p >= v} / {p : p <= v} where v may exceed the
// position type.
PRange clamp_at_least(PRange r, i128 v) {
  if (v > (i128)kLLMax) return PRange::none();
  if (v <= (i128)kLLMin) return r;
  return intersect(r, PRange::at_least((long long)v));
}
PRange clamp_at_most(PRange r, i128 v) {
  if (v < (i128)kLLMin) return PRange::none();
  if (v >= (i128)kLLMax) return r;
  return intersect(r, PRange::at_most((long long)v));
}

LabelRule normalize_rule(const TargetOrder& target, const LabelRule& rule) {
  if (const auto* m = std::get_if<MonoRule>(&rule); m && m->stride == 0)
    return ConstRule{to_address(target.order, Pos{m->a_block, m->base})};
  return rule;
}

// Const rules behave as one-entry patterns in the residue kernels.
const std::vector<Address>* pattern_of(const LabelRule& rule, std::vector<Address>& scratch) {
  if (const auto* c = std::get_if<ConstRule>(&rule)) {
    scratch = {c->alpha};
    return &scratch;
  }
  if (const auto* p = std::get_if<PeriodicRule>(&rule)) return &p->pattern;
  return nullptr;
}

struct Affine {
  int block;
  long long stride, base;
};
std::optional<Affine> affine_of(const TargetOrder& target, const LabelRule& rule) {
  if (const auto* c = std::get_if<ConstRule>(&rule)) {
    Pos p = to_pos(target.order, c->alpha);
    return Affine{p.block, 0, p.p};
  }
  if (const auto* m = std::get_if<MonoRule>(&rule)) return Affine{m->a_block, m->stride, m->base};
  return std::nullopt;
}

}  // namespace

long long mod_floor(long long a, long long m) { return a - floor_div(a, m) * m; }

ExtendedCount sat_count(i128 v) {
  if (v < 0) fail(Errc::internal, "negative count");
  if (v > kU64Max) return ExtendedCount::infinite();
  return ExtendedCount::finite((std::uint64_t)v);
}

ExtendedCount count_congruent(PRange r, long long L, long long j) {
  if (L <= 0) fail(Errc::internal, "count_congruent modulus");
  if (r.is_empty()) return ExtendedCount::finite(0);
  if (!r.lo || !r.hi) return ExtendedCount::infinite();
  j = mod_floor(j, L);
  return sat_count((i128)floor_div(*r.hi - j, L) - floor_div(*r.lo - 1 - j, L));
}

PRange residue_subrange(PRange r, long long L, long long j) {
  if (r.is_empty()) return PRange::none();
  PRange out = PRange::all();
  if (r.lo) out = intersect(out, PRange::at_least(ceil_div(*r.lo - j, L)));
  if (r.hi) out = intersect(out, PRange::at_most(floor_div(*r.hi - j, L)));
  return out;
}

ExtendedCount count_residue_pairs(long long lo, long long hi, long long L, long long j,
                                  long long k) {
  if (L <= 0) fail(Errc::internal, "count_residue_pairs modulus");
  if (lo > hi) return ExtendedCount::finite(0);
  j = mod_floor(j, L);
  k = mod_floor(k, L);
  long long kp = lo + mod_floor(k - lo, L);
  if (kp > hi) return ExtendedCount::finite(0);
  i128 nk = (hi - kp) / L + 1;
  // For q the t-th k-position, |{p = j mod L : lo <= p < q}| = t + delta with
  // a phase bit delta constant in t.
  long long bp = (kp - lo) + mod_floor(lo - 1 - j, L);
  i128 delta = bp >= L ? 1 : 0;
  return sat_count(nk * (nk - 1) / 2 + nk * delta);
}

ExtendedCount sum_lattice(PRange rx, const std::vector<Lin>& lowers,
                          const std::vector<Lin>& uppers) {
  if (rx.is_empty()) return ExtendedCount::finite(0);
  // An empty side leaves the q-interval infinite for every p.
  if (lowers.empty() || uppers.empty()) return ExtendedCount::infinite();

  // Zone boundaries: integer neighborhoods of pairwise crossings inside each
  // bound family. Between consecutive candidates the active bounds are fixed.
  std::set<long long> cand;
  auto crossings = [&cand](const std::vector<Lin>& fam) {
    for (size_t i = 0; i < fam.size(); ++i)
      for (size_t j = i + 1; j < fam.size(); ++j) {
        if (fam[i].slope == fam[j].slope) continue;
        i128 num = (i128)fam[j].offset - fam[i].offset;
        i128 den = (i128)fam[i].slope - fam[j].slope;
        i128 f = floor_div128(num, den);
        for (i128 d = f - 1; d <= f + 2; ++d)
          if (d >= (i128)kLLMin && d <= (i128)kLLMax) cand.insert((long long)d);
      }
  };
  crossings(lowers);
  crossings(uppers);

  std::vector<PRange> zones;
  if (cand.empty()) {
    zones.push_back(PRange::all());
  } else {
    std::vector<long long> cs(cand.begin(), cand.end());
    zones.push_back(PRange::at_most(cs.front() - 1));
    for (size_t i = 0; i + 1 < cs.size(); ++i) zones.push_back(PRange::closed(cs[i], cs[i + 1] - 1));
    zones.push_back(PRange::at_least(cs.back()));
  }

  u128 total = 0;
  for (const PRange& zone : zones) {
    PRange zc = intersect(zone, rx);
    if (zc.is_empty()) continue;
    long long rep = zc.hi ? *zc.hi : (zc.lo ? *zc.lo + 1 : 0);
    auto pick = [rep](const std::vector<Lin>& fam, bool want_max) {
      Lin best = fam.front();
      i128 bv = (i128)best.slope * rep + best.offset;
      for (const Lin& l : fam) {
        i128 v = (i128)l.slope * rep + l.offset;
        if (want_max ? v > bv : v < bv) {
          best = l;
          bv = v;
        }
      }
      return best;
    };
    Lin lo = pick(lowers, true), up = pick(uppers, false);
    i128 a = (i128)up.slope - lo.slope;          // interval size c(p) = a*p + b
    i128 b = (i128)up.offset - lo.offset + 1;
    PRange region = zc;
    if (a == 0) {
      if (b < 1) continue;
    } else if (a > 0) {
      region = clamp_at_least(region, ceil_div128(1 - b, a));
    } else {
      region = clamp_at_most(region, floor_div128(b - 1, -a));
    }
    if (region.is_empty()) continue;
    if (!region.lo || !region.hi) return ExtendedCount::infinite();
    i128 n = (i128)*region.hi - *region.lo + 1;
    i128 clo = a * *region.lo + b, chi = a * *region.hi + b;
    i128 tmin = std::min(clo, chi), tmax = std::max(clo, chi);
    if (n > kU64Max || tmax > kU64Max) return ExtendedCount::infinite();
    u128 span = (u128)(tmin + tmax);  // arithmetic series, every term >= 1
    if ((u128)n > ~(u128)0 / span) return ExtendedCount::infinite();
    total += (u128)n * span / 2;
    if (total > (u128)kU64Max) return ExtendedCount::infinite();
  }
  return sat_count((i128)total);
}

Progression affine_progression(PRange r, long long stride, long long base) {
  Progression out;
  if (r.is_empty()) return out;
  out.empty = false;
  if (stride == 0) {
    out.step = 1;
    out.min = out.max = base;
    return out;
  }
  out.step = stride > 0 ? stride : -stride;
  auto value = [&](long long p) {
    i128 v = (i128)stride * p + base;
    if (v < (i128)kLLMin || v > (i128)kLLMax) fail(Errc::internal, "progression value overflow");
    return (long long)v;
  };
  if (stride > 0) {
    if (r.lo) out.min = value(*r.lo);
    if (r.hi) out.max = value(*r.hi);
  } else {
    if (r.hi) out.min = value(*r.hi);
    if (r.lo) out.max = value(*r.lo);
  }
  return out;
}

ExtendedCount count_pairs_greater(const Progression& a, const Progression& b) {
  if (a.empty || b.empty) return ExtendedCount::finite(0);
  if (!a.max || !b.min) return ExtendedCount::infinite();
  long long bmin = *b.min;
  if (*a.max <= bmin) return ExtendedCount::finite(0);
  // Values of a below bmin+1 pair with nothing; align the effective start.
  long long amin = (a.min && *a.min > bmin)
                       ? *a.min
                       : *a.max - floor_div(*a.max - (bmin + 1), a.step) * a.step;
  i128 n1 = ((i128)*a.max - amin) / a.step + 1;
  u128 boff = (u128)((i128)amin - 1 - bmin);  // >= 0
  if (!b.max) {
    if (n1 > kU64Max) return ExtendedCount::infinite();
    u128 band = floor_sum_nn((u128)n1, (u128)a.step, boff, (u128)b.step) + (u128)n1;
    return band > (u128)kU64Max ? ExtendedCount::infinite() : sat_count((i128)band);
  }
  i128 n2 = ((i128)*b.max - bmin) / b.step + 1;
  // u beyond b.max dominates all of b.
  i128 istar = (amin > *b.max) ? 0 : ((i128)*b.max - amin) / a.step + 1;
  if (istar > n1) istar = n1;
  if (istar > kU64Max) return ExtendedCount::infinite();
  u128 band = floor_sum_nn((u128)istar, (u128)a.step, boff, (u128)b.step) + (u128)istar;
  if (band > (u128)kU64Max) return ExtendedCount::infinite();
  i128 nfull = n1 - istar;
  if (nfull > 0 && n2 > 0 && nfull > (i128)kU64Max / n2 + 1) return ExtendedCount::infinite();
  return sat_count((i128)band + nfull * n2);
}

Pos label_at(const TargetOrder& target, const LabelRule& rule, long long p) {
  if (const auto* c = std::get_if<ConstRule>(&rule)) return to_pos(target.order, c->alpha);
  if (const auto* m = std::get_if<MonoRule>(&rule)) {
    i128 v = (i128)m->stride * p + m->base;
    if (v < (i128)kLLMin || v > (i128)kLLMax) fail(Errc::internal, "label position overflow");
    return Pos{m->a_block, (long long)v};
  }
  if (const auto* pr = std::get_if<PeriodicRule>(&rule)) {
    long long L = (long long)pr->pattern.size();
    return to_pos(target.order, pr->pattern[(size_t)mod_floor(p, L)]);
  }
  const auto& list = std::get<ListRule>(rule).labels;
  if (p < 0 || p >= (long long)list.size()) fail(Errc::internal, "list label out of range");
  return to_pos(target.order, list[(size_t)p]);
}

bool rule_is_mono(const LabelRule& rule) { return std::holds_alternative<MonoRule>(rule); }

std::vector<std::pair<Pos, ExtendedCount>> label_histogram(const TargetOrder& target,
                                                           const LabelRule& rule, PRange r) {
  std::map<Pos, ExtendedCount> acc;
  if (!r.is_empty()) {
    if (const auto* c = std::get_if<ConstRule>(&rule)) {
      acc[to_pos(target.order, c->alpha)] += range_count(r);
    } else if (const auto* pr = std::get_if<PeriodicRule>(&rule)) {
      long long L = (long long)pr->pattern.size();
      for (long long j = 0; j < L; ++j) {
        ExtendedCount c = count_congruent(r, L, j);
        if (c > ExtendedCount::finite(0)) acc[label_at(target, rule, j)] += c;
      }
    } else if (const auto* ls = std::get_if<ListRule>(&rule)) {
      PRange rr = intersect(r, PRange::closed(0, (long long)ls->labels.size() - 1));
      if (!rr.is_empty())
        for (long long p = *rr.lo; p <= *rr.hi; ++p)
          acc[label_at(target, rule, p)] += ExtendedCount::finite(1);
    } else {
      fail(Errc::internal, "histogram of a monotone rule");
    }
  }
  return {acc.begin(), acc.end()};
}

namespace {

// Shared core of count_labels_below / count_labels_above.
ExtendedCount count_labels_cmp(const TargetOrder& target, const LabelRule& rule_in, PRange r,
                               Pos bound, bool below) {
  if (r.is_empty()) return ExtendedCount::finite(0);
  LabelRule rule = normalize_rule(target, rule_in);
  if (const auto* c = std::get_if<ConstRule>(&rule)) {
    Pos l = to_pos(target.order, c->alpha);
    bool hit = below ? l < bound : l > bound;
    return hit ? range_count(r) : ExtendedCount::finite(0);
  }
  if (const auto* m = std::get_if<MonoRule>(&rule)) {
    if (m->a_block != bound.block)
      return (below ? m->a_block < bound.block : m->a_block > bound.block)
                 ? range_count(r)
                 : ExtendedCount::finite(0);
    i128 s = m->stride;
    if (below) {
      // stride*p + base <= bound.p - 1
      i128 t = (i128)bound.p - 1 - m->base;
      r = s > 0 ? clamp_at_most(r, floor_div128(t, s)) : clamp_at_least(r, ceil_div128(t, s));
    } else {
      // stride*p + base >= bound.p + 1
      i128 t = (i128)bound.p + 1 - m->base;
      r = s > 0 ? clamp_at_least(r, ceil_div128(t, s)) : clamp_at_most(r, floor_div128(t, s));
    }
    return range_count(r);
  }
  if (const auto* pr = std::get_if<PeriodicRule>(&rule)) {
    long long L = (long long)pr->pattern.size();
    ExtendedCount total;
    for (long long j = 0; j < L; ++j) {
      Pos l = label_at(target, rule, j);
      if (below ? l < bound : l > bound) total += count_congruent(r, L, j);
    }
    return total;
  }
  const auto& list = std::get<ListRule>(rule).labels;
  PRange rr = intersect(r, PRange::closed(0, (long long)list.size() - 1));
  ExtendedCount total;
  if (!rr.is_empty())
    for (long long p = *rr.lo; p <= *rr.hi; ++p) {
      Pos l = label_at(target, rule, p);
      if (below ? l < bound : l > bound) total += ExtendedCount::finite(1);
    }
  return total;
}

}  // namespace

ExtendedCount count_labels_below(const TargetOrder& target, const LabelRule& rule, PRange r,
                                 Pos bound) {
  return count_labels_cmp(target, rule, r, bound, true);
}
ExtendedCount count_labels_above(const TargetOrder& target, const LabelRule& rule, PRange r,
                                 Pos bound) {
  return count_labels_cmp(target, rule, r, bound, false);
}

ExtendedCount cross_count(const TargetOrder& target, const LabelRule& rule_x_in, PRange rx,
                          const LabelRule& rule_y_in, PRange ry) {
  if (rx.is_empty() || ry.is_empty()) return ExtendedCount::finite(0);
  LabelRule rule_x = normalize_rule(target, rule_x_in);
  LabelRule rule_y = normalize_rule(target, rule_y_in);
  bool mx = rule_is_mono(rule_x), my = rule_is_mono(rule_y);
  if (mx && my) {
    const auto& a = std::get<MonoRule>(rule_x);
    const auto& b = std::get<MonoRule>(rule_y);
    if (a.a_block != b.a_block)
      return a.a_block > b.a_block ? range_count(rx) * range_count(ry)
                                   : ExtendedCount::finite(0);
    return count_pairs_greater(affine_progression(rx, a.stride, a.base),
                               affine_progression(ry, b.stride, b.base));
  }
  if (mx) {
    ExtendedCount total;
    for (const auto& [mu, c] : label_histogram(target, rule_y, ry))
      total += c * count_labels_above(target, rule_x, rx, mu);
    return total;
  }
  if (my) {
    ExtendedCount total;
    for (const auto& [lam, c] : label_histogram(target, rule_x, rx))
      total += c * count_labels_below(target, rule_y, ry, lam);
    return total;
  }
  ExtendedCount total;
  auto hx = label_histogram(target, rule_x, rx);
  auto hy = label_histogram(target, rule_y, ry);
  for (const auto& [lam, cx] : hx)
    for (const auto& [mu, cy] : hy)
      if (lam > mu) total += cx * cy;
  return total;
}

ExtendedCount triangular_count(const TargetOrder& target, const LabelRule& rule_in, PRange r) {
  if (r.is_empty()) return ExtendedCount::finite(0);
  LabelRule rule = normalize_rule(target, rule_in);
  if (std::holds_alternative<ConstRule>(rule)) return ExtendedCount::finite(0);
  if (const auto* m = std::get_if<MonoRule>(&rule)) {
    if (m->stride > 0) return ExtendedCount::finite(0);
    ExtendedCount n = range_count(r);
    if (n.is_infinite()) return n;
    return sat_count((i128)n.value() * (n.value() > 0 ? n.value() - 1 : 0) / 2);
  }
  if (const auto* pr = std::get_if<PeriodicRule>(&rule)) {
    long long L = (long long)pr->pattern.size();
    bool constant = true;
    for (long long j = 1; j < L && constant; ++j)
      constant = pr->pattern[(size_t)j] == pr->pattern[0];
    if (constant) return ExtendedCount::finite(0);
    if (!r.lo || !r.hi) return ExtendedCount::infinite();
    ExtendedCount total;
    for (long long j = 0; j < L; ++j)
      for (long long k = 0; k < L; ++k)
        if (label_at(target, rule, j) > label_at(target, rule, k))
          total += count_residue_pairs(*r.lo, *r.hi, L, j, k);
    return total;
  }
  const auto& list = std::get<ListRule>(rule).labels;
  PRange rr = intersect(r, PRange::closed(0, (long long)list.size() - 1));
  ExtendedCount total;
  if (!rr.is_empty())
    for (long long p = *rr.lo; p <= *rr.hi; ++p)
      for (long long q = p + 1; q <= *rr.hi; ++q)
        if (label_at(target, rule, p) > label_at(target, rule, q))
          total += ExtendedCount::finite(1);
  return total;
}

namespace {

// Rectangle rx x ry cut by p + q >= t.
ExtendedCount coupled_rect(PRange rx, PRange ry, i128 t) {
  if (rx.is_empty() || ry.is_empty()) return ExtendedCount::finite(0);
  std::vector<Lin> lowers, uppers;
  if (t > (i128)kLLMax) {
    if (rx.hi && ry.hi && (i128)*rx.hi + *ry.hi < t) return ExtendedCount::finite(0);
    fail(Errc::internal, "coupled threshold out of range");
  }
  if (t >= (i128)kLLMin) lowers.push_back(Lin{-1, (long long)t});
  // below the representable sums the cut is vacuous
  if (ry.lo) lowers.push_back(Lin{0, *ry.lo});
  if (ry.hi) uppers.push_back(Lin{0, *ry.hi});
  return sum_lattice(rx, lowers, uppers);
}

}  // namespace

ExtendedCount coupled_count(const TargetOrder& target, const LabelRule& rule_x_in, PRange rx,
                            const LabelRule& rule_y_in, PRange ry, long long t) {
  if (rx.is_empty() || ry.is_empty()) return ExtendedCount::finite(0);
  LabelRule rule_x = normalize_rule(target, rule_x_in);
  LabelRule rule_y = normalize_rule(target, rule_y_in);

  auto ax = affine_of(target, rule_x), ay = affine_of(target, rule_y);
  if (ax && ay) {
    if (ax->block != ay->block)
      return ax->block > ay->block ? coupled_rect(rx, ry, t) : ExtendedCount::finite(0);
    i128 sx = ax->stride, sy = ay->stride;
    i128 d = (i128)ay->base - ax->base + 1;  // condition: sx*p - sy*q >= d
    if (sx == 0 && sy == 0) return d <= 0 ? coupled_rect(rx, ry, t) : ExtendedCount::finite(0);
    if (sy == 0) {
      PRange rxr = sx > 0 ? clamp_at_least(rx, ceil_div128(d, sx))
                          : clamp_at_most(rx, floor_div128(d, sx));
      return coupled_rect(rxr, ry, t);
    }
    if (sx == 0) {
      // -sy*q >= d
      PRange ryr = sy > 0 ? clamp_at_most(ry, floor_div128(-d, sy))
                          : clamp_at_least(ry, ceil_div128(-d, sy));
      return coupled_rect(rx, ryr, t);
    }
    std::vector<Lin> lowers{Lin{-1, t}}, uppers;
    if (ry.lo) lowers.push_back(Lin{0, *ry.lo});
    if (ry.hi) uppers.push_back(Lin{0, *ry.hi});
    if (sx == sy) {
      // s*(p - q) >= d
      i128 bnd = sx > 0 ? -ceil_div128(d, sx) : -floor_div128(d, sx);
      if (bnd < (i128)kLLMin || bnd > (i128)kLLMax)
        fail(Errc::internal, "coupled bound overflow");
      if (sx > 0)
        uppers.push_back(Lin{1, (long long)bnd});  // q <= p - ceil(d/s)
      else
        lowers.push_back(Lin{1, (long long)bnd});  // q >= p - floor(d/s)
      return sum_lattice(rx, lowers, uppers);
    }
    if (sx == -sy) {
      // sx*(p + q) >= d
      i128 bnd = sx > 0 ? ceil_div128(d, sx) : floor_div128(d, sx);
      if (bnd < (i128)kLLMin || bnd > (i128)kLLMax)
        fail(Errc::internal, "coupled bound overflow");
      if (sx > 0)
        lowers.push_back(Lin{-1, (long long)bnd});  // p + q >= ceil(d/sx)
      else
        uppers.push_back(Lin{-1, (long long)bnd});  // q <= floor(d/sx) - p
      return sum_lattice(rx, lowers, uppers);
    }
    fail(Errc::unsupported_rule_combination, "coupled monotone rules with unequal strides");
  }

  std::vector<Address> sx, sy;
  const auto* px = pattern_of(rule_x, sx);
  const auto* py = pattern_of(rule_y, sy);
  if (px && py) {
    long long lx = (long long)px->size(), ly = (long long)py->size();
    long long L = std::lcm(lx, ly);
    if (L > 4096) fail(Errc::unsupported_rule_combination, "coupled periods too large");
    ExtendedCount total;
    for (long long j = 0; j < L; ++j) {
      Pos lam = label_at(target, rule_x, j);
      PRange ra = residue_subrange(rx, L, j);
      if (ra.is_empty()) continue;
      for (long long k = 0; k < L; ++k) {
        if (!(lam > label_at(target, rule_y, k))) continue;
        PRange rb = residue_subrange(ry, L, k);
        total += coupled_rect(ra, rb, ceil_div128((i128)t - j - k, L));
      }
    }
    return total;
  }

  const auto* listx = std::get_if<ListRule>(&rule_x);
  const auto* listy = std::get_if<ListRule>(&rule_y);
  if (listx && listy) {
    PRange rrx = intersect(rx, PRange::closed(0, (long long)listx->labels.size() - 1));
    PRange rry = intersect(ry, PRange::closed(0, (long long)listy->labels.size() - 1));
    ExtendedCount total;
    if (!rrx.is_empty() && !rry.is_empty())
      for (long long p = *rrx.lo; p <= *rrx.hi; ++p)
        for (long long q = *rry.lo; q <= *rry.hi; ++q)
          if (p + q >= t && label_at(target, rule_x, p) > label_at(target, rule_y, q))
            total += ExtendedCount::finite(1);
    return total;
  }

  fail(Errc::unsupported_rule_combination, "coupled rule pair outside closed forms");
}

}  // namespace indflag::counting
