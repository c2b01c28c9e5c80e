#include <algorithm>
#include <cstdlib>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "counting.hpp"
#include "doctest.h"

using namespace indflag;
using namespace indflag::counting;

namespace {

TargetOrder plain_target() {
  TargetOrder t;
  t.order = {{fin_chain(4), z_line()}, "A"};
  return t;
}

long long rnd(std::mt19937& rng, long long lo, long long hi) {
  return lo + (long long)(rng() % (unsigned long long)(hi - lo + 1));
}

Address rand_label(std::mt19937& rng) {
  if (rng() % 2 == 0) return {0, rnd(rng, 0, 3)};
  return {1, rnd(rng, -4, 4)};
}

// kind: 0 const, 1 mono into the Z block, 2 periodic, 3 list of length 9
LabelRule rand_rule(std::mt19937& rng, int kind) {
  switch (kind) {
    case 0:
      return ConstRule{rand_label(rng)};
    case 1: {
      long long s = 0;
      while (s == 0) s = rnd(rng, -3, 3);
      return MonoRule{1, s, rnd(rng, -4, 4)};
    }
    case 2: {
      PeriodicRule pr;
      long long L = rnd(rng, 1, 4);
      for (long long i = 0; i < L; ++i) pr.pattern.push_back(rand_label(rng));
      return pr;
    }
    default: {
      ListRule lr;
      for (int i = 0; i < 9; ++i) lr.labels.push_back(rand_label(rng));
      return lr;
    }
  }
}

bool needs_list_window(const LabelRule& r) { return std::holds_alternative<ListRule>(r); }

PRange rand_range(std::mt19937& rng, bool list_safe) {
  if (list_safe) {
    long long lo = rnd(rng, 0, 4);
    long long hi = std::min<long long>(8, lo + rnd(rng, 0, 8));
    return PRange::closed(lo, hi);
  }
  long long lo = rnd(rng, -8, 4);
  return PRange::closed(lo, lo + rnd(rng, 0, 8));
}

long long brute_cross(const TargetOrder& t, const LabelRule& rx, const PRange& xr,
                      const LabelRule& ry, const PRange& yr) {
  long long c = 0;
  for (long long p = *xr.lo; p <= *xr.hi; ++p)
    for (long long q = *yr.lo; q <= *yr.hi; ++q)
      if (label_at(t, ry, q) < label_at(t, rx, p)) ++c;
  return c;
}

long long brute_triangular(const TargetOrder& t, const LabelRule& r, const PRange& pr) {
  long long c = 0;
  for (long long p = *pr.lo; p <= *pr.hi; ++p)
    for (long long q = p + 1; q <= *pr.hi; ++q)
      if (label_at(t, r, q) < label_at(t, r, p)) ++c;
  return c;
}

long long brute_coupled(const TargetOrder& t, const LabelRule& rx, const PRange& xr,
                        const LabelRule& ry, const PRange& yr, long long thr) {
  long long c = 0;
  for (long long p = *xr.lo; p <= *xr.hi; ++p)
    for (long long q = *yr.lo; q <= *yr.hi; ++q)
      if (p + q >= thr && label_at(t, ry, q) < label_at(t, rx, p)) ++c;
  return c;
}

}  // namespace

TEST_CASE("mod_floor and congruence counts") {
  CHECK(mod_floor(7, 3) == 1);
  CHECK(mod_floor(-7, 3) == 2);
  CHECK(mod_floor(-6, 3) == 0);
  CHECK(mod_floor(0, 5) == 0);

  std::mt19937 rng(101);
  for (int it = 0; it < 200; ++it) {
    long long lo = rnd(rng, -20, 20);
    long long hi = lo + rnd(rng, -1, 30);
    long long L = rnd(rng, 1, 6);
    long long j = rnd(rng, 0, L - 1);
    long long want = 0;
    for (long long p = lo; p <= hi; ++p)
      if (mod_floor(p, L) == j) ++want;
    CAPTURE(it);
    CHECK(count_congruent(PRange::closed(lo, hi), L, j) == ExtendedCount::finite((uint64_t)want));
  }
  CHECK(count_congruent(PRange::at_least(0), 3, 2).is_infinite());
  CHECK(count_congruent(PRange::all(), 2, 0).is_infinite());
  CHECK(count_congruent(PRange::closed(5, 4), 2, 0) == ExtendedCount::finite(0));
}

TEST_CASE("residue subranges reindex their class") {
  std::mt19937 rng(102);
  for (int it = 0; it < 200; ++it) {
    long long lo = rnd(rng, -20, 20);
    long long hi = lo + rnd(rng, -1, 25);
    long long L = rnd(rng, 1, 6);
    long long j = rnd(rng, 0, L - 1);
    PRange sub = residue_subrange(PRange::closed(lo, hi), L, j);
    std::vector<long long> direct, reindexed;
    for (long long p = lo; p <= hi; ++p)
      if (mod_floor(p, L) == j) direct.push_back(p);
    if (!sub.is_empty())
      for (long long a = *sub.lo; a <= *sub.hi; ++a) reindexed.push_back(L * a + j);
    CAPTURE(it);
    CHECK(direct == reindexed);
  }
}

TEST_CASE("residue pair counts match brute force") {
  std::mt19937 rng(103);
  for (int it = 0; it < 300; ++it) {
    long long lo = rnd(rng, -15, 15);
    long long hi = lo + rnd(rng, -1, 20);
    long long L = rnd(rng, 1, 5);
    long long j = rnd(rng, 0, L - 1);
    long long k = rnd(rng, 0, L - 1);
    long long want = 0;
    for (long long p = lo; p <= hi; ++p)
      for (long long q = p + 1; q <= hi; ++q)
        if (mod_floor(p, L) == j && mod_floor(q, L) == k) ++want;
    CAPTURE(it);
    CHECK(count_residue_pairs(lo, hi, L, j, k) == ExtendedCount::finite((uint64_t)want));
  }
}

TEST_CASE("affine progressions carry the exact value set") {
  std::mt19937 rng(104);
  for (int it = 0; it < 200; ++it) {
    long long lo = rnd(rng, -10, 10);
    long long hi = lo + rnd(rng, 0, 10);
    long long s = rnd(rng, -4, 4);
    long long b = rnd(rng, -9, 9);
    Progression g = affine_progression(PRange::closed(lo, hi), s, b);
    std::vector<long long> values;
    for (long long p = lo; p <= hi; ++p) values.push_back(s * p + b);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    REQUIRE(!g.empty);
    CAPTURE(it);
    CHECK(*g.min == values.front());
    CHECK(*g.max == values.back());
    if (s != 0) CHECK(g.step == std::abs(s));
  }
  CHECK(affine_progression(PRange::closed(3, 2), 1, 0).empty);
  Progression half = affine_progression(PRange::at_least(0), -2, 5);
  CHECK(!half.empty);
  CHECK(!half.min.has_value());
  CHECK(*half.max == 5);
}

TEST_CASE("pair dominance counts on progressions") {
  std::mt19937 rng(105);
  for (int it = 0; it < 300; ++it) {
    long long amin = rnd(rng, -10, 10), astep = rnd(rng, 1, 4), an = rnd(rng, 1, 7);
    long long bmin = rnd(rng, -10, 10), bstep = rnd(rng, 1, 4), bn = rnd(rng, 1, 7);
    Progression a{false, amin, amin + astep * (an - 1), astep};
    Progression b{false, bmin, bmin + bstep * (bn - 1), bstep};
    long long want = 0;
    for (long long i = 0; i < an; ++i)
      for (long long j = 0; j < bn; ++j)
        if (amin + astep * i > bmin + bstep * j) ++want;
    CAPTURE(it);
    CHECK(count_pairs_greater(a, b) == ExtendedCount::finite((uint64_t)want));
  }

  Progression none;
  Progression unit{false, 0, 0, 1};
  Progression up{false, 0, std::nullopt, 2};
  Progression down{false, std::nullopt, 0, 3};
  CHECK(count_pairs_greater(none, up) == ExtendedCount::finite(0));
  CHECK(count_pairs_greater(up, none) == ExtendedCount::finite(0));
  CHECK(count_pairs_greater(up, unit).is_infinite());
  CHECK(count_pairs_greater(unit, down).is_infinite());
  Progression lowa{false, -5, -1, 1};
  Progression highb{false, -1, 20, 1};
  CHECK(count_pairs_greater(lowa, highb) == ExtendedCount::finite(0));
}

TEST_CASE("lattice sums over affine bounds match brute force") {
  std::mt19937 rng(106);
  for (int it = 0; it < 400; ++it) {
    long long lo = rnd(rng, -8, 8);
    long long hi = lo + rnd(rng, 0, 10);
    auto rand_fam = [&](int n) {
      std::vector<Lin> fam;
      for (int i = 0; i < n; ++i) fam.push_back({(int)rnd(rng, -1, 1), rnd(rng, -6, 6)});
      return fam;
    };
    std::vector<Lin> lowers = rand_fam((int)rnd(rng, 1, 2));
    std::vector<Lin> uppers = rand_fam((int)rnd(rng, 1, 2));
    long long want = 0;
    for (long long p = lo; p <= hi; ++p) {
      long long l = lowers[0].slope * p + lowers[0].offset;
      for (const Lin& f : lowers) l = std::max(l, f.slope * p + f.offset);
      long long u = uppers[0].slope * p + uppers[0].offset;
      for (const Lin& f : uppers) u = std::min(u, f.slope * p + f.offset);
      if (u >= l) want += u - l + 1;
    }
    CAPTURE(it);
    CHECK(sum_lattice(PRange::closed(lo, hi), lowers, uppers) ==
          ExtendedCount::finite((uint64_t)want));
  }

  CHECK(sum_lattice(PRange::closed(3, 2), {}, {}) == ExtendedCount::finite(0));
  CHECK(sum_lattice(PRange::closed(0, 4), {{0, 0}}, {}).is_infinite());
  CHECK(sum_lattice(PRange::closed(0, 4), {}, {{0, 0}}).is_infinite());
  CHECK(sum_lattice(PRange::at_least(0), {{0, 0}}, {{1, 0}}).is_infinite());
  CHECK(sum_lattice(PRange::closed(0, 10000000000LL), {{0, 0}}, {{1, 0}}).is_infinite());
  CHECK(sum_lattice(PRange::at_most(-1), {{0, 0}}, {{1, 0}}) == ExtendedCount::finite(0));
}

TEST_CASE("rule label lookup conventions") {
  TargetOrder t = plain_target();
  LabelRule per = PeriodicRule{{Address{0, 1}, Address{0, 2}}};
  CHECK(label_at(t, per, 0) == to_pos(t.order, {0, 1}));
  CHECK(label_at(t, per, 1) == to_pos(t.order, {0, 2}));
  CHECK(label_at(t, per, -1) == to_pos(t.order, {0, 2}));
  CHECK(label_at(t, per, -2) == to_pos(t.order, {0, 1}));

  LabelRule mono = MonoRule{1, -2, 3};
  CHECK(label_at(t, mono, 5) == Pos{1, -7});

  LabelRule lst = ListRule{{Address{0, 3}, Address{0, 0}}};
  CHECK(label_at(t, lst, 1) == to_pos(t.order, {0, 0}));

  LabelRule cst = ConstRule{Address{1, -4}};
  CHECK(label_at(t, cst, 77) == Pos{1, -4});
}

TEST_CASE("histograms and halfline label counts match brute force") {
  TargetOrder t = plain_target();
  std::mt19937 rng(107);
  for (int it = 0; it < 300; ++it) {
    int kind = (int)rnd(rng, 0, 3);
    LabelRule r = rand_rule(rng, kind);
    PRange pr = rand_range(rng, needs_list_window(r));
    Pos bound = to_pos(t.order, rand_label(rng));

    long long below = 0, above = 0;
    std::vector<Pos> seen;
    for (long long p = *pr.lo; p <= *pr.hi; ++p) {
      Pos l = label_at(t, r, p);
      seen.push_back(l);
      if (l < bound) ++below;
      if (bound < l) ++above;
    }
    CAPTURE(it);
    CHECK(count_labels_below(t, r, pr, bound) == ExtendedCount::finite((uint64_t)below));
    CHECK(count_labels_above(t, r, pr, bound) == ExtendedCount::finite((uint64_t)above));

    if (kind != 1) {
      uint64_t mass = 0;
      for (const auto& [label, c] : label_histogram(t, r, pr)) {
        REQUIRE(c.is_finite());
        uint64_t direct = (uint64_t)std::count(seen.begin(), seen.end(), label);
        CHECK(c.value() == direct);
        mass += c.value();
      }
      CHECK(mass == seen.size());
    }
  }

  LabelRule per = PeriodicRule{{Address{0, 0}, Address{0, 2}}};
  CHECK(count_labels_below(t, per, PRange::all(), Pos{0, 1}).is_infinite());
  CHECK(count_labels_above(t, per, PRange::all(), Pos{0, 1}).is_infinite());
  CHECK(count_labels_above(t, per, PRange::all(), Pos{0, 2}) == ExtendedCount::finite(0));
  LabelRule up = MonoRule{1, 3, 0};
  CHECK(count_labels_above(t, up, PRange::at_least(0), Pos{1, 10}).is_infinite());
  CHECK(count_labels_below(t, up, PRange::at_least(0), Pos{1, 10}) == ExtendedCount::finite(4));
  CHECK(count_labels_below(t, up, PRange::all(), Pos{1, 10}).is_infinite());
}

TEST_CASE("cross counts match brute force") {
  TargetOrder t = plain_target();
  std::mt19937 rng(108);
  for (int it = 0; it < 500; ++it) {
    LabelRule rx = rand_rule(rng, (int)rnd(rng, 0, 3));
    LabelRule ry = rand_rule(rng, (int)rnd(rng, 0, 3));
    PRange xr = rand_range(rng, needs_list_window(rx));
    PRange yr = rand_range(rng, needs_list_window(ry));
    CAPTURE(it);
    CHECK(cross_count(t, rx, xr, ry, yr) ==
          ExtendedCount::finite((uint64_t)brute_cross(t, rx, xr, ry, yr)));
  }

  LabelRule hi = ConstRule{Address{0, 3}};
  LabelRule lo = ConstRule{Address{0, 0}};
  CHECK(cross_count(t, hi, PRange::at_least(0), lo, PRange::closed(0, 2)).is_infinite());
  CHECK(cross_count(t, hi, PRange::closed(0, 2), lo, PRange::at_most(5)).is_infinite());
  CHECK(cross_count(t, lo, PRange::all(), hi, PRange::all()) == ExtendedCount::finite(0));
  CHECK(cross_count(t, hi, PRange::all(), hi, PRange::all()) == ExtendedCount::finite(0));
}

TEST_CASE("triangular counts match brute force") {
  TargetOrder t = plain_target();
  std::mt19937 rng(109);
  for (int it = 0; it < 400; ++it) {
    LabelRule r = rand_rule(rng, (int)rnd(rng, 0, 3));
    PRange pr = rand_range(rng, needs_list_window(r));
    CAPTURE(it);
    CHECK(triangular_count(t, r, pr) ==
          ExtendedCount::finite((uint64_t)brute_triangular(t, r, pr)));
  }

  CHECK(triangular_count(t, MonoRule{1, -1, 0}, PRange::at_least(0)).is_infinite());
  CHECK(triangular_count(t, MonoRule{1, 2, 0}, PRange::all()) == ExtendedCount::finite(0));
  LabelRule flat = PeriodicRule{{Address{0, 1}}};
  CHECK(triangular_count(t, flat, PRange::all()) == ExtendedCount::finite(0));
  LabelRule wave = PeriodicRule{{Address{0, 1}, Address{0, 0}}};
  CHECK(triangular_count(t, wave, PRange::all()).is_infinite());
  CHECK(triangular_count(t, ConstRule{Address{1, 9}}, PRange::all()) == ExtendedCount::finite(0));
}

TEST_CASE("coupled counts match brute force") {
  TargetOrder t = plain_target();
  std::mt19937 rng(110);
  for (int it = 0; it < 600; ++it) {
    int family = (int)rnd(rng, 0, 2);
    LabelRule rx, ry;
    if (family == 0) {
      long long s = 0;
      while (s == 0) s = rnd(rng, -3, 3);
      int form = (int)rnd(rng, 0, 3);
      rx = (form == 1) ? rand_rule(rng, 0) : LabelRule(MonoRule{1, s, rnd(rng, -4, 4)});
      long long s2 = (form == 3) ? -s : s;
      ry = (form == 2) ? rand_rule(rng, 0) : LabelRule(MonoRule{1, s2, rnd(rng, -4, 4)});
    } else if (family == 1) {
      rx = rand_rule(rng, (int)rnd(rng, 0, 1) * 2);
      ry = rand_rule(rng, (int)rnd(rng, 0, 1) * 2);
    } else {
      rx = rand_rule(rng, 3);
      ry = rand_rule(rng, 3);
    }
    PRange xr = rand_range(rng, needs_list_window(rx));
    PRange yr = rand_range(rng, needs_list_window(ry));
    long long thr = rnd(rng, -12, 12);
    CAPTURE(it);
    CHECK(coupled_count(t, rx, xr, ry, yr, thr) ==
          ExtendedCount::finite((uint64_t)brute_coupled(t, rx, xr, ry, yr, thr)));
  }

  LabelRule hi = ConstRule{Address{0, 3}};
  LabelRule lo = ConstRule{Address{0, 0}};
  CHECK(coupled_count(t, hi, PRange::at_least(0), lo, PRange::at_least(0), 100).is_infinite());
  CHECK(coupled_count(t, lo, PRange::at_least(0), hi, PRange::at_least(0), 0) ==
        ExtendedCount::finite(0));
  LabelRule idx = MonoRule{1, 1, 0};
  CHECK(coupled_count(t, idx, PRange::at_least(0), idx, PRange::at_least(0), 5).is_infinite());
  CHECK_THROWS_AS(
      (void)coupled_count(t, MonoRule{1, 1, 0}, PRange::all(), MonoRule{1, 2, 0}, PRange::all(), 0),
      Error);
}
