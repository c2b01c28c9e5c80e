#pragma once

// Closed-form pair counting kernels behind the inversion numbers. Everything
// here is exact over ExtendedCount; ranges are position ranges already
// intersected with their block. Not installed.

#include <utility>
#include <vector>

#include "indflag/cells.hpp"

namespace indflag::counting {

long long mod_floor(long long a, long long m);

// Saturating conversion of a nonnegative 128-bit count.
ExtendedCount sat_count(__int128 v);

// |{p in r : p = j mod L}|
ExtendedCount count_congruent(PRange r, long long L, long long j);

// Positions p = j (mod L) of r, reindexed as p = L*a + j.
PRange residue_subrange(PRange r, long long L, long long j);

// Pairs p < q inside [lo, hi] with p = j, q = k (mod L).
ExtendedCount count_residue_pairs(long long lo, long long hi, long long L, long long j,
                                  long long k);

// Affine bound q = slope*p + offset with slope in {-1, 0, 1}.
struct Lin {
  int slope = 0;
  long long offset = 0;
};

// Sum over p in rx of the size of the integer interval
// [max(lowers)(p), min(uppers)(p)], clamped at empty. An empty uppers list
// means q is unbounded above.
ExtendedCount sum_lattice(PRange rx, const std::vector<Lin>& lowers,
                          const std::vector<Lin>& uppers);

// The value set {stride*p + base : p in r} as an arithmetic progression.
struct Progression {
  bool empty = true;
  std::optional<long long> min, max;  // aligned to step when both present
  long long step = 1;
};

Progression affine_progression(PRange r, long long stride, long long base);

// |{(u, v) : u in a, v in b, u > v}| with multiplicity one per lattice point.
ExtendedCount count_pairs_greater(const Progression& a, const Progression& b);

// Label of a rule at block position p (List positions are offsets).
Pos label_at(const TargetOrder& target, const LabelRule& rule, long long p);

bool rule_is_mono(const LabelRule& rule);

// Finite label classes of a non-Mono rule on a range: (label, multiplicity).
std::vector<std::pair<Pos, ExtendedCount>> label_histogram(const TargetOrder& target,
                                                           const LabelRule& rule, PRange r);

ExtendedCount count_labels_below(const TargetOrder& target, const LabelRule& rule, PRange r,
                                 Pos bound);
ExtendedCount count_labels_above(const TargetOrder& target, const LabelRule& rule, PRange r,
                                 Pos bound);

// |{(x, y) : x in rx, y in ry, label_x(x) > label_y(y)}|, positions
// independent (x entirely before y).
ExtendedCount cross_count(const TargetOrder& target, const LabelRule& rule_x, PRange rx,
                          const LabelRule& rule_y, PRange ry);

// |{(p, q) : p < q in r, label(p) > label(q)}| for a single rule.
ExtendedCount triangular_count(const TargetOrder& target, const LabelRule& rule, PRange r);

// |{(p, q) : p in rx, q in ry, p + q >= t, label_x(p) > label_y(q)}| for the
// mirror-coupled background pairs. Throws UnsupportedRuleCombination when the
// rule pair is outside the implemented closed forms.
ExtendedCount coupled_count(const TargetOrder& target, const LabelRule& rule_x, PRange rx,
                            const LabelRule& rule_y, PRange ry, long long t);

}  // namespace indflag::counting
