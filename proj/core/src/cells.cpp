#include "indflag/cells.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <string>

#include "counting.hpp"

namespace indflag {

namespace {

using i128 = __int128;
using counting::mod_floor;

constexpr long long kLLMin = std::numeric_limits<long long>::min();
constexpr long long kLLMax = std::numeric_limits<long long>::max();

void add_reason(std::vector<std::string>* reasons, bool* ok, const std::string& msg) {
  *ok = false;
  if (reasons) reasons->push_back(msg);
}

// ---- validation -----------------------------------------------------------

// Mirrored rule the partner block must carry for sigma0 to be equivariant.
std::optional<LabelRule> mirror_rule(const LabelRule& rule, const Involution& ivA,
                                     long long muE) {
  if (const auto* c = std::get_if<ConstRule>(&rule)) return ConstRule{ivA.apply(c->alpha)};
  if (const auto* m = std::get_if<MonoRule>(&rule)) {
    int pb = ivA.partner(m->a_block);
    i128 base = (i128)ivA.mu(m->a_block) - m->base - (i128)m->stride * muE;
    if (base < (i128)kLLMin || base > (i128)kLLMax) return std::nullopt;
    return MonoRule{pb, m->stride, (long long)base};
  }
  if (const auto* p = std::get_if<PeriodicRule>(&rule)) {
    long long L = (long long)p->pattern.size();
    std::vector<Address> out((size_t)L);
    for (long long j = 0; j < L; ++j)
      out[(size_t)j] = ivA.apply(p->pattern[(size_t)mod_floor(muE - j, L)]);
    return PeriodicRule{std::move(out)};
  }
  const auto& list = std::get<ListRule>(rule).labels;
  std::vector<Address> out(list.size());
  for (size_t q = 0; q < list.size(); ++q) out[q] = ivA.apply(list[list.size() - 1 - q]);
  return ListRule{std::move(out)};
}

struct CoverProg {
  counting::Progression prog;
  long long anchor = 0;  // any member of the value class mod prog.step
};

bool check_coverage(const SurjectionSpec& spec, std::vector<std::string>* reasons) {
  bool ok = true;
  size_t nA = spec.target.order.blocks.size();
  std::vector<std::vector<CoverProg>> progs(nA);
  std::vector<std::set<long long>> points(nA);
  for (size_t b = 0; b < spec.rules.size(); ++b) {
    const LabelRule& rule = spec.rules[b];
    PRange er = block_positions(spec.carrier.blocks[b]);
    if (const auto* c = std::get_if<ConstRule>(&rule)) {
      Pos p = to_pos(spec.target.order, c->alpha);
      points[(size_t)p.block].insert(p.p);
    } else if (const auto* m = std::get_if<MonoRule>(&rule)) {
      if (m->stride == 0) {
        points[(size_t)m->a_block].insert(m->base);
      } else {
        progs[(size_t)m->a_block].push_back(
            {counting::affine_progression(er, m->stride, m->base), m->base});
      }
    } else if (const auto* pr = std::get_if<PeriodicRule>(&rule)) {
      for (const Address& a : pr->pattern) {
        Pos p = to_pos(spec.target.order, a);
        points[(size_t)p.block].insert(p.p);
      }
    } else {
      for (const Address& a : std::get<ListRule>(rule).labels) {
        Pos p = to_pos(spec.target.order, a);
        points[(size_t)p.block].insert(p.p);
      }
    }
  }

  long long checks = 0;
  constexpr long long kPointBudget = 100000;
  for (size_t ab = 0; ab < nA; ++ab) {
    PRange arange = block_positions(spec.target.order.blocks[ab]);
    if (progs[ab].empty()) {
      ExtendedCount n = range_count(arange);
      if (n.is_infinite()) {
        add_reason(reasons, &ok,
                   "target block " + std::to_string(ab) + " is infinite but only finitely labeled");
        continue;
      }
      for (long long p = *arange.lo; p <= *arange.hi; ++p) {
        if (++checks > kPointBudget) {
          add_reason(reasons, &ok, "coverage check budget exceeded");
          return ok;
        }
        if (!points[ab].count(p)) {
          add_reason(reasons, &ok, "target block " + std::to_string(ab) + " position " +
                                       std::to_string(p) + " is never a label");
          break;
        }
      }
      continue;
    }
    long long M = 1;
    bool cap = false;
    for (const CoverProg& cp : progs[ab]) {
      M = std::lcm(M, cp.prog.step);
      if (M > 65536) {
        add_reason(reasons, &ok, "coverage check stride lcm too large on target block " +
                                     std::to_string(ab));
        cap = true;
        break;
      }
    }
    if (cap) continue;
    for (long long r = 0; r < M && ok; ++r) {
      // class positions p = M*a + r, as a-intervals
      PRange cls = counting::residue_subrange(arange, M, r);
      if (cls.is_empty()) continue;
      std::vector<PRange> covered;
      for (const CoverProg& cp : progs[ab]) {
        if (cp.prog.empty || mod_floor(r - cp.anchor, cp.prog.step) != 0) continue;
        PRange pr{cp.prog.min, cp.prog.max};
        PRange ar = counting::residue_subrange(pr, M, r);
        if (!ar.is_empty()) covered.push_back(intersect(ar, cls));
      }
      std::erase_if(covered, [](const PRange& x) { return x.is_empty(); });
      std::sort(covered.begin(), covered.end(), [](const PRange& x, const PRange& y) {
        if (!x.lo != !y.lo) return !x.lo;
        if (!x.lo) return false;
        return *x.lo < *y.lo;
      });
      // walk the class range and account for every gap with point labels
      std::optional<long long> cur = cls.lo;  // nullopt: unbounded below
      bool low_open = !cls.lo;
      auto fill_gap = [&](std::optional<long long> glo, std::optional<long long> ghi) {
        if (!ok) return;
        if (!glo || !ghi) {
          add_reason(reasons, &ok, "target block " + std::to_string(ab) +
                                       " has an unbounded uncovered region (class " +
                                       std::to_string(r) + " mod " + std::to_string(M) + ")");
          return;
        }
        for (long long a = *glo; a <= *ghi; ++a) {
          if (++checks > kPointBudget) {
            add_reason(reasons, &ok, "coverage check budget exceeded");
            return;
          }
          long long p = M * a + r;
          if (!points[ab].count(p)) {
            add_reason(reasons, &ok, "target block " + std::to_string(ab) + " position " +
                                         std::to_string(p) + " is never a label");
            return;
          }
        }
      };
      for (const PRange& iv : covered) {
        if (!ok) break;
        if (low_open && iv.lo) {
          fill_gap(std::nullopt, *iv.lo - 1);
          if (!ok) break;
        } else if (!low_open && cur && iv.lo && *iv.lo > *cur) {
          fill_gap(*cur, *iv.lo - 1);
          if (!ok) break;
        }
        low_open = false;
        if (!iv.hi) {
          cur = std::nullopt;  // covered to +inf
          break;
        }
        if (!cur || *iv.hi + 1 > *cur) cur = *iv.hi + 1;
      }
      if (!ok) break;
      if (low_open) {
        // nothing covered this class at all
        fill_gap(cls.lo, cls.hi);
      } else if (cur) {
        if (!cls.hi) {
          fill_gap(cur, std::nullopt);
        } else if (*cur <= *cls.hi) {
          fill_gap(*cur, *cls.hi);
        }
      }
    }
  }
  return ok;
}

}  // namespace

bool validate(const SurjectionSpec& spec, std::vector<std::string>* reasons) {
  bool ok = true;
  if (spec.carrier.blocks.empty()) add_reason(reasons, &ok, "carrier has no blocks");
  if (spec.target.order.blocks.empty()) add_reason(reasons, &ok, "target has no blocks");
  if (spec.rules.size() != spec.carrier.blocks.size())
    add_reason(reasons, &ok, "expected one rule per carrier block");
  if (!ok) return false;

  // rule shapes
  for (size_t b = 0; b < spec.rules.size(); ++b) {
    const LabelRule& rule = spec.rules[b];
    BlockKind kind = spec.carrier.blocks[b];
    std::string where = "block " + std::to_string(b) + ": ";
    if (const auto* c = std::get_if<ConstRule>(&rule)) {
      if (!address_valid(spec.target.order, c->alpha))
        add_reason(reasons, &ok, where + "constant label is not a target address");
    } else if (const auto* m = std::get_if<MonoRule>(&rule)) {
      if (m->a_block < 0 || (size_t)m->a_block >= spec.target.order.blocks.size()) {
        add_reason(reasons, &ok, where + "monotone rule targets a missing block");
        continue;
      }
      PRange er = block_positions(kind);
      PRange ar = block_positions(spec.target.order.blocks[(size_t)m->a_block]);
      auto check_end = [&](std::optional<long long> ep, bool low_image) {
        if (!ep) {
          if (low_image ? ar.lo.has_value() : ar.hi.has_value())
            add_reason(reasons, &ok, where + "monotone image runs off the target block");
          return;
        }
        i128 v = (i128)m->stride * *ep + m->base;
        if (v < (i128)kLLMin || v > (i128)kLLMax) {
          add_reason(reasons, &ok, where + "monotone image overflows");
          return;
        }
        if (!ar.contains((long long)v))
          add_reason(reasons, &ok, where + "monotone image leaves the target block");
      };
      if (m->stride >= 0) {
        check_end(er.lo, true);
        check_end(er.hi, false);
      } else {
        check_end(er.hi, true);
        check_end(er.lo, false);
      }
    } else if (const auto* p = std::get_if<PeriodicRule>(&rule)) {
      if (kind.tag == BlockTag::fin_chain)
        add_reason(reasons, &ok, where + "periodic rule on a finite block");
      if (p->pattern.empty()) add_reason(reasons, &ok, where + "empty periodic pattern");
      for (const Address& a : p->pattern)
        if (!address_valid(spec.target.order, a)) {
          add_reason(reasons, &ok, where + "periodic label is not a target address");
          break;
        }
    } else {
      const auto& list = std::get<ListRule>(rule).labels;
      if (kind.tag != BlockTag::fin_chain || (long long)list.size() != kind.length)
        add_reason(reasons, &ok, where + "list rule must match a finite block of its length");
      for (const Address& a : list)
        if (!address_valid(spec.target.order, a)) {
          add_reason(reasons, &ok, where + "list label is not a target address");
          break;
        }
    }
  }
  if (!ok) return false;

  if (!check_coverage(spec, reasons)) ok = false;

  // equivariance
  if (spec.involution) {
    std::vector<std::string> ivr;
    if (!validate_involution(spec.carrier, *spec.involution, &ivr)) {
      for (const auto& r : ivr) add_reason(reasons, &ok, "carrier involution: " + r);
      return false;
    }
    if (!spec.target.involution) {
      add_reason(reasons, &ok, "carrier involution requires a target involution");
      return false;
    }
    std::vector<std::string> tvr;
    if (!validate_involution(spec.target.order, *spec.target.involution, &tvr)) {
      for (const auto& r : tvr) add_reason(reasons, &ok, "target involution: " + r);
      return false;
    }
    Involution ivE = Involution::compile(spec.carrier, *spec.involution);
    Involution ivA = Involution::compile(spec.target.order, *spec.target.involution);
    for (size_t b = 0; b < spec.rules.size(); ++b) {
      int pb = ivE.partner((int)b);
      if (pb < (int)b) continue;
      auto want = mirror_rule(spec.rules[b], ivA, ivE.mu((int)b));
      if (!want || !(spec.rules[(size_t)pb] == *want))
        add_reason(reasons, &ok,
                   "rule on block " + std::to_string(pb) + " is not the mirror of block " +
                       std::to_string(b));
    }
  } else if (spec.target.involution) {
    std::vector<std::string> tvr;
    if (!validate_involution(spec.target.order, *spec.target.involution, &tvr))
      for (const auto& r : tvr) add_reason(reasons, &ok, "target involution: " + r);
  }
  return ok;
}

namespace {

void require_valid(const SurjectionSpec& spec) {
  std::vector<std::string> reasons;
  if (validate(spec, &reasons)) return;
  std::string msg = "invalid surjection spec";
  for (size_t i = 0; i < reasons.size() && i < 3; ++i) msg += "; " + reasons[i];
  fail(Errc::schema_error, msg);
}

}  // namespace

CellDescriptor make_cell(SurjectionSpec spec, FinPerm w) {
  require_valid(spec);
  if (!(w.carrier == spec.carrier))
    fail(Errc::carrier_mismatch, "permutation lives on a different carrier");
  return CellDescriptor{std::move(spec), std::move(w), false};
}

CellDescriptor make_omega_cell(SurjectionSpec spec, const OmegaPerm& w) {
  require_valid(spec);
  if (!spec.involution) fail(Errc::carrier_mismatch, "spec has no carrier involution");
  if (!(w.underlying.carrier == spec.carrier) || !(w.involution == *spec.involution))
    fail(Errc::carrier_mismatch, "permutation lives on a different symmetric carrier");
  return CellDescriptor{std::move(spec), w.underlying, true};
}

Address sigma0_eval(const SurjectionSpec& spec, Address e) {
  check_address(spec.carrier, e);
  Pos pe = to_pos(spec.carrier, e);
  return to_address(spec.target.order,
                    counting::label_at(spec.target, spec.rules[(size_t)e.block], pe.p));
}

Address sigma_eval(const CellDescriptor& cell, Address e) {
  return sigma0_eval(cell.base, apply(inverse(cell.w), e));
}

ExtendedCount pair_inversion_count(const TargetOrder& target, BlockKind block_x,
                                   const LabelRule& rule_x, BlockKind block_y,
                                   const LabelRule& rule_y, PairRelation relation) {
  if (relation == PairRelation::same_block) {
    if (!(block_x == block_y) || !(rule_x == rule_y))
      fail(Errc::unsupported_rule_combination, "same-block pair needs one shared rule");
    return counting::triangular_count(target, rule_x, block_positions(block_x));
  }
  return counting::cross_count(target, rule_x, block_positions(block_x), rule_y,
                               block_positions(block_y));
}

namespace {

// ---- inversion assemblies --------------------------------------------------

struct Piece {
  int block;
  PRange r;
};

std::vector<Piece> make_pieces(const SurjectionSpec& spec,
                               const std::function<PRange(int)>& base,
                               const std::vector<Pos>& punctures) {
  std::vector<Piece> out;
  for (int b = 0; b < (int)spec.carrier.blocks.size(); ++b) {
    PRange r0 = intersect(base(b), block_positions(spec.carrier.blocks[(size_t)b]));
    if (r0.is_empty()) continue;
    std::optional<long long> lo = r0.lo;
    bool low_open = !r0.lo;
    for (const Pos& s : punctures) {
      if (s.block != b || !r0.contains(s.p)) continue;
      PRange g;
      g.lo = low_open ? std::nullopt : lo;
      g.hi = s.p - 1;
      if (!g.is_empty()) out.push_back({b, g});
      low_open = false;
      lo = s.p + 1;
    }
    PRange g;
    g.lo = low_open ? std::nullopt : lo;
    g.hi = r0.hi;
    if (!g.is_empty()) out.push_back({b, g});
  }
  return out;
}

PRange part_after(const Piece& pc, Pos s) {
  if (pc.block < s.block) return PRange::none();
  if (pc.block > s.block) return pc.r;
  return intersect(pc.r, PRange::at_least(s.p + 1));
}
PRange part_before(const Piece& pc, Pos s) {
  if (pc.block > s.block) return PRange::none();
  if (pc.block < s.block) return pc.r;
  return intersect(pc.r, PRange::at_most(s.p - 1));
}
PRange part_from(const Piece& pc, Pos s) {  // >= s
  if (pc.block < s.block) return PRange::none();
  if (pc.block > s.block) return pc.r;
  return intersect(pc.r, PRange::at_least(s.p));
}

struct CellView {
  const SurjectionSpec* spec;
  std::vector<Pos> sup;           // sorted support positions
  std::vector<Pos> sigma;         // label position at each support element
};

CellView view_of(const CellDescriptor& cell) {
  CellView v;
  v.spec = &cell.base;
  FinPerm winv = inverse(cell.w);
  std::vector<std::pair<Pos, Pos>> rows;
  for (const Address& e : support(cell.w))
    rows.emplace_back(to_pos(cell.base.carrier, e),
                      to_pos(cell.base.target.order, sigma0_eval(cell.base, apply(winv, e))));
  std::sort(rows.begin(), rows.end());
  for (auto& [s, lam] : rows) {
    v.sup.push_back(s);
    v.sigma.push_back(lam);
  }
  return v;
}

const LabelRule& rule_of(const SurjectionSpec& spec, int block) {
  return spec.rules[(size_t)block];
}

}  // namespace

ExtendedCount inversion_number(const CellDescriptor& cell) {
  const SurjectionSpec& spec = cell.base;
  const TargetOrder& target = spec.target;
  CellView v = view_of(cell);
  std::vector<Piece> pieces =
      make_pieces(spec, [](int) { return PRange::all(); }, v.sup);

  ExtendedCount total;
  for (const Piece& pc : pieces) {
    total += counting::triangular_count(target, rule_of(spec, pc.block), pc.r);
    if (total.is_infinite()) return total;
  }
  for (size_t i = 0; i < pieces.size(); ++i)
    for (size_t j = i + 1; j < pieces.size(); ++j) {
      total += counting::cross_count(target, rule_of(spec, pieces[i].block), pieces[i].r,
                                     rule_of(spec, pieces[j].block), pieces[j].r);
      if (total.is_infinite()) return total;
    }
  for (size_t k = 0; k < v.sup.size(); ++k) {
    Pos s = v.sup[k], lam = v.sigma[k];
    for (const Piece& pc : pieces) {
      total += counting::count_labels_below(target, rule_of(spec, pc.block),
                                            part_after(pc, s), lam);
      total += counting::count_labels_above(target, rule_of(spec, pc.block),
                                            part_before(pc, s), lam);
      if (total.is_infinite()) return total;
    }
  }
  for (size_t i = 0; i < v.sup.size(); ++i)
    for (size_t j = i + 1; j < v.sup.size(); ++j)
      if (v.sigma[i] > v.sigma[j]) total += ExtendedCount::finite(1);
  return total;
}

ExtendedCount omega_inversion_number(const CellDescriptor& cell) {
  const SurjectionSpec& spec = cell.base;
  if (!spec.involution)
    fail(Errc::carrier_mismatch, "equivariant count needs a carrier involution");
  const TargetOrder& target = spec.target;
  Involution iv = Involution::compile(spec.carrier, *spec.involution);
  CellView v = view_of(cell);
  std::vector<Piece> lpieces =
      make_pieces(spec, [&](int b) { return iv.left_range(b); }, v.sup);
  std::vector<Piece> rpieces =
      make_pieces(spec, [&](int b) { return iv.right_range(b); }, v.sup);

  ExtendedCount total;
  // pairs with both coordinates in the left half
  for (const Piece& pc : lpieces) {
    total += counting::triangular_count(target, rule_of(spec, pc.block), pc.r);
    if (total.is_infinite()) return total;
  }
  for (size_t i = 0; i < lpieces.size(); ++i)
    for (size_t j = i + 1; j < lpieces.size(); ++j) {
      total += counting::cross_count(target, rule_of(spec, lpieces[i].block), lpieces[i].r,
                                     rule_of(spec, lpieces[j].block), lpieces[j].r);
      if (total.is_infinite()) return total;
    }
  // pairs (x, y), x left, y >= i(x): y stays right of the mirror line
  for (const Piece& pl : lpieces) {
    int pb = iv.partner(pl.block);
    for (const Piece& pr : rpieces) {
      if (pr.block > pb) {
        total += counting::cross_count(target, rule_of(spec, pl.block), pl.r,
                                       rule_of(spec, pr.block), pr.r);
      } else if (pr.block == pb) {
        total += counting::coupled_count(target, rule_of(spec, pl.block), pl.r,
                                         rule_of(spec, pr.block), pr.r, iv.mu(pl.block));
      }
      if (total.is_infinite()) return total;
    }
  }
  // support rays
  for (size_t k = 0; k < v.sup.size(); ++k) {
    Pos s = v.sup[k], lam = v.sigma[k];
    if (iv.in_left(s)) {
      Pos is = iv.apply(s);
      for (const Piece& pc : lpieces) {
        total += counting::count_labels_below(target, rule_of(spec, pc.block),
                                              part_after(pc, s), lam);
        total += counting::count_labels_above(target, rule_of(spec, pc.block),
                                              part_before(pc, s), lam);
      }
      for (const Piece& pc : rpieces)
        total += counting::count_labels_below(target, rule_of(spec, pc.block),
                                              part_from(pc, is), lam);
    } else {
      Pos is = iv.apply(s);
      for (const Piece& pc : lpieces)
        total += counting::count_labels_above(target, rule_of(spec, pc.block),
                                              part_from(pc, is), lam);
    }
    if (total.is_infinite()) return total;
  }
  // support pairs, one per mirror class
  for (size_t i = 0; i < v.sup.size(); ++i) {
    if (!iv.in_left(v.sup[i])) continue;
    Pos mirror = iv.apply(v.sup[i]);
    for (size_t j = 0; j < v.sup.size(); ++j) {
      if (!(v.sup[i] < v.sup[j])) continue;
      bool counted = iv.in_left(v.sup[j]) || !(v.sup[j] < mirror);
      if (counted && v.sigma[i] > v.sigma[j]) total += ExtendedCount::finite(1);
    }
  }
  return total;
}

ExtendedCount m_B_P(const SurjectionSpec& spec, const FinPerm& w) {
  return inversion_number(make_cell(spec, inverse(w)));
}

ExtendedCount m_B_P(const SurjectionSpec& spec, const OmegaPerm& w) {
  return omega_inversion_number(make_omega_cell(spec, inverse(w)));
}

namespace {

// Prefix-rank dominance of two labelings of the same sorted index set:
// sigma <= tau in the coarse order iff every prefix of sigma holds at least
// as many labels <= alpha as the same prefix of tau, for every alpha.
bool rank_dominates(const std::vector<Pos>& sig, const std::vector<Pos>& tau) {
  std::vector<Pos> labels = sig;
  labels.insert(labels.end(), tau.begin(), tau.end());
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  for (const Pos& alpha : labels) {
    long long rs = 0, rt = 0;
    for (size_t k = 0; k < sig.size(); ++k) {
      if (!(sig[k] > alpha)) ++rs;
      if (!(tau[k] > alpha)) ++rt;
      if (rs < rt) return false;
    }
  }
  return true;
}

void require_same_orbit(const CellDescriptor& s, const CellDescriptor& t) {
  if (!(s.base == t.base))
    fail(Errc::orbit_mismatch, "cells come from different base surjections");
}

std::vector<Pos> union_support(const CellDescriptor& s, const CellDescriptor& t) {
  std::set<Pos> acc;
  for (const Address& e : support(s.w)) acc.insert(to_pos(s.base.carrier, e));
  for (const Address& e : support(t.w)) acc.insert(to_pos(t.base.carrier, e));
  return {acc.begin(), acc.end()};
}

std::vector<Pos> labels_on(const CellDescriptor& c, const std::vector<Pos>& where) {
  FinPerm winv = inverse(c.w);
  std::vector<Pos> out;
  out.reserve(where.size());
  for (const Pos& q : where)
    out.push_back(to_pos(c.base.target.order,
                         sigma0_eval(c.base, apply(winv, to_address(c.base.carrier, q)))));
  return out;
}

}  // namespace

bool bruhat_leq(const CellDescriptor& s, const CellDescriptor& t) {
  require_same_orbit(s, t);
  std::vector<Pos> I = union_support(s, t);
  if (I.empty()) return true;
  return rank_dominates(labels_on(s, I), labels_on(t, I));
}

bool omega_bruhat_leq(const CellDescriptor& s, const CellDescriptor& t) {
  require_same_orbit(s, t);
  if (!s.base.involution)
    fail(Errc::carrier_mismatch, "equivariant order needs a carrier involution");
  std::vector<Pos> W = union_support(s, t);
  if (W.empty()) return true;
  Involution iv = Involution::compile(s.base.carrier, *s.base.involution);
  {
    // the hull must be mirror closed
    std::set<Pos> acc(W.begin(), W.end());
    for (const Pos& q : W) acc.insert(iv.apply(q));
    W.assign(acc.begin(), acc.end());
  }
  std::vector<Pos> start = labels_on(s, W), goal = labels_on(t, W);
  if (start == goal) return true;
  if (!rank_dominates(start, goal)) return false;  // coarse order bounds the fine one

  std::map<Pos, size_t> widx;
  for (size_t i = 0; i < W.size(); ++i) widx[W[i]] = i;
  auto local_inv = [&](const std::vector<Pos>& lab) {
    long long n = 0;
    for (size_t i = 0; i < W.size(); ++i) {
      if (!iv.in_left(W[i])) continue;
      Pos mirror = iv.apply(W[i]);
      for (size_t j = i + 1; j < W.size(); ++j) {
        bool counted = iv.in_left(W[j]) || !(W[j] < mirror);
        if (counted && lab[i] > lab[j]) ++n;
      }
    }
    return n;
  };
  long long bound = local_inv(goal);
  if (local_inv(start) > bound) return false;

  std::set<std::vector<Pos>> seen{start};
  std::queue<std::vector<Pos>> q;
  q.push(start);
  while (!q.empty()) {
    std::vector<Pos> cur = std::move(q.front());
    q.pop();
    long long cinv = local_inv(cur);
    for (size_t ai = 0; ai < W.size(); ++ai)
      for (size_t bi = ai + 1; bi < W.size(); ++bi) {
        if (cur[ai] == cur[bi]) continue;
        std::vector<Pos> next = cur;
        std::swap(next[ai], next[bi]);
        size_t ia = widx.at(iv.apply(W[ai])), ib = widx.at(iv.apply(W[bi]));
        if (!(ia == bi && ib == ai) && !(ia == ai && ib == bi))
          std::swap(next[ia], next[ib]);
        long long ninv = local_inv(next);
        if (ninv <= cinv || ninv > bound) continue;
        if (next == goal) return true;
        if (seen.insert(next).second) q.push(std::move(next));
      }
  }
  return false;
}

bool grassmannian_leq(std::vector<Address> sigma, std::vector<Address> tau,
                      const OrderSpec& border) {
  auto to_sorted = [&](std::vector<Address>& v) {
    std::vector<Pos> out;
    out.reserve(v.size());
    for (const Address& a : v) {
      check_address(border, a);
      out.push_back(to_pos(border, a));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  std::vector<Pos> ps = to_sorted(sigma), pt = to_sorted(tau);
  std::vector<Pos> ds, dt;
  std::set_difference(ps.begin(), ps.end(), pt.begin(), pt.end(), std::back_inserter(ds));
  std::set_difference(pt.begin(), pt.end(), ps.begin(), ps.end(), std::back_inserter(dt));
  if (ds.size() != dt.size())
    fail(Errc::size_mismatch, "selected sets differ by an unequal exchange");
  for (size_t i = 0; i < ds.size(); ++i)
    if (!(ds[i] < dt[i])) return false;
  return true;
}

namespace {

constexpr size_t kFiberZoneCap = 4096;

// Base-labeling fiber of alpha inside the closed carrier interval [lo, hi],
// in carrier order, or nullopt when that set is infinite or too large to
// enumerate.
std::optional<std::vector<Address>> fiber_in_zone(const SurjectionSpec& spec, Pos alpha,
                                                  Pos lo, Pos hi) {
  std::vector<Address> out;
  auto push = [&out, &spec](int b, long long p) {
    if (out.size() >= kFiberZoneCap) return false;
    out.push_back(to_address(spec.carrier, {b, p}));
    return true;
  };
  for (int b = lo.block; b <= hi.block && b < (int)spec.carrier.blocks.size(); ++b) {
    PRange r = block_positions(spec.carrier.blocks[(size_t)b]);
    if (b == lo.block) r = intersect(r, PRange::at_least(lo.p));
    if (b == hi.block) r = intersect(r, PRange::at_most(hi.p));
    if (r.is_empty()) continue;
    const LabelRule& rule = spec.rules[(size_t)b];
    if (const auto* c = std::get_if<ConstRule>(&rule)) {
      if (!(to_pos(spec.target.order, c->alpha) == alpha)) continue;
      if (!r.lo || !r.hi) return std::nullopt;
      for (long long p = *r.lo; p <= *r.hi; ++p)
        if (!push(b, p)) return std::nullopt;
    } else if (const auto* m = std::get_if<MonoRule>(&rule)) {
      if (m->a_block != alpha.block) continue;
      long long num = alpha.p - m->base;
      if (num % m->stride != 0) continue;
      long long p = num / m->stride;
      if (r.contains(p) && !push(b, p)) return std::nullopt;
    } else if (const auto* pr = std::get_if<PeriodicRule>(&rule)) {
      long long L = (long long)pr->pattern.size();
      bool hits = false;
      for (long long j = 0; j < L; ++j)
        if (to_pos(spec.target.order, pr->pattern[(size_t)j]) == alpha) hits = true;
      if (!hits) continue;
      if (!r.lo || !r.hi) return std::nullopt;
      for (long long p = *r.lo; p <= *r.hi; ++p)
        if (to_pos(spec.target.order, pr->pattern[(size_t)counting::mod_floor(p, L)]) == alpha &&
            !push(b, p))
          return std::nullopt;
    } else {
      const auto& list = std::get<ListRule>(rule).labels;
      for (long long p = std::max<long long>(0, *r.lo);
           p <= *r.hi && p < (long long)list.size(); ++p)
        if (to_pos(spec.target.order, list[(size_t)p]) == alpha && !push(b, p))
          return std::nullopt;
    }
  }
  return out;
}

}  // namespace

FinPerm canonical_representative(const CellDescriptor& cell) {
  const SurjectionSpec& spec = cell.base;
  FinPerm winv = inverse(cell.w);
  std::map<Pos, std::vector<Address>> gained, lost;
  for (const Address& e : support(cell.w)) {
    Address se = sigma0_eval(spec, apply(winv, e));
    Address s0 = sigma0_eval(spec, e);
    if (se == s0) continue;
    gained[to_pos(spec.target.order, se)].push_back(e);
    lost[to_pos(spec.target.order, s0)].push_back(e);
  }
  auto by_pos = [&spec](const Address& a, const Address& b) {
    return to_pos(spec.carrier, a) < to_pos(spec.carrier, b);
  };
  std::map<Address, Address> moves;
  for (auto& [alpha, tos] : gained) {
    auto& froms = lost[alpha];
    if (froms.size() != tos.size())
      fail(Errc::internal, "fiber sizes disagree in canonical representative");
    std::sort(tos.begin(), tos.end(), by_pos);
    std::sort(froms.begin(), froms.end(), by_pos);

    // Matching only the displaced part of the fiber skips over undisturbed
    // fiber elements inside the active zone and can overshoot; matching the
    // whole fiber there keeps the representative as short as possible. When
    // the zone is infinite the displaced part is the only usable matching.
    Pos lo = std::min(to_pos(spec.carrier, froms.front()), to_pos(spec.carrier, tos.front()));
    Pos hi = std::max(to_pos(spec.carrier, froms.back()), to_pos(spec.carrier, tos.back()));
    std::vector<Address> sources = froms, targets = tos;
    if (auto zone = fiber_in_zone(spec, alpha, lo, hi)) {
      sources = *zone;
      targets.clear();
      size_t j = 0;
      for (const Address& e : sources) {
        if (j < froms.size() && e == froms[j]) {
          ++j;
          continue;
        }
        targets.push_back(e);
      }
      targets.insert(targets.end(), tos.begin(), tos.end());
      std::sort(targets.begin(), targets.end(), by_pos);
      if (sources.size() != targets.size())
        fail(Errc::internal, "zone matching out of balance");
    }
    for (size_t k = 0; k < sources.size(); ++k)
      if (!(sources[k] == targets[k])) moves[sources[k]] = targets[k];
  }
  return make_fin_perm(spec.carrier, moves);
}

bool is_in_W_P(const FinPerm& w, const SurjectionSpec& sigma0) {
  if (!(w.carrier == sigma0.carrier))
    fail(Errc::carrier_mismatch, "permutation lives on a different carrier");
  for (const Address& e : support(w))
    if (!(sigma0_eval(sigma0, apply(w, e)) == sigma0_eval(sigma0, e))) return false;
  return true;
}

bool is_in_W_P(const OmegaPerm& w, const SurjectionSpec& sigma0) {
  return is_in_W_P(w.underlying, sigma0);
}

}  // namespace indflag
