#include "indflag/permutations.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace indflag {

FinPerm identity_perm(const OrderSpec& spec) { return {spec, {}}; }

FinPerm make_fin_perm(const OrderSpec& spec, const std::map<Address, Address>& moves) {
  FinPerm w{spec, {}};
  std::set<Address> range;
  for (const auto& [from, to] : moves) {
    check_address(spec, from);
    check_address(spec, to);
    if (from == to) continue;
    if (!range.insert(to).second) fail(Errc::invalid_address, "moves are not injective");
    w.moves.emplace(from, to);
  }
  for (const auto& [from, to] : w.moves)
    if (!w.moves.count(to)) fail(Errc::invalid_address, "moves do not permute their support");
  return w;
}

Address apply(const FinPerm& w, Address e) {
  check_address(w.carrier, e);
  auto it = w.moves.find(e);
  return it == w.moves.end() ? e : it->second;
}

FinPerm compose(const FinPerm& u, const FinPerm& v) {
  if (!(u.carrier == v.carrier)) fail(Errc::carrier_mismatch, "compose needs a common carrier");
  std::map<Address, Address> moves;
  for (const auto& [from, to] : u.moves) moves[from] = apply(v, to);
  for (const auto& [from, to] : v.moves)
    if (!u.moves.count(from)) moves[from] = to;
  FinPerm w{u.carrier, {}};
  for (const auto& [from, to] : moves)
    if (from != to) w.moves.emplace(from, to);
  return w;
}

FinPerm inverse(const FinPerm& w) {
  FinPerm r{w.carrier, {}};
  for (const auto& [from, to] : w.moves) r.moves.emplace(to, from);
  return r;
}

FinPerm transposition(const OrderSpec& spec, Address a, Address b) {
  check_address(spec, a);
  check_address(spec, b);
  if (a == b) fail(Errc::equal_addresses, "transposition needs two distinct addresses");
  FinPerm w{spec, {}};
  w.moves.emplace(a, b);
  w.moves.emplace(b, a);
  return w;
}

OmegaPerm identity_omega(const OrderSpec& spec, const InvolutionSpec& inv) {
  Involution::compile(spec, inv);
  return {identity_perm(spec), inv};
}

OmegaPerm make_omega_perm(const OrderSpec& spec, const InvolutionSpec& inv, FinPerm w) {
  Involution iv = Involution::compile(spec, inv);
  if (!(w.carrier == spec)) fail(Errc::carrier_mismatch, "permutation lives on another carrier");
  for (const auto& [from, to] : w.moves)
    if (!(apply(w, iv.apply(from)) == iv.apply(to)))
      fail(Errc::carrier_mismatch, "permutation does not commute with the involution");
  return {std::move(w), inv};
}

OmegaPerm omega_transposition(const OrderSpec& spec, const InvolutionSpec& inv, Address a,
                              Address b) {
  Involution iv = Involution::compile(spec, inv);
  check_address(spec, a);
  check_address(spec, b);
  if (a == b) fail(Errc::equal_addresses, "omega transposition needs two distinct addresses");
  Address ia = iv.apply(a), ib = iv.apply(b);
  if (ia == a || ib == b)
    fail(Errc::fixed_point_argument, "omega transposition cannot move the fixed point");
  FinPerm t = transposition(spec, a, b);
  if (!(b == ia)) t = compose(t, transposition(spec, ia, ib));
  return {std::move(t), inv};
}

Address apply(const OmegaPerm& w, Address e) { return apply(w.underlying, e); }

OmegaPerm compose(const OmegaPerm& u, const OmegaPerm& v) {
  if (!(u.involution == v.involution))
    fail(Errc::carrier_mismatch, "compose needs a common involution");
  return {compose(u.underlying, v.underlying), u.involution};
}

OmegaPerm inverse(const OmegaPerm& w) { return {inverse(w.underlying), w.involution}; }

std::vector<Address> support(const FinPerm& w) {
  std::vector<Address> s;
  s.reserve(w.moves.size());
  for (const auto& [from, to] : w.moves) s.push_back(from);
  std::sort(s.begin(), s.end(), [&](Address x, Address y) {
    return to_pos(w.carrier, x) < to_pos(w.carrier, y);
  });
  return s;
}

namespace {

using Restrict = std::function<PRange(int)>;

// Number of background elements in the open interval (lo, hi), optionally
// intersected with a per-block range, excluding the support set.
ExtendedCount count_region(const OrderSpec& spec, Pos lo, Pos hi, const Restrict& restrict,
                           const std::set<Pos>& support_pos) {
  if (!(lo < hi)) return ExtendedCount::finite(0);
  ExtendedCount total = ExtendedCount::finite(0);
  for (int b = lo.block; b <= hi.block; ++b) {
    PRange r = block_positions(spec.blocks[(size_t)b]);
    if (b == lo.block) r = intersect(r, PRange::at_least(lo.p + 1));
    if (b == hi.block) r = intersect(r, PRange::at_most(hi.p - 1));
    if (restrict) r = intersect(r, restrict(b));
    ExtendedCount c = range_count(r);
    if (c.is_infinite()) return c;
    std::uint64_t inside = 0;
    for (const Pos& q : support_pos)
      if (q.block == b && r.contains(q.p)) ++inside;
    total += ExtendedCount::finite(c.value() - inside);
  }
  return total;
}

struct PermView {
  const OrderSpec& spec;
  std::vector<Pos> sup;        // sorted
  std::set<Pos> sup_set;
  std::map<Pos, Pos> image;    // on the support

  explicit PermView(const FinPerm& w) : spec(w.carrier) {
    for (const auto& [from, to] : w.moves) {
      Pos f = to_pos(spec, from), t = to_pos(spec, to);
      sup.push_back(f);
      sup_set.insert(f);
      image.emplace(f, t);
    }
    std::sort(sup.begin(), sup.end());
  }

  Pos img(Pos q) const {
    auto it = image.find(q);
    return it == image.end() ? q : it->second;
  }

  // Prop-style finiteness test: some support point jumps over an infinite set.
  bool has_infinite_jump() const {
    for (const Pos& s : sup) {
      Pos t = image.at(s);
      if (count_region(spec, std::min(s, t), std::max(s, t), nullptr, {}).is_infinite())
        return true;
    }
    return false;
  }
};

Restrict at_least_pos(Pos q) {
  return [q](int b) {
    if (b > q.block) return PRange::all();
    if (b == q.block) return PRange::at_least(q.p);
    return PRange::none();
  };
}

Restrict combine(Restrict a, Restrict b) {
  return [a = std::move(a), b = std::move(b)](int blk) { return intersect(a(blk), b(blk)); };
}

}  // namespace

ExtendedCount length(const FinPerm& w) {
  PermView v(w);
  if (v.has_infinite_jump()) return ExtendedCount::infinite();
  std::uint64_t total = 0;
  for (size_t i = 0; i < v.sup.size(); ++i)
    for (size_t j = i + 1; j < v.sup.size(); ++j)
      if (v.image.at(v.sup[i]) > v.image.at(v.sup[j])) ++total;
  ExtendedCount rays = ExtendedCount::finite(0);
  for (const Pos& s : v.sup) {
    Pos t = v.image.at(s);
    rays += count_region(v.spec, std::min(s, t), std::max(s, t), nullptr, v.sup_set);
  }
  if (rays.is_infinite()) fail(Errc::internal, "ray count infinite after jump check");
  return ExtendedCount::finite(total) + rays;
}

ExtendedCount length(const OmegaPerm& w) {
  Involution iv = Involution::compile(w.underlying.carrier, w.involution);
  PermView v(w.underlying);
  if (v.has_infinite_jump()) return ExtendedCount::infinite();

  auto in_left = [&](Pos q) { return iv.in_left(q); };
  auto counted = [&](Pos e, Pos ep) {  // e < ep assumed
    if (!in_left(e)) return false;
    bool f1 = in_left(ep);
    bool f2 = !(ep < iv.apply(e));
    return f1 || f2;
  };

  std::uint64_t brute = 0;
  for (size_t i = 0; i < v.sup.size(); ++i)
    for (size_t j = i + 1; j < v.sup.size(); ++j)
      if (counted(v.sup[i], v.sup[j]) && v.image.at(v.sup[i]) > v.image.at(v.sup[j])) ++brute;

  Restrict left = [&iv](int b) { return iv.left_range(b); };
  ExtendedCount rays = ExtendedCount::finite(0);
  for (const Pos& s : v.sup) {
    Pos t = v.image.at(s);
    if (in_left(s)) {
      if (s < t) {
        // background second coordinates: in L, or at least i(s)
        rays += count_region(v.spec, s, t, left, v.sup_set);
        rays += count_region(v.spec, s, t, at_least_pos(iv.apply(s)), v.sup_set);
      } else {
        // background first coordinates, both sides in L
        rays += count_region(v.spec, t, s, left, v.sup_set);
      }
    } else if (iv.in_right(s)) {
      // background first coordinates e in L with e >= i(s) and e > w(s)
      Pos lo = std::max(t, iv.apply(s));
      rays += count_region(v.spec, lo, s, combine(left, at_least_pos(iv.apply(s))), v.sup_set);
    }
  }
  if (rays.is_infinite()) fail(Errc::internal, "ray count infinite after jump check");
  return ExtendedCount::finite(brute) + rays;
}

namespace {

long long truncated_count(const OrderSpec& spec, const FinPerm& w,
                          const std::vector<Address>& window,
                          const std::function<bool(Pos, Pos)>& counted) {
  std::set<Address> in_window(window.begin(), window.end());
  for (const auto& [from, to] : w.moves)
    if (!in_window.count(from))
      fail(Errc::support_exceeds_truncation, "support address outside the truncation");
  std::vector<Pos> pts;
  pts.reserve(window.size());
  for (const Address& a : window) pts.push_back(to_pos(spec, a));
  std::sort(pts.begin(), pts.end());
  std::map<Pos, Pos> img;
  for (const Pos& q : pts) img[q] = to_pos(spec, apply(w, to_address(spec, q)));
  long long total = 0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      if (counted(pts[i], pts[j]) && img[pts[i]] > img[pts[j]]) ++total;
  return total;
}

}  // namespace

long long length_truncated(const FinPerm& w, long long radius) {
  auto window = enumerate_truncation(w.carrier, std::nullopt, radius);
  return truncated_count(w.carrier, w, window, [](Pos, Pos) { return true; });
}

long long length_truncated(const OmegaPerm& w, long long radius) {
  const OrderSpec& spec = w.underlying.carrier;
  Involution iv = Involution::compile(spec, w.involution);
  auto window = enumerate_truncation(spec, w.involution, radius);
  auto counted = [&iv](Pos e, Pos ep) {
    if (!iv.in_left(e)) return false;
    return iv.in_left(ep) || !(ep < iv.apply(e));
  };
  return truncated_count(spec, w.underlying, window, counted);
}

}  // namespace indflag
