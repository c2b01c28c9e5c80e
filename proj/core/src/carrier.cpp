#include "indflag/carrier.hpp"

#include <algorithm>
#include <set>

namespace indflag {

BlockKind fin_chain(long long n) {
  if (n < 1) fail(Errc::invalid_address, "fin_chain length must be >= 1");
  return {BlockTag::fin_chain, n};
}
BlockKind omega_up() { return {BlockTag::omega_up, 0}; }
BlockKind omega_down() { return {BlockTag::omega_down, 0}; }
BlockKind z_line() { return {BlockTag::z_line, 0}; }

bool address_valid(const OrderSpec& spec, Address a) {
  if (a.block < 0 || (size_t)a.block >= spec.blocks.size()) return false;
  const BlockKind& k = spec.blocks[(size_t)a.block];
  switch (k.tag) {
    case BlockTag::fin_chain: return 0 <= a.offset && a.offset < k.length;
    case BlockTag::omega_up:
    case BlockTag::omega_down: return a.offset >= 0;
    case BlockTag::z_line: return true;
  }
  return false;
}

void check_address(const OrderSpec& spec, Address a) {
  if (!address_valid(spec, a))
    fail(Errc::invalid_address, "address (" + std::to_string(a.block) + "," +
                                    std::to_string(a.offset) + ") not valid for order '" +
                                    spec.name + "'");
}

Pos to_pos(const OrderSpec& spec, Address a) {
  check_address(spec, a);
  const BlockKind& k = spec.blocks[(size_t)a.block];
  long long p = (k.tag == BlockTag::omega_down) ? -a.offset : a.offset;
  return {a.block, p};
}

Address to_address(const OrderSpec& spec, Pos q) {
  if (q.block < 0 || (size_t)q.block >= spec.blocks.size())
    fail(Errc::invalid_address, "position block out of range");
  const BlockKind& k = spec.blocks[(size_t)q.block];
  Address a{q.block, (k.tag == BlockTag::omega_down) ? -q.p : q.p};
  check_address(spec, a);
  return a;
}

PRange intersect(PRange a, PRange b) {
  PRange r;
  if (a.lo && b.lo) r.lo = std::max(*a.lo, *b.lo);
  else r.lo = a.lo ? a.lo : b.lo;
  if (a.hi && b.hi) r.hi = std::min(*a.hi, *b.hi);
  else r.hi = a.hi ? a.hi : b.hi;
  return r;
}

ExtendedCount range_count(PRange r) {
  if (r.is_empty()) return ExtendedCount::finite(0);
  if (!r.lo || !r.hi) return ExtendedCount::infinite();
  return ExtendedCount::finite((std::uint64_t)(*r.hi - *r.lo + 1));
}

PRange block_positions(BlockKind k) {
  switch (k.tag) {
    case BlockTag::fin_chain: return PRange::closed(0, k.length - 1);
    case BlockTag::omega_up: return PRange::at_least(0);
    case BlockTag::omega_down: return PRange::at_most(0);
    case BlockTag::z_line: return PRange::all();
  }
  return PRange::none();
}

ExtendedCount block_cardinality(BlockKind k) { return range_count(block_positions(k)); }

ExtendedCount count_positions(BlockKind k, PRange r) {
  return range_count(intersect(r, block_positions(k)));
}

Cmp compare(const OrderSpec& spec, Address a, Address b) {
  Pos qa = to_pos(spec, a), qb = to_pos(spec, b);
  if (qa == qb) return Cmp::equal;
  return qa < qb ? Cmp::less : Cmp::greater;
}

ExtendedCount interval_cardinality(const OrderSpec& spec, Address a, Address b) {
  if (compare(spec, a, b) != Cmp::less)
    fail(Errc::not_ordered, "interval_cardinality requires a strictly below b");
  Pos qa = to_pos(spec, a), qb = to_pos(spec, b);
  if (qa.block == qb.block)
    return count_positions(spec.blocks[(size_t)qa.block], PRange::closed(qa.p + 1, qb.p - 1));
  ExtendedCount total =
      count_positions(spec.blocks[(size_t)qa.block], PRange::at_least(qa.p + 1));
  for (int b2 = qa.block + 1; b2 < qb.block; ++b2)
    total += block_cardinality(spec.blocks[(size_t)b2]);
  total += count_positions(spec.blocks[(size_t)qb.block], PRange::at_most(qb.p - 1));
  return total;
}

bool embeds_in_Z(const OrderSpec& spec) {
  const auto& bs = spec.blocks;
  if (bs.size() == 1 && bs[0].tag == BlockTag::z_line) return true;
  size_t i = 0;
  if (i < bs.size() && bs[i].tag == BlockTag::omega_down) ++i;
  while (i < bs.size() && bs[i].tag == BlockTag::fin_chain) ++i;
  if (i < bs.size() && bs[i].tag == BlockTag::omega_up) ++i;
  return i == bs.size();
}

std::optional<Address> min_element(const OrderSpec& spec) {
  const BlockKind& k = spec.blocks.front();
  PRange r = block_positions(k);
  if (!r.lo) return std::nullopt;
  return to_address(spec, {0, *r.lo});
}

std::optional<Address> max_element(const OrderSpec& spec) {
  int b = (int)spec.blocks.size() - 1;
  PRange r = block_positions(spec.blocks[(size_t)b]);
  if (!r.hi) return std::nullopt;
  return to_address(spec, {b, *r.hi});
}

namespace {

struct CompiledInvolution {
  std::vector<int> partner;
  std::vector<long long> mu;
  std::optional<Address> fixed;
};

bool compile_involution(const OrderSpec& spec, const InvolutionSpec& inv, CompiledInvolution& out,
                        std::vector<std::string>* reasons) {
  bool ok = true;
  auto complain = [&](const std::string& r) {
    ok = false;
    if (reasons) reasons->push_back(r);
  };
  int n = (int)spec.blocks.size();
  out.partner.assign((size_t)n, -1);
  out.mu.assign((size_t)n, 0);

  for (const PairingEntry& e : inv.pairing) {
    if (e.first < 0 || e.first >= n || e.second < 0 || e.second >= n) {
      complain("pairing entry references a block out of range");
      continue;
    }
    if (e.first > e.second) {
      complain("pairing entries must be listed with first <= second");
      continue;
    }
    if (out.partner[(size_t)e.first] != -1 || (e.first != e.second && out.partner[(size_t)e.second] != -1)) {
      complain("block " + std::to_string(e.first) + " paired more than once");
      continue;
    }
    if (e.second != n - 1 - e.first) {
      complain("block " + std::to_string(e.first) + " must pair with the mirror block " +
               std::to_string(n - 1 - e.first));
      continue;
    }
    const BlockKind& kf = spec.blocks[(size_t)e.first];
    const BlockKind& ks = spec.blocks[(size_t)e.second];
    long long mu = 0;
    if (kf.tag == BlockTag::omega_up && ks.tag == BlockTag::omega_down && e.first != e.second) {
      if (e.shift != 0) complain("omega pairing admits no shift");
      mu = 0;
    } else if (kf.tag == BlockTag::omega_down && ks.tag == BlockTag::omega_up && e.first != e.second) {
      if (e.shift != 0) complain("omega pairing admits no shift");
      mu = 0;
    } else if (kf.tag == BlockTag::fin_chain && ks.tag == BlockTag::fin_chain) {
      if (kf.length != ks.length) {
        complain("paired finite chains must have equal length");
        continue;
      }
      if (e.shift != 0) complain("finite chain pairing admits no shift");
      mu = kf.length - 1;
    } else if (kf.tag == BlockTag::z_line && ks.tag == BlockTag::z_line) {
      mu = e.shift;
    } else {
      complain("pairing of block " + std::to_string(e.first) + " is not order-reversing");
      continue;
    }
    out.partner[(size_t)e.first] = e.second;
    out.partner[(size_t)e.second] = e.first;
    out.mu[(size_t)e.first] = mu;
    out.mu[(size_t)e.second] = mu;
  }

  for (int b = 0; b < n; ++b)
    if (out.partner[(size_t)b] == -1) complain("block " + std::to_string(b) + " is unpaired");
  if (!ok) return false;

  // The only possible fixed point sits in a self-paired middle block.
  out.fixed.reset();
  if (n % 2 == 1) {
    int mid = n / 2;
    const BlockKind& k = spec.blocks[(size_t)mid];
    long long mu = out.mu[(size_t)mid];
    if (mu % 2 == 0) {
      long long p = mu / 2;
      if (block_positions(k).contains(p)) out.fixed = to_address(spec, {mid, p});
    }
    // A self-paired finite chain needs mu = n-1 to map onto itself; already
    // forced above. A self-paired Z block is fine for any shift.
  }

  bool want_fixed = inv.type_tag == 'B';
  if (inv.type_tag != 'B' && inv.type_tag != 'C' && inv.type_tag != 'D')
    complain("type_tag must be one of B, C, D");
  else if (want_fixed && !out.fixed)
    complain("type_tag B requires exactly one fixed point, structure has none");
  else if (!want_fixed && out.fixed)
    complain("type_tag C/D requires no fixed point, structure has one");
  if (inv.fixed_point && (!out.fixed || !(*inv.fixed_point == *out.fixed)))
    complain("declared fixed point does not match the structural one");
  return ok;
}

}  // namespace

bool validate_involution(const OrderSpec& spec, const InvolutionSpec& inv,
                         std::vector<std::string>* reasons) {
  CompiledInvolution c;
  return compile_involution(spec, inv, c, reasons);
}

Involution Involution::compile(const OrderSpec& spec, const InvolutionSpec& inv) {
  CompiledInvolution c;
  std::vector<std::string> reasons;
  if (!compile_involution(spec, inv, c, &reasons)) {
    std::string msg = "involution rejected";
    for (const auto& r : reasons) msg += "; " + r;
    fail(Errc::invalid_address, msg);
  }
  Involution out;
  out.spec_ = spec;
  out.partner_ = std::move(c.partner);
  out.mu_ = std::move(c.mu);
  out.fixed_ = c.fixed;
  out.tag_ = inv.type_tag;
  return out;
}

std::optional<Pos> Involution::fixed_pos() const {
  if (!fixed_) return std::nullopt;
  return to_pos(spec_, *fixed_);
}

Pos Involution::apply(Pos q) const {
  int b = partner(q.block);
  return {b, mu(q.block) - q.p};
}

Address Involution::apply(Address a) const { return to_address(spec_, apply(to_pos(spec_, a))); }

PRange Involution::left_range(int block) const {
  int pb = partner(block);
  PRange full = block_positions(spec_.blocks[(size_t)block]);
  if (block < pb) return full;
  if (block > pb) return PRange::none();
  return intersect(full, PRange::at_most(floor_div(mu(block) - 1, 2)));
}

PRange Involution::right_range(int block) const {
  int pb = partner(block);
  PRange full = block_positions(spec_.blocks[(size_t)block]);
  if (block > pb) return full;
  if (block < pb) return PRange::none();
  return intersect(full, PRange::at_least(floor_div(mu(block), 2) + 1));
}

bool Involution::in_left(Pos q) const { return left_range(q.block).contains(q.p); }
bool Involution::in_right(Pos q) const { return right_range(q.block).contains(q.p); }

std::vector<Address> enumerate_truncation(const OrderSpec& spec,
                                          const std::optional<InvolutionSpec>& inv,
                                          long long radius) {
  if (radius < 1) fail(Errc::size_mismatch, "truncation radius must be >= 1");

  auto base_range = [&](const BlockKind& k) -> PRange {
    switch (k.tag) {
      case BlockTag::fin_chain: return PRange::closed(0, k.length - 1);
      case BlockTag::omega_up: return PRange::closed(0, radius - 1);
      case BlockTag::omega_down: return PRange::closed(-(radius - 1), 0);
      case BlockTag::z_line: return PRange::closed(-radius, radius);
    }
    return PRange::none();
  };

  std::set<Pos> window;
  auto add_range = [&](int b, PRange r) {
    for (long long p = *r.lo; p <= *r.hi; ++p) window.insert({b, p});
  };
  for (int b = 0; b < (int)spec.blocks.size(); ++b)
    add_range(b, base_range(spec.blocks[(size_t)b]));

  if (inv) {
    Involution iv = Involution::compile(spec, *inv);
    for (int b = 0; b < (int)spec.blocks.size(); ++b) {
      // Mirror image of the partner's base window into this block.
      int pb = iv.partner(b);
      PRange pr = base_range(spec.blocks[(size_t)pb]);
      PRange mirrored = PRange::closed(iv.mu(pb) - *pr.hi, iv.mu(pb) - *pr.lo);
      add_range(b, intersect(mirrored, block_positions(spec.blocks[(size_t)b])));
    }
    if (iv.fixed_pos()) window.insert(*iv.fixed_pos());
  }

  std::vector<Address> out;
  out.reserve(window.size());
  for (const Pos& q : window) out.push_back(to_address(spec, q));
  return out;
}

}  // namespace indflag
