#pragma once

#include <map>
#include <vector>

#include "indflag/carrier.hpp"

namespace indflag {

// Finite-support permutation of the carrier. moves holds exactly the moved
// addresses (tight support), and is a bijection of its domain onto itself.
struct FinPerm {
  OrderSpec carrier;
  std::map<Address, Address> moves;

  friend bool operator==(const FinPerm& a, const FinPerm& b) {
    return a.carrier == b.carrier && a.moves == b.moves;
  }
};

// Equivariant variant: underlying commutes with the compiled involution.
struct OmegaPerm {
  FinPerm underlying;
  InvolutionSpec involution;

  friend bool operator==(const OmegaPerm& a, const OmegaPerm& b) {
    return a.underlying == b.underlying && a.involution == b.involution;
  }
};

FinPerm identity_perm(const OrderSpec& spec);
// Validates addresses, bijectivity and domain = range; fixed entries are dropped.
FinPerm make_fin_perm(const OrderSpec& spec, const std::map<Address, Address>& moves);

Address apply(const FinPerm& w, Address e);
// Applies u first, then v.
FinPerm compose(const FinPerm& u, const FinPerm& v);
FinPerm inverse(const FinPerm& w);
FinPerm transposition(const OrderSpec& spec, Address a, Address b);

OmegaPerm identity_omega(const OrderSpec& spec, const InvolutionSpec& inv);
// Checks equivariance w(i(e)) = i(w(e)) on the support.
OmegaPerm make_omega_perm(const OrderSpec& spec, const InvolutionSpec& inv, FinPerm w);
// t_{a,b} composed with t_{i(a),i(b)}, collapsing to a single transposition
// when b = i(a). Neither argument may be the fixed point.
OmegaPerm omega_transposition(const OrderSpec& spec, const InvolutionSpec& inv, Address a,
                              Address b);
Address apply(const OmegaPerm& w, Address e);
OmegaPerm compose(const OmegaPerm& u, const OmegaPerm& v);
OmegaPerm inverse(const OmegaPerm& w);

// Support addresses sorted by the carrier order.
std::vector<Address> support(const FinPerm& w);

// Infinite exactly when some e has infinitely many elements between e and
// w(e); otherwise the inversion count, taken over pairs meeting the support.
ExtendedCount length(const FinPerm& w);
// Equivariant length: inversions (e, e') with e below i(e), counted once per
// mirror class. Pairs through the fixed point do not contribute.
ExtendedCount length(const OmegaPerm& w);

// Inversion count of w restricted to enumerate_truncation(..., radius).
long long length_truncated(const FinPerm& w, long long radius);
long long length_truncated(const OmegaPerm& w, long long radius);

}  // namespace indflag
