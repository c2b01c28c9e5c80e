#pragma once

#include <map>
#include <optional>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "indflag/cells.hpp"

// Brute-force ground truth on finite truncations: fully enumerated Weyl
// groups with BFS word lengths, the classical Bruhat order, direct cell
// dimension counts, and exact-rational coordinate flags. Everything here is
// deliberately naive; the library proper is validated against it.
namespace indflag::oracle {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
// Row-major list of row vectors.
using Mat = std::vector<std::vector<Rat>>;

enum class GroupKind { A, BC };

// A fully enumerated finite Weyl group acting on a truncation. Elements are
// one-line arrays over domain indices: arr[i] = j means domain[i] maps to
// domain[j]. For kind BC the domain is positionally mirror-symmetric
// (position k pairs with size-1-k) and every element commutes with that
// mirror; even_sign restricts to the type D even-sign-change subgroup.
struct FiniteWeylGroup {
  GroupKind kind = GroupKind::A;
  bool even_sign = false;
  OrderSpec border;
  std::vector<Address> domain;  // sorted by the border order
  std::vector<std::vector<int>> elements;
  std::vector<std::vector<int>> generators;
  std::vector<int> lengths;  // BFS word length over generators, per element
  std::map<std::vector<int>, int> index;
};

// Enumerate the group over a truncation (sorted by the border order).
// Caps: type A needs |domain| <= 8, type BC <= 5 free mirror pairs.
FiniteWeylGroup enumerate_group(const OrderSpec& border, std::vector<Address> truncation,
                                GroupKind kind, bool even_sign = false);

int element_index(const FiniteWeylGroup& g, const std::vector<int>& arr);
FinPerm to_fin_perm(const FiniteWeylGroup& g, const std::vector<int>& arr);
std::vector<int> to_array(const FiniteWeylGroup& g, const FinPerm& w);

int bfs_length(const FiniteWeylGroup& g, const std::vector<int>& w);
int bfs_length(const FiniteWeylGroup& g, const FinPerm& w);

// Rank dominance on the one-line arrays; for kind BC the mirror window is
// compared as a plain symmetric group (the induced-order realization). The
// type D subgroup is not covered by that criterion and is rejected.
bool classical_bruhat_leq(const FiniteWeylGroup& g, const std::vector<int>& u,
                          const std::vector<int>& v);

// Labeling of the cell of w over the truncation, position-aligned:
// out[i] = sigma0(w^-1(trunc[i])).
std::vector<Address> cell_labeling(const SurjectionSpec& spec,
                                   const std::vector<Address>& trunc, const FinPerm& w);

// Direct double-loop count of labeling inversions over the truncation.
long long finite_cell_dimension(const SurjectionSpec& spec, const std::vector<Address>& trunc,
                                const FinPerm& w);
// Equivariant variant: lower coordinate in the left half, one count per
// mirror class, fixed point excluded.
long long finite_omega_cell_dimension(const SurjectionSpec& spec,
                                      const std::vector<Address>& trunc, const FinPerm& w);

// Definitional closure order: breadth-first search over label swaps that
// increase the (omega-)inversion count. Labelings are position-aligned over
// a common truncation; omega moves swap mirror pairs simultaneously.
bool bfs_cell_leq(const TargetOrder& target, const std::vector<Address>& from,
                  const std::vector<Address>& to, bool omega);

// Distinct cell labelings over the group, in first-seen element order.
std::vector<std::vector<Address>> torus_fixed_points(const SurjectionSpec& spec,
                                                     const std::vector<Address>& trunc,
                                                     const FiniteWeylGroup& g);

// Classical tangent space count at a torus fixed point of the closure of
// the cell of w: the number of reflections t with u*t still below w.
// Type A full flags only, |domain| <= 6.
long long tangent_space_dimension(const FiniteWeylGroup& g, const std::vector<int>& w,
                                  const std::vector<int>& u);

// Exact-rational flag over truncation coordinates: for each label (A order,
// empty fibers omitted) a row basis of the subspace spanned so far. Nested
// with strictly increasing ranks, the last equal to the coordinate count.
struct RationalFlag {
  std::vector<Address> labels;
  std::vector<Mat> bases;
};

// Rank by fraction-free elimination after clearing denominators. Exact.
int rank(const Mat& m);

// The coordinate flag of a position-aligned labeling.
RationalFlag coordinate_flag(const TargetOrder& target, const std::vector<Address>& labeling);

// Row transform by the group element b (square, invertible): each basis
// vector v becomes b.v over the same coordinates.
RationalFlag apply_group_element(const Mat& b, const RationalFlag& flag);

// Relative position of the flag against the maximal coordinate flag of the
// truncation order: out[i] = min label where the intersection dimensions
// with the prefixes through position i differ. Throws degenerate_flag if
// the input is not a nested chain of strictly increasing ranks ending at
// the full space.
std::vector<Address> sigma_of_flag(const TargetOrder& target, const RationalFlag& flag);

// Extension along a truncation inclusion I into J: outside-I coordinates are
// filled with the base labeling's unit vectors. Position-aligned labelings
// give the coordinate correspondence; throws not_nested unless I maps into
// J's address set.
RationalFlag embed_flag(const SurjectionSpec& spec, const RationalFlag& flag,
                        const std::vector<Address>& I, const std::vector<Address>& J);

// Random upper unitriangular matrix with small integer entries: an element
// of the Borel of the maximal coordinate flag.
Mat random_unitriangular(int n, std::mt19937_64& rng);

}  // namespace indflag::oracle
