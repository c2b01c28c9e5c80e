#pragma once

#include <optional>

#include "indflag/cells.hpp"

namespace indflag {

// Searches for a finite-support permutation w whose rearranged labeling
// sigma0 o w^-1 is nondecreasing along the carrier; that cell is the unique
// zero-dimensional one when it exists. The returned permutation is the
// canonical representative of that cell, and is mirror-equivariant whenever
// the spec carries involutions. Absent means every cell has positive
// (possibly infinite) dimension.
std::optional<FinPerm> borel_fixed_point(const SurjectionSpec& spec);

// Equivalent to the fixed point being present.
bool exists_finite_dimensional_cell(const SurjectionSpec& spec);

// Fixed point present and every open interval of the carrier finite.
// Requires at least two labels; throws trivial_parabolic on one.
bool all_cells_finite(const SurjectionSpec& spec);

// Whether the label chain is order-isomorphic to a subset of the integers.
bool is_flag(const TargetOrder& target);

}  // namespace indflag
