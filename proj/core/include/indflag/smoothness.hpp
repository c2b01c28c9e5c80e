#pragma once

#include <optional>
#include <string>
#include <vector>

#include "indflag/cells.hpp"

namespace indflag {

// Affine identification of one order_B block with an interval of order_F
// positions: the element at order position p sits at F-position shift + p,
// or shift - p when reversed.
struct BlockImage {
  int to_block = 0;
  bool reversed = false;
  long long shift = 0;
  friend bool operator==(const BlockImage&, const BlockImage&) = default;
};

// One address set carrying two linear orders. Elements are named by order_B
// addresses; f_map must send the order_B blocks onto disjoint intervals that
// exactly tile order_F.
struct TwoOrderCarrier {
  OrderSpec order_B;
  OrderSpec order_F;
  std::vector<BlockImage> f_map;
};

bool validate(const TwoOrderCarrier& two, std::vector<std::string>* reasons = nullptr);

// Position of e in order_F.
Pos f_pos(const TwoOrderCarrier& two, Address e);

enum class SmoothVerdict { smooth, singular, inconclusive };

struct SmoothnessReport {
  SmoothVerdict verdict = SmoothVerdict::inconclusive;
  // Singular maximal-flag verdicts carry a checkable quadruple, ascending in
  // order_B, whose images realize the named forbidden pattern.
  std::vector<Address> witness;
  std::string pattern;     // "3412" or "4231" when a witness is present
  long long radius = -1;   // truncation radius that exhibits or confirms the verdict
  std::string reason;
};

// Pattern criterion for closures of maximal-flag cells: singular exactly
// when some quadruple e1 < e2 < e3 < e4 in order_B has sigma-images ordered
// 3412 or 4231 in order_F. Smooth is only claimed when order_B or order_F
// embeds into the integers.
SmoothnessReport maximal_flag_smooth(const TwoOrderCarrier& two, const FinPerm& sigma);

// Two-row criterion: sigma must be two distinct addresses of the border.
// Smooth exactly when the lower one is the least element or the two are
// adjacent; throws not_two_elements otherwise.
SmoothnessReport gr2_smooth(const OrderSpec& border, std::vector<Address> sigma);

// Exhausts the cell closure by truncations: a singular truncation settles
// the question for every larger one, while smooth needs a structural
// certificate that no larger truncation degenerates. Supports injective
// labelings (maximal flags) and two-label specs; throws unsupported_family
// for anything else.
SmoothnessReport truncation_scan(const CellDescriptor& cell, long long max_radius);

}  // namespace indflag
