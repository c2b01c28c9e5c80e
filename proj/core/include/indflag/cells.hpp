#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "indflag/carrier.hpp"
#include "indflag/permutations.hpp"

namespace indflag {

// Label target (A, with optional involution for the equivariant theory).
struct TargetOrder {
  OrderSpec order;
  std::optional<InvolutionSpec> involution;

  friend bool operator==(const TargetOrder&, const TargetOrder&) = default;
};

// Every position of the attached carrier block gets the same label.
struct ConstRule {
  Address alpha;
  friend bool operator==(const ConstRule&, const ConstRule&) = default;
};

// Position p of the carrier block maps to position stride*p + base of one
// target block. stride may be negative; the image must stay inside the
// target block for every position of the carrier block.
struct MonoRule {
  int a_block = 0;
  long long stride = 1;
  long long base = 0;
  friend bool operator==(const MonoRule&, const MonoRule&) = default;
};

// pattern[k] labels the positions p with p = k mod pattern.size().
// Only allowed on infinite carrier blocks.
struct PeriodicRule {
  std::vector<Address> pattern;
  friend bool operator==(const PeriodicRule&, const PeriodicRule&) = default;
};

// labels[k] labels offset k. Only on FinChain blocks of the same length.
struct ListRule {
  std::vector<Address> labels;
  friend bool operator==(const ListRule&, const ListRule&) = default;
};

using LabelRule = std::variant<ConstRule, MonoRule, PeriodicRule, ListRule>;

// Finitely presented surjection sigma0: E -> A, one rule per carrier block.
struct SurjectionSpec {
  OrderSpec carrier;
  std::optional<InvolutionSpec> involution;
  TargetOrder target;
  std::vector<LabelRule> rules;

  friend bool operator==(const SurjectionSpec&, const SurjectionSpec&) = default;
};

// A cell in the orbit of the base surjection: the labeling sigma0 o w^-1.
// omega marks descriptors built from an equivariant permutation.
struct CellDescriptor {
  SurjectionSpec base;
  FinPerm w;
  bool omega = false;
};

// Surjectivity, rule shape and (when involutions are present) equivariance.
bool validate(const SurjectionSpec& spec, std::vector<std::string>* reasons = nullptr);

// Checked constructors; both throw Error(schema_error) on an invalid spec
// and Error(carrier_mismatch) when the permutation lives elsewhere.
CellDescriptor make_cell(SurjectionSpec spec, FinPerm w);
CellDescriptor make_omega_cell(SurjectionSpec spec, const OmegaPerm& w);

// Label of the base surjection at e.
Address sigma0_eval(const SurjectionSpec& spec, Address e);
// Label of the cell at e: base label of w^-1(e).
Address sigma_eval(const CellDescriptor& cell, Address e);

enum class PairRelation { same_block, x_before_y };

// |{(x,y): x before y, label(x) > label(y)}| over one block pair carrying
// the given rules; same_block requires one shared rule.
ExtendedCount pair_inversion_count(const TargetOrder& target, BlockKind block_x,
                                   const LabelRule& rule_x, BlockKind block_y,
                                   const LabelRule& rule_y, PairRelation relation);

// Exact number of inversion pairs of the cell labeling, GL theory.
ExtendedCount inversion_number(const CellDescriptor& cell);
// Equivariant count: pairs with the lower coordinate in the left half,
// counted once per mirror class, fixed point excluded.
ExtendedCount omega_inversion_number(const CellDescriptor& cell);

ExtendedCount m_B_P(const SurjectionSpec& spec, const FinPerm& w);
ExtendedCount m_B_P(const SurjectionSpec& spec, const OmegaPerm& w);

// Closure order on cells of one orbit; throws Error(orbit_mismatch) when the
// two labelings differ by more than a finite rearrangement.
bool bruhat_leq(const CellDescriptor& s, const CellDescriptor& t);
bool omega_bruhat_leq(const CellDescriptor& s, const CellDescriptor& t);

// Sorted elementwise comparison of the set differences (two-label case).
bool grassmannian_leq(std::vector<Address> sigma, std::vector<Address> tau,
                      const OrderSpec& border);

// Minimal coset representative: within each fiber the displaced labels are
// matched increasingly. Equal cells yield equal representatives.
FinPerm canonical_representative(const CellDescriptor& cell);

bool is_in_W_P(const FinPerm& w, const SurjectionSpec& sigma0);
bool is_in_W_P(const OmegaPerm& w, const SurjectionSpec& sigma0);

}  // namespace indflag
