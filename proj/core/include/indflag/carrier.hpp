#pragma once

#include <optional>
#include <string>
#include <vector>

#include "indflag/base.hpp"

namespace indflag {

// Countable linear orders are presented as a finite concatenation of blocks:
// finite chains, copies of omega (ascending), omega reversed (descending
// toward the block's top element at offset 0), and copies of Z.
enum class BlockTag { fin_chain, omega_up, omega_down, z_line };

struct BlockKind {
  BlockTag tag = BlockTag::fin_chain;
  long long length = 0;  // fin_chain only
  friend bool operator==(const BlockKind&, const BlockKind&) = default;
};

BlockKind fin_chain(long long n);
BlockKind omega_up();
BlockKind omega_down();
BlockKind z_line();

// offset is the storage coordinate: FinChain(n) uses 0..n-1 bottom-up,
// OmegaUp counts up from its least element, OmegaDown counts DOWN from its
// greatest element (offset 0 is the top), ZLine is plain.
struct Address {
  int block = 0;
  long long offset = 0;
  friend auto operator<=>(const Address&, const Address&) = default;
};

struct OrderSpec {
  std::vector<BlockKind> blocks;
  std::string name;
  friend bool operator==(const OrderSpec& a, const OrderSpec& b) { return a.blocks == b.blocks; }
};

enum class Cmp { less, equal, greater };

// Order position within a block: the unique coordinate that increases with
// the order. Equal to offset except for omega_down, where p = -offset.
struct Pos {
  int block = 0;
  long long p = 0;
  friend auto operator<=>(const Pos&, const Pos&) = default;
};

bool address_valid(const OrderSpec& spec, Address a);
void check_address(const OrderSpec& spec, Address a);
Pos to_pos(const OrderSpec& spec, Address a);
Address to_address(const OrderSpec& spec, Pos q);

// Inclusive interval of order positions; an absent bound is unbounded.
struct PRange {
  std::optional<long long> lo, hi;

  static PRange all() { return {}; }
  static PRange none() { return {0, -1}; }
  static PRange at_least(long long l) { return {l, std::nullopt}; }
  static PRange at_most(long long h) { return {std::nullopt, h}; }
  static PRange closed(long long l, long long h) { return {l, h}; }

  bool is_empty() const { return lo && hi && *lo > *hi; }
  bool contains(long long p) const { return (!lo || *lo <= p) && (!hi || p <= *hi); }
};

PRange intersect(PRange a, PRange b);
ExtendedCount range_count(PRange r);

// The set of valid order positions of a block.
PRange block_positions(BlockKind k);
ExtendedCount block_cardinality(BlockKind k);
// |r ∩ block_positions(k)|
ExtendedCount count_positions(BlockKind k, PRange r);

Cmp compare(const OrderSpec& spec, Address a, Address b);
// Number of elements strictly between a and b; requires compare(a,b) == less.
ExtendedCount interval_cardinality(const OrderSpec& spec, Address a, Address b);
// True iff every open interval is finite: blocks match
// [omega_down?] fin_chain* [omega_up?], or the single block [z_line].
bool embeds_in_Z(const OrderSpec& spec);

std::optional<Address> min_element(const OrderSpec& spec);
std::optional<Address> max_element(const OrderSpec& spec);

// Structural involutions: block j pairs with block count-1-j; within the
// pair, order position p maps to mu - p in the partner. mu is forced to 0
// for omega pairs and n-1 for finite chains; a self-paired Z block carries a
// free shift. type_tag is B exactly when the structure has a fixed point.
struct PairingEntry {
  int first = 0;
  int second = 0;
  long long shift = 0;
  friend bool operator==(const PairingEntry&, const PairingEntry&) = default;
};

struct InvolutionSpec {
  std::vector<PairingEntry> pairing;
  std::optional<Address> fixed_point;
  char type_tag = 'C';
  friend bool operator==(const InvolutionSpec&, const InvolutionSpec&) = default;
};

bool validate_involution(const OrderSpec& spec, const InvolutionSpec& inv,
                         std::vector<std::string>* reasons = nullptr);

class Involution {
public:
  // Throws Error(invalid_address) when validate_involution fails.
  static Involution compile(const OrderSpec& spec, const InvolutionSpec& inv);

  const OrderSpec& order() const { return spec_; }
  char type_tag() const { return tag_; }
  int partner(int block) const { return partner_[(size_t)block]; }
  long long mu(int block) const { return mu_[(size_t)block]; }
  const std::optional<Address>& fixed_point() const { return fixed_; }
  std::optional<Pos> fixed_pos() const;

  Address apply(Address a) const;
  Pos apply(Pos q) const;

  // Left half L = {x : x < i(x)}, right half R = {x : i(x) < x}; both are
  // intervals (L a down-set, R an up-set), the fixed point sits between.
  PRange left_range(int block) const;
  PRange right_range(int block) const;
  bool in_left(Pos q) const;
  bool in_right(Pos q) const;

private:
  OrderSpec spec_;
  std::vector<int> partner_;
  std::vector<long long> mu_;
  std::optional<Address> fixed_;
  char tag_ = 'C';
};

// Finite subset: the first `radius` elements of each infinite tail plus all
// finite blocks; i_E-stable when inv is given (fixed point always included
// for tag B). Nested in radius. Addresses come back sorted by the order.
std::vector<Address> enumerate_truncation(const OrderSpec& spec,
                                          const std::optional<InvolutionSpec>& inv,
                                          long long radius);

}  // namespace indflag
