#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace indflag {

enum class Errc {
  invalid_address,
  not_ordered,
  carrier_mismatch,
  equal_addresses,
  fixed_point_argument,
  support_exceeds_truncation,
  unsupported_rule_combination,
  orbit_mismatch,
  size_mismatch,
  not_two_elements,
  unsupported_family,
  cap_exceeded,
  not_member,
  degenerate_flag,
  not_nested,
  trivial_parabolic,
  unsupported_type,
  schema_error,
  internal,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

// Cardinal arithmetic on {0, 1, 2, ...} + {infinity}. Addition and
// multiplication saturate; multiplication follows the counting convention
// 0 * infinity = 0 (an empty family of infinite sets is empty).
class ExtendedCount {
public:
  constexpr ExtendedCount() : finite_(true), value_(0) {}
  static constexpr ExtendedCount finite(std::uint64_t n) {
    ExtendedCount c;
    c.finite_ = true;
    c.value_ = n;
    return c;
  }
  static constexpr ExtendedCount infinite() {
    ExtendedCount c;
    c.finite_ = false;
    c.value_ = 0;
    return c;
  }

  constexpr bool is_finite() const { return finite_; }
  constexpr bool is_infinite() const { return !finite_; }

  // Only valid when finite.
  constexpr std::uint64_t value() const { return value_; }
  std::uint64_t value_checked() const {
    if (!finite_) fail(Errc::internal, "value_checked on infinite count");
    return value_;
  }

  friend constexpr ExtendedCount operator+(ExtendedCount a, ExtendedCount b) {
    if (!a.finite_ || !b.finite_) return infinite();
    std::uint64_t s = a.value_ + b.value_;
    if (s < a.value_) return infinite();  // saturate on overflow
    return finite(s);
  }
  ExtendedCount& operator+=(ExtendedCount o) { return *this = *this + o; }

  friend constexpr ExtendedCount operator*(ExtendedCount a, ExtendedCount b) {
    if (a.finite_ && a.value_ == 0) return finite(0);
    if (b.finite_ && b.value_ == 0) return finite(0);
    if (!a.finite_ || !b.finite_) return infinite();
    if (a.value_ > std::numeric_limits<std::uint64_t>::max() / b.value_) return infinite();
    return finite(a.value_ * b.value_);
  }

  friend constexpr bool operator==(ExtendedCount a, ExtendedCount b) {
    return a.finite_ == b.finite_ && a.value_ == b.value_;
  }
  // Every finite value is below infinity.
  friend constexpr std::strong_ordering operator<=>(ExtendedCount a, ExtendedCount b) {
    if (a.finite_ != b.finite_) return a.finite_ ? std::strong_ordering::less : std::strong_ordering::greater;
    return a.value_ <=> b.value_;
  }

  std::string to_string() const { return finite_ ? std::to_string(value_) : "infinite"; }

private:
  bool finite_;
  std::uint64_t value_;
};

constexpr long long floor_div(long long a, long long b) {
  long long q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
constexpr long long ceil_div(long long a, long long b) { return -floor_div(-a, b); }

// sum_{i=0}^{n-1} floor((a*i + b) / c), n >= 0, c > 0. a and b may be negative.
long long floor_sum(long long n, long long a, long long b, long long c);

}  // namespace indflag
