#include "indflag/base.hpp"

namespace indflag {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_address: return "InvalidAddress";
    case Errc::not_ordered: return "NotOrdered";
    case Errc::carrier_mismatch: return "CarrierMismatch";
    case Errc::equal_addresses: return "EqualAddresses";
    case Errc::fixed_point_argument: return "FixedPointArgument";
    case Errc::support_exceeds_truncation: return "SupportExceedsTruncation";
    case Errc::unsupported_rule_combination: return "UnsupportedRuleCombination";
    case Errc::orbit_mismatch: return "OrbitMismatch";
    case Errc::size_mismatch: return "SizeMismatch";
    case Errc::not_two_elements: return "NotTwoElements";
    case Errc::unsupported_family: return "UnsupportedFamily";
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::not_member: return "NotMember";
    case Errc::degenerate_flag: return "DegenerateFlag";
    case Errc::not_nested: return "NotNested";
    case Errc::trivial_parabolic: return "TrivialParabolic";
    case Errc::unsupported_type: return "UnsupportedType";
    case Errc::schema_error: return "SchemaError";
    case Errc::internal: return "Internal";
  }
  return "Unknown";
}

// sum_{i=0}^{n-1} floor((a*i + b) / c).  Standard divide-and-conquer with the
// negative coefficients shifted into the answer first; intermediate products
// are taken in 128 bits so large offsets cannot overflow.
long long floor_sum(long long n, long long a, long long b, long long c) {
  if (n <= 0) return 0;
  if (c <= 0) fail(Errc::internal, "floor_sum requires positive modulus");
  __int128 ans = 0;
  if (a < 0) {
    long long a2 = a % c;
    if (a2 < 0) a2 += c;
    ans -= (__int128)n * (n - 1) / 2 * ((a2 - a) / c);
    a = a2;
  }
  if (b < 0) {
    long long b2 = b % c;
    if (b2 < 0) b2 += c;
    ans -= (__int128)n * ((b2 - b) / c);
    b = b2;
  }
  while (true) {
    if (a >= c) {
      ans += (__int128)n * (n - 1) / 2 * (a / c);
      a %= c;
    }
    if (b >= c) {
      ans += (__int128)n * (b / c);
      b %= c;
    }
    __int128 y_max = (__int128)a * n + b;
    if (y_max < c) break;
    n = (long long)(y_max / c);
    b = (long long)(y_max % c);
    std::swap(c, a);
  }
  return (long long)ans;
}

}  // namespace indflag
