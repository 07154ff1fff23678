#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace qorbit::ring {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return numerator(r); }
inline Int rat_den(const Rat& r) { return denominator(r); }

/// r^e for integer e of either sign; r must be nonzero when e < 0.
inline Rat rat_pow(const Rat& r, std::int64_t e) {
  if (e == 0) return Rat(1);
  Rat base = r;
  bool invert = e < 0;
  std::uint64_t k = invert ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
  Rat acc(1);
  while (k) {
    if (k & 1) acc *= base;
    base *= base;
    k >>= 1;
  }
  if (invert) return Rat(1) / acc;
  return acc;
}

inline std::string rat_str(const Rat& r) {
  std::string s = rat_num(r).str();
  if (rat_den(r) != 1) s += "/" + rat_den(r).str();
  return s;
}

inline Int int_gcd(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline Int int_lcm(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  Int g = int_gcd(a, b);
  Int l = (a / g) * b;
  return l < 0 ? -l : l;
}

}  // namespace qorbit::ring

namespace qorbit {
using namespace ring;
}
