#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace dotcover {

/// Arbitrary-precision signed integer. Every theorem-level inequality is
/// compared in this type, never in floating point.
using BigInt = boost::multiprecision::cpp_int;

inline BigInt ipow(BigInt base, std::uint64_t exp) {
  BigInt result = 1;
  while (exp != 0) {
    if (exp & 1U) result *= base;
    base *= base;
    exp >>= 1U;
  }
  return result;
}

inline std::string to_decimal(const BigInt& v) { return v.str(); }

inline double to_double(const BigInt& v) { return v.convert_to<double>(); }

}  // namespace dotcover
