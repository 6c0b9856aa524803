#pragma once

#include <cstdint>
#include <boost/multiprecision/cpp_int.hpp>

namespace autows {

/// Exact rational arithmetic for bandwidth sums and simulator timestamps.
/// All feasibility comparisons and event times are computed on rationals so
/// that results are bit-reproducible across runs and platforms; values are
/// converted to double only at serialization boundaries.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_ratio(std::int64_t num, std::int64_t den) {
  return Rational(BigInt(num), BigInt(den));
}

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

/// floor(num/den) for non-negative rationals.
inline BigInt floor_div(const Rational& x) {
  return numerator(x) / denominator(x);
}

/// Round half up: floor(x + 1/2). Used for burst-count balancing.
inline BigInt round_half_up(const Rational& x) {
  return floor_div(x + Rational(1, 2));
}

}  // namespace autows
