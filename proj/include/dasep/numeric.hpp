#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace dasep {

/// Exact rational scalar used by the identity checks.
using Rational = boost::multiprecision::mpq_rational;

/// 100-digit binary float for sums whose terms cancel far below double precision.
using Extended = boost::multiprecision::mpf_float_100;

enum class Backend { float64, exact_rational };

Backend parse_backend(std::string_view text);
std::string to_string(Backend backend);

/// Parses "p/r", an integer, or a terminating decimal ("0.25") exactly.
Rational parse_rational(std::string_view text);

/// Integer power with a signed exponent; works for double, long double and Rational.
template <class Real>
Real ipow(const Real& base, std::int64_t exponent) {
  Real result{1};
  Real factor = exponent < 0 ? Real{1} / base : base;
  auto e = exponent < 0 ? -exponent : exponent;
  while (e > 0) {
    if (e & 1) result *= factor;
    e >>= 1;
    if (e > 0) factor *= factor;
  }
  return result;
}

inline double to_double(double v) { return v; }
inline double to_double(long double v) { return static_cast<double>(v); }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }
inline double to_double(const Extended& v) { return v.convert_to<double>(); }

inline double magnitude(double v) { return v < 0 ? -v : v; }
inline double magnitude(long double v) { return static_cast<double>(v < 0 ? -v : v); }
inline double magnitude(const Rational& v) { return to_double(Rational(abs(v))); }
inline double magnitude(const Extended& v) { return to_double(Extended(abs(v))); }

}  // namespace dasep
