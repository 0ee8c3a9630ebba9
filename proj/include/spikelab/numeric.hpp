#pragma once

#include <gmpxx.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace spikelab {

using BigInt = mpz_class;
using Rational = mpq_class;

enum class Norm { sup, euclidean };

Norm parse_norm(const std::string& s);
std::string norm_name(Norm n);

// natural log of |x|; -inf for zero
double log_abs(const BigInt& x);
double log_abs(const Rational& x);
inline double log_abs(double x) { return x == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::fabs(x)); }

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }
double to_double_safe(const Rational& x);  // goes through logs, never over/underflows to garbage

inline int sign_of(double x) { return (x > 0) - (x < 0); }
inline int sign_of(const Rational& x) { return sgn(x); }

// canonical n/d (mpq_class(n, d) alone does not reduce)
inline Rational make_rational(const BigInt& n, const BigInt& d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

BigInt floor_big(const Rational& x);
BigInt ceil_big(const Rational& x);
BigInt floor_big(double x);
BigInt ceil_big(double x);
BigInt round_big(const Rational& x);
BigInt round_big(double x);

// exact rational value of a double
Rational exact_rational(double x);
// e^x ~= mantissa * 2^exponent with a mantissa of the given bit length
BigInt exp_mantissa(double x, long bits, long& exponent);

// rational r with |r/e^x - 1| < 2^-bits
Rational exp_rational(double x, int bits = 200);

// "0.25", "-3", "1/3", "1e-3" -> exact rational
Rational parse_rational(const std::string& s);

// exact decimal when the denominator is 2^a 5^b, otherwise "p/q"
std::string to_decimal_string(const Rational& x);
// round-trip decimal for a double
std::string to_decimal_string(double x);

// 12 significant digits, '.' separator
std::string fmt12(double x);

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static const char* name() { return "float64"; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static const char* name() { return "rational"; }
};

template <class T>
inline T abs_of(const T& x) {
  if constexpr (std::is_same_v<T, double>) {
    return std::fabs(x);
  } else {
    return abs(x);
  }
}

template <class T>
inline T from_big(const BigInt& z) {
  if constexpr (std::is_same_v<T, double>) {
    return z.get_d();
  } else {
    return Rational(z);
  }
}

}  // namespace spikelab
