#include "spikelab/numeric.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "spikelab/errors.hpp"

namespace spikelab {

Norm parse_norm(const std::string& s) {
  if (s == "sup") return Norm::sup;
  if (s == "euclidean") return Norm::euclidean;
  throw InvalidArgument("unknown norm: " + s);
}

std::string norm_name(Norm n) { return n == Norm::sup ? "sup" : "euclidean"; }

double log_abs(const BigInt& x) {
  if (sgn(x) == 0) return -std::numeric_limits<double>::infinity();
  long e = 0;
  double d = mpz_get_d_2exp(&e, x.get_mpz_t());
  return std::log(std::fabs(d)) + static_cast<double>(e) * std::log(2.0);
}

double log_abs(const Rational& x) {
  if (sgn(x) == 0) return -std::numeric_limits<double>::infinity();
  return log_abs(x.get_num()) - log_abs(x.get_den());
}

double to_double_safe(const Rational& x) {
  int s = sgn(x);
  if (s == 0) return 0.0;
  double l = log_abs(x);
  if (l > -700 && l < 700) return x.get_d();
  return s * std::exp(l);
}

BigInt floor_big(const Rational& x) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

BigInt ceil_big(const Rational& x) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

BigInt floor_big(double x) { return BigInt(std::floor(x)); }
BigInt ceil_big(double x) { return BigInt(std::ceil(x)); }

BigInt round_big(const Rational& x) { return floor_big(x + Rational(1, 2)); }
BigInt round_big(double x) { return BigInt(std::floor(x + 0.5)); }

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("non-finite value");
  return Rational(x);
}

Rational exp_rational(double x, int bits) {
  mpfr_t v;
  mpfr_init2(v, bits + 16);
  mpfr_set_d(v, x, MPFR_RNDN);
  mpfr_exp(v, v, MPFR_RNDN);
  BigInt m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v);
  mpfr_clear(v);
  Rational r(m);
  if (e >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(e));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-e));
  }
  return r;
}

BigInt exp_mantissa(double x, long bits, long& exponent) {
  mpfr_t v;
  mpfr_init2(v, std::max(64L, bits));
  mpfr_set_d(v, x, MPFR_RNDN);
  mpfr_exp(v, v, MPFR_RNDN);
  BigInt out;
  exponent = mpfr_get_z_2exp(out.get_mpz_t(), v);
  mpfr_clear(v);
  return out;
}

Rational parse_rational(const std::string& raw) {
  std::string s;
  for (char c : raw) {
    if (c != ' ') s.push_back(c);
  }
  if (s.empty()) throw InvalidArgument("empty number");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (sgn(den) == 0) throw InvalidArgument("zero denominator: " + raw);
    return num / den;
  }
  size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') {
    neg = s[i] == '-';
    ++i;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  bool any = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      any = true;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any) throw InvalidArgument("not a number: " + raw);
  long exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw InvalidArgument("not a number: " + raw);
    try {
      size_t used = 0;
      exponent = std::stol(s.substr(i + 1), &used);
      if (used != s.size() - i - 1) throw InvalidArgument("not a number: " + raw);
    } catch (const std::logic_error&) {
      throw InvalidArgument("not a number: " + raw);
    }
  }
  Rational r{BigInt(digits, 10)};
  long p = exponent - frac_digits;
  BigInt ten;
  mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(p < 0 ? -p : p));
  if (p >= 0) {
    r *= ten;
  } else {
    r /= ten;
  }
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

std::string to_decimal_string(const Rational& x) {
  BigInt den = x.get_den();
  unsigned long twos = mpz_scan1(den.get_mpz_t(), 0);
  BigInt rest = den >> twos;
  unsigned long fives = 0;
  while (mpz_divisible_ui_p(rest.get_mpz_t(), 5)) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1) return x.get_str();
  unsigned long k = std::max(twos, fives);
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, k);
  BigInt n = x.get_num() * (scale / den);
  bool neg = sgn(n) < 0;
  if (neg) n = -n;
  std::string digits = n.get_str();
  if (k > 0) {
    if (digits.size() <= k) digits = std::string(k - digits.size() + 1, '0') + digits;
    digits.insert(digits.size() - k, ".");
  }
  return neg ? "-" + digits : digits;
}

std::string to_decimal_string(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt12(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace spikelab
