#pragma once
// Independent brute-force references used only by tests.

#include <cmath>
#include <cstdint>
#include <random>

#include "spikelab/geometry.hpp"

namespace oracle {

using namespace spikelab;

inline double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
inline double uniform(std::mt19937_64& rng, double a, double b) { return a + (b - a) * uniform(rng); }
inline long uniform_int(std::mt19937_64& rng, long a, long b) {
  return a + static_cast<long>(rng() % static_cast<uint64_t>(b - a + 1));
}

template <class T>
T sup_or_sq(const Vec<T>& v, Norm norm) {
  T k(0);
  for (const auto& x : v) {
    if (norm == Norm::sup) {
      T a = x < 0 ? T(-x) : x;
      if (a > k) k = a;
    } else {
      k += x * x;
    }
  }
  return k;
}

template <class T>
double as_norm(const T& key, Norm norm) {
  double k;
  if constexpr (std::is_same_v<T, double>) {
    k = key;
  } else {
    k = key.get_d();
  }
  return norm == Norm::sup ? k : std::sqrt(k);
}

// min over nonzero coefficient vectors with |z_i| <= K
template <class T>
T brute_lambda1_key(const Matrix<T>& b, Norm norm, long K) {
  bool first = true;
  T best(0);
  for (long i = -K; i <= K; ++i)
    for (long j = -K; j <= K; ++j) {
      if (i == 0 && j == 0) continue;
      Vec<T> v{b.at(0, 0) * T(i) + b.at(0, 1) * T(j), b.at(1, 0) * T(i) + b.at(1, 1) * T(j)};
      T k = sup_or_sq(v, norm);
      if (first || k < best) {
        best = k;
        first = false;
      }
    }
  return best;
}

template <class T>
T brute_sigma_key(const Matrix<T>& b, const Vec<T>& w, Norm norm, long K) {
  bool first = true;
  T best(0);
  for (long i = -K; i <= K; ++i)
    for (long j = -K; j <= K; ++j) {
      Vec<T> v{b.at(0, 0) * T(i) + b.at(0, 1) * T(j) + w[0], b.at(1, 0) * T(i) + b.at(1, 1) * T(j) + w[1]};
      T k = sup_or_sq(v, norm);
      if (first || k < best) {
        best = k;
        first = false;
      }
    }
  return best;
}

// Rational entries scaled to a common denominator so the scan runs on machine integers.
inline Rational brute_key_integer(const Matrix<Rational>& b, const Vec<Rational>* w, Norm norm, long K) {
  BigInt den = 1;
  auto take = [&](const Rational& x) { mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t()); };
  for (const auto& col : b.cols)
    for (const auto& x : col) take(x);
  if (w)
    for (const auto& x : *w) take(x);
  auto as_int = [&](const Rational& x) {
    BigInt v = x.get_num() * (den / x.get_den());
    return v.get_si();
  };
  long b00 = as_int(b.at(0, 0)), b01 = as_int(b.at(0, 1)), b10 = as_int(b.at(1, 0)), b11 = as_int(b.at(1, 1));
  long w0 = w ? as_int((*w)[0]) : 0, w1 = w ? as_int((*w)[1]) : 0;
  __int128 best = -1;
  for (long i = -K; i <= K; ++i)
    for (long j = -K; j <= K; ++j) {
      if (!w && i == 0 && j == 0) continue;
      __int128 v0 = (__int128)b00 * i + (__int128)b01 * j + w0;
      __int128 v1 = (__int128)b10 * i + (__int128)b11 * j + w1;
      __int128 k;
      if (norm == Norm::sup) {
        __int128 a0 = v0 < 0 ? -v0 : v0, a1 = v1 < 0 ? -v1 : v1;
        k = a0 > a1 ? a0 : a1;
      } else {
        k = v0 * v0 + v1 * v1;
      }
      if (best < 0 || k < best) best = k;
    }
  // back to a rational; keys fit in 128 bits
  auto big = [](__int128 x) {
    BigInt hi = static_cast<long>(x >> 64);
    BigInt lo = static_cast<unsigned long>(static_cast<unsigned __int128>(x) & 0xFFFFFFFFFFFFFFFFull);
    return BigInt((hi << 64) + lo);
  };
  BigInt scale = norm == Norm::sup ? den : BigInt(den * den);
  return make_rational(big(best), scale);
}

// diag(s, 1/s) * [[1,a],[0,1]] * R with R a short product of integer shears
template <class T>
Matrix<T> random_unimodular(std::mt19937_64& rng) {
  T s, a;
  if constexpr (std::is_same_v<T, double>) {
    s = uniform(rng, 0.4, 2.5);
    a = uniform(rng);
  } else {
    s = make_rational(uniform_int(rng, 40, 250), 100);
    a = make_rational(uniform_int(rng, 0, 999), uniform_int(rng, 1000, 1999));
  }
  Matrix<T> m(2);
  m.at(0, 0) = s;
  m.at(0, 1) = s * a;
  m.at(1, 0) = T(0);
  m.at(1, 1) = T(1) / s;
  for (int k = 0; k < 2; ++k) {
    long e = uniform_int(rng, -2, 2);
    int from = uniform_int(rng, 0, 1), to = 1 - from;
    for (int r = 0; r < 2; ++r) m.at(r, to) += T(e) * m.at(r, from);
  }
  return m;
}

// [0; a_1, a_2, ...] evaluated exactly
inline Rational cf_value(const std::vector<BigInt>& a) {
  Rational x(0);
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    x = Rational(1) / (Rational(*it) + x);
    x.canonicalize();
  }
  return x;
}

// x_v = columns (1,0) and (v,1)
inline Lattice<Rational> unipotent_lattice(const Rational& v) {
  return Lattice<Rational>(Matrix<Rational>::from_rows({{Rational(1), v}, {Rational(0), Rational(1)}}));
}

// ratio of consecutive Fibonacci numbers; the CF is [0;1,1,...,1] of the given depth
inline Rational golden_fraction(long depth) {
  BigInt a, b;
  mpz_fib_ui(a.get_mpz_t(), depth);
  mpz_fib_ui(b.get_mpz_t(), depth + 1);
  return Rational(a, b);  // consecutive Fibonacci numbers are coprime
}

inline std::vector<BigInt> powers_of_ten_quotients(int count) {
  std::vector<BigInt> a;
  BigInt p = 1;
  for (int k = 1; k <= count; ++k) {
    p *= 10;
    a.push_back(p);
  }
  return a;
}

}  // namespace oracle
