#include <algorithm>
#include <cmath>

#include "spikelab/geometry.hpp"

namespace spikelab {

namespace {

template <class T>
T dot(const Vec<T>& a, const Vec<T>& b) {
  T s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class T>
void axpy(Vec<T>& y, const BigInt& m, const Vec<T>& x) {
  T mm = from_big<T>(m);
  for (size_t i = 0; i < y.size(); ++i) y[i] -= mm * x[i];
}

void axpy_int(Coeffs& y, const BigInt& m, const Coeffs& x) {
  for (size_t i = 0; i < y.size(); ++i) y[i] -= m * x[i];
}

template <class T>
void check_nonsingular(const Matrix<T>& basis) {
  T det = determinant(basis);
  if constexpr (std::is_same_v<T, double>) {
    if (!(std::fabs(det) >= 1e-14)) throw SingularBasis("basis is singular");
  } else {
    if (sgn(det) == 0) throw SingularBasis("basis is singular");
  }
}

Matrix<BigInt> identity_int(int d) {
  Matrix<BigInt> u(d);
  for (int i = 0; i < d; ++i) u.cols[i][i] = 1;
  return u;
}

template <class T>
double to_d(const T& x) {
  if constexpr (std::is_same_v<T, double>) {
    return x;
  } else {
    return to_double_safe(x);
  }
}

}  // namespace

template <class T>
Reduction<T> gauss_reduce(const Matrix<T>& basis) {
  if (basis.n != 2) throw InvalidArgument("gauss_reduce needs a 2x2 basis");
  check_nonsingular(basis);
  Vec<T> b1 = basis.cols[0], b2 = basis.cols[1];
  Coeffs u1{1, 0}, u2{0, 1};
  for (int iter = 0; iter < 100000; ++iter) {
    T n1 = dot(b1, b1), n2 = dot(b2, b2);
    if (n2 < n1) {
      std::swap(b1, b2);
      std::swap(u1, u2);
      std::swap(n1, n2);
    }
    BigInt m = round_big(T(dot(b1, b2) / n1));
    if (sgn(m) == 0) break;
    axpy(b2, m, b1);
    axpy_int(u2, m, u1);
  }
  Reduction<T> out{Matrix<T>(2), Matrix<BigInt>(2)};
  out.basis.cols = {b1, b2};
  out.transform.cols = {u1, u2};
  return out;
}

template <class T>
Reduction<T> lll_reduce(const Matrix<T>& basis, double delta) {
  check_nonsingular(basis);
  int n = basis.n;
  std::vector<Vec<T>> b = basis.cols;
  Matrix<BigInt> u = identity_int(n);
  T dl;
  if constexpr (std::is_same_v<T, double>) {
    dl = delta;
  } else {
    dl = make_rational(std::lround(delta * 1000), 1000);
  }
  std::vector<Vec<T>> bs(n);
  std::vector<Vec<T>> mu(n, Vec<T>(n, T(0)));
  Vec<T> bn(n);
  auto gram_schmidt = [&]() {
    for (int i = 0; i < n; ++i) {
      bs[i] = b[i];
      for (int j = 0; j < i; ++j) {
        mu[i][j] = dot(b[i], bs[j]) / bn[j];
        for (int r = 0; r < n; ++r) bs[i][r] -= mu[i][j] * bs[j][r];
      }
      bn[i] = dot(bs[i], bs[i]);
    }
  };
  gram_schmidt();
  int k = 1;
  for (int iter = 0; k < n && iter < 100000; ++iter) {
    for (int j = k - 1; j >= 0; --j) {
      BigInt q = round_big(mu[k][j]);
      if (sgn(q) == 0) continue;
      axpy(b[k], q, b[j]);
      axpy_int(u.cols[k], q, u.cols[j]);
      gram_schmidt();
    }
    if (bn[k] >= (dl - mu[k][k - 1] * mu[k][k - 1]) * bn[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      std::swap(u.cols[k], u.cols[k - 1]);
      gram_schmidt();
      k = std::max(k - 1, 1);
    }
  }
  Reduction<T> out{Matrix<T>(n), u};
  out.basis.cols = b;
  return out;
}

template <class T>
Reduction<T> reduce(const Matrix<T>& basis) {
  if (basis.n == 2) return gauss_reduce(basis);
  return lll_reduce(basis);
}

template <class T>
T norm_key(const Vec<T>& v, Norm norm) {
  T k(0);
  if (norm == Norm::sup) {
    for (const auto& x : v) {
      T a = abs_of(x);
      if (a > k) k = a;
    }
  } else {
    for (const auto& x : v) k += x * x;
  }
  return k;
}

template <class T>
double norm_value(const Vec<T>& v, Norm norm) {
  T k = norm_key(v, norm);
  return norm == Norm::sup ? to_d(k) : std::sqrt(to_d(k));
}

template <class T>
Vec<double> coefficient_radii(const Matrix<T>& binv, const Vec<double>& half_width) {
  Vec<double> out(binv.n, 0.0);
  for (int i = 0; i < binv.n; ++i) {
    double s = 0.0;
    for (int j = 0; j < binv.n; ++j) s += std::fabs(to_d(binv.at(i, j))) * half_width[j];
    out[i] = s * (1.0 + 1e-9) + 1e-9;
  }
  return out;
}

template <class T>
void enumerate_coefficients(const Vec<T>& center, const Vec<double>& radius, double budget,
                            const std::function<bool(const Coeffs&)>& visit) {
  int n = static_cast<int>(center.size());
  Coeffs lo(n), hi(n);
  double count = 1.0;
  for (int i = 0; i < n; ++i) {
    if constexpr (std::is_same_v<T, double>) {
      lo[i] = ceil_big(center[i] - radius[i]);
      hi[i] = floor_big(center[i] + radius[i]);
    } else {
      Rational r = exact_rational(radius[i]);
      lo[i] = ceil_big(Rational(center[i] - r));
      hi[i] = floor_big(Rational(center[i] + r));
    }
    if (hi[i] < lo[i]) return;
    count *= BigInt(hi[i] - lo[i] + 1).get_d();
  }
  if (count > budget) throw EnumerationTooLarge("coefficient box of " + fmt12(count) + " points exceeds budget");
  Coeffs z = lo;
  while (true) {
    if (!visit(z)) return;
    int i = 0;
    for (; i < n; ++i) {
      if (z[i] < hi[i]) {
        ++z[i];
        break;
      }
      z[i] = lo[i];
    }
    if (i == n) return;
  }
}

template <class T>
LatticePoint<T> lambda1_vector(const Lattice<T>& x, Norm norm) {
  if (x.dim() > 4) throw DimensionUnsupported("lambda1 supports d <= 4");
  Reduction<T> red = reduce(x.basis());
  Matrix<T> binv = inverse(red.basis);
  double r = norm_value(red.basis.cols[0], norm);
  for (const auto& col : red.basis.cols) r = std::min(r, norm_value(col, norm));
  Vec<double> radius = coefficient_radii(binv, Vec<double>(x.dim(), r));
  LatticePoint<T> best;
  bool found = false;
  enumerate_coefficients<T>(Vec<T>(x.dim(), T(0)), radius, 1e8, [&](const Coeffs& z) {
    bool zero = std::all_of(z.begin(), z.end(), [](const BigInt& v) { return sgn(v) == 0; });
    if (zero) return true;
    Vec<T> p = combine(red.basis, z);
    T key = norm_key(p, norm);
    if (!found || key < best.key) {
      found = true;
      best.vector = p;
      best.key = key;
      best.coeffs = z;
    }
    return true;
  });
  best.coeffs = multiply(red.transform, best.coeffs);
  best.norm = norm_value(best.vector, norm);
  return best;
}

template <class T>
LatticePoint<T> closest_point(const Grid<T>& y, Norm norm) {
  if (y.dim() > 4) throw DimensionUnsupported("sigma supports d <= 4");
  const Vec<T>& w = y.offset();
  Reduction<T> red = reduce(y.lattice().basis());
  Matrix<T> binv = inverse(red.basis);
  Vec<T> c = multiply(binv, w);
  for (auto& v : c) v = -v;
  Coeffs z0(c.size());
  for (size_t i = 0; i < c.size(); ++i) z0[i] = round_big(c[i]);
  auto grid_point = [&](const Coeffs& z) {
    Vec<T> p = combine(red.basis, z);
    for (size_t j = 0; j < p.size(); ++j) p[j] += w[j];
    return p;
  };
  double r = norm_value(grid_point(z0), norm);
  Vec<double> radius = coefficient_radii(binv, Vec<double>(y.dim(), r));
  LatticePoint<T> best;
  bool found = false;
  enumerate_coefficients<T>(c, radius, 1e8, [&](const Coeffs& z) {
    Vec<T> p = grid_point(z);
    T key = norm_key(p, norm);
    if (!found || key < best.key) {
      found = true;
      best.vector = p;
      best.key = key;
      best.coeffs = z;
    }
    return true;
  });
  if (!found) {
    best.vector = grid_point(z0);
    best.key = norm_key(best.vector, norm);
    best.coeffs = z0;
  }
  best.coeffs = multiply(red.transform, best.coeffs);
  best.norm = norm_value(best.vector, norm);
  return best;
}

#define SPIKELAB_INSTANTIATE(T)                                                                     \
  template Reduction<T> gauss_reduce(const Matrix<T>&);                                            \
  template Reduction<T> lll_reduce(const Matrix<T>&, double);                                      \
  template Reduction<T> reduce(const Matrix<T>&);                                                  \
  template T norm_key(const Vec<T>&, Norm);                                                        \
  template double norm_value(const Vec<T>&, Norm);                                                 \
  template Vec<double> coefficient_radii(const Matrix<T>&, const Vec<double>&);                    \
  template void enumerate_coefficients(const Vec<T>&, const Vec<double>&, double,                  \
                                       const std::function<bool(const Coeffs&)>&);                 \
  template LatticePoint<T> lambda1_vector(const Lattice<T>&, Norm);                                \
  template LatticePoint<T> closest_point(const Grid<T>&, Norm);

SPIKELAB_INSTANTIATE(double)
SPIKELAB_INSTANTIATE(Rational)

}  // namespace spikelab
