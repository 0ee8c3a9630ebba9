#include <algorithm>
#include <cmath>

#include "spikelab/geometry.hpp"

namespace spikelab {

template <class T>
Matrix<T> Matrix<T>::from_rows(const std::vector<Vec<T>>& rows) {
  int d = static_cast<int>(rows.size());
  Matrix m(d);
  for (int r = 0; r < d; ++r) {
    if (static_cast<int>(rows[r].size()) != d) throw InvalidArgument("matrix must be square");
    for (int c = 0; c < d; ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

namespace {

template <class T>
bool is_zero_pivot(const T& x) {
  if constexpr (std::is_same_v<T, double>) {
    return x == 0.0;
  } else {
    return sgn(x) == 0;
  }
}

// row-major working copy
template <class T>
std::vector<Vec<T>> rows_of(const Matrix<T>& m) {
  std::vector<Vec<T>> a(m.n, Vec<T>(m.n));
  for (int r = 0; r < m.n; ++r)
    for (int c = 0; c < m.n; ++c) a[r][c] = m.at(r, c);
  return a;
}

template <class T>
int pick_pivot(const std::vector<Vec<T>>& a, int col) {
  int n = static_cast<int>(a.size());
  int best = -1;
  if constexpr (std::is_same_v<T, double>) {
    double mag = 0.0;
    for (int r = col; r < n; ++r) {
      if (std::fabs(a[r][col]) > mag) {
        mag = std::fabs(a[r][col]);
        best = r;
      }
    }
  } else {
    for (int r = col; r < n; ++r) {
      if (sgn(a[r][col]) != 0) return r;
    }
  }
  return best;
}

}  // namespace

template <class T>
T determinant(const Matrix<T>& m) {
  auto a = rows_of(m);
  int n = m.n;
  T det(1);
  for (int c = 0; c < n; ++c) {
    int p = pick_pivot(a, c);
    if (p < 0) return T(0);
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      if (is_zero_pivot(a[r][c])) continue;
      T f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& m) {
  int n = m.n;
  auto a = rows_of(m);
  auto inv = rows_of(Matrix<T>::identity(n));
  for (int c = 0; c < n; ++c) {
    int p = pick_pivot(a, c);
    if (p < 0) throw SingularBasis("singular matrix");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    T piv = a[c][c];
    for (int k = 0; k < n; ++k) {
      a[c][k] /= piv;
      inv[c][k] /= piv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || is_zero_pivot(a[r][c])) continue;
      T f = a[r][c];
      for (int k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return Matrix<T>::from_rows(inv);
}

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> out(a.n);
  for (int c = 0; c < a.n; ++c) out.cols[c] = multiply(a, b.cols[c]);
  return out;
}

template <class T>
Vec<T> multiply(const Matrix<T>& a, const Vec<T>& x) {
  Vec<T> out(a.n, T(0));
  for (int c = 0; c < a.n; ++c) {
    if (is_zero_pivot(x[c])) continue;
    for (int r = 0; r < a.n; ++r) out[r] += a.cols[c][r] * x[c];
  }
  return out;
}

template <class T>
Vec<T> combine(const Matrix<T>& basis, const Coeffs& z) {
  Vec<T> out(basis.n, T(0));
  for (int c = 0; c < basis.n; ++c) {
    if (sgn(z[c]) == 0) continue;
    T zc = from_big<T>(z[c]);
    for (int r = 0; r < basis.n; ++r) out[r] += basis.cols[c][r] * zc;
  }
  return out;
}

Matrix<double> to_double(const Matrix<Rational>& m) {
  Matrix<double> out(m.n);
  for (int c = 0; c < m.n; ++c)
    for (int r = 0; r < m.n; ++r) out.at(r, c) = to_double_safe(m.at(r, c));
  return out;
}

Matrix<Rational> to_rational(const Matrix<double>& m) {
  Matrix<Rational> out(m.n);
  for (int c = 0; c < m.n; ++c)
    for (int r = 0; r < m.n; ++r) out.at(r, c) = exact_rational(m.at(r, c));
  return out;
}

FlowSpec::FlowSpec(std::vector<double> c) : c_(std::move(c)) {
  if (c_.size() < 2) throw InvalidArgument("flow needs d >= 2");
  double sum = 0.0;
  for (double x : c_) {
    if (x == 0.0 || !std::isfinite(x)) throw InvalidArgument("flow exponents must be finite and nonzero");
    sum += x;
  }
  if (std::fabs(sum) > 1e-12) throw InvalidArgument("flow exponents must sum to zero");
}

std::vector<int> FlowSpec::j_plus() const {
  std::vector<int> out;
  for (int j = 0; j < dim(); ++j)
    if (c_[j] > 0) out.push_back(j);
  return out;
}

double FlowSpec::h_a() const {
  double h = 0.0;
  for (double x : c_)
    if (x > 0) h += x;
  return h;
}

double FlowSpec::max_abs() const {
  double m = 0.0;
  for (double x : c_) m = std::max(m, std::fabs(x));
  return m;
}

bool FlowSpec::normalized() const { return *std::max_element(c_.begin(), c_.end()) == 1.0; }

FlowSpec FlowSpec::normalize() const {
  double m = *std::max_element(c_.begin(), c_.end());
  std::vector<double> c = c_;
  for (double& x : c) x /= m;
  return FlowSpec(c);
}

FlowSpec FlowSpec::planar(double c) { return FlowSpec({c, -c}); }

FlowSpec FlowSpec::diophantine(int n) {
  std::vector<double> c(n + 1, 1.0);
  c[n] = -static_cast<double>(n);
  return FlowSpec(c);
}

template <class T>
Lattice<T>::Lattice(Matrix<T> basis) : basis_(std::move(basis)) {
  if (basis_.n < 1) throw InvalidArgument("empty basis");
  for (const auto& col : basis_.cols)
    if (static_cast<int>(col.size()) != basis_.n) throw InvalidArgument("basis must be square");
  T det = determinant(basis_);
  if constexpr (std::is_same_v<T, double>) {
    if (!(std::fabs(std::fabs(det) - 1.0) <= 1e-9)) throw InvalidArgument("lattice basis is not unimodular");
  } else {
    if (abs(det) != 1) throw InvalidArgument("lattice basis is not unimodular");
  }
}

template <class T>
Grid<T>::Grid(Lattice<T> lattice, Vec<T> offset) : lattice_(std::move(lattice)), offset_(std::move(offset)) {
  if (static_cast<int>(offset_.size()) != lattice_.dim()) throw InvalidArgument("offset dimension mismatch");
  Vec<T> f = multiply(inverse(lattice_.basis()), offset_);
  for (auto& x : f) {
    if constexpr (std::is_same_v<T, double>) {
      x -= std::floor(x);
      if (x >= 1.0) x = 0.0;
    } else {
      x -= Rational(floor_big(x));
    }
  }
  offset_ = multiply(lattice_.basis(), f);
}

template <class T>
Vec<T> Grid<T>::point(const Coeffs& z) const {
  Vec<T> p = lattice_.point(z);
  for (int j = 0; j < dim(); ++j) p[j] += offset_[j];
  return p;
}

#define SPIKELAB_INSTANTIATE(T)                                      \
  template struct Matrix<T>;                                         \
  template T determinant(const Matrix<T>&);                          \
  template Matrix<T> inverse(const Matrix<T>&);                      \
  template Matrix<T> multiply(const Matrix<T>&, const Matrix<T>&);   \
  template Vec<T> multiply(const Matrix<T>&, const Vec<T>&);         \
  template Vec<T> combine(const Matrix<T>&, const Coeffs&);          \
  template class Lattice<T>;                                         \
  template class Grid<T>;

SPIKELAB_INSTANTIATE(double)
SPIKELAB_INSTANTIATE(Rational)
template struct Matrix<BigInt>;
template Vec<BigInt> multiply(const Matrix<BigInt>&, const Vec<BigInt>&);
template Matrix<BigInt> multiply(const Matrix<BigInt>&, const Matrix<BigInt>&);

}  // namespace spikelab
