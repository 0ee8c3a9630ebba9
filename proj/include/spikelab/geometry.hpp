#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spikelab/errors.hpp"
#include "spikelab/numeric.hpp"

namespace spikelab {

template <class T>
using Vec = std::vector<T>;

using Coeffs = std::vector<BigInt>;

// Square matrix stored by columns; columns are basis vectors.
template <class T>
struct Matrix {
  int n = 0;
  std::vector<Vec<T>> cols;

  Matrix() = default;
  explicit Matrix(int d) : n(d), cols(d, Vec<T>(d, T(0))) {}

  static Matrix identity(int d) {
    Matrix m(d);
    for (int i = 0; i < d; ++i) m.cols[i][i] = T(1);
    return m;
  }
  static Matrix from_rows(const std::vector<Vec<T>>& rows);

  T& at(int row, int col) { return cols[col][row]; }
  const T& at(int row, int col) const { return cols[col][row]; }

  bool operator==(const Matrix& o) const { return n == o.n && cols == o.cols; }
};

template <class T>
T determinant(const Matrix<T>& m);
template <class T>
Matrix<T> inverse(const Matrix<T>& m);
template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b);
template <class T>
Vec<T> multiply(const Matrix<T>& a, const Vec<T>& x);
// B z for an integer coefficient vector
template <class T>
Vec<T> combine(const Matrix<T>& basis, const Coeffs& z);
Matrix<double> to_double(const Matrix<Rational>& m);
Matrix<Rational> to_rational(const Matrix<double>& m);

class FlowSpec {
 public:
  explicit FlowSpec(std::vector<double> c);

  int dim() const { return static_cast<int>(c_.size()); }
  const std::vector<double>& exponents() const { return c_; }
  double c(int j) const { return c_[j]; }
  std::vector<int> j_plus() const;
  double h_a() const;
  double max_abs() const;
  bool normalized() const;
  FlowSpec normalize() const;

  // diag(e^{ct}, e^{-ct})
  static FlowSpec planar(double c = 1.0);
  // diag(e^t,...,e^t,e^{-nt}) on R^{n+1}
  static FlowSpec diophantine(int n);

 private:
  std::vector<double> c_;
};

template <class T>
class Lattice {
 public:
  explicit Lattice(Matrix<T> basis);

  int dim() const { return basis_.n; }
  const Matrix<T>& basis() const { return basis_; }
  Vec<T> point(const Coeffs& z) const { return combine(basis_, z); }

  static Lattice standard(int d) { return Lattice(Matrix<T>::identity(d)); }

 private:
  Matrix<T> basis_;
};

template <class T>
class Grid {
 public:
  // offset is reduced into the fundamental domain of the basis
  Grid(Lattice<T> lattice, Vec<T> offset);

  int dim() const { return lattice_.dim(); }
  const Lattice<T>& lattice() const { return lattice_; }
  const Vec<T>& offset() const { return offset_; }
  Vec<T> point(const Coeffs& z) const;

 private:
  Lattice<T> lattice_;
  Vec<T> offset_;
};

template <class T>
struct Reduction {
  Matrix<T> basis;          // original * transform
  Matrix<BigInt> transform;  // unimodular integer matrix
};

template <class T>
Reduction<T> gauss_reduce(const Matrix<T>& basis);
template <class T>
Reduction<T> lll_reduce(const Matrix<T>& basis, double delta = 0.99);
// gauss for d=2, LLL otherwise
template <class T>
Reduction<T> reduce(const Matrix<T>& basis);

template <class T>
struct LatticePoint {
  Vec<T> vector;
  Coeffs coeffs;  // with respect to the input basis
  T key;          // sup norm, or squared euclidean norm
  double norm = 0.0;
};

template <class T>
T norm_key(const Vec<T>& v, Norm norm);
template <class T>
double norm_value(const Vec<T>& v, Norm norm);

template <class T>
LatticePoint<T> lambda1_vector(const Lattice<T>& x, Norm norm = Norm::sup);
template <class T>
double lambda1(const Lattice<T>& x, Norm norm = Norm::sup) {
  return lambda1_vector(x, norm).norm;
}

template <class T>
LatticePoint<T> closest_point(const Grid<T>& y, Norm norm = Norm::sup);
template <class T>
double sigma(const Grid<T>& y, Norm norm = Norm::sup) {
  return closest_point(y, norm).norm;
}

// Integer vectors z (w.r.t. red.basis) with |z_i - center_i| <= radius_i.
// Returns false from the visitor to stop.
template <class T>
void enumerate_coefficients(const Vec<T>& center, const Vec<double>& radius, double budget,
                            const std::function<bool(const Coeffs&)>& visit);

// certified coefficient radii: rows of |B^-1| applied to per-coordinate half widths
template <class T>
Vec<double> coefficient_radii(const Matrix<T>& basis_inverse, const Vec<double>& half_width);

Vec<double> apply_flow(const FlowSpec& flow, double t, const Vec<double>& p);
Lattice<double> apply_flow(const FlowSpec& flow, double t, const Lattice<double>& x);
Grid<double> apply_flow(const FlowSpec& flow, double t, const Grid<double>& y);
// rational kind: e^{c_j t} replaced by rationals within 2^-200, last factor fixed so det stays exact
Lattice<Rational> apply_flow(const FlowSpec& flow, double t, const Lattice<Rational>& x);
Grid<Rational> apply_flow(const FlowSpec& flow, double t, const Grid<Rational>& y);
Vec<Rational> flow_factors(const FlowSpec& flow, double t);

template <class T>
Matrix<T> scale_rows(const Matrix<T>& m, const Vec<T>& factors);
template <class T>
Vec<T> scale_vector(const Vec<T>& v, const Vec<T>& factors);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;
  bool hi_closed = false;

  bool empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }
  bool contains(double t) const {
    return (t > lo || (lo_closed && t == lo)) && (t < hi || (hi_closed && t == hi));
  }
  double length() const { return empty() ? 0.0 : hi - lo; }
  bool operator==(const Interval& o) const = default;

  static Interval open(double a, double b) { return {a, b, false, false}; }
  static Interval closed(double a, double b) { return {a, b, true, true}; }
};

class IntervalSet {
 public:
  IntervalSet() = default;
  // union of arbitrary (possibly overlapping) intervals
  static IntervalSet from(std::vector<Interval> parts);

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  bool contains(double t) const;
  double measure() const;
  IntervalSet intersect(const Interval& iv) const;
  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet unite(const IntervalSet& other) const;
  // complement inside a closed window [a, b]
  IntervalSet complement_in(double a, double b) const;
  bool operator==(const IntervalSet& o) const = default;

 private:
  std::vector<Interval> parts_;
};

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
  bool contains(const Vec<double>& p) const;
};

class BoxRegion {
 public:
  explicit BoxRegion(std::vector<Box> boxes);
  // open sup-ball
  static BoxRegion ball(int d, double radius, const Vec<double>& center = {});

  int dim() const { return static_cast<int>(boxes_.front().lo.size()); }
  const std::vector<Box>& boxes() const { return boxes_; }
  bool contains(const Vec<double>& p) const;
  // max over boxes of max(|l_j|, |u_j|)
  Vec<double> extent() const;

 private:
  std::vector<Box> boxes_;
};

// sign and log|value| of a coordinate
struct LogCoord {
  int sign = 0;
  double log = 0.0;
};

template <class T>
std::vector<LogCoord> log_coords(const Vec<T>& p);

IntervalSet hit_times(const FlowSpec& flow, const std::vector<LogCoord>& p, const BoxRegion& region);
template <class T>
IntervalSet hit_times(const FlowSpec& flow, const Vec<T>& p, const BoxRegion& region) {
  return hit_times(flow, log_coords(p), region);
}

template <class T>
struct LayeredPoint {
  Vec<T> point;
  BigInt layer;
  Coeffs coeffs;
};

template <class T>
struct SpikePoint {
  LayeredPoint<T> point;
  IntervalSet hits;
};

struct SpikeOptions {
  double budget = 1e8;
  // enlarges the certified box; used by completeness tests
  double box_scale = 1.0;
};

template <class T>
std::vector<SpikePoint<T>> grid_spike_points(const FlowSpec& flow, const Grid<T>& y, const BoxRegion& region,
                                             double t_max, const SpikeOptions& opts = {});

}  // namespace spikelab
