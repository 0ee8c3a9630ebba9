#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spikelab/geometry.hpp"

namespace spikelab {

// Follows a_t x for a planar flow diag(e^{ct}, e^{-ct}). The basis is kept as
// exact integers over per-row denominators; reduction decisions use doubles
// built from logarithms, so t may be far beyond the float range of e^{ct}.
class OrbitTracker {
 public:
  OrbitTracker(const FlowSpec& flow, const Lattice<Rational>& x);
  OrbitTracker(const FlowSpec& flow, const Lattice<double>& x);

  struct Shortest {
    double t = 0.0;
    double log_norm = 0.0;  // log of the flowed sup norm
    double norm = 0.0;
    Coeffs coeffs;  // w.r.t. the input basis
  };

  Shortest shortest(double t);
  // reduce the basis for time t without evaluating candidates
  void seek(double t);
  // coefficient vectors (sign normalized, nonzero) whose flowed sup norm is < radius
  std::vector<Coeffs> short_vectors(double t, double radius);

  // log|v_r| of the unflowed vector with these coefficients
  std::pair<double, double> log_coords(const Coeffs& z) const;
  double log_norm(const Coeffs& z, double t) const;
  Vec<Rational> vector(const Coeffs& z) const;
  double c() const { return c_; }

 private:
  OrbitTracker(const FlowSpec& flow, const Matrix<Rational>& basis);

  struct IntVec {
    BigInt a, b;  // row numerators
  };
  IntVec combine_int(const Coeffs& z) const;
  double log_norm(const IntVec& v, double t) const;
  void reduce_at(double t);
  void reduce_exact(double t, double spread);

  double c_;
  BigInt num_[2][2];  // num_[row][col]
  BigInt den_[2];
  double log_den_[2];
  IntVec b_[2];
  Coeffs u_[2];
};

struct TimeGrid {
  double start = 0.0;
  double step = 1.0;
  long count = 1;
  double at(long k) const { return start + step * static_cast<double>(k); }
};

struct SeriesPoint {
  double t;
  double lambda1;
};

template <class T>
std::vector<SeriesPoint> lambda1_series(const FlowSpec& flow, const Lattice<T>& x, const TimeGrid& grid);

struct Dip {
  double start = 0.0;  // t_i
  double end = 0.0;    // s_{i+1}
  bool open_ended = false;
  Coeffs governing;
  double log_v1 = 0.0;
  double log_v2 = 0.0;
};

struct ExcursionList {
  double threshold = 0.1;
  double t_max = 0.0;
  IntervalSet above;  // closed intervals [s_i, t_i]
  std::vector<Dip> dips;
};

template <class T>
ExcursionList excursions(const FlowSpec& flow, const Lattice<T>& x, double threshold, double t_max);

class PsiFamily {
 public:
  explicit PsiFamily(int i_max);
  int size() const { return i_max_; }
  // i runs 1..i_max
  double operator()(int i, double lambda1) const;

 private:
  int i_max_;
};

struct EmpiricalMeasureReport {
  long T = 0;
  std::vector<double> masses;
  std::vector<Rational> exact_masses;
  double min_lambda1 = 0.0;
};

// lambda1(a^k x), k = 0..T-1; chunked so the values do not depend on the thread count
template <class T>
std::vector<double> orbit_lambda1(const FlowSpec& flow, const Lattice<T>& x, long T_count);
template <class T>
std::vector<double> orbit_lambda1_serial(const FlowSpec& flow, const Lattice<T>& x, long T_count);

EmpiricalMeasureReport measure_from_values(const std::vector<double>& lambda1_values, long T, const PsiFamily& psi);

template <class T>
EmpiricalMeasureReport empirical_measure(const FlowSpec& flow, const Lattice<T>& x, long T_count,
                                         const PsiFamily& psi);

struct HeavinessReport {
  std::vector<EmpiricalMeasureReport> rows;
  std::vector<double> eta;
  bool consistent = false;
  std::string verdict() const { return consistent ? "consistent_with_H" : "escape_observed"; }
};

template <class T>
HeavinessReport heaviness_profile(const FlowSpec& flow, const Lattice<T>& x, const std::vector<long>& T_list,
                                  const std::vector<double>& eta);

double cf_heaviness(const std::vector<BigInt>& a_seq, double eps, long N);

}  // namespace spikelab
