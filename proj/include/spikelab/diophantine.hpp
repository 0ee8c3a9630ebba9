#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "spikelab/fit.hpp"
#include "spikelab/geometry.hpp"

namespace spikelab {

struct BadTestConfig {
  std::vector<double> v;
  double eps = 0.1;
  long K = 1000;
  // explicit weights switch the score to min_l k^{w_l} <k v_l - w_l>
  std::optional<std::vector<double>> weights;

  int n() const { return static_cast<int>(v.size()); }
  void validate() const;
};

// distance to the nearest integer
inline double int_dist(double x) { return std::fabs(x - std::nearbyint(x)); }

struct BadTestResult {
  bool verdict = true;
  double min_value = 0.0;
  long argmin_k = 0;
};

// Precomputed powers of k for one configuration; score(k, w) is the per-k statistic.
class BadScorer {
 public:
  explicit BadScorer(const BadTestConfig& cfg);
  double score(long k, const double* w) const;
  // true if every k in 1..K scores at least eps
  bool survives(const double* w) const;
  BadTestResult test(const double* w) const;

 private:
  BadTestConfig cfg_;
  std::vector<std::vector<double>> pow_;  // pow_[l][k]
};

BadTestResult bad_target_test(const BadTestConfig& cfg, const std::vector<double>& w);

struct ScanResult {
  int n = 1;
  int R = 0;
  std::vector<std::uint8_t> bitmap;  // cell index i = sum_l i_l 2^{R l}, centre (i_l + 1/2) 2^-R
  long survivors = 0;
  double survivor_fraction = 0.0;
  std::vector<long> box_counts;         // m = 0..R, boxes of side 2^-m meeting a surviving cell
  std::vector<long> corner_box_counts;  // m = 0, 1 where a cell survives if any corner does
};

constexpr double kDefaultScanCells = 16777216.0;  // 2^24

ScanResult bad_set_scan(const BadTestConfig& cfg, int R, double max_cells = kDefaultScanCells);
ScanResult bad_set_scan_serial(const BadTestConfig& cfg, int R, double max_cells = kDefaultScanCells);
// box counts at scales 2^-m for m in [m_lo, m_hi] (the whole range 1..R by default)
DimensionEstimate scan_dimension(const ScanResult& scan, int m_lo = 1, int m_hi = -1);

struct CorrespondenceResult {
  bool bad_proxy = false;
  long spike_count = 0;
  bool consistent = true;
};

// grid x_v - w_s under diag(e^t,...,e^t,e^{-nt}); spike points counted in layers 1..K in the sup norm
CorrespondenceResult spike_correspondence(const std::vector<double>& v, const std::vector<double>& w, double s,
                                          double eps, long K);

template <class T>
bool avoid_test(const FlowSpec& flow, const Grid<T>& y, const BoxRegion& region, double r, double t_max,
                const SpikeOptions& opts = {});

class AffineSubspace {
 public:
  // orthonormalizes the spanning vectors
  AffineSubspace(const std::vector<std::vector<double>>& span, std::vector<double> offset = {});

  int ell() const { return ell_; }
  int dim() const { return d_; }
  const std::vector<std::vector<double>>& basis() const { return basis_; }
  const std::vector<double>& offset() const { return offset_; }
  double distance(const std::vector<double>& p) const;
  // I - Q Q^T applied to p (no offset)
  std::vector<double> project_out(const std::vector<double>& p) const;

 private:
  int ell_ = 0;
  int d_ = 0;
  std::vector<std::vector<double>> basis_;
  std::vector<double> offset_;
};

constexpr double kDefaultLatticeBudget = 1e8;

// nonzero k with |k| <= bound and d(k, W0) <= 2^d |k|^{-l/(d-l)}, in enumeration order
std::vector<std::vector<long>> minkowski_solutions(const AffineSubspace& W0, double norm_bound,
                                                   double budget = kDefaultLatticeBudget);

struct SubspaceTestResult {
  bool verdict = true;
  double min_value = 0.0;  // +inf when no k qualifies
  std::vector<long> argmin;
};

SubspaceTestResult bad_subspace_test(const AffineSubspace& W, double eps, double norm_bound,
                                     double budget = kDefaultLatticeBudget);

// The line {(s, v s - w)} in R^2 that corresponds to the target w for the number v.
AffineSubspace target_line(double v, double w);

// Constants linking the line test to the truncated target test (n = 1).
// For 1 <= k <= K take k_1 = round(k v - w). Then d((k,k_1), W) = <kv - w> / nu with nu = sqrt(1 + v^2),
// and |(k,k_1)| <= k nu_plus where nu_plus = sqrt(1 + (|v| + |w| + 1/2)^2). Hence the line minimum over
// |k| <= K nu_plus is at most (nu_plus / nu) times the target minimum over 1..K, so a line flagged at
// eps nu_plus / nu forces the target test to pass at eps. Restricted to layers k_0 = 1..K and scaled by
// k_0 nu the line scores equal the target scores.
struct LineCoherence {
  double nu = 1.0;
  double nu_plus = 1.0;
  double line_eps = 0.0;     // eps nu_plus / nu
  double line_bound = 0.0;   // K nu_plus
  double layer_min = 0.0;    // min over k_0 = 1..K of k_0 nu d((k_0, k_1), W)
  bool line_verdict = false;
  bool target_verdict = false;
  double target_min = 0.0;
};

LineCoherence line_coherence(double v, double w, double eps, long K);

}  // namespace spikelab
