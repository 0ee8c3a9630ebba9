#pragma once

#include <cstdint>
#include <vector>

#include "spikelab/fit.hpp"
#include "spikelab/geometry.hpp"

namespace spikelab {

// |u|_a = max_{j in J+} |u_j|^{1/c_j} on U+ coordinates (one entry per expanding exponent).
class QuasiMetric {
 public:
  explicit QuasiMetric(const FlowSpec& flow);
  // directly from the positive exponents
  static QuasiMetric from_exponents(std::vector<double> c);

  int dim() const { return static_cast<int>(c_.size()); }
  const std::vector<double>& exponents() const { return c_; }
  double h_a() const;
  // smallest C with d(u,w) <= C (d(u,v) + d(v,w)); equals max(1, 2^{1/c_min - 1})
  double constant() const;

  double norm(const std::vector<double>& u) const;
  double dist(const std::vector<double>& u, const std::vector<double>& v) const;
  // log|u|_a from signed logs of the coordinates
  double log_norm(const std::vector<LogCoord>& u) const;
  // a_t acting on U+ coordinates, in the log domain
  std::vector<LogCoord> flow_log(const std::vector<LogCoord>& u, double t) const;
  // side lengths delta^{c_j} of the grid boxes used for counting
  std::vector<double> box_sides(double delta) const;

 private:
  QuasiMetric() = default;
  std::vector<double> c_;
};

enum class MetricKind { euclidean, quasi };

struct MetricChoice {
  MetricKind kind = MetricKind::euclidean;
  std::optional<QuasiMetric> quasi;

  static MetricChoice euclidean() { return {}; }
  static MetricChoice quasi_of(const QuasiMetric& q) { return {MetricKind::quasi, q}; }
  double dist(const std::vector<double>& u, const std::vector<double>& v) const;
  std::vector<double> box_sides(double delta, int dim) const;
};

using PointSet = std::vector<std::vector<double>>;

// Greedy delta-separated subset in input order; pairs closer than delta (1 - 1e-12) conflict.
long separated_count(const PointSet& points, double delta, const MetricChoice& metric);
// Exact maximum by branch and bound, for up to 2000 points; throws BudgetExceeded past the node budget.
long separated_count_exact(const PointSet& points, double delta, const MetricChoice& metric, double node_budget = 5e7);

// Cells of [0,1]^n with 2^{R_j} cells along axis j; represented by their centres.
struct CellSet {
  std::vector<int> R;
  std::vector<std::uint8_t> bits;

  int dim() const { return static_cast<int>(R.size()); }
  long size() const { return static_cast<long>(bits.size()); }
  std::vector<double> centre(long index) const;
  static CellSet full(std::vector<int> R);
};

// Number of grid boxes (sides from the metric) meeting the set.
long box_count(const PointSet& points, double delta, const MetricChoice& metric);
long box_count(const CellSet& cells, double delta, const MetricChoice& metric);

// pre: at least 4 scales
DimensionEstimate dim_estimate(const PointSet& points, const MetricChoice& metric, const std::vector<double>& deltas);
DimensionEstimate dim_estimate(const CellSet& cells, const MetricChoice& metric, const std::vector<double>& deltas);

// 2^-lo, ..., 2^-hi
std::vector<double> dyadic_scales(int lo, int hi);

// Finite union of closed intervals; number of closed intervals of the given length needed to cover it.
long interval_cover_count(const IntervalSet& set, double length);

struct CoveringResult {
  long count = 0;
  long bound = 0;
  long I_size = 0;
  long C = 0;
  double r_y = 0.0;
  std::vector<long> I;        // times in 1..T spent in the cusp part
  std::vector<long> counts;   // count after each T' = 0..T
  IntervalSet survivors;      // E_{y,T} in the unstable coordinate
};

// c = (1,-1); the cusp part is lambda1 < threshold. Requires lambda1(x) >= threshold and r < threshold/2.
template <class T>
CoveringResult covering_count_experiment(const FlowSpec& flow, const Grid<T>& y, double threshold, double r,
                                         long T_steps, long max_T = 25);

}  // namespace spikelab
