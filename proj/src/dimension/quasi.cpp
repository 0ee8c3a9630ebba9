#include <algorithm>
#include <cmath>
#include <limits>

#include "spikelab/dimension.hpp"

namespace spikelab {

QuasiMetric::QuasiMetric(const FlowSpec& flow) {
  for (int j : flow.j_plus()) c_.push_back(flow.c(j));
  if (c_.empty()) throw InvalidArgument("flow has no expanding direction");
}

QuasiMetric QuasiMetric::from_exponents(std::vector<double> c) {
  if (c.empty()) throw InvalidArgument("need at least one exponent");
  for (double x : c)
    if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument("exponents must be positive");
  QuasiMetric q;
  q.c_ = std::move(c);
  return q;
}

double QuasiMetric::h_a() const {
  double s = 0.0;
  for (double x : c_) s += x;
  return s;
}

double QuasiMetric::constant() const {
  double cmin = *std::min_element(c_.begin(), c_.end());
  return std::max(1.0, std::exp2(1.0 / cmin - 1.0));
}

double QuasiMetric::norm(const std::vector<double>& u) const {
  if (u.size() != c_.size()) throw InvalidArgument("point dimension does not match the metric");
  double m = 0.0;
  for (std::size_t j = 0; j < c_.size(); ++j)
    if (u[j] != 0.0) m = std::max(m, std::pow(std::fabs(u[j]), 1.0 / c_[j]));
  return m;
}

double QuasiMetric::dist(const std::vector<double>& u, const std::vector<double>& v) const {
  if (u.size() != v.size()) throw InvalidArgument("points differ in dimension");
  std::vector<double> d(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) d[j] = u[j] - v[j];
  return norm(d);
}

double QuasiMetric::log_norm(const std::vector<LogCoord>& u) const {
  if (u.size() != c_.size()) throw InvalidArgument("point dimension does not match the metric");
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < c_.size(); ++j)
    if (u[j].sign != 0) m = std::max(m, u[j].log / c_[j]);
  return m;
}

std::vector<LogCoord> QuasiMetric::flow_log(const std::vector<LogCoord>& u, double t) const {
  std::vector<LogCoord> out = u;
  for (std::size_t j = 0; j < c_.size(); ++j)
    if (out[j].sign != 0) out[j].log += c_[j] * t;
  return out;
}

std::vector<double> QuasiMetric::box_sides(double delta) const {
  std::vector<double> s;
  for (double x : c_) s.push_back(std::pow(delta, x));
  return s;
}

double MetricChoice::dist(const std::vector<double>& u, const std::vector<double>& v) const {
  if (kind == MetricKind::quasi) return quasi->dist(u, v);
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) s += (u[j] - v[j]) * (u[j] - v[j]);
  return std::sqrt(s);
}

std::vector<double> MetricChoice::box_sides(double delta, int dim) const {
  if (kind == MetricKind::quasi) {
    if (quasi->dim() != dim) throw InvalidArgument("point dimension does not match the metric");
    return quasi->box_sides(delta);
  }
  return std::vector<double>(dim, delta);
}

}  // namespace spikelab
