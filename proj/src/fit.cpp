#include "spikelab/fit.hpp"

#include <algorithm>
#include <cmath>

#include "spikelab/errors.hpp"

namespace spikelab {

DimensionEstimate fit_dimension(const std::vector<double>& deltas, const std::vector<double>& counts) {
  if (deltas.size() != counts.size()) throw InvalidArgument("scale and count lists differ in length");
  if (deltas.size() < 2) throw DegenerateFit("need at least two scales");
  if (std::all_of(counts.begin(), counts.end(), [&](double c) { return c == counts.front(); }))
    throw DegenerateFit("all counts are equal");
  std::size_t n = deltas.size();
  std::vector<double> x(n), y(n);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(deltas[i] > 0.0) || !(counts[i] >= 1.0)) throw InvalidArgument("scales must be positive and counts at least 1");
    x[i] = -std::log(deltas[i]);
    y[i] = std::log(counts[i]);
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DegenerateFit("all scales are equal");
  DimensionEstimate e;
  e.deltas = deltas;
  e.counts = counts;
  e.slope = sxy / sxx;
  e.intercept = my - e.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - (e.intercept + e.slope * x[i]);
    ss += r * r;
  }
  e.residual_rms = std::sqrt(ss / n);
  e.delta_min = *std::min_element(deltas.begin(), deltas.end());
  e.delta_max = *std::max_element(deltas.begin(), deltas.end());
  return e;
}

}  // namespace spikelab
