#pragma once

#include <string>
#include <vector>

namespace spikelab {

// Least squares fit of log N against log(1/delta).
struct DimensionEstimate {
  std::vector<double> deltas;
  std::vector<double> counts;
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  double delta_min = 0.0;
  double delta_max = 0.0;
  std::string caveat = "slope over a finite scale window; the lower box dimension is a liminf";
};

// throws DegenerateFit when fewer than two scales or all counts are equal
DimensionEstimate fit_dimension(const std::vector<double>& deltas, const std::vector<double>& counts);

}  // namespace spikelab
