#include <cmath>
#include <map>

#include "spikelab/geometry.hpp"

namespace spikelab {

namespace {

Vec<double> window_factors(const FlowSpec& flow, double t, const Vec<double>*) {
  Vec<double> f(flow.dim());
  for (int j = 0; j < flow.dim(); ++j) {
    double e = flow.c(j) * t;
    if (std::fabs(e) > 700) throw Overflow("spike window beyond float range; use the rational kind");
    f[j] = std::exp(e);
  }
  return f;
}

Vec<Rational> window_factors(const FlowSpec& flow, double t, const Vec<Rational>*) { return flow_factors(flow, t); }

}  // namespace

template <class T>
std::vector<SpikePoint<T>> grid_spike_points(const FlowSpec& flow, const Grid<T>& y, const BoxRegion& region,
                                             double t_max, const SpikeOptions& opts) {
  if (!(t_max > 0) || !std::isfinite(t_max)) throw InvalidArgument("grid_spike_points needs finite t_max > 0");
  int d = y.dim();
  if (flow.dim() != d || region.dim() != d) throw InvalidArgument("grid_spike_points dimension mismatch");
  Vec<double> extent = region.extent();
  const Interval horizon{0.0, t_max, false, true};
  // time windows short enough that the swept box stays close to a cube after rescaling
  int windows = std::max(1, static_cast<int>(std::ceil(t_max * flow.max_abs())));
  std::map<Coeffs, SpikePoint<T>> found;
  double used = 0.0;
  for (int k = 0; k < windows; ++k) {
    double ta = t_max * k / windows;
    double tb = t_max * (k + 1) / windows;
    double tm = 0.5 * (ta + tb);
    Vec<double> half(d);
    for (int j = 0; j < d; ++j) {
      double c = flow.c(j);
      half[j] = std::exp(std::log(extent[j] * opts.box_scale) + std::max(-c * ta, -c * tb) + c * tm);
    }
    Vec<T> f = window_factors(flow, tm, static_cast<const Vec<T>*>(nullptr));
    Reduction<T> red = reduce(scale_rows(y.lattice().basis(), f));
    Matrix<T> binv = inverse(red.basis);
    Vec<T> center = multiply(binv, scale_vector(y.offset(), f));
    for (auto& v : center) v = -v;
    Vec<double> radius = coefficient_radii(binv, half);
    double visited = 0.0;
    enumerate_coefficients<T>(center, radius, opts.budget - used, [&](const Coeffs& zr) {
      visited += 1.0;
      Coeffs z = multiply(red.transform, zr);
      if (found.count(z)) return true;
      Vec<T> p = y.point(z);
      IntervalSet hits = hit_times(flow, p, region).intersect(horizon);
      if (!hits.empty()) {
        SpikePoint<T> sp;
        sp.point.point = p;
        sp.point.layer = z.back();
        sp.point.coeffs = z;
        sp.hits = hits;
        found.emplace(z, std::move(sp));
      }
      return true;
    });
    used += visited;
  }
  std::vector<SpikePoint<T>> out;
  out.reserve(found.size());
  for (auto& [z, sp] : found) out.push_back(std::move(sp));
  return out;
}

template std::vector<SpikePoint<double>> grid_spike_points(const FlowSpec&, const Grid<double>&, const BoxRegion&,
                                                           double, const SpikeOptions&);
template std::vector<SpikePoint<Rational>> grid_spike_points(const FlowSpec&, const Grid<Rational>&,
                                                             const BoxRegion&, double, const SpikeOptions&);

}  // namespace spikelab
