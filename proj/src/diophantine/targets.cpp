#include <algorithm>
#include <cmath>
#include <limits>

#include "spikelab/diophantine.hpp"

namespace spikelab {

void BadTestConfig::validate() const {
  if (v.empty()) throw InvalidArgument("v must be nonempty");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (K < 1) throw InvalidArgument("K must be at least 1");
  for (double x : v)
    if (!std::isfinite(x)) throw InvalidArgument("v must be finite");
  if (weights) {
    if (weights->size() != v.size()) throw InvalidArgument("one weight per coordinate");
    double sum = 0.0;
    for (double x : *weights) {
      if (!(x > 0.0 && x < 1.0) && !(v.size() == 1 && x == 1.0)) throw InvalidArgument("weights must lie in (0,1)");
      sum += x;
    }
    if (std::fabs(sum - 1.0) > 1e-12) throw InvalidArgument("weights must sum to 1");
  }
}

BadScorer::BadScorer(const BadTestConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  int n = cfg_.n();
  int rows = cfg_.weights ? n : 1;
  pow_.assign(rows, std::vector<double>(cfg_.K + 1, 0.0));
  for (int l = 0; l < rows; ++l) {
    double e = cfg_.weights ? (*cfg_.weights)[l] : 1.0 / n;
    for (long k = 1; k <= cfg_.K; ++k) pow_[l][k] = e == 1.0 ? static_cast<double>(k) : std::pow(static_cast<double>(k), e);
  }
}

double BadScorer::score(long k, const double* w) const {
  int n = cfg_.n();
  if (cfg_.weights) {
    double s = std::numeric_limits<double>::infinity();
    for (int l = 0; l < n; ++l) s = std::min(s, pow_[l][k] * int_dist(static_cast<double>(k) * cfg_.v[l] - w[l]));
    return s;
  }
  double m = 0.0;
  for (int l = 0; l < n; ++l) m = std::max(m, int_dist(static_cast<double>(k) * cfg_.v[l] - w[l]));
  return pow_[0][k] * m;
}

bool BadScorer::survives(const double* w) const {
  for (long k = 1; k <= cfg_.K; ++k)
    if (score(k, w) < cfg_.eps) return false;
  return true;
}

BadTestResult BadScorer::test(const double* w) const {
  BadTestResult r;
  r.min_value = std::numeric_limits<double>::infinity();
  for (long k = 1; k <= cfg_.K; ++k) {
    double s = score(k, w);
    if (s < r.min_value) {
      r.min_value = s;
      r.argmin_k = k;
    }
  }
  r.verdict = r.min_value >= cfg_.eps;
  return r;
}

BadTestResult bad_target_test(const BadTestConfig& cfg, const std::vector<double>& w) {
  if (static_cast<int>(w.size()) != cfg.n()) throw InvalidArgument("w must have the dimension of v");
  return BadScorer(cfg).test(w.data());
}

namespace {

ScanResult run_scan(const BadTestConfig& cfg, int R, double max_cells, bool parallel) {
  int n = cfg.n();
  if (R < 0) throw InvalidArgument("resolution must be nonnegative");
  if (n * R > 62 || std::ldexp(1.0, n * R) > max_cells) throw BudgetExceeded("scan grid exceeds the cell budget");
  BadScorer scorer(cfg);
  long side = 1L << R;
  long cells = 1L << (n * R);
  ScanResult out;
  out.n = n;
  out.R = R;
  out.bitmap.assign(cells, 0);
  double h = std::ldexp(1.0, -R);
#pragma omp parallel for schedule(dynamic, 256) if (parallel)
  for (long c = 0; c < cells; ++c) {
    double w[8];
    long rest = c;
    for (int l = 0; l < n; ++l) {
      w[l] = (static_cast<double>(rest % side) + 0.5) * h;
      rest /= side;
    }
    out.bitmap[c] = scorer.survives(w) ? 1 : 0;
  }
  for (auto b : out.bitmap) out.survivors += b;
  out.survivor_fraction = static_cast<double>(out.survivors) / static_cast<double>(cells);

  auto count_boxes = [&](const std::vector<std::uint8_t>& bits, int m) {
    long bside = 1L << m;
    std::vector<std::uint8_t> hit(1L << (n * m), 0);
    for (long c = 0; c < cells; ++c) {
      if (!bits[c]) continue;
      long rest = c, idx = 0, mul = 1;
      for (int l = 0; l < n; ++l) {
        idx += ((rest % side) >> (R - m)) * mul;
        rest /= side;
        mul *= bside;
      }
      hit[idx] = 1;
    }
    long k = 0;
    for (auto b : hit) k += b;
    return k;
  };
  for (int m = 0; m <= R; ++m) out.box_counts.push_back(count_boxes(out.bitmap, m));

  // corner variant: a cell counts if any of its 2^n corners survives
  long cside = side + 1;
  long corners = 1;
  for (int l = 0; l < n; ++l) corners *= cside;
  std::vector<std::uint8_t> corner_ok(corners, 0);
#pragma omp parallel for schedule(dynamic, 256) if (parallel)
  for (long c = 0; c < corners; ++c) {
    double w[8];
    long rest = c;
    for (int l = 0; l < n; ++l) {
      w[l] = static_cast<double>(rest % cside) * h;
      rest /= cside;
    }
    corner_ok[c] = scorer.survives(w) ? 1 : 0;
  }
  std::vector<std::uint8_t> cell_ok(cells, 0);
  for (long c = 0; c < cells; ++c) {
    long base[8];
    long rest = c;
    for (int l = 0; l < n; ++l) {
      base[l] = rest % side;
      rest /= side;
    }
    for (long mask = 0; mask < (1L << n) && !cell_ok[c]; ++mask) {
      long idx = 0, mul = 1;
      for (int l = 0; l < n; ++l) {
        idx += (base[l] + ((mask >> l) & 1)) * mul;
        mul *= cside;
      }
      if (corner_ok[idx]) cell_ok[c] = 1;
    }
  }
  for (int m = 0; m <= std::min(1, R); ++m) out.corner_box_counts.push_back(count_boxes(cell_ok, m));
  return out;
}

}  // namespace

ScanResult bad_set_scan(const BadTestConfig& cfg, int R, double max_cells) {
  if (cfg.n() > 8) throw DimensionUnsupported("scan supports n <= 8");
  return run_scan(cfg, R, max_cells, true);
}

ScanResult bad_set_scan_serial(const BadTestConfig& cfg, int R, double max_cells) {
  if (cfg.n() > 8) throw DimensionUnsupported("scan supports n <= 8");
  return run_scan(cfg, R, max_cells, false);
}

DimensionEstimate scan_dimension(const ScanResult& scan, int m_lo, int m_hi) {
  if (m_hi < 0) m_hi = scan.R;
  if (m_lo < 0 || m_hi > scan.R || m_lo >= m_hi) throw InvalidArgument("scale window outside the scan");
  std::vector<double> deltas, counts;
  for (int m = m_lo; m <= m_hi; ++m) {
    if (scan.box_counts[m] == 0) throw DegenerateFit("no surviving cells");
    deltas.push_back(std::ldexp(1.0, -m));
    counts.push_back(static_cast<double>(scan.box_counts[m]));
  }
  return fit_dimension(deltas, counts);
}

CorrespondenceResult spike_correspondence(const std::vector<double>& v, const std::vector<double>& w, double s,
                                          double eps, long K) {
  if (v.size() != w.size() || v.empty()) throw InvalidArgument("v and w must have the same positive dimension");
  if (!(s >= 0.0 && s <= 1.0)) throw InvalidArgument("s must lie in [0,1]");
  BadTestConfig cfg{v, eps, K, std::nullopt};
  CorrespondenceResult out;
  out.bad_proxy = bad_target_test(cfg, w).verdict;
  int n = static_cast<int>(v.size());
  for (long k = 1; k <= K; ++k) {
    // last coordinate k - s; the spike is s' >= 1 with s'^{1/n}|u| < eps/2, the window is s' in (0,1) with |u| < eps/2
    double last = static_cast<double>(k) - s;
    double radius;
    if (last >= 1.0) radius = 0.5 * eps / std::pow(last, 1.0 / n);
    else if (last > 0.0) radius = 0.5 * eps;
    else continue;
    long count = 1;
    for (int l = 0; l < n && count > 0; ++l) {
      double f = static_cast<double>(k) * v[l] - w[l];
      // integers m with |m + f| < radius
      double lo = -f - radius, hi = -f + radius;
      long c = static_cast<long>(std::ceil(hi)) - static_cast<long>(std::floor(lo)) - 1;
      count *= std::max(0L, c);
    }
    out.spike_count += count;
  }
  out.consistent = !out.bad_proxy || out.spike_count == 0;
  return out;
}

template <class T>
bool avoid_test(const FlowSpec& flow, const Grid<T>& y, const BoxRegion& region, double r, double t_max,
                const SpikeOptions& opts) {
  if (!(r >= 0.0 && r < t_max)) throw InvalidArgument("need 0 <= r < t_max");
  for (const auto& p : grid_spike_points(flow, y, region, t_max, opts))
    if (!p.hits.intersect(Interval::closed(r, t_max)).empty()) return false;
  return true;
}

template bool avoid_test(const FlowSpec&, const Grid<double>&, const BoxRegion&, double, double, const SpikeOptions&);
template bool avoid_test(const FlowSpec&, const Grid<Rational>&, const BoxRegion&, double, double,
                         const SpikeOptions&);

}  // namespace spikelab
