#include <algorithm>
#include <cmath>
#include <map>

#include "spikelab/dimension.hpp"

namespace spikelab {

namespace {

constexpr double kSeparationSlack = 1e-12;

std::vector<long> cell_of(const std::vector<double>& p, const std::vector<double>& side) {
  std::vector<long> c(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) c[j] = static_cast<long>(std::floor(p[j] / side[j]));
  return c;
}

int check_dims(const PointSet& points) {
  if (points.empty()) return 0;
  int n = static_cast<int>(points.front().size());
  for (const auto& p : points)
    if (static_cast<int>(p.size()) != n) throw InvalidArgument("points differ in dimension");
  return n;
}

// pairs closer than delta conflict; the slack keeps exact lattice spacings separated
bool conflict(const std::vector<double>& a, const std::vector<double>& b, double delta, const MetricChoice& m) {
  return m.dist(a, b) < delta * (1.0 - kSeparationSlack);
}

}  // namespace

long separated_count(const PointSet& points, double delta, const MetricChoice& metric) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  int n = check_dims(points);
  if (n == 0) return 0;
  std::vector<double> side = metric.box_sides(delta, n);
  std::map<std::vector<long>, std::vector<int>> cells;
  long count = 0;
  std::vector<long> nb(n);
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    std::vector<long> c = cell_of(points[i], side);
    bool ok = true;
    long total = 1;
    for (int j = 0; j < n; ++j) total *= 3;
    for (long code = 0; code < total && ok; ++code) {
      long rest = code;
      for (int j = 0; j < n; ++j) {
        nb[j] = c[j] + rest % 3 - 1;
        rest /= 3;
      }
      auto it = cells.find(nb);
      if (it == cells.end()) continue;
      for (int k : it->second)
        if (conflict(points[i], points[k], delta, metric)) {
          ok = false;
          break;
        }
    }
    if (ok) {
      cells[c].push_back(i);
      ++count;
    }
  }
  return count;
}

namespace {

struct MisSearch {
  std::vector<std::vector<int>> adj;
  long best = 0;
  double nodes = 0.0;
  double budget = 0.0;

  void run(std::vector<int> alive, long taken) {
    nodes += 1.0;
    if (nodes > budget) throw BudgetExceeded("separated set search exceeds the node budget");
    // isolated vertices are always taken
    std::vector<char> in(adj.size(), 0);
    for (int v : alive) in[v] = 1;
    int pick = -1, pick_deg = -1;
    std::vector<int> rest;
    for (int v : alive) {
      int deg = 0;
      for (int u : adj[v]) deg += in[u];
      if (deg == 0) {
        ++taken;
      } else {
        rest.push_back(v);
        if (deg > pick_deg) pick_deg = deg, pick = v;
      }
    }
    if (rest.empty()) {
      best = std::max(best, taken);
      return;
    }
    if (taken + static_cast<long>(rest.size()) <= best) return;
    // branch: take pick (drop its neighbours) or drop pick
    std::vector<char> drop(adj.size(), 0);
    drop[pick] = 1;
    for (int u : adj[pick]) drop[u] = 1;
    std::vector<int> with;
    for (int v : rest)
      if (!drop[v]) with.push_back(v);
    run(with, taken + 1);
    std::vector<int> without;
    for (int v : rest)
      if (v != pick) without.push_back(v);
    if (taken + static_cast<long>(without.size()) > best) run(without, taken);
  }
};

}  // namespace

long separated_count_exact(const PointSet& points, double delta, const MetricChoice& metric, double node_budget) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (points.size() > 2000) throw BudgetExceeded("exact separated count is limited to 2000 points");
  check_dims(points);
  MisSearch s;
  s.adj.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t k = i + 1; k < points.size(); ++k)
      if (conflict(points[i], points[k], delta, metric)) {
        s.adj[i].push_back(static_cast<int>(k));
        s.adj[k].push_back(static_cast<int>(i));
      }
  s.budget = node_budget;
  s.best = separated_count(points, delta, metric);
  std::vector<int> all(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) all[i] = static_cast<int>(i);
  s.run(all, 0);
  return s.best;
}

std::vector<double> CellSet::centre(long index) const {
  std::vector<double> p(R.size());
  for (std::size_t j = 0; j < R.size(); ++j) {
    long side = 1L << R[j];
    p[j] = (static_cast<double>(index % side) + 0.5) / static_cast<double>(side);
    index /= side;
  }
  return p;
}

CellSet CellSet::full(std::vector<int> R) {
  int total = 0;
  for (int r : R) total += r;
  if (total > 30) throw BudgetExceeded("cell set too large");
  CellSet c{std::move(R), {}};
  c.bits.assign(1L << total, 1);
  return c;
}

namespace {

template <class Visit>
long count_boxes(int n, const std::vector<double>& side, Visit&& each_point) {
  std::vector<std::vector<long>> keys;
  each_point([&](const std::vector<double>& p) { keys.push_back(cell_of(p, side)); });
  std::sort(keys.begin(), keys.end());
  return static_cast<long>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

}  // namespace

long box_count(const PointSet& points, double delta, const MetricChoice& metric) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  int n = check_dims(points);
  if (n == 0) return 0;
  return count_boxes(n, metric.box_sides(delta, n), [&](auto&& f) {
    for (const auto& p : points) f(p);
  });
}

long box_count(const CellSet& cells, double delta, const MetricChoice& metric) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  int n = cells.dim();
  std::vector<double> side = metric.box_sides(delta, n);
  // boxes are indexed per axis; a cell maps to the box holding its centre
  std::vector<std::vector<long>> axis(n);
  for (int j = 0; j < n; ++j) {
    long m = 1L << cells.R[j];
    axis[j].resize(m);
    for (long i = 0; i < m; ++i)
      axis[j][i] = static_cast<long>(std::floor((static_cast<double>(i) + 0.5) / static_cast<double>(m) / side[j]));
  }
  std::vector<long> mult(n, 1);
  long radix = 1;
  for (int j = 0; j < n; ++j) {
    mult[j] = radix;
    radix *= axis[j].back() + 1;
  }
  std::vector<long> keys;
  keys.reserve(1024);
  for (long c = 0; c < cells.size(); ++c) {
    if (!cells.bits[c]) continue;
    long rest = c, key = 0;
    for (int j = 0; j < n; ++j) {
      long m = 1L << cells.R[j];
      key += axis[j][rest % m] * mult[j];
      rest /= m;
    }
    keys.push_back(key);
  }
  std::sort(keys.begin(), keys.end());
  return static_cast<long>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

namespace {

template <class Set>
DimensionEstimate estimate(const Set& set, const MetricChoice& metric, const std::vector<double>& deltas) {
  if (deltas.size() < 4) throw InvalidArgument("dimension fit needs at least 4 scales");
  std::vector<double> counts;
  for (double d : deltas) counts.push_back(static_cast<double>(box_count(set, d, metric)));
  for (double c : counts)
    if (c < 1.0) throw DegenerateFit("empty set");
  return fit_dimension(deltas, counts);
}

}  // namespace

DimensionEstimate dim_estimate(const PointSet& points, const MetricChoice& metric, const std::vector<double>& deltas) {
  return estimate(points, metric, deltas);
}

DimensionEstimate dim_estimate(const CellSet& cells, const MetricChoice& metric, const std::vector<double>& deltas) {
  return estimate(cells, metric, deltas);
}

std::vector<double> dyadic_scales(int lo, int hi) {
  std::vector<double> out;
  for (int m = lo; m <= hi; ++m) out.push_back(std::ldexp(1.0, -m));
  return out;
}

}  // namespace spikelab
