#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spikelab/dimension.hpp"

using namespace spikelab;

namespace {

MetricChoice quasi(std::vector<double> c) { return MetricChoice::quasi_of(QuasiMetric::from_exponents(std::move(c))); }

// middle-thirds Cantor set at the given level, as left endpoints plus right endpoints of the intervals
std::vector<double> cantor_points(int level) {
  std::vector<double> lo{0.0};
  double len = 1.0;
  for (int k = 0; k < level; ++k) {
    len /= 3;
    std::vector<double> next;
    for (double a : lo) {
      next.push_back(a);
      next.push_back(a + 2 * len);
    }
    lo = next;
  }
  std::vector<double> out;
  for (double a : lo) {
    out.push_back(a);
    out.push_back(a + len);
  }
  return out;
}

long brute_max_separated(const PointSet& pts, double delta, const MetricChoice& m) {
  int n = static_cast<int>(pts.size());
  long best = 0;
  for (long mask = 0; mask < (1L << n); ++mask) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int k = i + 1; k < n && ok; ++k)
        if ((mask >> i & 1) && (mask >> k & 1) && m.dist(pts[i], pts[k]) < delta * (1 - 1e-12)) ok = false;
    if (ok) best = std::max(best, static_cast<long>(__builtin_popcountl(mask)));
  }
  return best;
}

}  // namespace

TEST_CASE("separated_count examples") {
  CHECK(separated_count({{0.0}, {1.0}}, 0.5, MetricChoice::euclidean()) == 2);
  PointSet grid;
  for (int i = 0; i <= 100; ++i) grid.push_back({i / 100.0});
  CHECK(separated_count(grid, 0.1, MetricChoice::euclidean()) == 11);
  CHECK(separated_count_exact(grid, 0.1, MetricChoice::euclidean()) == 11);
  CHECK(separated_count({}, 0.1, MetricChoice::euclidean()) == 0);
}

TEST_CASE("greedy and exact separated counts against brute force") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 4 + trial % 10;
    PointSet pts(n);
    for (auto& p : pts) p = {oracle::uniform(rng), oracle::uniform(rng)};
    double delta = oracle::uniform(rng, 0.1, 0.6);
    MetricChoice m = trial % 2 ? MetricChoice::euclidean() : quasi({1.0, 0.5});
    long greedy = separated_count(pts, delta, m);
    long exact = separated_count_exact(pts, delta, m);
    long brute = brute_max_separated(pts, delta, m);
    CHECK(exact == brute);
    CHECK(greedy <= exact);
    CHECK(greedy >= 1);
  }
}

TEST_CASE("quasi metric laws") {
  std::mt19937_64 rng(17);
  std::vector<std::vector<double>> flows{{1.0, 0.5}, {1.0, 0.25, 0.5}, {1.0}, {0.7, 1.0}};
  for (auto& c : flows) {
    QuasiMetric q = QuasiMetric::from_exponents(c);
    double C = q.constant();
    double worst = 0.0;
    for (int k = 0; k < 100000 / static_cast<int>(flows.size()); ++k) {
      std::vector<double> u(c.size()), v(c.size()), w(c.size());
      for (std::size_t j = 0; j < c.size(); ++j) {
        u[j] = oracle::uniform(rng, -1, 1);
        v[j] = oracle::uniform(rng, -1, 1);
        w[j] = oracle::uniform(rng, -1, 1);
      }
      double lhs = q.dist(u, w), rhs = q.dist(u, v) + q.dist(v, w);
      CHECK(lhs <= C * rhs * (1 + 1e-12));
      CHECK(q.dist(u, v) == q.dist(v, u));
      if (rhs > 0) worst = std::max(worst, lhs / rhs);
    }
    // the constant is attained on collinear triples along the slowest axis
    std::size_t slow = std::min_element(c.begin(), c.end()) - c.begin();
    std::vector<double> a(c.size(), 0.0), b(c.size(), 0.0), m(c.size(), 0.0);
    m[slow] = 0.1;
    b[slow] = 0.2;
    CHECK(q.dist(a, b) == doctest::Approx(C * (q.dist(a, m) + q.dist(m, b))).epsilon(1e-12));
    CHECK(q.norm(std::vector<double>(c.size(), 0.0)) == 0.0);
  }
  CHECK(QuasiMetric::from_exponents({1.0, 0.5}).constant() == doctest::Approx(2.0));
}

TEST_CASE("scaling law in the log domain") {
  std::mt19937_64 rng(23);
  FlowSpec flow({1.0, 0.5, -1.5});
  QuasiMetric q(flow);
  CHECK(q.h_a() == 1.5);
  for (int k = 0; k < 10000; ++k) {
    std::vector<double> u{oracle::uniform(rng, -5, 5), oracle::uniform(rng, -5, 5)};
    std::vector<double> v{oracle::uniform(rng, -5, 5), oracle::uniform(rng, -5, 5)};
    double t = oracle::uniform(rng, -50, 50);
    std::vector<double> diff{u[0] - v[0], u[1] - v[1]};
    auto l = log_coords(diff);
    double before = q.log_norm(l);
    double after = q.log_norm(q.flow_log(l, t));
    CHECK(std::fabs(after - (t + before)) <= 1e-12 * std::max(1.0, std::fabs(t) + std::fabs(before)));
    CHECK(std::log(q.norm(diff)) == doctest::Approx(before).epsilon(1e-12));
  }
}

TEST_CASE("dim_estimate examples") {
  auto scales = dyadic_scales(4, 10);
  CellSet square = CellSet::full({11, 11});
  auto e = dim_estimate(square, MetricChoice::euclidean(), scales);
  CHECK(e.slope == doctest::Approx(2.0).epsilon(0.025));
  auto a = dim_estimate(square, quasi({1.0, 0.5}), scales);
  CHECK(a.slope == doctest::Approx(1.5).epsilon(0.05 / 1.5));

  PointSet seg;
  for (int i = 0; i < 4096; ++i) seg.push_back({(i + 0.5) / 4096, 0.0});
  auto s = dim_estimate(seg, quasi({1.0, 0.5}), scales);
  auto sm = dim_estimate(seg, MetricChoice::euclidean(), scales);
  CHECK(s.slope == doctest::Approx(1.0).epsilon(0.05));
  CHECK(s.slope >= sm.slope + 1.5 - 2.0 - 0.05);

  for (std::size_t i = 1; i < e.counts.size(); ++i) CHECK(e.counts[i] >= e.counts[i - 1]);
  CHECK_THROWS_AS(dim_estimate(PointSet{{0.5, 0.5}}, MetricChoice::euclidean(), scales), DegenerateFit);
  CHECK_THROWS_AS(dim_estimate(seg, MetricChoice::euclidean(), dyadic_scales(4, 6)), InvalidArgument);
}

TEST_CASE("full box returns h_a for several flows") {
  auto scales = dyadic_scales(3, 8);
  struct Case {
    FlowSpec flow;
    std::vector<int> R;
  };
  std::vector<Case> cases{{FlowSpec({1.0, 0.5, -1.5}), {9, 5}},
                          {FlowSpec({1.0, 0.25, -1.25}), {9, 3}},
                          {FlowSpec({1.0, 0.5, 0.25, -1.75}), {9, 5, 3}}};
  for (auto& c : cases) {
    QuasiMetric q(c.flow);
    auto est = dim_estimate(CellSet::full(c.R), MetricChoice::quasi_of(q), scales);
    CHECK(std::fabs(est.slope - c.flow.h_a()) <= 0.05);
  }
}

TEST_CASE("relating dimensions battery") {
  auto scales = dyadic_scales(4, 10);
  QuasiMetric q(FlowSpec({1.0, 0.5, -1.5}));
  MetricChoice qa = MetricChoice::quasi_of(q);
  std::vector<PointSet> battery;
  PointSet vertical, horizontal, cantor_x, cantor_y, box;
  for (int i = 0; i < 2048; ++i) {
    vertical.push_back({0.0, (i + 0.5) / 2048});
    horizontal.push_back({(i + 0.5) / 2048, 0.0});
  }
  auto cp = cantor_points(7);
  for (double a : cp)
    for (int i = 0; i < 256; ++i) {
      cantor_x.push_back({a, (i + 0.5) / 256});
      cantor_y.push_back({(i + 0.5) / 256 * 1.0, a});
    }
  for (int i = 0; i < 512; ++i)
    for (int k = 0; k < 512; ++k) box.push_back({(i + 0.5) / 512, (k + 0.5) / 512});
  for (auto* s : {&vertical, &horizontal, &cantor_x, &cantor_y, &box}) {
    double da = dim_estimate(*s, qa, scales).slope;
    double dm = dim_estimate(*s, MetricChoice::euclidean(), scales).slope;
    CHECK(da >= dm + q.h_a() - 2.0 - 0.05);
  }
}

TEST_CASE("interval cover count") {
  CHECK(interval_cover_count(IntervalSet::from({Interval::closed(0, 1)}), 0.25) == 4);
  CHECK(interval_cover_count(IntervalSet::from({Interval::closed(0, 0.1), Interval::closed(0.2, 0.3)}), 0.5) == 1);
  CHECK(interval_cover_count(IntervalSet::from({Interval::closed(0, 0.1), Interval::closed(0.7, 0.7)}), 0.5) == 2);
  CHECK(interval_cover_count(IntervalSet(), 0.5) == 0);
}

TEST_CASE("covering count experiment") {
  FlowSpec flow = FlowSpec::planar(1.0);
  auto gold = oracle::unipotent_lattice(oracle::golden_fraction(60));
  Grid<Rational> yg(gold, {Rational(0), Rational(0)});
  auto zero = covering_count_experiment(flow, yg, 0.3, 0.1, 0);
  CHECK(zero.count <= zero.C);
  auto g = covering_count_experiment(flow, yg, 0.3, 0.1, 20);
  CHECK(g.I_size == 0);
  CHECK(g.bound == g.C);
  for (long c : g.counts) CHECK(c <= g.C);

  auto alpha = oracle::unipotent_lattice(oracle::cf_value(oracle::powers_of_ten_quotients(6)));
  Grid<Rational> ya(alpha, {make_rational(1, 3), Rational(0)});
  auto one = covering_count_experiment(flow, ya, 0.1, 0.04, 15);
  CHECK(one.I_size >= 1);
  CHECK(one.count <= one.bound);
  auto two = covering_count_experiment(flow, ya, 0.1, 0.04, 20);
  CHECK(two.count <= two.bound);

  CHECK_THROWS_AS(covering_count_experiment(flow, ya, 0.1, 0.06, 5), InvalidArgument);
  CHECK_THROWS_AS(covering_count_experiment(flow, ya, 0.1, 0.04, 26), BudgetExceeded);
}
