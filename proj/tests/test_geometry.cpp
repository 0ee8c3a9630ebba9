#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spikelab/geometry.hpp"
#include "spikelab/serialize.hpp"

using namespace spikelab;

namespace {

Matrix<double> rows2(double a, double b, double c, double d) { return Matrix<double>::from_rows({{a, b}, {c, d}}); }

Lattice<double> x_v(double v) { return Lattice<double>(rows2(1, v, 0, 1)); }

const BoxRegion kHalfSquare = BoxRegion::ball(2, 0.5);
const BoxRegion kQuarterSquare = BoxRegion::ball(2, 0.25);

}  // namespace

TEST_CASE("gauss_reduce examples") {
  auto id = gauss_reduce(Matrix<double>::identity(2));
  CHECK(id.basis == Matrix<double>::identity(2));

  auto shear = gauss_reduce(rows2(1, 10, 0, 1));
  CHECK(shear.basis == Matrix<double>::identity(2));
  CHECK(shear.transform.at(0, 1) == -10);

  auto red = gauss_reduce(x_v(0.618034).basis());
  double first = norm_value(red.basis.cols[0], Norm::euclidean);
  double brute = std::sqrt(oracle::brute_lambda1_key(x_v(0.618034).basis(), Norm::euclidean, 50));
  CHECK(first == doctest::Approx(brute).epsilon(1e-14));

  CHECK_THROWS_AS(gauss_reduce(rows2(1, 2, 2, 4)), SingularBasis);
}

TEST_CASE("lambda1 examples") {
  CHECK(lambda1(Lattice<double>::standard(2)) == 1.0);
  double e = std::exp(1.0);
  CHECK(lambda1(Lattice<double>(rows2(e, 0, 0, 1 / e))) == doctest::Approx(1 / e).epsilon(1e-15));
  auto v = lambda1_vector(x_v(0.618034));
  CHECK(v.norm == 1.0);
  CHECK(oracle::brute_lambda1_key(x_v(0.618034).basis(), Norm::sup, 50) == 1.0);
}

TEST_CASE("lambda1 in dimensions 3 and 4") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    int d = 3 + trial % 2;
    Matrix<Rational> m = Matrix<Rational>::identity(d);
    for (int k = 0; k < 3; ++k) {
      int a = oracle::uniform_int(rng, 0, d - 1), b = (a + 1 + oracle::uniform_int(rng, 0, d - 2)) % d;
      long e = oracle::uniform_int(rng, -2, 2);
      for (int r = 0; r < d; ++r) m.at(r, b) += Rational(e) * m.at(r, a);
    }
    Rational s = make_rational(oracle::uniform_int(rng, 50, 200), 100);
    for (int c = 0; c < d; ++c) {
      m.at(0, c) *= s;
      m.at(1, c) /= s;
    }
    Lattice<Rational> x(m);
    auto got = lambda1_vector(x, Norm::sup);
    // brute force over a cube of original coefficients
    Rational best(-1);
    const long K = d == 3 ? 12 : 7;
    std::vector<long> z(d, -K);
    while (true) {
      bool zero = std::all_of(z.begin(), z.end(), [](long v) { return v == 0; });
      if (!zero) {
        Coeffs zc(z.begin(), z.end());
        Rational k = norm_key(x.point(zc), Norm::sup);
        if (best < 0 || k < best) best = k;
      }
      int i = 0;
      for (; i < d; ++i) {
        if (z[i] < K) {
          ++z[i];
          break;
        }
        z[i] = -K;
      }
      if (i == d) break;
    }
    CHECK(got.key == best);
    CHECK(norm_key(x.point(got.coeffs), Norm::sup) == got.key);
  }
  CHECK_THROWS_AS(lambda1(Lattice<double>::standard(5)), DimensionUnsupported);
}

TEST_CASE("sigma examples") {
  CHECK(sigma(Grid<double>(Lattice<double>::standard(2), {0.5, 0.5})) == 0.5);
  CHECK(sigma(Grid<double>(Lattice<double>::standard(2), {0.0, 0.0})) == 0.0);
  double e = std::exp(1.0);
  Matrix<double> b = rows2(e, 0, 0, 1 / e);
  Grid<double> y(Lattice<double>(b), {0.2, 0.3});
  double brute = oracle::brute_sigma_key(b, y.offset(), Norm::sup, 100);
  CHECK(sigma(y) == doctest::Approx(brute).epsilon(1e-14));
  CHECK_THROWS_AS(sigma(Grid<double>(Lattice<double>::standard(5), Vec<double>(5, 0.1))), DimensionUnsupported);
}

TEST_CASE("grid offsets are reduced into the fundamental domain") {
  Grid<Rational> y(Lattice<Rational>::standard(2), {Rational(7, 3), Rational(-1, 4)});
  CHECK(y.offset()[0] == Rational(1, 3));
  CHECK(y.offset()[1] == Rational(3, 4));
}

TEST_CASE("lambda1 and sigma agree with brute force on random planar instances") {
  std::mt19937_64 rng(20240611);
  for (Norm norm : {Norm::sup, Norm::euclidean}) {
    for (int i = 0; i < 200; ++i) {
      Matrix<Rational> bq = oracle::random_unimodular<Rational>(rng);
      Lattice<Rational> xq(bq);
      CHECK(lambda1_vector(xq, norm).key == oracle::brute_key_integer(bq, nullptr, norm, 50));
      Grid<Rational> yq(xq, {make_rational(oracle::uniform_int(rng, 0, 997), 997), make_rational(oracle::uniform_int(rng, 0, 991), 991)});
      CHECK(closest_point(yq, norm).key == oracle::brute_key_integer(bq, &yq.offset(), norm, 50));

      Matrix<double> bf = oracle::random_unimodular<double>(rng);
      Lattice<double> xf(bf);
      double want = oracle::as_norm(oracle::brute_lambda1_key(bf, norm, 50), norm);
      CHECK(std::fabs(lambda1(xf, norm) - want) <= 1e-10 * want);
      Grid<double> yf(xf, {oracle::uniform(rng), oracle::uniform(rng)});
      double want_s = oracle::as_norm(oracle::brute_sigma_key(bf, yf.offset(), norm, 50), norm);
      CHECK(std::fabs(sigma(yf, norm) - want_s) <= 1e-10 * std::max(want_s, 1e-300));
    }
  }
}

TEST_CASE("apply_flow examples and group law") {
  FlowSpec flow = FlowSpec::planar();
  Vec<double> p{1, 1};
  CHECK(apply_flow(flow, 0.0, p) == p);
  auto q = apply_flow(flow, 1.0, p);
  CHECK(q[0] == doctest::Approx(std::exp(1.0)));
  CHECK(q[1] == doctest::Approx(std::exp(-1.0)));

  std::mt19937_64 rng(3);
  Lattice<double> x(oracle::random_unimodular<double>(rng));
  auto back = apply_flow(flow, -2.0, apply_flow(flow, 2.0, x));
  for (int c = 0; c < 2; ++c)
    for (int r = 0; r < 2; ++r) CHECK(back.basis().at(r, c) == doctest::Approx(x.basis().at(r, c)).epsilon(1e-10));

  CHECK_THROWS_AS(apply_flow(flow, 701.0, x), Overflow);
  Lattice<Rational> xq(oracle::random_unimodular<Rational>(rng));
  auto far = apply_flow(flow, 701.0, xq);
  CHECK(abs(determinant(far.basis())) == 1);
}

TEST_CASE("apply_flow preserves unimodularity") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    int d = 2 + i % 3;
    std::vector<double> c(d);
    bool ok = false;
    while (!ok) {
      double sum = 0;
      for (int j = 0; j + 1 < d; ++j) {
        c[j] = oracle::uniform(rng, -2, 2);
        sum += c[j];
      }
      c[d - 1] = -sum;
      ok = std::all_of(c.begin(), c.end(), [](double v) { return std::fabs(v) > 0.05; });
    }
    FlowSpec flow(c);
    double t = oracle::uniform(rng, -1, 1) * 50.0 / flow.max_abs();
    auto y = apply_flow(flow, t, Lattice<double>::standard(d));
    CHECK(std::fabs(std::fabs(determinant(y.basis())) - 1.0) <= 1e-9);
  }
}

TEST_CASE("hit_times examples") {
  FlowSpec flow = FlowSpec::planar();
  auto a = hit_times(flow, Vec<double>{0.1, 2.0}, kHalfSquare);
  REQUIRE(a.parts().size() == 1);
  CHECK(a.parts()[0].lo == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(a.parts()[0].hi == doctest::Approx(std::log(5.0)).epsilon(1e-14));
  CHECK_FALSE(a.parts()[0].lo_closed);
  CHECK(hit_times(flow, Vec<double>{0.6, 0.1}, kHalfSquare).empty());
  auto c = hit_times(flow, Vec<double>{0.0, 5.0}, kHalfSquare);
  REQUIRE(c.parts().size() == 1);
  CHECK(c.parts()[0].lo == doctest::Approx(std::log(10.0)));
  CHECK(std::isinf(c.parts()[0].hi));
}

TEST_CASE("hit_times matches dense sampling") {
  std::mt19937_64 rng(5);
  FlowSpec flow({1.0, 0.5, -1.5});
  BoxRegion region({Box{{-0.5, -0.3, -0.4}, {0.4, 0.6, 0.5}}, Box{{0.1, -0.2, 0.2}, {0.9, 0.2, 0.9}}});
  for (int i = 0; i < 60; ++i) {
    Vec<double> p{oracle::uniform(rng, -0.3, 0.3), oracle::uniform(rng, -0.3, 0.3), oracle::uniform(rng, -40, 40)};
    auto hits = hit_times(flow, p, region);
    bool any_inside = false;
    double prev_t = 0.0;
    bool prev_in = false;
    for (double t = 1e-4; t < 8.0; t += 1e-4) {
      bool in = region.contains(apply_flow(flow, t, p));
      any_inside = any_inside || in;
      if (in != prev_in && t > 1e-4) {
        // a transition must sit within a sampling step of an endpoint
        bool near = false;
        for (const auto& iv : hits.parts())
          near = near || std::fabs(iv.lo - t) <= 2e-4 || std::fabs(iv.hi - t) <= 2e-4 || std::fabs(iv.lo - prev_t) <= 2e-4;
        CHECK(near);
      }
      if (in) CHECK(hits.contains(t));
      prev_in = in;
      prev_t = t;
    }
    CHECK(any_inside == !hits.intersect(Interval{1e-4, 8.0, true, false}).empty());
  }
}

TEST_CASE("grid_spike_points examples") {
  FlowSpec flow = FlowSpec::planar();
  Grid<double> z2(Lattice<double>::standard(2), {0.0, 0.0});
  // (0,n) enters the window once e^{-t}|n| < 1/4, so |n| <= 37 by t = 5
  auto pts = grid_spike_points(flow, z2, kQuarterSquare, 5.0);
  REQUIRE(pts.size() == 75);
  for (const auto& sp : pts) {
    CHECK(sp.point.point[0] == 0.0);
    double n = std::fabs(sp.point.point[1]);
    CHECK(n <= 37);
    REQUIRE(sp.hits.parts().size() == 1);
    const Interval& iv = sp.hits.parts()[0];
    if (n == 0) {
      CHECK(iv == Interval{0.0, 5.0, false, true});
    } else {
      CHECK(iv.lo == doctest::Approx(std::log(4 * n)).epsilon(1e-14));
      CHECK(iv.hi == 5.0);
    }
  }

  Grid<double> half(Lattice<double>::standard(2), {0.5, 0.5});
  CHECK(grid_spike_points(flow, half, kQuarterSquare, 3.0).empty());
  CHECK_THROWS_AS(grid_spike_points(flow, half, kQuarterSquare, 0.0), InvalidArgument);
  CHECK_THROWS_AS(grid_spike_points(flow, z2, kQuarterSquare, 5.0, SpikeOptions{10.0, 1.0}), EnumerationTooLarge);
}

TEST_CASE("grid_spike_points is complete") {
  std::mt19937_64 rng(17);
  FlowSpec flow = FlowSpec::planar();
  for (int i = 0; i < 100; ++i) {
    Lattice<Rational> x(oracle::random_unimodular<Rational>(rng));
    Grid<Rational> y(x, {make_rational(oracle::uniform_int(rng, 0, 100), 101), make_rational(oracle::uniform_int(rng, 0, 100), 103)});
    BoxRegion region = BoxRegion::ball(2, oracle::uniform(rng, 0.1, 0.6));
    double t_max = oracle::uniform(rng, 0.5, 6.0);
    auto base = grid_spike_points(flow, y, region, t_max);
    auto wide = grid_spike_points(flow, y, region, t_max, SpikeOptions{1e8, 2.0});
    REQUIRE(base.size() == wide.size());
    for (size_t k = 0; k < base.size(); ++k) CHECK(base[k].point.coeffs == wide[k].point.coeffs);
    // every returned point really hits
    for (const auto& sp : base) {
      double t = 0.5 * (sp.hits.parts()[0].lo + std::min(sp.hits.parts()[0].hi, t_max));
      Vec<double> p{sp.point.point[0].get_d(), sp.point.point[1].get_d()};
      CHECK(region.contains(apply_flow(flow, t, p)));
    }
  }
}

TEST_CASE("serialization round trips") {
  Lattice<Rational> x(Matrix<Rational>::from_rows({{Rational(1, 3), Rational(5, 7)}, {0, 3}}));
  Json j = to_json(x);
  CHECK(j["columns"][0][0] == "1/3");
  CHECK(lattice_from_json<Rational>(j).basis() == x.basis());
  Grid<double> y(Lattice<double>::standard(2), {0.25, 0.1});
  auto back = grid_from_json<double>(to_json(y));
  CHECK(back.offset() == y.offset());
  BoxRegion r({Box{{-1, 0}, {1, 0.5}}});
  CHECK(to_json(region_from_json(to_json(r))) == to_json(r));
  IntervalSet s = IntervalSet::from({Interval::open(0, 1), {2, INFINITY, true, false}});
  CHECK(interval_set_from_json(to_json(s)) == s);
  CHECK(to_decimal_string(Rational(1, 8)) == "0.125");
  CHECK(to_decimal_string(Rational(-3, 40)) == "-0.075");
  CHECK(parse_rational("0.618034") == make_rational(618034, 1000000));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("-2/6") == Rational(-1, 3));
}

TEST_CASE("interval sets") {
  auto s = IntervalSet::from({Interval::open(0, 1), Interval::open(1, 2), Interval::open(0.5, 0.7)});
  CHECK(s.parts().size() == 2);
  auto t = IntervalSet::from({Interval::open(0, 1), Interval{1, 2, true, false}});
  CHECK(t.parts().size() == 1);
  auto gaps = IntervalSet::from({Interval::open(1, 2)}).complement_in(0, 3);
  REQUIRE(gaps.parts().size() == 2);
  CHECK(gaps.parts()[0] == Interval::closed(0, 1));
  CHECK(gaps.parts()[1] == Interval::closed(2, 3));
}
