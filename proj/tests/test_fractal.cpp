#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "spikelab/dynamics.hpp"
#include "spikelab/fractal.hpp"

using namespace spikelab;

namespace {

CFLattice tens(int depth) { return build_cf_lattice(oracle::powers_of_ten_quotients(depth + 2), depth); }

// boxes [m d, (m+1) d) meeting the listed open intervals
long brute_boxes(const std::vector<CantorInterval>& ivs, const Rational& d) {
  std::vector<std::pair<BigInt, BigInt>> ranges;
  for (const auto& iv : ivs) ranges.push_back({floor_big(iv.lo / d), ceil_big(iv.hi / d) - 1});
  std::sort(ranges.begin(), ranges.end());
  long total = 0;
  BigInt last = -1;
  bool any = false;
  for (auto& [a, b] : ranges) {
    BigInt lo = (any && a <= last) ? BigInt(last + 1) : a;
    if (b >= lo) total += BigInt(b - lo + 1).get_si();
    if (!any || b > last) last = b;
    any = true;
  }
  return total;
}

Rational brute_mass(const std::vector<CantorInterval>& ivs, const Rational& x, const Rational& r) {
  Rational total(0);
  for (const auto& iv : ivs) {
    Rational a = std::max<Rational>(iv.lo, x - r), b = std::min<Rational>(iv.hi, x + r);
    if (b > a) total += iv.weight * (b - a) / (iv.hi - iv.lo);
  }
  return total;
}

}  // namespace

TEST_CASE("continued fraction lattice") {
  CFLattice cf = tens(3);
  CHECK(cf.q[1] == 10);
  CHECK(cf.q[2] == 1001);
  CHECK(cf.q[3] == 1001010);
  CHECK(cf.alpha == oracle::cf_value(oracle::powers_of_ten_quotients(5)));
  for (int i = 1; i + 2 < static_cast<int>(cf.q.size()); ++i) {
    Rational err = abs(Rational(cf.q[i]) * cf.alpha - Rational(cf.p[i]));
    CHECK(err < Rational(1) / Rational(cf.q[i + 1]));
    if (i >= 2) CHECK(cf.q[i] == cf.quotients[i - 1] * cf.q[i - 1] + cf.q[i - 2]);
  }
  CFLattice g = build_cf_lattice(std::vector<BigInt>(8, 1), 6);
  std::vector<long> fib{1, 1, 2, 3, 5, 8, 13};
  for (int i = 0; i < 7; ++i) CHECK(g.q[i] == fib[i]);
  CHECK_THROWS_AS(build_cf_lattice(oracle::powers_of_ten_quotients(3), 0), InsufficientDepth);
  CHECK_THROWS_AS(build_cf_lattice(oracle::powers_of_ten_quotients(3), 4), InsufficientDepth);
  CHECK(geometric_quotients(10, 3) == oracle::powers_of_ten_quotients(3));
}

TEST_CASE("excursion data") {
  CFLattice cf = tens(5);
  auto data = excursion_data(cf, 5);
  REQUIRE(data.size() == 5);
  Rational alpha = oracle::cf_value(oracle::powers_of_ten_quotients(7));
  CHECK(data[0].t == doctest::Approx(std::log(100.0)).epsilon(1e-14));
  double s2 = -std::log(10 * std::fabs(Rational(10 * alpha - 1).get_d()));
  CHECK(data[0].s == doctest::Approx(s2).epsilon(1e-12));
  CHECK(data[0].s == doctest::Approx(4.6062).epsilon(1e-4));
  for (const auto& d : data) {
    Rational v1 = abs(d.v[0]), v2 = abs(d.v[1]);
    CHECK(v2 / d.exp_t == Rational(1, 10));
    CHECK(d.exp_s * v1 == Rational(1, 10));
    CHECK(d.exp_t * v1 == v2 / d.exp_s);
    CHECK(d.exp_t * v1 <= Rational(1, 10));
    CHECK(d.ell >= 5);
    CHECK(d.ell <= 50);
    CHECK(d.ell == 10);
    CHECK(d.t < d.s);
  }
  auto sum = summarize(data);
  for (std::size_t i = 0; i < data.size(); ++i) CHECK(sum.above_length[i] <= sum.C);
  for (std::size_t i = 1; i < sum.t_over_i.size(); ++i) CHECK(sum.t_over_i[i] > sum.t_over_i[i - 1]);

  CHECK_THROWS_AS(excursion_data(build_cf_lattice(std::vector<BigInt>(12, 1), 10), 1), NoDip);
  CFLattice g = build_cf_lattice(std::vector<BigInt>(12, 1), 10);
  for (int i = 1; i <= 10; ++i) {
    Vec<Rational> v = g.convergent_vector(i);
    CHECK(abs(v[0]) * v[1] >= Rational(1, 3));
  }
}

TEST_CASE("axis spacing matches an intersection brute force") {
  CFLattice cf = tens(2);
  for (const auto& d : excursion_data(cf, 2)) {
    Rational lam = d.exp_t;
    Rational u1 = lam * d.v[0], u2 = d.v[1] / lam;
    std::set<Rational> hits;
    for (long m = -30; m <= 30; ++m)
      for (long n = -30; n <= 30; ++n) {
        Rational w1 = lam * (Rational(m) + Rational(n) * cf.alpha), w2 = Rational(n) / lam;
        hits.insert(w1 - w2 * u1 / u2);
      }
    Rational gap(-1);
    for (auto it = std::next(hits.begin()); it != hits.end(); ++it) {
      Rational g = *it - *std::prev(it);
      if (gap < 0 || g < gap) gap = g;
    }
    CHECK(std::fabs(gap.get_d() - 10.0) < 1e-9);
    CHECK(gap == d.ell);
  }
}

TEST_CASE("excursions agree with the orbit tracker") {
  CFLattice cf = tens(3);
  auto data = excursion_data(cf, 3);
  auto ex = excursions(FlowSpec::planar(1.0), cf.lattice(), 0.1, data.back().s + 1.0);
  REQUIRE(ex.dips.size() >= 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(ex.dips[i].start == doctest::Approx(data[i].t).epsilon(1e-9));
    CHECK(ex.dips[i].end == doctest::Approx(data[i].s).epsilon(1e-9));
  }
}

TEST_CASE("floor_sum against direct sums") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    long n = oracle::uniform_int(rng, 0, 40), m = oracle::uniform_int(rng, 1, 30);
    long a = oracle::uniform_int(rng, -100, 100), b = oracle::uniform_int(rng, -100, 100);
    long direct = 0;
    for (long j = 0; j < n; ++j) {
      long num = a * j + b;
      direct += num >= 0 ? num / m : -((-num + m - 1) / m);
    }
    CHECK(floor_sum(n, m, a, b) == direct);
  }
}

TEST_CASE("bad interval sets") {
  CantorApprox one = bad_interval_sets(tens(1), 1);
  REQUIRE(one.deepest().size() == 10);
  for (std::size_t k = 0; k < 10; ++k) {
    const auto& iv = one.deepest()[k];
    CHECK(iv.hi - iv.lo == make_rational(6, 100));
    CHECK(iv.lo == make_rational(static_cast<long>(10 * k + 2), 100));
    CHECK(iv.weight == Rational(1, 10));
  }
  CHECK(one.levels()[0].spacing == Rational(1, 10));
  CHECK(one.levels()[0].radius == make_rational(2, 100));

  CantorApprox three = bad_interval_sets(tens(3), 3);
  REQUIRE(three.materialized() == 3);
  for (int level = 1; level <= 3; ++level) {
    const auto& ivs = three.intervals(level);
    CHECK(BigInt(static_cast<long>(ivs.size())) == three.levels()[level - 1].count);
    Rational wsum(0);
    for (std::size_t k = 0; k < ivs.size(); ++k) {
      wsum += ivs[k].weight;
      if (k) CHECK(ivs[k].lo >= ivs[k - 1].hi);
    }
    CHECK(wsum == 1);
  }
  // children nest in parents and split the parent weight evenly
  const auto& lv1 = three.intervals(1);
  const auto& lv2 = three.intervals(2);
  std::size_t j = 0;
  for (const auto& par : lv1) {
    long c = 0;
    while (j < lv2.size() && lv2[j].hi <= par.hi) {
      CHECK(lv2[j].lo >= par.lo);
      CHECK(lv2[j].weight * three.child_count(1, par.index) == par.weight);
      ++c;
      ++j;
    }
    double predicted = std::exp(three.excursions()[1].t - three.excursions()[0].t) * three.excursions()[0].ell_value() /
                       three.excursions()[1].ell_value();
    CHECK(c <= 2 * predicted);
    CHECK(c >= predicted / 2);
  }
  CHECK(j == lv2.size());

  // level counts from floor sums match the listed components
  CantorApprox small = bad_interval_sets(tens(3), 3, 1000);
  CHECK(small.materialized() == 2);
  CHECK(small.levels()[2].count == three.levels()[2].count);
  CHECK(small.levels()[2].child_min <= three.levels()[2].child_min);
  CHECK(small.levels()[2].child_max >= three.levels()[2].child_max);
  CHECK(small.child_count_sum(2, 3, 40) == [&] {
    BigInt s = 0;
    for (long k = 3; k <= 40; ++k) s += small.child_count(2, k);
    return s;
  }());
}

TEST_CASE("ball mass and box counts against the listed intervals") {
  std::mt19937_64 rng(8);
  for (int depth : {2, 3}) {
    CantorApprox ca = bad_interval_sets(tens(depth), depth);
    const auto& leaves = ca.deepest();
    int trials = depth == 2 ? 200 : 10;
    for (int trial = 0; trial < trials; ++trial) {
      Rational x = exact_rational(oracle::uniform(rng));
      Rational r = exact_rational(std::exp(oracle::uniform(rng, std::log(1e-7), std::log(0.3))));
      CHECK(ca.ball_mass(x, r) == brute_mass(leaves, x, r));
    }
    CHECK(ca.ball_mass(Rational(1, 2), Rational(1)) == 1);
    for (const auto& lv : ca.levels()) CHECK(ca.box_count(lv.scale) == brute_boxes(leaves, lv.scale));
    for (Rational d : {Rational(1, 37), Rational(1, 3000), Rational(1, 12345)})
      CHECK(ca.box_count(d) == brute_boxes(leaves, d));
  }
}

TEST_CASE("sigma claim on bad intervals") {
  CFLattice cf = tens(3);
  auto data = excursion_data(cf, 3);
  ClaimReport rep = verify_sigma_claim(cf, data[0], 100, 20);
  CHECK(rep.pass);
  CHECK(rep.min_sigma >= 1.0);
  CHECK(rep.samples == 2000);
  ClaimReport ser = verify_sigma_claim_serial(cf, data[0], 100, 20);
  CHECK(ser.pass == rep.pass);
  CHECK(ser.min_sigma == rep.min_sigma);
  CHECK(ser.worst.gamma == rep.worst.gamma);

  // midpoint of a B_1 component
  CHECK(sigma_at(cf, data[0].exp_t, Rational(5, 100)) >= 1);
  // sharpness at gamma = 0: the grid is the lattice, its shortest nonzero vector is 1/10 at t_i
  for (const auto& d : data) {
    CHECK(sigma_at(cf, d.exp_t, Rational(0)) == 0);
    CHECK(lambda1_at(cf, d.exp_t) == Rational(1, 10));
  }

  // exact sigma against a bounded scan
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    Rational g = exact_rational(oracle::uniform(rng));
    Rational lam = data[0].exp_t * make_rational(oracle::uniform_int(rng, 100, 120), 100);
    Matrix<Rational> b = Matrix<Rational>::from_rows({{lam, lam * cf.alpha}, {Rational(0), 1 / lam}});
    Vec<Rational> w{lam * g, Rational(0)};
    CHECK(sigma_at(cf, lam, g) == oracle::brute_sigma_key(b, w, Norm::sup, 400));
  }
}

TEST_CASE("mass distribution") {
  CantorApprox one = bad_interval_sets(tens(1), 1);
  for (int j = 0; j < 50; ++j) {
    Rational x = one.point_near(Rational(2 * j + 1, 100), j);
    CHECK(one.ball_mass(x, Rational(1, 10)) <= Rational(2, 10));
  }
  auto m1 = mass_distribution_check(one, 0.3, {0.1});
  CHECK(m1.max_ratio <= 0.2 / std::pow(0.1, 0.7) + 1e-12);
  CHECK_THROWS_AS(mass_distribution_check(one, 0.3, {1.5}), ScaleOutOfRange);
  CHECK_THROWS_AS(mass_distribution_check(one, 1.3, {0.1}), InvalidArgument);

  CantorApprox four = bad_interval_sets(tens(4), 4);
  double lo = std::log(four.levels().back().spacing.get_d()), hi = std::log(four.levels().front().scale.get_d());
  std::vector<double> rs;
  for (int k = 0; k <= 20; ++k) rs.push_back(std::exp(lo + (hi - lo) * k / 20));
  auto m4 = mass_distribution_check(four, 0.3, rs, 128);
  CHECK(m4.pass);
  CHECK(m4.max_ratio_resolved <= 1.0);
}

TEST_CASE("dimension of the approximations") {
  CHECK(dim_lower_estimate(bad_interval_sets(tens(1), 1)).slope == doctest::Approx(1.0).epsilon(1e-9));
  std::vector<double> slopes;
  for (int depth = 2; depth <= 5; ++depth) slopes.push_back(dim_lower_estimate(bad_interval_sets(tens(depth), depth)).slope);
  CHECK(slopes.back() >= 0.8);
  for (std::size_t i = 1; i < slopes.size(); ++i) CHECK(slopes[i] >= slopes[i - 1] - 0.05);
  for (double s : slopes) CHECK(s <= 1.0);
}

TEST_CASE("bad grid witness") {
  CFLattice cf = tens(3);
  CantorApprox ca = bad_interval_sets(cf, 3);
  double t3 = ca.excursions().back().t;
  BadGridWitness w = witness_bad_grids(cf, ca, 6, 3, t3);
  CHECK(w.pass);
  CHECK(w.late_hits == 0);
  CHECK(w.grids == 18);
  // gamma = 0 is not in B: the origin stays in O forever
  Grid<Rational> y(cf.lattice(), {Rational(0), Rational(0)});
  auto pts = grid_spike_points(FlowSpec::planar(1.0), y, BoxRegion::ball(2, w.radius), t3);
  bool late = false;
  for (const auto& sp : pts) late = late || sp.hits.parts().back().hi > w.t_trivial;
  CHECK(late);
}
