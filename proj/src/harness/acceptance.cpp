#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>

#include "spikelab/dimension.hpp"
#include "spikelab/diophantine.hpp"
#include "spikelab/dynamics.hpp"
#include "spikelab/fractal.hpp"
#include "spikelab/harness.hpp"

namespace spikelab {

namespace {

using Clock = std::chrono::steady_clock;

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double a, double b) { return a + (b - a) * uniform(rng); }
long uniform_int(std::mt19937_64& rng, long a, long b) {
  return a + static_cast<long>(rng() % static_cast<std::uint64_t>(b - a + 1));
}

template <class T>
T abs_of(const T& x) {
  return x < T(0) ? T(-x) : x;
}

template <class T>
T key_of(const T& a, const T& b, Norm norm) {
  if (norm == Norm::sup) return std::max<T>(abs_of<T>(a), abs_of<T>(b));
  return T(a * a + b * b);
}

double to_d(const double& x) { return x; }
double to_d(const Rational& x) { return x.get_d(); }

// Exhaustive minimum over the coefficient box that provably holds every vector of key <= bound;
// w = nullptr skips the origin (lambda1), otherwise grid points b z + w.
template <class T>
T enumerate_min(const Matrix<T>& b, const Vec<T>* w, Norm norm, double bound) {
  Matrix<T> inv = inverse(b);
  double c0 = 0, c1 = 0;
  if (w) {
    c0 = -to_d(T(inv.at(0, 0) * (*w)[0] + inv.at(0, 1) * (*w)[1]));
    c1 = -to_d(T(inv.at(1, 0) * (*w)[0] + inv.at(1, 1) * (*w)[1]));
  }
  double r0 = (std::fabs(to_d(inv.at(0, 0))) + std::fabs(to_d(inv.at(0, 1)))) * bound * 1.001 + 1;
  double r1 = (std::fabs(to_d(inv.at(1, 0))) + std::fabs(to_d(inv.at(1, 1)))) * bound * 1.001 + 1;
  bool first = true;
  T best(0);
  for (long i = static_cast<long>(std::floor(c0 - r0)); i <= static_cast<long>(std::ceil(c0 + r0)); ++i)
    for (long j = static_cast<long>(std::floor(c1 - r1)); j <= static_cast<long>(std::ceil(c1 + r1)); ++j) {
      if (!w && i == 0 && j == 0) continue;
      T a = b.at(0, 0) * T(i) + b.at(0, 1) * T(j), c = b.at(1, 0) * T(i) + b.at(1, 1) * T(j);
      if (w) {
        a += (*w)[0];
        c += (*w)[1];
      }
      T k = key_of<T>(a, c, norm);
      if (first || k < best) {
        best = k;
        first = false;
      }
    }
  return best;
}

template <class T>
Matrix<T> random_basis(std::mt19937_64& rng) {
  T s, a;
  if constexpr (std::is_same_v<T, double>) {
    s = uniform(rng, 0.4, 2.5);
    a = uniform(rng);
  } else {
    s = make_rational(uniform_int(rng, 40, 250), 100);
    a = make_rational(uniform_int(rng, 0, 999), uniform_int(rng, 1000, 1999));
  }
  Matrix<T> m = Matrix<T>::from_rows({{s, T(s * a)}, {T(0), T(1 / s)}});
  for (int k = 0; k < 2; ++k) {
    long e = uniform_int(rng, -2, 2);
    int from = static_cast<int>(uniform_int(rng, 0, 1)), to = 1 - from;
    for (int r = 0; r < 2; ++r) m.at(r, to) += T(e) * m.at(r, from);
  }
  return m;
}

template <class T>
bool agrees(const T& got, const T& want) {
  if constexpr (std::is_same_v<T, double>) {
    return std::fabs(got - want) <= 1e-10 * std::max(std::fabs(want), 1e-300);
  } else {
    return got == want;
  }
}

template <class T>
long oracle_mismatches(std::mt19937_64& rng, int count) {
  long bad = 0;
  for (int k = 0; k < count; ++k) {
    Matrix<T> b = random_basis<T>(rng);
    Lattice<T> x(b);
    for (Norm norm : {Norm::sup, Norm::euclidean}) {
      double ub = std::min(norm_value(b.cols[0], norm), norm_value(b.cols[1], norm));
      if (!agrees<T>(lambda1_vector(x, norm).key, enumerate_min<T>(b, nullptr, norm, ub))) ++bad;
      Vec<T> w;
      if constexpr (std::is_same_v<T, double>) {
        w = {uniform(rng, -2, 2), uniform(rng, -2, 2)};
      } else {
        w = {make_rational(uniform_int(rng, -2000, 2000), 1000), make_rational(uniform_int(rng, -2000, 2000), 1000)};
      }
      Grid<T> y(x, w);
      // any grid point bounds the closest one; the origin coefficient gives |w|
      double gb = norm_value(w, norm);
      if (!agrees<T>(closest_point(y, norm).key, enumerate_min<T>(b, &w, norm, gb))) ++bad;
    }
  }
  return bad;
}

CriterionResult oracle_equivalence(const AcceptanceOptions& o) {
  std::mt19937_64 rng(o.seed * 1000 + 1);
  long exact_bad = oracle_mismatches<Rational>(rng, 200);
  long float_bad = oracle_mismatches<double>(rng, 200);
  CriterionResult r{1, "lambda1 and sigma match exhaustive enumeration", exact_bad == 0 && float_bad == 0, 10};
  r.metrics = {{"rational_instances", 200}, {"float_instances", 200}, {"rational_mismatches", exact_bad},
               {"float_mismatches", float_bad}};
  return r;
}

CriterionResult quasi_laws(const AcceptanceOptions& o) {
  std::mt19937_64 rng(o.seed * 1000 + 2);
  FlowSpec flow({1.0, 0.5, -1.5});
  QuasiMetric q(flow);
  double worst_scaling = 0.0, worst_ratio = 0.0;
  long violations = 0;
  double C = q.constant();
  for (int k = 0; k < 10000; ++k) {
    std::vector<double> u{uniform(rng, -5, 5), uniform(rng, -5, 5)};
    std::vector<double> v{uniform(rng, -5, 5), uniform(rng, -5, 5)};
    std::vector<double> w{uniform(rng, -5, 5), uniform(rng, -5, 5)};
    double t = uniform(rng, -50, 50);
    auto l = log_coords(std::vector<double>{u[0] - v[0], u[1] - v[1]});
    double before = q.log_norm(l), after = q.log_norm(q.flow_log(l, t));
    double rel = std::fabs(after - (t + before)) / std::max(1.0, std::fabs(t) + std::fabs(before));
    worst_scaling = std::max(worst_scaling, rel);
    double lhs = q.dist(u, w), rhs = q.dist(u, v) + q.dist(v, w);
    if (lhs > C * rhs * (1 + 1e-12)) ++violations;
    if (rhs > 0) worst_ratio = std::max(worst_ratio, lhs / rhs);
  }
  // collinear triple on the slow axis attains the constant
  double attained = q.dist({0, 0}, {0, 0.2}) / (q.dist({0, 0}, {0, 0.1}) + q.dist({0, 0.1}, {0, 0.2}));
  bool pass = worst_scaling <= 1e-12 && violations == 0 && std::fabs(attained - C) <= 1e-12 * C;
  CriterionResult r{2, "quasi-metric scaling and quasi-triangle constant", pass, 5};
  r.metrics = {{"triples", 10000},
               {"max_scaling_error", json_number(worst_scaling)},
               {"constant", json_number(C)},
               {"constant_attained", json_number(attained)},
               {"max_sampled_ratio", json_number(worst_ratio)},
               {"triangle_violations", violations}};
  return r;
}

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

CriterionResult relating_dimensions(const AcceptanceOptions&) {
  FlowSpec flow({1.0, 0.5, -1.5});
  QuasiMetric q(flow);
  MetricChoice qa = MetricChoice::quasi_of(q);
  double box = dim_estimate(CellSet::full({9, 5}), qa, dyadic_scales(3, 8)).slope;
  bool pass = std::fabs(box - flow.h_a()) <= 0.05;

  auto scales = dyadic_scales(4, 10);
  std::vector<std::pair<std::string, PointSet>> battery(4);
  battery[0].first = "segment_unstable";
  battery[1].first = "segment_slow";
  battery[2].first = "cantor_times_segment";
  battery[3].first = "segment_times_cantor";
  for (int i = 0; i < 2048; ++i) {
    battery[0].second.push_back({(i + 0.5) / 2048, 0.0});
    battery[1].second.push_back({0.0, (i + 0.5) / 2048});
  }
  for (double a : cantor_points(7))
    for (int i = 0; i < 256; ++i) {
      battery[2].second.push_back({a, (i + 0.5) / 256});
      battery[3].second.push_back({(i + 0.5) / 256, a});
    }
  Json rows = Json::array();
  for (const auto& [name, pts] : battery) {
    double da = dim_estimate(pts, qa, scales).slope;
    double dm = dim_estimate(pts, MetricChoice::euclidean(), scales).slope;
    double margin = da - (dm + q.h_a() - 2.0);
    pass = pass && margin >= -0.05;
    rows.push_back({{"set", name}, {"dim_a", json_number(da)}, {"dim_M", json_number(dm)}, {"margin", json_number(margin)}});
  }
  CriterionResult r{3, "full box returns h_a and the relating-dimensions inequality", pass, 60};
  r.metrics = {{"h_a", json_number(flow.h_a())}, {"full_box_slope", json_number(box)}, {"battery", rows}};
  return r;
}

CriterionResult excursion_identities(const AcceptanceOptions&) {
  CFLattice cf = build_cf_lattice(geometric_quotients(10, 7), 5);
  auto data = excursion_data(cf, 5);
  bool pass = data.size() == 5;
  Json ells = Json::array();
  for (const auto& d : data) {
    Rational v1 = abs(d.v[0]), v2 = abs(d.v[1]);
    pass = pass && v2 / d.exp_t == Rational(1, 10) && d.exp_s * v1 == Rational(1, 10) && d.exp_t * v1 == v2 / d.exp_s;
    pass = pass && d.ell >= 5 && d.ell <= 50 && d.t < d.s;
    ells.push_back(to_decimal_string(d.ell));
  }
  CriterionResult r{4, "excursion identities and axis spacing bracket", pass, 30};
  r.metrics = {{"depth", 5}, {"ell", ells}};
  return r;
}

CriterionResult sigma_claim(const AcceptanceOptions&) {
  CFLattice cf = build_cf_lattice(geometric_quotients(10, 6), 4);
  auto data = excursion_data(cf, 4);
  bool pass = true;
  Json rows = Json::array();
  for (const auto& d : data) {
    ClaimReport rep = verify_sigma_claim(cf, d, 100, 20);
    Rational sharp = lambda1_at(cf, d.exp_t);
    bool ok = rep.pass && rep.samples == 2000 && sharp == Rational(1, 10);
    pass = pass && ok;
    rows.push_back({{"i", d.index},
                    {"samples", rep.samples},
                    {"min_sigma", json_number(rep.min_sigma)},
                    {"gamma_zero_value", to_decimal_string(sharp)},
                    {"pass", ok}});
  }
  CriterionResult r{5, "claim holds on stratified samples and is sharp at gamma = 0", pass, 120};
  r.metrics = {{"excursions", rows}};
  return r;
}

CriterionResult mass_distribution(const AcceptanceOptions&) {
  CantorApprox four = bad_interval_sets(build_cf_lattice(geometric_quotients(10, 6), 4), 4);
  double lo = std::log(four.levels().back().spacing.get_d()), hi = std::log(four.levels().front().scale.get_d());
  std::vector<double> rs;
  for (int k = 0; k <= 20; ++k) rs.push_back(std::exp(lo + (hi - lo) * k / 20));
  MassCheck m = mass_distribution_check(four, 0.3, rs);
  bool pass = m.pass && m.max_ratio_resolved <= 1.0;
  std::vector<double> slopes;
  for (int depth = 1; depth <= 5; ++depth)
    slopes.push_back(dim_lower_estimate(bad_interval_sets(build_cf_lattice(geometric_quotients(10, depth + 2), depth), depth)).slope);
  pass = pass && slopes.back() >= 0.8;
  // depth 1 is a single scale window of evenly spaced intervals, so monotonicity starts at depth 2
  for (std::size_t i = 2; i < slopes.size(); ++i) pass = pass && slopes[i] >= slopes[i - 1] - 0.05;
  Json sl = Json::array();
  for (double s : slopes) sl.push_back(json_number(s));
  CriterionResult r{6, "mass distribution bound and dimension slopes", pass, 120};
  r.metrics = {{"max_ratio_resolved", json_number(m.max_ratio_resolved)}, {"burn_in", json_number(m.burn_in)},
               {"slopes_by_depth", sl}};
  return r;
}

CriterionResult scan_contrast(const AcceptanceOptions&) {
  auto scan = [](double v) {
    BadTestConfig cfg;
    cfg.v = {v};
    cfg.eps = 0.05;
    cfg.K = 10000;
    return bad_set_scan(cfg, 14);
  };
  ScanResult heavy = scan((std::sqrt(5.0) - 1) / 2);
  ScanResult rational = scan(0.0);
  double hs = scan_dimension(heavy).slope, rs = scan_dimension(rational).slope;
  bool pass = hs <= 0.95 && rational.survivor_fraction >= 0.75 && std::fabs(rs - 1.0) <= 0.03;
  CriterionResult r{7, "heavy and rational survivor sets differ", pass, 300};
  r.metrics = {{"golden_fraction", json_number(heavy.survivor_fraction)}, {"golden_slope", json_number(hs)},
               {"rational_fraction", json_number(rational.survivor_fraction)}, {"rational_slope", json_number(rs)}};
  return r;
}

CriterionResult correspondence(const AcceptanceOptions& o) {
  std::mt19937_64 rng(o.seed * 1000 + 8);
  long inconsistent = 0;
  for (int i = 0; i < 1000; ++i) {
    int n = 1 + i % 2;
    std::vector<double> v(n), w(n);
    for (int l = 0; l < n; ++l) {
      v[l] = uniform(rng);
      w[l] = uniform(rng);
    }
    double s = uniform(rng);
    double eps = uniform(rng, 0.02, 0.3);
    if (!spike_correspondence(v, w, s, eps, 1000).consistent) ++inconsistent;
  }
  CriterionResult r{8, "spike correspondence is consistent", inconsistent == 0, 60};
  r.metrics = {{"instances", 1000}, {"inconsistent", inconsistent}};
  return r;
}

CriterionResult covering(const AcceptanceOptions&) {
  FlowSpec flow = FlowSpec::planar(1.0);
  Rational golden = parse_lattice_parameter("golden", 25.0);
  auto unipotent = [](const Rational& v) {
    return Lattice<Rational>(Matrix<Rational>::from_rows({{Rational(1), v}, {Rational(0), Rational(1)}}));
  };
  CoveringResult g =
      covering_count_experiment(flow, Grid<Rational>(unipotent(golden), {Rational(0), Rational(0)}), 0.3, 0.1, 20);
  Rational tens = parse_lattice_parameter("geometric:10:6", 0.0);
  CoveringResult c =
      covering_count_experiment(flow, Grid<Rational>(unipotent(tens), {Rational(1, 3), Rational(0)}), 0.1, 0.04, 20);
  auto prefix_ok = [](const CoveringResult& res) {
    long dips = 0;
    for (std::size_t t = 0; t < res.counts.size(); ++t) {
      if (t > 0 && std::find(res.I.begin(), res.I.end(), static_cast<long>(t)) != res.I.end()) ++dips;
      long bound = res.C;
      for (long k = 0; k < dips; ++k) bound *= 3;
      if (res.counts[t] > bound) return false;
    }
    return true;
  };
  bool pass = prefix_ok(g) && prefix_ok(c) && g.I_size == 0 && c.I_size > 0;
  auto summary = [](const CoveringResult& res) {
    return Json{{"C", res.C}, {"I", res.I}, {"count", res.count}, {"bound", res.bound}};
  };
  CriterionResult r{9, "covering counts stay below C 3^|I|", pass, 120};
  r.metrics = {{"golden", summary(g)}, {"one_dip_cf", summary(c)}};
  return r;
}

CriterionResult minkowski(const AcceptanceOptions& o) {
  std::mt19937_64 rng(o.seed * 1000 + 10);
  std::normal_distribution<double> N(0.0, 1.0);
  long fewest[2] = {-1, -1};
  for (int i = 0; i < 200; ++i) {
    bool line = i < 100;
    int d = line ? 2 : 3;
    std::vector<std::vector<double>> span(line ? 1 : 2, std::vector<double>(d));
    for (auto& vec : span)
      for (auto& x : vec) x = N(rng);
    long count = static_cast<long>(minkowski_solutions(AffineSubspace(span), 1000.0).size());
    long& f = fewest[line ? 0 : 1];
    if (f < 0 || count < f) f = count;
  }
  CriterionResult r{10, "Minkowski solutions for random lines and planes", fewest[0] >= 5 && fewest[1] >= 5, 30};
  r.metrics = {{"fewest_line_solutions", fewest[0]}, {"fewest_plane_solutions", fewest[1]}};
  return r;
}

// small instances of every experiment kind, rerun at 1 and N threads
CriterionResult determinism(const AcceptanceOptions& o) {
  std::vector<std::pair<std::string, Json>> runs{
      {"scan-bad", {{"R", 10}, {"K", 2000}}},
      {"dim-estimate", {{"R", Json::array({7, 4})}}},
      {"heaviness", {{"T", Json::array({200, 1000})}}},
      {"fractal", {{"depth", 3}, {"claim_depth", 2}, {"gamma_samples", 20}, {"t_samples", 5}}},
      {"orbit", {{"t_max", 10.0}}},
      {"correspondence", {{"instances", 100}}},
      {"minkowski", {{"lines", 10}, {"planes", 10}}},
      {"covering", {{"T", 12}}}};
  int saved = omp_get_max_threads();
  long compared = 0, differing = 0;
  Json hashes = Json::array();
  for (const auto& [kind, over] : runs) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.seed = o.seed;
    cfg.params = default_params(kind);
    for (auto it = over.begin(); it != over.end(); ++it) cfg.params[it.key()] = it.value();
    omp_set_num_threads(1);
    auto one = run_experiment(cfg);
    omp_set_num_threads(o.determinism_threads);
    auto many = run_experiment(cfg);
    bool same = one.size() == many.size();
    for (std::size_t k = 0; same && k < one.size(); ++k) same = one[k].name == many[k].name && one[k].content == many[k].content;
    ++compared;
    if (!same) ++differing;
    std::string joined;
    for (const auto& a : one) joined += sha256_hex(a.content);
    hashes.push_back({{"kind", kind}, {"sha256", sha256_hex(joined)}, {"identical", same}});
  }
  omp_set_num_threads(saved);
  CriterionResult r{11, "artifacts identical across thread counts", differing == 0, 0};
  r.metrics = {{"threads", Json::array({1, o.determinism_threads})}, {"experiments", hashes}, {"differing", differing}};
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  std::vector<std::function<CriterionResult(const AcceptanceOptions&)>> all{
      oracle_equivalence, quasi_laws, relating_dimensions, excursion_identities, sigma_claim,   mass_distribution,
      scan_contrast,      correspondence, covering,        minkowski,            determinism};
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    int id = static_cast<int>(i) + 1;
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) continue;
    auto start = Clock::now();
    CriterionResult r;
    try {
      r = all[i](opts);
    } catch (const std::exception& e) {
      r.id = id;
      r.name = "criterion raised";
      r.pass = false;
      r.metrics = {{"error", e.what()}};
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (r.budget_seconds > 0 && r.seconds > r.budget_seconds) r.pass = false;
    out.push_back(r);
  }
  return out;
}

Json acceptance_json(const std::vector<CriterionResult>& results) {
  Json rows = Json::array();
  bool all = true;
  for (const auto& r : results) {
    rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"metrics", r.metrics}});
    all = all && r.pass;
  }
  return {{"criteria", rows}, {"all_pass", all}};
}

}  // namespace spikelab
