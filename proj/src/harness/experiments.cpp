#include <cmath>
#include <random>
#include <sstream>

#include "spikelab/dimension.hpp"
#include "spikelab/diophantine.hpp"
#include "spikelab/dynamics.hpp"
#include "spikelab/fractal.hpp"
#include "spikelab/harness.hpp"

namespace spikelab {

namespace {

Json num(double x) { return json_number(x); }

Json nums(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

std::string exact(const Rational& x) { return to_decimal_string(x); }

Artifact json_artifact(const std::string& name, const ExperimentConfig& cfg, Json body) {
  Json doc;
  doc["config"] = cfg.echo();
  for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
  doc["content_sha256"] = sha256_hex(doc.dump());
  return {name, doc.dump(2) + "\n"};
}

// a CSV plus NAME.meta.json carrying the config echo and the CSV hash
void csv_artifacts(std::vector<Artifact>& out, const std::string& stem, const ExperimentConfig& cfg,
                   const std::string& csv, Json summary = Json::object()) {
  std::string name = stem + ".csv";
  out.push_back({name, csv});
  Json meta;
  meta["artifact"] = name;
  meta["artifact_sha256"] = sha256_hex(csv);
  for (auto it = summary.begin(); it != summary.end(); ++it) meta[it.key()] = it.value();
  out.push_back(json_artifact(stem + ".meta.json", cfg, meta));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

long as_long(const std::string& s) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) throw ConfigError("not an integer: " + s);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("not an integer: " + s);
  }
}

Json estimate_json(const DimensionEstimate& e) {
  return {{"slope", num(e.slope)},
          {"intercept", num(e.intercept)},
          {"residual_rms", num(e.residual_rms)},
          {"delta_min", num(e.delta_min)},
          {"delta_max", num(e.delta_max)},
          {"caveat", e.caveat}};
}

std::string delta_count_csv(const DimensionEstimate& e) {
  std::string csv = "delta,count\n";
  for (std::size_t i = 0; i < e.deltas.size(); ++i) {
    double c = e.counts[i];
    // counts are integers; print them exactly while a double holds them exactly
    bool whole = c == std::floor(c) && std::fabs(c) < 0x1.0p53;
    csv += fmt12(e.deltas[i]) + "," + (whole ? std::to_string(static_cast<long long>(c)) : fmt12(c)) + "\n";
  }
  return csv;
}

std::vector<Artifact> scan_bad(const ExperimentConfig& cfg) {
  const Json& p = cfg.params;
  BadTestConfig bt;
  bt.v = p.at("v").get<std::vector<double>>();
  bt.eps = p.at("eps").get<double>();
  bt.K = p.at("K").get<long>();
  if (!p.at("weights").is_null()) bt.weights = p.at("weights").get<std::vector<double>>();
  bt.validate();
  int R = p.at("R").get<int>();
  ScanResult scan = bad_set_scan(bt, R);
  std::string csv = "cell,survivor\n";
  csv.reserve(csv.size() + scan.bitmap.size() * 10);
  for (std::size_t i = 0; i < scan.bitmap.size(); ++i) csv += std::to_string(i) + "," + (scan.bitmap[i] ? "1" : "0") + "\n";
  Json summary = {{"survivors", scan.survivors},
                  {"survivor_fraction", num(scan.survivor_fraction)},
                  {"box_counts", scan.box_counts},
                  {"corner_box_counts", scan.corner_box_counts}};
  try {
    summary["dimension"] = estimate_json(scan_dimension(scan));
  } catch (const DegenerateFit&) {
    summary["dimension"] = nullptr;
  }
  std::vector<Artifact> out;
  csv_artifacts(out, "scan", cfg, csv, summary);
  return out;
}

std::vector<Artifact> dim_estimate_kind(const ExperimentConfig& cfg) {
  const Json& p = cfg.params;
  FlowSpec flow(p.at("c").get<std::vector<double>>());
  std::vector<int> R = p.at("R").get<std::vector<int>>();
  std::string metric = p.at("metric").get<std::string>();
  if (static_cast<int>(R.size()) != static_cast<int>(flow.j_plus().size()))
    throw ConfigError("R needs one resolution per expanding exponent");
  MetricChoice m = MetricChoice::euclidean();
  if (metric == "quasi")
    m = MetricChoice::quasi_of(QuasiMetric(flow));
  else if (metric != "euclidean")
    throw ConfigError("metric must be quasi or euclidean");
  long cells = 1;
  for (int r : R) {
    if (r < 0 || r > 24) throw ConfigError("resolutions must lie in 0..24");
    cells <<= r;
    if (cells > (1L << 26)) throw BudgetExceeded("cell set too large");
  }
  auto est = dim_estimate(CellSet::full(R), m, dyadic_scales(p.at("m_lo").get<int>(), p.at("m_hi").get<int>()));
  std::vector<Artifact> out;
  Json summary = estimate_json(est);
  summary["h_a"] = num(flow.h_a());
  csv_artifacts(out, "dim", cfg, delta_count_csv(est), summary);
  return out;
}

Lattice<Rational> lattice_of(const std::string& spec, double t_max) {
  Rational v = parse_lattice_parameter(spec, t_max);
  return Lattice<Rational>(Matrix<Rational>::from_rows({{Rational(1), v}, {Rational(0), Rational(1)}}));
}

std::vector<Artifact> heaviness_kind(const ExperimentConfig& cfg) {
  const Json& p = cfg.params;
  std::vector<long> T = p.at("T").get<std::vector<long>>();
  std::vector<double> eta = p.at("eta").get<std::vector<double>>();
  long T_max = 0;
  for (long t : T) T_max = std::max(T_max, t);
  if (T_max > 1000000) throw BudgetExceeded("T above 10^6");
  auto x = lattice_of(p.at("v").get<std::string>(), static_cast<double>(T_max));
  auto rep = heaviness_profile(FlowSpec::planar(1.0), x, T, eta);
  std::string csv = "T,i,mass\n";
  Json rows = Json::array();
  for (const auto& row : rep.rows) {
    for (std::size_t i = 0; i < row.masses.size(); ++i)
      csv += std::to_string(row.T) + "," + std::to_string(i + 1) + "," + fmt12(row.masses[i]) + "\n";
    rows.push_back({{"T", row.T}, {"min_lambda1", num(row.min_lambda1)}, {"masses", nums(row.masses)}});
  }
  std::vector<Artifact> out;
  csv_artifacts(out, "heaviness", cfg, csv, {{"verdict", rep.verdict()}, {"eta", nums(rep.eta)}, {"rows", rows}});
  return out;
}

std::vector<Artifact> orbit_kind(const ExperimentConfig& cfg) {
  const Json& p = cfg.params;
  double t_max = p.at("t_max").get<double>(), step = p.at("step").get<double>();
  if (!(step > 0) || !(t_max > 0)) throw ConfigError("t_max and step must be positive");
  if (t_max / step > 1e7) throw BudgetExceeded("more than 10^7 samples");
  auto x = lattice_of(p.at("v").get<std::string>(), t_max);
  FlowSpec flow = FlowSpec::planar(1.0);
  long count = static_cast<long>(std::floor(t_max / step + 1e-9)) + 1;
  auto series = lambda1_series(flow, x, TimeGrid{0.0, step, count});
  std::string csv = "t,lambda1\n";
  for (const auto& s : series) csv += fmt12(s.t) + "," + fmt12(s.lambda1) + "\n";
  auto ex = excursions(flow, x, p.at("threshold").get<double>(), t_max);
  Json list = Json::array();
  for (const auto& iv : ex.above.parts()) list.push_back({{"s", num(iv.lo)}, {"t", num(iv.hi)}});
  Json dips = Json::array();
  for (const auto& d : ex.dips) {
    Json g = Json::array();
    for (const auto& c : d.governing) g.push_back(c.get_str());
    dips.push_back({{"start", num(d.start)}, {"end", num(d.end)}, {"open_ended", d.open_ended}, {"governing", g}});
  }
  std::vector<Artifact> out;
  csv_artifacts(out, "series", cfg, csv, {{"samples", count}});
  out.push_back(json_artifact("excursions.json", cfg, {{"excursions", list}, {"dips", dips}}));
  return out;
}

std::vector<Artifact> correspondence_kind(const ExperimentConfig& cfg) {
  const Json& p = cfg.params;
  long instances = p.at("instances").get<long>();
  int n_max = p.at("n_max").get<int>();
  double eps = p.at("eps").get<double>();
  long K = p.at("K").get<long>();
  if (n_max < 1 || n_max > 3) throw ConfigError("n_max must lie in 1..3");
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::string csv = "i,n,v,w,s,bad_proxy,spike_count,consistent\n";
  bool all = true;
  for (long i = 0; i < instances; ++i) {
    int n = 1 + static_cast<int>(i % n_max);
    std::vector<double> v(n), w(n);
    for (int l = 0; l < n; ++l) {
      v[l] = U(rng);
      w[l] = U(rng);
    }
    double s = U(rng);
    auto r = spike_correspondence(v, w, s, eps, K);
    all = all && r.consistent;
    auto join = [](const std::vector<double>& xs) {
      std::string o;
      for (std::size_t k = 0; k < xs.size(); ++k) o += (k ? ";" : "") + fmt12(xs[k]);
      return o;
    };
    csv += std::to_string(i) + "," + std::to_string(n) + "," + join(v) + "," + join(w) + "," + fmt12(s) + "," +
           (r.bad_proxy ? "1" : "0") + "," + std::to_string(r.spike_count) + "," + (r.consistent ? "1" : "0") + "\n";
  }
  std::vector<Artifact> out;
  csv_artifacts(out, "correspondence", cfg, csv, {{"instances", instances}, {"all_consistent", all}});
  return out;
}

std::vector<Artifact> minkowski_kind(const ExperimentConfig& cfg) {
  const Json& p = cfg.params;
  long lines = p.at("lines").get<long>(), planes = p.at("planes").get<long>();
  double bound = p.at("bound").get<double>();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> N(0.0, 1.0);
  std::string csv = "i,d,ell,solutions\n";
  long min_lines = -1, min_planes = -1;
  for (long i = 0; i < lines + planes; ++i) {
    bool line = i < lines;
    int d = line ? 2 : 3;
    std::vector<std::vector<double>> span(line ? 1 : 2, std::vector<double>(d));
    for (auto& vec : span)
      for (auto& x : vec) x = N(rng);
    long count = static_cast<long>(minkowski_solutions(AffineSubspace(span), bound).size());
    long& m = line ? min_lines : min_planes;
    if (m < 0 || count < m) m = count;
    csv += std::to_string(i) + "," + std::to_string(d) + "," + std::to_string(span.size()) + "," + std::to_string(count) + "\n";
  }
  std::vector<Artifact> out;
  csv_artifacts(out, "minkowski", cfg, csv, {{"min_solutions_lines", min_lines}, {"min_solutions_planes", min_planes}});
  return out;
}

std::vector<Artifact> covering_kind(const ExperimentConfig& cfg) {
  const Json& p = cfg.params;
  long T = p.at("T").get<long>();
  auto x = lattice_of(p.at("v").get<std::string>(), static_cast<double>(T) + 5.0);
  std::vector<std::string> off = p.at("offset").get<std::vector<std::string>>();
  if (off.size() != 2) throw ConfigError("offset needs two entries");
  Grid<Rational> y(x, {parse_rational(off[0]), parse_rational(off[1])});
  auto res = covering_count_experiment(FlowSpec::planar(1.0), y, p.at("threshold").get<double>(),
                                       p.at("r").get<double>(), T);
  std::string csv = "T,count\n";
  for (std::size_t t = 0; t < res.counts.size(); ++t) csv += std::to_string(t) + "," + std::to_string(res.counts[t]) + "\n";
  std::vector<Artifact> out;
  csv_artifacts(out, "covering", cfg, csv,
                {{"C", res.C}, {"I", res.I}, {"I_size", res.I_size}, {"bound", res.bound}, {"count", res.count},
                 {"r_y", num(res.r_y)}, {"within_bound", res.count <= res.bound}});
  return out;
}

std::vector<Artifact> fractal_kind(const ExperimentConfig& cfg) {
  const Json& p = cfg.params;
  int depth = p.at("depth").get<int>();
  int claim_depth = p.at("claim_depth").get<int>();
  if (depth < 1 || depth > 5) throw BudgetExceeded("depth must lie in 1..5");
  if (claim_depth < 0 || claim_depth > depth) throw ConfigError("claim_depth must lie in 0..depth");
  CFLattice cf = build_cf_lattice(parse_quotients(p.at("n_seq").get<std::string>(), depth + 2), depth);
  auto data = excursion_data(cf, depth);
  CantorApprox ca(data);
  std::vector<Artifact> out;

  ExcursionSummary sum = summarize(data);
  Json ex = Json::array();
  for (const auto& d : data) {
    Rational v1 = abs(d.v[0]), v2 = abs(d.v[1]);
    ex.push_back({{"i", d.index},
                  {"t", num(d.t)},
                  {"s_next", num(d.s)},
                  {"exp_t", exact(d.exp_t)},
                  {"exp_s_next", exact(d.exp_s)},
                  {"v", {exact(d.v[0]), exact(d.v[1])}},
                  {"ell", exact(d.ell)},
                  {"identity_t", v2 / d.exp_t == Rational(1, 10)},
                  {"identity_s", d.exp_s * v1 == Rational(1, 10)},
                  {"ell_in_bracket", d.ell >= 5 && d.ell <= 50}});
  }
  out.push_back(json_artifact("excursions.json", cfg,
                              {{"excursions", ex}, {"C", num(sum.C)}, {"above_length", nums(sum.above_length)},
                               {"t_over_i", nums(sum.t_over_i)}}));

  Json levels = Json::array();
  for (std::size_t i = 0; i < ca.levels().size(); ++i) {
    const auto& lv = ca.levels()[i];
    levels.push_back({{"level", i + 1},
                      {"spacing", exact(lv.spacing)},
                      {"radius", exact(lv.radius)},
                      {"count", lv.count.get_str()},
                      {"child_min", lv.child_min.get_str()},
                      {"child_max", lv.child_max.get_str()},
                      {"child_range_exact", lv.child_range_exact}});
  }
  long max_iv = p.at("max_intervals").get<long>();
  int listed = 0;
  for (int l = 1; l <= ca.materialized(); ++l)
    if (static_cast<long>(ca.intervals(l).size()) <= max_iv) listed = l;
  Json ivs = Json::array();
  if (listed > 0)
    for (const auto& iv : ca.intervals(listed)) ivs.push_back({exact(iv.lo), exact(iv.hi), exact(iv.weight)});
  out.push_back(json_artifact("intervals.json", cfg, {{"levels", levels}, {"listed_level", listed}, {"intervals", ivs}}));

  Json claims = Json::array();
  bool all = true;
  for (int i = 1; i <= claim_depth; ++i) {
    auto rep = verify_sigma_claim(cf, data[i - 1], p.at("gamma_samples").get<int>(), p.at("t_samples").get<int>(), cfg.seed);
    all = all && rep.pass;
    claims.push_back({{"i", i},
                      {"pass", rep.pass},
                      {"min_sigma", num(rep.min_sigma)},
                      {"samples", rep.samples},
                      {"worst_gamma", exact(rep.worst.gamma)},
                      {"worst_t", num(rep.worst.t)}});
  }
  Json sharp = Json::array();
  for (const auto& d : data) sharp.push_back(exact(lambda1_at(cf, d.exp_t)));
  double lo = std::log(ca.levels().back().spacing.get_d()), hi = std::log(ca.levels().front().scale.get_d());
  int nr = p.at("radii").get<int>();
  std::vector<double> rs;
  for (int k = 0; k < nr; ++k) rs.push_back(nr == 1 ? std::exp(hi) : std::exp(lo + (hi - lo) * k / (nr - 1)));
  Json mass = nullptr;
  if (depth >= 2 && lo < hi) {
    auto m = mass_distribution_check(ca, p.at("eps").get<double>(), rs);
    mass = {{"eps", num(m.eps)},   {"burn_in", num(m.burn_in)}, {"r", nums(m.r_values)},
            {"ratio", nums(m.ratio_per_r)}, {"max_ratio_resolved", num(m.max_ratio_resolved)}, {"pass", m.pass}};
  }
  out.push_back(json_artifact("claim_report.json", cfg,
                              {{"claims", claims}, {"all_pass", all}, {"lambda1_at_t_i", sharp}, {"mass", mass}}));

  auto est = dim_lower_estimate(ca);
  csv_artifacts(out, "dim", cfg, delta_count_csv(est), estimate_json(est));
  return out;
}

}  // namespace

AcceptanceOptions acceptance_options(const ExperimentConfig& cfg) {
  AcceptanceOptions opts;
  opts.seed = cfg.seed;
  opts.only = cfg.params.at("criteria").get<std::vector<int>>();
  opts.determinism_threads = cfg.params.at("determinism_threads").get<int>();
  return opts;
}

Artifact acceptance_artifact(const ExperimentConfig& cfg, const std::vector<CriterionResult>& results) {
  return json_artifact("acceptance.json", cfg, acceptance_json(results));
}

std::vector<BigInt> parse_quotients(const std::string& spec, int count) {
  auto parts = split(spec, ':');
  if (parts.empty()) throw ConfigError("empty quotient spec");
  if (parts[0] == "geometric" && parts.size() == 2) return geometric_quotients(as_long(parts[1]), count);
  if (parts[0] == "ones" && parts.size() == 1) return std::vector<BigInt>(count, 1);
  if (parts[0] == "cf" && parts.size() == 2) {
    std::vector<BigInt> out;
    for (const auto& a : split(parts[1], ',')) out.push_back(BigInt(as_long(a)));
    return out;
  }
  throw ConfigError("quotient spec must be geometric:B, ones or cf:a1,a2,...");
}

Rational parse_lattice_parameter(const std::string& spec, double t_max) {
  auto parts = split(spec, ':');
  auto from_quotients = [](const std::vector<BigInt>& a) {
    Rational x(0);
    for (auto it = a.rbegin(); it != a.rend(); ++it) {
      x = Rational(1) / (Rational(*it) + x);
      x.canonicalize();
    }
    return x;
  };
  if (spec == "golden") {
    // F_D / F_{D+1} with q_D well past e^{2 t_max}
    long D = static_cast<long>(std::ceil(2.0 * t_max / std::log((1 + std::sqrt(5.0)) / 2))) + 40;
    BigInt a, b;
    mpz_fib_ui(a.get_mpz_t(), D);
    mpz_fib_ui(b.get_mpz_t(), D + 1);
    return Rational(a, b);
  }
  if (parts.size() == 2 && parts[0] == "ones") return from_quotients(std::vector<BigInt>(as_long(parts[1]), 1));
  if (parts.size() == 3 && parts[0] == "geometric")
    return from_quotients(geometric_quotients(as_long(parts[1]), static_cast<int>(as_long(parts[2]))));
  if (parts.size() == 2 && parts[0] == "cf") return from_quotients(parse_quotients(spec, 0));
  if (parts.size() == 2 && parts[0] == "rational") {
    try {
      return parse_rational(parts[1]);
    } catch (const std::exception&) {
      throw ConfigError("bad rational " + parts[1]);
    }
  }
  throw ConfigError("lattice spec must be golden, ones:N, geometric:B:N, cf:a1,... or rational:p/q");
}

std::vector<Artifact> run_experiment(const ExperimentConfig& cfg) {
  try {
    if (cfg.kind == "scan-bad") return scan_bad(cfg);
    if (cfg.kind == "dim-estimate") return dim_estimate_kind(cfg);
    if (cfg.kind == "heaviness") return heaviness_kind(cfg);
    if (cfg.kind == "orbit") return orbit_kind(cfg);
    if (cfg.kind == "correspondence") return correspondence_kind(cfg);
    if (cfg.kind == "minkowski") return minkowski_kind(cfg);
    if (cfg.kind == "covering") return covering_kind(cfg);
    if (cfg.kind == "fractal") return fractal_kind(cfg);
    if (cfg.kind == "accept") return {acceptance_artifact(cfg, run_acceptance(acceptance_options(cfg)))};
  } catch (const Json::type_error& e) {
    throw ConfigError(std::string("parameter type: ") + e.what());
  }
  throw ConfigError("unknown experiment kind '" + cfg.kind + "'");
}

}  // namespace spikelab
