#include <algorithm>
#include <cmath>
#include <map>

#include "spikelab/dynamics.hpp"

namespace spikelab {

namespace {

constexpr long kChunks = 64;

}  // namespace

template <class T>
std::vector<SeriesPoint> lambda1_series(const FlowSpec& flow, const Lattice<T>& x, const TimeGrid& grid) {
  if (grid.count < 1 || !(grid.step > 0.0 || grid.count == 1)) throw InvalidArgument("time grid must be increasing");
  if (flow.dim() != x.dim()) throw InvalidArgument("flow and lattice dimensions differ");
  std::vector<SeriesPoint> out;
  out.reserve(grid.count);
  if (x.dim() == 2) {
    OrbitTracker tr(flow, x);
    for (long k = 0; k < grid.count; ++k) {
      double t = grid.at(k);
      out.push_back({t, tr.shortest(t).norm});
    }
    return out;
  }
  for (long k = 0; k < grid.count; ++k) {
    double t = grid.at(k);
    out.push_back({t, lambda1(apply_flow(flow, t, x))});
  }
  return out;
}

template <class T>
ExcursionList excursions(const FlowSpec& flow, const Lattice<T>& x, double threshold, double t_max) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw InvalidArgument("threshold must lie in (0,1)");
  if (!(t_max > 0.0)) throw InvalidArgument("t_max must be positive");
  if (x.dim() != 2 || flow.dim() != 2) throw DimensionUnsupported("excursions need d = 2");
  OrbitTracker tr(flow, x);
  double c = std::fabs(flow.c(0));
  if (c == 0.0) throw InvalidArgument("flow is trivial");
  // between samples the norm of any vector changes by at most a factor e^{c h/2}
  double h = 0.5 / c;
  double radius = threshold * std::exp(c * h / 2) * (1 + 1e-9);
  long n = static_cast<long>(std::ceil(t_max / h));
  std::map<Coeffs, int> seen;
  std::vector<Coeffs> cand;
  for (long k = 0; k <= n; ++k) {
    double t = std::min(t_max, static_cast<double>(k) * h);
    for (auto& z : tr.short_vectors(t, radius))
      if (seen.emplace(z, 0).second) cand.push_back(z);
  }
  double log_th = std::log(threshold);
  struct Window {
    Interval iv;
    std::size_t idx;
    double l1, l2;
  };
  std::vector<Window> windows;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    auto [l1, l2] = tr.log_coords(cand[i]);
    double lo = -INFINITY, hi = INFINITY;
    double ls[2] = {l1, l2};
    for (int r = 0; r < 2; ++r) {
      double e = flow.c(r);
      if (ls[r] == -INFINITY) continue;
      double b = (log_th - ls[r]) / e;
      if (e > 0) hi = std::min(hi, b);
      else lo = std::max(lo, b);
    }
    if (lo < hi && hi > 0.0 && lo < t_max) windows.push_back({Interval::open(lo, hi), i, l1, l2});
  }
  std::vector<Interval> parts;
  for (auto& w : windows) parts.push_back(w.iv);
  IntervalSet below = IntervalSet::from(parts).intersect(Interval::closed(0.0, t_max));
  ExcursionList out;
  out.threshold = threshold;
  out.t_max = t_max;
  out.above = below.complement_in(0.0, t_max);
  for (const auto& p : below.parts()) {
    const Window* gov = nullptr;
    for (auto& w : windows) {
      if (w.iv.hi <= p.lo || w.iv.lo >= p.hi) continue;
      if (!gov || w.iv.lo < gov->iv.lo) gov = &w;
    }
    Dip d;
    d.start = p.lo;
    d.end = p.hi;
    d.open_ended = p.hi >= t_max;
    d.governing = cand[gov->idx];
    d.log_v1 = gov->l1;
    d.log_v2 = gov->l2;
    out.dips.push_back(d);
  }
  return out;
}

PsiFamily::PsiFamily(int i_max) : i_max_(i_max) {
  if (i_max < 1) throw InvalidArgument("psi family needs at least one function");
}

double PsiFamily::operator()(int i, double lambda1) const {
  if (i < 1 || i > i_max_) throw InvalidArgument("psi index out of range");
  double hi = std::ldexp(1.0, -i), lo = std::ldexp(1.0, -i - 1);
  if (lambda1 >= hi) return 1.0;
  if (lambda1 <= lo) return 0.0;
  return std::clamp((lambda1 - lo) / (hi - lo), 0.0, 1.0);
}

template <class T>
std::vector<double> orbit_lambda1_serial(const FlowSpec& flow, const Lattice<T>& x, long T_count) {
  if (T_count < 1) throw InvalidArgument("T must be at least 1");
  std::vector<SeriesPoint> s = lambda1_series(flow, x, TimeGrid{0.0, 1.0, T_count});
  std::vector<double> out;
  out.reserve(s.size());
  for (auto& p : s) out.push_back(p.lambda1);
  return out;
}

template <class T>
std::vector<double> orbit_lambda1(const FlowSpec& flow, const Lattice<T>& x, long T_count) {
  if (T_count < 1) throw InvalidArgument("T must be at least 1");
  if (x.dim() != 2) return orbit_lambda1_serial(flow, x, T_count);
  long chunks = std::min(T_count, kChunks);
  long per = (T_count + chunks - 1) / chunks;
  chunks = (T_count + per - 1) / per;
  // a sequential pass records a reduced basis at each chunk start; the chunks then run independently
  std::vector<OrbitTracker> starts;
  OrbitTracker tr(flow, x);
  for (long ch = 0; ch < chunks; ++ch) {
    tr.seek(static_cast<double>(ch * per));
    starts.push_back(tr);
  }
  std::vector<double> out(T_count);
#pragma omp parallel for schedule(dynamic, 1)
  for (long ch = 0; ch < chunks; ++ch) {
    OrbitTracker local = starts[ch];
    long end = std::min(T_count, (ch + 1) * per);
    for (long k = ch * per; k < end; ++k) out[k] = local.shortest(static_cast<double>(k)).norm;
  }
  return out;
}

EmpiricalMeasureReport measure_from_values(const std::vector<double>& lambda1_values, long T, const PsiFamily& psi) {
  if (T < 1) throw InvalidArgument("T must be at least 1");
  if (static_cast<long>(lambda1_values.size()) < T) throw InvalidArgument("not enough orbit samples");
  EmpiricalMeasureReport rep;
  rep.T = T;
  rep.exact_masses.assign(psi.size(), Rational(0));
  rep.min_lambda1 = lambda1_values[0];
  for (long k = 0; k < T; ++k) {
    double l = lambda1_values[k];
    rep.min_lambda1 = std::min(rep.min_lambda1, l);
    for (int i = 1; i <= psi.size(); ++i) {
      double v = psi(i, l);
      if (v != 0.0) rep.exact_masses[i - 1] += exact_rational(v);
    }
  }
  for (auto& m : rep.exact_masses) {
    m /= Rational(T);
    m.canonicalize();
    rep.masses.push_back(to_double(m));
  }
  return rep;
}

template <class T>
EmpiricalMeasureReport empirical_measure(const FlowSpec& flow, const Lattice<T>& x, long T_count,
                                         const PsiFamily& psi) {
  return measure_from_values(orbit_lambda1(flow, x, T_count), T_count, psi);
}

template <class T>
HeavinessReport heaviness_profile(const FlowSpec& flow, const Lattice<T>& x, const std::vector<long>& T_list,
                                  const std::vector<double>& eta) {
  if (eta.empty()) throw InvalidArgument("eta must be nonempty");
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (eta[i] < 0.0) throw InvalidArgument("eta must be nonnegative");
    if (i > 0 && eta[i] > eta[i - 1]) throw InvalidArgument("eta must be nonincreasing");
  }
  HeavinessReport rep;
  rep.eta = eta;
  if (T_list.empty()) return rep;
  long t_top = *std::max_element(T_list.begin(), T_list.end());
  std::vector<double> values = orbit_lambda1(flow, x, t_top);
  PsiFamily psi(static_cast<int>(eta.size()));
  for (long count : T_list) {
    rep.rows.push_back(measure_from_values(values, count, psi));
    bool ok = true;
    for (std::size_t i = 0; i < eta.size(); ++i)
      if (rep.rows.back().masses[i] < 1.0 - eta[i]) ok = false;
    if (ok) rep.consistent = true;
  }
  return rep;
}

double cf_heaviness(const std::vector<BigInt>& a_seq, double eps, long N) {
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (N < 1 || N > static_cast<long>(a_seq.size())) throw InvalidArgument("N must lie in 1..length");
  double log_eps = std::log(eps);
  double sum = 0.0;
  for (long k = 0; k < N; ++k) {
    if (sgn(a_seq[k]) <= 0) throw InvalidArgument("partial quotients must be positive");
    sum += std::max(log_eps + log_abs(a_seq[k]), 0.0);
  }
  return sum / static_cast<double>(N);
}

#define SPIKELAB_INSTANTIATE(T)                                                                                  \
  template std::vector<SeriesPoint> lambda1_series(const FlowSpec&, const Lattice<T>&, const TimeGrid&);        \
  template ExcursionList excursions(const FlowSpec&, const Lattice<T>&, double, double);                        \
  template std::vector<double> orbit_lambda1(const FlowSpec&, const Lattice<T>&, long);                         \
  template std::vector<double> orbit_lambda1_serial(const FlowSpec&, const Lattice<T>&, long);                  \
  template EmpiricalMeasureReport empirical_measure(const FlowSpec&, const Lattice<T>&, long, const PsiFamily&); \
  template HeavinessReport heaviness_profile(const FlowSpec&, const Lattice<T>&, const std::vector<long>&,       \
                                             const std::vector<double>&);
SPIKELAB_INSTANTIATE(double)
SPIKELAB_INSTANTIATE(Rational)
#undef SPIKELAB_INSTANTIATE

}  // namespace spikelab
