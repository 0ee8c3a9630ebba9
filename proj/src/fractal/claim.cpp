#include <algorithm>
#include <cmath>
#include <random>

#include "spikelab/fractal.hpp"

namespace spikelab {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// (m + 1) / (2^32 + 1), strictly inside (0, 1)
Rational open_unit(std::uint64_t bits) {
  return make_rational(BigInt(static_cast<unsigned long>((bits >> 32) + 1)), BigInt("4294967297"));
}

struct ClaimPlan {
  Rational spacing, radius;
  BigInt k0, k1;
  std::vector<Rational> exp_t;
  std::vector<double> t;
};

ClaimPlan plan_claim(const ExcursionDatum& d, int gamma_samples, int t_samples) {
  if (gamma_samples < 1 || t_samples < 2) throw InvalidArgument("claim check needs >= 1 gamma and >= 2 t samples");
  ClaimPlan p;
  Rational scale = 1 / d.exp_t;
  p.spacing = d.ell * scale;
  p.radius = 2 * scale;
  p.k0 = ceil_big(-p.radius / p.spacing);
  p.k1 = floor_big((1 + p.radius) / p.spacing) - 1;
  if (p.k1 < p.k0) throw EmptyIntersection("B_i has no component inside [0,1]");
  for (int l = 0; l < t_samples; ++l) {
    if (l == 0) {
      p.exp_t.push_back(d.exp_t);
      p.t.push_back(d.t);
    } else if (l == t_samples - 1) {
      p.exp_t.push_back(d.exp_s);
      p.t.push_back(d.s);
    } else {
      double t = d.t + (d.s - d.t) * l / (t_samples - 1);
      p.exp_t.push_back(exp_rational(t));
      p.t.push_back(t);
    }
  }
  return p;
}

Rational claim_gamma(const ClaimPlan& p, int j, int gamma_samples, std::uint64_t seed) {
  std::uint64_t h = mix(seed ^ mix(static_cast<std::uint64_t>(j)));
  // stratum j of [0,1], then a point of the B_i component over it
  Rational u = (Rational(j) + open_unit(h)) / gamma_samples;
  BigInt k = std::clamp(floor_big(u / p.spacing), p.k0, p.k1);
  return Rational(k) * p.spacing + p.radius + (p.spacing - 2 * p.radius) * open_unit(mix(h));
}

ClaimReport claim_report(const ExcursionDatum& d, const std::vector<ClaimSample>& all) {
  ClaimReport rep;
  rep.index = d.index;
  rep.samples = static_cast<long>(all.size());
  rep.pass = true;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (i == 0 || all[i].sigma < rep.min_sigma) {
      rep.min_sigma = all[i].sigma;
      rep.worst = all[i];
    }
  }
  return rep;
}

}  // namespace

ClaimReport verify_sigma_claim(const CFLattice& cf, const ExcursionDatum& d, int gamma_samples, int t_samples,
                             std::uint64_t seed) {
  ClaimPlan p = plan_claim(d, gamma_samples, t_samples);
  long total = static_cast<long>(gamma_samples) * t_samples;
  std::vector<ClaimSample> all(total);
  std::vector<char> ok(total, 0);
#pragma omp parallel for schedule(dynamic, 4)
  for (long idx = 0; idx < total; ++idx) {
    int j = static_cast<int>(idx / t_samples), l = static_cast<int>(idx % t_samples);
    Rational g = claim_gamma(p, j, gamma_samples, seed);
    Rational s = sigma_at(cf, p.exp_t[l], g);
    all[idx] = {g, p.t[l], s.get_d()};
    ok[idx] = s >= 1;
  }
  ClaimReport rep = claim_report(d, all);
  rep.pass = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
  return rep;
}

ClaimReport verify_sigma_claim_serial(const CFLattice& cf, const ExcursionDatum& d, int gamma_samples, int t_samples,
                                    std::uint64_t seed) {
  ClaimPlan p = plan_claim(d, gamma_samples, t_samples);
  std::vector<ClaimSample> all;
  bool pass = true;
  for (int j = 0; j < gamma_samples; ++j) {
    Rational g = claim_gamma(p, j, gamma_samples, seed);
    for (int l = 0; l < t_samples; ++l) {
      Rational s = sigma_at(cf, p.exp_t[l], g);
      all.push_back({g, p.t[l], s.get_d()});
      pass = pass && s >= 1;
    }
  }
  ClaimReport rep = claim_report(d, all);
  rep.pass = pass;
  return rep;
}

MassCheck mass_distribution_check(const CantorApprox& ca, double eps, const std::vector<double>& r_list, int centres,
                                  double burn_in) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0,1)");
  if (r_list.empty() || centres < 1) throw InvalidArgument("mass check needs radii and centres");
  const CantorLevel& last = ca.levels().back();
  double r_min = last.spacing.get_d();
  for (double r : r_list)
    if (!(r >= r_min * (1 - 1e-12) && r <= 1.0)) throw ScaleOutOfRange("radius outside [e^{-t_n} l_n, 1]");
  MassCheck out;
  out.eps = eps;
  out.burn_in = burn_in > 0 ? burn_in : ca.levels().front().scale.get_d();
  std::vector<Rational> xs(centres);
  for (int j = 0; j < centres; ++j) xs[j] = ca.point_near(Rational(2 * j + 1, 2 * centres), static_cast<std::uint64_t>(j));
  std::size_t R = r_list.size();
  std::vector<double> ratio(R * centres);
#pragma omp parallel for schedule(dynamic, 8)
  for (long idx = 0; idx < static_cast<long>(R * centres); ++idx) {
    std::size_t ri = idx / centres, j = idx % centres;
    Rational mass = ca.ball_mass(xs[j], exact_rational(r_list[ri]));
    ratio[idx] = mass.get_d() / std::pow(r_list[ri], 1.0 - eps);
  }
  out.pass = true;
  for (std::size_t ri = 0; ri < R; ++ri) {
    double worst = *std::max_element(ratio.begin() + ri * centres, ratio.begin() + (ri + 1) * centres);
    out.r_values.push_back(r_list[ri]);
    out.ratio_per_r.push_back(worst);
    out.max_ratio = std::max(out.max_ratio, worst);
    if (r_list[ri] <= out.burn_in) {
      out.max_ratio_resolved = std::max(out.max_ratio_resolved, worst);
      if (worst > 1.0) out.pass = false;
    }
  }
  return out;
}

DimensionEstimate dim_lower_estimate(const CantorApprox& ca) {
  std::vector<double> deltas, counts;
  const auto& lv = ca.levels();
  if (ca.depth() == 1) {
    for (int j = 0; j <= 4; ++j) {
      Rational d = lv[0].scale / Rational(BigInt(1) << j);
      deltas.push_back(d.get_d());
      counts.push_back(ca.box_count(d).get_d());
    }
  } else {
    for (const auto& l : lv) {
      deltas.push_back(l.scale.get_d());
      counts.push_back(ca.box_count(l.scale).get_d());
    }
  }
  return fit_dimension(deltas, counts);
}

BadGridWitness witness_bad_grids(const CFLattice& cf, const CantorApprox& ca, int gamma_samples, int s_samples,
                                 double t_max, std::uint64_t seed) {
  if (gamma_samples < 1 || s_samples < 1) throw InvalidArgument("witness needs samples");
  const auto& data = ca.excursions();
  if (!(t_max > 0.0) || t_max > data.back().t * (1 + 1e-12))
    throw InvalidArgument("t_max must lie in (0, t_n]");
  ExcursionSummary sum = summarize(data);
  BadGridWitness w;
  w.C = sum.C;
  w.radius = 0.5 * std::exp(-w.C);
  w.t_max = t_max;
  // sigma >= e^{-C} from t_1 on; a stable shift |s| <= 1 costs e^{-t}
  w.t_trivial = std::max(data.front().t, w.C + std::log(2.0));
  BoxRegion O = BoxRegion::ball(2, w.radius);
  FlowSpec flow = FlowSpec::planar(1.0);
  Lattice<Rational> x = cf.lattice();
  for (int j = 0; j < gamma_samples; ++j) {
    Rational gamma = ca.point_near(Rational(2 * j + 1, 2 * gamma_samples), mix(seed + j));
    for (int l = 0; l < s_samples; ++l) {
      Rational s = s_samples == 1 ? Rational(0) : Rational(2 * l, s_samples - 1) - 1;
      Grid<Rational> y(x, {gamma, s});
      for (const auto& sp : grid_spike_points(flow, y, O, t_max)) {
        if (sp.hits.parts().back().hi > w.t_trivial)
          ++w.late_hits;
        else
          ++w.trivial_hits;
      }
      ++w.grids;
    }
  }
  w.pass = w.late_hits == 0;
  return w;
}

}  // namespace spikelab
