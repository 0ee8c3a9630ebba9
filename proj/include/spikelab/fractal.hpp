#pragma once

#include <cstdint>
#include <vector>

#include "spikelab/fit.hpp"
#include "spikelab/geometry.hpp"

namespace spikelab {

// alpha = [0; n_1, n_2, ...], x = (1 alpha; 0 1) Z^2
struct CFLattice {
  std::vector<BigInt> quotients;  // n_1..n_m actually used for alpha
  std::vector<BigInt> p, q;       // p[i]/q[i] for i = 0..m, p[0]/q[0] = 0/1
  Rational alpha;
  int depth = 0;

  Lattice<Rational> lattice() const;
  // (q_i alpha - p_i, q_i)
  Vec<Rational> convergent_vector(int i) const;
};

// n_i = base^i
std::vector<BigInt> geometric_quotients(long base, int count);
CFLattice build_cf_lattice(const std::vector<BigInt>& n_seq, int depth);

struct ExcursionDatum {
  int index = 0;
  // e^{t_i} and e^{s_{i+1}} as exact rationals, with their logs
  Rational exp_t, exp_s;
  double t = 0.0, s = 0.0;
  Vec<Rational> v;  // governing vector
  Rational ell;     // axis spacing of the translates of R a_{t_i} v
  double ell_value() const { return ell.get_d(); }
};

// threshold is 1/10 unless exploring
std::vector<ExcursionDatum> excursion_data(const CFLattice& cf, int depth, const Rational& threshold = Rational(1, 10));

struct ExcursionSummary {
  std::vector<double> s;            // s_1 = 0, s_{i+1}
  std::vector<double> above_length;  // t_i - s_i
  std::vector<double> t_over_i;
  double C = 0.0;  // max above_length
};
ExcursionSummary summarize(const std::vector<ExcursionDatum>& data);

struct CantorLevel {
  Rational spacing;  // e^{-t_i} l_i
  Rational radius;   // 2 e^{-t_i}
  Rational scale;    // e^{-t_i}
  BigInt count;      // components at this level nested in the previous one
  BigInt child_min, child_max;
  bool child_range_exact = true;  // false: analytic bounds only
};

struct CantorInterval {
  Rational lo, hi;
  Rational weight;
  BigInt index;
};

// Components of B_i are (k S_i + r_i, (k+1) S_i - r_i). A level-i component is kept
// when it lies inside a kept level-(i-1) component; its weight is the parent weight
// over the parent's child count.
class CantorApprox {
 public:
  CantorApprox(std::vector<ExcursionDatum> data, double node_budget = 4e6);

  int depth() const { return static_cast<int>(levels_.size()); }
  const std::vector<CantorLevel>& levels() const { return levels_; }
  const std::vector<ExcursionDatum>& excursions() const { return data_; }
  int materialized() const { return static_cast<int>(intervals_.size()); }
  // components of level 1..materialized()
  const std::vector<CantorInterval>& intervals(int level) const { return intervals_.at(level - 1); }
  const std::vector<CantorInterval>& deepest() const { return intervals_.back(); }

  Rational lo(int level, const BigInt& k) const;
  Rational hi(int level, const BigInt& k) const;
  // kept children at level+1 of component k of the given level; level 0 is [0,1]
  std::pair<BigInt, BigInt> children(int level, const BigInt& k) const;
  BigInt child_count(int level, const BigInt& k) const;
  // sum of child counts over components k0..k1 of the given level
  BigInt child_count_sum(int level, const BigInt& k0, const BigInt& k1) const;

  // mu(closed ball [x - r, x + r]) for the depth-n measure
  Rational ball_mass(const Rational& x, const Rational& r) const;
  // a point of the depth-n set near u, descending to the component nearest u
  Rational point_near(const Rational& u, std::uint64_t seed) const;
  // number of delta-boxes [m d, (m+1) d) meeting the depth-n set
  BigInt box_count(const Rational& delta) const;
  double node_budget() const { return budget_; }

 private:
  std::vector<ExcursionDatum> data_;
  std::vector<CantorLevel> levels_;
  std::vector<std::vector<CantorInterval>> intervals_;
  double budget_;

  std::pair<Rational, Rational> parent_bounds(int level, const BigInt& k) const;
  BigInt box_count_aligned(int level, const Rational& delta, bool& ok) const;
  BigInt box_count_walk(int level, const Rational& delta) const;
};

CantorApprox bad_interval_sets(const CFLattice& cf, int depth, double node_budget = 4e6);

struct ClaimSample {
  Rational gamma;
  double t = 0.0;
  double sigma = 0.0;
};

struct ClaimReport {
  int index = 0;
  bool pass = false;
  double min_sigma = 0.0;
  long samples = 0;
  ClaimSample worst;
};

// exact sigma(a_t(x + (gamma, 0))) with e^t given as a rational
Rational sigma_at(const CFLattice& cf, const Rational& exp_t, const Rational& gamma, const Rational& shift = Rational(0));

// exact lambda1(a_t x); at t = t_i this is the threshold
Rational lambda1_at(const CFLattice& cf, const Rational& exp_t);

ClaimReport verify_sigma_claim(const CFLattice& cf, const ExcursionDatum& datum, int gamma_samples, int t_samples,
                             std::uint64_t seed = 0x5eed);
ClaimReport verify_sigma_claim_serial(const CFLattice& cf, const ExcursionDatum& datum, int gamma_samples,
                                    int t_samples, std::uint64_t seed = 0x5eed);

struct MassCheck {
  double eps = 0.0;
  double burn_in = 0.0;  // pass only looks at r <= burn_in
  double max_ratio = 0.0;
  double max_ratio_resolved = 0.0;
  bool pass = false;
  std::vector<double> r_values;
  std::vector<double> ratio_per_r;  // max over centres
};

// r must lie in [e^{-t_n} l_n, 1]; burn_in defaults to e^{-t_1}
MassCheck mass_distribution_check(const CantorApprox& ca, double eps, const std::vector<double>& r_list,
                                  int centres = 256, double burn_in = -1.0);

// box counts at delta = e^{-t_i}, i = 1..n; depth 1 uses e^{-t_1} 2^{-j}, j = 0..4
DimensionEstimate dim_lower_estimate(const CantorApprox& ca);

struct BadGridWitness {
  double C = 0.0;
  double radius = 0.0;  // of the sup ball O
  double t_max = 0.0;
  double t_trivial = 0.0;  // hits before this time are the trivial part
  long grids = 0;
  long trivial_hits = 0;
  long late_hits = 0;
  bool pass = false;
};

// grids x + (gamma, s) with gamma in the depth-n set and s in [-1, 1]
BadGridWitness witness_bad_grids(const CFLattice& cf, const CantorApprox& ca, int gamma_samples, int s_samples,
                                 double t_max, std::uint64_t seed = 0x5eed);

// sum_{j=0}^{n-1} floor((a j + b) / m), m > 0
BigInt floor_sum(BigInt n, BigInt m, BigInt a, BigInt b);

}  // namespace spikelab
