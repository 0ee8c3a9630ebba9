#include <algorithm>
#include <cmath>

#include "spikelab/fractal.hpp"

namespace spikelab {

std::vector<BigInt> geometric_quotients(long base, int count) {
  if (base < 1 || count < 0) throw InvalidArgument("geometric quotients need base >= 1");
  std::vector<BigInt> out;
  BigInt v = 1;
  for (int i = 0; i < count; ++i) {
    v *= base;
    out.push_back(v);
  }
  return out;
}

CFLattice build_cf_lattice(const std::vector<BigInt>& n_seq, int depth) {
  if (depth < 1) throw InsufficientDepth("depth 0 gives alpha = 0");
  if (depth > static_cast<int>(n_seq.size())) throw InsufficientDepth("depth exceeds the quotient sequence");
  for (const auto& n : n_seq)
    if (n < 1) throw InvalidArgument("partial quotients must be >= 1");
  CFLattice cf;
  cf.depth = depth;
  int m = std::min(static_cast<int>(n_seq.size()), depth + 2);
  cf.quotients.assign(n_seq.begin(), n_seq.begin() + m);
  BigInt p_prev = 1, q_prev = 0;
  cf.p.push_back(0);
  cf.q.push_back(1);
  for (int i = 0; i < m; ++i) {
    BigInt p = cf.quotients[i] * cf.p.back() + p_prev;
    BigInt q = cf.quotients[i] * cf.q.back() + q_prev;
    p_prev = cf.p.back();
    q_prev = cf.q.back();
    cf.p.push_back(p);
    cf.q.push_back(q);
  }
  cf.alpha = make_rational(cf.p.back(), cf.q.back());
  return cf;
}

Lattice<Rational> CFLattice::lattice() const {
  return Lattice<Rational>(Matrix<Rational>::from_rows({{Rational(1), alpha}, {Rational(0), Rational(1)}}));
}

Vec<Rational> CFLattice::convergent_vector(int i) const {
  Rational qi(q.at(i));
  return {qi * alpha - Rational(p.at(i)), qi};
}

namespace {

Rational rational_gcd(Rational a, Rational b) {
  a = abs(a);
  b = abs(b);
  if (a == 0) return b;
  if (b == 0) return a;
  BigInt num = gcd(a.get_num() * b.get_den(), b.get_num() * a.get_den());
  return make_rational(num, a.get_den() * b.get_den());
}

}  // namespace

std::vector<ExcursionDatum> excursion_data(const CFLattice& cf, int depth, const Rational& threshold) {
  if (depth < 1 || depth > cf.depth) throw InsufficientDepth("excursion depth outside the lattice depth");
  if (depth + 1 > static_cast<int>(cf.quotients.size()))
    throw InsufficientDepth("need one more partial quotient than the excursion depth");
  if (threshold <= 0) throw InvalidArgument("threshold must be positive");
  std::vector<ExcursionDatum> out;
  for (int i = 1; i <= depth; ++i) {
    Vec<Rational> v = cf.convergent_vector(i);
    Rational v1 = abs(v[0]);
    if (v[1] * v1 > threshold * threshold) throw NoDip("convergent " + std::to_string(i) + " stays above the threshold");
    ExcursionDatum d;
    d.index = i;
    d.v = v;
    d.exp_t = v[1] / threshold;
    d.exp_s = threshold / v1;
    d.t = log_abs(d.exp_t);
    d.s = log_abs(d.exp_s);
    // translates of R u through a_t x meet the axis at w1 - w2 u1/u2
    Rational lam = d.exp_t;
    Rational u1 = lam * v[0], u2 = v[1] / lam;
    Rational slope = u1 / u2;
    Rational g1 = lam;
    Rational g2 = lam * cf.alpha - slope / lam;
    d.ell = rational_gcd(g1, g2);
    out.push_back(std::move(d));
  }
  return out;
}

ExcursionSummary summarize(const std::vector<ExcursionDatum>& data) {
  ExcursionSummary s;
  double prev = 0.0;
  for (const auto& d : data) {
    s.s.push_back(prev);
    s.above_length.push_back(d.t - prev);
    s.t_over_i.push_back(d.t / d.index);
    s.C = std::max(s.C, d.t - prev);
    prev = d.s;
  }
  s.s.push_back(prev);
  return s;
}

BigInt floor_sum(BigInt n, BigInt m, BigInt a, BigInt b) {
  if (m <= 0) throw InvalidArgument("floor_sum needs m > 0");
  BigInt ans = 0;
  if (n <= 0) return ans;
  BigInt qa, qb;
  mpz_fdiv_qr(qa.get_mpz_t(), a.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  ans += qa * (n * (n - 1) / 2);
  mpz_fdiv_qr(qb.get_mpz_t(), b.get_mpz_t(), b.get_mpz_t(), m.get_mpz_t());
  ans += qb * n;
  while (true) {
    if (a >= m) {
      ans += (n - 1) * n / 2 * (a / m);
      a %= m;
    }
    if (b >= m) {
      ans += n * (b / m);
      b %= m;
    }
    BigInt y_max = a * n + b;
    if (y_max < m) break;
    n = y_max / m;
    b = y_max % m;
    std::swap(m, a);
  }
  return ans;
}

Rational sigma_at(const CFLattice& cf, const Rational& exp_t, const Rational& gamma, const Rational& shift) {
  if (exp_t <= 0) throw InvalidArgument("e^t must be positive");
  Rational inv = 1 / exp_t;
  Matrix<Rational> b = Matrix<Rational>::from_rows({{exp_t, exp_t * cf.alpha}, {Rational(0), inv}});
  Grid<Rational> y(Lattice<Rational>(b), {exp_t * gamma, shift * inv});
  return closest_point(y).key;
}

Rational lambda1_at(const CFLattice& cf, const Rational& exp_t) {
  if (exp_t <= 0) throw InvalidArgument("e^t must be positive");
  Matrix<Rational> b = Matrix<Rational>::from_rows({{exp_t, exp_t * cf.alpha}, {Rational(0), 1 / exp_t}});
  return lambda1_vector(Lattice<Rational>(b)).key;
}

}  // namespace spikelab
