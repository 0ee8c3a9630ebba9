#include <algorithm>
#include <cmath>
#include <limits>

#include "spikelab/dynamics.hpp"

namespace spikelab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void normalize_sign(Coeffs& z) {
  for (const auto& v : z) {
    if (sgn(v) == 0) continue;
    if (sgn(v) < 0)
      for (auto& w : z) w = -w;
    return;
  }
}

double check_planar(const FlowSpec& flow) {
  if (flow.dim() != 2) throw DimensionUnsupported("orbit tracking needs d = 2");
  return flow.c(0);
}

}  // namespace

// float bases are taken at their exact binary values; the tracker never needs det = 1 exactly
OrbitTracker::OrbitTracker(const FlowSpec& flow, const Lattice<double>& x)
    : OrbitTracker(flow, to_rational(x.basis())) {}

OrbitTracker::OrbitTracker(const FlowSpec& flow, const Lattice<Rational>& x) : OrbitTracker(flow, x.basis()) {}

OrbitTracker::OrbitTracker(const FlowSpec& flow, const Matrix<Rational>& b) : c_(check_planar(flow)) {
  if (b.n != 2) throw DimensionUnsupported("orbit tracking needs d = 2");
  for (int r = 0; r < 2; ++r) {
    den_[r] = 1;
    for (int col = 0; col < 2; ++col)
      mpz_lcm(den_[r].get_mpz_t(), den_[r].get_mpz_t(), b.at(r, col).get_den_mpz_t());
    for (int col = 0; col < 2; ++col) num_[r][col] = b.at(r, col).get_num() * (den_[r] / b.at(r, col).get_den());
    log_den_[r] = log_abs(den_[r]);
  }
  for (int k = 0; k < 2; ++k) {
    b_[k] = IntVec{num_[0][k], num_[1][k]};
    u_[k] = Coeffs{k == 0 ? 1 : 0, k == 1 ? 1 : 0};
  }
}

OrbitTracker::IntVec OrbitTracker::combine_int(const Coeffs& z) const {
  return IntVec{num_[0][0] * z[0] + num_[0][1] * z[1], num_[1][0] * z[0] + num_[1][1] * z[1]};
}

double OrbitTracker::log_norm(const IntVec& v, double t) const {
  double l0 = sgn(v.a) == 0 ? kNegInf : c_ * t + log_abs(v.a) - log_den_[0];
  double l1 = sgn(v.b) == 0 ? kNegInf : -c_ * t + log_abs(v.b) - log_den_[1];
  return std::max(l0, l1);
}

double OrbitTracker::log_norm(const Coeffs& z, double t) const { return log_norm(combine_int(z), t); }

std::pair<double, double> OrbitTracker::log_coords(const Coeffs& z) const {
  IntVec v = combine_int(z);
  return {log_abs(v.a) - log_den_[0], log_abs(v.b) - log_den_[1]};
}

Vec<Rational> OrbitTracker::vector(const Coeffs& z) const {
  IntVec v = combine_int(z);
  return {make_rational(v.a, den_[0]), make_rational(v.b, den_[1])};
}

void OrbitTracker::reduce_at(double t) {
  double spread = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    double l[2][2];
    int s[2][2];
    double shift = kNegInf;
    for (int k = 0; k < 2; ++k) {
      s[k][0] = sgn(b_[k].a);
      s[k][1] = sgn(b_[k].b);
      l[k][0] = s[k][0] == 0 ? kNegInf : c_ * t + log_abs(b_[k].a) - log_den_[0];
      l[k][1] = s[k][1] == 0 ? kNegInf : -c_ * t + log_abs(b_[k].b) - log_den_[1];
      shift = std::max({shift, l[k][0], l[k][1]});
    }
    double x[2][2];
    for (int k = 0; k < 2; ++k)
      for (int r = 0; r < 2; ++r) x[k][r] = s[k][r] == 0 ? 0.0 : s[k][r] * std::exp(l[k][r] - shift);
    double n0 = x[0][0] * x[0][0] + x[0][1] * x[0][1];
    double n1 = x[1][0] * x[1][0] + x[1][1] * x[1][1];
    if (n1 < n0) {
      std::swap(b_[0], b_[1]);
      std::swap(u_[0], u_[1]);
      std::swap(x[0], x[1]);
      std::swap(n0, n1);
    }
    // the dot product carries an error of about 1e-16 |x0||x1|; hand over once that reaches the decision scale
    if (!(n0 > 0.0) || n1 > 1e16 * n0) {
      spread = n0 > 0.0 ? 0.5 * std::log(n1 / n0) : 0.5 * std::log(n1) - std::min(l[0][0], l[0][1]) + shift;
      break;
    }
    double ratio = (x[0][0] * x[1][0] + x[0][1] * x[1][1]) / n0;
    if (!(std::fabs(ratio) > 0.5)) return;
    BigInt m = round_big(ratio);
    b_[1].a -= m * b_[0].a;
    b_[1].b -= m * b_[0].b;
    u_[1][0] -= m * u_[0][0];
    u_[1][1] -= m * u_[0][1];
  }
  reduce_exact(t, spread);
}

// Gauss reduction on integer vectors (a F den1, b G den0), F and G being binary floats close to e^{+-ct}.
// The mantissa length grows with the log norm ratio of the current basis so deep cusp excursions stay resolved.
void OrbitTracker::reduce_exact(double t, double spread) {
  if (!std::isfinite(spread)) spread = 0.0;
  long bits = 128 + static_cast<long>(std::ceil(2 * spread / std::log(2.0)));
  long ef = 0, eg = 0;
  BigInt sa = exp_mantissa(c_ * t, bits, ef) * den_[1];
  BigInt sb = exp_mantissa(-c_ * t, bits, eg) * den_[0];
  if (ef > eg) mpz_mul_2exp(sa.get_mpz_t(), sa.get_mpz_t(), ef - eg);
  else mpz_mul_2exp(sb.get_mpz_t(), sb.get_mpz_t(), eg - ef);
  BigInt x[2][2];
  for (int k = 0; k < 2; ++k) {
    x[k][0] = b_[k].a * sa;
    x[k][1] = b_[k].b * sb;
  }
  BigInt dot, n0, n1, m, twice;
  for (;;) {
    n0 = x[0][0] * x[0][0] + x[0][1] * x[0][1];
    n1 = x[1][0] * x[1][0] + x[1][1] * x[1][1];
    if (n1 < n0) {
      std::swap(b_[0], b_[1]);
      std::swap(u_[0], u_[1]);
      std::swap(x[0], x[1]);
      std::swap(n0, n1);
    }
    dot = x[0][0] * x[1][0] + x[0][1] * x[1][1];
    twice = 2 * dot;
    if (abs(twice) <= n0) return;
    // nearest integer to dot / n0
    m = twice + n0;
    mpz_fdiv_q(m.get_mpz_t(), m.get_mpz_t(), BigInt(2 * n0).get_mpz_t());
    x[1][0] -= m * x[0][0];
    x[1][1] -= m * x[0][1];
    b_[1].a -= m * b_[0].a;
    b_[1].b -= m * b_[0].b;
    u_[1][0] -= m * u_[0][0];
    u_[1][1] -= m * u_[0][1];
  }
}

OrbitTracker::Shortest OrbitTracker::shortest(double t) {
  reduce_at(t);
  Shortest best;
  bool found = false;
  for (int i = 0; i <= 2; ++i) {
    for (int j = -2; j <= 2; ++j) {
      if (i == 0 && j <= 0) continue;
      IntVec v{b_[0].a * i + b_[1].a * j, b_[0].b * i + b_[1].b * j};
      double ln = log_norm(v, t);
      if (!found || ln < best.log_norm) {
        found = true;
        best.log_norm = ln;
        best.coeffs = Coeffs{u_[0][0] * i + u_[1][0] * j, u_[0][1] * i + u_[1][1] * j};
      }
    }
  }
  normalize_sign(best.coeffs);
  best.t = t;
  best.norm = std::exp(best.log_norm);
  return best;
}

std::vector<Coeffs> OrbitTracker::short_vectors(double t, double radius) {
  reduce_at(t);
  double l[2][2];
  double shift = kNegInf;
  for (int k = 0; k < 2; ++k) {
    l[k][0] = sgn(b_[k].a) == 0 ? kNegInf : c_ * t + log_abs(b_[k].a) - log_den_[0];
    l[k][1] = sgn(b_[k].b) == 0 ? kNegInf : -c_ * t + log_abs(b_[k].b) - log_den_[1];
    shift = std::max({shift, l[k][0], l[k][1]});
  }
  double x[2][2];
  int sg[2][2] = {{sgn(b_[0].a), sgn(b_[0].b)}, {sgn(b_[1].a), sgn(b_[1].b)}};
  for (int k = 0; k < 2; ++k)
    for (int r = 0; r < 2; ++r) x[k][r] = sg[k][r] == 0 ? 0.0 : sg[k][r] * std::exp(l[k][r] - shift);
  // columns are the reduced vectors; inverse rows bound the coefficients
  double det = x[0][0] * x[1][1] - x[1][0] * x[0][1];
  double row0 = (std::fabs(x[1][1]) + std::fabs(x[1][0])) / std::fabs(det);
  double row1 = (std::fabs(x[0][1]) + std::fabs(x[0][0])) / std::fabs(det);
  double k0 = std::exp(std::log(row0 * radius) - shift) * (1 + 1e-9) + 1e-9;
  double k1 = std::exp(std::log(row1 * radius) - shift) * (1 + 1e-9) + 1e-9;
  if (!(k0 < 1e6 && k1 < 1e6)) throw BudgetExceeded("short vector search radius too large");
  long m0 = static_cast<long>(std::floor(k0)), m1 = static_cast<long>(std::floor(k1));
  double log_r = std::log(radius);
  std::vector<Coeffs> out;
  for (long i = 0; i <= m0; ++i) {
    for (long j = -m1; j <= m1; ++j) {
      if (i == 0 && j <= 0) continue;
      IntVec v{b_[0].a * i + b_[1].a * j, b_[0].b * i + b_[1].b * j};
      if (log_norm(v, t) < log_r) {
        Coeffs z{u_[0][0] * i + u_[1][0] * j, u_[0][1] * i + u_[1][1] * j};
        normalize_sign(z);
        out.push_back(z);
      }
    }
  }
  return out;
}

void OrbitTracker::seek(double t) { reduce_at(t); }

}  // namespace spikelab
