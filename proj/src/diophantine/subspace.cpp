#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "spikelab/diophantine.hpp"

namespace spikelab {

AffineSubspace::AffineSubspace(const std::vector<std::vector<double>>& span, std::vector<double> offset)
    : offset_(std::move(offset)) {
  if (span.empty()) throw InvalidArgument("subspace needs at least one spanning vector");
  d_ = static_cast<int>(span.front().size());
  ell_ = static_cast<int>(span.size());
  if (d_ < 2 || ell_ >= d_) throw InvalidArgument("need 1 <= l < d");
  if (offset_.empty()) offset_.assign(d_, 0.0);
  if (static_cast<int>(offset_.size()) != d_) throw InvalidArgument("offset dimension mismatch");
  Eigen::MatrixXd a(d_, ell_);
  for (int j = 0; j < ell_; ++j) {
    if (static_cast<int>(span[j].size()) != d_) throw InvalidArgument("spanning vectors differ in dimension");
    for (int i = 0; i < d_; ++i) a(i, j) = span[j][i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() != ell_) throw InvalidArgument("spanning vectors are dependent");
  // Gram-Schmidt twice keeps the basis orthonormal to rounding
  for (int j = 0; j < ell_; ++j) {
    Eigen::VectorXd q = a.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (auto& b : basis_) {
        Eigen::Map<const Eigen::VectorXd> bv(b.data(), d_);
        q -= bv.dot(q) * bv;
      }
    q /= q.norm();
    basis_.emplace_back(q.data(), q.data() + d_);
  }
}

std::vector<double> AffineSubspace::project_out(const std::vector<double>& p) const {
  std::vector<double> r = p;
  for (const auto& b : basis_) {
    double dot = 0.0;
    for (int i = 0; i < d_; ++i) dot += b[i] * p[i];
    for (int i = 0; i < d_; ++i) r[i] -= dot * b[i];
  }
  return r;
}

double AffineSubspace::distance(const std::vector<double>& p) const {
  std::vector<double> q(d_);
  for (int i = 0; i < d_; ++i) q[i] = p[i] - offset_[i];
  auto r = project_out(q);
  double s = 0.0;
  for (double x : r) s += x * x;
  return std::sqrt(s);
}

namespace {

double norm2(const std::vector<long>& k) {
  double s = 0.0;
  for (long x : k) s += static_cast<double>(x) * static_cast<double>(x);
  return std::sqrt(s);
}

// Visits integer k with |k| <= bound whose distance to W can be at most tube(|k_free|), where k_free are
// l coordinates chosen so the remaining ones are pinned down best by the distance. The visitor may
// shrink the tube as it goes.
void tube_enumerate(const AffineSubspace& W, double bound, double budget,
                    const std::function<double(double)>& tube,
                    const std::function<void(const std::vector<long>&, double, double)>& visit) {
  int d = W.dim(), l = W.ell(), rdim = d - l;
  if (d > 4) throw DimensionUnsupported("subspace search supports d <= 4");
  Eigen::MatrixXd perp = Eigen::MatrixXd::Identity(d, d);
  for (const auto& b : W.basis()) {
    Eigen::Map<const Eigen::VectorXd> bv(b.data(), d);
    perp -= bv * bv.transpose();
  }
  std::vector<int> best_free;
  double best_smin = -1.0;
  for (int mask = 0; mask < (1 << d); ++mask) {
    if (__builtin_popcount(mask) != l) continue;
    Eigen::MatrixXd m(d, rdim);
    int c = 0;
    for (int i = 0; i < d; ++i)
      if (!(mask >> i & 1)) m.col(c++) = perp.col(i);
    double smin = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues().minCoeff();
    if (smin > best_smin) {
      best_smin = smin;
      best_free.clear();
      for (int i = 0; i < d; ++i)
        if (mask >> i & 1) best_free.push_back(i);
    }
  }
  if (!(best_smin > 0.0)) throw InvalidArgument("degenerate subspace");
  std::vector<int> rest;
  for (int i = 0; i < d; ++i)
    if (std::find(best_free.begin(), best_free.end(), i) == best_free.end()) rest.push_back(i);
  Eigen::MatrixXd mr(d, rdim), mf(d, l);
  for (int j = 0; j < rdim; ++j) mr.col(j) = perp.col(rest[j]);
  for (int j = 0; j < l; ++j) mf.col(j) = perp.col(best_free[j]);
  Eigen::MatrixXd pinv = mr.completeOrthogonalDecomposition().pseudoInverse();
  Eigen::VectorXd off = perp * Eigen::Map<const Eigen::VectorXd>(W.offset().data(), d);
  // the tube centre is affine in the free coordinates: centre = base + lin kf
  Eigen::MatrixXd lin_m = -pinv * mf;
  Eigen::VectorXd base_v = pinv * off;
  double lin[4][4] = {}, base[4] = {};
  for (int j = 0; j < rdim; ++j) {
    base[j] = base_v(j);
    for (int m = 0; m < l; ++m) lin[j][m] = lin_m(j, m);
  }

  long fmax = static_cast<long>(std::floor(bound));
  double work = 0.0;
  std::vector<long> kf(l, -fmax), k(d), kr(rdim), lo(rdim), hi(rdim);
  if (fmax < 0 || bound < 1.0) return;
  for (;;) {
    double fn = norm2(kf);
    if (fn <= bound) {
      double tau = tube(fn);
      double center[4];
      for (int j = 0; j < rdim; ++j) {
        center[j] = base[j];
        for (int m = 0; m < l; ++m) center[j] += lin[j][m] * static_cast<double>(kf[m]);
      }
      double rad = tau / best_smin * (1 + 1e-9) + 1e-9;
      bool ok = std::isfinite(rad);
      double cells = 1.0;
      for (int j = 0; j < rdim && ok; ++j) {
        double a = std::max(center[j] - rad, -bound), b = std::min(center[j] + rad, bound);
        lo[j] = static_cast<long>(std::ceil(a));
        hi[j] = static_cast<long>(std::floor(b));
        if (lo[j] > hi[j]) ok = false;
        cells *= static_cast<double>(hi[j] - lo[j] + 1);
      }
      if (ok) {
        work += cells;
        if (work > budget) throw BudgetExceeded("subspace search exceeds the budget");
        for (int j = 0; j < l; ++j) k[best_free[j]] = kf[j];
        kr = lo;
        for (;;) {
          for (int j = 0; j < rdim; ++j) k[rest[j]] = kr[j];
          double kn = norm2(k);
          if (kn > 0.0 && kn <= bound) {
            std::vector<double> kd(k.begin(), k.end());
            visit(k, kn, W.distance(kd));
          }
          int j = rdim - 1;
          while (j >= 0 && kr[j] == hi[j]) kr[j] = lo[j], --j;
          if (j < 0) break;
          ++kr[j];
        }
      }
      work += 1.0;
      if (work > budget) throw BudgetExceeded("subspace search exceeds the budget");
    }
    int j = l - 1;
    while (j >= 0 && kf[j] == fmax) kf[j] = -fmax, --j;
    if (j < 0) break;
    ++kf[j];
  }
}

}  // namespace

std::vector<std::vector<long>> minkowski_solutions(const AffineSubspace& W0, double norm_bound, double budget) {
  for (double x : W0.offset())
    if (x != 0.0) throw InvalidArgument("Minkowski bound needs a linear subspace");
  int d = W0.dim(), l = W0.ell();
  double expo = static_cast<double>(l) / (d - l);
  double scale = std::ldexp(1.0, d);
  std::vector<std::vector<long>> out;
  tube_enumerate(
      W0, norm_bound, budget, [&](double fn) { return scale * std::pow(std::max(1.0, fn), -expo); },
      [&](const std::vector<long>& k, double kn, double dist) {
        if (dist <= scale * std::pow(kn, -expo)) out.push_back(k);
      });
  return out;
}

SubspaceTestResult bad_subspace_test(const AffineSubspace& W, double eps, double norm_bound, double budget) {
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  int d = W.dim(), l = W.ell();
  double expo = static_cast<double>(l) / (d - l);
  SubspaceTestResult out;
  out.min_value = std::numeric_limits<double>::infinity();
  if (norm_bound >= 1.0) {
    // unit vectors give a finite starting bound for the tube
    for (int i = 0; i < d; ++i) {
      std::vector<double> e(d, 0.0);
      e[i] = 1.0;
      double s = W.distance(e);
      if (s < out.min_value) {
        out.min_value = s;
        out.argmin.assign(d, 0);
        out.argmin[i] = 1;
      }
    }
  }
  tube_enumerate(
      W, norm_bound, budget, [&](double fn) { return out.min_value * std::pow(std::max(1.0, fn), -expo); },
      [&](const std::vector<long>& k, double kn, double dist) {
        double s = std::pow(kn, expo) * dist;
        if (s < out.min_value) {
          out.min_value = s;
          out.argmin = k;
        }
      });
  out.verdict = out.min_value >= eps;
  return out;
}

AffineSubspace target_line(double v, double w) { return AffineSubspace({{1.0, v}}, {0.0, -w}); }

LineCoherence line_coherence(double v, double w, double eps, long K) {
  LineCoherence out;
  out.nu = std::sqrt(1.0 + v * v);
  double a = std::fabs(v) + std::fabs(w) + 0.5;
  out.nu_plus = std::sqrt(1.0 + a * a);
  out.line_eps = eps * out.nu_plus / out.nu;
  out.line_bound = static_cast<double>(K) * out.nu_plus;
  AffineSubspace line = target_line(v, w);
  out.layer_min = std::numeric_limits<double>::infinity();
  for (long k = 1; k <= K; ++k) {
    double kd = static_cast<double>(k);
    double base = std::floor(kd * v - w);
    for (double k1 : {base, base + 1.0})
      out.layer_min = std::min(out.layer_min, kd * out.nu * line.distance({kd, k1}));
  }
  out.line_verdict = bad_subspace_test(line, out.line_eps, out.line_bound).verdict;
  BadTestResult t = bad_target_test(BadTestConfig{{v}, eps, K, std::nullopt}, {w});
  out.target_verdict = t.verdict;
  out.target_min = t.min_value;
  return out;
}

}  // namespace spikelab
