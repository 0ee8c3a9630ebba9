#include <cmath>

#include "spikelab/geometry.hpp"

namespace spikelab {

namespace {

Vec<double> double_factors(const FlowSpec& flow, double t) {
  Vec<double> f(flow.dim());
  for (int j = 0; j < flow.dim(); ++j) {
    double e = flow.c(j) * t;
    if (std::fabs(e) > 700) throw Overflow("|c_j t| > 700; use the log-domain variant");
    f[j] = std::exp(e);
  }
  return f;
}

void check_dim(const FlowSpec& flow, int d) {
  if (flow.dim() != d) throw InvalidArgument("flow and object dimensions differ");
}

}  // namespace

template <class T>
Matrix<T> scale_rows(const Matrix<T>& m, const Vec<T>& factors) {
  Matrix<T> out = m;
  for (int c = 0; c < m.n; ++c)
    for (int r = 0; r < m.n; ++r) out.at(r, c) *= factors[r];
  return out;
}

template <class T>
Vec<T> scale_vector(const Vec<T>& v, const Vec<T>& factors) {
  Vec<T> out = v;
  for (size_t j = 0; j < v.size(); ++j) out[j] *= factors[j];
  return out;
}

Vec<Rational> flow_factors(const FlowSpec& flow, double t) {
  int d = flow.dim();
  Vec<Rational> f(d);
  Rational prod(1);
  for (int j = 0; j + 1 < d; ++j) {
    f[j] = t == 0.0 ? Rational(1) : exp_rational(flow.c(j) * t);
    prod *= f[j];
  }
  f[d - 1] = 1 / prod;
  return f;
}

Vec<double> apply_flow(const FlowSpec& flow, double t, const Vec<double>& p) {
  check_dim(flow, static_cast<int>(p.size()));
  return scale_vector(p, double_factors(flow, t));
}

Lattice<double> apply_flow(const FlowSpec& flow, double t, const Lattice<double>& x) {
  check_dim(flow, x.dim());
  return Lattice<double>(scale_rows(x.basis(), double_factors(flow, t)));
}

Grid<double> apply_flow(const FlowSpec& flow, double t, const Grid<double>& y) {
  check_dim(flow, y.dim());
  Vec<double> f = double_factors(flow, t);
  return Grid<double>(Lattice<double>(scale_rows(y.lattice().basis(), f)), scale_vector(y.offset(), f));
}

Lattice<Rational> apply_flow(const FlowSpec& flow, double t, const Lattice<Rational>& x) {
  check_dim(flow, x.dim());
  return Lattice<Rational>(scale_rows(x.basis(), flow_factors(flow, t)));
}

Grid<Rational> apply_flow(const FlowSpec& flow, double t, const Grid<Rational>& y) {
  check_dim(flow, y.dim());
  Vec<Rational> f = flow_factors(flow, t);
  return Grid<Rational>(Lattice<Rational>(scale_rows(y.lattice().basis(), f)), scale_vector(y.offset(), f));
}

template Matrix<double> scale_rows(const Matrix<double>&, const Vec<double>&);
template Matrix<Rational> scale_rows(const Matrix<Rational>&, const Vec<Rational>&);
template Vec<double> scale_vector(const Vec<double>&, const Vec<double>&);
template Vec<Rational> scale_vector(const Vec<Rational>&, const Vec<Rational>&);

}  // namespace spikelab
