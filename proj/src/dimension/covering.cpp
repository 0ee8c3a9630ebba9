#include <algorithm>
#include <cmath>

#include "spikelab/dimension.hpp"

namespace spikelab {

long interval_cover_count(const IntervalSet& set, double length) {
  if (!(length > 0.0)) throw InvalidArgument("cover length must be positive");
  long count = 0;
  double covered = -INFINITY;
  for (const auto& p : set.parts()) {
    double lo = p.lo;
    if (lo <= covered) lo = covered;
    // the part may be exhausted by the previous cover
    if (p.hi <= covered) continue;
    long k = std::max(1L, static_cast<long>(std::ceil((p.hi - lo) / length)));
    count += k;
    covered = lo + static_cast<double>(k) * length;
  }
  return count;
}

namespace {

// a_t x with a reduced basis; the flow acts on exact rationals, since the
// cancellation in the short vectors exceeds double precision for moderate t
Lattice<double> flowed(double t, const Matrix<Rational>& basis) {
  Rational up(std::exp(t));
  Rational down = 1 / up;
  Matrix<Rational> m = basis;
  for (int j = 0; j < 2; ++j) {
    m.at(0, j) *= up;
    m.at(1, j) *= down;
  }
  return Lattice<double>(to_double(reduce(m).basis));
}
Matrix<Rational> exact_basis(const Lattice<double>& x) { return to_rational(x.basis()); }
Matrix<Rational> exact_basis(const Lattice<Rational>& x) { return x.basis(); }

// lattice points of x inside [a1,b1] x [a2,b2]
void points_in_box(const Lattice<double>& x, double a1, double b1, double a2, double b2,
                   const std::function<void(double, double)>& visit) {
  Reduction<double> red = reduce(x.basis());
  Matrix<double> binv = inverse(red.basis);
  Vec<double> mid{0.5 * (a1 + b1), 0.5 * (a2 + b2)};
  Vec<double> centre = multiply(binv, mid);
  Vec<double> radius = coefficient_radii(binv, {0.5 * (b1 - a1), 0.5 * (b2 - a2)});
  enumerate_coefficients<double>(centre, radius, 1e7, [&](const Coeffs& z) {
    Vec<double> p = combine(red.basis, z);
    if (p[0] >= a1 && p[0] <= b1 && p[1] >= a2 && p[1] <= b2) visit(p[0], p[1]);
    return true;
  });
}

}  // namespace

template <class T>
CoveringResult covering_count_experiment(const FlowSpec& flow, const Grid<T>& y, double threshold, double r,
                                         long T_steps, long max_T) {
  if (flow.dim() != 2 || flow.c(0) != 1.0 || flow.c(1) != -1.0)
    throw InvalidArgument("covering experiment needs c = (1,-1)");
  if (T_steps < 0) throw InvalidArgument("T must be nonnegative");
  if (T_steps > max_T) throw BudgetExceeded("T exceeds the covering budget");
  if (!(threshold > 0.0) || !(r > 0.0)) throw InvalidArgument("threshold and r must be positive");
  const Lattice<T>& x = y.lattice();
  Matrix<Rational> base = exact_basis(x);
  double lam = lambda1(x);
  if (lam < threshold) throw InvalidArgument("the starting grid lies in the cusp part");
  // fiber injectivity radius off the cusp part is at least threshold/2 in the sup metric
  if (!(r < 0.5 * threshold)) throw InvalidArgument("r must be below the fiber injectivity radius threshold/2");

  CoveringResult out;
  out.r_y = 0.5 * lam;
  IntervalSet set = IntervalSet::from({Interval::closed(-out.r_y, out.r_y)});
  out.C = interval_cover_count(set, 2 * r);
  out.counts.push_back(out.C);
  for (long t = 1; t <= T_steps; ++t) {
    double td = static_cast<double>(t);
    Lattice<double> xt = flowed(td, base);
    if (lambda1(xt) < threshold) {
      out.I.push_back(t);
    } else {
      // z = y + (g, 0) stays within r of a_t y (sup metric) iff (e^t g, 0) is within r of a_t x
      double et = std::exp(td);
      std::vector<Interval> pieces;
      for (const auto& part : set.parts()) {
        points_in_box(xt, et * part.lo - r, et * part.hi + r, -r, r, [&](double u1, double u2) {
          Interval iv = Interval::closed((u1 - r) / et, (u1 + r) / et);
          iv.lo = std::max(iv.lo, part.lo);
          iv.hi = std::min(iv.hi, part.hi);
          if (iv.lo <= iv.hi) pieces.push_back(iv);
        });
      }
      set = IntervalSet::from(pieces);
    }
    out.counts.push_back(interval_cover_count(set, 2 * r * std::exp(-td)));
  }
  out.I_size = static_cast<long>(out.I.size());
  out.count = out.counts.back();
  long pow3 = 1;
  for (long i = 0; i < out.I_size; ++i) pow3 *= 3;
  out.bound = out.C * pow3;
  out.survivors = set;
  return out;
}

template CoveringResult covering_count_experiment(const FlowSpec&, const Grid<double>&, double, double, long, long);
template CoveringResult covering_count_experiment(const FlowSpec&, const Grid<Rational>&, double, double, long, long);

}  // namespace spikelab
