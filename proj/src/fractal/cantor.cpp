#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "spikelab/fractal.hpp"

namespace spikelab {

namespace {

BigInt lcm_big(const BigInt& a, const BigInt& b) {
  BigInt out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

// sum over k = k0..k1 of floor(slope k + offset)
BigInt floor_linear_sum(const Rational& slope, const Rational& offset, const BigInt& k0, const BigInt& k1) {
  if (k1 < k0) return 0;
  BigInt m = lcm_big(slope.get_den(), offset.get_den());
  BigInt a = slope.get_num() * (m / slope.get_den());
  BigInt b = offset.get_num() * (m / offset.get_den());
  return floor_sum(k1 - k0 + 1, m, a, a * k0 + b);
}

BigInt ceil_linear_sum(const Rational& slope, const Rational& offset, const BigInt& k0, const BigInt& k1) {
  return -floor_linear_sum(-slope, -offset, k0, k1);
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

CantorApprox::CantorApprox(std::vector<ExcursionDatum> data, double node_budget)
    : data_(std::move(data)), budget_(node_budget) {
  if (data_.empty()) throw InsufficientDepth("no excursions");
  for (const auto& d : data_) {
    CantorLevel lv;
    lv.scale = 1 / d.exp_t;
    lv.spacing = d.ell * lv.scale;
    lv.radius = 2 * lv.scale;
    if (d.ell <= 4) throw EmptyIntersection("axis spacing does not exceed the excluded width");
    levels_.push_back(lv);
  }
  int n = depth();
  auto& first = levels_[0];
  auto [r0, r1] = children(0, 0);
  first.count = std::max<BigInt>(BigInt(0), r1 - r0 + 1);
  first.child_min = first.child_max = first.count;
  if (first.count == 0) throw EmptyIntersection("no B_1 component inside [0,1]");
  if (first.count.get_d() <= budget_) {
    std::vector<CantorInterval> lv;
    for (BigInt k = r0; k <= r1; ++k) lv.push_back({lo(1, k), hi(1, k), Rational(1) / Rational(first.count), k});
    intervals_.push_back(std::move(lv));
  }
  for (int i = 2; i <= n; ++i) {
    CantorLevel& cur = levels_[i - 1];
    int m = materialized();
    if (m >= i - 1) {
      // parents are listed: exact counts and child extremes
      std::vector<CantorInterval> next;
      bool keep = true;
      BigInt total = 0;
      bool first_parent = true;
      for (const auto& par : intervals_[i - 2]) {
        auto [c0, c1] = children(i - 1, par.index);
        BigInt c = std::max<BigInt>(BigInt(0), c1 - c0 + 1);
        total += c;
        if (first_parent || c < cur.child_min) cur.child_min = c;
        if (first_parent || c > cur.child_max) cur.child_max = c;
        first_parent = false;
        if (keep && total.get_d() > budget_) {
          keep = false;
          next.clear();
        }
        if (keep && c > 0) {
          Rational w = par.weight / Rational(c);
          for (BigInt k = c0; k <= c1; ++k) next.push_back({lo(i, k), hi(i, k), w, k});
        }
      }
      cur.count = total;
      if (keep) intervals_.push_back(std::move(next));
    } else if (m >= i - 2) {
      BigInt total = 0;
      for (const auto& g : intervals_[i - 3]) {
        auto [p0, p1] = children(i - 2, g.index);
        total += child_count_sum(i - 1, p0, p1);
      }
      cur.count = total;
      const CantorLevel& par = levels_[i - 2];
      Rational spread = (par.spacing - 2 * par.radius + 2 * cur.radius) / cur.spacing;
      BigInt f = floor_big(spread);
      cur.child_min = std::max<BigInt>(BigInt(0), f - 1);
      cur.child_max = f;
      cur.child_range_exact = false;
    } else {
      throw BudgetExceeded("component count at level " + std::to_string(i) + " exceeds the node budget");
    }
    if (cur.count == 0) throw EmptyIntersection("B_" + std::to_string(i) + " removes every component");
  }
}

Rational CantorApprox::lo(int level, const BigInt& k) const {
  const auto& lv = levels_.at(level - 1);
  return Rational(k) * lv.spacing + lv.radius;
}

Rational CantorApprox::hi(int level, const BigInt& k) const {
  const auto& lv = levels_.at(level - 1);
  return Rational(k + 1) * lv.spacing - lv.radius;
}

std::pair<Rational, Rational> CantorApprox::parent_bounds(int level, const BigInt& k) const {
  if (level == 0) return {Rational(0), Rational(1)};
  return {lo(level, k), hi(level, k)};
}

std::pair<BigInt, BigInt> CantorApprox::children(int level, const BigInt& k) const {
  const auto& ch = levels_.at(level);
  auto [a, b] = parent_bounds(level, k);
  return {ceil_big((a - ch.radius) / ch.spacing), floor_big((b + ch.radius) / ch.spacing) - 1};
}

BigInt CantorApprox::child_count(int level, const BigInt& k) const {
  auto [c0, c1] = children(level, k);
  return std::max<BigInt>(BigInt(0), c1 - c0 + 1);
}

BigInt CantorApprox::child_count_sum(int level, const BigInt& k0, const BigInt& k1) const {
  if (k1 < k0) return 0;
  if (level == 0) return child_count(0, 0) * (k1 - k0 + 1);
  const auto& par = levels_.at(level - 1);
  const auto& ch = levels_.at(level);
  Rational slope = par.spacing / ch.spacing;
  // every count is floor(Y) - ceil(X) > Y - X - 2, nonnegative once Y - X >= 1
  Rational width = (par.spacing - 2 * par.radius + 2 * ch.radius) / ch.spacing;
  if (width < 1) {
    BigInt total = 0;
    for (BigInt k = k0; k <= k1; ++k) total += child_count(level, k);
    return total;
  }
  Rational x_off = (par.radius - ch.radius) / ch.spacing;
  Rational y_off = (par.spacing - par.radius + ch.radius) / ch.spacing;
  return floor_linear_sum(slope, y_off, k0, k1) - ceil_linear_sum(slope, x_off, k0, k1);
}

Rational CantorApprox::ball_mass(const Rational& x, const Rational& r) const {
  if (r < 0) throw InvalidArgument("negative radius");
  const Rational A = x - r, B = x + r;
  int n = depth();
  std::function<Rational(int, const BigInt&, const BigInt&, const Rational&)> mass;
  mass = [&](int level, const BigInt& k0, const BigInt& k1, const Rational& w) -> Rational {
    if (k1 < k0) return Rational(0);
    const auto& lv = levels_[level - 1];
    BigInt f0 = std::max<BigInt>(k0, ceil_big((A - lv.radius) / lv.spacing));
    BigInt f1 = std::min<BigInt>(k1, floor_big((B + lv.radius) / lv.spacing) - 1);
    Rational total(0);
    if (f1 >= f0) total += Rational(f1 - f0 + 1) * w;
    BigInt cand[2] = {floor_big(A / lv.spacing), floor_big(B / lv.spacing)};
    for (int c = 0; c < 2; ++c) {
      const BigInt& k = cand[c];
      if (c == 1 && k == cand[0]) continue;
      if (k < k0 || k > k1 || (k >= f0 && k <= f1)) continue;
      Rational a = lo(level, k), b = hi(level, k);
      if (!(b > A && a < B)) continue;
      if (level == n) {
        total += w * (std::min(b, B) - std::max(a, A)) / (b - a);
      } else {
        auto [c0, c1] = children(level, k);
        BigInt cnt = c1 - c0 + 1;
        if (cnt > 0) total += mass(level + 1, c0, c1, w / Rational(cnt));
      }
    }
    return total;
  };
  auto [r0, r1] = children(0, 0);
  return mass(1, r0, r1, Rational(1) / Rational(levels_[0].count));
}

Rational CantorApprox::point_near(const Rational& u, std::uint64_t seed) const {
  BigInt k0, k1;
  std::tie(k0, k1) = children(0, 0);
  BigInt k;
  for (int level = 1; level <= depth(); ++level) {
    const auto& lv = levels_[level - 1];
    k = std::clamp(floor_big(u / lv.spacing), k0, k1);
    if (level < depth()) std::tie(k0, k1) = children(level, k);
    if (k1 < k0) throw EmptyIntersection("component without children");
  }
  std::uint64_t m = mix(seed) >> 32;
  // (m + 1) / (2^32 + 1) lies strictly inside (0, 1)
  Rational frac = make_rational(BigInt(static_cast<unsigned long>(m + 1)), BigInt("4294967297"));
  Rational a = lo(depth(), k), b = hi(depth(), k);
  return a + (b - a) * frac;
}

BigInt CantorApprox::box_count_aligned(int level, const Rational& delta, bool& ok) const {
  const auto& lv = levels_[level - 1];
  Rational s = lv.spacing / delta, r = lv.radius / delta;
  Rational margin(0);
  for (int j = level + 1; j <= depth(); ++j) margin += levels_[j - 1].spacing;
  ok = s.get_den() == 1 && r.get_den() == 1 && margin < delta;
  if (!ok) return 0;
  return lv.count * (s.get_num() - 2 * r.get_num());
}

BigInt CantorApprox::box_count_walk(int level, const Rational& delta) const {
  if (level > materialized()) throw BudgetExceeded("box count needs components beyond the node budget");
  BigInt total = 0;
  BigInt last = 0;
  bool any = false;
  for (const auto& iv : intervals_[level - 1]) {
    // hull of the depth-n descendants
    BigInt a = iv.index, b = iv.index;
    for (int j = level; j < depth(); ++j) {
      a = children(j, a).first;
      b = children(j, b).second;
    }
    Rational A = lo(depth(), a), B = hi(depth(), b);
    BigInt m0 = floor_big(A / delta);
    BigInt m1 = ceil_big(B / delta) - 1;
    if (any && m0 <= last) m0 = last + 1;
    if (m1 >= m0) total += m1 - m0 + 1;
    if (!any || m1 > last) last = m1;
    any = true;
  }
  return total;
}

BigInt CantorApprox::box_count(const Rational& delta) const {
  if (delta <= 0) throw InvalidArgument("box side must be positive");
  int n = depth();
  // coarsest level whose descendants leave no gap of length delta
  int level = n;
  for (int i = 1; i < n; ++i) {
    Rational gap(0);
    for (int j = i + 1; j <= n; ++j) {
      Rational tail(0);
      for (int l = j + 1; l <= n; ++l) tail += levels_[l - 1].spacing;
      gap = std::max<Rational>(gap, 2 * levels_[j - 1].radius + 2 * tail);
    }
    if (gap < delta) {
      level = i;
      break;
    }
  }
  bool ok = false;
  BigInt aligned = box_count_aligned(level, delta, ok);
  if (ok) return aligned;
  return box_count_walk(level, delta);
}

CantorApprox bad_interval_sets(const CFLattice& cf, int depth, double node_budget) {
  return CantorApprox(excursion_data(cf, depth), node_budget);
}

}  // namespace spikelab
