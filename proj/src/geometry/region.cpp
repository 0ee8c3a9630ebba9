#include <algorithm>
#include <cmath>
#include <limits>

#include "spikelab/geometry.hpp"

namespace spikelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Interval clip(const Interval& a, const Interval& b) {
  Interval out;
  if (a.lo > b.lo) {
    out.lo = a.lo;
    out.lo_closed = a.lo_closed;
  } else if (a.lo < b.lo) {
    out.lo = b.lo;
    out.lo_closed = b.lo_closed;
  } else {
    out.lo = a.lo;
    out.lo_closed = a.lo_closed && b.lo_closed;
  }
  if (a.hi < b.hi) {
    out.hi = a.hi;
    out.hi_closed = a.hi_closed;
  } else if (a.hi > b.hi) {
    out.hi = b.hi;
    out.hi_closed = b.hi_closed;
  } else {
    out.hi = a.hi;
    out.hi_closed = a.hi_closed && b.hi_closed;
  }
  return out;
}

}  // namespace

IntervalSet IntervalSet::from(std::vector<Interval> parts) {
  std::erase_if(parts, [](const Interval& iv) { return iv.empty(); });
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.lo_closed && !b.lo_closed;
  });
  IntervalSet out;
  for (const auto& iv : parts) {
    if (!out.parts_.empty()) {
      Interval& cur = out.parts_.back();
      if (iv.lo < cur.hi || (iv.lo == cur.hi && (cur.hi_closed || iv.lo_closed))) {
        if (iv.hi > cur.hi) {
          cur.hi = iv.hi;
          cur.hi_closed = iv.hi_closed;
        } else if (iv.hi == cur.hi) {
          cur.hi_closed = cur.hi_closed || iv.hi_closed;
        }
        continue;
      }
    }
    out.parts_.push_back(iv);
  }
  return out;
}

bool IntervalSet::contains(double t) const {
  return std::any_of(parts_.begin(), parts_.end(), [t](const Interval& iv) { return iv.contains(t); });
}

double IntervalSet::measure() const {
  double m = 0.0;
  for (const auto& iv : parts_) m += iv.length();
  return m;
}

IntervalSet IntervalSet::intersect(const Interval& iv) const {
  std::vector<Interval> out;
  for (const auto& p : parts_) out.push_back(clip(p, iv));
  return from(out);
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<Interval> out;
  for (const auto& a : parts_)
    for (const auto& b : other.parts_) out.push_back(clip(a, b));
  return from(out);
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  return from(all);
}

IntervalSet IntervalSet::complement_in(double a, double b) const {
  IntervalSet inside = intersect(Interval::closed(a, b));
  std::vector<Interval> gaps;
  double cursor = a;
  bool cursor_closed = true;
  for (const auto& p : inside.parts_) {
    gaps.push_back({cursor, p.lo, cursor_closed, !p.lo_closed});
    cursor = p.hi;
    cursor_closed = !p.hi_closed;
  }
  gaps.push_back({cursor, b, cursor_closed, true});
  return from(gaps);
}

bool Box::contains(const Vec<double>& p) const {
  for (size_t j = 0; j < lo.size(); ++j)
    if (!(lo[j] < p[j] && p[j] < hi[j])) return false;
  return true;
}

BoxRegion::BoxRegion(std::vector<Box> boxes) : boxes_(std::move(boxes)) {
  if (boxes_.empty()) throw InvalidArgument("region needs at least one box");
  size_t d = boxes_.front().lo.size();
  for (const auto& b : boxes_) {
    if (b.lo.size() != d || b.hi.size() != d || d == 0) throw InvalidArgument("box dimension mismatch");
    for (size_t j = 0; j < d; ++j) {
      if (!(b.lo[j] < b.hi[j]) || !std::isfinite(b.lo[j]) || !std::isfinite(b.hi[j]))
        throw InvalidArgument("box needs finite l_j < u_j");
    }
  }
}

BoxRegion BoxRegion::ball(int d, double radius, const Vec<double>& center) {
  Box b;
  for (int j = 0; j < d; ++j) {
    double c = center.empty() ? 0.0 : center[j];
    b.lo.push_back(c - radius);
    b.hi.push_back(c + radius);
  }
  return BoxRegion({b});
}

bool BoxRegion::contains(const Vec<double>& p) const {
  return std::any_of(boxes_.begin(), boxes_.end(), [&](const Box& b) { return b.contains(p); });
}

Vec<double> BoxRegion::extent() const {
  Vec<double> m(dim(), 0.0);
  for (const auto& b : boxes_)
    for (int j = 0; j < dim(); ++j) m[j] = std::max({m[j], std::fabs(b.lo[j]), std::fabs(b.hi[j])});
  return m;
}

template <class T>
std::vector<LogCoord> log_coords(const Vec<T>& p) {
  std::vector<LogCoord> out(p.size());
  for (size_t j = 0; j < p.size(); ++j) {
    out[j].sign = sign_of(p[j]);
    out[j].log = out[j].sign == 0 ? -kInf : log_abs(p[j]);
  }
  return out;
}

template std::vector<LogCoord> log_coords(const Vec<double>&);
template std::vector<LogCoord> log_coords(const Vec<Rational>&);

IntervalSet hit_times(const FlowSpec& flow, const std::vector<LogCoord>& p, const BoxRegion& region) {
  if (static_cast<int>(p.size()) != flow.dim() || region.dim() != flow.dim())
    throw InvalidArgument("hit_times dimension mismatch");
  std::vector<Interval> parts;
  for (const auto& box : region.boxes()) {
    Interval acc = Interval::open(0.0, kInf);
    bool dead = false;
    for (int j = 0; j < flow.dim() && !dead; ++j) {
      double l = box.lo[j], u = box.hi[j];
      if (p[j].sign == 0) {
        dead = !(l < 0.0 && 0.0 < u);
        continue;
      }
      if (p[j].sign < 0) {
        std::swap(l, u);
        l = -l;
        u = -u;
      }
      if (u <= 0.0) {
        dead = true;
        continue;
      }
      double b = std::log(u) - p[j].log;
      double a = l > 0.0 ? std::log(l) - p[j].log : -kInf;
      double c = flow.c(j);
      Interval iv = c > 0 ? Interval::open(a / c, b / c) : Interval::open(b / c, a / c);
      acc = clip(acc, iv);
      dead = acc.empty();
    }
    if (!dead) parts.push_back(acc);
  }
  return IntervalSet::from(parts);
}

}  // namespace spikelab
