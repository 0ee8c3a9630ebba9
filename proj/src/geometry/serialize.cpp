#include "spikelab/serialize.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

namespace spikelab {

std::string scalar_string(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return to_decimal_string(x);
}

std::string scalar_string(const Rational& x) { return to_decimal_string(x); }

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    // "p/q" forms
    return parse_rational(s).get_d();
  }
  return v;
}

namespace {

template <class T>
T parse_scalar(const Json& j) {
  std::string s = j.is_string() ? j.get<std::string>() : j.dump();
  if constexpr (std::is_same_v<T, double>) {
    return parse_double(s);
  } else {
    return parse_rational(s);
  }
}

template <class T>
Json vector_json(const Vec<T>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(scalar_string(x));
  return a;
}

template <class T>
Vec<T> vector_from(const Json& j) {
  Vec<T> v;
  for (const auto& x : j) v.push_back(parse_scalar<T>(x));
  return v;
}

}  // namespace

Json to_json(const FlowSpec& flow) {
  Json c = Json::array();
  for (double x : flow.exponents()) c.push_back(scalar_string(x));
  return Json{{"c", c}};
}

FlowSpec flow_from_json(const Json& j) { return FlowSpec(vector_from<double>(j.at("c"))); }

template <class T>
Json to_json(const Lattice<T>& x) {
  Json cols = Json::array();
  for (const auto& col : x.basis().cols) cols.push_back(vector_json(col));
  return Json{{"kind", ScalarTraits<T>::name()}, {"d", x.dim()}, {"columns", cols}};
}

template <class T>
Lattice<T> lattice_from_json(const Json& j) {
  if (j.contains("kind") && j.at("kind").get<std::string>() != ScalarTraits<T>::name())
    throw InvalidArgument("lattice scalar kind mismatch");
  const Json& cols = j.at("columns");
  Matrix<T> m(static_cast<int>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c) m.cols[c] = vector_from<T>(cols[c]);
  return Lattice<T>(m);
}

template <class T>
Json to_json(const Grid<T>& y) {
  return Json{{"lattice", to_json(y.lattice())}, {"offset", vector_json(y.offset())}};
}

template <class T>
Grid<T> grid_from_json(const Json& j) {
  return Grid<T>(lattice_from_json<T>(j.at("lattice")), vector_from<T>(j.at("offset")));
}

Json to_json(const BoxRegion& region) {
  Json boxes = Json::array();
  for (const auto& b : region.boxes()) boxes.push_back(Json{{"lo", vector_json(b.lo)}, {"hi", vector_json(b.hi)}});
  return Json{{"boxes", boxes}};
}

BoxRegion region_from_json(const Json& j) {
  std::vector<Box> boxes;
  for (const auto& b : j.at("boxes")) boxes.push_back(Box{vector_from<double>(b.at("lo")), vector_from<double>(b.at("hi"))});
  return BoxRegion(boxes);
}

Json to_json(const IntervalSet& s) {
  Json a = Json::array();
  for (const auto& iv : s.parts())
    a.push_back(Json{{"lo", scalar_string(iv.lo)},
                     {"hi", scalar_string(iv.hi)},
                     {"lo_closed", iv.lo_closed},
                     {"hi_closed", iv.hi_closed}});
  return a;
}

IntervalSet interval_set_from_json(const Json& j) {
  std::vector<Interval> parts;
  for (const auto& iv : j)
    parts.push_back({parse_scalar<double>(iv.at("lo")), parse_scalar<double>(iv.at("hi")), iv.at("lo_closed").get<bool>(),
                     iv.at("hi_closed").get<bool>()});
  return IntervalSet::from(parts);
}

template Json to_json(const Lattice<double>&);
template Json to_json(const Lattice<Rational>&);
template Json to_json(const Grid<double>&);
template Json to_json(const Grid<Rational>&);
template Lattice<double> lattice_from_json(const Json&);
template Lattice<Rational> lattice_from_json(const Json&);
template Grid<double> grid_from_json(const Json&);
template Grid<Rational> grid_from_json(const Json&);

}  // namespace spikelab
