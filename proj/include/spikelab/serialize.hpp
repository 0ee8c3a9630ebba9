#pragma once

#include <json.hpp>

#include "spikelab/geometry.hpp"

namespace spikelab {

using Json = nlohmann::ordered_json;

Json to_json(const FlowSpec& flow);
FlowSpec flow_from_json(const Json& j);

template <class T>
Json to_json(const Lattice<T>& x);
template <class T>
Json to_json(const Grid<T>& y);
template <class T>
Lattice<T> lattice_from_json(const Json& j);
template <class T>
Grid<T> grid_from_json(const Json& j);

Json to_json(const BoxRegion& region);
BoxRegion region_from_json(const Json& j);

Json to_json(const IntervalSet& s);
IntervalSet interval_set_from_json(const Json& j);

// decimal strings; exact for rationals
std::string scalar_string(double x);
std::string scalar_string(const Rational& x);
double parse_double(const std::string& s);

}  // namespace spikelab
