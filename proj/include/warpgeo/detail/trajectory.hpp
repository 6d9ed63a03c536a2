#pragma once

#include <functional>
#include <string>
#include <vector>

#include "warpgeo/geodesic.hpp"

namespace warpgeo::detail {

// Maps an integrator state and its derivative to (x, v, acceleration) in full
// chart coordinates.
using Reassemble = std::function<void(const Vec& y, const Vec& dydt, Vec& x, Vec& v, Vec& a)>;
using Monitors = std::function<void(const GeodesicState& s, std::vector<double>& out)>;

Trajectory run_recorded(const ode::Rhs& rhs, const Vec& y0, double t0, double t1, const ode::Options& opts,
                        const Reassemble& reassemble, std::vector<std::string> monitor_names,
                        const Monitors& monitors);

}  // namespace warpgeo::detail
