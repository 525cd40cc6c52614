#pragma once

#include "edgepart/sim.hpp"

#include <string>
#include <vector>

namespace edgepart::cli {

/// Gain-versus-rho chart: one polyline per baseline, axis labels, and a single
/// marker at the interpolated crossing of t_dou and t_doe (omitted if none).
std::string render_gain_svg(const std::vector<SweepPoint>& points);

} // namespace edgepart::cli
