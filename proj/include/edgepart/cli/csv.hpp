#pragma once

#include "edgepart/sim.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace edgepart::cli {

inline constexpr std::string_view kSweepHeader =
    "rho_mean,t_prop,t_dou,t_doe,gain_dou,gain_doe,ci_prop,ci_dou,ci_doe,dou_fraction,flagged_trials";

/// Shortest of 9 significant digits, locale independent.
std::string format_number(double v);

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);
std::vector<SweepPoint> read_sweep_csv(std::istream& in);

} // namespace edgepart::cli
