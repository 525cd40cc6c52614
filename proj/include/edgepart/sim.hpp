#pragma once

#include "edgepart/allocator.hpp"
#include "edgepart/channel.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace edgepart {

struct SweepSpec {
    ScenarioConfig scenario;
    std::vector<double> rho_grid;
    int trials = 5000;
    SolverConfig solver;
};

void validate_sweep(const SweepSpec& spec);

/// Parses `lo:hi:step` into an inclusive, strictly increasing grid.
std::vector<double> parse_rho_grid(std::string_view text);

/// One instance solved three ways. Latencies are beta-weighted means over UEs.
struct TrialOutcome {
    double t_prop = 0.0;
    double t_dou = 0.0;
    double t_doe = 0.0;
    int dou_ues = 0; ///< UEs for which the threshold rule picked DoU under the adaptive allocation
    int ues = 0;
    bool flagged = false; ///< some solve did not converge
};

TrialOutcome run_trial(const ScenarioConfig& scenario, std::uint64_t trial_index,
                       const SolverConfig& solver);

struct SweepPoint {
    double rho_mean = 0.0;
    double t_prop = 0.0;
    double t_dou = 0.0;
    double t_doe = 0.0;
    double gain_dou = 0.0; ///< 1 - t_prop / t_dou
    double gain_doe = 0.0;
    double ci_prop = 0.0;  ///< 95% half-widths of the means
    double ci_dou = 0.0;
    double ci_doe = 0.0;
    double dou_fraction = 0.0;
    int flagged_trials = 0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    int trials_per_point = 0;

    int flagged_total() const;
    /// More than 0.1% of all trials flagged.
    bool exceeds_flag_budget() const;
};

/// Trials run on `threads` workers; the reduction is in trial-index order, so
/// the result does not depend on the thread count. Every grid point reuses the
/// same trial indices (common random numbers across rho).
SweepResult run_sweep(const SweepSpec& spec, int threads = 1);

/// Thread count from EDGEPART_THREADS, defaulting to the hardware concurrency.
int threads_from_env();

struct InflectionEstimate {
    double rho_star = 0.0;
    double rho_lo = 0.0;
    double rho_hi = 0.0;
    bool defined = false;
};

/// First sign change of (t_dou - t_doe) between adjacent grid points, located
/// by linear interpolation.
InflectionEstimate estimate_inflection(std::span<const double> rho, std::span<const double> diff);
InflectionEstimate estimate_inflection(const SweepResult& result);

} // namespace edgepart
