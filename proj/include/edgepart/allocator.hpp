#pragma once

#include "edgepart/model.hpp"

#include <cstdint>
#include <vector>

namespace edgepart {

struct SolverConfig {
    int max_iters = 500;        ///< Newton iterations per solve, summed over barrier stages
    double tol = 1e-6;          ///< relative objective tolerance of the final barrier stage
    double barrier_init = 1e-2;
    double barrier_shrink = 0.1;
    std::uint64_t seed = 0;     ///< restart perturbations
    int restarts = 3;           ///< equal share plus restarts-1 perturbed starts
};

void validate_solver_config(const SolverConfig& cfg);

/// Per-UE latency term being minimized.
enum class Policy {
    Adaptive, ///< trapezoid-weighted estimate of the dynamic scheme
    DoUOnly,
    DoEOnly,
};

struct UeOutcome {
    PartitionDecision decision;
    LatencyReport latency;
};

struct AllocationResult {
    Allocation allocation;
    double objective = 0.0; ///< (1/M) sum beta_i t_i at the returned allocation
    std::vector<UeOutcome> per_ue;
    bool converged = false;
    int iterations = 0;
};

/// (1/M) sum beta_i t_tilde_i. Throws ValidationError on an infeasible allocation.
double objective_p2(const Instance& instance, const Allocation& alloc);
double objective(const Instance& instance, const Allocation& alloc, Policy policy);

/// Exact partial derivatives of objective(), laid out like the allocation.
Allocation objective_gradient(const Instance& instance, const Allocation& alloc, Policy policy);

/// Decisions and latencies per UE. Adaptive uses the threshold rule;
/// the static policies force the scheme.
std::vector<UeOutcome> evaluate_ues(const Instance& instance, const Allocation& alloc,
                                    Policy policy);

/// sum beta_i t_star_i for Adaptive, sum beta_i t_u_i / t_e_i for the static policies.
double weighted_latency(const Instance& instance, const std::vector<UeOutcome>& per_ue,
                        Policy policy);

AllocationResult solve(const Instance& instance, const SolverConfig& cfg, Policy policy);
AllocationResult solve_p2(const Instance& instance, const SolverConfig& cfg = {});
AllocationResult solve_static(const Instance& instance, const SolverConfig& cfg, Scheme scheme);

/// Integer RB counts: floor (at least 1), then hand out the RBs lost to
/// flooring one at a time to the UE with the largest objective decrease.
Allocation round_rbs(const Instance& instance, const Allocation& alloc);
Allocation round_rbs(const Instance& instance, const Allocation& alloc, Policy policy);

} // namespace edgepart
