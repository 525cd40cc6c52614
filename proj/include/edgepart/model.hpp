#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace edgepart {

// Units everywhere: bits, cycles/bit, bits/s, cycles/s, seconds.

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One UE's computation task.
struct TaskSpec {
    double b = 0.0;     ///< input size, bits
    double alpha = 0.0; ///< computation intensity, cycles/bit
    double beta = 0.0;  ///< priority weight
};

struct SystemConfig {
    int n_rb = 100;
    double f_p_total = 0.0;
    std::vector<double> f_s_total; ///< one capacity per secondary ES
    int num_secondary = 1;
    double rb_bandwidth_hz = 180e3;
};

/// Per-RB uplink rates and the primary-to-secondary forwarding rate of one UE.
struct ChannelState {
    double r_p = 0.0;
    std::vector<double> r_s; ///< one per secondary ES
    double big_r = 0.0;
};

/// Resource shares for all UEs. `f_s[i][j]` is UE i's share of secondary ES j.
struct Allocation {
    std::vector<double> n;
    std::vector<double> f_p;
    std::vector<std::vector<double>> f_s;

    std::size_t size() const { return n.size(); }
};

enum class Scheme { DoU, DoE };

const char* to_string(Scheme s);

struct PartitionDecision {
    int x = 1;             ///< 1 = DoU, 0 = DoE
    double lambda = 0.0;   ///< fraction of the task computed at the primary ES
    double eta = 1.0;
    double indicator = 0.0;

    Scheme scheme() const { return x == 1 ? Scheme::DoU : Scheme::DoE; }
};

struct LatencyReport {
    double t_u = 0.0;
    double t_e = 0.0;
    double t_star = 0.0;
    double t_tilde = 0.0;
};

struct Instance {
    std::vector<TaskSpec> tasks;
    std::vector<ChannelState> channels;
    SystemConfig system;

    std::size_t size() const { return tasks.size(); }
};

/// Throws ValidationError naming the first violated invariant; returns the
/// instance unchanged otherwise.
const Instance& validate_instance(const Instance& instance);
Instance validate_instance(std::vector<TaskSpec> tasks, std::vector<ChannelState> channels,
                           SystemConfig cfg);

/// Sets every beta to 1/M.
void assign_uniform_beta(std::vector<TaskSpec>& tasks);

/// Equal split of every budget: n = N_rb/M, f_p = F_p/M, f_s[j] = F_s[j]/M.
Allocation equal_share(const Instance& instance);

/// True when all entries are positive and every budget sum is respected
/// (with `slack` relative tolerance on the sums).
bool is_feasible(const Instance& instance, const Allocation& alloc, double slack = 0.0);

} // namespace edgepart
