#pragma once

#include "edgepart/hyperdual.hpp"
#include "edgepart/model.hpp"

#include <span>
#include <stdexcept>

namespace edgepart {

// Two-server view of one UE: the primary ES plus one (possibly effective)
// secondary ES. For more than one secondary, build it via two_server_view().
struct UeLink {
    double r_p = 0.0;   ///< per-RB rate to the primary ES
    double r_s = 0.0;   ///< per-RB rate to the secondary ES
    double big_r = 0.0; ///< forwarding link rate
};

struct UeShare {
    double n = 0.0;   ///< resource blocks
    double f_p = 0.0; ///< primary CPU share
    double f_s = 0.0; ///< secondary CPU share
};

struct SchemeWeights {
    double w_u = 0.0;
    double w_e = 0.0;
    double s_u = 0.0;
    double s_e = 0.0;
};

struct GenericReduction {
    double lambda_s_u = 1.0;
    double lambda_s_e = 1.0;
    double f_s_eff = 0.0;
    double r_s_eff = 0.0;
};

/// Raised when the multi-secondary reduction has a non-positive denominator.
class ReductionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Latency of partitioning on the UE: the primary share is sent first, then
// the secondary share, over the same n RBs.
double latency_dou(const TaskSpec& task, const UeLink& link, const UeShare& share, double lambda);
// Latency of partitioning on the primary ES: the whole task goes up, then
// the secondary share is forwarded at rate R.
double latency_doe(const TaskSpec& task, const UeLink& link, const UeShare& share, double lambda);

double opt_lambda_dou(const TaskSpec& task, const UeLink& link, const UeShare& share);
double opt_lambda_doe(const TaskSpec& task, const UeLink& link, const UeShare& share);
double min_latency_dou(const TaskSpec& task, const UeLink& link, const UeShare& share);
double min_latency_doe(const TaskSpec& task, const UeLink& link, const UeShare& share);

/// eta = f_p/(alpha R) + f_p/f_s + 1
double threshold_factor(const TaskSpec& task, const UeLink& link, const UeShare& share);

/// DoU iff n r_s/R + eta r_s/r_p - 1 >= 0. Ties go to DoU.
PartitionDecision theorem1_select(const TaskSpec& task, const UeLink& link, const UeShare& share);

/// Trapezoid weights; n r_s/R is clamped into [0, 1] here only.
SchemeWeights scheme_weights(const UeLink& link, const UeShare& share, double eta);

LatencyReport estimated_latency(const TaskSpec& task, const UeLink& link, const UeShare& share);

/// Collapses N secondaries (sequential offload in index order) into one
/// effective secondary. N = 1 returns the inputs unchanged.
GenericReduction reduce_generic(const TaskSpec& task, const ChannelState& chan, double n,
                                std::span<const double> f_s);

struct TwoServerView {
    UeLink link;
    UeShare share;
    GenericReduction reduction;
};

TwoServerView two_server_view(const TaskSpec& task, const ChannelState& chan, double n,
                              double f_p, std::span<const double> f_s);

namespace detail {

// Scalar-generic kernels shared by the public functions above and by the
// allocator's derivative evaluation (T = double or HyperDual).

template <class T>
inline T clamp_unit(const T& x)
{
    if (value_of(x) < 0.0)
        return T(0.0);
    if (value_of(x) > 1.0)
        return T(1.0);
    return x;
}

template <class T>
struct Reduced {
    T lambda_s_u{1.0};
    T lambda_s_e{1.0};
    T f_s_eff{0.0};
    T r_s_eff{0.0};
    bool ok = true;
};

template <class T>
Reduced<T> reduce(double alpha, double big_r, const T& n, std::span<const double> r_s,
                  std::span<const T> f_s)
{
    Reduced<T> out;
    const auto count = f_s.size();
    if (count == 1) {
        out.f_s_eff = f_s[0];
        out.r_s_eff = T(r_s[0]);
        return out;
    }
    const double inv_r = 1.0 / big_r;
    // sum_j prod_{k<j} a_k / prod_{1<=k<=j} (c_k + a_k), with the j = 0 term equal to 1
    T sum_u(1.0), sum_e(1.0), term_u(1.0), term_e(1.0);
    for (std::size_t j = 1; j < count; ++j) {
        const T a_prev = alpha / f_s[j - 1];
        const T a_j = alpha / f_s[j];
        term_u = term_u * a_prev / (1.0 / (n * r_s[j]) + a_j);
        term_e = term_e * a_prev / (inv_r + a_j);
        sum_u = sum_u + term_u;
        sum_e = sum_e + term_e;
    }
    out.lambda_s_u = 1.0 / sum_u;
    out.lambda_s_e = 1.0 / sum_e;
    const T a0 = alpha / f_s[0];
    const T den_f = out.lambda_s_e * (inv_r + a0) - inv_r;
    if (!(value_of(den_f) > 0.0)) {
        out.ok = false;
        return out;
    }
    out.f_s_eff = alpha / den_f;
    const T den_r = out.lambda_s_u * (1.0 / r_s[0] + n * a0) - n * alpha / out.f_s_eff;
    if (!(value_of(den_r) > 0.0)) {
        out.ok = false;
        return out;
    }
    out.r_s_eff = 1.0 / den_r;
    return out;
}

template <class T>
struct ClosedForms {
    T lambda_u, lambda_e;
    T t_u, t_e;
    T eta;
    T w_e;
    T t_tilde;
};

template <class T>
ClosedForms<T> closed_forms(double b, double alpha, double r_p, double big_r, const T& n,
                            const T& f_p, const T& r_s, const T& f_s)
{
    ClosedForms<T> c;
    const T tx_p = 1.0 / (n * r_p);
    const T comp_p = alpha / f_p;
    const T sec_u = 1.0 / (n * r_s) + alpha / f_s;
    const T sec_e = 1.0 / big_r + alpha / f_s;
    c.lambda_u = sec_u / (sec_u + comp_p);
    c.lambda_e = sec_e / (sec_e + comp_p);
    c.t_u = b * (tx_p + comp_p) * c.lambda_u;
    c.t_e = b * (tx_p + comp_p * c.lambda_e);
    c.eta = f_p / (alpha * big_r) + f_p / f_s + 1.0;
    const T ratio = clamp_unit(T(n * r_s / big_r));
    c.w_e = (2.0 - ratio) / (2.0 * c.eta);
    c.t_tilde = (1.0 - c.w_e) * c.t_u + c.w_e * c.t_e;
    return c;
}

} // namespace detail

} // namespace edgepart
