#include "edgepart/allocator.hpp"

#include "edgepart/hyperdual.hpp"
#include "edgepart/partition.hpp"
#include "edgepart/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

namespace edgepart {

void validate_solver_config(const SolverConfig& c)
{
    if (c.max_iters < 1)
        throw ValidationError("solver: max_iters must be >= 1");
    if (!(c.tol > 0.0))
        throw ValidationError("solver: tol must be positive");
    if (!(c.barrier_init > 0.0))
        throw ValidationError("solver: barrier_init must be positive");
    if (!(c.barrier_shrink > 0.0 && c.barrier_shrink < 1.0))
        throw ValidationError("solver: barrier_shrink must be in (0, 1)");
    if (c.restarts < 1)
        throw ValidationError("solver: restarts must be >= 1");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class T>
T ue_term(const TaskSpec& t, const ChannelState& c, Policy p, const T& n, const T& f_p,
          std::span<const T> f_s)
{
    const auto red = detail::reduce<T>(t.alpha, c.big_r, n, c.r_s, f_s);
    if (!red.ok)
        return T(kInf);
    const auto cf =
        detail::closed_forms<T>(t.b, t.alpha, c.r_p, c.big_r, n, f_p, red.r_s_eff, red.f_s_eff);
    switch (p) {
    case Policy::DoUOnly: return cf.t_u;
    case Policy::DoEOnly: return cf.t_e;
    case Policy::Adaptive: break;
    }
    return cf.t_tilde;
}

double ue_cost(const Instance& in, std::size_t i, Policy p, double n, double f_p,
               std::span<const double> f_s)
{
    return in.tasks[i].beta * ue_term<double>(in.tasks[i], in.channels[i], p, n, f_p, f_s);
}

double total_cost(const Instance& in, const Allocation& a, Policy p)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i)
        sum += ue_cost(in, i, p, a.n[i], a.f_p[i], a.f_s[i]);
    return sum / static_cast<double>(in.size());
}

// Log-barrier Newton method on budget fractions x[i][k] in (0, 1):
//   k = 0: RBs, k = 1: primary CPU, k = 2 + j: CPU of secondary j.
// Free columns carry positivity barriers and a sum(x[.][k]) < 1 barrier;
// fixed columns keep the values of the starting point.
class BarrierSolver {
public:
    BarrierSolver(const Instance& in, Policy policy, std::vector<int> free_cols, double norm)
        : in_(in), policy_(policy), m_(in.size()), k_(2 + in.system.f_s_total.size()),
          cols_(std::move(free_cols)), f_(cols_.size()), inv_norm_(1.0 / norm),
          fs_buf_(k_ - 2), hd_buf_(k_)
    {
        budget_.push_back(static_cast<double>(in.system.n_rb));
        budget_.push_back(in.system.f_p_total);
        for (double f : in.system.f_s_total)
            budget_.push_back(f);
        weight_.reserve(m_);
        for (const auto& t : in.tasks)
            weight_.push_back(t.beta / static_cast<double>(m_));
    }

    struct Outcome {
        std::vector<double> x;
        int iterations = 0;
        bool converged = false;
    };

    double final_barrier(const SolverConfig& cfg) const
    {
        return cfg.tol / static_cast<double>(m_ * f_ + f_);
    }

    // Follows the central path from mu_start (barrier_init by default) down to
    // the final weight, where barrier terms * mu <= tol.
    Outcome run(std::vector<double> x, const SolverConfig& cfg, double mu_start = 0.0)
    {
        Outcome out;
        const double barrier_terms = static_cast<double>(m_ * f_ + f_);
        double mu = mu_start > 0.0 ? mu_start : cfg.barrier_init;
        const double stop = 1e-3 * cfg.tol;
        bool budget_left = true;
        for (;;) {
            budget_left = newton_stage(x, mu, stop, cfg.max_iters, out.iterations);
            if (!budget_left || mu * barrier_terms <= cfg.tol)
                break;
            mu *= cfg.barrier_shrink;
        }
        out.converged = budget_left;
        out.x = std::move(x);
        return out;
    }

    Allocation to_allocation(const std::vector<double>& x) const
    {
        Allocation a;
        a.n.resize(m_);
        a.f_p.resize(m_);
        a.f_s.assign(m_, std::vector<double>(k_ - 2));
        for (std::size_t i = 0; i < m_; ++i) {
            a.n[i] = x[i * k_] * budget_[0];
            a.f_p[i] = x[i * k_ + 1] * budget_[1];
            for (std::size_t j = 0; j + 2 < k_; ++j)
                a.f_s[i][j] = x[i * k_ + 2 + j] * budget_[2 + j];
        }
        return a;
    }

    std::vector<double> to_fractions(const Allocation& a) const
    {
        std::vector<double> x(m_ * k_);
        for (std::size_t i = 0; i < m_; ++i) {
            x[i * k_] = a.n[i] / budget_[0];
            x[i * k_ + 1] = a.f_p[i] / budget_[1];
            for (std::size_t j = 0; j + 2 < k_; ++j)
                x[i * k_ + 2 + j] = a.f_s[i][j] / budget_[2 + j];
        }
        return x;
    }

private:
    double ue_value(std::size_t i, const double* xi)
    {
        for (std::size_t j = 0; j + 2 < k_; ++j)
            fs_buf_[j] = xi[2 + j] * budget_[2 + j];
        const double t = ue_term<double>(in_.tasks[i], in_.channels[i], policy_, xi[0] * budget_[0],
                                         xi[1] * budget_[1], fs_buf_);
        return weight_[i] * t * inv_norm_;
    }

    // Gradient and Hessian of one UE's scaled term over the free columns.
    void ue_derivs(std::size_t i, const double* xi, Eigen::VectorXd& g, Eigen::MatrixXd& h)
    {
        const double scale = weight_[i] * inv_norm_;
        for (std::size_t a = 0; a < f_; ++a) {
            for (std::size_t b = a; b < f_; ++b) {
                for (std::size_t k = 0; k < k_; ++k)
                    hd_buf_[k] = HyperDual(xi[k] * budget_[k]);
                const auto ca = static_cast<std::size_t>(cols_[a]);
                const auto cb = static_cast<std::size_t>(cols_[b]);
                hd_buf_[ca].a = budget_[ca];
                hd_buf_[cb].b = budget_[cb];
                const HyperDual t = ue_term<HyperDual>(
                    in_.tasks[i], in_.channels[i], policy_, hd_buf_[0], hd_buf_[1],
                    std::span<const HyperDual>(hd_buf_).subspan(2));
                if (a == b)
                    g(a) = t.a * scale;
                h(a, b) = h(b, a) = t.ab * scale;
            }
        }
    }

    double column_slack(const std::vector<double>& x, std::size_t k) const
    {
        double s = 1.0;
        for (std::size_t i = 0; i < m_; ++i)
            s -= x[i * k_ + k];
        return s;
    }

    double merit(const std::vector<double>& x, double mu)
    {
        double log_sum = 0.0;
        for (int c : cols_) {
            const auto k = static_cast<std::size_t>(c);
            const double s = column_slack(x, k);
            if (!(s > 0.0))
                return kInf;
            log_sum += std::log(s);
            for (std::size_t i = 0; i < m_; ++i) {
                const double v = x[i * k_ + k];
                if (!(v > 0.0))
                    return kInf;
                log_sum += std::log(v);
            }
        }
        double obj = 0.0;
        for (std::size_t i = 0; i < m_; ++i)
            obj += ue_value(i, &x[i * k_]);
        if (!std::isfinite(obj))
            return kInf;
        return obj - mu * log_sum;
    }

    // Returns false when the iteration budget ran out.
    bool newton_stage(std::vector<double>& x, double mu, double stop, int max_iters, int& iterations)
    {
        const std::size_t dim = m_ * f_;
        Eigen::VectorXd grad(dim), step(dim), gi(f_);
        Eigen::MatrixXd hess(dim, dim), hi(f_, f_);
        std::vector<double> slack(f_);
        std::vector<double> trial(x.size());
        double phi = merit(x, mu);

        for (;;) {
            if (iterations >= max_iters)
                return false;
            ++iterations;

            hess.setZero();
            for (std::size_t a = 0; a < f_; ++a)
                slack[a] = column_slack(x, static_cast<std::size_t>(cols_[a]));
            for (std::size_t i = 0; i < m_; ++i) {
                ue_derivs(i, &x[i * k_], gi, hi);
                for (std::size_t a = 0; a < f_; ++a) {
                    const double v = x[i * k_ + static_cast<std::size_t>(cols_[a])];
                    grad(i * f_ + a) = gi(a) - mu / v + mu / slack[a];
                    for (std::size_t b = 0; b < f_; ++b)
                        hess(i * f_ + a, i * f_ + b) = hi(a, b);
                    hess(i * f_ + a, i * f_ + a) += mu / (v * v);
                }
            }
            for (std::size_t a = 0; a < f_; ++a) {
                const double c = mu / (slack[a] * slack[a]);
                for (std::size_t i = 0; i < m_; ++i)
                    for (std::size_t j = 0; j < m_; ++j)
                        hess(i * f_ + a, j * f_ + a) += c;
            }

            // Modified Newton: shift the diagonal until the matrix is positive definite.
            Eigen::LLT<Eigen::MatrixXd> llt(hess);
            double shift = 1e-10 * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
            while (llt.info() != Eigen::Success && shift < 1e300) {
                Eigen::MatrixXd shifted = hess;
                shifted.diagonal().array() += shift;
                llt.compute(shifted);
                shift *= 10.0;
            }
            if (llt.info() != Eigen::Success)
                step = -grad;
            else
                step = llt.solve(-grad);

            double slope = grad.dot(step);
            if (!(slope < 0.0)) {
                step = -grad;
                slope = -grad.squaredNorm();
            }
            // Newton decrement; the merit is scaled so the objective part is O(1)
            if (-0.5 * slope <= stop)
                return true;

            // fraction-to-boundary bound
            double alpha = 1.0;
            for (std::size_t i = 0; i < m_; ++i)
                for (std::size_t a = 0; a < f_; ++a) {
                    const double d = step(i * f_ + a);
                    if (d < 0.0)
                        alpha = std::min(alpha, -0.99 * x[i * k_ + static_cast<std::size_t>(cols_[a])] / d);
                }
            for (std::size_t a = 0; a < f_; ++a) {
                double ds = 0.0;
                for (std::size_t i = 0; i < m_; ++i)
                    ds += step(i * f_ + a);
                if (ds > 0.0)
                    alpha = std::min(alpha, 0.99 * slack[a] / ds);
            }

            bool accepted = false;
            for (int back = 0; back < 60; ++back) {
                trial = x;
                for (std::size_t i = 0; i < m_; ++i)
                    for (std::size_t a = 0; a < f_; ++a)
                        trial[i * k_ + static_cast<std::size_t>(cols_[a])] += alpha * step(i * f_ + a);
                const double next = merit(trial, mu);
                if (next <= phi + 1e-4 * alpha * slope) {
                    x.swap(trial);
                    phi = next;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted)
                return true; // no further progress at working precision
        }
    }

    const Instance& in_;
    Policy policy_;
    std::size_t m_;
    std::size_t k_;
    std::vector<int> cols_;
    std::size_t f_;
    double inv_norm_;
    std::vector<double> budget_;
    std::vector<double> weight_;
    std::vector<double> fs_buf_;
    std::vector<HyperDual> hd_buf_;
};

void require_feasible(const Instance& in, const Allocation& a)
{
    // budget sums may exceed by rounding (e.g. M * (F / M) > F)
    if (!is_feasible(in, a, 1e-12))
        throw ValidationError("infeasible allocation (non-positive share or budget exceeded)");
}

} // namespace

double objective(const Instance& in, const Allocation& a, Policy p)
{
    require_feasible(in, a);
    return total_cost(in, a, p);
}

Allocation objective_gradient(const Instance& in, const Allocation& a, Policy p)
{
    require_feasible(in, a);
    Allocation g = a;
    const double m = static_cast<double>(in.size());
    std::vector<HyperDual> v;
    for (std::size_t i = 0; i < in.size(); ++i) {
        const std::size_t k = 2 + a.f_s[i].size();
        const double scale = in.tasks[i].beta / m;
        for (std::size_t c = 0; c < k; ++c) {
            v.assign(k, HyperDual(0.0));
            v[0] = HyperDual(a.n[i]);
            v[1] = HyperDual(a.f_p[i]);
            for (std::size_t j = 0; j + 2 < k; ++j)
                v[2 + j] = HyperDual(a.f_s[i][j]);
            v[c].a = 1.0;
            const HyperDual t = ue_term<HyperDual>(in.tasks[i], in.channels[i], p, v[0], v[1],
                                                   std::span<const HyperDual>(v).subspan(2));
            const double d = t.a * scale;
            if (c == 0)
                g.n[i] = d;
            else if (c == 1)
                g.f_p[i] = d;
            else
                g.f_s[i][c - 2] = d;
        }
    }
    return g;
}

double objective_p2(const Instance& in, const Allocation& a)
{
    return objective(in, a, Policy::Adaptive);
}

std::vector<UeOutcome> evaluate_ues(const Instance& in, const Allocation& a, Policy p)
{
    std::vector<UeOutcome> out;
    out.reserve(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        const auto v = two_server_view(in.tasks[i], in.channels[i], a.n[i], a.f_p[i], a.f_s[i]);
        UeOutcome u;
        u.latency = estimated_latency(in.tasks[i], v.link, v.share);
        u.decision = theorem1_select(in.tasks[i], v.link, v.share);
        if (p == Policy::DoUOnly) {
            u.decision.x = 1;
            u.decision.lambda = opt_lambda_dou(in.tasks[i], v.link, v.share);
        } else if (p == Policy::DoEOnly) {
            u.decision.x = 0;
            u.decision.lambda = opt_lambda_doe(in.tasks[i], v.link, v.share);
        }
        out.push_back(u);
    }
    return out;
}

double weighted_latency(const Instance& in, const std::vector<UeOutcome>& per_ue, Policy p)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < per_ue.size(); ++i) {
        const auto& l = per_ue[i].latency;
        const double t = p == Policy::DoUOnly ? l.t_u : p == Policy::DoEOnly ? l.t_e : l.t_star;
        sum += in.tasks[i].beta * t;
    }
    return sum;
}

Allocation round_rbs(const Instance& in, const Allocation& alloc, Policy p)
{
    const auto m = in.size();
    const int n_rb = in.system.n_rb;
    if (n_rb < static_cast<int>(m))
        throw ValidationError("cannot give each of " + std::to_string(m) + " UEs at least one RB (n_rb = " +
                              std::to_string(n_rb) + ")");
    require_feasible(in, alloc);

    double total = 0.0;
    for (double v : alloc.n)
        total += v;
    const long target = std::clamp(std::lround(total), static_cast<long>(m), static_cast<long>(n_rb));

    Allocation out = alloc;
    long used = 0;
    for (auto& v : out.n) {
        v = std::max(1.0, std::floor(v));
        used += static_cast<long>(v);
    }
    auto cost_at = [&](std::size_t i, double n) {
        return ue_cost(in, i, p, n, out.f_p[i], out.f_s[i]);
    };
    while (used > target) {
        std::size_t pick = m;
        double best = kInf;
        for (std::size_t i = 0; i < m; ++i) {
            if (out.n[i] <= 1.0)
                continue;
            const double inc = cost_at(i, out.n[i] - 1.0) - cost_at(i, out.n[i]);
            if (inc < best) {
                best = inc;
                pick = i;
            }
        }
        out.n[pick] -= 1.0;
        --used;
    }
    while (used < target) {
        std::size_t pick = 0;
        double best = kInf;
        for (std::size_t i = 0; i < m; ++i) {
            const double change = cost_at(i, out.n[i] + 1.0) - cost_at(i, out.n[i]);
            if (change < best) {
                best = change;
                pick = i;
            }
        }
        out.n[pick] += 1.0;
        ++used;
    }
    return out;
}

Allocation round_rbs(const Instance& in, const Allocation& alloc)
{
    return round_rbs(in, alloc, Policy::Adaptive);
}

AllocationResult solve(const Instance& in, const SolverConfig& cfg, Policy policy)
{
    validate_instance(in);
    validate_solver_config(cfg);
    const auto m = in.size();
    if (in.system.n_rb < static_cast<int>(m))
        throw ValidationError("cannot give each of " + std::to_string(m) + " UEs at least one RB (n_rb = " +
                              std::to_string(in.system.n_rb) + ")");
    const std::size_t k = 2 + in.system.f_s_total.size();

    const Allocation equal = equal_share(in);
    const double norm = total_cost(in, equal, policy);
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw ValidationError("objective undefined at the equal-share allocation");

    std::vector<int> all_cols(k);
    for (std::size_t c = 0; c < k; ++c)
        all_cols[c] = static_cast<int>(c);
    BarrierSolver full(in, policy, all_cols, norm);

    AllocationResult res;
    double best_val = kInf;
    std::vector<double> best_x;
    bool best_converged = false;
    constexpr double kInterior = 0.98;
    for (int r = 0; r < cfg.restarts; ++r) {
        std::vector<double> start(m * k, kInterior / static_cast<double>(m));
        if (r > 0) {
            CounterRng rng(cfg.seed, static_cast<std::uint64_t>(r), 0x7265737461727473ULL);
            for (std::size_t c = 0; c < k; ++c) {
                double sum = 0.0;
                for (std::size_t i = 0; i < m; ++i)
                    sum += (start[i * k + c] = rng.uniform(0.5, 1.5));
                for (std::size_t i = 0; i < m; ++i)
                    start[i * k + c] *= kInterior / sum;
            }
        }
        // Perturbed starts skip the widest barrier stages, which would pull
        // them back to the same central-path point as the equal-share start.
        const double mu0 = r > 0 ? cfg.barrier_init * cfg.barrier_shrink * cfg.barrier_shrink : 0.0;
        auto run = full.run(std::move(start), cfg, std::max(mu0, full.final_barrier(cfg)));
        res.iterations += run.iterations;
        const double val = total_cost(in, full.to_allocation(run.x), policy);
        if (val < best_val) {
            best_val = val;
            best_x = std::move(run.x);
            best_converged = run.converged;
        }
    }

    // Integer RBs, then one pass over the CPU shares with n held fixed.
    Allocation rounded = round_rbs(in, full.to_allocation(best_x), policy);
    std::vector<int> cpu_cols(all_cols.begin() + 1, all_cols.end());
    BarrierSolver cpu(in, policy, cpu_cols, norm);
    auto reopt = cpu.run(cpu.to_fractions(rounded), cfg, cpu.final_barrier(cfg));
    res.iterations += reopt.iterations;
    res.allocation = cpu.to_allocation(reopt.x);
    res.allocation.n = rounded.n;
    res.converged = best_converged && reopt.converged;
    res.objective = total_cost(in, res.allocation, policy);

    Allocation equal_int = round_rbs(in, equal, policy);
    const double equal_val = total_cost(in, equal_int, policy);
    if (equal_val < res.objective || !std::isfinite(res.objective)) {
        res.allocation = std::move(equal_int);
        res.objective = equal_val;
    }
    res.per_ue = evaluate_ues(in, res.allocation, policy);
    return res;
}

AllocationResult solve_p2(const Instance& in, const SolverConfig& cfg)
{
    return solve(in, cfg, Policy::Adaptive);
}

AllocationResult solve_static(const Instance& in, const SolverConfig& cfg, Scheme scheme)
{
    return solve(in, cfg, scheme == Scheme::DoU ? Policy::DoUOnly : Policy::DoEOnly);
}

} // namespace edgepart
