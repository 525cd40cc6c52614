#include "edgepart/sim.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace edgepart {

void validate_sweep(const SweepSpec& spec)
{
    validate_scenario(spec.scenario);
    validate_solver_config(spec.solver);
    if (spec.trials < 1)
        throw ValidationError("sweep: trials must be >= 1");
    if (spec.rho_grid.empty())
        throw ValidationError("sweep: empty rho grid");
    for (std::size_t i = 0; i < spec.rho_grid.size(); ++i) {
        const double r = spec.rho_grid[i];
        if (!(r > 0.0 && r <= 1.0))
            throw ValidationError("sweep: rho grid values must be in (0, 1]");
        if (i > 0 && !(r > spec.rho_grid[i - 1]))
            throw ValidationError("sweep: rho grid must be strictly increasing");
    }
}

std::vector<double> parse_rho_grid(std::string_view text)
{
    double v[3];
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
        const auto end = k < 2 ? text.find(':', pos) : text.size();
        if (end == std::string_view::npos)
            throw ValidationError("bad grid spec (expected lo:hi:step): " + std::string(text));
        const auto part = text.substr(pos, end - pos);
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v[k]);
        if (ec != std::errc() || ptr != part.data() + part.size())
            throw ValidationError("bad grid spec (expected lo:hi:step): " + std::string(text));
        pos = end + 1;
    }
    const double lo = v[0], hi = v[1], step = v[2];
    if (!(step > 0.0) || !(hi >= lo))
        throw ValidationError("empty or descending grid: " + std::string(text));
    // Points are lo + k*step, rounded to suppress accumulation noise such as 0.30000000000000004.
    std::vector<double> grid;
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= count; ++k) {
        const double x = lo + static_cast<double>(k) * step;
        grid.push_back(std::round(x * 1e12) / 1e12);
    }
    return grid;
}

TrialOutcome run_trial(const ScenarioConfig& scenario, std::uint64_t trial_index,
                       const SolverConfig& solver)
{
    const Instance in = sample_trial(scenario, trial_index);
    const auto prop = solve(in, solver, Policy::Adaptive);
    const auto dou = solve(in, solver, Policy::DoUOnly);
    const auto doe = solve(in, solver, Policy::DoEOnly);

    TrialOutcome t;
    t.t_prop = weighted_latency(in, prop.per_ue, Policy::Adaptive);
    t.t_dou = weighted_latency(in, dou.per_ue, Policy::DoUOnly);
    t.t_doe = weighted_latency(in, doe.per_ue, Policy::DoEOnly);
    t.ues = static_cast<int>(in.size());
    for (const auto& u : prop.per_ue)
        t.dou_ues += u.decision.x;
    t.flagged = !(prop.converged && dou.converged && doe.converged);
    return t;
}

int SweepResult::flagged_total() const
{
    int n = 0;
    for (const auto& p : points)
        n += p.flagged_trials;
    return n;
}

bool SweepResult::exceeds_flag_budget() const
{
    const double total = static_cast<double>(trials_per_point) * static_cast<double>(points.size());
    return static_cast<double>(flagged_total()) > 1e-3 * total;
}

namespace {

struct Moments {
    long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x)
    {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    double ci95() const
    {
        if (n < 2)
            return 0.0;
        const double var = m2 / static_cast<double>(n - 1);
        return 1.959963984540054 * std::sqrt(var / static_cast<double>(n));
    }
};

template <class Fn>
void parallel_for(int count, int threads, Fn&& fn)
{
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++)
                fn(i);
        });
}

} // namespace

SweepResult run_sweep(const SweepSpec& spec, int threads)
{
    validate_sweep(spec);
    SweepResult res;
    res.trials_per_point = spec.trials;
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(spec.trials));

    for (double rho : spec.rho_grid) {
        ScenarioConfig sc = spec.scenario;
        sc.rho_mean = rho;
        parallel_for(spec.trials, threads, [&](int k) {
            outcomes[static_cast<std::size_t>(k)] =
                run_trial(sc, static_cast<std::uint64_t>(k), spec.solver);
        });

        Moments prop, dou, doe;
        long dou_ues = 0, ues = 0;
        SweepPoint p;
        p.rho_mean = rho;
        for (const auto& t : outcomes) {
            if (t.flagged) {
                ++p.flagged_trials;
                continue;
            }
            prop.add(t.t_prop);
            dou.add(t.t_dou);
            doe.add(t.t_doe);
            dou_ues += t.dou_ues;
            ues += t.ues;
        }
        p.t_prop = prop.mean;
        p.t_dou = dou.mean;
        p.t_doe = doe.mean;
        if (prop.n > 0) {
            p.gain_dou = 1.0 - prop.mean / dou.mean;
            p.gain_doe = 1.0 - prop.mean / doe.mean;
            p.dou_fraction = static_cast<double>(dou_ues) / static_cast<double>(ues);
        }
        p.ci_prop = prop.ci95();
        p.ci_dou = dou.ci95();
        p.ci_doe = doe.ci95();
        res.points.push_back(p);
    }
    return res;
}

int threads_from_env()
{
    if (const char* v = std::getenv("EDGEPART_THREADS")) {
        int n = 0;
        const std::string_view s(v);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
        if (ec == std::errc() && ptr == s.data() + s.size() && n >= 1)
            return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

InflectionEstimate estimate_inflection(std::span<const double> rho, std::span<const double> diff)
{
    InflectionEstimate e;
    if (rho.size() != diff.size())
        throw std::invalid_argument("estimate_inflection: rho and diff differ in length");
    for (std::size_t i = 0; i + 1 < rho.size(); ++i) {
        const double d0 = diff[i], d1 = diff[i + 1];
        if (d0 == 0.0) {
            e = {rho[i], rho[i], rho[i], true};
            return e;
        }
        if ((d0 < 0.0) != (d1 < 0.0) || d1 == 0.0) {
            e.rho_lo = rho[i];
            e.rho_hi = rho[i + 1];
            e.rho_star = rho[i] + (rho[i + 1] - rho[i]) * d0 / (d0 - d1);
            e.defined = true;
            return e;
        }
    }
    return e;
}

InflectionEstimate estimate_inflection(const SweepResult& result)
{
    std::vector<double> rho, diff;
    for (const auto& p : result.points) {
        rho.push_back(p.rho_mean);
        diff.push_back(p.t_dou - p.t_doe);
    }
    return estimate_inflection(rho, diff);
}

} // namespace edgepart
