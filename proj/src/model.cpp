#include "edgepart/model.hpp"

#include <cmath>
#include <numeric>

namespace edgepart {

const char* to_string(Scheme s)
{
    return s == Scheme::DoU ? "DoU" : "DoE";
}

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw ValidationError(what);
}

bool positive(double v)
{
    return std::isfinite(v) && v > 0.0;
}

} // namespace

const Instance& validate_instance(const Instance& in)
{
    const auto m = in.tasks.size();
    require(m >= 1, "instance has no UEs");
    require(in.channels.size() == m, "dimension mismatch: tasks vs channels");

    const auto& sys = in.system;
    require(sys.n_rb >= 1, "n_rb must be >= 1");
    require(sys.num_secondary >= 1, "num_secondary must be >= 1");
    require(sys.f_s_total.size() == static_cast<std::size_t>(sys.num_secondary),
            "dimension mismatch: f_s_total length != num_secondary");
    require(positive(sys.f_p_total), "non-positive field: f_p_total");
    for (double f : sys.f_s_total)
        require(positive(f), "non-positive field: f_s_total");
    require(positive(sys.rb_bandwidth_hz), "non-positive field: rb_bandwidth_hz");

    double beta_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& t = in.tasks[i];
        const auto& c = in.channels[i];
        const auto ue = "UE " + std::to_string(i) + ": ";
        require(positive(t.b), ue + "non-positive field: b");
        require(positive(t.alpha), ue + "non-positive field: alpha");
        require(positive(t.beta), ue + "non-positive field: beta");
        require(positive(c.r_p), ue + "non-positive field: r_p");
        require(positive(c.big_r), ue + "non-positive field: R");
        require(c.r_s.size() == sys.f_s_total.size(),
                ue + "dimension mismatch: r_s length != num_secondary");
        for (double r : c.r_s) {
            require(positive(r), ue + "non-positive field: r_s");
            require(r <= c.r_p, ue + "r_s exceeds r_p");
        }
        beta_sum += t.beta;
    }
    require(std::abs(beta_sum - 1.0) <= 1e-12, "beta sum != 1");
    return in;
}

Instance validate_instance(std::vector<TaskSpec> tasks, std::vector<ChannelState> channels,
                           SystemConfig cfg)
{
    Instance in{std::move(tasks), std::move(channels), std::move(cfg)};
    validate_instance(in);
    return in;
}

void assign_uniform_beta(std::vector<TaskSpec>& tasks)
{
    const double w = 1.0 / static_cast<double>(tasks.size());
    for (auto& t : tasks)
        t.beta = w;
}

Allocation equal_share(const Instance& in)
{
    const auto m = in.size();
    const double md = static_cast<double>(m);
    Allocation a;
    a.n.assign(m, in.system.n_rb / md);
    a.f_p.assign(m, in.system.f_p_total / md);
    std::vector<double> row;
    for (double f : in.system.f_s_total)
        row.push_back(f / md);
    a.f_s.assign(m, row);
    return a;
}

bool is_feasible(const Instance& in, const Allocation& a, double slack)
{
    const auto m = in.size();
    const auto ns = in.system.f_s_total.size();
    if (a.n.size() != m || a.f_p.size() != m || a.f_s.size() != m)
        return false;
    double sn = 0.0, sp = 0.0;
    std::vector<double> ss(ns, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (!positive(a.n[i]) || !positive(a.f_p[i]) || a.f_s[i].size() != ns)
            return false;
        sn += a.n[i];
        sp += a.f_p[i];
        for (std::size_t j = 0; j < ns; ++j) {
            if (!positive(a.f_s[i][j]))
                return false;
            ss[j] += a.f_s[i][j];
        }
    }
    const double k = 1.0 + slack;
    if (sn > in.system.n_rb * k || sp > in.system.f_p_total * k)
        return false;
    for (std::size_t j = 0; j < ns; ++j)
        if (ss[j] > in.system.f_s_total[j] * k)
            return false;
    return true;
}

} // namespace edgepart
