// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "edgepart/allocator.hpp"
#include "edgepart/channel.hpp"
#include "edgepart/cli/commands.hpp"
#include "edgepart/cli/csv.hpp"
#include "edgepart/partition.hpp"
#include "edgepart/sim.hpp"

#include "support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace edgepart;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v)
{
    return cli::format_number(v);
}

const fs::path& out_dir()
{
    static const fs::path dir = [] {
        fs::path d = fs::current_path() / "acceptance_out";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct SweepRun {
    int exit_code = -1;
    std::vector<SweepPoint> points;
    InflectionEstimate inflection;
    double seconds = 0.0;
    std::string error;
};

SweepRun sweep(std::vector<std::string> extra, const std::string& name)
{
    const fs::path csv = out_dir() / (name + ".csv");
    std::vector<std::string> args{"sweep"};
    args.insert(args.end(), extra.begin(), extra.end());
    args.push_back("--out");
    args.push_back(csv.string());

    SweepRun r;
    std::ostringstream out, err;
    const auto t0 = std::chrono::steady_clock::now();
    r.exit_code = cli::run_cli(args, out, err);
    r.seconds = seconds_since(t0);
    r.error = err.str();
    if (r.exit_code == cli::kExitOk || r.exit_code == cli::kExitFlagBudget) {
        std::ifstream in(csv);
        r.points = cli::read_sweep_csv(in);
        std::vector<double> rho, diff;
        for (const auto& p : r.points) {
            rho.push_back(p.rho_mean);
            diff.push_back(p.t_dou - p.t_doe);
        }
        r.inflection = estimate_inflection(rho, diff);
    }
    return r;
}

std::string inflection_text(const InflectionEstimate& e)
{
    return e.defined ? fmt(e.rho_star) : std::string("undefined");
}

const std::vector<std::string> kFig4Args{"--scenario", "high_forwarding", "--ues", "8",
                                         "--rho-grid", "0.1:1.0:0.1", "--trials", "2000",
                                         "--seed", "42"};

// 1. Threshold rule versus direct comparison of the two optimal latencies.
Verdict threshold_rule_exactness()
{
    const auto t0 = std::chrono::steady_clock::now();
    oracle::TupleSampler gen(20260101);
    const int total = 100000;
    int agree = 0;
    for (int k = 0; k < total; ++k) {
        const auto u = gen.draw();
        const auto d = theorem1_select({u.b, u.alpha, 1.0}, {u.r_p, u.r_s, u.big_r}, {u.n, u.f_p, u.f_s});
        const double cp = u.alpha / u.f_p;
        const double su = 1 / (u.n * u.r_s) + u.alpha / u.f_s;
        const double se = 1 / u.big_r + u.alpha / u.f_s;
        const double tu = u.b * (1 / (u.n * u.r_p) + cp) * su / (su + cp);
        const double te = u.b * (1 / (u.n * u.r_p) + cp * se / (se + cp));
        const bool tie = std::abs(te - tu) <= 1e-12 * std::max(te, tu);
        agree += tie || ((d.indicator >= 0.0) == (tu <= te));
    }
    const double s = seconds_since(t0);
    return {agree == total && s < 5.0,
            std::to_string(agree) + "/" + std::to_string(total) + " agree, " + fmt(s) + " s (limit 5 s)"};
}

// 2. Closed-form splits against a 1e-4 grid, plus the equal-finish-time residual.
Verdict closed_form_optimality()
{
    const auto t0 = std::chrono::steady_clock::now();
    oracle::TupleSampler gen(20260102);
    const int total = 10000;
    int beaten = 0, residual_bad = 0;
    double worst_residual = 0.0;
    for (int k = 0; k < total; ++k) {
        const auto u = gen.draw();
        const TaskSpec t{u.b, u.alpha, 1.0};
        const UeLink l{u.r_p, u.r_s, u.big_r};
        const UeShare s{u.n, u.f_p, u.f_s};
        const double tu = min_latency_dou(t, l, s), te = min_latency_doe(t, l, s);
        const auto gu = oracle::grid_min([&](double x) { return oracle::dou(u, x); }, 1e-4);
        const auto ge = oracle::grid_min([&](double x) { return oracle::doe(u, x); }, 1e-4);
        beaten += tu > gu.second * (1 + 1e-9);
        beaten += te > ge.second * (1 + 1e-9);

        const double lu = opt_lambda_dou(t, l, s), le = opt_lambda_doe(t, l, s);
        const double pu = lu * u.alpha * u.b / u.f_p;
        const double qu = (1 - lu) * (u.b / (u.n * u.r_s) + u.alpha * u.b / u.f_s);
        const double pe = le * u.alpha * u.b / u.f_p;
        const double qe = (1 - le) * (u.b / u.big_r + u.alpha * u.b / u.f_s);
        const double ru = std::abs(pu - qu) / pu, re = std::abs(pe - qe) / pe;
        worst_residual = std::max({worst_residual, ru, re});
        residual_bad += (ru > 1e-9) + (re > 1e-9);
    }
    const double s = seconds_since(t0);
    return {beaten == 0 && residual_bad == 0 && s < 30.0,
            std::to_string(beaten) + " grid wins over the closed form, worst residual " +
                fmt(worst_residual) + ", " + fmt(s) + " s (limit 30 s)"};
}

// 3. Two secondaries: reduced split versus a bisection on the sequential
//    three-server model; one secondary: exact identity.
Verdict generic_reduction()
{
    std::mt19937_64 rng(20260103);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    static constexpr double eff[] = {0.1523, 0.2344, 0.3770, 0.6016, 0.8770, 1.1758, 1.4766, 1.9141,
                                     2.4063, 2.7305, 3.3223, 3.9023, 4.5234, 5.1152, 5.5547};
    const int total = 1000;
    int ok = 0, undefined = 0, identity_bad = 0;
    double worst = 0.0;
    for (int k = 0; k < total; ++k) {
        oracle::ThreeServer s{};
        s.b = 0.8e6 + 0.4e6 * u01(rng);
        s.alpha = 248;
        s.n = 1 + std::floor(100 * u01(rng) / 3);
        s.r_p = 180e3 * eff[static_cast<int>(15 * u01(rng)) % 15];
        s.big_r = 50e6 + 50e6 * u01(rng);
        s.f_p = (2e10 + 1e10 * u01(rng)) * (0.05 + 0.95 * u01(rng));
        s.r_s = {s.r_p * (0.01 + 0.99 * u01(rng)), s.r_p * (0.01 + 0.99 * u01(rng))};
        s.f_s = {(2e10 + 1e10 * u01(rng)) * (0.05 + 0.95 * u01(rng)),
                 (2e10 + 1e10 * u01(rng)) * (0.05 + 0.95 * u01(rng))};
        const TaskSpec t{s.b, s.alpha, 1};
        const ChannelState c{s.r_p, {s.r_s[0], s.r_s[1]}, s.big_r};
        try {
            const auto v = two_server_view(t, c, s.n, s.f_p, s.f_s);
            const double du = std::abs(opt_lambda_dou(t, v.link, v.share) - oracle::three_server_dou(s).lambda);
            const double de = std::abs(opt_lambda_doe(t, v.link, v.share) - oracle::three_server_doe(s).lambda);
            worst = std::max({worst, du, de});
            ok += du <= 1e-6 && de <= 1e-6;
        } catch (const ReductionError&) {
            ++undefined;
        }

        const ChannelState c1{s.r_p, {s.r_s[0]}, s.big_r};
        const double f1[] = {s.f_s[0]};
        const auto r = reduce_generic(t, c1, s.n, f1);
        identity_bad += !(r.lambda_s_u == 1.0 && r.lambda_s_e == 1.0 && r.f_s_eff == s.f_s[0] &&
                          r.r_s_eff == s.r_s[0]);
    }
    return {ok == total && identity_bad == 0,
            std::to_string(ok) + "/" + std::to_string(total) + " within 1e-6 (worst " + fmt(worst) +
                ", " + std::to_string(undefined) + " undefined), single-server identity failures " +
                std::to_string(identity_bad)};
}

// 4. Solver against random search over feasible allocations and against equal share.
Verdict solver_quality()
{
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioConfig sc = scenario_preset(ScenarioName::Custom);
    sc.m_ues = 2;
    sc.seed = 20260104;
    std::mt19937_64 rng(20260105);
    std::gamma_distribution<double> expo(1.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    int within = 0, below_equal = 0;
    double worst_ratio = 0.0;
    const int instances = 100;
    for (int k = 0; k < instances; ++k) {
        sc.rho_mean = 0.05 + 0.95 * u01(rng);
        const Instance in = sample_trial(sc, static_cast<std::uint64_t>(k));
        const auto res = solve_p2(in);
        below_equal += res.objective <= objective_p2(in, equal_share(in)) * (1 + 1e-12);

        const double budget[3] = {static_cast<double>(in.system.n_rb), in.system.f_p_total,
                                  in.system.f_s_total[0]};
        double best = std::numeric_limits<double>::infinity();
        for (int s = 0; s < 1000000; ++s) {
            // Dirichlet(1,1) splits; every other sample also leaves a random slack
            double share[3][2];
            for (int c = 0; c < 3; ++c) {
                const double a = expo(rng), b = expo(rng), z = (s & 1) ? expo(rng) : 0.0;
                const double sum = a + b + z;
                share[c][0] = budget[c] * a / sum;
                share[c][1] = budget[c] * b / sum;
            }
            double obj = 0.0;
            for (int i = 0; i < 2; ++i) {
                const auto& ch = in.channels[static_cast<std::size_t>(i)];
                const auto& tk = in.tasks[static_cast<std::size_t>(i)];
                obj += tk.beta * oracle::t_tilde({tk.b, tk.alpha, share[0][i], ch.r_p, ch.r_s[0],
                                                  share[1][i], share[2][i], ch.big_r});
            }
            best = std::min(best, obj / 2.0);
        }
        worst_ratio = std::max(worst_ratio, res.objective / best);
        within += res.objective <= best * 1.01;
    }
    return {within == instances && below_equal == instances,
            std::to_string(within) + "/" + std::to_string(instances) +
                " within 1% of random search (worst ratio " + fmt(worst_ratio) + "), " +
                std::to_string(below_equal) + "/" + std::to_string(instances) + " no worse than equal share, " +
                fmt(seconds_since(t0)) + " s"};
}

SweepRun& fig4_run()
{
    static SweepRun r = sweep(kFig4Args, "high_forwarding_m8");
    return r;
}

// 5. High forwarding capacity, 8 UEs: gains and crossover.
Verdict high_forwarding_reproduction()
{
    const auto& r = fig4_run();
    if (r.exit_code != cli::kExitOk)
        return {false, "sweep exited with " + std::to_string(r.exit_code) + ": " + r.error};
    double min_gain = 1.0;
    std::string below;
    for (const auto& p : r.points) {
        min_gain = std::min({min_gain, p.gain_dou, p.gain_doe});
        if (p.gain_dou < -0.005 || p.gain_doe < -0.005)
            below += " " + fmt(p.rho_mean) + "(" + fmt(p.gain_dou) + "," + fmt(p.gain_doe) + ")";
    }
    const bool inflection_ok = r.inflection.defined && r.inflection.rho_star >= 0.4 && r.inflection.rho_star <= 0.6;
    return {below.empty() && inflection_ok && r.seconds < 180.0,
            "min gain " + fmt(min_gain) + (below.empty() ? "" : ", below -0.5% at rho" + below) +
                "; crossover " + inflection_text(r.inflection) + " (want [0.4, 0.6]); " + fmt(r.seconds) +
                " s (target 180 s)"};
}

// 6. Crossover moves left as the primary gets relatively faster.
Verdict capacity_ratio_trend()
{
    std::vector<double> stars;
    std::string text;
    bool ok = true;
    for (const char* ratio : {"0.67", "1.0", "1.5"}) {
        auto args = kFig4Args;
        args.push_back("--fp-fs-ratio");
        args.push_back(ratio);
        const auto r = sweep(args, std::string("fp_fs_ratio_") + ratio);
        ok = ok && r.exit_code == cli::kExitOk && r.inflection.defined;
        stars.push_back(r.inflection.defined ? r.inflection.rho_star : std::nan(""));
        text += std::string(text.empty() ? "" : ", ") + ratio + " -> " + inflection_text(r.inflection);
    }
    for (std::size_t i = 1; i < stars.size(); ++i)
        ok = ok && stars[i] < stars[i - 1];
    return {ok, "crossover by f_p/f_s: " + text + " (want strictly decreasing)"};
}

// 7. Computation-dominated servers, 3 and 8 UEs.
Verdict comp_dominated_reproduction()
{
    std::vector<double> stars;
    std::string text;
    bool ok = true;
    for (const char* m : {"3", "8"}) {
        const std::vector<std::string> args{"--scenario", "comp_dominated", "--ues", m, "--rho-grid",
                                            "0.1:1.0:0.1", "--trials", "2000", "--seed", "42"};
        const auto r = sweep(args, std::string("comp_dominated_m") + m);
        const bool in_range = r.exit_code == cli::kExitOk && r.inflection.defined &&
                              r.inflection.rho_star >= 0.35 && r.inflection.rho_star <= 0.6;
        ok = ok && in_range;
        stars.push_back(r.inflection.rho_star);
        text += std::string(text.empty() ? "" : ", ") + "M=" + m + " -> " + inflection_text(r.inflection);
    }
    const double gap = std::abs(stars[0] - stars[1]);
    ok = ok && gap < 0.1;
    return {ok, "crossover " + text + " (want [0.35, 0.6]), gap " + fmt(gap) + " (want < 0.1)"};
}

// 8. Communication-dominated tasks, 3 UEs.
Verdict comm_dominated_behaviour()
{
    const std::vector<std::string> args{"--scenario", "comm_dominated", "--ues", "3", "--rho-grid",
                                        "0.1:1.0:0.1", "--trials", "2000", "--seed", "42"};
    const auto r = sweep(args, "comm_dominated_m3");
    if (r.exit_code != cli::kExitOk || r.points.empty())
        return {false, "sweep exited with " + std::to_string(r.exit_code) + ": " + r.error};
    double max_gain_dou = -1.0;
    std::string doe_better;
    for (const auto& p : r.points) {
        max_gain_dou = std::max(max_gain_dou, p.gain_dou);
        if (p.t_dou > p.t_doe)
            doe_better += " " + fmt(p.rho_mean) + "(" + fmt(p.t_dou / p.t_doe - 1) + ")";
    }
    const auto& last = r.points.back();
    const bool ok = max_gain_dou <= 0.02 && doe_better.empty() && last.rho_mean == 1.0 && last.gain_doe < 0.08;
    return {ok, "max gain over DoU " + fmt(max_gain_dou) + " (want <= 0.02); DoU slower than DoE at rho" +
                    (doe_better.empty() ? std::string(" none") : doe_better) + "; gain over DoE at rho=1 " +
                    fmt(last.gain_doe) + " (want < 0.08)"};
}

// 9. Rerun of the high forwarding command gives the same bytes.
Verdict determinism()
{
    fig4_run();
    const auto again = sweep(kFig4Args, "high_forwarding_m8_rerun");
    const std::string a = slurp(out_dir() / "high_forwarding_m8.csv");
    const std::string b = slurp(out_dir() / "high_forwarding_m8_rerun.csv");
    return {again.exit_code == cli::kExitOk && !a.empty() && a == b,
            a == b ? "CSV identical (" + std::to_string(a.size()) + " bytes)" : std::string("CSV differs")};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"threshold rule exactness", threshold_rule_exactness},
        {"closed-form optimality", closed_form_optimality},
        {"multi-secondary reduction", generic_reduction},
        {"solver quality", solver_quality},
        {"high forwarding, 8 UEs", high_forwarding_reproduction},
        {"f_p/f_s crossover trend", capacity_ratio_trend},
        {"computation dominated, 3 and 8 UEs", comp_dominated_reproduction},
        {"communication dominated, 3 UEs", comm_dominated_behaviour},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::printf("criterion %zu %s: %s: %s\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first,
                    v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
