#include "edgepart/cli/commands.hpp"

#include "edgepart/cli/config_file.hpp"
#include "edgepart/cli/csv.hpp"
#include "edgepart/cli/manifest.hpp"
#include "edgepart/cli/svg.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace edgepart::cli {

namespace fs = std::filesystem;

namespace {

std::string range_text(const Range& r)
{
    return format_number(r.lo) + ", " + format_number(r.hi);
}

void write_file(const fs::path& path, const std::string& bytes)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + path.string());
    f << bytes;
    if (!f.flush())
        throw std::runtime_error("write failed: " + path.string());
}

struct SweepArgs {
    std::string scenario;
    std::optional<int> ues;
    std::string grid = "0.1:1.0:0.1";
    int trials = 5000;
    std::uint64_t seed = 1;
    std::string out;
    std::optional<double> alpha;
    std::optional<double> fp_fs_ratio;
    std::optional<double> rho_halfwidth;
    std::optional<int> secondary;
    std::string mcs_table;
    std::optional<int> threads;
};

void add_solver_options(CLI::App* cmd, SolverConfig& cfg)
{
    cmd->add_option("--max-iters", cfg.max_iters, "Newton iterations per solve")->capture_default_str();
    cmd->add_option("--tol", cfg.tol, "relative objective tolerance")->capture_default_str();
    cmd->add_option("--restarts", cfg.restarts, "starts tried per solve")->capture_default_str();
    cmd->add_option("--solver-seed", cfg.seed, "seed for restart perturbations")->capture_default_str();
}

int do_sweep(const SweepArgs& a, const SolverConfig& solver, std::ostream& out)
{
    SweepSpec spec;
    spec.scenario = scenario_preset(a.scenario);
    auto& sc = spec.scenario;
    if (a.ues)
        sc.m_ues = *a.ues;
    if (a.alpha)
        sc.alpha = {*a.alpha, *a.alpha};
    if (a.fp_fs_ratio)
        sc.fp_to_fs_ratio = Range{*a.fp_fs_ratio, *a.fp_fs_ratio};
    if (a.rho_halfwidth)
        sc.rho_halfwidth = *a.rho_halfwidth;
    if (a.secondary)
        sc.num_secondary = *a.secondary;
    if (!a.mcs_table.empty())
        sc.mcs = load_mcs_table(a.mcs_table);
    sc.seed = a.seed;
    spec.rho_grid = parse_rho_grid(a.grid);
    spec.trials = a.trials;
    spec.solver = solver;
    validate_sweep(spec);

    const fs::path csv_path(a.out);
    const fs::path dir = csv_path.parent_path();
    if (!dir.empty())
        fs::create_directories(dir);
    const fs::path config_path = dir / (csv_path.stem().string() + ".config.txt");
    const fs::path manifest_path = dir / (csv_path.stem().string() + ".manifest.json");

    const std::string config = resolved_config_text(spec);
    write_file(config_path, config);

    const auto result = run_sweep(spec, a.threads ? *a.threads : threads_from_env());
    std::ostringstream csv;
    write_sweep_csv(csv, result.points);
    write_file(csv_path, csv.str());

    Manifest m;
    m.config_digest = sha256_hex(config);
    m.seed = a.seed;
    m.timestamp_utc = utc_now_iso8601();
    m.outputs = {{"csv", csv_path.string()},
                 {"config", config_path.string()},
                 {"manifest", manifest_path.string()}};
    write_file(manifest_path, manifest_json(m));

    const auto infl = estimate_inflection(result);
    out << "wrote " << csv_path.string() << " (" << result.points.size() << " points x "
        << spec.trials << " trials)\n";
    if (infl.defined)
        out << "DoU/DoE crossover near rho = " << format_number(infl.rho_star) << " (between "
            << format_number(infl.rho_lo) << " and " << format_number(infl.rho_hi) << ")\n";
    else
        out << "no DoU/DoE crossover on this grid\n";
    out << "flagged trials: " << result.flagged_total() << "\n";
    if (result.exceeds_flag_budget()) {
        out << "error: more than 0.1% of trials failed to converge\n";
        return kExitFlagBudget;
    }
    return kExitOk;
}

int do_solve(const std::string& config_path, const std::string& policy_name,
             const SolverConfig& solver, std::ostream& out)
{
    const Instance inst = load_instance(config_path);
    Policy policy = Policy::Adaptive;
    if (policy_name == "dou")
        policy = Policy::DoUOnly;
    else if (policy_name == "doe")
        policy = Policy::DoEOnly;
    const auto res = solve(inst, solver, policy);

    const int widths[] = {3, 4, 15, 15, 6, 12, 12, 12, 13, 13, 13};
    auto row = [&](const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k)
            out << (k ? " " : "") << std::setw(widths[k]) << cells[k];
        out << '\n';
    };
    row({"ue", "n", "f_p", "f_s", "scheme", "lambda", "eta", "indicator", "T_u", "T_e", "latency"});
    for (std::size_t i = 0; i < inst.size(); ++i) {
        const auto& u = res.per_ue[i];
        std::string fs_text;
        for (std::size_t j = 0; j < res.allocation.f_s[i].size(); ++j)
            fs_text += (j ? "," : "") + format_number(res.allocation.f_s[i][j]);
        const double shown = policy == Policy::DoUOnly   ? u.latency.t_u
                             : policy == Policy::DoEOnly ? u.latency.t_e
                                                         : u.latency.t_star;
        const char* scheme = policy == Policy::Adaptive  ? to_string(u.decision.scheme())
                             : policy == Policy::DoUOnly ? "DoU"
                                                         : "DoE";
        row({std::to_string(i), format_number(res.allocation.n[i]),
             format_number(res.allocation.f_p[i]), fs_text, scheme,
             format_number(u.decision.lambda), format_number(u.decision.eta),
             format_number(u.decision.indicator), format_number(u.latency.t_u),
             format_number(u.latency.t_e), format_number(shown)});
    }
    out << "weighted latency: " << format_number(weighted_latency(inst, res.per_ue, policy)) << " s\n";
    out << "converged: " << (res.converged ? "yes" : "no") << " (" << res.iterations
        << " Newton iterations)\n";
    return res.converged ? kExitOk : kExitError;
}

int do_plot(const std::string& csv_path, const std::string& svg_path, std::ostream& out)
{
    std::ifstream in(csv_path);
    if (!in)
        throw std::runtime_error("cannot open " + csv_path);
    const auto points = read_sweep_csv(in);
    write_file(svg_path, render_gain_svg(points));
    out << "wrote " << svg_path << '\n';
    return kExitOk;
}

} // namespace

std::string resolved_config_text(const SweepSpec& spec)
{
    const auto& sc = spec.scenario;
    std::ostringstream o;
    o << "scenario = " << to_string(sc.name) << '\n'
      << "seed = " << sc.seed << '\n'
      << "ues = " << sc.m_ues << '\n'
      << "rho_grid = ";
    for (std::size_t i = 0; i < spec.rho_grid.size(); ++i)
        o << (i ? ", " : "") << format_number(spec.rho_grid[i]);
    o << '\n'
      << "trials = " << spec.trials << '\n'
      << "rho_halfwidth = " << format_number(sc.rho_halfwidth) << '\n'
      << "snr_db = " << range_text(sc.snr_db) << '\n'
      << "b = " << range_text(sc.b) << '\n'
      << "alpha = " << range_text(sc.alpha) << '\n'
      << "R = " << range_text(sc.big_r) << '\n';
    if (sc.fp_to_fs_ratio)
        o << "fp_to_fs_ratio = " << range_text(*sc.fp_to_fs_ratio) << '\n';
    else
        o << "f_p_total = " << range_text(sc.f_p_total) << '\n';
    o << "f_s_total = " << range_text(sc.f_s_total) << '\n'
      << "n_rb = " << sc.n_rb << '\n'
      << "rb_bandwidth_hz = " << format_number(sc.rb_bandwidth_hz) << '\n'
      << "num_secondary = " << sc.num_secondary << '\n'
      << "mcs_table = ";
    for (std::size_t i = 0; i < sc.mcs.size(); ++i)
        o << (i ? "; " : "") << format_number(sc.mcs[i].min_snr_db) << ' '
          << format_number(sc.mcs[i].spectral_eff);
    o << '\n'
      << "solver.max_iters = " << spec.solver.max_iters << '\n'
      << "solver.tol = " << format_number(spec.solver.tol) << '\n'
      << "solver.barrier_init = " << format_number(spec.solver.barrier_init) << '\n'
      << "solver.barrier_shrink = " << format_number(spec.solver.barrier_shrink) << '\n'
      << "solver.restarts = " << spec.solver.restarts << '\n'
      << "solver.seed = " << spec.solver.seed << '\n'
      << "tool_version = " << kToolVersion << '\n';
    return o.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Partitioned offloading across a primary and secondary edge servers"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    SweepArgs sw;
    SolverConfig sweep_solver;
    auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over the mean rate ratio");
    sweep->add_option("--scenario", sw.scenario, "high_forwarding, limited_primary, comm_dominated, comp_dominated")
        ->required();
    sweep->add_option("--ues", sw.ues, "UEs per instance");
    sweep->add_option("--rho-grid", sw.grid, "lo:hi:step")->capture_default_str();
    sweep->add_option("--trials", sw.trials, "instances per grid point")->capture_default_str();
    sweep->add_option("--seed", sw.seed, "instance seed")->capture_default_str();
    sweep->add_option("--out", sw.out, "output CSV path")->required();
    sweep->add_option("--alpha", sw.alpha, "fixed CPU cycles per bit");
    sweep->add_option("--fp-fs-ratio", sw.fp_fs_ratio, "fix f_p_total / f_s_total");
    sweep->add_option("--rho-halfwidth", sw.rho_halfwidth, "half-width of per-UE rho draws");
    sweep->add_option("--secondary", sw.secondary, "number of secondary servers");
    sweep->add_option("--mcs-table", sw.mcs_table, "MCS table file");
    sweep->add_option("--threads", sw.threads, "worker threads (default EDGEPART_THREADS or all cores)");
    add_solver_options(sweep, sweep_solver);

    std::string config_path, policy = "adaptive";
    SolverConfig solve_solver;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one instance file and print the allocation");
    solve_cmd->add_option("--config", config_path, "instance file")->required();
    solve_cmd->add_option("--policy", policy, "adaptive, dou or doe")
        ->check(CLI::IsMember({"adaptive", "dou", "doe"}))
        ->capture_default_str();
    add_solver_options(solve_cmd, solve_solver);

    std::string csv_in, svg_out;
    auto* plot = app.add_subcommand("plot", "Render a sweep CSV as an SVG chart");
    plot->add_option("--csv", csv_in, "sweep CSV")->required();
    plot->add_option("--out", svg_out, "output SVG path")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*sweep)
            return do_sweep(sw, sweep_solver, out);
        if (*solve_cmd)
            return do_solve(config_path, policy, solve_solver, out);
        return do_plot(csv_in, svg_out, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

} // namespace edgepart::cli
