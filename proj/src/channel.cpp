#include "edgepart/channel.hpp"

#include "edgepart/rng.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace edgepart {

const McsTable& default_mcs_table()
{
    // Code rates are x/1024 of the LTE CQI table.
    static const McsTable table{
        {-6.7, "QPSK", 78.0 / 1024, 0.1523},   {-4.7, "QPSK", 120.0 / 1024, 0.2344},
        {-2.3, "QPSK", 193.0 / 1024, 0.3770},  {0.2, "QPSK", 308.0 / 1024, 0.6016},
        {2.4, "QPSK", 449.0 / 1024, 0.8770},   {4.3, "QPSK", 602.0 / 1024, 1.1758},
        {5.9, "16QAM", 378.0 / 1024, 1.4766},  {8.1, "16QAM", 490.0 / 1024, 1.9141},
        {10.3, "16QAM", 616.0 / 1024, 2.4063}, {11.7, "64QAM", 466.0 / 1024, 2.7305},
        {14.1, "64QAM", 567.0 / 1024, 3.3223}, {16.3, "64QAM", 666.0 / 1024, 3.9023},
        {18.7, "64QAM", 772.0 / 1024, 4.5234}, {21.0, "64QAM", 873.0 / 1024, 5.1152},
        {22.7, "64QAM", 948.0 / 1024, 5.5547},
    };
    return table;
}

void validate_mcs_table(const McsTable& table)
{
    if (table.empty())
        throw ValidationError("MCS table is empty");
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (!(table[i].spectral_eff > 0.0))
            throw ValidationError("MCS table: spectral efficiency must be positive");
        if (i > 0 && !(table[i].min_snr_db > table[i - 1].min_snr_db))
            throw ValidationError("MCS table: thresholds must be strictly increasing");
        if (i > 0 && !(table[i].spectral_eff > table[i - 1].spectral_eff))
            throw ValidationError("MCS table: spectral efficiency must be strictly increasing");
    }
}

namespace {

// Smallest square QAM order whose bits/symbol exceed the efficiency.
McsEntry entry_from_pair(double snr, double eff)
{
    static const std::pair<const char*, double> orders[] = {
        {"QPSK", 2.0}, {"16QAM", 4.0}, {"64QAM", 6.0}, {"256QAM", 8.0}, {"1024QAM", 10.0}};
    for (const auto& [label, bits] : orders)
        if (eff < bits)
            return {snr, label, eff / bits, eff};
    return {snr, "custom", 0.0, eff};
}

bool parse_double(std::string_view s, double& out)
{
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

} // namespace

McsTable parse_mcs_table(std::istream& in)
{
    McsTable table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        std::string a, b, extra;
        if (!(fields >> a))
            continue;
        double snr = 0.0, eff = 0.0;
        if (!(fields >> b) || (fields >> extra) || !parse_double(a, snr) || !parse_double(b, eff))
            throw ValidationError("MCS table line " + std::to_string(lineno) +
                                  ": expected `min_snr_db spectral_eff`");
        table.push_back(entry_from_pair(snr, eff));
    }
    validate_mcs_table(table);
    return table;
}

McsTable load_mcs_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open MCS table: " + path);
    return parse_mcs_table(in);
}

double snr_to_rate(double snr_db, double rb_bandwidth_hz, const McsTable& table)
{
    if (table.empty())
        throw ValidationError("MCS table is empty");
    auto it = std::upper_bound(table.begin(), table.end(), snr_db,
                               [](double s, const McsEntry& e) { return s < e.min_snr_db; });
    if (it != table.begin())
        --it;
    return rb_bandwidth_hz * it->spectral_eff;
}

std::string_view to_string(ScenarioName name)
{
    switch (name) {
    case ScenarioName::HighForwarding: return "high_forwarding";
    case ScenarioName::LimitedPrimary: return "limited_primary";
    case ScenarioName::CommDominated: return "comm_dominated";
    case ScenarioName::CompDominated: return "comp_dominated";
    case ScenarioName::Custom: return "custom";
    }
    return "custom";
}

ScenarioName parse_scenario_name(std::string_view text)
{
    for (auto n : {ScenarioName::HighForwarding, ScenarioName::LimitedPrimary,
                   ScenarioName::CommDominated, ScenarioName::CompDominated, ScenarioName::Custom})
        if (to_string(n) == text)
            return n;
    throw ValidationError("unknown scenario: " + std::string(text));
}

void validate_scenario(const ScenarioConfig& c)
{
    auto check_range = [](const Range& r, const char* what, bool allow_nonpositive = false) {
        if (!(r.lo <= r.hi) || (!allow_nonpositive && !(r.lo > 0.0)))
            throw ValidationError(std::string("scenario: bad range for ") + what);
    };
    if (c.m_ues < 1)
        throw ValidationError("scenario: m_ues must be >= 1");
    if (!(c.rho_mean > 0.0 && c.rho_mean <= 1.0))
        throw ValidationError("scenario: rho_mean must be in (0, 1]");
    if (!(c.rho_halfwidth >= 0.0))
        throw ValidationError("scenario: rho_halfwidth must be >= 0");
    check_range(c.snr_db, "snr_db", true);
    check_range(c.b, "b");
    check_range(c.alpha, "alpha");
    check_range(c.big_r, "R");
    check_range(c.f_p_total, "f_p_total");
    check_range(c.f_s_total, "f_s_total");
    if (c.fp_to_fs_ratio)
        check_range(*c.fp_to_fs_ratio, "fp_to_fs_ratio");
    if (c.n_rb < c.m_ues)
        throw ValidationError("scenario: n_rb must be >= m_ues");
    if (c.num_secondary < 1)
        throw ValidationError("scenario: num_secondary must be >= 1");
    if (!(c.rb_bandwidth_hz > 0.0))
        throw ValidationError("scenario: rb_bandwidth_hz must be positive");
    validate_mcs_table(c.mcs);
}

ScenarioConfig scenario_preset(ScenarioName name)
{
    ScenarioConfig c;
    c.name = name;
    switch (name) {
    case ScenarioName::HighForwarding:
        c.big_r = {1e9, 1e9};
        break;
    case ScenarioName::LimitedPrimary:
        c.fp_to_fs_ratio = Range{0.2, 0.2};
        break;
    case ScenarioName::CommDominated:
        c.alpha = {45.0, 45.0};
        break;
    case ScenarioName::CompDominated:
        c.f_p_total = {6e9, 10e9};
        c.f_s_total = {6e9, 10e9};
        break;
    case ScenarioName::Custom:
        break;
    }
    return c;
}

ScenarioConfig scenario_preset(std::string_view name)
{
    return scenario_preset(parse_scenario_name(name));
}

Instance sample_trial(const ScenarioConfig& c, std::uint64_t trial_index)
{
    Instance in;
    auto& sys = in.system;
    sys.n_rb = c.n_rb;
    sys.num_secondary = c.num_secondary;
    sys.rb_bandwidth_hz = c.rb_bandwidth_hz;

    // stream 0: system-wide draws; stream 1 + i: UE i
    CounterRng sys_rng(c.seed, trial_index, 0);
    for (int j = 0; j < c.num_secondary; ++j)
        sys.f_s_total.push_back(sys_rng.uniform(c.f_s_total.lo, c.f_s_total.hi));
    if (c.fp_to_fs_ratio)
        sys.f_p_total =
            sys_rng.uniform(c.fp_to_fs_ratio->lo, c.fp_to_fs_ratio->hi) * sys.f_s_total[0];
    else
        sys.f_p_total = sys_rng.uniform(c.f_p_total.lo, c.f_p_total.hi);

    const double rho_lo = std::max(kRhoFloor, c.rho_mean - c.rho_halfwidth);
    const double rho_hi = std::min(1.0, c.rho_mean + c.rho_halfwidth);

    for (int i = 0; i < c.m_ues; ++i) {
        CounterRng rng(c.seed, trial_index, 1 + static_cast<std::uint64_t>(i));
        ChannelState ch;
        ch.r_p = snr_to_rate(rng.uniform(c.snr_db.lo, c.snr_db.hi), c.rb_bandwidth_hz, c.mcs);
        for (int j = 0; j < c.num_secondary; ++j)
            ch.r_s.push_back(rng.uniform(rho_lo, rho_hi) * ch.r_p);
        TaskSpec t;
        t.b = rng.uniform(c.b.lo, c.b.hi);
        t.alpha = rng.uniform(c.alpha.lo, c.alpha.hi);
        ch.big_r = rng.uniform(c.big_r.lo, c.big_r.hi);
        in.tasks.push_back(t);
        in.channels.push_back(std::move(ch));
    }
    assign_uniform_beta(in.tasks);
    return in;
}

} // namespace edgepart
