#pragma once

#include "edgepart/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace edgepart {

struct McsEntry {
    double min_snr_db = 0.0;
    std::string modulation;
    double code_rate = 0.0;
    double spectral_eff = 0.0; ///< bits/s/Hz
};

using McsTable = std::vector<McsEntry>;

/// 15-entry CQI-style table (QPSK/16QAM/64QAM).
const McsTable& default_mcs_table();

/// Parses `min_snr_db spectral_eff` lines; `#` starts a comment.
McsTable parse_mcs_table(std::istream& in);
McsTable load_mcs_table(const std::string& path);

/// Throws ValidationError unless thresholds and efficiencies strictly increase.
void validate_mcs_table(const McsTable& table);

/// Rate of one RB: bandwidth times the efficiency of the highest entry whose
/// threshold is <= snr_db; below the first threshold the first entry is used.
double snr_to_rate(double snr_db, double rb_bandwidth_hz, const McsTable& table);

struct Range {
    double lo = 0.0;
    double hi = 0.0;

    double mid() const { return 0.5 * (lo + hi); }
};

enum class ScenarioName { HighForwarding, LimitedPrimary, CommDominated, CompDominated, Custom };

std::string_view to_string(ScenarioName name);
ScenarioName parse_scenario_name(std::string_view text);

struct ScenarioConfig {
    ScenarioName name = ScenarioName::Custom;
    int m_ues = 8;
    double rho_mean = 0.5;
    double rho_halfwidth = 0.05;
    Range snr_db{0.0, 30.0};
    Range b{0.8e6, 1.2e6};
    Range alpha{248.0, 248.0};
    Range big_r{50e6, 100e6};
    Range f_p_total{2e10, 3e10};
    Range f_s_total{2e10, 3e10};
    /// When set, f_p_total = ratio * f_s_total[0] and the f_p_total range is unused.
    std::optional<Range> fp_to_fs_ratio;
    int n_rb = 100;
    double rb_bandwidth_hz = 180e3;
    int num_secondary = 1;
    McsTable mcs = default_mcs_table();
    std::uint64_t seed = 1;
};

void validate_scenario(const ScenarioConfig& cfg);

ScenarioConfig scenario_preset(ScenarioName name);
ScenarioConfig scenario_preset(std::string_view name);

/// Lower bound on per-UE rho draws.
inline constexpr double kRhoFloor = 0.01;

/// One random instance, a pure function of (cfg.seed, trial_index).
Instance sample_trial(const ScenarioConfig& cfg, std::uint64_t trial_index);

} // namespace edgepart
