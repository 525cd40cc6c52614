#include "doctest.h"

#include "edgepart/channel.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace edgepart;

TEST_SUITE("channel") {

TEST_CASE("rate lookup in the default table")
{
    const auto& t = default_mcs_table();
    REQUIRE(t.size() == 15);
    CHECK(snr_to_rate(30.0, 180e3, t) == doctest::Approx(999846.0).epsilon(1e-12));
    CHECK(snr_to_rate(0.2, 180e3, t) == doctest::Approx(108288.0).epsilon(1e-12));
    CHECK(snr_to_rate(0.19, 180e3, t) == doctest::Approx(180e3 * 0.3770));
    CHECK(snr_to_rate(-30.0, 180e3, t) == doctest::Approx(180e3 * 0.1523));
    CHECK(t.front().modulation == "QPSK");
    CHECK(t.back().modulation == "64QAM");
}

TEST_CASE("rate is monotone and bounded by the table")
{
    const auto& t = default_mcs_table();
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> snr(-20, 40);
    for (int k = 0; k < 10000; ++k) {
        double a = snr(g), b = snr(g);
        if (a > b)
            std::swap(a, b);
        const double ra = snr_to_rate(a, 180e3, t), rb = snr_to_rate(b, 180e3, t);
        CHECK(ra <= rb);
        CHECK(ra >= 180e3 * t.front().spectral_eff);
        CHECK(rb <= 180e3 * t.back().spectral_eff);
    }
}

TEST_CASE("table files")
{
    std::istringstream good("# threshold efficiency\n-5 0.2\n\n3 1.0  # comment\n12 2.5\n");
    const auto t = parse_mcs_table(good);
    REQUIRE(t.size() == 3);
    CHECK(snr_to_rate(4.0, 1.0, t) == 1.0);

    std::istringstream unsorted("1 0.5\n0 0.7\n");
    CHECK_THROWS_AS(parse_mcs_table(unsorted), ValidationError);
    std::istringstream junk("1 0.5\nabc\n");
    try {
        parse_mcs_table(junk);
        FAIL("expected an error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(parse_mcs_table(empty), ValidationError);
}

TEST_CASE("presets")
{
    const auto hf = scenario_preset("high_forwarding");
    CHECK(hf.big_r.lo == 1e9);
    CHECK(hf.big_r.hi == 1e9);
    CHECK(scenario_preset("comm_dominated").alpha.lo == 45.0);
    CHECK(scenario_preset("comm_dominated").alpha.hi == 45.0);
    const auto cd = scenario_preset(ScenarioName::CompDominated);
    CHECK(cd.f_p_total.lo == 6e9);
    CHECK(cd.f_s_total.hi == 10e9);
    const auto lp = scenario_preset(ScenarioName::LimitedPrimary);
    REQUIRE(lp.fp_to_fs_ratio.has_value());
    CHECK(lp.fp_to_fs_ratio->lo == 0.2);
    const auto c = scenario_preset("custom");
    CHECK(c.b.lo == 0.8e6);
    CHECK(c.b.hi == 1.2e6);
    CHECK(c.alpha.lo == 248.0);
    CHECK(c.big_r.lo == 50e6);
    CHECK(c.big_r.hi == 100e6);
    CHECK(c.f_p_total.lo == 2e10);
    CHECK(c.f_s_total.hi == 3e10);
    CHECK(c.n_rb == 100);
    CHECK_THROWS_AS(scenario_preset("urban"), ValidationError);
}

TEST_CASE("scenario validation")
{
    auto c = scenario_preset(ScenarioName::Custom);
    c.rho_mean = 0.0;
    CHECK_THROWS_AS(validate_scenario(c), ValidationError);
    c = scenario_preset(ScenarioName::Custom);
    c.b = {2.0, 1.0};
    CHECK_THROWS_AS(validate_scenario(c), ValidationError);
    c = scenario_preset(ScenarioName::Custom);
    c.m_ues = 0;
    CHECK_THROWS_AS(validate_scenario(c), ValidationError);
}

TEST_CASE("trials are reproducible and independent of each other")
{
    auto c = scenario_preset(ScenarioName::Custom);
    c.m_ues = 5;
    const Instance a = sample_trial(c, 17);
    const Instance b = sample_trial(c, 17);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.channels[i].r_p == b.channels[i].r_p);
        CHECK(a.channels[i].r_s == b.channels[i].r_s);
        CHECK(a.tasks[i].b == b.tasks[i].b);
        CHECK(a.channels[i].big_r == b.channels[i].big_r);
    }
    CHECK(a.system.f_p_total == b.system.f_p_total);
    const Instance other = sample_trial(c, 18);
    CHECK(other.tasks[0].b != a.tasks[0].b);
    c.seed = 2;
    CHECK(sample_trial(c, 17).tasks[0].b != a.tasks[0].b);
}

TEST_CASE("sampled instances are valid")
{
    for (int s = 0; s < 4; ++s) {
        auto c = scenario_preset(static_cast<ScenarioName>(s));
        c.m_ues = 6;
        c.rho_mean = 0.98;
        for (std::uint64_t k = 0; k < 200; ++k) {
            const Instance in = sample_trial(c, k);
            CHECK_NOTHROW(validate_instance(in));
            for (const auto& ch : in.channels)
                CHECK(ch.r_s[0] <= ch.r_p);
        }
    }
    auto lp = scenario_preset(ScenarioName::LimitedPrimary);
    const Instance in = sample_trial(lp, 3);
    CHECK(in.system.f_p_total == doctest::Approx(0.2 * in.system.f_s_total[0]));
}

TEST_CASE("rho of one with no spread gives equal rates")
{
    auto c = scenario_preset(ScenarioName::Custom);
    c.rho_mean = 1.0;
    c.rho_halfwidth = 0.0;
    const Instance in = sample_trial(c, 4);
    for (const auto& ch : in.channels)
        CHECK(ch.r_s[0] == ch.r_p);
}

TEST_CASE("sampled rho averages to the target")
{
    for (double target : {0.1, 0.5, 0.9}) {
        auto c = scenario_preset(ScenarioName::Custom);
        c.m_ues = 1;
        c.rho_mean = target;
        double sum = 0.0;
        const int trials = 10000;
        for (int k = 0; k < trials; ++k) {
            const Instance in = sample_trial(c, static_cast<std::uint64_t>(k));
            sum += in.channels[0].r_s[0] / in.channels[0].r_p;
        }
        CHECK(std::abs(sum / trials - target) <= 0.01);
    }
}

TEST_CASE("multiple secondaries are drawn per server")
{
    auto c = scenario_preset(ScenarioName::Custom);
    c.num_secondary = 3;
    const Instance in = sample_trial(c, 0);
    CHECK(in.system.f_s_total.size() == 3);
    for (const auto& ch : in.channels)
        CHECK(ch.r_s.size() == 3);
    CHECK_NOTHROW(validate_instance(in));
}

} // TEST_SUITE
