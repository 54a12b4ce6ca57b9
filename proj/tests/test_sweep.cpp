#include <gtest/gtest.h>

#include <algorithm>

#include "cqnc/cqnc.hpp"
#include "test_util.hpp"

using namespace cqnc;

namespace {

SweepConfig fig2_frequency(std::vector<Channel> channels, std::size_t count = 201) {
    SweepConfig c;
    c.axis = Axis::frequency;
    c.params = to_system_params(fig2_preset().values);
    c.match_cqnc = true;
    c.channels = std::move(channels);
    c.range = default_frequency_grid(c.params);
    c.range.count = count;
    return c;
}

SweepConfig power_config(const SystemParams& p, std::vector<Channel> channels, bool match) {
    SweepConfig c;
    c.axis = Axis::power;
    c.params = p;
    c.match_cqnc = match;
    c.channels = std::move(channels);
    c.range = default_power_grid();
    return c;
}

std::size_t argmin(const std::vector<double>& v) {
    return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

TEST(Grid, LinearAndLogEndpoints) {
    const auto lin = make_grid({1.0, 2.0, 5, Spacing::linear});
    EXPECT_EQ(lin, (std::vector<double>{1.0, 1.25, 1.5, 1.75, 2.0}));
    const auto lg = make_grid({1e-3, 1e3, 7, Spacing::log});
    EXPECT_EQ(lg.front(), 1e-3);
    EXPECT_EQ(lg.back(), 1e3);
    EXPECT_LT(rel_err(lg[3], 1.0), 1e-14);
}

TEST(Grid, RejectsBadRanges) {
    EXPECT_THROW(make_grid({1.0, 2.0, 1, Spacing::linear}), ConfigError);
    EXPECT_THROW(make_grid({2.0, 1.0, 3, Spacing::linear}), ConfigError);
    EXPECT_THROW(make_grid({0.0, 1.0, 3, Spacing::log}), ConfigError);
}

TEST(Grid, DefaultBands) {
    const auto p = to_system_params(fig2_preset().values);
    const auto f = default_frequency_grid(p);
    EXPECT_DOUBLE_EQ(f.min, 150e3);
    EXPECT_DOUBLE_EQ(f.max, 450e3);
    EXPECT_EQ(f.count, 2000u);
    const auto pw = default_power_grid();
    EXPECT_EQ(pw.min, 1e-15);
    EXPECT_EQ(pw.max, 1e-6);
    EXPECT_EQ(pw.spacing, Spacing::log);
}

TEST(FrequencySweep, CanonicalChannelsAndShape) {
    const auto s = frequency_sweep(fig2_frequency({Channel::oracle, Channel::sql, Channel::cqnc, Channel::sql}));
    ASSERT_EQ(s.channels.size(), 3u);
    EXPECT_EQ(s.channels[0].first, "sql");
    EXPECT_EQ(s.channels[1].first, "cqnc");
    EXPECT_EQ(s.channels[2].first, "oracle");
    EXPECT_EQ(s.axis_label, "frequency_hz");
    for (const auto& [_, v] : s.channels) {
        ASSERT_EQ(v.size(), s.axis_values.size());
        for (double x : v) EXPECT_TRUE(std::isfinite(x));
    }
    EXPECT_TRUE(s.metadata.at("errors").empty());
}

TEST(FrequencySweep, CqncBelowSqlAwayFromResonance) {
    const auto s = frequency_sweep(fig2_frequency({Channel::sql, Channel::cqnc}, 2000));
    const double f_m = fig2_preset().values.omega_m;
    const auto& sql = s.channel("sql");
    const auto& cq = s.channel("cqnc");
    for (std::size_t i = 0; i < s.axis_values.size(); ++i) {
        if (std::abs(s.axis_values[i] - f_m) > 0.02 * f_m) {
            EXPECT_LT(cq[i], sql[i]) << s.axis_values[i];
        }
    }
}

TEST(FrequencySweep, OpaGainLowersHybridCurveOffResonance) {
    auto a = fig2_frequency({Channel::added});
    auto b = a;
    a.params.opa_gain = 0.1 * a.params.kappa;
    b.params.opa_gain = 0.3 * b.params.kappa;
    const auto sa = frequency_sweep(a), sb = frequency_sweep(b);
    const double f_m = fig2_preset().values.omega_m;
    for (std::size_t i = 0; i < sa.axis_values.size(); ++i) {
        if (std::abs(sa.axis_values[i] - f_m) > 0.02 * f_m) {
            EXPECT_LE(sb.channel("added")[i], sa.channel("added")[i] * (1.0 + 1e-12));
        }
    }
}

TEST(FrequencySweep, DeterministicAndChannelIndependent) {
    const auto a = frequency_sweep(fig2_frequency({Channel::sql, Channel::added}));
    const auto b = frequency_sweep(fig2_frequency({Channel::sql, Channel::added}));
    EXPECT_EQ(to_json_text(a), to_json_text(b));
    const auto c = frequency_sweep(fig2_frequency({Channel::sql, Channel::added, Channel::oracle, Channel::standard}));
    EXPECT_EQ(a.channel("added"), c.channel("added"));
    EXPECT_EQ(a.channel("sql"), c.channel("sql"));
}

TEST(FrequencySweep, PerPointErrorsRecorded) {
    SweepConfig c = fig2_frequency({Channel::sql, Channel::oracle}, 5);
    c.match_cqnc = false;
    c.params.opa_gain = c.params.kappa / 4.0;
    c.range = {0.0, 1000.0, 5, Spacing::linear};
    const auto s = frequency_sweep(c);
    EXPECT_TRUE(std::isnan(s.channel("oracle")[0]));
    EXPECT_TRUE(std::isfinite(s.channel("sql")[0]));
    EXPECT_TRUE(std::isfinite(s.channel("oracle")[1]));
    EXPECT_EQ(s.metadata.at("errors").size(), 1u);
    EXPECT_EQ(s.metadata.at("stability").at("annotation"), "unstable model");
}

TEST(FrequencySweep, PhysicalNormalizationScalesAll) {
    auto c = fig2_frequency({Channel::cqnc, Channel::added}, 3);
    const auto a = frequency_sweep(c);
    c.options.normalization = Normalization::physical;
    const auto b = frequency_sweep(c);
    const double unit = force_psd_unit(c.params);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(b.channel("added")[i], unit * a.channel("added")[i]);
    EXPECT_EQ(b.metadata.at("normalization"), "physical");
}

TEST(FrequencySweep, RequiresFrequencyAxis) {
    auto c = fig2_frequency({Channel::sql});
    c.axis = Axis::power;
    EXPECT_THROW(frequency_sweep(c), ConfigError);
}

TEST(PowerSweep, StandardIsUShapedWithMinimumAtSqlPower) {
    const auto p = to_system_params(fig2_preset().values);
    const auto s = power_sweep(power_config(p, {Channel::standard}, false));
    const auto& v = s.channel("standard");
    const auto i = argmin(v);
    ASSERT_GT(i, 0u);
    ASSERT_LT(i, v.size() - 1);
    for (std::size_t k = 1; k <= i; ++k) EXPECT_LT(v[k], v[k - 1]);
    for (std::size_t k = i + 1; k < v.size(); ++k) EXPECT_GT(v[k], v[k - 1]);
    const double p_sql = sql_reference(p.omega_m, p).p_sql;
    EXPECT_LE(s.axis_values[i - 1], p_sql);
    EXPECT_GE(s.axis_values[i + 1], p_sql);
}

TEST(PowerSweep, AddedChannelNeverRises) {
    const auto p = to_system_params(fig2_preset().values);
    const auto s = power_sweep(power_config(p, {Channel::added}, true));
    const auto& v = s.channel("added");
    for (std::size_t k = 1; k < v.size(); ++k) EXPECT_LE(v[k], v[k - 1] * (1.0 + 1e-12));
}

TEST(MinPower, StandardAtResonanceHitsSql) {
    const auto p = to_system_params(fig2_preset().values);
    const auto r = find_min_power(p, Channel::standard, p.omega_m);
    EXPECT_TRUE(r.interior);
    EXPECT_NEAR(r.s_star, 1.0, 1e-6);
    EXPECT_LT(rel_err(r.p_star, sql_reference(p.omega_m, p).p_sql), 1e-4);
}

TEST(MinPower, OptimumOutsideBracketIsReported) {
    // Table I rates put the resonant optimum near 2e-4 W, above the 1e6 pW bracket.
    const auto p = to_system_params(table1_preset().values);
    ASSERT_GT(sql_reference(p.omega_m, p).p_sql, min_power_bracket_high);
    const auto r = find_min_power(p, Channel::standard, p.omega_m);
    EXPECT_FALSE(r.interior);
    EXPECT_EQ(r.message, "no interior minimum");
    EXPECT_EQ(r.p_star, min_power_bracket_high);
}

TEST(MinPower, ThermalShiftsMinimumByOccupation) {
    const auto p = to_system_params(fig2_preset().values);
    SpectrumOptions on;
    on.include_thermal = true;
    const auto a = find_min_power(p, Channel::standard, p.omega_m);
    const auto b = find_min_power(p, Channel::standard, p.omega_m, on);
    EXPECT_LT(rel_err(b.s_star - a.s_star, thermal_occupation(p.temperature, p.omega_m)), 1e-9);
    const auto c = find_min_power(p, Channel::added, p.omega_m, {}, true);
    const auto d = find_min_power(p, Channel::added, p.omega_m, on, true);
    EXPECT_LT(rel_err(d.s_star - c.s_star, thermal_occupation(p.temperature, p.omega_m)), 1e-9);
}

TEST(MinPower, AddedChannelHasNoInteriorMinimumAndGainLowersKnee) {
    auto p = to_system_params(fig2_preset().values);
    p.opa_gain = 0.1 * p.kappa;
    const auto low = find_min_power(p, Channel::added, p.omega_m, {}, true);
    p.opa_gain = 0.3 * p.kappa;
    const auto high = find_min_power(p, Channel::added, p.omega_m, {}, true);
    EXPECT_FALSE(low.interior);
    EXPECT_EQ(low.message, "no interior minimum");
    EXPECT_EQ(low.p_star, min_power_bracket_high);
    ASSERT_TRUE(low.p_knee && high.p_knee);
    EXPECT_LT(*high.p_knee, *low.p_knee);
}

TEST(MinPower, RejectsPowerIndependentChannel) {
    const auto p = to_system_params(fig2_preset().values);
    EXPECT_THROW(find_min_power(p, Channel::cqnc, p.omega_m), ConfigError);
}

TEST(MismatchSweep, DeltaOverlayCloseToPerfect) {
    SweepConfig c;
    c.params = to_system_params(fig4_preset().values);
    c.match_cqnc = true;
    c.channels = {Channel::sql};
    c.range = default_frequency_grid(c.params);
    c.mismatch = MismatchSpec::decay_rate(0.3);
    const auto s = mismatch_sweep(c);
    ASSERT_TRUE(s.has_channel("cqnc") && s.has_channel("mismatch"));
    double gap = 0.0;
    for (std::size_t i = 0; i < s.axis_values.size(); ++i)
        gap = std::max(gap, rel_err(s.channel("mismatch")[i], s.channel("cqnc")[i]));
    EXPECT_LT(gap, 0.05);
}

TEST(MismatchSweep, EpsilonOverlayBetweenPerfectAndSql) {
    SweepConfig c;
    c.params = to_system_params(fig4_preset().values);
    c.match_cqnc = true;
    c.channels = {Channel::sql};
    c.range = default_frequency_grid(c.params);
    c.range.count = 200;
    c.mismatch = MismatchSpec::coupling(0.01);
    const auto s = mismatch_sweep(c);
    for (std::size_t i = 0; i < s.axis_values.size(); ++i) {
        EXPECT_GT(s.channel("mismatch")[i], s.channel("cqnc")[i]);
        EXPECT_LT(s.channel("mismatch")[i], s.channel("sql")[i]);
    }
}

TEST(MismatchSweep, DeltaAxisMonotone) {
    SweepConfig c;
    c.axis = Axis::mismatch_delta;
    c.params = to_system_params(fig4_preset().values);
    c.match_cqnc = true;
    c.eval_omega = 0.5 * c.params.omega_m;
    c.range = {0.0, 1.0, 51, Spacing::linear};
    const auto s = mismatch_sweep(c);
    EXPECT_EQ(s.axis_label, "delta");
    const auto& v = s.channel("mismatch");
    for (std::size_t k = 1; k < v.size(); ++k) EXPECT_GE(v[k], v[k - 1]);
}

TEST(MismatchSweep, FrequencyAxisNeedsSpec) {
    SweepConfig c;
    c.params = to_system_params(fig4_preset().values);
    c.range = default_frequency_grid(c.params);
    EXPECT_THROW(mismatch_sweep(c), ConfigError);
}

TEST(Metadata, PresetStabilityAnnotations) {
    const std::pair<Preset, bool> cases[] = {{table1_preset(), false}, {fig2_preset(), true}, {fig4_preset(), true}};
    for (const auto& [preset, stable] : cases) {
        SweepConfig c;
        c.params = to_system_params(preset.values);
        c.match_cqnc = preset.match_cqnc;
        c.channels = {Channel::sql};
        c.range = default_frequency_grid(c.params);
        c.range.count = 2;
        const auto s = frequency_sweep(c);
        EXPECT_EQ(s.metadata.at("stability").at("stable").get<bool>(), stable) << preset.name;
        EXPECT_EQ(s.metadata.at("version"), std::string(tool_version));
        EXPECT_NE(s.metadata.at("units").get<std::string>().find("2*pi"), std::string::npos);
    }
}
