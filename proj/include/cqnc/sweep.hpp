#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cqnc/constants.hpp"
#include "cqnc/error.hpp"
#include "cqnc/linear_model.hpp"
#include "cqnc/params.hpp"
#include "cqnc/response.hpp"
#include "cqnc/spectra.hpp"
#include "cqnc/version.hpp"

namespace cqnc {

enum class Axis { frequency, power, mismatch_delta, mismatch_epsilon };
enum class Spacing { linear, log };
enum class Channel { sql, standard, added, cqnc, mismatch, oracle };

inline constexpr std::array all_channels = {Channel::sql,  Channel::standard, Channel::added,
                                            Channel::cqnc, Channel::mismatch, Channel::oracle};

inline std::string_view to_string(Channel c) {
    switch (c) {
        case Channel::sql: return "sql";
        case Channel::standard: return "standard";
        case Channel::added: return "added";
        case Channel::cqnc: return "cqnc";
        case Channel::mismatch: return "mismatch";
        case Channel::oracle: return "oracle";
    }
    return "?";
}

inline std::string_view to_string(Axis a) {
    switch (a) {
        case Axis::frequency: return "frequency";
        case Axis::power: return "power";
        case Axis::mismatch_delta: return "mismatch_delta";
        case Axis::mismatch_epsilon: return "mismatch_epsilon";
    }
    return "?";
}

inline std::string_view to_string(Spacing s) { return s == Spacing::linear ? "linear" : "log"; }

inline std::string_view axis_label(Axis a) {
    switch (a) {
        case Axis::frequency: return "frequency_hz";
        case Axis::power: return "power_w";
        case Axis::mismatch_delta: return "delta";
        case Axis::mismatch_epsilon: return "epsilon";
    }
    return "?";
}

/// Grid in axis units: Hz for frequency, W for power, dimensionless for the
/// mismatch axes.
struct GridSpec {
    double min{};
    double max{};
    std::size_t count{};
    Spacing spacing{Spacing::linear};
};

inline void validate(const GridSpec& g) {
    if (g.count < 2) throw ConfigError("count", "a sweep needs at least 2 points");
    if (!std::isfinite(g.min) || !std::isfinite(g.max) || !(g.min < g.max))
        throw ConfigError("min", "requires finite min < max");
    if (g.spacing == Spacing::log && !(g.min > 0.0)) throw ConfigError("spacing", "log spacing requires min > 0");
}

/// Endpoints are reproduced exactly.
inline std::vector<double> make_grid(const GridSpec& g) {
    validate(g);
    std::vector<double> v(g.count);
    const double last = static_cast<double>(g.count - 1);
    if (g.spacing == Spacing::linear) {
        for (std::size_t i = 0; i < g.count; ++i) v[i] = g.min + (g.max - g.min) * (static_cast<double>(i) / last);
    } else {
        const double a = std::log(g.min), b = std::log(g.max);
        for (std::size_t i = 0; i < g.count; ++i) v[i] = std::exp(a + (b - a) * (static_cast<double>(i) / last));
    }
    v.front() = g.min;
    v.back() = g.max;
    return v;
}

inline constexpr double min_power_bracket_low = 1e-15;  // 1e-3 pW
inline constexpr double min_power_bracket_high = 1e-6;  // 1e6 pW

inline GridSpec default_frequency_grid(const SystemParams& p) {
    const double f = p.omega_m / two_pi;
    return {0.5 * f, 1.5 * f, 2000, Spacing::linear};
}

inline GridSpec default_power_grid() { return {min_power_bracket_low, min_power_bracket_high, 181, Spacing::log}; }

struct SweepConfig {
    Axis axis{Axis::frequency};
    GridSpec range;
    std::vector<Channel> channels;
    SystemParams params;                   // params.power drives frequency and mismatch sweeps
    std::optional<double> eval_omega;      // power and mismatch axes; defaults to Ω [rad/s]
    std::optional<MismatchSpec> mismatch;  // frequency-axis mismatch overlays
    SpectrumOptions options;
    bool match_cqnc{false};  // re-match γ_qE, Δ_qe, G_cs to g at every point
};

struct SpectrumSeries {
    std::string axis_label;
    std::vector<double> axis_values;
    std::vector<std::pair<std::string, std::vector<double>>> channels;
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

    const std::vector<double>& channel(std::string_view name) const {
        for (const auto& [n, v] : channels)
            if (n == name) return v;
        throw Error("series has no channel '" + std::string(name) + "'");
    }
    bool has_channel(std::string_view name) const {
        return std::any_of(channels.begin(), channels.end(), [&](const auto& c) { return c.first == name; });
    }
};

inline nlohmann::ordered_json params_json(const SystemParams& p) {
    return {{"kappa", p.kappa},           {"omega_m", p.omega_m},   {"gamma_m", p.gamma_m},
            {"gamma_qe", p.gamma_qe},     {"g0", p.g0},             {"g_cs", p.g_cs},
            {"opa_gain", p.opa_gain},     {"opa_phase", p.opa_phase}, {"delta_c", p.delta_c},
            {"delta_qe", p.delta_qe},     {"omega_l", p.omega_l},   {"power", p.power},
            {"temperature", p.temperature}, {"mass", p.mass}};
}

namespace detail {

// Params seen by one grid point: matching first, then the deliberate mismatch.
inline SystemParams point_params(const SweepConfig& cfg, const SystemParams& base, double g) {
    return cfg.match_cqnc ? match_cqnc(base, g) : base;
}

inline SystemParams oracle_params(const SystemParams& matched, const std::optional<MismatchSpec>& mm) {
    if (!mm) return matched;
    SystemParams p = matched;
    if (mm->kind == MismatchKind::decay_rate)
        p.gamma_qe = (1.0 + mm->delta) * p.gamma_m;
    else
        p.g_cs *= 1.0 + mm->epsilon;
    return p;
}

inline double evaluate(Channel c, double omega, double g, const SystemParams& p, const std::optional<MismatchSpec>& mm,
                       const SpectrumOptions& opts) {
    SpectrumOptions dimless = opts;
    dimless.normalization = Normalization::dimensionless;
    switch (c) {
        case Channel::sql: return s_f_sql(omega, p);
        case Channel::standard: return s_f_standard(omega, p, g, dimless);
        case Channel::added: return s_f_added(omega, p, g, dimless);
        case Channel::cqnc: return s_f_cqnc(omega, p);
        case Channel::mismatch:
            if (!mm) throw ConfigError("mismatch", "mismatch channel needs a mismatch specification");
            return s_f_mismatch(omega, p, g, *mm, dimless.coefficients);
        case Channel::oracle:
            return oracle_added_spectrum(build_linear_model(oracle_params(p, mm), g), omega, dimless);
    }
    return 0.0;
}

inline std::vector<Channel> canonical_channels(std::vector<Channel> cs) {
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    return cs;
}

struct Point {
    double omega;
    double power;
    std::optional<MismatchSpec> mismatch;
};

inline SpectrumSeries run(const SweepConfig& cfg, const std::vector<Point>& points, std::vector<double> axis_values) {
    validate(cfg.params);
    const auto channels = canonical_channels(cfg.channels);
    if (channels.empty()) throw ConfigError("channels", "at least one channel is required");

    SpectrumSeries out;
    out.axis_label = std::string(axis_label(cfg.axis));
    out.axis_values = std::move(axis_values);

    const double unit = cfg.options.normalization == Normalization::physical ? force_psd_unit(cfg.params) : 1.0;
    nlohmann::ordered_json errors = nlohmann::ordered_json::array();

    for (Channel c : channels) {
        std::vector<double> values(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            const Point& pt = points[i];
            try {
                const double g = coupling_from_power(pt.power, cfg.params).g;
                const SystemParams p = point_params(cfg, cfg.params, g);
                values[i] = unit * evaluate(c, pt.omega, g, p, pt.mismatch, cfg.options);
            } catch (const Error& e) {
                values[i] = std::numeric_limits<double>::quiet_NaN();
                errors.push_back({{"channel", to_string(c)}, {"index", i}, {"message", e.what()}});
            }
        }
        out.channels.emplace_back(std::string(to_string(c)), std::move(values));
    }

    const double g_cfg = coupling_from_power(cfg.params.power, cfg.params).g;
    const SystemParams p_cfg = point_params(cfg, cfg.params, g_cfg);
    const auto stab = stability_check(build_linear_model(detail::oracle_params(p_cfg, cfg.mismatch), g_cfg));

    auto& md = out.metadata;
    md["tool"] = tool_name;
    md["version"] = tool_version;
    md["units"] =
        "config frequencies and rates in Hz (multiplied by 2*pi internally); params_si in rad/s, W, K, kg; "
        "spectra in units of hbar*m*Omega*gamma_m unless normalization is physical (N^2/Hz)";
    md["axis"] = to_string(cfg.axis);
    md["normalization"] = cfg.options.normalization == Normalization::physical ? "physical" : "dimensionless";
    md["thermal"] = cfg.options.include_thermal;
    md["coefficients"] = cfg.options.coefficients == CoefficientSet::literal ? "literal" : "consistent";
    md["match_cqnc"] = cfg.match_cqnc;
    if (cfg.mismatch)
        md["mismatch"] = {{"kind", cfg.mismatch->kind == MismatchKind::decay_rate ? "delta" : "epsilon"},
                          {"value", cfg.mismatch->value()}};
    else
        md["mismatch"] = nullptr;
    if (cfg.axis != Axis::frequency) md["eval_omega"] = cfg.eval_omega.value_or(cfg.params.omega_m);
    md["params_si"] = params_json(cfg.params);
    md["stability"] = {{"stable", stab.stable},
                       {"determinate", stab.determinate},
                       {"max_real_eigenvalue", stab.max_real_eigenvalue},
                       {"annotation", stab.stable ? "stable" : "unstable model"}};
    md["errors"] = std::move(errors);
    return out;
}

}  // namespace detail

inline SpectrumSeries frequency_sweep(const SweepConfig& cfg) {
    if (cfg.axis != Axis::frequency) throw ConfigError("axis", "frequency_sweep requires axis = frequency");
    const auto grid = make_grid(cfg.range);
    std::vector<detail::Point> pts;
    pts.reserve(grid.size());
    for (double f : grid) pts.push_back({hz(f), cfg.params.power, cfg.mismatch});
    return detail::run(cfg, pts, grid);
}

inline SpectrumSeries power_sweep(const SweepConfig& cfg) {
    if (cfg.axis != Axis::power) throw ConfigError("axis", "power_sweep requires axis = power");
    const auto grid = make_grid(cfg.range);
    if (grid.front() < 0.0) throw ConfigError("min", "power must be >= 0");
    const double omega = cfg.eval_omega.value_or(cfg.params.omega_m);
    std::vector<detail::Point> pts;
    pts.reserve(grid.size());
    for (double P : grid) pts.push_back({omega, P, cfg.mismatch});
    return detail::run(cfg, pts, grid);
}

/// Perfect-CQNC and mismatched channels side by side, either over frequency
/// (with cfg.mismatch) or over the mismatch parameter at a fixed frequency.
inline SpectrumSeries mismatch_sweep(SweepConfig cfg) {
    cfg.channels.push_back(Channel::cqnc);
    cfg.channels.push_back(Channel::mismatch);
    if (cfg.axis == Axis::frequency) {
        if (!cfg.mismatch) throw ConfigError("mismatch", "a frequency mismatch sweep needs a mismatch specification");
        validate(*cfg.mismatch);
        return frequency_sweep(cfg);
    }
    if (cfg.axis != Axis::mismatch_delta && cfg.axis != Axis::mismatch_epsilon)
        throw ConfigError("axis", "mismatch_sweep requires axis = frequency, mismatch_delta or mismatch_epsilon");
    const auto grid = make_grid(cfg.range);
    if (grid.front() <= -1.0) throw ConfigError("min", "relative mismatch must stay > -1");
    const double omega = cfg.eval_omega.value_or(cfg.params.omega_m);
    const bool decay = cfg.axis == Axis::mismatch_delta;
    cfg.mismatch.reset();
    std::vector<detail::Point> pts;
    pts.reserve(grid.size());
    for (double v : grid)
        pts.push_back({omega, cfg.params.power, decay ? MismatchSpec::decay_rate(v) : MismatchSpec::coupling(v)});
    return detail::run(cfg, pts, grid);
}

inline SpectrumSeries run_sweep(const SweepConfig& cfg) {
    switch (cfg.axis) {
        case Axis::frequency: return cfg.mismatch ? mismatch_sweep(cfg) : frequency_sweep(cfg);
        case Axis::power: return power_sweep(cfg);
        default: return mismatch_sweep(cfg);
    }
}

// ---------------------------------------------------------------------------

struct MinPowerResult {
    double p_star{};   // W
    double s_star{};   // channel value at p_star
    bool interior{};   // false: the minimum sits on the bracket boundary
    std::string message;
    // Added channel only: power at which the shot term equals the CQNC floor.
    std::optional<double> p_knee;
};

/// Minimizes a power-dependent channel over [1e-3 pW, 1e6 pW] in log-power:
/// a 10-per-decade scan locates the basin, golden-section search refines it to
/// a relative power width below 1e-7.
inline MinPowerResult find_min_power(const SystemParams& params, Channel channel, double eval_omega,
                                     const SpectrumOptions& opts = {}, bool match = false) {
    if (channel != Channel::standard && channel != Channel::added)
        throw ConfigError("channel", "find_min_power needs a power-dependent channel (standard or added)");
    validate(params);
    SpectrumOptions dimless = opts;
    dimless.normalization = Normalization::dimensionless;

    auto value_at = [&](double log_p) {
        const double P = std::pow(10.0, log_p);
        const double g = coupling_from_power(P, params).g;
        const SystemParams p = match ? match_cqnc(params, g) : params;
        return channel == Channel::standard ? s_f_standard(eval_omega, p, g, dimless)
                                            : s_f_added(eval_omega, p, g, dimless);
    };

    const double lo = std::log10(min_power_bracket_low), hi = std::log10(min_power_bracket_high);
    const int steps = static_cast<int>(std::lround((hi - lo) * 10.0));
    std::vector<double> scan(steps + 1);
    for (int i = 0; i <= steps; ++i) scan[i] = value_at(lo + (hi - lo) * i / steps);
    const auto best = static_cast<int>(std::min_element(scan.begin(), scan.end()) - scan.begin());

    MinPowerResult r;
    if (channel == Channel::added) {
        const SystemParams p = match ? match_cqnc(params, coupling_from_power(min_power_bracket_low, params).g) : params;
        SpectrumOptions quantum = dimless;
        quantum.include_thermal = false;
        const double floor = s_f_cqnc(eval_omega, p);
        const double g = coupling_from_power(min_power_bracket_low, params).g;
        const double shot = s_f_added(eval_omega, p, g, quantum) - floor;
        r.p_knee = min_power_bracket_low * shot / floor;
    }

    if (best == 0 || best == steps) {
        r.interior = false;
        r.p_star = std::pow(10.0, best == 0 ? lo : hi);
        r.s_star = scan[best];
        r.message = "no interior minimum";
        return r;
    }

    constexpr double inv_phi = 0.6180339887498949;
    double a = lo + (hi - lo) * (best - 1) / steps;
    double b = lo + (hi - lo) * (best + 1) / steps;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = value_at(c), fd = value_at(d);
    while (b - a > 1e-7 / std::log(10.0)) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = value_at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = value_at(d);
        }
    }
    const double x = 0.5 * (a + b);
    r.interior = true;
    r.p_star = std::pow(10.0, x);
    r.s_star = value_at(x);
    r.message = "interior minimum";
    return r;
}

}  // namespace cqnc
