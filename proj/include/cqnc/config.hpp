#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cqnc/constants.hpp"
#include "cqnc/error.hpp"
#include "cqnc/params.hpp"
#include "cqnc/presets.hpp"
#include "cqnc/spectra.hpp"
#include "cqnc/sweep.hpp"

// Flat `key = value` configuration documents. Rates and frequencies are in Hz,
// power in W, temperature in K, mass in kg. `#` starts a comment.

namespace cqnc {

enum class OutputFormat { csv, json };

struct RunConfig {
    std::string preset{"table1"};
    HumanParams human;  // canonical echo of the physical parameters
    bool match_cqnc{false};
    SpectrumOptions options;

    std::optional<Axis> axis;
    std::optional<double> min, max;
    std::optional<std::size_t> count;
    std::optional<Spacing> spacing;
    std::vector<Channel> channels;  // empty: subcommand default
    std::optional<double> eval_frequency_hz;
    std::optional<MismatchSpec> mismatch;
    Channel min_power_channel{Channel::standard};

    std::string output;  // empty: stdout
    OutputFormat format{OutputFormat::csv};

    SystemParams params() const { return to_system_params(human); }
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

inline double parse_number(const std::string& key, const std::string& text, std::size_t line) {
    double v{};
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (!text.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || text.empty()) throw ConfigError(key, "cannot parse number '" + text + "'", line);
    if (!std::isfinite(v)) throw ConfigError(key, "must be finite", line);
    return v;
}

inline bool parse_bool(const std::string& key, const std::string& text, std::size_t line) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError(key, "expected true or false, got '" + text + "'", line);
}

inline Channel parse_channel(const std::string& key, const std::string& text, std::size_t line) {
    for (Channel c : all_channels)
        if (to_string(c) == text) return c;
    throw ConfigError(key, "unknown channel '" + text + "' (expected sql, standard, added, cqnc, mismatch, oracle)",
                      line);
}

inline std::vector<Channel> parse_channels(const std::string& key, const std::string& text, std::size_t line) {
    std::vector<Channel> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(key, "empty channel name", line);
        out.push_back(parse_channel(key, item, line));
    }
    if (out.empty()) throw ConfigError(key, "at least one channel is required", line);
    return out;
}

inline Axis parse_axis(const std::string& key, const std::string& text, std::size_t line) {
    for (Axis a : {Axis::frequency, Axis::power, Axis::mismatch_delta, Axis::mismatch_epsilon})
        if (to_string(a) == text) return a;
    throw ConfigError(key, "unknown axis '" + text + "' (expected frequency, power, mismatch_delta, mismatch_epsilon)",
                      line);
}

struct Line {
    std::size_t number;
    std::string key;
    std::string value;
};

inline std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> out;
    std::size_t number = 0;
    std::set<std::string> seen;
    while (!text.empty()) {
        ++number;
        const auto nl = text.find('\n');
        std::string_view raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string body = trim(raw);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError("", "expected 'key = value', got '" + body + "'", number);
        Line l{number, trim(std::string_view(body).substr(0, eq)), trim(std::string_view(body).substr(eq + 1))};
        if (l.key.empty()) throw ConfigError("", "missing key before '='", number);
        if (l.value.empty()) throw ConfigError(l.key, "missing value", number);
        if (!seen.insert(l.key).second) throw ConfigError(l.key, "duplicate key", number);
        out.push_back(std::move(l));
    }
    return out;
}

}  // namespace detail

/// Validates the physical parameters and sweep settings of a parsed config.
/// `line_of` maps a key to the line it came from (0 when defaulted).
inline void validate(const RunConfig& c, const std::function<std::size_t(const std::string&)>& line_of = {}) {
    auto line = [&](const std::string& key) { return line_of ? line_of(key) : std::size_t{0}; };
    try {
        validate(c.params());
    } catch (const ConfigError& e) {
        // Re-raise with the config key's line.
        const std::string what = std::string(e.what()).substr(e.key.size() + 2);
        throw ConfigError(e.key, what, line(e.key));
    } catch (const UnsupportedError& e) {
        throw ConfigError("opa_phase", e.what(), line("opa_phase"));
    }
    if (c.count && *c.count < 2) throw ConfigError("count", "a sweep needs at least 2 points", line("count"));
    if (c.min && c.max && !(*c.min < *c.max)) throw ConfigError("min", "requires min < max", line("min"));
    if (c.spacing == Spacing::log && c.min && !(*c.min > 0.0))
        throw ConfigError("spacing", "log spacing requires min > 0", line("spacing"));
    if (c.eval_frequency_hz && !(*c.eval_frequency_hz >= 0.0))
        throw ConfigError("eval_frequency", "must be >= 0", line("eval_frequency"));
    if (c.mismatch && !(c.mismatch->value() > -1.0))
        throw ConfigError("mismatch_value", "relative mismatch must be > -1", line("mismatch_value"));
    if (c.min_power_channel != Channel::standard && c.min_power_channel != Channel::added)
        throw ConfigError("channel", "min-power channel must be standard or added", line("channel"));
}

/// Parses a configuration document. Omitted keys take their values from the
/// selected preset (Table I when none is named). Unless given explicitly, the
/// QD detuning follows omega_m and the OPA gain keeps the preset's ratio to kappa.
/// `preset_override` (the command-line preset) must agree with the document's.
inline RunConfig parse_config(std::string_view text, const std::optional<std::string>& preset_override = {}) {
    const auto lines = detail::split_lines(text);
    std::map<std::string, std::size_t> line_numbers;
    for (const auto& l : lines) line_numbers[l.key] = l.number;
    auto has = [&](const std::string& k) { return line_numbers.count(k) != 0; };

    RunConfig c;
    Preset preset = preset_override ? preset_by_name(*preset_override) : table1_preset();
    if (has("preset")) {
        const auto& l = *std::find_if(lines.begin(), lines.end(), [](const auto& x) { return x.key == "preset"; });
        try {
            preset = preset_by_name(l.value);
        } catch (const ConfigError&) {
            throw ConfigError("preset", "unknown preset '" + l.value + "' (expected table1, fig2 or fig4)", l.number);
        }
        if (preset_override && *preset_override != l.value)
            throw ConfigError("preset", "conflicts with --preset " + *preset_override, l.number);
    }
    c.preset = preset.name;
    c.human = preset.values;
    c.match_cqnc = preset.match_cqnc;
    const double preset_gain_ratio = preset.values.opa_gain / preset.values.kappa;
    const bool preset_detuning_follows = preset.values.delta_qe == preset.values.omega_m;

    HumanParams& h = c.human;
    const std::map<std::string, double*> numeric = {
        {"kappa", &h.kappa},       {"omega_m", &h.omega_m},         {"gamma_m", &h.gamma_m},
        {"gamma_qe", &h.gamma_qe}, {"g0", &h.g0},                   {"g_cs", &h.g_cs},
        {"opa_gain", &h.opa_gain}, {"opa_phase", &h.opa_phase},     {"delta_c", &h.delta_c},
        {"delta_qe", &h.delta_qe}, {"omega_l", &h.omega_l},         {"power", &h.power},
        {"temperature", &h.temperature}, {"mass", &h.mass},
    };

    if (has("opa_gain") && has("opa_gain_ratio"))
        throw ConfigError("opa_gain_ratio", "conflicts with opa_gain", line_numbers["opa_gain_ratio"]);
    if (has("omega_l") && has("wavelength"))
        throw ConfigError("wavelength", "conflicts with omega_l", line_numbers["wavelength"]);

    std::optional<double> gain_ratio;
    std::optional<std::string> mismatch_kind;
    std::optional<double> mismatch_value;

    for (const auto& [n, key, value] : lines) {
        if (key == "preset") continue;
        if (auto it = numeric.find(key); it != numeric.end()) {
            *it->second = detail::parse_number(key, value, n);
        } else if (key == "opa_gain_ratio") {
            gain_ratio = detail::parse_number(key, value, n);
        } else if (key == "wavelength") {
            const double lambda = detail::parse_number(key, value, n);
            if (!(lambda > 0.0)) throw ConfigError(key, "must be strictly positive", n);
            h.omega_l = speed_of_light / lambda;
        } else if (key == "match_cqnc") {
            c.match_cqnc = detail::parse_bool(key, value, n);
        } else if (key == "thermal") {
            c.options.include_thermal = detail::parse_bool(key, value, n);
        } else if (key == "normalization") {
            if (value == "dimensionless") c.options.normalization = Normalization::dimensionless;
            else if (value == "physical") c.options.normalization = Normalization::physical;
            else throw ConfigError(key, "expected dimensionless or physical, got '" + value + "'", n);
        } else if (key == "coefficients") {
            if (value == "consistent") c.options.coefficients = CoefficientSet::consistent;
            else if (value == "literal") c.options.coefficients = CoefficientSet::literal;
            else throw ConfigError(key, "expected consistent or literal, got '" + value + "'", n);
        } else if (key == "axis") {
            c.axis = detail::parse_axis(key, value, n);
        } else if (key == "min") {
            c.min = detail::parse_number(key, value, n);
        } else if (key == "max") {
            c.max = detail::parse_number(key, value, n);
        } else if (key == "count") {
            const double v = detail::parse_number(key, value, n);
            if (v != std::floor(v) || v < 0.0 || v > 1e8) throw ConfigError(key, "must be a non-negative integer", n);
            c.count = static_cast<std::size_t>(v);
        } else if (key == "spacing") {
            if (value == "linear") c.spacing = Spacing::linear;
            else if (value == "log") c.spacing = Spacing::log;
            else throw ConfigError(key, "expected linear or log, got '" + value + "'", n);
        } else if (key == "channels") {
            c.channels = detail::parse_channels(key, value, n);
        } else if (key == "eval_frequency") {
            c.eval_frequency_hz = detail::parse_number(key, value, n);
        } else if (key == "mismatch") {
            if (value != "delta" && value != "epsilon" && value != "none")
                throw ConfigError(key, "expected delta, epsilon or none, got '" + value + "'", n);
            mismatch_kind = value;
        } else if (key == "mismatch_value") {
            mismatch_value = detail::parse_number(key, value, n);
        } else if (key == "channel") {
            c.min_power_channel = detail::parse_channel(key, value, n);
        } else if (key == "output") {
            c.output = value;
        } else if (key == "format") {
            if (value == "csv") c.format = OutputFormat::csv;
            else if (value == "json") c.format = OutputFormat::json;
            else throw ConfigError(key, "expected csv or json, got '" + value + "'", n);
        } else {
            throw ConfigError(key, "unknown key", n);
        }
    }

    if (gain_ratio) h.opa_gain = *gain_ratio * h.kappa;
    else if (!has("opa_gain")) h.opa_gain = preset_gain_ratio * h.kappa;
    if (!has("delta_qe") && preset_detuning_follows) h.delta_qe = h.omega_m;

    if (mismatch_value && !mismatch_kind)
        throw ConfigError("mismatch_value", "requires mismatch = delta or epsilon", line_numbers["mismatch_value"]);
    if (mismatch_kind && *mismatch_kind != "none") {
        if (!mismatch_value)
            throw ConfigError("mismatch", "requires mismatch_value", line_numbers["mismatch"]);
        c.mismatch = *mismatch_kind == "delta" ? MismatchSpec::decay_rate(*mismatch_value)
                                               : MismatchSpec::coupling(*mismatch_value);
    }

    validate(c, [&](const std::string& key) {
        if (auto it = line_numbers.find(key); it != line_numbers.end()) return it->second;
        if (key == "opa_gain" && has("opa_gain_ratio")) return line_numbers["opa_gain_ratio"];
        if (key == "omega_l" && has("wavelength")) return line_numbers["wavelength"];
        return std::size_t{0};
    });
    return c;
}

/// Canonical text form of a config: every key explicit, numbers with 17
/// significant digits, so parse_config(to_config_text(c)) reproduces c.
inline std::string to_config_text(const RunConfig& c) {
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream o;
    const HumanParams& h = c.human;
    o << "preset = " << c.preset << '\n';
    o << "kappa = " << num(h.kappa) << '\n';
    o << "omega_m = " << num(h.omega_m) << '\n';
    o << "gamma_m = " << num(h.gamma_m) << '\n';
    o << "gamma_qe = " << num(h.gamma_qe) << '\n';
    o << "g0 = " << num(h.g0) << '\n';
    o << "g_cs = " << num(h.g_cs) << '\n';
    o << "opa_gain = " << num(h.opa_gain) << '\n';
    o << "opa_phase = " << num(h.opa_phase) << '\n';
    o << "delta_c = " << num(h.delta_c) << '\n';
    o << "delta_qe = " << num(h.delta_qe) << '\n';
    o << "omega_l = " << num(h.omega_l) << '\n';
    o << "power = " << num(h.power) << '\n';
    o << "temperature = " << num(h.temperature) << '\n';
    o << "mass = " << num(h.mass) << '\n';
    o << "match_cqnc = " << (c.match_cqnc ? "true" : "false") << '\n';
    o << "thermal = " << (c.options.include_thermal ? "true" : "false") << '\n';
    o << "normalization = " << (c.options.normalization == Normalization::physical ? "physical" : "dimensionless")
      << '\n';
    o << "coefficients = " << (c.options.coefficients == CoefficientSet::literal ? "literal" : "consistent") << '\n';
    if (c.axis) o << "axis = " << to_string(*c.axis) << '\n';
    if (c.min) o << "min = " << num(*c.min) << '\n';
    if (c.max) o << "max = " << num(*c.max) << '\n';
    if (c.count) o << "count = " << *c.count << '\n';
    if (c.spacing) o << "spacing = " << to_string(*c.spacing) << '\n';
    if (!c.channels.empty()) {
        o << "channels = ";
        for (std::size_t i = 0; i < c.channels.size(); ++i) o << (i ? "," : "") << to_string(c.channels[i]);
        o << '\n';
    }
    if (c.eval_frequency_hz) o << "eval_frequency = " << num(*c.eval_frequency_hz) << '\n';
    if (c.mismatch) {
        o << "mismatch = " << (c.mismatch->kind == MismatchKind::decay_rate ? "delta" : "epsilon") << '\n';
        o << "mismatch_value = " << num(c.mismatch->value()) << '\n';
    }
    o << "channel = " << to_string(c.min_power_channel) << '\n';
    if (!c.output.empty()) o << "output = " << c.output << '\n';
    o << "format = " << (c.format == OutputFormat::json ? "json" : "csv") << '\n';
    return o.str();
}

/// Sweep configuration for one subcommand axis, with defaults filled in.
inline SweepConfig make_sweep_config(const RunConfig& c, Axis axis, std::vector<Channel> default_channels) {
    SweepConfig s;
    s.axis = axis;
    s.params = c.params();
    s.options = c.options;
    s.match_cqnc = c.match_cqnc;
    s.mismatch = c.mismatch;
    s.channels = c.channels.empty() ? std::move(default_channels) : c.channels;
    if (c.eval_frequency_hz) s.eval_omega = hz(*c.eval_frequency_hz);

    GridSpec g;
    switch (axis) {
        case Axis::frequency: g = default_frequency_grid(s.params); break;
        case Axis::power: g = default_power_grid(); break;
        case Axis::mismatch_delta: g = {0.0, 1.0, 101, Spacing::linear}; break;
        case Axis::mismatch_epsilon: g = {0.0, 0.1, 101, Spacing::linear}; break;
    }
    if (c.min) g.min = *c.min;
    if (c.max) g.max = *c.max;
    if (c.count) g.count = *c.count;
    if (c.spacing) g.spacing = *c.spacing;
    s.range = g;
    validate(s.range);
    return s;
}

/// Human-unit echo of a run, embedded in output metadata so that it can be
/// re-parsed to repeat the run.
inline nlohmann::ordered_json config_json(RunConfig c) {
    c.output.clear();
    return {{"units", "Hz for rates and frequencies, W, K, kg"}, {"text", to_config_text(c)}};
}

}  // namespace cqnc
