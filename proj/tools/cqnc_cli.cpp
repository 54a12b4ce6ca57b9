// Command-line front end: frequency, power and mismatch sweeps, the
// minimum-power search, the validation suite and the stability report.
//
// Exit status: 0 success, 2 configuration or usage error, 3 runtime error,
// 4 validation suite failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cqnc/cqnc.hpp"

namespace {

enum Exit : int { ok = 0, config_error = 2, runtime_error = 3, validation_failure = 4 };

struct Flags {
    std::string config_path;
    std::string output;
    std::string format;
    std::string preset;
    bool thermal{false};
};

cqnc::RunConfig load(const Flags& f) {
    std::string text;
    if (!f.config_path.empty()) text = cqnc::read_text(f.config_path);
    std::optional<std::string> preset;
    if (!f.preset.empty()) preset = f.preset;
    cqnc::RunConfig c;
    try {
        c = cqnc::parse_config(text, preset);
    } catch (const cqnc::ConfigError& e) {
        if (f.config_path.empty()) throw;
        throw cqnc::ConfigError("", f.config_path + ": " + e.what());
    }
    if (f.thermal) c.options.include_thermal = true;
    if (!f.output.empty()) c.output = f.output;
    if (!f.format.empty()) c.format = f.format == "json" ? cqnc::OutputFormat::json : cqnc::OutputFormat::csv;
    return c;
}

void emit_series(cqnc::SpectrumSeries s, const cqnc::RunConfig& c) {
    s.metadata["preset"] = c.preset;
    s.metadata["config"] = cqnc::config_json(c);
    cqnc::write_series(s, c.format, c.output);
}

cqnc::Axis sweep_axis(const cqnc::RunConfig& c, cqnc::Axis required) {
    if (c.axis && *c.axis != required)
        throw cqnc::ConfigError("axis", "this subcommand sweeps " + std::string(cqnc::to_string(required)));
    return required;
}

int run_spectrum(const Flags& f) {
    const auto c = load(f);
    using cqnc::Channel;
    auto cfg = cqnc::make_sweep_config(c, sweep_axis(c, cqnc::Axis::frequency),
                                       {Channel::sql, Channel::standard, Channel::added, Channel::cqnc, Channel::oracle});
    emit_series(cqnc::run_sweep(cfg), c);
    return ok;
}

int run_power_sweep(const Flags& f) {
    const auto c = load(f);
    using cqnc::Channel;
    auto cfg = cqnc::make_sweep_config(c, sweep_axis(c, cqnc::Axis::power),
                                       {Channel::sql, Channel::standard, Channel::added});
    emit_series(cqnc::power_sweep(cfg), c);
    return ok;
}

int run_mismatch(const Flags& f) {
    const auto c = load(f);
    const cqnc::Axis axis = c.axis.value_or(cqnc::Axis::frequency);
    if (axis == cqnc::Axis::power) throw cqnc::ConfigError("axis", "mismatch sweeps run over frequency or mismatch_*");
    if (axis == cqnc::Axis::frequency && !c.mismatch)
        throw cqnc::ConfigError("mismatch", "a frequency mismatch sweep needs mismatch = delta|epsilon and mismatch_value");
    auto cfg = cqnc::make_sweep_config(c, axis, {cqnc::Channel::sql});
    emit_series(cqnc::mismatch_sweep(cfg), c);
    return ok;
}

int run_min_power(const Flags& f) {
    const auto c = load(f);
    const auto p = c.params();
    const double omega = c.eval_frequency_hz ? cqnc::hz(*c.eval_frequency_hz) : p.omega_m;
    const auto r = cqnc::find_min_power(p, c.min_power_channel, omega, c.options, c.match_cqnc);
    std::string text;
    if (c.format == cqnc::OutputFormat::json) {
        nlohmann::ordered_json j;
        j["tool"] = cqnc::tool_name;
        j["version"] = cqnc::tool_version;
        j["channel"] = cqnc::to_string(c.min_power_channel);
        j["eval_omega"] = omega;
        j["p_star_w"] = r.p_star;
        j["s_star"] = r.s_star;
        j["interior"] = r.interior;
        j["message"] = r.message;
        j["p_knee_w"] = r.p_knee ? nlohmann::ordered_json(*r.p_knee) : nlohmann::ordered_json();
        j["config"] = cqnc::config_json(c);
        text = j.dump(2) + "\n";
    } else {
        char buf[512];
        std::snprintf(buf, sizeof buf, "channel,eval_omega,p_star_w,s_star,interior,p_knee_w\n%s,%.17g,%.17g,%.17g,%s,%s\n",
                      std::string(cqnc::to_string(c.min_power_channel)).c_str(), omega, r.p_star, r.s_star,
                      r.interior ? "true" : "false", r.p_knee ? cqnc::detail::format_g17(*r.p_knee).c_str() : "");
        text = buf;
    }
    cqnc::write_text(text, c.output);
    if (!r.interior) std::cerr << "min-power: " << r.message << " in [1e-3 pW, 1e6 pW]\n";
    return ok;
}

int run_validate_cmd(const Flags& f) {
    const auto c = load(f);
    const auto report = cqnc::run_validate(c.params());
    std::string text;
    if (c.format == cqnc::OutputFormat::csv) {
        text = "check,pass,informational,worst,tolerance,worst_omega,detail\n";
        for (const auto& k : report.checks)
            text += k.name + "," + (k.pass ? "true" : "false") + "," + (k.informational ? "true" : "false") + "," +
                    cqnc::detail::format_g17(k.worst) + "," + cqnc::detail::format_g17(k.tolerance) + "," +
                    cqnc::detail::format_g17(k.worst_omega) + ",\"" + k.detail + "\"\n";
    } else {
        auto j = cqnc::to_json(report);
        j["config"] = cqnc::config_json(c);
        text = j.dump(2) + "\n";
    }
    cqnc::write_text(text, c.output);
    for (const auto& k : report.checks)
        if (!k.informational && !k.pass) std::cerr << "validate: FAIL " << k.name << ": " << k.detail << "\n";
    return report.pass() ? ok : validation_failure;
}

int run_stability(const Flags& f) {
    const auto c = load(f);
    auto p = c.params();
    const double g = cqnc::coupling_from_power(p.power, p).g;
    if (c.match_cqnc) p = cqnc::match_cqnc(p, g);
    const auto s = cqnc::stability_check(cqnc::build_linear_model(p, g));
    nlohmann::ordered_json j;
    j["tool"] = cqnc::tool_name;
    j["version"] = cqnc::tool_version;
    j["preset"] = c.preset;
    j["stable"] = s.stable;
    j["determinate"] = s.determinate;
    j["max_real_eigenvalue"] = s.max_real_eigenvalue;
    j["max_real_eigenvalue_over_kappa"] = s.max_real_eigenvalue / p.kappa;
    j["annotation"] = s.stable ? "stable" : "unstable model";
    j["config"] = cqnc::config_json(c);
    cqnc::write_text(j.dump(2) + "\n", c.output);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Force-noise spectra of an optomechanical cavity with a quantum-dot ensemble and an intracavity OPA"};
    app.set_version_flag("--version", std::string(cqnc::tool_version));
    app.require_subcommand(1);
    app.fallthrough();

    Flags flags;
    app.add_option("--config", flags.config_path, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--output", flags.output, "output file (default: stdout)");
    app.add_option("--format", flags.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--preset", flags.preset, "parameter preset")->check(CLI::IsMember({"table1", "fig2", "fig4"}));
    app.add_flag("--thermal", flags.thermal, "include the thermal force noise");

    int status = ok;
    auto bind = [&](CLI::App* sub, int (*fn)(const Flags&)) { sub->callback([&, fn] { status = fn(flags); }); };
    bind(app.add_subcommand("spectrum", "frequency sweep"), run_spectrum);
    bind(app.add_subcommand("power-sweep", "drive-power sweep at a fixed frequency"), run_power_sweep);
    bind(app.add_subcommand("mismatch", "perfect vs mismatched cancellation"), run_mismatch);
    bind(app.add_subcommand("min-power", "power minimizing a channel"), run_min_power);
    bind(app.add_subcommand("validate", "closed forms vs the linear-response oracle"), run_validate_cmd);
    bind(app.add_subcommand("stability", "drift-matrix eigenvalue report"), run_stability);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : config_error;
    } catch (const cqnc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const cqnc::UnsupportedError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return runtime_error;
    }
    return status;
}
