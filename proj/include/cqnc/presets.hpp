#pragma once

#include <string>
#include <string_view>

#include "cqnc/constants.hpp"
#include "cqnc/params.hpp"
#include "cqnc/response.hpp"

namespace cqnc {

// Parameter set in configuration units: frequencies and rates in Hz, OPA
// phase in rad, power in W, temperature in K, mass in kg.
struct HumanParams {
    double kappa{};
    double omega_m{};
    double gamma_m{};
    double gamma_qe{};
    double g0{};
    double g_cs{};
    double opa_gain{};
    double opa_phase{};
    double delta_c{};
    double delta_qe{};
    double omega_l{};
    double power{};
    double temperature{};
    double mass{};

    bool operator==(const HumanParams&) const = default;
};

inline SystemParams to_system_params(const HumanParams& h) {
    SystemParams p;
    p.kappa = hz(h.kappa);
    p.omega_m = hz(h.omega_m);
    p.gamma_m = hz(h.gamma_m);
    p.gamma_qe = hz(h.gamma_qe);
    p.g0 = hz(h.g0);
    p.g_cs = hz(h.g_cs);
    p.opa_gain = hz(h.opa_gain);
    p.opa_phase = h.opa_phase;
    p.delta_c = hz(h.delta_c);
    p.delta_qe = hz(h.delta_qe);
    p.omega_l = hz(h.omega_l);
    p.power = h.power;
    p.temperature = h.temperature;
    p.mass = h.mass;
    return p;
}

struct Preset {
    std::string name;
    HumanParams values;
    // Recompute γ_qE, Δ_qe and G_cs from the CQNC matching condition at every
    // evaluated drive power.
    bool match_cqnc{false};
};

inline constexpr double default_mass_kg = 1e-12;

/// Tabulated hybrid-cavity parameters (1064 nm drive, room temperature).
/// The drive power is the one at which g equals the tabulated G_cs.
inline Preset table1_preset() {
    HumanParams h;
    h.kappa = 1e6;
    h.omega_m = 10e6;
    h.gamma_m = 100.0;
    h.gamma_qe = 200.0;
    h.g0 = 10.0;
    h.g_cs = 10.0;
    h.opa_gain = 0.3 * h.kappa;
    h.opa_phase = 0.0;
    h.delta_c = 0.0;
    h.delta_qe = h.omega_m;
    h.omega_l = speed_of_light / 1064e-9;
    h.temperature = 300.0;
    h.mass = default_mass_kg;
    const double ratio = h.g_cs / h.g0;
    h.power = 2.0 * hbar * hz(h.omega_l) * hz(h.kappa) * ratio * ratio;
    return {"table1", h, false};
}

/// Parameters of the frequency-domain comparison figure (300 kHz mirror,
/// 100 mW drive at 384 THz), matched for CQNC.
inline Preset fig2_preset() {
    HumanParams h;
    h.kappa = 1e6;
    h.omega_m = 300e3;
    h.gamma_m = 30.0;
    h.gamma_qe = h.gamma_m;
    h.g0 = 300.0;
    h.g_cs = 0.0;  // set by matching
    h.opa_gain = 0.1 * h.kappa;
    h.opa_phase = 0.0;
    h.delta_c = 0.0;
    h.delta_qe = h.omega_m;
    h.omega_l = 384e12;
    h.power = 0.1;
    h.temperature = 300.0;
    h.mass = default_mass_kg;
    return {"fig2", h, true};
}

/// Imperfect-matching study: tabulated rates with γ_qE = γ_m, 𝒢 = 0.1κ and the
/// drive power at which g equals the tabulated G_cs, matched for CQNC.
inline Preset fig4_preset() {
    Preset p = table1_preset();
    p.name = "fig4";
    p.values.gamma_qe = p.values.gamma_m;
    p.values.opa_gain = 0.1 * p.values.kappa;
    p.match_cqnc = true;
    return p;
}

inline Preset preset_by_name(std::string_view name) {
    if (name == "table1") return table1_preset();
    if (name == "fig2") return fig2_preset();
    if (name == "fig4") return fig4_preset();
    throw ConfigError("preset", "unknown preset '" + std::string(name) + "' (expected table1, fig2 or fig4)");
}

/// SystemParams of a preset at its own drive power, with matching applied.
inline SystemParams preset_params(const Preset& preset) {
    SystemParams p = to_system_params(preset.values);
    if (preset.match_cqnc) p = match_cqnc(p, coupling_from_power(p.power, p).g);
    return p;
}

}  // namespace cqnc
