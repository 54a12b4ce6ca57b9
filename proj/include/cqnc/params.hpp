#pragma once

#include <cmath>
#include <string>

#include "cqnc/error.hpp"

namespace cqnc {

// All rates and frequencies are angular (rad/s). Config files carry Hz and are
// converted on load.
struct SystemParams {
    double kappa{};        // cavity amplitude decay rate
    double omega_m{};      // mechanical frequency Ω
    double gamma_m{};      // mechanical damping rate
    double gamma_qe{};     // QD-ensemble collective linewidth
    double g0{};           // single-photon optomechanical coupling
    double g_cs{};         // cavity-QD collective coupling
    double opa_gain{};     // OPA gain 𝒢
    double opa_phase{};    // OPA pump phase θ [rad]; only θ = 0 is modeled
    double delta_c{};      // cavity detuning; stored, the model is resonantly driven
    double delta_qe{};     // drive-QD detuning
    double omega_l{};      // drive laser angular frequency
    double power{};        // input laser power [W]
    double temperature{};  // bath temperature [K]
    double mass{};         // effective mechanical mass [kg]

    bool operator==(const SystemParams&) const = default;
};

namespace detail {

inline void require_positive(const char* key, double v) {
    if (!std::isfinite(v) || v <= 0.0) throw ConfigError(key, "must be finite and strictly positive");
}

inline void require_non_negative(const char* key, double v) {
    if (!std::isfinite(v) || v < 0.0) throw ConfigError(key, "must be finite and non-negative");
}

inline void require_finite(const char* key, double v) {
    if (!std::isfinite(v)) throw ConfigError(key, "must be finite");
}

}  // namespace detail

/// Throws ConfigError naming the first offending field, or UnsupportedError for
/// a nonzero OPA phase.
inline void validate(const SystemParams& p) {
    using namespace detail;
    require_positive("kappa", p.kappa);
    require_positive("omega_m", p.omega_m);
    require_positive("gamma_m", p.gamma_m);
    require_positive("gamma_qe", p.gamma_qe);
    require_positive("g0", p.g0);
    require_non_negative("g_cs", p.g_cs);  // 0 switches the QD channel off
    require_non_negative("opa_gain", p.opa_gain);
    require_finite("opa_phase", p.opa_phase);
    require_finite("delta_c", p.delta_c);
    require_finite("delta_qe", p.delta_qe);
    require_positive("omega_l", p.omega_l);
    require_positive("power", p.power);
    require_positive("temperature", p.temperature);
    require_positive("mass", p.mass);
    if (p.opa_phase != 0.0)
        throw UnsupportedError("opa_phase: only a pump phase of 0 is supported by the linearized model");
}

}  // namespace cqnc
