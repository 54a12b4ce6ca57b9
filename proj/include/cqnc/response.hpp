#pragma once

#include <cmath>
#include <complex>

#include "cqnc/constants.hpp"
#include "cqnc/error.hpp"
#include "cqnc/params.hpp"

namespace cqnc {

using cplx = std::complex<double>;

/// Complex response functions of the linearized hybrid system at one signal
/// frequency. All entries are in seconds.
struct SusceptibilitySet {
    cplx chi_m;         // mechanical, Ω/(Ω²-ω²+iγ_mω)
    cplx chi_a;         // bare cavity, 1/(iω+κ/2)
    cplx chi_s;         // QD ensemble, 1/(iω+γ_qE/2)
    cplx xi;            // (iω+γ_qE/2+Δ_qe²χ_S)⁻¹
    cplx chi_s_prime;   // effective QD response, -Δ_qe ξ χ_S
    cplx lambda_plus;   // OPA-amplified amplitude quadrature, (χ_a⁻¹-2𝒢)⁻¹
    cplx lambda_minus;  // OPA-squeezed phase quadrature, (χ_a⁻¹+2𝒢)⁻¹
};

struct DerivedCouplings {
    double g{};        // field-enhanced optomechanical coupling [rad/s]
    double g_prime{};  // effective cavity-QD coupling entering the linear model [rad/s]
    double nbar{};     // mean thermal phonon occupation
};

namespace detail {

inline cplx checked_inverse(cplx denominator, const char* name, double omega) {
    if (denominator == cplx{0.0, 0.0}) throw DivergenceError(name, omega);
    return 1.0 / denominator;
}

}  // namespace detail

/// Evaluates every response at `omega`. Negative frequencies are accepted and
/// give the complex conjugate of the positive-frequency value.
inline SusceptibilitySet susceptibilities(double omega, const SystemParams& p) {
    if (!std::isfinite(omega)) throw Error("susceptibilities: omega must be finite");
    using detail::checked_inverse;
    const cplx iw{0.0, omega};
    const double om = p.omega_m;

    SusceptibilitySet s;
    s.chi_m = om * checked_inverse(om * om - omega * omega + iw * p.gamma_m, "chi_m", omega);
    const cplx chi_a_inv = iw + p.kappa / 2.0;
    s.chi_a = checked_inverse(chi_a_inv, "chi_a", omega);
    s.chi_s = checked_inverse(iw + p.gamma_qe / 2.0, "chi_s", omega);
    s.xi = checked_inverse(iw + p.gamma_qe / 2.0 + p.delta_qe * p.delta_qe * s.chi_s, "xi", omega);
    s.chi_s_prime = -p.delta_qe * s.xi * s.chi_s;
    s.lambda_plus = checked_inverse(chi_a_inv - 2.0 * p.opa_gain, "lambda_plus", omega);
    s.lambda_minus = checked_inverse(chi_a_inv + 2.0 * p.opa_gain, "lambda_minus", omega);
    return s;
}

inline double thermal_occupation(double temperature, double omega_m) {
    if (!(temperature >= 0.0) || !(omega_m > 0.0))
        throw Error("thermal_occupation: requires temperature >= 0 and omega_m > 0");
    return k_boltzmann * temperature / (hbar * omega_m);
}

/// Drive power that produces coupling `g`: P = 2ħω_Lκ(g/g₀)².
inline double power_from_coupling(double g, const SystemParams& p) {
    if (p.g0 == 0.0) throw ConfigError("g0", "must be nonzero to relate power and coupling");
    const double ratio = g / p.g0;
    return 2.0 * hbar * p.omega_l * p.kappa * ratio * ratio;
}

/// Inverse of power_from_coupling plus the temperature-derived occupation.
inline DerivedCouplings coupling_from_power(double power, const SystemParams& p) {
    if (p.g0 == 0.0) throw ConfigError("g0", "must be nonzero to relate power and coupling");
    if (!(power >= 0.0) || !std::isfinite(power)) throw Error("coupling_from_power: power must be finite and >= 0");
    DerivedCouplings d;
    d.g = p.g0 * std::sqrt(power / (2.0 * hbar * p.omega_l * p.kappa));
    d.g_prime = p.g_cs;
    d.nbar = thermal_occupation(p.temperature, p.omega_m);
    return d;
}

/// g²χ_m + G_cs²χ'_S; zero means the back-action paths interfere away completely.
inline cplx cqnc_residual(double omega, const SystemParams& p, double g) {
    const auto s = susceptibilities(omega, p);
    return g * g * s.chi_m + p.g_cs * p.g_cs * s.chi_s_prime;
}

/// Operating point at which g²χ_m + G_cs²χ'_S vanishes at every frequency:
/// γ_qE = γ_m, Δ_qe = √(Ω² - γ_m²/4) and G_cs = g √(Ω/Δ_qe). The nominal
/// choice (Δ_qe = Ω, G_cs = g) leaves a residual of relative size
/// (γ_m²/4)/(Ω²-ω²+iγ_mω+γ_m²/4).
inline SystemParams match_cqnc(SystemParams p, double g) {
    if (!(p.omega_m > p.gamma_m / 2.0)) throw Error("match_cqnc: requires omega_m > gamma_m / 2");
    p.gamma_qe = p.gamma_m;
    p.delta_qe = std::sqrt(p.omega_m * p.omega_m - p.gamma_m * p.gamma_m / 4.0);
    p.g_cs = g * std::sqrt(p.omega_m / p.delta_qe);
    return p;
}

}  // namespace cqnc
