#pragma once

#include <cmath>
#include <complex>

#include "cqnc/constants.hpp"
#include "cqnc/error.hpp"
#include "cqnc/params.hpp"
#include "cqnc/response.hpp"

// Closed-form added-force noise spectra. Every value is dimensionless in units
// of ħ m Ω γ_m unless Normalization::physical is requested.

namespace cqnc {

enum class Normalization { dimensionless, physical };

// consistent: coefficients that agree with the linear-response oracle.
// literal: the originally published prefactors (1/2 on the hybrid shot term,
// 4g²/(κγ_m) back-action, bad-cavity standard form), kept for audit output.
enum class CoefficientSet { consistent, literal };

struct SpectrumOptions {
    bool include_thermal{false};
    Normalization normalization{Normalization::dimensionless};
    CoefficientSet coefficients{CoefficientSet::consistent};
};

enum class MismatchKind { decay_rate, coupling };

/// Which CQNC matching condition is broken. `delta` = (γ_qE-γ_m)/γ_m,
/// `epsilon` = (G'-g)/g.
struct MismatchSpec {
    MismatchKind kind{MismatchKind::decay_rate};
    double delta{0.0};
    double epsilon{0.0};

    double value() const { return kind == MismatchKind::decay_rate ? delta : epsilon; }

    static MismatchSpec decay_rate(double d) { return {MismatchKind::decay_rate, d, 0.0}; }
    static MismatchSpec coupling(double e) { return {MismatchKind::coupling, 0.0, e}; }
};

inline void validate(const MismatchSpec& m) {
    if (!std::isfinite(m.value()) || m.value() <= -1.0)
        throw ConfigError(m.kind == MismatchKind::decay_rate ? "mismatch_delta" : "mismatch_epsilon",
                          "relative mismatch must be finite and > -1");
}

/// ħ m Ω γ_m, the force PSD unit of the dimensionless spectra [N² s].
inline double force_psd_unit(const SystemParams& p) {
    if (!(p.mass > 0.0)) throw ConfigError("mass", "physical normalization requires mass > 0");
    return hbar * p.mass * p.omega_m * p.gamma_m;
}

namespace detail {

inline double normalize(double dimensionless, const SystemParams& p, const SpectrumOptions& opts) {
    return opts.normalization == Normalization::physical ? dimensionless * force_psd_unit(p) : dimensionless;
}

inline double thermal_term(const SystemParams& p, const SpectrumOptions& opts) {
    return opts.include_thermal ? thermal_occupation(p.temperature, p.omega_m) : 0.0;
}

inline void require_transduction(double omega, double g, const SusceptibilitySet& s) {
    const double gain = g * g * std::norm(s.chi_m);
    if (!(g > 0.0) || !(gain > 0.0) || !std::isfinite(gain)) throw TransductionError(omega);
}

// Phase-quadrature shot noise referred to force: |(λ_-κ-1)/λ_-|² / (2γ_mκ g²|χ_m|²).
inline double shot_term(const SystemParams& p, double g, const SusceptibilitySet& s) {
    const cplx feed = (s.lambda_minus * p.kappa - 1.0) / s.lambda_minus;
    return std::norm(feed) / (2.0 * p.gamma_m * p.kappa * g * g * std::norm(s.chi_m));
}

// Amplitude-quadrature back-action referred to force, before any cancellation:
// g²κ|λ_+|² / (2γ_m).
inline double back_action_scale(const SystemParams& p, double g, const SusceptibilitySet& s) {
    return g * g * p.kappa * std::norm(s.lambda_plus) / (2.0 * p.gamma_m);
}

inline double qd_floor(double omega, double omega_m, double gamma_qe) {
    return 0.5 * (omega * omega + omega_m * omega_m + gamma_qe * gamma_qe / 4.0) / (omega_m * omega_m);
}

}  // namespace detail

/// Minimum added noise under perfect cancellation: (ω²+Ω²+γ_qE²/4)/(2Ω²).
inline double s_f_cqnc(double omega, const SystemParams& p) {
    return detail::qd_floor(omega, p.omega_m, p.gamma_qe);
}

/// Added noise of the matched hybrid system: thermal + shot + CQNC floor.
inline double s_f_added(double omega, const SystemParams& p, double g, const SpectrumOptions& opts = {}) {
    const auto s = susceptibilities(omega, p);
    detail::require_transduction(omega, g, s);
    const double shot_weight = opts.coefficients == CoefficientSet::literal ? 0.5 : vacuum_quadrature_psd;
    const double value = detail::thermal_term(p, opts) + shot_weight * detail::shot_term(p, g, s) + s_f_cqnc(omega, p);
    return detail::normalize(value, p, opts);
}

/// Standard optomechanical cavity (no QD channel): thermal + shot + back-action.
/// The consistent form keeps the full cavity and OPA response; the literal form
/// is its bad-cavity, 𝒢 = 0 limit with the published 4g²/(κγ_m) back-action.
inline double s_f_standard(double omega, const SystemParams& p, double g, const SpectrumOptions& opts = {}) {
    const auto s = susceptibilities(omega, p);
    detail::require_transduction(omega, g, s);
    double value = detail::thermal_term(p, opts);
    if (opts.coefficients == CoefficientSet::literal) {
        value += 0.5 * (p.kappa / p.gamma_m) / (g * g * std::norm(s.chi_m)) * 0.25;
        value += 4.0 * g * g / (p.kappa * p.gamma_m);
    } else {
        value += vacuum_quadrature_psd * detail::shot_term(p, g, s);
        value += vacuum_quadrature_psd * detail::back_action_scale(p, g, s);
    }
    return detail::normalize(value, p, opts);
}

/// 1/(γ_m|χ_m|); needs only the mechanical response.
inline double s_f_sql(double omega, const SystemParams& p) {
    const double om = p.omega_m;
    const double denom = std::abs(cplx{om * om - omega * omega, p.gamma_m * omega});
    if (denom == 0.0) throw DivergenceError("chi_m", omega);
    return denom / (p.gamma_m * om);
}

struct SqlReference {
    double s_sql{};             // 1/(γ_m|χ_m|)
    double g_sql{};             // coupling minimizing s_f_standard
    double p_sql{};             // drive power producing g_sql [W]
    double g_sql_bad_cavity{};  // √κ/(2√|χ_m|), the 𝒢 = 0, ω ≪ κ limit of g_sql
};

/// Standard quantum limit at `omega`. The shot and back-action terms of
/// s_f_standard multiply to 1/(4γ_m²|χ_m|²) for any κ and 𝒢, so the minimum
/// over g is 1/(γ_m|χ_m|), reached at g⁴ = 1/(κ²|χ_m|²|λ_+|⁴).
inline SqlReference sql_reference(double omega, const SystemParams& p) {
    const auto s = susceptibilities(omega, p);
    const double chi = std::abs(s.chi_m);
    SqlReference r;
    r.s_sql = s_f_sql(omega, p);
    r.g_sql = 1.0 / (std::abs(s.lambda_plus) * std::sqrt(p.kappa * chi));
    r.p_sql = power_from_coupling(r.g_sql, p);
    r.g_sql_bad_cavity = std::sqrt(p.kappa) / (2.0 * std::sqrt(chi));
    return r;
}

struct MismatchTerms {
    double floor{};     // CQNC floor evaluated with the mismatched linewidth
    double residual{};  // uncancelled back-action
    double total() const { return floor + residual; }
};

/// Splits s_f_mismatch into its floor and residual back-action terms. All
/// matching conditions other than the broken one hold exactly (see match_cqnc).
/// The complex λ_+² prefactor is taken as |λ_+|².
inline MismatchTerms mismatch_terms(double omega, const SystemParams& p, double g, const MismatchSpec& spec,
                                    CoefficientSet coefficients = CoefficientSet::consistent) {
    validate(spec);
    const SystemParams matched = match_cqnc(p, g);
    const auto s = susceptibilities(omega, matched);
    detail::require_transduction(omega, g, s);

    const double prefactor = (coefficients == CoefficientSet::literal ? 2.0 : vacuum_quadrature_psd) *
                             detail::back_action_scale(p, g, s);
    MismatchTerms t;
    if (spec.kind == MismatchKind::decay_rate) {
        SystemParams off = matched;
        off.gamma_qe = (1.0 + spec.delta) * p.gamma_m;
        const auto so = susceptibilities(omega, off);
        // G_cs²/g² = Ω/Δ_qe at the matched point
        const double coupling_ratio = p.omega_m / matched.delta_qe;
        t.floor = detail::qd_floor(omega, p.omega_m, off.gamma_qe);
        t.residual = prefactor * std::norm(1.0 + coupling_ratio * so.chi_s_prime / s.chi_m);
    } else {
        const double r = 1.0 + spec.epsilon;
        t.floor = detail::qd_floor(omega, p.omega_m, p.gamma_m);
        t.residual = prefactor * std::pow(1.0 - r * r, 2);
    }
    return t;
}

/// CQNC spectrum with one broken matching condition: floor + residual back-action.
inline double s_f_mismatch(double omega, const SystemParams& p, double g, const MismatchSpec& spec,
                           CoefficientSet coefficients = CoefficientSet::consistent) {
    return mismatch_terms(omega, p, g, spec, coefficients).total();
}

/// Force-referred contributions of each independent noise input, assembled
/// from the output phase quadrature without any matching assumption.
struct NoiseBudget {
    double thermal{};
    double shot{};          // p_a,in
    double back_action{};   // x_a,in, including the QD interference path
    double qd_amplitude{};  // x_S,in
    double qd_phase{};      // p_S,in

    double total() const { return thermal + shot + back_action + qd_amplitude + qd_phase; }
};

inline NoiseBudget noise_budget(double omega, const SystemParams& p, double g, bool include_thermal = false) {
    const auto s = susceptibilities(omega, p);
    detail::require_transduction(omega, g, s);
    const double kappa = p.kappa;
    const double G = p.g_cs;

    const cplx signal = -g * s.chi_m * s.lambda_minus * std::sqrt(2.0 * p.gamma_m * kappa);
    const cplx to_xa = (g * g * s.chi_m + G * G * s.chi_s_prime) * s.lambda_plus * s.lambda_minus * kappa;
    const cplx to_pa = s.lambda_minus * kappa - 1.0;
    const cplx qd = -G * s.lambda_minus * std::sqrt(kappa * p.gamma_qe);
    const cplx to_xs = qd * s.chi_s * (p.delta_qe * s.chi_s_prime + 1.0);
    const cplx to_ps = qd * s.chi_s_prime;

    NoiseBudget b;
    b.thermal = include_thermal ? thermal_occupation(p.temperature, p.omega_m) : 0.0;
    b.shot = vacuum_quadrature_psd * std::norm(to_pa / signal);
    b.back_action = vacuum_quadrature_psd * std::norm(to_xa / signal);
    b.qd_amplitude = vacuum_quadrature_psd * std::norm(to_xs / signal);
    b.qd_phase = vacuum_quadrature_psd * std::norm(to_ps / signal);
    return b;
}

}  // namespace cqnc
