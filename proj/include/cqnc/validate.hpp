#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cqnc/linear_model.hpp"
#include "cqnc/params.hpp"
#include "cqnc/response.hpp"
#include "cqnc/spectra.hpp"
#include "cqnc/version.hpp"

namespace cqnc {

struct CheckResult {
    std::string name;
    bool pass{};
    bool informational{};  // reported, never fails the suite
    double worst{};        // worst relative deviation (or the check's figure of merit)
    double tolerance{};
    double worst_omega{};  // rad/s; 0 when not frequency-resolved
    std::string detail;
};

/// A grid point excluded from an equivalence check because the deviation is
/// fully accounted for.
struct Discrepancy {
    std::string check;
    double omega{};  // rad/s
    double relative_deviation{};
    std::string explanation;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    std::vector<Discrepancy> discrepancies;
    std::vector<std::string> substitutions;

    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.informational || c.pass; });
    }

    const CheckResult& check(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return c;
        throw Error("validation report has no check '" + name + "'");
    }

    bool excluded(const std::string& check_name, double omega) const {
        return std::any_of(discrepancies.begin(), discrepancies.end(),
                           [&](const auto& d) { return d.check == check_name && d.omega == omega; });
    }
};

inline constexpr double equivalence_tolerance = 1e-6;
inline constexpr double residual_tolerance = 1e-12;
inline constexpr double suppression_decades_required = 9.0;

/// 1000 log-spaced angular frequencies on [0.05Ω, 5Ω].
inline std::vector<double> validation_grid(const SystemParams& p, std::size_t n = 1000) {
    std::vector<double> w(n);
    const double a = std::log(0.05 * p.omega_m), b = std::log(5.0 * p.omega_m);
    for (std::size_t i = 0; i < n; ++i) w[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    return w;
}

/// Configurations derived from `p` that the equivalence checks cover.
struct ValidationConfigs {
    SystemParams standard;   // G_cs = 0, 𝒢 = 0
    SystemParams opa_only;   // G_cs = 0, 𝒢 = p.opa_gain (0.1κ when p has none)
    SystemParams matched;    // exact CQNC operating point
    SystemParams mismatched; // matched, then γ_qE = 1.3 γ_m
    MismatchSpec mismatch;
    double g{};
};

inline ValidationConfigs validation_configs(const SystemParams& p) {
    ValidationConfigs c;
    c.g = coupling_from_power(p.power, p).g;
    c.standard = p;
    c.standard.g_cs = 0.0;
    c.standard.opa_gain = 0.0;
    c.opa_only = c.standard;
    c.opa_only.opa_gain = p.opa_gain > 0.0 ? p.opa_gain : 0.1 * p.kappa;
    c.matched = match_cqnc(p, c.g);
    c.mismatch = MismatchSpec::decay_rate(0.3);
    c.mismatched = c.matched;
    c.mismatched.gamma_qe = 1.3 * p.gamma_m;
    return c;
}

namespace detail {

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min()); }

// Compares closed(ω) against oracle(ω) on the grid. `explain` may account for
// a deviating point; it returns the explanation or nullopt.
inline CheckResult compare_on_grid(const std::string& name, const std::vector<double>& grid,
                                   const std::function<double(double)>& closed,
                                   const std::function<double(double)>& oracle, ValidationReport& report,
                                   const std::function<std::optional<std::string>(double, double)>& explain = {}) {
    CheckResult r{name, true, false, 0.0, equivalence_tolerance, 0.0, ""};
    std::size_t excluded = 0, failures = 0;
    for (double w : grid) {
        double d;
        try {
            d = rel(closed(w), oracle(w));
        } catch (const Error& e) {
            ++failures;
            r.pass = false;
            r.detail = std::string("evaluation error: ") + e.what();
            continue;
        }
        if (d > r.worst) {
            r.worst = d;
            r.worst_omega = w;
        }
        if (d < equivalence_tolerance) continue;
        if (explain) {
            if (auto why = explain(w, d)) {
                report.discrepancies.push_back({name, w, d, *why});
                ++excluded;
                continue;
            }
        }
        ++failures;
        r.pass = false;
    }
    if (r.detail.empty())
        r.detail = std::to_string(grid.size()) + " points, " + std::to_string(excluded) + " in discrepancy ledger, " +
                   std::to_string(failures) + " failing";
    return r;
}

inline double oracle_at(const SystemParams& p, double g, double w) {
    return oracle_added_spectrum(build_linear_model(p, g), w);
}

}  // namespace detail

/// Full cross-check suite for `p` at its configured drive power. Failures are
/// report content; nothing here throws for a physically valid `p`.
inline ValidationReport run_validate(const SystemParams& p) {
    validate(p);
    ValidationReport report;
    report.substitutions = appendix_substitutions();
    const auto grid = validation_grid(p);
    const auto cfg = validation_configs(p);
    const double g = cfg.g;
    using detail::oracle_at;
    using detail::rel;

    report.checks.push_back(detail::compare_on_grid(
        "oracle_vs_standard", grid, [&](double w) { return s_f_standard(w, cfg.standard, g); },
        [&](double w) { return oracle_at(cfg.standard, g, w); }, report));

    report.checks.push_back(detail::compare_on_grid(
        "oracle_vs_standard_opa", grid, [&](double w) { return s_f_standard(w, cfg.opa_only, g); },
        [&](double w) { return oracle_at(cfg.opa_only, g, w); }, report));

    report.checks.push_back(detail::compare_on_grid(
        "oracle_vs_added_matched", grid, [&](double w) { return s_f_added(w, cfg.matched, g); },
        [&](double w) { return oracle_at(cfg.matched, g, w); }, report));

    // The mismatch closed form keeps only the floor and the residual
    // back-action; a deviating point is excluded only when both of its pieces
    // are confirmed against the unsimplified budget and the budget against the
    // oracle.
    report.checks.push_back(detail::compare_on_grid(
        "oracle_vs_mismatch_delta", grid, [&](double w) { return s_f_mismatch(w, p, g, cfg.mismatch); },
        [&](double w) { return oracle_at(cfg.mismatched, g, w); }, report,
        [&](double w, double) -> std::optional<std::string> {
            const auto terms = mismatch_terms(w, p, g, cfg.mismatch);
            const auto budget = noise_budget(w, cfg.mismatched, g);
            const double oracle = oracle_at(cfg.mismatched, g, w);
            if (rel(terms.residual, budget.back_action) >= equivalence_tolerance) return std::nullopt;
            if (rel(budget.total(), oracle) >= equivalence_tolerance) return std::nullopt;
            return "closed form omits shot noise and the (1+delta)|chi'_S/chi_m|^2 rescaling of injected QD noise; "
                   "residual back-action and full budget agree with the oracle";
        }));

    report.checks.push_back(detail::compare_on_grid(
        "oracle_vs_budget", grid, [&](double w) { return noise_budget(w, p, g).total(); },
        [&](double w) { return oracle_at(p, g, w); }, report));

    {
        CheckResult r{"cqnc_residual_matched", true, false, 0.0, residual_tolerance, 0.0, ""};
        for (double w : grid) {
            const auto s = susceptibilities(w, cfg.matched);
            const double d = std::abs(cqnc_residual(w, cfg.matched, g)) / (g * g * std::abs(s.chi_m));
            if (d > r.worst) r.worst = d, r.worst_omega = w;
        }
        r.pass = r.worst < residual_tolerance;
        r.detail = "|g^2 chi_m + G_cs^2 chi'_S| / |g^2 chi_m| at the exact matching point";
        report.checks.push_back(r);
    }
    {
        SystemParams nominal = p;
        nominal.gamma_qe = p.gamma_m;
        nominal.delta_qe = p.omega_m;
        nominal.g_cs = g;
        CheckResult r{"cqnc_residual_nominal", false, true, 0.0, residual_tolerance, 0.0, ""};
        for (double w : grid) {
            const auto s = susceptibilities(w, nominal);
            const double d = std::abs(cqnc_residual(w, nominal, g)) / (g * g * std::abs(s.chi_m));
            if (d > r.worst) r.worst = d, r.worst_omega = w;
        }
        r.pass = r.worst < residual_tolerance;
        r.detail = "same residual at G_cs = g, delta_qe = Omega, gamma_qe = gamma_m";
        report.checks.push_back(r);
    }
    {
        CheckResult r{"back_action_suppression", true, false, std::numeric_limits<double>::infinity(),
                      suppression_decades_required, 0.0, ""};
        const auto on = build_linear_model(cfg.matched, g);
        const auto off = build_linear_model(cfg.standard, g);
        for (double w : grid) {
            const double a = std::abs(frequency_response(on, w).to_output(input::x_a_in));
            const double b = std::abs(frequency_response(off, w).to_output(input::x_a_in));
            const double decades = a > 0.0 ? std::log10(b / a) : std::numeric_limits<double>::infinity();
            if (decades < r.worst) r.worst = decades, r.worst_omega = w;
        }
        r.pass = r.worst >= suppression_decades_required;
        r.detail = "min decades of x_a,in -> P_out suppression, matched vs G_cs = 0 (worst is a minimum here)";
        report.checks.push_back(r);
    }
    {
        CheckResult r{"appendix_pa_row", true, false, 0.0, 1e-8, 0.0, ""};
        for (double w : grid) {
            const double d = appendix_pa_closed_form(p, g, w).max_relative_deviation;
            if (d > r.worst) r.worst = d, r.worst_omega = w;
        }
        r.pass = r.worst < r.tolerance;
        r.detail = "coefficient-ledger P_a row vs matrix inversion, with " +
                   std::to_string(report.substitutions.size()) + " symbol substitutions";
        report.checks.push_back(r);
    }
    {
        const auto stab = stability_check(build_linear_model(p, g));
        const double expected =
            std::max({2.0 * p.opa_gain - p.kappa / 2.0, -p.gamma_m / 2.0, -p.gamma_qe / 2.0});
        CheckResult r{"stability", true, false, 0.0, 1e-9, 0.0, ""};
        r.worst = stab.determinate ? rel(stab.max_real_eigenvalue, expected) : std::numeric_limits<double>::infinity();
        r.pass = stab.determinate && r.worst < r.tolerance;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s, max Re(eigenvalue) = %.9g 1/s (= %.6g kappa)",
                      stab.stable ? "stable" : "unstable", stab.max_real_eigenvalue, stab.max_real_eigenvalue / p.kappa);
        r.detail = buf;
        report.checks.push_back(r);
    }
    {
        // Sign conventions: real drift gives H(-ω) = H(ω)*, the force reaches
        // x_b as √(2γ_m)χ_m, the signal gain equals -gχ_mλ_-√(2γ_mκ), and a
        // passive cavity returns the phase input with unit magnitude.
        CheckResult r{"sign_convention", true, false, 0.0, 1e-9, 0.0, ""};
        const auto model = build_linear_model(p, g);
        const auto passive = build_linear_model(cfg.standard, g);
        auto note = [&](double d, double w) {
            if (d > r.worst) r.worst = d, r.worst_omega = w;
        };
        for (std::size_t i = 0; i < grid.size(); i += 37) {
            const double w = grid[i];
            const auto t = frequency_response(model, w);
            const auto tn = frequency_response(model, -w);
            note((t.state - tn.state.conjugate()).cwiseAbs().maxCoeff() / t.state.cwiseAbs().maxCoeff(), w);
            const auto s = susceptibilities(w, p);
            const cplx mech = std::sqrt(2.0 * p.gamma_m) * s.chi_m;
            note(std::abs(t.state(state::x_b, input::force) - mech) / std::abs(mech), w);
            const cplx sig = -g * s.chi_m * s.lambda_minus * std::sqrt(2.0 * p.gamma_m * p.kappa);
            note(std::abs(t.signal_gain - sig) / std::abs(sig), w);
            note(std::abs(std::abs(frequency_response(passive, w).to_output(input::p_a_in)) - 1.0), w);
            note(std::abs(std::conj(s.chi_m) - susceptibilities(-w, p).chi_m) / std::abs(s.chi_m), w);
        }
        r.pass = r.worst < r.tolerance;
        r.detail = "conjugate symmetry, force->x_b, signal gain sign, passive unitarity";
        report.checks.push_back(r);
    }
    {
        // Printed prefactors: how far each sits from the oracle-consistent value.
        const double w = p.omega_m;
        const double gsql = sql_reference(w, cfg.standard).g_sql;
        SpectrumOptions lit;
        lit.coefficients = CoefficientSet::literal;
        double lit_min = std::numeric_limits<double>::infinity();
        for (int k = -400; k <= 400; ++k) {
            const double gg = gsql * std::pow(10.0, k / 200.0);
            lit_min = std::min(lit_min, s_f_standard(w, cfg.standard, gg, lit));
        }
        const auto sp = susceptibilities(w, cfg.opa_only);
        const cplx l2 = sp.lambda_plus * sp.lambda_plus;
        CheckResult r{"literal_coefficients", true, true, 0.0, 0.0, w, ""};
        char buf[320];
        std::snprintf(buf, sizeof buf,
                      "literal standard-cavity minimum / SQL at Omega = %.6g; literal shot weight / consistent = 0.5; "
                      "literal mismatch prefactor / consistent = 2; |Im lambda_+^2|/|lambda_+|^2 at Omega (OPA) = %.3g",
                      lit_min / sql_reference(w, cfg.standard).s_sql, std::abs(l2.imag()) / std::norm(sp.lambda_plus));
        r.worst = lit_min / sql_reference(w, cfg.standard).s_sql;
        r.detail = buf;
        report.checks.push_back(r);
    }
    return report;
}

inline nlohmann::ordered_json to_json(const ValidationReport& r) {
    nlohmann::ordered_json j;
    j["tool"] = tool_name;
    j["version"] = tool_version;
    j["pass"] = r.pass();
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks)
        j["checks"].push_back({{"name", c.name},
                               {"pass", c.pass},
                               {"informational", c.informational},
                               {"worst", c.worst},
                               {"tolerance", c.tolerance},
                               {"worst_omega", c.worst_omega},
                               {"detail", c.detail}});
    j["substitutions"] = r.substitutions;
    auto ledger = nlohmann::ordered_json::array();
    for (const auto& d : r.discrepancies)
        ledger.push_back({{"check", d.check}, {"omega", d.omega}, {"relative_deviation", d.relative_deviation},
                          {"explanation", d.explanation}});
    j["discrepancy_ledger"] = std::move(ledger);
    return j;
}

}  // namespace cqnc
