#pragma once

#include <numbers>

namespace cqnc {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA 2018 (exact in the revised SI).
inline constexpr double planck = 6.62607015e-34;       // J s
inline constexpr double hbar = planck / two_pi;        // J s
inline constexpr double k_boltzmann = 1.380649e-23;    // J / K
inline constexpr double speed_of_light = 299792458.0;  // m / s

// Symmetrized spectral density assigned to every vacuum quadrature input.
// With this normalization the linear-response route reproduces the CQNC
// floor (ω²+Ω²+γ²/4)/(2Ω²) and the SQL 1/(γ_m|χ_m|).
inline constexpr double vacuum_quadrature_psd = 1.0;

/// Converts an ordinary frequency in Hz to an angular frequency in rad/s.
constexpr double hz(double f) { return two_pi * f; }

}  // namespace cqnc
