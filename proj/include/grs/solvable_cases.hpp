#pragma once

// Closed-form ingredients of the two published out-of-resonance ansatze, all as
// functions of the rescaled time tau = int_0^t |w| dt'.

#include <cmath>

namespace grs::cases {

// ---- case 1: theta = 2 atan(2 tau / sqrt(2 + 4 tau^2)) ----

inline double case1_theta(double tau) {
    return 2.0 * std::atan(2.0 * tau / std::sqrt(2.0 + 4.0 * tau * tau));
}

inline double case1_theta_rate(double tau) {
    const double q = 1.0 + 2.0 * tau * tau;
    return 2.0 * std::sqrt(2.0) / (std::sqrt(q) * (1.0 + 4.0 * tau * tau));
}

/// int_0^tau cos(theta) = atan(2 tau) / 2
inline double case1_cos_integral(double tau) { return 0.5 * std::atan(2.0 * tau); }

/// Detuning per unit |w|.
inline double case1_beta(double tau) {
    const double t2 = tau * tau;
    return 4.0 * (1.0 + t2) / ((1.0 + 4.0 * t2) * std::sqrt(2.0 + 4.0 * t2));
}

/// int_0^tau beta(u) du
inline double case1_beta_integral(double tau) {
    return 0.75 * case1_theta(tau) + 0.5 * std::asinh(std::sqrt(2.0) * tau);
}

// ---- case 2: theta = 2 atan(tau / sqrt(2 + tau^2)) ----

inline double case2_theta(double tau) {
    return 2.0 * std::atan(tau / std::sqrt(2.0 + tau * tau));
}

inline double case2_theta_rate(double tau) {
    const double t2 = tau * tau;
    return 2.0 / ((1.0 + t2) * std::sqrt(2.0 + t2));
}

/// int_0^tau cos(theta) = atan(tau)
inline double case2_cos_integral(double tau) { return std::atan(tau); }

inline double case2_beta(double tau) {
    const double t2 = tau * tau;
    return (2.0 + (1.0 - t2) * (2.0 + t2)) / (2.0 * (1.0 + t2) * std::sqrt(2.0 + t2));
}

inline double case2_beta_integral(double tau) {
    const double s = std::sqrt(2.0 + tau * tau);
    return case2_theta(tau) - 0.25 * tau * s + 0.5 * std::asinh(tau / std::sqrt(2.0));
}

/// The phase integral R(tau) of the case-2 ansatz, available in elementary functions.
inline double case2_r_integral(double tau) {
    return 0.5 * (0.5 * tau * std::sqrt(2.0 + tau * tau) + std::asinh(tau / std::sqrt(2.0)));
}

}  // namespace grs::cases
