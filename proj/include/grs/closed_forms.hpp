#pragma once

// Closed-form evolution entries of the exactly solvable families.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "entries.hpp"
#include "errors.hpp"
#include "field_model.hpp"
#include "quadrature.hpp"
#include "solvable_cases.hpp"
#include "trajectory.hpp"

namespace grs {

inline constexpr double kResonanceTol = 1e-10;
inline constexpr double kBeta0Tol = 1e-10;
inline constexpr double kCaseTol = 1e-8;
inline constexpr std::size_t kConditionPoints = 65;

namespace detail {

/// Throws PreconditionError unless |D(t) - expected(t)| <= tol on [0, t_end].
inline void require_detuning(const FieldProfile& profile, double t_end,
                             const std::function<double(double)>& expected, double tol,
                             const std::string& what, std::size_t points = kConditionPoints) {
    if (t_end <= 0.0) return;
    const TimeWindow window = window_to(t_end, points);
    for (std::size_t i = 0; i < window.samples; ++i) {
        const double t = window.at(i);
        const double residual = std::abs(detuning(profile, t) - expected(t));
        if (residual > tol) {
            std::ostringstream msg;
            msg << "profile '" << profile.label << "' violates the " << what << " at t=" << t
                << " (residual " << residual << " > " << tol << ")";
            throw PreconditionError(msg.str());
        }
    }
}

inline double pulse_area(const FieldProfile& profile, double t) {
    return integrate(profile.omega_mag, 0.0, t, 1e-12);
}

/// Lab-frame entries from rotating-frame ones: a = e^{i(phi_t - phi_0)/2} a~, b = e^{i(phi_t + phi_0)/2} b~.
inline EvolutionEntries to_lab_frame(const FieldProfile& profile, double t, Complex a_rot, Complex b_rot) {
    const double phi_t = profile.phi_omega(t);
    const double phi_0 = profile.phi_omega(0.0);
    return {std::polar(1.0, 0.5 * (phi_t - phi_0)) * a_rot, std::polar(1.0, 0.5 * (phi_t + phi_0)) * b_rot, t};
}

inline EvolutionEntries resonance_from_area(const FieldProfile& profile, double t, double area) {
    return to_lab_frame(profile, t, {std::cos(area), 0.0}, {0.0, -std::sin(area)});
}

inline EvolutionEntries beta0_from_area(const FieldProfile& profile, double beta0, double t, double area) {
    const double root = std::sqrt(1.0 + beta0 * beta0);
    const double phase = root * area;
    const double s = std::sin(phase);
    return to_lab_frame(profile, t, {std::cos(phase), -beta0 / root * s}, {0.0, -s / root});
}

/// s - 1 for s = sqrt(1 + 4 tau^2), without cancellation.
inline double root_minus_one(double tau) {
    const double s = std::sqrt(1.0 + 4.0 * tau * tau);
    return 4.0 * tau * tau / (s + 1.0);
}

}  // namespace detail

/// Generalized resonance (W + phi'/2 = 0): a = cos(A) e^{i phi/2}, b = -i sin(A) e^{i phi/2},
/// with A = int_0^t |w| (phi measured from phi(0); see to_lab_frame).
inline EvolutionEntries resonance_entries(const FieldProfile& profile, double t, bool check = true) {
    if (check) {
        detail::require_detuning(profile, t, [](double) { return 0.0; }, kResonanceTol,
                                 "generalized resonance condition");
    }
    return detail::resonance_from_area(profile, t, detail::pulse_area(profile, t));
}

/// sin^2(alpha): asymptotic transition probability of the exponentially decaying field.
inline double resonance_asymptote(double alpha) {
    const double s = std::sin(alpha);
    return s * s;
}

/// sin^2[C (x + (k/n) sin(n x))] for the cosine-modulated resonant field, x = phidot0 t.
inline double modulated_probability(double C, double k, double n, double tau_tilde) {
    if (!(n >= 1.0) || std::floor(n) != n) throw ArgumentError("n must be a positive integer");
    if (k < 0.0) throw ArgumentError("k must be >= 0");
    const double s = std::sin(C * (tau_tilde + k / n * std::sin(n * tau_tilde)));
    return s * s;
}

/// Constant detuning ratio D = beta0 |w|:
/// P_{+-} = sin^2(sqrt(1 + beta0^2) A) / (1 + beta0^2).
inline EvolutionEntries beta0_entries(const FieldProfile& profile, double beta0, double t, bool check = true) {
    if (check) {
        detail::require_detuning(profile, t, [&](double s) { return beta0 * profile.omega_mag(s); }, kBeta0Tol,
                                 "constant detuning ratio condition");
    }
    return detail::beta0_from_area(profile, beta0, t, detail::pulse_area(profile, t));
}

/// (i/sqrt2) E(i asinh(2 tau), 1/2) = -(1/sqrt2) int_0^{asinh 2tau} sqrt(1 + sinh^2(u)/2) du.
inline double elliptic_phase(double tau) {
    if (tau < 0.0) throw ArgumentError("elliptic_phase: tau must be >= 0");
    if (!std::isfinite(tau)) throw ArgumentError("elliptic_phase: tau must be finite");
    const double upper = std::asinh(2.0 * tau);
    const double integral = integrate(
        [](double u) {
            const double sh = std::sinh(u);
            return std::sqrt(1.0 + 0.5 * sh * sh);
        },
        0.0, upper, 1e-13);
    return -integral / std::numbers::sqrt2;
}

namespace detail {

inline EvolutionEntries case1_from_tau(const FieldProfile& profile, double t, double tau) {
    const double s = std::sqrt(1.0 + 4.0 * tau * tau);
    const double mod_a = std::sqrt((s + 1.0) / (2.0 * s));
    const double mod_b = std::sqrt(root_minus_one(tau) / (2.0 * s));
    const double half_theta = 0.5 * cases::case1_theta(tau);
    const double ell = elliptic_phase(tau);
    const EvolutionEntries rot =
        from_polar(t, mod_a, -half_theta + ell, mod_b, -half_theta - ell - 0.5 * std::numbers::pi);
    return to_lab_frame(profile, t, rot.a, rot.b);
}

inline EvolutionEntries case2_from_tau(const FieldProfile& profile, double t, double tau) {
    const double norm = std::sqrt(1.0 + tau * tau);
    const double half_theta = 0.5 * cases::case2_theta(tau);
    const double r = cases::case2_r_integral(tau);
    const EvolutionEntries rot =
        from_polar(t, 1.0 / norm, -half_theta - r, tau / norm, -half_theta + r - 0.5 * std::numbers::pi);
    return to_lab_frame(profile, t, rot.a, rot.b);
}

inline void require_case(const FieldProfile& profile, double t, double (*beta)(double), const char* what) {
    require_detuning(
        profile, t, [&](double s) { return beta(pulse_area(profile, s)) * profile.omega_mag(s); }, kCaseTol,
        what);
}

}  // namespace detail

/// Case-1 ansatz: |b|^2 = (sqrt(1+4tau^2) - 1) / (2 sqrt(1+4tau^2)) -> 1/2.
inline EvolutionEntries case1_entries(const FieldProfile& profile, double t, bool check = true) {
    if (check) detail::require_case(profile, t, cases::case1_beta, "case-1 detuning");
    return detail::case1_from_tau(profile, t, detail::pulse_area(profile, t));
}

/// Case-2 ansatz: |b|^2 = tau^2 / (1 + tau^2) -> 1.
inline EvolutionEntries case2_entries(const FieldProfile& profile, double t, bool check = true) {
    if (check) detail::require_case(profile, t, cases::case2_beta, "case-2 detuning");
    return detail::case2_from_tau(profile, t, detail::pulse_area(profile, t));
}

/// True when the family has a closed form.
inline bool has_closed_form(Family f) { return f != Family::custom; }

/// Closed-form trajectory of a built-in family on its own profile. The solvability
/// condition is verified at every sample before evaluation.
inline Trajectory closed_form_trajectory(const ScenarioParams& params, const FieldProfile& profile,
                                         const TimeWindow& window) {
    window.validate();
    if (!has_closed_form(params.family)) {
        throw ArgumentError("family " + std::string(family_name(params.family)) + " has no closed form");
    }
    CumulativeIntegral area(profile.omega_mag, 1e-12);

    std::function<double(double)> expected;
    std::function<EvolutionEntries(double, double)> evaluate;
    double tol = kResonanceTol;
    std::string what = "generalized resonance condition";

    switch (params.family) {
        case Family::rabi:
            if (params.omega0 == 0.0) {
                expected = [&](double t) { return detuning(profile, t); };
                evaluate = [&](double t, double) {
                    return EvolutionEntries{std::polar(1.0, -params.Omega0 * t), 0.0, t};
                };
                break;
            }
            [[fallthrough]];
        case Family::constant_beta0: {
            const double beta0 = params.family == Family::rabi
                                     ? (params.Omega0 + 0.5 * params.phidot0) / params.omega0
                                     : params.beta0;
            expected = [&profile, beta0](double t) { return beta0 * profile.omega_mag(t); };
            evaluate = [&profile, beta0](double t, double a) {
                return detail::beta0_from_area(profile, beta0, t, a);
            };
            tol = kBeta0Tol;
            what = "constant detuning ratio condition";
            break;
        }
        case Family::sech_resonant:
        case Family::exp_resonant:
        case Family::modulated_resonant:
            expected = [](double) { return 0.0; };
            evaluate = [&profile](double t, double a) { return detail::resonance_from_area(profile, t, a); };
            break;
        case Family::case1:
            expected = [&](double t) { return cases::case1_beta(area(t)) * profile.omega_mag(t); };
            evaluate = [&profile](double t, double a) { return detail::case1_from_tau(profile, t, a); };
            tol = kCaseTol;
            what = "case-1 detuning";
            break;
        case Family::case2:
            expected = [&](double t) { return cases::case2_beta(area(t)) * profile.omega_mag(t); };
            evaluate = [&profile](double t, double a) { return detail::case2_from_tau(profile, t, a); };
            tol = kCaseTol;
            what = "case-2 detuning";
            break;
        case Family::custom: break;
    }

    Trajectory traj;
    traj.label = profile.label;
    traj.samples.reserve(window.samples);
    for (std::size_t i = 0; i < window.samples; ++i) {
        const double t = window.at(i);
        const double residual = std::abs(detuning(profile, t) - expected(t));
        if (residual > tol) {
            std::ostringstream msg;
            msg << "profile '" << profile.label << "' violates the " << what << " at t=" << t << " (residual "
                << residual << " > " << tol << ")";
            throw PreconditionError(msg.str());
        }
        traj.samples.push_back(make_sample(profile, evaluate(t, area(t))));
    }
    return traj;
}

}  // namespace grs
