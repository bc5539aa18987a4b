#pragma once

// Theta-ansatz representation of U(t). A freely chosen Theta(tau), Theta(0) = 0,
// with tau = int_0^t |w|, makes the dynamics solvable for the detuning
//   D = |w| [ Theta'(tau)/2 + sin Theta cot(2 P) ],   P(tau) = int_0^tau cos Theta,
// and then
//   a = cos P exp{i[(phi(t) - phi(0))/2 - Theta/2 - R]},
//   b = sin P exp{i[(phi(t) + phi(0))/2 - Theta/2 + R - pi/2]},
//   R(tau) = int_0^tau sin Theta / sin(2 P).

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "entries.hpp"
#include "errors.hpp"
#include "field_model.hpp"
#include "interpolation.hpp"
#include "propagator.hpp"
#include "quadrature.hpp"
#include "solvable_cases.hpp"
#include "trajectory.hpp"

namespace grs {

/// Theta as a function of the rescaled time tau. `rate` is dTheta/dtau; when empty
/// it is obtained by finite differences.
struct ThetaAnsatz {
    std::function<double(double)> theta;
    std::function<double(double)> rate;
    std::string label;

    double slope(double tau) const {
        if (rate) return rate(tau);
        constexpr double h = 1e-5;
        if (tau < 2.0 * h) {
            return (-3.0 * theta(tau) + 4.0 * theta(tau + h) - theta(tau + 2.0 * h)) / (2.0 * h);
        }
        return central_difference(theta, tau, h);
    }
};

inline ThetaAnsatz zero_ansatz() {
    return {[](double) { return 0.0; }, [](double) { return 0.0; }, "zero"};
}

inline ThetaAnsatz case1_ansatz() { return {cases::case1_theta, cases::case1_theta_rate, "case1"}; }

inline ThetaAnsatz case2_ansatz() { return {cases::case2_theta, cases::case2_theta_rate, "case2"}; }

/// Piecewise-linear Theta through (tau_i, theta_i). The first row must be (0, 0).
inline ThetaAnsatz tabulated_ansatz(std::vector<double> tau, std::vector<double> theta,
                                    std::string label = "table") {
    if (tau.empty() || tau.front() != 0.0 || theta.front() != 0.0) {
        throw ArgumentError("ansatz table: first row must be tau = 0, theta = 0");
    }
    LinearTable table(std::move(tau), std::move(theta), "ansatz table");
    return {[table](double x) { return table(x); }, [table](double x) { return table.slope(x); },
            std::move(label)};
}

inline std::optional<ThetaAnsatz> ansatz_by_name(std::string_view name) {
    if (name == "zero") return zero_ansatz();
    if (name == "case1") return case1_ansatz();
    if (name == "case2") return case2_ansatz();
    return std::nullopt;
}

struct PhaseIntegrals {
    double phi_int = 0.0;  ///< int_0^t |w| cos Theta
    double r_int = 0.0;    ///< R(t)
};

struct ThetaOptions {
    double quad_tol = 1e-10;             ///< absolute, tau units
    double near_zero = 1e-6;             ///< below this tau the R integrand uses its small-tau limit
    bool check_consistency = true;
    double consistency_tol = 1e-8;
    std::size_t consistency_points = 64;
};

/// Evaluation session for one ansatz and one |w(t)|. Caches running integrals so
/// that increasing sample times cost O(1) quadratures each. Not thread-safe.
class ThetaSession {
public:
    ThetaSession(ThetaAnsatz ansatz, TimeFunction omega_mag, ThetaOptions options = {})
        : ansatz_(std::move(ansatz)), omega_mag_(std::move(omega_mag)), options_(options) {
        if (!(options_.quad_tol > 0.0)) throw ArgumentError("quad_tol must be > 0");
        if (!(options_.near_zero > 0.0)) throw ArgumentError("near_zero must be > 0");
        const double theta0 = ansatz_.theta(0.0);
        if (theta0 != 0.0) throw ArgumentError("ansatz '" + ansatz_.label + "': Theta(0) must be 0");
        tau_ = CumulativeIntegral(omega_mag_, options_.quad_tol);
        // P feeds the R integrand, so it is resolved well below quad_tol to keep that integrand smooth
        cos_int_ = CumulativeIntegral([this](double u) { return std::cos(ansatz_.theta(u)); },
                                      std::min(options_.quad_tol, 1e-14));
        r_int_ = CumulativeIntegral([this](double u) { return r_integrand(u); }, options_.quad_tol);
        r_int_(options_.near_zero);  // knot at the switch to the small-tau limit
    }

    ThetaSession(const ThetaSession&) = delete;
    ThetaSession& operator=(const ThetaSession&) = delete;

    const ThetaAnsatz& ansatz() const { return ansatz_; }

    double tau(double t) { return tau_(t); }

    /// P as a function of tau.
    double cos_integral_tau(double tau) { return cos_int_(tau); }

    /// R as a function of tau.
    double r_integral_tau(double tau) {
        ensure_regular(tau);
        return r_int_(tau);
    }

    PhaseIntegrals integrals(double t) {
        const double tau_t = tau(t);
        return {cos_int_(tau_t), r_integral_tau(tau_t)};
    }

    /// Detuning W + phi'/2 for which the ansatz is exact.
    double induced_detuning(double t) {
        const double w = omega_mag_(t);
        const double tau_t = tau(t);
        const double half_rate = 0.5 * ansatz_.slope(tau_t);
        return w * (half_rate + sin_cot(tau_t));
    }

    EvolutionEntries entries(const FieldProfile& profile, double t) {
        const double tau_t = tau(t);
        const double p = cos_int_(tau_t);
        const double r = r_integral_tau(tau_t);
        const double half_theta = 0.5 * ansatz_.theta(tau_t);
        const double phi_t = profile.phi_omega(t);
        const double phi_0 = profile.phi_omega(0.0);
        return {std::polar(std::cos(p), 0.5 * (phi_t - phi_0) - half_theta - r),
                std::polar(std::sin(p), 0.5 * (phi_t + phi_0) - half_theta + r - 0.5 * std::numbers::pi), t};
    }

    /// Largest |D_profile - D_induced| on [t_begin, t_end].
    double max_residual(const FieldProfile& profile, const TimeWindow& window) {
        double worst = 0.0;
        for (std::size_t i = 0; i < window.samples; ++i) {
            const double t = window.at(i);
            worst = std::max(worst, std::abs(detuning(profile, t) - induced_detuning(t)));
        }
        return worst;
    }

    /// Throws InconsistentProfile unless the profile detuning matches the induced one on [0, t_end].
    void check_consistency(const FieldProfile& profile, double t_end) {
        if (t_end <= 0.0) return;
        const double residual =
            max_residual(profile, window_to(t_end, std::max<std::size_t>(options_.consistency_points, 2)));
        if (residual > options_.consistency_tol) {
            std::ostringstream msg;
            msg << "ansatz '" << ansatz_.label << "' does not solve profile '" << profile.label
                << "': detuning residual " << residual << " > " << options_.consistency_tol;
            throw InconsistentProfile(msg.str());
        }
    }

    const ThetaOptions& options() const { return options_; }

private:
    /// sin Theta cot(2P) with its small-tau limit Theta/(2 tau) -> Theta'(0)/2.
    double sin_cot(double tau) {
        if (tau < options_.near_zero) return small_tau_ratio(tau);
        const double sin_theta = std::sin(ansatz_.theta(tau));
        if (sin_theta == 0.0) return 0.0;
        const double two_p = 2.0 * cos_int_(tau);
        const double s = std::sin(two_p);
        if (std::abs(s) < 1e-12) throw singular(tau);
        return sin_theta * std::cos(two_p) / s;
    }

    double small_tau_ratio(double tau) const {
        if (tau <= 0.0) return 0.5 * ansatz_.slope(0.0);
        return ansatz_.theta(tau) / (2.0 * tau);
    }

    double r_integrand(double u) {
        if (u < options_.near_zero) return small_tau_ratio(u);
        const double sin_theta = std::sin(ansatz_.theta(u));
        if (sin_theta == 0.0) return 0.0;
        const double s = std::sin(2.0 * cos_int_(u));
        if (std::abs(s) < 1e-12) throw singular(u);
        return sin_theta / s;
    }

    SingularAnsatz singular(double tau) const {
        std::ostringstream msg;
        msg << "ansatz '" << ansatz_.label << "': sin(2 int |w| cos Theta) vanishes at tau=" << tau;
        return SingularAnsatz(msg.str());
    }

    /// Scans (checked_, tau] for sign changes of sin(2P); a zero crossing makes R diverge
    /// unless sin(Theta) vanishes exactly there too (e.g. Theta = 0 beyond a pi/2 pulse).
    void ensure_regular(double tau) {
        constexpr double kScan = 1e-2;
        if (tau <= checked_) return;
        double u = std::max(checked_, options_.near_zero);
        double prev = std::sin(2.0 * cos_int_(u));
        while (u < tau) {
            const double u_prev = u;
            u = std::min(tau, u + kScan);
            const double s = std::sin(2.0 * cos_int_(u));
            if (std::abs(s) < 1e-12 || (s > 0.0) != (prev > 0.0)) {
                if (!vanishes_on(u_prev, u)) throw singular(u);
            }
            prev = s;
        }
        checked_ = tau;
    }

    bool vanishes_on(double lo, double hi) const {
        constexpr int kProbe = 16;
        for (int i = 0; i <= kProbe; ++i) {
            if (std::sin(ansatz_.theta(lo + (hi - lo) * i / kProbe)) != 0.0) return false;
        }
        return true;
    }

    ThetaAnsatz ansatz_;
    TimeFunction omega_mag_;
    ThetaOptions options_;
    CumulativeIntegral tau_;
    CumulativeIntegral cos_int_;
    CumulativeIntegral r_int_;
    double checked_ = 0.0;
};

inline double induced_detuning(const ThetaAnsatz& ansatz, const TimeFunction& omega_mag, double t) {
    ThetaSession session(ansatz, omega_mag);
    return session.induced_detuning(t);
}

inline PhaseIntegrals phase_integrals(const ThetaAnsatz& ansatz, const TimeFunction& omega_mag, double t,
                                      double quad_tol = 1e-10) {
    ThetaOptions options;
    options.quad_tol = quad_tol;
    ThetaSession session(ansatz, omega_mag, options);
    return session.integrals(t);
}

inline EvolutionEntries general_entries(const ThetaAnsatz& ansatz, const FieldProfile& profile, double t,
                                        const ThetaOptions& options = {}) {
    ThetaSession session(ansatz, profile.omega_mag, options);
    if (options.check_consistency) session.check_consistency(profile, t);
    return session.entries(profile, t);
}

/// Entries of the ansatz representation sampled over a window.
inline Trajectory theta_trajectory(const ThetaAnsatz& ansatz, const FieldProfile& profile,
                                   const TimeWindow& window, const ThetaOptions& options = {}) {
    window.validate();
    ThetaSession session(ansatz, profile.omega_mag, options);
    if (options.check_consistency) session.check_consistency(profile, window.t_end);
    Trajectory traj;
    traj.label = profile.label + " / theta:" + ansatz.label;
    traj.samples.reserve(window.samples);
    for (std::size_t i = 0; i < window.samples; ++i) {
        traj.samples.push_back(make_sample(profile, session.entries(profile, window.at(i))));
    }
    return traj;
}

/// Oracle settings fine enough for 1e-6 agreement on the built-in scenarios.
inline PropagatorConfig reference_config(const FieldProfile& profile, const TimeWindow& window,
                                         double max_step = 1e-3) {
    double rate = 0.0;
    for (std::size_t i = 0; i < window.samples; ++i) {
        const double t = window.at(i);
        rate = std::max({rate, std::abs(profile.omega_z(t)) + std::abs(profile.omega_mag(t)),
                         std::abs(profile.phase_rate(t))});
    }
    PropagatorConfig config;
    config.scheme = Scheme::commutator_free_4th;
    config.step = rate > 0.0 ? std::min(max_step, 0.05 / rate) : max_step;
    return config;
}

struct AnsatzReport {
    std::string ansatz;
    std::string profile;
    double max_residual = 0.0;          ///< max |D_induced - D_profile|
    double max_oracle_deviation = 0.0;  ///< max |entries - oracle| (a and b)
    bool residual_ok = false;
    bool oracle_ok = false;
    std::string error;                  ///< set when the representation could not be evaluated

    bool passed() const { return residual_ok && oracle_ok && error.empty(); }
};

/// Residual of the solvability identity and agreement with the numerical oracle.
/// Failures are reported, never thrown.
inline AnsatzReport verify_ansatz(const ThetaAnsatz& ansatz, const FieldProfile& profile,
                                  const TimeWindow& window, double residual_tol = 1e-9,
                                  double oracle_tol = 1e-6) {
    AnsatzReport report;
    report.ansatz = ansatz.label;
    report.profile = profile.label;
    try {
        window.validate();
        ThetaOptions options;
        options.check_consistency = false;
        ThetaSession session(ansatz, profile.omega_mag, options);
        report.max_residual = session.max_residual(profile, window);
        report.residual_ok = report.max_residual <= residual_tol;

        const Trajectory oracle = propagate(profile, reference_config(profile, window), window);
        for (std::size_t i = 0; i < window.samples; ++i) {
            const EvolutionEntries e = session.entries(profile, window.at(i));
            report.max_oracle_deviation =
                std::max(report.max_oracle_deviation, entries_distance(e, oracle.samples[i].entries));
        }
        report.oracle_ok = report.max_oracle_deviation <= oracle_tol;
    } catch (const Error& e) {
        report.error = e.what();
    }
    return report;
}

}  // namespace grs
