#pragma once

// Numerical solution of i dU/dt = H(t) U, U(t0) = 1, with exactly unitary steps.
// Reads only W, |w| and phi of the profile; never any closed form.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "entries.hpp"
#include "errors.hpp"
#include "field_model.hpp"
#include "trajectory.hpp"

namespace grs {

enum class Scheme { midpoint_exponential, commutator_free_4th };

inline std::optional<Scheme> parse_scheme(std::string_view name) {
    if (name == "midpoint_exponential" || name == "midpoint") return Scheme::midpoint_exponential;
    if (name == "commutator_free_4th" || name == "cf4") return Scheme::commutator_free_4th;
    return std::nullopt;
}

inline std::string_view scheme_name(Scheme s) {
    return s == Scheme::midpoint_exponential ? "midpoint_exponential" : "commutator_free_4th";
}

inline int nominal_order(Scheme s) { return s == Scheme::midpoint_exponential ? 2 : 4; }

/// Midpoint exponential unless GRS_DEFAULT_SCHEME names another scheme.
inline Scheme default_scheme() {
    if (const char* env = std::getenv("GRS_DEFAULT_SCHEME")) {
        if (auto s = parse_scheme(env)) return *s;
    }
    return Scheme::midpoint_exponential;
}

struct PropagatorConfig {
    Scheme scheme = default_scheme();
    double step = 1e-4;
    double max_unitarity_drift = 1e-10;
    std::size_t samples = 1001;

    void validate() const {
        if (!(step > 0.0)) throw ArgumentError("step must be > 0");
        if (!(max_unitarity_drift >= 0.0)) throw ArgumentError("max_unitarity_drift must be >= 0");
    }
};

/// Element [[a, b], [-b*, a*]] of SU(2), stored by its first row.
struct Su2 {
    Complex a{1.0, 0.0};
    Complex b{0.0, 0.0};

    /// Left multiplication: returns step * (*this).
    Su2 left_mul(const Su2& step) const {
        return {step.a * a - step.b * std::conj(b), step.a * b + step.b * std::conj(a)};
    }

    Su2 inverse() const { return {std::conj(a), -b}; }

    double det_defect() const { return std::abs(std::norm(a) + std::norm(b) - 1.0); }
};

/// Traceless Hermitian generator diag(z, -z) + offdiag(w, w*).
struct Su2Generator {
    double z = 0.0;
    Complex w{0.0, 0.0};

    Su2Generator operator*(double s) const { return {z * s, w * s}; }
    Su2Generator operator+(const Su2Generator& o) const { return {z + o.z, w + o.w}; }
};

/// exp(-i G dt) in closed form: cos(n dt) 1 - i sin(n dt) G / n, n = |G|.
inline Su2 exponential(const Su2Generator& g, double dt) {
    const double n = std::sqrt(g.z * g.z + std::norm(g.w));
    const double angle = n * dt;
    const double c = std::cos(angle);
    const double s_over_n = n * dt > 1e-300 ? std::sin(angle) / n : dt;
    return {Complex(c, -s_over_n * g.z), Complex(0.0, -s_over_n) * g.w};
}

inline Su2Generator hamiltonian(const FieldProfile& profile, double t) {
    return {profile.omega_z(t), std::polar(profile.omega_mag(t), profile.phi_omega(t))};
}

namespace detail {

inline void check_resolution(const FieldProfile& profile, double t, double h) {
    const double rate = std::max(std::abs(profile.omega_z(t)) + std::abs(profile.omega_mag(t)),
                                 std::abs(profile.phase_rate(t)));
    if (h * rate > 0.1) {
        const double suggested = 0.09 / rate;
        std::ostringstream msg;
        msg.precision(6);
        msg << "step " << h << " does not resolve the Hamiltonian at t=" << t << " (rate " << rate
            << "); use step <= " << suggested;
        throw ResolutionError(msg.str(), suggested);
    }
}

inline Su2 one_step(const FieldProfile& profile, Scheme scheme, double t, double h) {
    if (scheme == Scheme::midpoint_exponential) {
        const double tm = t + 0.5 * h;
        check_resolution(profile, tm, h);
        return exponential(hamiltonian(profile, tm), h);
    }
    // two-exponential commutator-free scheme on Gauss-Legendre nodes
    constexpr double kNodeOffset = 0.28867513459481288225;  // sqrt(3)/6
    constexpr double kLate = 0.25 + kNodeOffset;
    constexpr double kEarly = 0.25 - kNodeOffset;
    const double t1 = t + (0.5 - kNodeOffset) * h;
    const double t2 = t + (0.5 + kNodeOffset) * h;
    check_resolution(profile, t1, h);
    check_resolution(profile, t2, h);
    const Su2Generator h1 = hamiltonian(profile, t1);
    const Su2Generator h2 = hamiltonian(profile, t2);
    const Su2 first = exponential(h1 * kLate + h2 * kEarly, h);
    const Su2 second = exponential(h1 * kEarly + h2 * kLate, h);
    return first.left_mul(second);
}

}  // namespace detail

/// Propagates `start` from t0 to t1 in equal sub-steps no longer than config.step.
inline Su2 evolve(const FieldProfile& profile, const PropagatorConfig& config, double t0, double t1,
                  Su2 start = {}) {
    config.validate();
    const double span = t1 - t0;
    if (span == 0.0) return start;
    const auto steps = static_cast<std::size_t>(std::ceil(std::abs(span) / config.step - 1e-9));
    const double h = span / static_cast<double>(std::max<std::size_t>(steps, 1));
    Su2 u = start;
    for (std::size_t i = 0; i < std::max<std::size_t>(steps, 1); ++i) {
        u = u.left_mul(detail::one_step(profile, config.scheme, t0 + static_cast<double>(i) * h, h));
    }
    return u;
}

/// Trajectory of U(t) entries over the window, starting from U(t_begin) = 1.
inline Trajectory propagate(const FieldProfile& profile, const PropagatorConfig& config,
                            const TimeWindow& window) {
    config.validate();
    window.validate();
    Trajectory traj;
    traj.label = profile.label;
    traj.samples.reserve(window.samples);
    Su2 u;
    double t_prev = window.at(0);
    for (std::size_t i = 0; i < window.samples; ++i) {
        const double t = window.at(i);
        if (i > 0) u = evolve(profile, config, t_prev, t, u);
        t_prev = t;
        if (u.det_defect() > config.max_unitarity_drift) {
            std::ostringstream msg;
            msg << "unitarity drift " << u.det_defect() << " exceeds " << config.max_unitarity_drift
                << " at t=" << t;
            throw NumericError(msg.str());
        }
        traj.samples.push_back(make_sample(profile, {u.a, u.b, t}));
    }
    return traj;
}

inline Trajectory propagate(const FieldProfile& profile, const PropagatorConfig& config, double t_max) {
    return propagate(profile, config, window_to(t_max, config.samples));
}

/// Profile whose forward evolution over [0, horizon] undoes the original: H'(s) = -H(horizon - s).
inline FieldProfile time_reversed(const FieldProfile& profile, double horizon) {
    FieldProfile r;
    r.omega_z = [p = profile, horizon](double s) { return -p.omega_z(horizon - s); };
    r.omega_mag = [p = profile, horizon](double s) { return p.omega_mag(horizon - s); };
    r.phi_omega = [p = profile, horizon](double s) { return p.phi_omega(horizon - s) + std::numbers::pi; };
    r.phi_omega_dot = [p = profile, horizon](double s) { return -p.phase_rate(horizon - s); };
    r.label = profile.label + " (reversed)";
    return r;
}

struct ConvergenceReport {
    Scheme scheme = Scheme::midpoint_exponential;
    int nominal_order = 2;
    double observed_order = std::numeric_limits<double>::quiet_NaN();
    double coarse_difference = 0.0;  ///< max |U_h - U_{h/2}| over samples
    double fine_difference = 0.0;    ///< max |U_{h/2} - U_{h/4}|
    bool exact = false;              ///< differences at round-off: scheme is exact for this profile
    bool within_tolerance = false;   ///< |observed - nominal| <= 0.3, or exact
};

/// Observed convergence order from runs at step, step/2 and step/4.
inline ConvergenceReport richardson_check(const FieldProfile& profile, const PropagatorConfig& config,
                                          const TimeWindow& window) {
    ConvergenceReport report;
    report.scheme = config.scheme;
    report.nominal_order = nominal_order(config.scheme);

    PropagatorConfig c = config;
    c.max_unitarity_drift = std::max(config.max_unitarity_drift, 1e-8);
    const Trajectory coarse = propagate(profile, c, window);
    c.step = config.step / 2.0;
    const Trajectory mid = propagate(profile, c, window);
    c.step = config.step / 4.0;
    const Trajectory fine = propagate(profile, c, window);

    const Deviation d1 = compare(coarse, mid);
    const Deviation d2 = compare(mid, fine);
    report.coarse_difference = std::max(d1.max_a, d1.max_b);
    report.fine_difference = std::max(d2.max_a, d2.max_b);

    constexpr double kRoundOff = 1e-12;
    if (report.coarse_difference < kRoundOff) {
        report.exact = true;
        report.within_tolerance = true;
        return report;
    }
    report.observed_order = std::log2(report.coarse_difference / report.fine_difference);
    report.within_tolerance = std::abs(report.observed_order - report.nominal_order) <= 0.3;
    return report;
}

}  // namespace grs
