#pragma once

// Two co-propagating guided modes,
//   dA/dz = k_ab(z) e^{-i delta z} B,   dB/dz = k_ba(z) e^{i delta z} A,
// with k_ab = -k_ba* = k (power conserving). In the amplitudes A~ = A e^{i delta z/2},
// B~ = B e^{-i delta z/2} this is i dV/dz = H(z) V with
// H = [[-delta/2, gamma], [gamma*, delta/2]], gamma = i k.

#include <cmath>
#include <complex>
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

namespace grs {

struct ModeState {
    Complex amp_a{1.0, 0.0};
    Complex amp_b{0.0, 0.0};
    double z = 0.0;

    double power() const { return std::norm(amp_a) + std::norm(amp_b); }
};

/// Coupling k(z) = |k(z)| exp(i arg k(z)) and constant phase mismatch.
struct CouplingSpec {
    TimeFunction magnitude;            ///< |k(z)| >= 0
    TimeFunction phase;                ///< arg k(z), continuous
    TimeFunction phase_rate;           ///< d arg k / dz; empty means finite differences
    std::function<Complex(double)> k_ba;  ///< empty means the power-conserving -conj(k_ab)
    double delta = 0.0;
    std::string label;

    Complex k_ab(double z) const { return std::polar(magnitude(z), phase(z)); }
};

inline CouplingSpec constant_coupling(double k0, double delta, double phase = 0.0) {
    if (k0 < 0.0) throw ArgumentError("params.k0: must be >= 0 (put the sign in params.phase)");
    return {[k0](double) { return k0; }, [phase](double) { return phase; }, [](double) { return 0.0; },
            {}, delta, "constant"};
}

/// k(z) = k0 sech(k0 z): complete asymptotic transfer at delta = 0.
inline CouplingSpec sech_coupling(double k0, double delta, double phase = 0.0) {
    if (k0 < 0.0) throw ArgumentError("params.k0: must be >= 0 (put the sign in params.phase)");
    return {[k0](double z) { return k0 / std::cosh(k0 * z); }, [phase](double) { return phase; },
            [](double) { return 0.0; }, {}, delta, "sech"};
}

/// Tabulated complex coupling (z, Re k, Im k); the phase is unwrapped between rows.
inline CouplingSpec table_coupling(const std::vector<double>& z, const std::vector<double>& re,
                                   const std::vector<double>& im, double delta) {
    if (re.size() != z.size() || im.size() != z.size()) {
        throw ArgumentError("coupling table: column lengths differ");
    }
    std::vector<double> mag(z.size()), arg(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        mag[i] = std::hypot(re[i], im[i]);
        arg[i] = std::atan2(im[i], re[i]);
    }
    LinearTable m(z, mag, "coupling table |k|");
    LinearTable p(z, unwrap_phase(arg), "coupling table arg k");
    return {m, p, {}, {}, delta, "custom_table"};
}

/// A~ = A e^{i delta z/2}, B~ = B e^{-i delta z/2}.
inline std::pair<Complex, Complex> tilde(const ModeState& s, double delta) {
    return {s.amp_a * std::polar(1.0, 0.5 * delta * s.z), s.amp_b * std::polar(1.0, -0.5 * delta * s.z)};
}

/// Inverse of tilde: A = A~ e^{-i delta z/2}, B = B~ e^{i delta z/2}.
inline ModeState detilde(Complex a_tilde, Complex b_tilde, double z, double delta) {
    return {a_tilde * std::polar(1.0, -0.5 * delta * z), b_tilde * std::polar(1.0, 0.5 * delta * z), z};
}

/// su(2) profile with z as time: W = -delta/2, |w| = |k|, phi = arg k + pi/2.
/// `check` samples the coupling on [0, z_check] to enforce k_ba = -conj(k_ab).
inline FieldProfile to_su2_profile(const CouplingSpec& spec, double z_check = 1.0, std::size_t points = 257) {
    if (!spec.magnitude || !spec.phase) throw ArgumentError("coupling spec: k(z) not set");
    if (spec.k_ba) {
        const TimeWindow w = window_to(std::max(z_check, 1e-12), points);
        for (std::size_t i = 0; i < w.samples; ++i) {
            const double z = w.at(i);
            const Complex expected = -std::conj(spec.k_ab(z));
            if (std::abs(spec.k_ba(z) - expected) > 1e-12 * std::max(1.0, std::abs(expected))) {
                std::ostringstream msg;
                msg << "coupling '" << spec.label << "' is not power conserving at z=" << z
                    << " (k_ba != -conj(k_ab)); only the conservative case is supported";
                throw ArgumentError(msg.str());
            }
        }
    }
    FieldProfile f;
    const double half_delta = 0.5 * spec.delta;
    f.omega_z = [half_delta](double) { return -half_delta; };
    f.omega_mag = spec.magnitude;
    f.phi_omega = [phase = spec.phase](double z) { return phase(z) + 0.5 * std::numbers::pi; };
    f.phi_omega_dot = spec.phase_rate;
    f.label = "modes:" + spec.label;
    return f;
}

struct ModeSample {
    ModeState state;
    double power_a = 0.0;
    double power_b = 0.0;
    double total = 0.0;
};

struct ModeTrajectory {
    std::string label;
    double power_scale = 1.0;  ///< initial total power divided out when normalizing
    std::vector<ModeSample> samples;
};

/// Propagates the mode amplitudes through the su(2) oracle, then undoes the phase-mismatch frame.
inline ModeTrajectory propagate_modes(const CouplingSpec& spec, ModeState initial, double z_max,
                                      const PropagatorConfig& config, std::size_t samples = 1001,
                                      bool normalize = true) {
    const TimeWindow window = window_to(z_max, samples);
    window.validate();
    ModeTrajectory out;
    out.label = spec.label;
    const double p0 = initial.power();
    if (!(p0 > 0.0)) throw ArgumentError("initial: total power must be > 0");
    if (normalize && p0 != 1.0) {
        out.power_scale = p0;
        initial.amp_a /= std::sqrt(p0);
        initial.amp_b /= std::sqrt(p0);
    }
    initial.z = 0.0;
    const FieldProfile profile = to_su2_profile(spec, z_max);
    const Trajectory u = propagate(profile, config, window);
    out.samples.reserve(u.size());
    for (const TrajectorySample& s : u.samples) {
        const Complex a = s.entries.a;
        const Complex b = s.entries.b;
        const Complex at = a * initial.amp_a + b * initial.amp_b;
        const Complex bt = -std::conj(b) * initial.amp_a + std::conj(a) * initial.amp_b;
        ModeSample m;
        m.state = detilde(at, bt, s.t, spec.delta);
        m.power_a = std::norm(m.state.amp_a);
        m.power_b = std::norm(m.state.amp_b);
        m.total = m.power_a + m.power_b;
        out.samples.push_back(m);
    }
    return out;
}

}  // namespace grs
