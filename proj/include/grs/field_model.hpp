#pragma once

// Time-dependent su(2) Hamiltonian H(t) = [[W(t), w(t)], [w*(t), -W(t)]] with
// w = |w| exp(i phi). hbar = 1; energies in units of a reference |w0|.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "interpolation.hpp"
#include "solvable_cases.hpp"

namespace grs {

using TimeFunction = std::function<double(double)>;

/// Uniform sampling of [t_begin, t_end] with `samples` points including both ends.
struct TimeWindow {
    double t_begin = 0.0;
    double t_end = 1.0;
    std::size_t samples = 2;

    void validate() const {
        if (samples < 2) throw ArgumentError("window.samples must be >= 2");
        if (!(t_end > t_begin)) throw ArgumentError("window must have t_end > t_begin");
    }

    double at(std::size_t i) const {
        if (i + 1 == samples) return t_end;
        return t_begin + (t_end - t_begin) * static_cast<double>(i) / static_cast<double>(samples - 1);
    }
};

inline TimeWindow window_to(double t_max, std::size_t samples) { return {0.0, t_max, samples}; }

/// Five-point central difference.
inline double central_difference(const TimeFunction& f, double t, double h) {
    return (-f(t + 2.0 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2.0 * h)) / (12.0 * h);
}

struct FieldProfile {
    TimeFunction omega_z;        ///< diagonal entry W(t)
    TimeFunction omega_mag;      ///< |w(t)| >= 0
    TimeFunction phi_omega;      ///< phase of w(t), continuous
    TimeFunction phi_omega_dot;  ///< analytic d(phi)/dt; empty means numeric differentiation
    std::string label;
    double derivative_step = 1e-4;
    bool numeric_derivative = true;

    double phase_rate(double t) const {
        if (phi_omega_dot) return phi_omega_dot(t);
        if (!numeric_derivative) {
            throw ConfigError("profile '" + label +
                              "': phase derivative unavailable and numerical differentiation disabled");
        }
        return central_difference(phi_omega, t, derivative_step);
    }
};

/// D(t) = W(t) + phi'(t)/2. Zero is the generalized resonance condition.
inline double detuning(const FieldProfile& profile, double t) {
    return profile.omega_z(t) + 0.5 * profile.phase_rate(t);
}

inline double max_abs_detuning(const FieldProfile& profile, const TimeWindow& window) {
    window.validate();
    double worst = 0.0;
    for (std::size_t i = 0; i < window.samples; ++i) {
        worst = std::max(worst, std::abs(detuning(profile, window.at(i))));
    }
    return worst;
}

inline bool is_generalized_resonant(const FieldProfile& profile, const TimeWindow& window, double tol) {
    if (window.samples == 0 || !(window.t_end >= window.t_begin)) {
        throw ArgumentError("is_generalized_resonant: empty window");
    }
    if (!(tol > 0.0)) throw ArgumentError("tol must be > 0");
    if (window.samples == 1) return std::abs(detuning(profile, window.t_begin)) <= tol;
    return max_abs_detuning(profile, window) <= tol;
}

// ---------------------------------------------------------------------------
// Built-in scenario families

enum class Family {
    rabi,
    sech_resonant,
    exp_resonant,
    modulated_resonant,
    constant_beta0,
    case1,
    case2,
    custom,
};

inline constexpr std::pair<Family, std::string_view> kFamilyNames[] = {
    {Family::rabi, "rabi"},
    {Family::sech_resonant, "sech_resonant"},
    {Family::exp_resonant, "exp_resonant"},
    {Family::modulated_resonant, "modulated_resonant"},
    {Family::constant_beta0, "constant_beta0"},
    {Family::case1, "case1"},
    {Family::case2, "case2"},
    {Family::custom, "custom"},
};

inline std::string_view family_name(Family f) {
    for (auto [family, name] : kFamilyNames) {
        if (family == f) return name;
    }
    return "?";
}

inline std::optional<Family> parse_family(std::string_view name) {
    for (auto [family, n] : kFamilyNames) {
        if (n == name) return family;
    }
    return std::nullopt;
}

/// Sampled profile for the custom family: W, |w| and phi at increasing times.
struct ProfileTable {
    std::vector<double> t;
    std::vector<double> omega_z;
    std::vector<double> omega_mag;
    std::vector<double> phi_omega;
};

/// Parameters of a built-in family. Values are dimensionless (reference units).
struct ScenarioParams {
    Family family = Family::rabi;
    double omega0 = 1.0;          ///< |w0|
    double Omega0 = -5.0;         ///< static W (rabi only)
    double phidot0 = 10.0;        ///< phase velocity of the transverse field
    double gamma = 1.0;           ///< decay rate (exp_resonant)
    double alpha = 4.5 * std::numbers::pi;  ///< |w0| / gamma (exp_resonant)
    double k = 1.0;               ///< modulation depth A'/B_perp
    double n = 10.0;              ///< modulation frequency ratio lambda / phidot0
    double C = 1.0;               ///< |w0| / phidot0 (modulated_resonant)
    double beta0 = 1.0;           ///< constant detuning ratio D / |w|
    double split_fraction = 0.0;  ///< share of the detuning carried by phi'/2 (case1/case2)
    ProfileTable table;           ///< custom family only
};

/// Parameter names a family accepts.
inline std::vector<std::string_view> family_parameters(Family f) {
    switch (f) {
        case Family::rabi: return {"omega0", "Omega0", "phidot0"};
        case Family::sech_resonant: return {"omega0", "phidot0"};
        case Family::exp_resonant: return {"gamma", "alpha", "phidot0"};
        case Family::modulated_resonant: return {"C", "k", "n", "phidot0"};
        case Family::constant_beta0: return {"omega0", "beta0", "phidot0"};
        case Family::case1:
        case Family::case2: return {"omega0", "split_fraction"};
        case Family::custom: return {};
    }
    return {};
}

/// Family defaults; differ from the struct defaults where the family's figure uses other values.
inline ScenarioParams default_params(Family f) {
    ScenarioParams p;
    p.family = f;
    if (f == Family::modulated_resonant) p.phidot0 = 1.0;
    if (f == Family::constant_beta0) p.phidot0 = 0.0;
    return p;
}

template <class Params>
auto* param_slot(Params& p, std::string_view name) {
    using Slot = decltype(&p.omega0);
    if (name == "omega0") return &p.omega0;
    if (name == "Omega0") return &p.Omega0;
    if (name == "phidot0") return &p.phidot0;
    if (name == "gamma") return &p.gamma;
    if (name == "alpha") return &p.alpha;
    if (name == "k") return &p.k;
    if (name == "n") return &p.n;
    if (name == "C") return &p.C;
    if (name == "beta0") return &p.beta0;
    if (name == "split_fraction") return &p.split_fraction;
    return Slot{nullptr};
}

/// Sets a named parameter, rejecting names the family does not use.
inline void set_param(ScenarioParams& p, std::string_view name, double value) {
    const auto allowed = family_parameters(p.family);
    double* slot = param_slot(p, name);
    if (!slot || std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
        std::string list;
        for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
        throw ArgumentError("params." + std::string(name) + ": unknown parameter for family " +
                            std::string(family_name(p.family)) + " (accepted: " + list + ")");
    }
    *slot = value;
}

inline void validate_params(const ScenarioParams& p) {
    auto fail = [](std::string_view name, const std::string& why) {
        throw ArgumentError("params." + std::string(name) + ": " + why);
    };
    auto finite = [&](std::string_view name, double v) {
        if (!std::isfinite(v)) fail(name, "must be finite");
    };
    for (auto name : family_parameters(p.family)) {
        finite(name, *param_slot(p, name));
    }
    switch (p.family) {
        case Family::rabi:
        case Family::sech_resonant:
        case Family::constant_beta0:
        case Family::case1:
        case Family::case2:
            if (p.omega0 < 0.0) fail("omega0", "must be >= 0");
            break;
        default: break;
    }
    if (p.family == Family::exp_resonant) {
        if (!(p.gamma > 0.0)) fail("gamma", "must be > 0");
        if (p.alpha < 0.0) fail("alpha", "must be >= 0");
    }
    if (p.family == Family::modulated_resonant) {
        if (!(p.n >= 1.0) || std::floor(p.n) != p.n) fail("n", "must be a positive integer");
        if (p.k < 0.0) fail("k", "must be >= 0");
        if (p.k > 1.0) fail("k", "must be <= 1 so that |w| stays non-negative");
        if (p.C < 0.0) fail("C", "must be >= 0");
        if (!(p.phidot0 > 0.0)) fail("phidot0", "must be > 0");
    }
    if (p.family == Family::constant_beta0 && p.beta0 < 0.0) fail("beta0", "must be >= 0");
    if ((p.family == Family::case1 || p.family == Family::case2) &&
        (p.split_fraction < 0.0 || p.split_fraction > 1.0)) {
        fail("split_fraction", "must lie in [0, 1]");
    }
}

/// Default evaluation window of each family (dimensionless figure axes).
inline TimeWindow default_window(const ScenarioParams& p) {
    constexpr std::size_t kSamples = 1001;
    switch (p.family) {
        case Family::rabi:
        case Family::constant_beta0: return window_to(2.0 * std::numbers::pi, kSamples);
        case Family::sech_resonant: return window_to(6.0, kSamples);
        case Family::exp_resonant: return window_to(20.0 / p.gamma, kSamples);
        case Family::modulated_resonant: return window_to(4.0 * std::numbers::pi / p.phidot0, kSamples);
        case Family::case1:
        case Family::case2: return window_to(20.0, kSamples);
        case Family::custom:
            if (p.table.t.size() >= 2) return {p.table.t.front(), p.table.t.back(), kSamples};
            return window_to(1.0, kSamples);
    }
    return window_to(1.0, kSamples);
}

/// Dimensionless abscissa used by each family's plots.
inline double family_axis(const ScenarioParams& p, double t) {
    switch (p.family) {
        case Family::exp_resonant: return p.gamma * t;
        case Family::modulated_resonant: return p.phidot0 * t;
        case Family::custom: return t;
        default: return p.omega0 * t;
    }
}

namespace detail {

inline FieldProfile rabi_profile(double omega_z, double omega_mag, double phidot, std::string label) {
    FieldProfile f;
    f.omega_z = [omega_z](double) { return omega_z; };
    f.omega_mag = [omega_mag](double) { return omega_mag; };
    f.phi_omega = [phidot](double t) { return phidot * t; };
    f.phi_omega_dot = [phidot](double) { return phidot; };
    f.label = std::move(label);
    return f;
}

inline FieldProfile theta_case_profile(double omega0, double split, double (*beta)(double),
                                       double (*beta_integral)(double), std::string label) {
    FieldProfile f;
    f.omega_z = [=](double t) { return (1.0 - split) * omega0 * beta(omega0 * t); };
    f.omega_mag = [=](double) { return omega0; };
    f.phi_omega = [=](double t) { return 2.0 * split * beta_integral(omega0 * t); };
    f.phi_omega_dot = [=](double t) { return 2.0 * split * omega0 * beta(omega0 * t); };
    f.label = std::move(label);
    return f;
}

inline FieldProfile table_profile(const ProfileTable& table) {
    LinearTable wz(table.t, table.omega_z, "custom table omega_z");
    LinearTable wm(table.t, table.omega_mag, "custom table omega_mag");
    LinearTable ph(table.t, unwrap_phase(table.phi_omega), "custom table phi_omega");
    for (std::size_t i = 0; i < table.omega_mag.size(); ++i) {
        if (table.omega_mag[i] < 0.0) {
            throw ArgumentError("custom table omega_mag: negative value at row " + std::to_string(i));
        }
    }
    FieldProfile f;
    f.omega_z = wz;
    f.omega_mag = wm;
    f.phi_omega = ph;
    f.label = "custom";
    return f;
}

}  // namespace detail

/// Builds the FieldProfile of a built-in family.
inline FieldProfile make_scenario(const ScenarioParams& p) {
    validate_params(p);
    switch (p.family) {
        case Family::rabi:
            return detail::rabi_profile(p.Omega0, p.omega0, p.phidot0, "rabi");
        case Family::sech_resonant: {
            FieldProfile f = detail::rabi_profile(-0.5 * p.phidot0, p.omega0, p.phidot0, "sech_resonant");
            const double w0 = p.omega0;
            f.omega_mag = [w0](double t) { return w0 / std::cosh(w0 * t); };
            return f;
        }
        case Family::exp_resonant: {
            const double w0 = p.alpha * p.gamma;
            const double g = p.gamma;
            FieldProfile f = detail::rabi_profile(-0.5 * p.phidot0, w0, p.phidot0, "exp_resonant");
            f.omega_mag = [w0, g](double t) { return w0 * std::exp(-g * t); };
            return f;
        }
        case Family::modulated_resonant: {
            const double w0 = p.C * p.phidot0;
            const double lambda = p.n * p.phidot0;
            const double amp = p.k * w0;
            FieldProfile f = detail::rabi_profile(-0.5 * p.phidot0, w0, p.phidot0, "modulated_resonant");
            f.omega_mag = [w0, amp, lambda](double t) { return w0 + amp * std::cos(lambda * t); };
            return f;
        }
        case Family::constant_beta0:
            return detail::rabi_profile(p.beta0 * p.omega0 - 0.5 * p.phidot0, p.omega0, p.phidot0,
                                        "constant_beta0");
        case Family::case1:
            return detail::theta_case_profile(p.omega0, p.split_fraction, cases::case1_beta,
                                              cases::case1_beta_integral, "case1");
        case Family::case2:
            return detail::theta_case_profile(p.omega0, p.split_fraction, cases::case2_beta,
                                              cases::case2_beta_integral, "case2");
        case Family::custom:
            return detail::table_profile(p.table);
    }
    throw ArgumentError("unknown family");
}

// ---------------------------------------------------------------------------
// Laboratory-frame magnetic field

struct PhysicalField {
    TimeFunction b_x;
    TimeFunction b_y;
    TimeFunction b_z;
    double mu0_g = 1.0;  ///< magnetic-moment scale, energy per tesla
};

/// Converts a laboratory field to Hamiltonian parameters. The transverse phase
/// atan2(-B_y, B_x) is evaluated exactly and placed on the branch selected by an
/// unwrapped reference sampled over `window`; where the transverse field vanishes
/// the previous phase is held.
inline FieldProfile to_profile(const PhysicalField& field, const TimeWindow& window) {
    if (!(field.mu0_g > 0.0)) throw ArgumentError("mu0_g must be > 0");
    window.validate();
    const double scale = 0.5 * field.mu0_g;

    std::vector<double> ts(window.samples), raw(window.samples), mags(window.samples);
    double max_mag = 0.0;
    for (std::size_t i = 0; i < window.samples; ++i) {
        ts[i] = window.at(i);
        mags[i] = std::hypot(field.b_x(ts[i]), field.b_y(ts[i]));
        max_mag = std::max(max_mag, mags[i]);
    }
    const double floor = 1e-12 * max_mag;
    double held = 0.0;
    for (std::size_t i = 0; i < window.samples; ++i) {
        if (mags[i] > floor) held = std::atan2(-field.b_y(ts[i]), field.b_x(ts[i]));
        raw[i] = held;
    }
    const LinearTable reference(ts, unwrap_phase(raw), "phase reference");

    FieldProfile f;
    f.omega_z = [bz = field.b_z, scale](double t) { return scale * bz(t); };
    f.omega_mag = [bx = field.b_x, by = field.b_y, scale](double t) {
        return scale * std::hypot(bx(t), by(t));
    };
    f.phi_omega = [bx = field.b_x, by = field.b_y, reference, floor](double t) {
        const double ref = reference(t);
        const double x = bx(t);
        const double y = by(t);
        if (std::hypot(x, y) <= floor) return ref;
        const double wrapped = std::atan2(-y, x);
        const double turns = std::round((ref - wrapped) / (2.0 * std::numbers::pi));
        return wrapped + 2.0 * std::numbers::pi * turns;
    };
    f.label = "physical";
    return f;
}

inline PhysicalField from_profile(const FieldProfile& profile, double mu0_g) {
    if (!(mu0_g > 0.0)) throw ArgumentError("mu0_g must be > 0");
    const double inv = 2.0 / mu0_g;
    PhysicalField b;
    b.mu0_g = mu0_g;
    b.b_x = [p = profile, inv](double t) { return inv * p.omega_mag(t) * std::cos(p.phi_omega(t)); };
    b.b_y = [p = profile, inv](double t) { return -inv * p.omega_mag(t) * std::sin(p.phi_omega(t)); };
    b.b_z = [p = profile, inv](double t) { return inv * p.omega_z(t); };
    return b;
}

}  // namespace grs
