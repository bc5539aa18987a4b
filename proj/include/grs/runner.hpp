#pragma once

// Scenario runs: closed forms and/or the oracle on one configured scenario,
// plus the per-family verification used by `grs verify`.

#include <optional>
#include <string>
#include <string_view>

#include "closed_forms.hpp"
#include "config.hpp"
#include "field_model.hpp"
#include "io.hpp"
#include "propagator.hpp"
#include "theta_solver.hpp"
#include "trajectory.hpp"

namespace grs {

enum class Engine { closed_form, oracle, both };

inline std::optional<Engine> parse_engine(std::string_view s) {
    if (s == "closed_form") return Engine::closed_form;
    if (s == "oracle") return Engine::oracle;
    if (s == "both") return Engine::both;
    return std::nullopt;
}

enum class Format { csv, json };

struct RunSpec {
    ScenarioConfig scenario;
    std::optional<Engine> engine;  ///< default: closed_form when cataloged, else oracle
    OutputSet outputs;
    Format format = Format::csv;
    PropagatorConfig oracle;
};

struct RunResult {
    Engine engine = Engine::closed_form;
    Trajectory primary;               ///< closed form, or the oracle for engine=oracle
    std::optional<Trajectory> oracle;  ///< engine=both only
    std::optional<Deviation> deviation;
};

inline Engine resolved_engine(const RunSpec& spec) {
    if (spec.engine) return *spec.engine;
    return has_closed_form(spec.scenario.params.family) ? Engine::closed_form : Engine::oracle;
}

inline RunResult execute(const RunSpec& spec) {
    const ScenarioParams& params = spec.scenario.params;
    const TimeWindow& window = spec.scenario.window;
    window.validate();
    const FieldProfile profile = make_scenario(params);

    RunResult r;
    r.engine = resolved_engine(spec);
    if (r.engine != Engine::oracle && !has_closed_form(params.family)) {
        throw ArgumentError("engine " + std::string(r.engine == Engine::both ? "both" : "closed_form") +
                            " requires a cataloged family; " + std::string(family_name(params.family)) +
                            " has no closed form (use --engine oracle)");
    }
    if (r.engine == Engine::oracle) {
        r.primary = propagate(profile, spec.oracle, window);
        return r;
    }
    r.primary = closed_form_trajectory(params, profile, window);
    if (r.engine == Engine::both) {
        r.oracle = propagate(profile, spec.oracle, window);
        r.deviation = compare(r.primary, *r.oracle);
    }
    return r;
}

inline AxisFunction axis_for(const ScenarioParams& params) {
    return [params](double t) { return family_axis(params, t); };
}

// ---------------------------------------------------------------------------
// Verification

namespace detail {

/// Constant-ratio families: residual of D = beta0 |w| and closed form vs oracle.
inline AnsatzReport verify_beta0(const FieldProfile& profile, const ScenarioParams& params, double beta0,
                                 const TimeWindow& window, double residual_tol, double oracle_tol) {
    AnsatzReport report;
    report.ansatz = "beta0";
    report.profile = profile.label;
    try {
        window.validate();
        for (std::size_t i = 0; i < window.samples; ++i) {
            const double t = window.at(i);
            report.max_residual =
                std::max(report.max_residual, std::abs(detuning(profile, t) - beta0 * profile.omega_mag(t)));
        }
        report.residual_ok = report.max_residual <= residual_tol;
        if (report.residual_ok) {
            const Trajectory closed = closed_form_trajectory(params, profile, window);
            const Trajectory oracle = propagate(profile, reference_config(profile, window), window);
            for (std::size_t i = 0; i < window.samples; ++i) {
                report.max_oracle_deviation = std::max(
                    report.max_oracle_deviation, entries_distance(closed.samples[i].entries, oracle.samples[i].entries));
            }
            report.oracle_ok = report.max_oracle_deviation <= oracle_tol;
        }
    } catch (const Error& e) {
        report.error = e.what();
    }
    return report;
}

}  // namespace detail

/// Ansatz each family is solved by. Off-resonant Rabi and constant_beta0 use the
/// constant-ratio solution instead (no Theta representation), signalled by nullopt.
inline std::optional<ThetaAnsatz> natural_ansatz(const ScenarioParams& params, const FieldProfile& profile,
                                                 const TimeWindow& window) {
    switch (params.family) {
        case Family::sech_resonant:
        case Family::exp_resonant:
        case Family::modulated_resonant: return zero_ansatz();
        case Family::case1: return case1_ansatz();
        case Family::case2: return case2_ansatz();
        case Family::rabi:
        case Family::constant_beta0: return std::nullopt;
        case Family::custom:
            if (is_generalized_resonant(profile, window, kResonanceTol)) return zero_ansatz();
            throw ArgumentError("custom profile is not resonant; pass --ansatz zero|case1|case2|<table.csv>");
    }
    return std::nullopt;
}

/// Residual (<= 1e-9) and oracle deviation (<= 1e-6) report for a scenario.
inline AnsatzReport verify_scenario(const ScenarioConfig& scenario, const std::optional<ThetaAnsatz>& ansatz,
                                    double residual_tol = 1e-9, double oracle_tol = 1e-6) {
    const FieldProfile profile = make_scenario(scenario.params);
    const auto chosen = ansatz ? ansatz : natural_ansatz(scenario.params, profile, scenario.window);
    if (chosen) return verify_ansatz(*chosen, profile, scenario.window, residual_tol, oracle_tol);
    const ScenarioParams& p = scenario.params;
    const double beta0 = p.family == Family::constant_beta0 ? p.beta0
                         : p.omega0 > 0.0                   ? (p.Omega0 + 0.5 * p.phidot0) / p.omega0
                                                            : 0.0;
    if (p.family == Family::rabi && p.omega0 == 0.0) {
        // no transverse field: U is diagonal and any beta0 fits; compare against the oracle only
        return detail::verify_beta0(profile, p, 0.0, scenario.window, std::abs(p.Omega0 + 0.5 * p.phidot0) + residual_tol,
                                    oracle_tol);
    }
    return detail::verify_beta0(profile, p, beta0, scenario.window, residual_tol, oracle_tol);
}

}  // namespace grs
