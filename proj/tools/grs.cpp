// grs: scenario runner and data exporter.
//
//   grs run --scenario case1 --t-max 50 --samples 5000 --out case1.csv
//   grs run --config configs/sech.json --engine both
//   grs list-scenarios
//   grs verify --scenario case2
//   grs modes --coupling constant --params k0=1 --z-max 1.5707963267948966
//
// Exit codes: 0 success, 2 usage or configuration, 3 numeric failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "grs/grs.hpp"

namespace {

constexpr int kUsage = 2;
constexpr int kNumeric = 3;

struct ScenarioFlags {
    std::string scenario;
    std::string config;
    std::string params;
    std::string table;
    std::optional<double> t_max;
    std::optional<std::size_t> samples;

    void attach(CLI::App* cmd) {
        cmd->add_option("--scenario", scenario, "Built-in family name (see list-scenarios)");
        cmd->add_option("--config", config, "JSON scenario config");
        cmd->add_option("--params", params, "Parameter overrides, k=v,...");
        cmd->add_option("--table", table, "Profile CSV (t, omega_z, omega_mag, phi_omega) for --scenario custom");
        cmd->add_option("--t-max", t_max, "Window end");
        cmd->add_option("--samples", samples, "Number of samples (>= 2)");
    }
};

std::string family_list() {
    std::string list;
    for (const auto& [f, name] : grs::kFamilyNames) list += (list.empty() ? "" : ", ") + std::string(name);
    return list;
}

void apply_params(grs::ScenarioParams& p, const std::string& text) {
    if (text.empty()) return;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw grs::ArgumentError("--params: expected k=v, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        double v = 0.0;
        if (!grs::detail::parse_number(value, v)) {
            throw grs::ArgumentError("--params: value of " + key + " is not a number: '" + value + "'");
        }
        grs::set_param(p, key, v);
    }
}

grs::ScenarioConfig load_scenario(const ScenarioFlags& flags) {
    grs::ScenarioConfig cfg;
    if (!flags.config.empty() && !flags.scenario.empty()) {
        throw grs::ArgumentError("give either --scenario or --config, not both");
    }
    if (!flags.config.empty()) {
        cfg = grs::load_scenario_config(flags.config);
    } else if (!flags.scenario.empty()) {
        const auto family = grs::parse_family(flags.scenario);
        if (!family) {
            throw grs::ArgumentError("unknown scenario '" + flags.scenario + "'; candidates: " + family_list());
        }
        cfg.params = grs::default_params(*family);
        if (*family == grs::Family::custom) {
            if (flags.table.empty()) throw grs::ArgumentError("--scenario custom needs --table PATH");
            cfg.params.table = grs::read_profile_table(flags.table);
        }
        cfg.window = grs::default_window(cfg.params);
    } else {
        throw grs::ArgumentError("one of --scenario or --config is required; scenarios: " + family_list());
    }
    apply_params(cfg.params, flags.params);
    grs::validate_params(cfg.params);
    if (flags.t_max) {
        if (!(*flags.t_max > 0.0)) throw grs::ArgumentError("--t-max must be > 0");
        cfg.window.t_begin = 0.0;
        cfg.window.t_end = *flags.t_max;
    }
    if (flags.samples) {
        if (*flags.samples < 2) throw grs::ArgumentError("--samples must be >= 2");
        cfg.window.samples = *flags.samples;
    }
    return cfg;
}

grs::PropagatorConfig oracle_config(double step, const std::string& scheme) {
    grs::PropagatorConfig c;
    c.step = step;
    if (!scheme.empty()) {
        const auto s = grs::parse_scheme(scheme);
        if (!s) throw grs::ArgumentError("--scheme: unknown scheme '" + scheme + "' (midpoint or cf4)");
        c.scheme = *s;
    }
    c.validate();
    return c;
}

grs::Format parse_format(const std::string& s) {
    if (s == "csv") return grs::Format::csv;
    if (s == "json") return grs::Format::json;
    throw grs::ArgumentError("--format: expected csv or json, got '" + s + "'");
}

template <class Writer>
void write_to(const std::string& path, Writer&& write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw grs::ConfigError("cannot write " + path);
    write(out);
    if (!out) throw grs::ConfigError("write failed: " + path);
}

void write_trajectory(const std::string& path, const grs::Trajectory& traj, const grs::RunSpec& spec) {
    const auto axis = grs::axis_for(spec.scenario.params);
    write_to(path, [&](std::ostream& out) {
        if (spec.format == grs::Format::csv) {
            grs::write_trajectory_csv(out, traj, spec.outputs, axis);
        } else {
            out << grs::trajectory_json(traj, spec.outputs, axis).dump(2) << '\n';
        }
    });
}

/// "out.csv" -> "out.<tag>.csv"
std::string sibling(const std::string& path, const std::string& tag, const std::string& ext) {
    std::filesystem::path p(path);
    const std::string stem = p.stem().string();
    return (p.parent_path() / (stem + "." + tag + ext)).string();
}

int cmd_run(const ScenarioFlags& flags, const std::string& engine, const std::string& format,
            const std::string& outputs, const std::string& out, double step, const std::string& scheme) {
    grs::RunSpec spec;
    spec.scenario = load_scenario(flags);
    if (!engine.empty()) {
        spec.engine = grs::parse_engine(engine);
        if (!spec.engine) throw grs::ArgumentError("--engine: expected closed_form, oracle or both");
    }
    spec.format = parse_format(format);
    if (!outputs.empty()) spec.outputs = grs::parse_outputs(outputs);
    spec.oracle = oracle_config(step, scheme);

    const grs::RunResult result = grs::execute(spec);
    write_trajectory(out, result.primary, spec);
    if (result.deviation) {
        const auto& d = *result.deviation;
        std::fprintf(stderr, "deviation closed_form vs oracle: max|dP|=%.3e max|da|=%.3e max|db|=%.3e\n", d.max_p,
                     d.max_a, d.max_b);
        if (!out.empty() && out != "-") {
            const std::string ext = std::filesystem::path(out).extension().string();
            write_trajectory(sibling(out, "oracle", ext), *result.oracle, spec);
            write_to(sibling(out, "deviation", ".json"),
                     [&](std::ostream& o) { o << grs::deviation_json(d).dump(2) << '\n'; });
        }
    }
    return 0;
}

int cmd_list() {
    for (const auto& [family, name] : grs::kFamilyNames) {
        const grs::ScenarioParams p = grs::default_params(family);
        std::cout << name;
        for (auto param : grs::family_parameters(family)) {
            std::cout << ' ' << param << '=' << grs::format_double(*grs::param_slot(p, param));
        }
        if (family == grs::Family::custom) {
            std::cout << " (needs --table or a config with \"table\")";
        } else {
            const grs::TimeWindow w = grs::default_window(p);
            std::cout << " t_max=" << grs::format_double(w.t_end) << " samples=" << w.samples;
        }
        std::cout << '\n';
    }
    return 0;
}

int cmd_verify(const ScenarioFlags& flags, const std::string& ansatz_name) {
    const grs::ScenarioConfig cfg = load_scenario(flags);
    std::optional<grs::ThetaAnsatz> ansatz;
    if (!ansatz_name.empty()) {
        ansatz = grs::ansatz_by_name(ansatz_name);
        if (!ansatz) {
            const grs::CsvTable t = grs::read_csv(ansatz_name, 2);
            ansatz = grs::tabulated_ansatz(t.columns[0], t.columns[1], ansatz_name);
        }
    }
    const grs::AnsatzReport r = grs::verify_scenario(cfg, ansatz);
    std::printf("scenario %s ansatz %s\n", std::string(grs::family_name(cfg.params.family)).c_str(),
                r.ansatz.c_str());
    if (!r.error.empty()) {
        std::printf("error: %s\nFAIL\n", r.error.c_str());
        return kNumeric;
    }
    std::printf("residual %.3e (<= 1e-9) %s\n", r.max_residual, r.residual_ok ? "ok" : "exceeded");
    std::printf("oracle deviation %.3e (<= 1e-6) %s\n", r.max_oracle_deviation, r.oracle_ok ? "ok" : "exceeded");
    std::printf("%s\n", r.passed() ? "PASS" : "FAIL");
    return r.passed() ? 0 : kNumeric;
}

struct ModeFlags {
    std::string config;
    std::string coupling = "constant";
    std::string params;
    double delta = 0.0;
    double z_max = 1.5707963267948966;
    std::size_t samples = 1001;
    std::string format = "csv";
    std::string out;
    double step = 1e-4;
    std::string scheme;
};

int cmd_modes(const ModeFlags& f) {
    grs::CouplingConfig cfg;
    if (!f.config.empty()) {
        cfg = grs::load_coupling_config(f.config);
    } else {
        nlohmann::json j = {{"delta", f.delta},
                            {"coupling", {{"family", f.coupling}, {"params", nlohmann::json::object()}}},
                            {"window", {{"z_max", f.z_max}, {"samples", f.samples}}}};
        std::istringstream in(f.params);
        std::string item;
        while (std::getline(in, item, ',')) {
            const auto eq = item.find('=');
            double v = 0.0;
            if (eq == std::string::npos || !grs::detail::parse_number(item.substr(eq + 1), v)) {
                throw grs::ArgumentError("--params: expected k=v, got '" + item + "'");
            }
            j["coupling"]["params"][item.substr(0, eq)] = v;
        }
        if (f.coupling == "custom_table") throw grs::ArgumentError("--coupling custom_table needs --config");
        cfg = grs::parse_coupling_config(j);
    }
    const grs::ModeTrajectory traj = grs::propagate_modes(cfg.spec, cfg.initial, cfg.z_max,
                                                          oracle_config(f.step, f.scheme), cfg.samples, cfg.normalize);
    const grs::Format format = parse_format(f.format);
    write_to(f.out, [&](std::ostream& out) {
        if (format == grs::Format::csv) {
            grs::write_modes_csv(out, traj);
        } else {
            out << grs::modes_json(traj).dump(2) << '\n';
        }
    });
    if (traj.power_scale != 1.0) {
        std::fprintf(stderr, "initial power %.17g normalized to 1\n", traj.power_scale);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exactly solvable two-level dynamics: closed forms, numerical oracle and data export"};
    app.require_subcommand(1);

    ScenarioFlags run_flags;
    std::string engine, format = "csv", outputs, out, scheme;
    double step = grs::PropagatorConfig{}.step;
    auto* run = app.add_subcommand("run", "Evaluate a scenario and write its trajectory");
    run_flags.attach(run);
    run->add_option("--engine", engine, "closed_form, oracle or both");
    run->add_option("--format", format, "csv or json");
    run->add_option("--outputs", outputs, "Column groups: entries,probabilities,expectations,fields,detuning");
    run->add_option("--out", out, "Output path (default stdout)");
    run->add_option("--step", step, "Oracle step");
    run->add_option("--scheme", scheme, "Oracle scheme: midpoint or cf4");

    auto* list = app.add_subcommand("list-scenarios", "List built-in families with default parameters");

    ScenarioFlags verify_flags;
    std::string ansatz;
    auto* verify = app.add_subcommand("verify", "Check a scenario's solvability residual and oracle agreement");
    verify_flags.attach(verify);
    verify->add_option("--ansatz", ansatz, "zero, case1, case2 or a (tau, theta) CSV");

    ModeFlags mode_flags;
    auto* modes = app.add_subcommand("modes", "Propagate two coupled guided modes");
    modes->add_option("--config", mode_flags.config, "JSON coupling config");
    modes->add_option("--coupling", mode_flags.coupling, "constant or sech");
    modes->add_option("--params", mode_flags.params, "k0=...,phase=...");
    modes->add_option("--delta", mode_flags.delta, "Phase mismatch");
    modes->add_option("--z-max", mode_flags.z_max, "Propagation length");
    modes->add_option("--samples", mode_flags.samples, "Number of samples");
    modes->add_option("--format", mode_flags.format, "csv or json");
    modes->add_option("--out", mode_flags.out, "Output path (default stdout)");
    modes->add_option("--step", mode_flags.step, "Oracle step");
    modes->add_option("--scheme", mode_flags.scheme, "Oracle scheme: midpoint or cf4");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*run) return cmd_run(run_flags, engine, format, outputs, out, step, scheme);
        if (*list) return cmd_list();
        if (*verify) return cmd_verify(verify_flags, ansatz);
        if (*modes) return cmd_modes(mode_flags);
    } catch (const grs::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const grs::SingularAnsatz& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const grs::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
