#pragma once

// JSON scenario and coupling configurations. Schema violations raise ConfigError
// whose message starts with the offending field path.
//
// Scenario:
//   {"family": "case1", "params": {"omega0": 1.0}, "window": {"t_max": 20, "samples": 1001},
//    "split_fraction": 0.5, "table": "profile.csv"}
// `split_fraction` is accepted for case1/case2 only and `table` (t, omega_z, omega_mag,
// phi_omega CSV, relative to the config file) for custom only.
//
// Coupling:
//   {"delta": 0.0, "coupling": {"family": "constant", "params": {"k0": 1.0, "phase": 0.0},
//    "table": "k.csv"}, "window": {"z_max": 1.5707963, "samples": 1001},
//    "initial": {"A": [1, 0], "B": [0, 0]}, "normalize": true}
// Coupling tables have columns z, re_k, im_k.

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "coupled_modes.hpp"
#include "errors.hpp"
#include "field_model.hpp"
#include "io.hpp"

namespace grs {

struct ScenarioConfig {
    ScenarioParams params;
    TimeWindow window;
};

struct CouplingConfig {
    CouplingSpec spec;
    ModeState initial;
    double z_max = 1.0;
    std::size_t samples = 1001;
    bool normalize = true;
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void schema_error(const std::string& path, const std::string& why) {
    throw ConfigError(path + ": " + why);
}

inline void only_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> keys) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (auto k : keys) known = known || it.key() == k;
        if (!known) schema_error(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
    }
}

inline const json& object_at(const json& j, const std::string& path) {
    if (!j.is_object()) schema_error(path.empty() ? "<root>" : path, "expected an object");
    return j;
}

inline double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) schema_error(path, "expected a number");
    return j.get<double>();
}

inline std::size_t count_at(const json& j, const std::string& path) {
    if (!j.is_number_integer() && !j.is_number_unsigned()) schema_error(path, "expected an integer");
    const auto v = j.get<long long>();
    if (v < 2) schema_error(path, "must be >= 2");
    return static_cast<std::size_t>(v);
}

inline std::string string_at(const json& j, const std::string& path) {
    if (!j.is_string()) schema_error(path, "expected a string");
    return j.get<std::string>();
}

inline Complex complex_at(const json& j, const std::string& path) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        schema_error(path, "expected a number or [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline std::string resolve(const std::filesystem::path& base, const std::string& file) {
    const std::filesystem::path p(file);
    return p.is_absolute() ? file : (base / p).string();
}

inline json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": invalid JSON (" + e.what() + ")");
    }
}

}  // namespace detail

/// Builds a scenario from a parsed config; `base_dir` anchors relative table paths.
inline ScenarioConfig parse_scenario_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
    using namespace detail;
    object_at(j, "");
    only_keys(j, "", {"family", "params", "window", "split_fraction", "table"});
    if (!j.contains("family")) schema_error("family", "required");
    const std::string name = string_at(j["family"], "family");
    const auto family = parse_family(name);
    if (!family) {
        std::string list;
        for (const auto& [f, n] : kFamilyNames) list += (list.empty() ? "" : ", ") + std::string(n);
        schema_error("family", "unknown family '" + name + "' (expected one of: " + list + ")");
    }
    ScenarioConfig cfg;
    cfg.params = default_params(*family);

    if (j.contains("params")) {
        const json& params = object_at(j["params"], "params");
        for (auto it = params.begin(); it != params.end(); ++it) {
            const std::string path = "params." + it.key();
            const double v = number_at(it.value(), path);
            try {
                set_param(cfg.params, it.key(), v);
            } catch (const ArgumentError& e) {
                throw ConfigError(e.what());
            }
        }
    }
    if (j.contains("split_fraction")) {
        if (*family != Family::case1 && *family != Family::case2) {
            schema_error("split_fraction", "only valid for case1 and case2");
        }
        cfg.params.split_fraction = number_at(j["split_fraction"], "split_fraction");
    }
    if (*family == Family::custom) {
        if (!j.contains("table")) schema_error("table", "required for family custom");
        try {
            cfg.params.table = read_profile_table(resolve(base_dir, string_at(j["table"], "table")));
        } catch (const ConfigError& e) {
            schema_error("table", e.what());
        }
    } else if (j.contains("table")) {
        schema_error("table", "only valid for family custom");
    }
    try {
        validate_params(cfg.params);
    } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
    }

    cfg.window = default_window(cfg.params);
    if (j.contains("window")) {
        const json& w = object_at(j["window"], "window");
        only_keys(w, "window", {"t_max", "samples"});
        if (w.contains("t_max")) {
            const double t_max = number_at(w["t_max"], "window.t_max");
            if (!(t_max > 0.0)) schema_error("window.t_max", "must be > 0");
            cfg.window.t_begin = 0.0;
            cfg.window.t_end = t_max;
        }
        if (w.contains("samples")) cfg.window.samples = count_at(w["samples"], "window.samples");
    }
    return cfg;
}

inline ScenarioConfig load_scenario_config(const std::string& path) {
    return parse_scenario_config(detail::parse_json_file(path), std::filesystem::path(path).parent_path());
}

inline CouplingConfig parse_coupling_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
    using namespace detail;
    object_at(j, "");
    only_keys(j, "", {"delta", "coupling", "window", "initial", "normalize"});
    CouplingConfig cfg;
    const double delta = j.contains("delta") ? number_at(j["delta"], "delta") : 0.0;
    if (!j.contains("coupling")) schema_error("coupling", "required");
    const json& c = object_at(j["coupling"], "coupling");
    only_keys(c, "coupling", {"family", "params", "table"});
    if (!c.contains("family")) schema_error("coupling.family", "required");
    const std::string family = string_at(c["family"], "coupling.family");

    double k0 = 1.0;
    double phase = 0.0;
    if (c.contains("params")) {
        const json& p = object_at(c["params"], "coupling.params");
        if (family == "custom_table") schema_error("coupling.params", "not used by custom_table");
        only_keys(p, "coupling.params", {"k0", "phase"});
        if (p.contains("k0")) k0 = number_at(p["k0"], "coupling.params.k0");
        if (p.contains("phase")) phase = number_at(p["phase"], "coupling.params.phase");
        if (k0 < 0.0) schema_error("coupling.params.k0", "must be >= 0");
    }
    if (family == "constant") {
        cfg.spec = constant_coupling(k0, delta, phase);
    } else if (family == "sech") {
        cfg.spec = sech_coupling(k0, delta, phase);
    } else if (family == "custom_table") {
        if (!c.contains("table")) schema_error("coupling.table", "required for custom_table");
        try {
            const CsvTable t = read_csv(resolve(base_dir, string_at(c["table"], "coupling.table")), 3);
            cfg.spec = table_coupling(t.columns[0], t.columns[1], t.columns[2], delta);
        } catch (const Error& e) {
            schema_error("coupling.table", e.what());
        }
    } else {
        schema_error("coupling.family", "unknown coupling '" + family + "' (expected constant, sech or custom_table)");
    }
    if (family != "custom_table" && c.contains("table")) schema_error("coupling.table", "only valid for custom_table");

    if (j.contains("window")) {
        const json& w = object_at(j["window"], "window");
        only_keys(w, "window", {"z_max", "samples"});
        if (w.contains("z_max")) cfg.z_max = number_at(w["z_max"], "window.z_max");
        if (w.contains("samples")) cfg.samples = count_at(w["samples"], "window.samples");
    }
    if (!(cfg.z_max > 0.0)) schema_error("window.z_max", "must be > 0");

    if (j.contains("initial")) {
        const json& init = object_at(j["initial"], "initial");
        only_keys(init, "initial", {"A", "B"});
        cfg.initial.amp_a = init.contains("A") ? complex_at(init["A"], "initial.A") : Complex{};
        cfg.initial.amp_b = init.contains("B") ? complex_at(init["B"], "initial.B") : Complex{};
        if (!(cfg.initial.power() > 0.0)) schema_error("initial", "total power must be > 0");
    }
    if (j.contains("normalize")) {
        if (!j["normalize"].is_boolean()) schema_error("normalize", "expected true or false");
        cfg.normalize = j["normalize"].get<bool>();
    }
    return cfg;
}

inline CouplingConfig load_coupling_config(const std::string& path) {
    return parse_coupling_config(detail::parse_json_file(path), std::filesystem::path(path).parent_path());
}

}  // namespace grs
