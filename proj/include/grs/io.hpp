#pragma once

// Plain-text tables in and out. Doubles are written with 17 significant digits
// so identical runs give byte-identical files.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coupled_modes.hpp"
#include "errors.hpp"
#include "field_model.hpp"
#include "trajectory.hpp"

namespace grs {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// CSV input

/// Numeric columns of a CSV file. Blank lines and lines starting with '#' are skipped;
/// a first row that does not parse as numbers is taken as the header.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string_view field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
            field.remove_suffix(1);
        }
        out.push_back(field);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline bool parse_number(std::string_view s, double& out) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace detail

inline CsvTable parse_csv(std::istream& in, const std::string& what, std::size_t expected_columns) {
    CsvTable table;
    table.columns.resize(expected_columns);
    std::string line;
    std::size_t line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') continue;
        const auto fields = detail::split_fields(line);
        std::vector<double> values(fields.size());
        bool numeric = true;
        for (std::size_t i = 0; i < fields.size(); ++i) numeric = numeric && detail::parse_number(fields[i], values[i]);
        if (!numeric && first) {
            for (auto f : fields) table.header.emplace_back(f);
            first = false;
            continue;
        }
        first = false;
        if (!numeric) throw ConfigError(what + ": line " + std::to_string(line_no) + " is not numeric");
        if (values.size() != expected_columns) {
            throw ConfigError(what + ": line " + std::to_string(line_no) + " has " + std::to_string(values.size()) +
                              " columns, expected " + std::to_string(expected_columns));
        }
        for (std::size_t i = 0; i < expected_columns; ++i) table.columns[i].push_back(values[i]);
    }
    if (table.rows() < 2) throw ConfigError(what + ": needs at least two data rows");
    return table;
}

inline CsvTable read_csv(const std::string& path, std::size_t expected_columns) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    return parse_csv(in, path, expected_columns);
}

/// Custom-family profile: t, omega_z, omega_mag, phi_omega.
inline ProfileTable read_profile_table(const std::string& path) {
    CsvTable csv = read_csv(path, 4);
    return {std::move(csv.columns[0]), std::move(csv.columns[1]), std::move(csv.columns[2]),
            std::move(csv.columns[3])};
}

// ---------------------------------------------------------------------------
// Trajectory output

/// Column groups a run can request; t and the family axis are always written.
struct OutputSet {
    bool fields = true;
    bool detuning = true;
    bool entries = true;
    bool probabilities = true;
    bool expectations = true;
};

/// Parses "entries,probabilities,..." (or "all").
inline OutputSet parse_outputs(std::string_view list) {
    OutputSet s{false, false, false, false, false};
    for (auto item : detail::split_fields(list)) {
        if (item == "all") s = OutputSet{};
        else if (item == "fields") s.fields = true;
        else if (item == "detuning") s.detuning = true;
        else if (item == "entries") s.entries = true;
        else if (item == "probabilities") s.probabilities = true;
        else if (item == "expectations") s.expectations = true;
        else {
            throw ArgumentError("--outputs: unknown group '" + std::string(item) +
                                "' (expected entries, probabilities, expectations, fields, detuning or all)");
        }
    }
    return s;
}

using AxisFunction = std::function<double(double)>;

namespace detail {

struct Column {
    const char* name;
    double (*get)(const TrajectorySample&);
};

inline std::vector<Column> trajectory_columns(const OutputSet& o) {
    std::vector<Column> c;
    if (o.fields) {
        c.push_back({"omega_z", [](const TrajectorySample& s) { return s.omega_z; }});
        c.push_back({"omega_mag", [](const TrajectorySample& s) { return s.omega_mag; }});
        c.push_back({"phi_omega", [](const TrajectorySample& s) { return s.phi_omega; }});
    }
    if (o.detuning) c.push_back({"detuning", [](const TrajectorySample& s) { return s.detuning; }});
    if (o.entries) {
        c.push_back({"re_a", [](const TrajectorySample& s) { return s.entries.a.real(); }});
        c.push_back({"im_a", [](const TrajectorySample& s) { return s.entries.a.imag(); }});
        c.push_back({"re_b", [](const TrajectorySample& s) { return s.entries.b.real(); }});
        c.push_back({"im_b", [](const TrajectorySample& s) { return s.entries.b.imag(); }});
    }
    if (o.probabilities) {
        c.push_back({"p_flip", [](const TrajectorySample& s) { return s.p_flip; }});
        c.push_back({"p_survival", [](const TrajectorySample& s) { return 1.0 - s.p_flip; }});
    }
    if (o.expectations) {
        c.push_back({"sigma_x", [](const TrajectorySample& s) { return s.sigma_x; }});
        c.push_back({"sigma_y", [](const TrajectorySample& s) { return s.sigma_y; }});
        c.push_back({"sigma_z", [](const TrajectorySample& s) { return s.sigma_z; }});
    }
    return c;
}

}  // namespace detail

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const OutputSet& outputs,
                                 const AxisFunction& axis) {
    const auto columns = detail::trajectory_columns(outputs);
    out << "t,axis";
    for (const auto& c : columns) out << ',' << c.name;
    out << '\n';
    for (const auto& s : traj.samples) {
        out << format_double(s.t) << ',' << format_double(axis(s.t));
        for (const auto& c : columns) out << ',' << format_double(c.get(s));
        out << '\n';
    }
}

inline nlohmann::json trajectory_json(const Trajectory& traj, const OutputSet& outputs, const AxisFunction& axis) {
    const auto columns = detail::trajectory_columns(outputs);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : traj.samples) {
        nlohmann::json r = nlohmann::json::object();
        r["t"] = s.t;
        r["axis"] = axis(s.t);
        for (const auto& c : columns) r[c.name] = c.get(s);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline nlohmann::json deviation_json(const Deviation& d) {
    return {{"max_abs_dP", d.max_p}, {"max_abs_da", d.max_a}, {"max_abs_db", d.max_b}};
}

/// A leading "# power_scale=..." line records the normalization of a raw-power input.
inline void write_modes_csv(std::ostream& out, const ModeTrajectory& traj) {
    if (traj.power_scale != 1.0) out << "# power_scale=" << format_double(traj.power_scale) << '\n';
    out << "z,re_A,im_A,re_B,im_B,powerA,powerB,total\n";
    for (const auto& m : traj.samples) {
        out << format_double(m.state.z) << ',' << format_double(m.state.amp_a.real()) << ','
            << format_double(m.state.amp_a.imag()) << ',' << format_double(m.state.amp_b.real()) << ','
            << format_double(m.state.amp_b.imag()) << ',' << format_double(m.power_a) << ','
            << format_double(m.power_b) << ',' << format_double(m.total) << '\n';
    }
}

inline nlohmann::json modes_json(const ModeTrajectory& traj) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& m : traj.samples) {
        rows.push_back({{"z", m.state.z},
                        {"re_A", m.state.amp_a.real()},
                        {"im_A", m.state.amp_a.imag()},
                        {"re_B", m.state.amp_b.real()},
                        {"im_B", m.state.amp_b.imag()},
                        {"powerA", m.power_a},
                        {"powerB", m.power_b},
                        {"total", m.total}});
    }
    return {{"power_scale", traj.power_scale}, {"samples", std::move(rows)}};
}

}  // namespace grs
