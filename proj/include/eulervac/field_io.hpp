#pragma once

/**
 * @file field_io.hpp
 * @brief FlowField serialization: a CSV with one row per cell per frame
 * (t, x, rho, mom) and a JSON sidecar <csv>.json holding the grid, role,
 * spatial extension and exterior velocity closure. Values are written at
 * 17 significant digits, so a write/read cycle is bit-exact.
 */

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "eulervac/core.hpp"
#include "eulervac/report.hpp"

namespace eulervac {

inline std::filesystem::path sidecar_path(const std::filesystem::path& csv)
{
    std::filesystem::path p = csv;
    p += ".json";
    return p;
}

inline Json grid_to_json(const Grid& g)
{
    Json j;
    j["dim"] = g.dim;
    j["x_min"] = g.x_min;
    j["x_max"] = g.x_max;
    j["n_cells"] = g.n_cells;
    j["t_start"] = g.t_start;
    j["t_end"] = g.t_end;
    j["n_steps"] = g.n_steps;
    return j;
}

inline Grid grid_from_json(const Json& j)
{
    Grid g;
    try {
        g.dim = j.at("dim").get<int>();
        g.x_min = j.at("x_min").get<double>();
        g.x_max = j.at("x_max").get<double>();
        g.n_cells = j.at("n_cells").get<int>();
        g.t_start = j.at("t_start").get<double>();
        g.t_end = j.at("t_end").get<double>();
        g.n_steps = j.at("n_steps").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("grid metadata: ") + e.what());
    }
    g.validate();
    return g;
}

inline Json field_metadata(const FlowField& f)
{
    Json j;
    j["grid"] = grid_to_json(f.grid);
    j["role"] = to_string(f.role);
    j["extension"] = to_string(f.space_ext);
    if (f.exterior_velocity) {
        j["closure"]["name"] = f.exterior_velocity->name;
        j["closure"]["params"] = f.exterior_velocity->params;
    } else {
        j["closure"] = nullptr;
    }
    return j;
}

inline std::string field_csv(const FlowField& f)
{
    const Grid& g = f.grid;
    std::string s = "t,x,rho,mom\n";
    s.reserve(s.size() + g.size() * 80);
    for (int k = 0; k < g.n_steps; ++k)
        for (int i = 0; i < g.n_cells; ++i) {
            s += fmt_full(g.t(k));
            s += ',';
            s += fmt_full(g.x(i));
            s += ',';
            s += fmt_full(f.rho_at(k, i));
            s += ',';
            s += fmt_full(f.mom_at(k, i));
            s += '\n';
        }
    return s;
}

inline void write_field(const FlowField& f, const std::filesystem::path& csv)
{
    write_atomic(csv, field_csv(f));
    write_json(sidecar_path(csv), field_metadata(f));
}

namespace detail {

inline double parse_double(const std::string& s, std::size_t line)
{
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw Error("field CSV line " + std::to_string(line) + ": cannot parse '" + s + "'");
    return v;
}

} // namespace detail

/// Reads a field written by write_field. The sidecar is required.
inline FlowField read_field(const std::filesystem::path& csv)
{
    const std::filesystem::path side = sidecar_path(csv);
    if (!std::filesystem::exists(csv)) throw Error("field file '" + csv.string() + "' not found");
    if (!std::filesystem::exists(side)) throw Error("field sidecar '" + side.string() + "' not found");
    Json meta;
    try {
        meta = Json::parse(read_file(side));
    } catch (const nlohmann::json::exception& e) {
        throw Error("field sidecar '" + side.string() + "': " + e.what());
    }
    FlowField f;
    f.grid = grid_from_json(meta.at("grid"));
    const std::string role = meta.value("role", "weak");
    if (role != "weak" && role != "strong") throw Error("field sidecar: unknown role '" + role + "'");
    f.role = role == "weak" ? Role::weak : Role::strong;
    const std::string ext = meta.value("extension", "zero");
    if (ext != "zero" && ext != "constant") throw Error("field sidecar: unknown extension '" + ext + "'");
    f.space_ext = ext == "zero" ? Extension::zero : Extension::constant;
    if (meta.contains("closure") && !meta["closure"].is_null())
        f.exterior_velocity = closure_from_name(meta["closure"].at("name").get<std::string>(), meta["closure"].at("params").get<std::vector<double>>());

    f.rho.resize(f.grid.size());
    f.mom.resize(f.grid.size());
    std::istringstream in(read_file(csv));
    std::string line;
    std::getline(in, line);
    if (line != "t,x,rho,mom") throw Error("field CSV '" + csv.string() + "': header must be t,x,rho,mom");
    std::size_t n = 0, lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (n >= f.grid.size()) throw Error("field CSV has more rows than the grid holds");
        std::vector<std::string> cells;
        std::size_t a = 0;
        for (std::size_t b; (b = line.find(',', a)) != std::string::npos; a = b + 1) cells.push_back(line.substr(a, b - a));
        cells.push_back(line.substr(a));
        if (cells.size() != 4) throw Error("field CSV line " + std::to_string(lineno) + ": expected 4 columns");
        f.rho[n] = detail::parse_double(cells[2], lineno);
        f.mom[n] = detail::parse_double(cells[3], lineno);
        ++n;
    }
    if (n != f.grid.size()) throw Error("field CSV has " + std::to_string(n) + " rows, grid needs " + std::to_string(f.grid.size()));
    f.validate();
    return f;
}

} // namespace eulervac
