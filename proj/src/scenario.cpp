#include "tgap/scenario.hpp"

#include <fstream>
#include <sstream>

namespace tgap {

const char* to_string(DemoKind d)
{
    switch (d) {
        case DemoKind::gap: return "gap";
        case DemoKind::tension: return "tension";
        case DemoKind::weak_compat: return "weak_compat";
        case DemoKind::compression: return "compression";
        case DemoKind::noncompact: return "noncompact";
        case DemoKind::nonconvexity3d: return "nonconvexity3d";
        case DemoKind::gamma_sweep: return "gamma_sweep";
        case DemoKind::nonlocality: return "nonlocality";
    }
    return "?";
}

std::vector<DemoKind> all_demos()
{
    return {DemoKind::gap,        DemoKind::tension,       DemoKind::weak_compat,
            DemoKind::compression, DemoKind::noncompact,    DemoKind::nonconvexity3d,
            DemoKind::gamma_sweep, DemoKind::nonlocality};
}

DemoKind demo_from_string(const std::string& s)
{
    for (DemoKind d : all_demos())
        if (s == to_string(d)) return d;
    throw ConfigError("unknown demo '" + s + "'");
}

Scenario default_scenario(DemoKind d)
{
    Scenario s;
    s.demo = d;
    s.name = to_string(d);
    switch (d) {
        case DemoKind::gap:
            s.traction_kind = "normal_scaled";
            s.traction_coefficient = 1.0;
            break;
        case DemoKind::tension:
        case DemoKind::gamma_sweep:
            s.traction_kind = "normal_scaled";
            s.traction_coefficient = 1.0;
            s.h_list = {1e-1, 1e-2, 1e-3, 1e-4};
            break;
        case DemoKind::weak_compat:
            s.body_kind = "linear";
            s.body_matrix(0, 0) = 1.0;
            s.body_matrix(1, 1) = -1.0;
            break;
        case DemoKind::compression:
            s.traction_kind = "normal_scaled";
            s.traction_coefficient = -1.0;
            for (int k = 1; k <= 16; ++k) s.h_list.push_back(std::ldexp(1.0, -k));
            break;
        case DemoKind::noncompact:
            s.material = Material{1.0, 0.0};
            s.h_list = {1e-1, 1e-2, 1e-3, 1e-4};
            break;
        case DemoKind::nonconvexity3d:
            s.domain_kind = "unit_cube";
            break;
        case DemoKind::nonlocality:
            break;
    }
    return s;
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v)
{
    std::istringstream ss(v);
    double x;
    if (!(ss >> x) || !(ss >> std::ws).eof())
        throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    return x;
}

std::vector<double> parse_doubles(const std::string& key, const std::string& v,
                                  std::size_t expected = 0)
{
    std::istringstream ss(v);
    std::vector<double> xs;
    double x;
    while (ss >> x) xs.push_back(x);
    if (!(ss >> std::ws).eof() || xs.empty())
        throw ConfigError("key '" + key + "': expected numbers, got '" + v + "'");
    if (expected && xs.size() != expected)
        throw ConfigError("key '" + key + "': expected " + std::to_string(expected)
                          + " numbers, got " + std::to_string(xs.size()));
    return xs;
}

}  // namespace

Scenario parse_scenario(std::istream& is)
{
    // value plus the line it came from, so later parse errors can point back
    std::map<std::string, std::pair<std::string, int>> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno)
                              + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config line " + std::to_string(lineno)
                              + ": empty key or value");
        if (kv.count(key))
            throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '"
                              + key + "'");
        kv[key] = {val, lineno};
    }

    const auto demo_it = kv.find("demo");
    if (demo_it == kv.end()) throw ConfigError("config: missing required key 'demo'");
    Scenario s = default_scenario(demo_from_string(demo_it->second.first));
    kv.erase("demo");

    // Demo defaults carry an h_list; an explicit sweep.h replaces it.
    for (auto& [key, entry] : kv) try {
        const std::string& val = entry.first;
        if (key == "name") {
            s.name = val;
        } else if (key == "domain.kind") {
            s.domain_kind = val;
        } else if (key == "domain.n") {
            s.n = static_cast<int>(parse_double(key, val));
        } else if (key == "domain.width") {
            s.width = parse_double(key, val);
        } else if (key == "domain.height") {
            s.height = parse_double(key, val);
        } else if (key == "material.mu") {
            s.material.mu = parse_double(key, val);
        } else if (key == "material.lambda") {
            s.material.lambda = parse_double(key, val);
        } else if (key == "traction.kind") {
            s.traction_kind = val;
        } else if (key == "traction.coefficient") {
            s.traction_coefficient = parse_double(key, val);
        } else if (key == "traction.value") {
            const auto xs = parse_doubles(key, val, 2);
            s.traction_value = Vec2{{xs[0], xs[1]}};
        } else if (key == "body.kind") {
            s.body_kind = val;
        } else if (key == "body.matrix") {
            const auto xs = parse_doubles(key, val, 4);
            s.body_matrix(0, 0) = xs[0];
            s.body_matrix(0, 1) = xs[1];
            s.body_matrix(1, 0) = xs[2];
            s.body_matrix(1, 1) = xs[3];
        } else if (key == "body.value") {
            const auto xs = parse_doubles(key, val, 2);
            s.body_value = Vec2{{xs[0], xs[1]}};
        } else if (key == "sweep.h") {
            s.h_list = parse_doubles(key, val);
        } else if (key == "seed") {
            s.seed = static_cast<std::uint64_t>(parse_double(key, val));
        } else if (key.rfind("tol.", 0) == 0) {
            s.tolerance_overrides[key.substr(4)] = parse_double(key, val);
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    } catch (const ConfigError& e) {
        throw ConfigError("config line " + std::to_string(entry.second) + ": " + e.what());
    }
    validate(s);
    return s;
}

Scenario parse_scenario_file(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    return parse_scenario(is);
}

void validate(const Scenario& s)
{
    try {
        validate(s.material);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (s.domain_kind != "unit_square" && s.domain_kind != "rectangle"
        && s.domain_kind != "unit_cube")
        throw ConfigError("domain.kind must be unit_square, rectangle or unit_cube");
    const bool is3d = (s.domain_kind == "unit_cube");
    if ((s.demo == DemoKind::nonconvexity3d) != is3d)
        throw ConfigError(is3d ? "domain.kind unit_cube is only valid for demo nonconvexity3d"
                               : "demo nonconvexity3d needs domain.kind = unit_cube");
    if (!is3d) {
        if (s.n < 1) throw ConfigError("domain.n must be >= 1");
        if (!(s.width > 0.0) || !(s.height > 0.0))
            throw ConfigError("domain.width and domain.height must be > 0");
    }
    if (s.demo == DemoKind::nonlocality && s.n % 2 != 0)
        throw ConfigError("demo nonlocality needs even domain.n (split at x = 0)");
    if (s.traction_kind != "zero" && s.traction_kind != "normal_scaled"
        && s.traction_kind != "per_edge")
        throw ConfigError("traction.kind must be zero, normal_scaled or per_edge");
    if (s.body_kind != "zero" && s.body_kind != "linear" && s.body_kind != "per_cell")
        throw ConfigError("body.kind must be zero, linear or per_cell");
    for (double h : s.h_list)
        if (!(h > 0.0)) throw ConfigError("sweep.h entries must be > 0");
}

Mesh build_mesh(const Scenario& s)
{
    if (s.domain_kind == "unit_square") return make_unit_square_mesh(s.n);
    if (s.domain_kind == "rectangle") return make_rectangle_mesh(s.width, s.height, s.n);
    throw ConfigError("demo '" + std::string(to_string(s.demo))
                      + "' does not build a 2D mesh for domain.kind unit_cube");
}

LoadSystem build_load(const Scenario& s)
{
    LoadSystem load;
    if (s.traction_kind == "normal_scaled") {
        load.traction_kind = TractionKind::normal_scaled;
        load.traction_coefficient = s.traction_coefficient;
    } else if (s.traction_kind == "per_edge") {
        load.traction_kind = TractionKind::per_edge;
        load.traction_per_edge = {s.traction_value};
    }
    if (s.body_kind == "linear") {
        load.body_kind = BodyKind::linear;
        load.body_matrix = s.body_matrix;
    } else if (s.body_kind == "per_cell") {
        load.body_kind = BodyKind::per_cell;
        load.body_per_cell = {s.body_value};
    }
    return load;
}

double tolerance(const Scenario& s, const std::string& check, double fallback)
{
    const auto it = s.tolerance_overrides.find(check);
    return it == s.tolerance_overrides.end() ? fallback : it->second;
}

}  // namespace tgap
