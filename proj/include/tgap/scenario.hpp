#pragma once

// Scenario configuration: a flat dotted-key text file fully determines a
// run (same scenario + same build => bitwise-identical reports).  Each demo
// kind ships a complete default scenario; a config file starts from the
// defaults of its `demo` key and overrides individual fields.
//
// Recognized keys (one `key = value` pair per line, `#` starts a comment):
//   name, demo, domain.kind, domain.n, domain.width, domain.height,
//   material.mu, material.lambda,
//   traction.kind, traction.coefficient, traction.value (2 numbers),
//   body.kind, body.matrix (4 numbers, row-major), body.value (2 numbers),
//   sweep.h (list of numbers), seed, tol.<check-name>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tgap/constitutive.hpp"
#include "tgap/loads.hpp"
#include "tgap/mesh_fem.hpp"

namespace tgap {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DemoKind {
    gap,
    tension,
    weak_compat,
    compression,
    noncompact,
    nonconvexity3d,
    gamma_sweep,
    nonlocality,
};

const char* to_string(DemoKind d);
DemoKind demo_from_string(const std::string& s);  // throws ConfigError
std::vector<DemoKind> all_demos();

struct Scenario {
    std::string name = "run";
    DemoKind demo = DemoKind::gap;

    std::string domain_kind = "unit_square";  // unit_square | rectangle | unit_cube
    int n = 8;
    double width = 1.0;
    double height = 1.0;

    Material material{1.0, 1.0};

    std::string traction_kind = "zero";  // zero | normal_scaled | per_edge
    double traction_coefficient = 0.0;
    Vec2 traction_value{};
    std::string body_kind = "zero";  // zero | linear | per_cell
    Mat2 body_matrix{};
    Vec2 body_value{};

    std::vector<double> h_list;
    std::uint64_t seed = 42;
    std::map<std::string, double> tolerance_overrides;  // from tol.* keys
};

// Complete runnable defaults for each demo kind.
Scenario default_scenario(DemoKind d);

// Parse a config stream/file; unknown keys and malformed values throw
// ConfigError.  The `demo` key is required.
Scenario parse_scenario(std::istream& is);
Scenario parse_scenario_file(const std::string& path);

// Cross-field validation (demo/domain consistency, material bounds, ...).
// Called by run_scenario; throws ConfigError.
void validate(const Scenario& s);

// Builders.  build_mesh throws ConfigError for 3D domains (the 3D path
// never builds a volume mesh).
Mesh build_mesh(const Scenario& s);
LoadSystem build_load(const Scenario& s);

// Tolerance lookup with override support.
double tolerance(const Scenario& s, const std::string& check, double fallback);

}  // namespace tgap
