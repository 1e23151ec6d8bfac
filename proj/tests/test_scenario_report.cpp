#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tgap/demos.hpp"
#include "tgap/report.hpp"
#include "tgap/scenario.hpp"

#include "doctest.h"

using namespace tgap;

namespace {

Scenario parse_text(const std::string& text)
{
    std::istringstream is(text);
    return parse_scenario(is);
}

}  // namespace

TEST_CASE("every demo kind has a complete runnable default")
{
    for (DemoKind d : all_demos()) {
        const Scenario s = default_scenario(d);
        CHECK(s.demo == d);
        CHECK(s.name == to_string(d));
        CHECK_NOTHROW(validate(s));
        CHECK(demo_from_string(to_string(d)) == d);
    }
    CHECK(default_scenario(DemoKind::nonconvexity3d).domain_kind == "unit_cube");
    CHECK(default_scenario(DemoKind::tension).traction_kind == "normal_scaled");
    CHECK(default_scenario(DemoKind::compression).traction_coefficient < 0.0);
    CHECK(!default_scenario(DemoKind::gamma_sweep).h_list.empty());
    CHECK_THROWS_AS(demo_from_string("no_such_demo"), ConfigError);
}

TEST_CASE("config parsing: overrides, comments, and lists")
{
    const Scenario s = parse_text(
        "# comment line\n"
        "demo = tension\n"
        "name = my_run   # trailing comment\n"
        "domain.kind = rectangle\n"
        "domain.n = 12\n"
        "domain.width = 2.5\n"
        "material.mu = 1.5\n"
        "\n"
        "sweep.h = 0.1 0.01 0.001\n"
        "seed = 7\n"
        "tol.gamma_rel = 0.05\n");
    CHECK(s.demo == DemoKind::tension);
    CHECK(s.name == "my_run");
    CHECK(s.domain_kind == "rectangle");
    CHECK(s.n == 12);
    CHECK(s.width == 2.5);
    CHECK(s.material.mu == 1.5);
    CHECK(s.material.lambda == 1.0);  // untouched default
    REQUIRE(s.h_list.size() == 3);
    CHECK(s.h_list[1] == 0.01);
    CHECK(s.seed == 7);
    CHECK(tolerance(s, "gamma_rel", 1e-2) == 0.05);
    CHECK(tolerance(s, "unrelated", 0.25) == 0.25);
}

TEST_CASE("config parsing: malformed inputs are rejected with the line")
{
    CHECK_THROWS_AS(parse_text("name = forgot_the_demo_key\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("demo = gap\nnot_a_known_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("demo = gap\ndomain.n = twelve\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("demo = gap\ndomain.n = 4\ndomain.n = 5\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("demo = gap\nbody.matrix = 1 2 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("demo = gap\njust a bare line\n"), ConfigError);

    try {
        parse_text("demo = gap\n\ndomain.n = oops\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
}

TEST_CASE("scenario validation enforces cross-field consistency")
{
    Scenario s = default_scenario(DemoKind::gap);
    s.domain_kind = "unit_cube";  // 3D domain only fits the 3D demo
    CHECK_THROWS_AS(validate(s), ConfigError);

    Scenario c = default_scenario(DemoKind::nonconvexity3d);
    c.domain_kind = "unit_square";
    CHECK_THROWS_AS(validate(c), ConfigError);

    Scenario bad_n = default_scenario(DemoKind::gap);
    bad_n.n = 0;
    CHECK_THROWS_AS(validate(bad_n), ConfigError);

    Scenario odd = default_scenario(DemoKind::nonlocality);
    odd.n = 5;  // the split at x = 0 needs an even grid
    CHECK_THROWS_AS(validate(odd), ConfigError);

    Scenario mat = default_scenario(DemoKind::gap);
    mat.material.mu = -1.0;
    CHECK_THROWS_AS(validate(mat), ConfigError);

    Scenario h = default_scenario(DemoKind::gamma_sweep);
    h.h_list = {0.1, -0.5};
    CHECK_THROWS_AS(validate(h), ConfigError);

    Scenario kind = default_scenario(DemoKind::gap);
    kind.traction_kind = "sideways";
    CHECK_THROWS_AS(validate(kind), ConfigError);
}

TEST_CASE("mesh and load builders follow the scenario")
{
    Scenario s = default_scenario(DemoKind::gap);
    s.domain_kind = "rectangle";
    s.width = 2.0;
    s.height = 0.5;
    s.n = 3;
    const Mesh mesh = build_mesh(s);
    CHECK(mesh.num_tris() == 18);
    CHECK(domain_area(mesh) == doctest::Approx(1.0).epsilon(1e-13));

    const LoadSystem load = build_load(s);
    CHECK(load.traction_kind == TractionKind::normal_scaled);
    CHECK(load.traction_coefficient == 1.0);

    Scenario cube = default_scenario(DemoKind::nonconvexity3d);
    CHECK_THROWS_AS(build_mesh(cube), ConfigError);

    Scenario body = default_scenario(DemoKind::weak_compat);
    const LoadSystem bl = build_load(body);
    CHECK(bl.body_kind == BodyKind::linear);
    CHECK(bl.body_matrix(0, 0) == 1.0);
    CHECK(bl.body_matrix(1, 1) == -1.0);
}

TEST_CASE("report rows carry values, references, and verdicts")
{
    Report r;
    r.scenario_name = "t";
    r.demo = "gap";
    r.add_check("exact", 1.0, 1.0, 1e-12);
    r.add_check("off", 1.0, 2.0, 1e-12);
    r.add_upper_bound("bounded", -1.0, 0.0);
    r.add_upper_bound("unbounded", 1.0, 0.0);
    r.add_info("note", 3.5);
    r.add_verdict("compatibility", "strictly_compatible");

    REQUIRE(r.rows.size() == 5);
    CHECK(r.rows[0].status == RowStatus::pass);
    CHECK(r.rows[1].status == RowStatus::fail);
    CHECK(r.rows[2].status == RowStatus::pass);
    CHECK(r.rows[3].status == RowStatus::fail);
    CHECK(r.rows[4].status == RowStatus::info);
    CHECK_FALSE(r.passed());

    Report ok;
    ok.add_check("fine", 0.5, 0.5, 1e-12);
    ok.add_info("ignored", 99.0);
    CHECK(ok.passed());

    // non-finite values always fail
    Report nan_rep;
    nan_rep.add_check("nan", std::nan(""), 0.0, 1e30);
    CHECK_FALSE(nan_rep.passed());
}

TEST_CASE("json serialization is deterministic and carries the schema")
{
    Report r;
    r.scenario_name = "demo_x";
    r.demo = "tension";
    r.seed = 42;
    r.add_check("a", 1.0, 1.0, 1e-12);
    SweepRow row;
    row.h = 0.1;
    row.value = -0.06;
    row.gap = 0.002;
    row.rel_gap = 0.032;
    row.sqrt_h_h1 = 0.01;
    row.iterations = 12;
    row.status = "converged";
    r.sweep.push_back(row);

    const std::string a = report_json(r);
    const std::string b = report_json(r);
    CHECK(a == b);
    CHECK(a.find("\"schema_version\": 1") != std::string::npos);
    CHECK(a.find("demo_x") != std::string::npos);
    CHECK(a.find("\"steps\"") != std::string::npos);
    CHECK(a.back() == '\n');

    Report empty;
    const std::string e = report_json(empty);
    CHECK(e.find("\"steps\": []") != std::string::npos);
}

TEST_CASE("csv serialization round-trips values at full precision")
{
    Report r;
    r.scenario_name = "prec";
    r.demo = "gap";
    const double v = 0.1 + 0.2;  // not exactly representable as 0.3
    r.add_check("val", v, 0.3, 1e-9);
    SweepRow row;
    row.h = 1e-3;
    row.value = -1.0 / 3.0;
    r.sweep.push_back(row);

    const std::string csv = report_csv(r);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "scenario,h,metric,value,tolerance,status");
    int lines = 0;
    bool found = false;
    while (std::getline(is, line)) {
        ++lines;
        const auto pos = line.find(",val,");
        if (pos == std::string::npos) continue;
        found = true;
        const auto vstart = pos + 5;
        const auto vend = line.find(',', vstart);
        const double back = std::strtod(line.substr(vstart, vend - vstart).c_str(), nullptr);
        CHECK(back == v);  // 17 significant digits reproduce the bits
    }
    CHECK(found);
    CHECK(lines == 1 + 3);  // one check row plus three sweep metric rows
}

TEST_CASE("svg rendering is deterministic and degrades gracefully")
{
    Report r;
    r.scenario_name = "plot";
    r.demo = "tension";
    for (double h : {1e-1, 1e-2, 1e-3}) {
        SweepRow row;
        row.h = h;
        row.gap = h * 0.5;
        row.sqrt_h_h1 = std::sqrt(h) * 0.2;
        r.sweep.push_back(row);
    }
    const std::string a = report_svg(r);
    CHECK(a == report_svg(r));
    CHECK(a.find("<svg") != std::string::npos);
    CHECK(a.find("polyline") != std::string::npos);

    Report empty;
    empty.scenario_name = "nothing";
    const std::string e = report_svg(empty);
    CHECK(e.find("no sweep data") != std::string::npos);
    CHECK(e.find("polyline") == std::string::npos);
}

TEST_CASE("emit_report writes the requested formats")
{
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "tgap_report_test";
    fs::remove_all(dir);
    fs::create_directories(dir);

    Report r;
    r.scenario_name = "files";
    r.demo = "gap";
    r.add_check("a", 1.0, 1.0, 1e-12);

    const auto paths = emit_report(r, dir.string(), {"json", "csv", "svg"});
    REQUIRE(paths.size() == 3);
    for (const std::string& p : paths) CHECK(fs::exists(p));
    CHECK(fs::exists(dir / "files.json"));
    CHECK(fs::exists(dir / "files.csv"));
    CHECK(fs::exists(dir / "files.svg"));

    CHECK_THROWS(emit_report(r, dir.string(), {"pdf"}));
    CHECK_THROWS(emit_report(r, (dir / "missing_subdir").string(), {"json"}));
    fs::remove_all(dir);
}

TEST_CASE("running a scenario twice yields bitwise identical reports")
{
    const Scenario s = default_scenario(DemoKind::gap);
    const Report a = run_scenario(s);
    const Report b = run_scenario(s);
    CHECK(report_json(a) == report_json(b));
    CHECK(a.passed());
}

TEST_CASE("every demo passes its own checks under the default scenario")
{
    for (const DemoKind d : all_demos()) {
        CAPTURE(to_string(d));
        const Report rep = run_scenario(default_scenario(d));
        for (const auto& row : rep.rows) {
            CAPTURE(row.metric);
            CHECK(row.status != RowStatus::fail);
        }
        CHECK(rep.passed());
    }
}
