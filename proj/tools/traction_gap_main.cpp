// Command-line driver.
//
//   traction-gap run <config>         run a scenario from a config file
//   traction-gap demo <name>          run a named demo with its defaults
//   traction-gap check-loads <config> classify the configured load system
//
// Common options: --out <dir> (default "."), --formats json,csv,svg
// (default "json,csv"), --seed <u64> (overrides the scenario seed).
// Exit codes: 0 success, 2 a checked quantity missed its tolerance,
// 3 configuration error (bad file, bad key, unwritable output), 1 internal.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "tgap/demos.hpp"
#include "tgap/loads.hpp"
#include "tgap/report.hpp"
#include "tgap/scenario.hpp"
#include "tgap/version.hpp"

#include "CLI11.hpp"

namespace {

std::vector<std::string> split_formats(const std::string& csv)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : csv) {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    for (const auto& f : out)
        if (f != "json" && f != "csv" && f != "svg")
            throw tgap::ConfigError("unknown report format '" + f
                                    + "' (expected json, csv or svg)");
    if (out.empty()) throw tgap::ConfigError("--formats needs at least one format");
    return out;
}

void print_report(const tgap::Report& rep, const std::vector<std::string>& files)
{
    std::printf("scenario %s (demo %s, seed %llu)\n", rep.scenario_name.c_str(),
                rep.demo.c_str(), static_cast<unsigned long long>(rep.seed));
    for (const auto& row : rep.rows) {
        const char* tag = to_string(row.status);
        std::printf("  [%-4s] %s", tag, row.metric.c_str());
        if (row.h) std::printf(" (h=%g)", *row.h);
        std::printf(" = %.12g", row.value);
        if (row.reference) std::printf("  expected %.12g", *row.reference);
        if (row.tolerance) std::printf("  tol %.3g", *row.tolerance);
        std::printf("\n");
    }
    for (const auto& [name, verdict] : rep.verdicts)
        std::printf("  verdict %s: %s\n", name.c_str(), verdict.c_str());
    for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
    std::printf("%s\n", rep.passed() ? "RESULT pass" : "RESULT FAIL");
}

int run_and_emit(tgap::Scenario s, const std::string& out_dir,
                 const std::string& formats_csv, std::optional<std::uint64_t> seed)
{
    if (seed) s.seed = *seed;
    const std::vector<std::string> formats = split_formats(formats_csv);
    const tgap::Report rep = tgap::run_scenario(s);
    const std::vector<std::string> files = tgap::emit_report(rep, out_dir, formats);
    print_report(rep, files);
    return rep.passed() ? 0 : 2;
}

int check_loads(const std::string& config_path)
{
    const tgap::Scenario s = tgap::parse_scenario_file(config_path);
    if (s.domain_kind == "unit_cube")
        throw tgap::ConfigError("check-loads classifies 2D load systems only");
    const tgap::Mesh mesh = tgap::build_mesh(s);
    const tgap::LoadSystem load = tgap::build_load(s);

    const auto eq = tgap::check_equilibrated(mesh, load);
    std::printf("equilibrated: %s (force residual %.3e, moment residual %.3e)\n",
                eq.equilibrated ? "yes" : "no", eq.force_residual, eq.moment_residual);

    const tgap::Mat2 t = tgap::resultant_matrix(mesh, load);
    std::printf("resultant: [% .12g % .12g; % .12g % .12g], trace %.12g\n", t(0, 0),
                t(0, 1), t(1, 0), t(1, 1), trace(t));

    const auto compat = tgap::classify_compatibility(t);
    std::printf("compatibility: %s (margin %.6g, zero band %.3g)\n",
                to_string(compat.verdict), compat.margin, compat.zero_band);
    if (compat.verdict == tgap::Compatibility::violated)
        std::printf("witness spin magnitude: %.6g\n", compat.witness.w);
    std::printf("inf F: %s\n", to_string(tgap::inf_F_status(compat)));
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{std::string("pure-traction gap functional experiments (")
                 + tgap::project_version + ")"};
    app.require_subcommand(1);

    std::string out_dir = ".";
    std::string formats = "json,csv";
    std::uint64_t seed_value = 0;

    std::string demo_names;
    for (tgap::DemoKind d : tgap::all_demos()) {
        if (!demo_names.empty()) demo_names += ", ";
        demo_names += tgap::to_string(d);
    }

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_dir, "output directory for report files");
        sub->add_option("--formats", formats, "comma-separated subset of json,csv,svg");
        return sub->add_option("--seed", seed_value, "override the scenario seed");
    };

    auto* run_cmd = app.add_subcommand("run", "run a scenario from a config file");
    std::string run_config;
    run_cmd->add_option("config", run_config, "path to a key=value config file")
        ->required();
    CLI::Option* run_seed = add_common(run_cmd);

    auto* demo_cmd = app.add_subcommand("demo", "run a named demo with its defaults");
    std::string demo_name;
    demo_cmd->add_option("name", demo_name, "one of: " + demo_names)->required();
    CLI::Option* demo_seed = add_common(demo_cmd);

    auto* check_cmd =
        app.add_subcommand("check-loads", "classify the load system of a config");
    std::string check_config;
    check_cmd->add_option("config", check_config, "path to a key=value config file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (run_cmd->parsed()) {
            const tgap::Scenario s = tgap::parse_scenario_file(run_config);
            return run_and_emit(s, out_dir, formats,
                                run_seed->count() ? std::optional<std::uint64_t>(seed_value)
                                                  : std::nullopt);
        }
        if (demo_cmd->parsed()) {
            const tgap::Scenario s =
                tgap::default_scenario(tgap::demo_from_string(demo_name));
            return run_and_emit(s, out_dir, formats,
                                demo_seed->count() ? std::optional<std::uint64_t>(seed_value)
                                                   : std::nullopt);
        }
        return check_loads(check_config);
    } catch (const tgap::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 3;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
}
