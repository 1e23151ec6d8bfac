#pragma once

// Structured run reports and their serializations.
//
// A report is a flat list of rows. Each row is one measured quantity,
// optionally checked against a reference value and tolerance; rows with a
// tolerance carry pass/fail status, purely informational rows carry "info".
// Reports serialize to JSON (machine-readable, sorted keys, stable bytes),
// CSV (header "scenario,h,metric,value,tolerance,status") and SVG (log-log
// plot of the sweep columns against h). All three emitters are deterministic:
// identical reports produce identical bytes.

#include <optional>
#include <string>
#include <vector>

namespace tgap {

enum class RowStatus { pass, fail, info };

const char* to_string(RowStatus s);

struct ReportRow {
    std::string metric;
    std::optional<double> h;          // sweep parameter, when the metric depends on it
    double value = 0.0;
    std::optional<double> reference;  // expected value, when checked
    std::optional<double> tolerance;  // |value - reference| bound, when checked
    RowStatus status = RowStatus::info;
};

// One resolved step of an h-sweep, kept for plotting.
struct SweepRow {
    double h = 0.0;
    double value = 0.0;       // rescaled energy at the minimizer
    double gap = 0.0;         // |value - limit energy|
    double rel_gap = 0.0;
    double sqrt_h_h1 = 0.0;   // sqrt(h) * |minimizer|_{H^1}
    int iterations = 0;
    std::string status;
};

struct Report {
    static constexpr int schema_version = 1;

    std::string scenario_name;
    std::string demo;
    std::uint64_t seed = 0;

    std::vector<ReportRow> rows;
    std::vector<std::pair<std::string, std::string>> verdicts;  // name -> classification
    std::vector<SweepRow> sweep;

    // Convenience builders.
    void add_check(const std::string& metric, double value, double reference,
                   double tolerance, std::optional<double> h = std::nullopt);
    // One-sided check: passes when value < bound (bound recorded as the
    // tolerance column).
    void add_upper_bound(const std::string& metric, double value, double bound,
                         std::optional<double> h = std::nullopt);
    void add_info(const std::string& metric, double value,
                  std::optional<double> h = std::nullopt);
    void add_verdict(const std::string& name, const std::string& classification);

    bool passed() const;  // true when no row failed
};

std::string report_json(const Report& r);
std::string report_csv(const Report& r);
std::string report_svg(const Report& r);

// Writes <name>.<ext> under out_dir for each requested format
// ("json", "csv", "svg"). Returns the paths written.
// Throws std::runtime_error when a file cannot be created.
std::vector<std::string> emit_report(const Report& r, const std::string& out_dir,
                                     const std::vector<std::string>& formats);

}  // namespace tgap
