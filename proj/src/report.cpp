#include "tgap/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "tgap/version.hpp"

#include "json.hpp"

namespace tgap {

const char* to_string(RowStatus s)
{
    switch (s) {
        case RowStatus::pass: return "pass";
        case RowStatus::fail: return "fail";
        case RowStatus::info: return "info";
    }
    return "?";
}

void Report::add_check(const std::string& metric, double value, double reference,
                       double tolerance, std::optional<double> h)
{
    ReportRow row;
    row.metric = metric;
    row.h = h;
    row.value = value;
    row.reference = reference;
    row.tolerance = tolerance;
    const bool ok = std::isfinite(value) && std::abs(value - reference) <= tolerance;
    row.status = ok ? RowStatus::pass : RowStatus::fail;
    rows.push_back(std::move(row));
}

void Report::add_upper_bound(const std::string& metric, double value, double bound,
                             std::optional<double> h)
{
    ReportRow row;
    row.metric = metric;
    row.h = h;
    row.value = value;
    row.tolerance = bound;
    row.status = (std::isfinite(value) && value < bound) ? RowStatus::pass : RowStatus::fail;
    rows.push_back(std::move(row));
}

void Report::add_info(const std::string& metric, double value, std::optional<double> h)
{
    ReportRow row;
    row.metric = metric;
    row.h = h;
    row.value = value;
    row.status = RowStatus::info;
    rows.push_back(std::move(row));
}

void Report::add_verdict(const std::string& name, const std::string& classification)
{
    verdicts.emplace_back(name, classification);
}

bool Report::passed() const
{
    for (const auto& row : rows)
        if (row.status == RowStatus::fail) return false;
    return true;
}

std::string report_json(const Report& r)
{
    nlohmann::json j;
    j["schema_version"] = Report::schema_version;
    j["scenario"]["name"] = r.scenario_name;
    j["scenario"]["demo"] = r.demo;
    j["provenance"]["version"] = project_version;
    j["provenance"]["seed"] = r.seed;

    auto rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json jr;
        jr["metric"] = row.metric;
        if (row.h) jr["h"] = *row.h;
        jr["value"] = row.value;
        if (row.reference) jr["reference"] = *row.reference;
        if (row.tolerance) jr["tolerance"] = *row.tolerance;
        jr["status"] = to_string(row.status);
        rows.push_back(std::move(jr));
    }
    j["rows"] = std::move(rows);

    auto verdicts = nlohmann::json::object();
    for (const auto& [name, cls] : r.verdicts) verdicts[name] = cls;
    j["verdicts"] = std::move(verdicts);

    auto steps = nlohmann::json::array();
    for (const auto& s : r.sweep) {
        nlohmann::json js;
        js["h"] = s.h;
        js["value"] = s.value;
        js["gap"] = s.gap;
        js["rel_gap"] = s.rel_gap;
        js["sqrt_h_h1"] = s.sqrt_h_h1;
        js["iterations"] = s.iterations;
        js["status"] = s.status;
        steps.push_back(std::move(js));
    }
    j["sweep"]["steps"] = std::move(steps);
    j["passed"] = r.passed();

    return j.dump(2) + "\n";
}

namespace {

std::string num17(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string coord(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string csv_line(const std::string& scenario, std::optional<double> h,
                     const std::string& metric, double value,
                     std::optional<double> tolerance, const std::string& status)
{
    std::string line = scenario;
    line += ',';
    if (h) line += num17(*h);
    line += ',';
    line += metric;
    line += ',';
    line += num17(value);
    line += ',';
    if (tolerance) line += num17(*tolerance);
    line += ',';
    line += status;
    line += '\n';
    return line;
}

}  // namespace

std::string report_csv(const Report& r)
{
    std::string out = "scenario,h,metric,value,tolerance,status\n";
    for (const auto& row : r.rows)
        out += csv_line(r.scenario_name, row.h, row.metric, row.value, row.tolerance,
                        to_string(row.status));
    for (const auto& s : r.sweep) {
        out += csv_line(r.scenario_name, s.h, "sweep_value", s.value, std::nullopt, "info");
        out += csv_line(r.scenario_name, s.h, "sweep_gap", s.gap, std::nullopt, "info");
        out += csv_line(r.scenario_name, s.h, "sweep_sqrt_h_h1", s.sqrt_h_h1, std::nullopt,
                        "info");
    }
    return out;
}

namespace {

struct PlotPoint {
    double lx, ly;  // log10 coordinates
};

constexpr double kW = 640.0, kH = 480.0;
constexpr double kL = 70.0, kR = 610.0, kT = 46.0, kB = 420.0;

}  // namespace

std::string report_svg(const Report& r)
{
    std::vector<PlotPoint> gap_pts, h1_pts;
    for (const auto& s : r.sweep) {
        if (s.h > 0.0 && s.gap > 0.0 && std::isfinite(s.gap))
            gap_pts.push_back({std::log10(s.h), std::log10(s.gap)});
        if (s.h > 0.0 && s.sqrt_h_h1 > 0.0 && std::isfinite(s.sqrt_h_h1))
            h1_pts.push_back({std::log10(s.h), std::log10(s.sqrt_h_h1)});
    }

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"320\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
           "text-anchor=\"middle\">"
           + r.scenario_name + "</text>\n";

    if (gap_pts.empty() && h1_pts.empty()) {
        svg += "<text x=\"320\" y=\"240\" font-family=\"sans-serif\" font-size=\"14\" "
               "fill=\"#777777\" text-anchor=\"middle\">no sweep data</text>\n";
        svg += "</svg>\n";
        return svg;
    }

    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    bool first = true;
    auto absorb = [&](const PlotPoint& p) {
        if (first) {
            xmin = xmax = p.lx;
            ymin = ymax = p.ly;
            first = false;
        } else {
            xmin = std::min(xmin, p.lx);
            xmax = std::max(xmax, p.lx);
            ymin = std::min(ymin, p.ly);
            ymax = std::max(ymax, p.ly);
        }
    };
    for (const auto& p : gap_pts) absorb(p);
    for (const auto& p : h1_pts) absorb(p);

    int x_lo = static_cast<int>(std::floor(xmin)), x_hi = static_cast<int>(std::ceil(xmax));
    int y_lo = static_cast<int>(std::floor(ymin)), y_hi = static_cast<int>(std::ceil(ymax));
    if (x_lo == x_hi) ++x_hi;
    if (y_lo == y_hi) ++y_hi;

    auto px = [&](double lx) { return kL + (lx - x_lo) / (x_hi - x_lo) * (kR - kL); };
    auto py = [&](double ly) { return kB - (ly - y_lo) / (y_hi - y_lo) * (kB - kT); };

    // Frame and decade grid.
    svg += "<rect x=\"" + coord(kL) + "\" y=\"" + coord(kT) + "\" width=\""
           + coord(kR - kL) + "\" height=\"" + coord(kB - kT)
           + "\" fill=\"none\" stroke=\"#333333\"/>\n";
    for (int d = x_lo; d <= x_hi; ++d) {
        const double x = px(d);
        svg += "<line x1=\"" + coord(x) + "\" y1=\"" + coord(kT) + "\" x2=\"" + coord(x)
               + "\" y2=\"" + coord(kB) + "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + coord(x) + "\" y=\"" + coord(kB + 18.0)
               + "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">1e"
               + std::to_string(d) + "</text>\n";
    }
    for (int d = y_lo; d <= y_hi; ++d) {
        const double y = py(d);
        svg += "<line x1=\"" + coord(kL) + "\" y1=\"" + coord(y) + "\" x2=\"" + coord(kR)
               + "\" y2=\"" + coord(y) + "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + coord(kL - 6.0) + "\" y=\"" + coord(y + 4.0)
               + "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">1e"
               + std::to_string(d) + "</text>\n";
    }
    svg += "<text x=\"" + coord((kL + kR) / 2.0) + "\" y=\"" + coord(kB + 36.0)
           + "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">h"
           "</text>\n";

    auto series = [&](const std::vector<PlotPoint>& pts, const char* color,
                      const char* dash, bool squares) {
        if (pts.empty()) return;
        std::string poly = "<polyline fill=\"none\" stroke=\"";
        poly += color;
        poly += "\" stroke-width=\"1.5\"";
        if (dash[0]) poly += std::string(" stroke-dasharray=\"") + dash + "\"";
        poly += " points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) poly += ' ';
            poly += coord(px(pts[i].lx)) + "," + coord(py(pts[i].ly));
        }
        poly += "\"/>\n";
        svg += poly;
        for (const auto& p : pts) {
            const double x = px(p.lx), y = py(p.ly);
            if (squares)
                svg += "<rect x=\"" + coord(x - 3.0) + "\" y=\"" + coord(y - 3.0)
                       + "\" width=\"6\" height=\"6\" fill=\"" + color + "\"/>\n";
            else
                svg += "<circle cx=\"" + coord(x) + "\" cy=\"" + coord(y)
                       + "\" r=\"3\" fill=\"" + color + "\"/>\n";
        }
    };
    series(gap_pts, "#1f6fb4", "", false);
    series(h1_pts, "#c1403d", "6 3", true);

    // Legend.
    svg += "<line x1=\"440\" y1=\"60\" x2=\"470\" y2=\"60\" stroke=\"#1f6fb4\" "
           "stroke-width=\"1.5\"/>\n";
    svg += "<circle cx=\"455\" cy=\"60\" r=\"3\" fill=\"#1f6fb4\"/>\n";
    svg += "<text x=\"476\" y=\"64\" font-family=\"sans-serif\" font-size=\"12\">"
           "energy gap</text>\n";
    svg += "<line x1=\"440\" y1=\"78\" x2=\"470\" y2=\"78\" stroke=\"#c1403d\" "
           "stroke-width=\"1.5\" stroke-dasharray=\"6 3\"/>\n";
    svg += "<rect x=\"452\" y=\"75\" width=\"6\" height=\"6\" fill=\"#c1403d\"/>\n";
    svg += "<text x=\"476\" y=\"82\" font-family=\"sans-serif\" font-size=\"12\">"
           "sqrt(h) x |w|_H1</text>\n";

    svg += "</svg>\n";
    return svg;
}

std::vector<std::string> emit_report(const Report& r, const std::string& out_dir,
                                     const std::vector<std::string>& formats)
{
    std::vector<std::string> written;
    for (const auto& fmt : formats) {
        std::string content;
        if (fmt == "json")
            content = report_json(r);
        else if (fmt == "csv")
            content = report_csv(r);
        else if (fmt == "svg")
            content = report_svg(r);
        else
            throw std::runtime_error("unknown report format '" + fmt
                                     + "' (expected json, csv or svg)");
        const std::string path = out_dir + "/" + r.scenario_name + "." + fmt;
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write report file: " + path);
        os << content;
        if (!os) throw std::runtime_error("error writing report file: " + path);
        written.push_back(path);
    }
    return written;
}

}  // namespace tgap
