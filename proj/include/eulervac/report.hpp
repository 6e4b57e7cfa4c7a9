#pragma once

/**
 * @file report.hpp
 * @brief Artifact writers: CSV tables at 17 significant digits, fitted
 * slopes at 6, JSON documents and minimal SVG plots. Every file is written
 * to a temporary sibling and renamed into place.
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "eulervac/numerics.hpp"

namespace eulervac {

using Json = nlohmann::ordered_json;

/// Shortest text that is 17 significant digits; round-trips every double.
inline std::string fmt_full(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_slope(double v)
{
    if (!std::isfinite(v)) return fmt_full(v);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Slopes rounded to 6 significant digits for JSON output.
inline double round_slope(double v) { return std::isfinite(v) ? std::stod(fmt_slope(v)) : v; }

inline void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) throw Error("write to '" + tmp.string() + "' failed");
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(const std::vector<double>& row)
    {
        if (row.size() != header_.size()) throw Error("CsvTable: row has " + std::to_string(row.size()) + " columns, header has " + std::to_string(header_.size()));
        std::vector<std::string> r;
        for (double v : row) r.push_back(fmt_full(v));
        rows_.push_back(std::move(r));
    }

    /// Mixed rows: text cells are written verbatim.
    void add_text(std::vector<std::string> row)
    {
        if (row.size() != header_.size()) throw Error("CsvTable: column count mismatch");
        rows_.push_back(std::move(row));
    }

    std::string str() const
    {
        std::string s;
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t j = 0; j < cells.size(); ++j) {
                if (j) s += ',';
                s += cells[j];
            }
            s += '\n';
        };
        line(header_);
        for (const auto& r : rows_) line(r);
        return s;
    }

    void write(const std::filesystem::path& p) const { write_atomic(p, str()); }
    std::size_t size() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Replace non-finite numbers by strings so the document stays valid JSON.
inline Json json_number(double v)
{
    if (std::isfinite(v)) return v;
    return fmt_full(v);
}

inline Json json_array(const std::vector<double>& v)
{
    Json a = Json::array();
    for (double x : v) a.push_back(json_number(x));
    return a;
}

inline void write_json(const std::filesystem::path& p, const Json& j) { write_atomic(p, j.dump(2) + "\n"); }

struct SvgSeries {
    std::string label;
    std::vector<double> x, y;
    bool dashed = false;
};

/// Line plot with optional log axes. Points with non-positive coordinates
/// on a log axis are dropped. No timestamps are written.
inline std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                            const std::vector<SvgSeries>& series, bool log_x, bool log_y)
{
    const double W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 55;
    auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!log_x || x > 0.0) && (!log_y || y > 0.0);
    };
    double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
    for (const auto& s : series)
        for (std::size_t j = 0; j < std::min(s.x.size(), s.y.size()); ++j)
            if (usable(s.x[j], s.y[j])) {
                x0 = std::min(x0, tx(s.x[j]));
                x1 = std::max(x1, tx(s.x[j]));
                y0 = std::min(y0, ty(s.y[j]));
                y1 = std::max(y1, ty(s.y[j]));
            }
    if (!(x0 <= x1)) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    if (x1 - x0 < 1e-300) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-300) y0 -= 0.5, y1 += 0.5;
    auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double v) { return H - mb - (ty(v) - y0) / (y1 - y0) * (H - mt - mb); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    char buf[256];
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"24\" font-size=\"15\">%s</text>\n", ml, title.c_str());
    s += buf;
    std::snprintf(buf, sizeof buf, "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n", ml, mt, W - ml - mr,
                  H - mt - mb);
    s += buf;
    for (int j = 0; j <= 4; ++j) {
        const double fx = x0 + (x1 - x0) * j / 4.0, fy = y0 + (y1 - y0) * j / 4.0;
        const double vx = log_x ? std::pow(10.0, fx) : fx, vy = log_y ? std::pow(10.0, fy) : fy;
        std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%s</text>\n", px(vx), H - mb + 16, fmt_slope(vx).c_str());
        s += buf;
        std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">%s</text>\n", ml - 4, py(vy) + 4, fmt_slope(vy).c_str());
        s += buf;
    }
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%s</text>\n", ml + 0.5 * (W - ml - mr), H - 12, x_label.c_str());
    s += buf;
    std::snprintf(buf, sizeof buf, "<text x=\"14\" y=\"%g\" transform=\"rotate(-90 14 %g)\" text-anchor=\"middle\">%s</text>\n",
                  mt + 0.5 * (H - mt - mb), mt + 0.5 * (H - mt - mb), y_label.c_str());
    s += buf;
    for (std::size_t n = 0; n < series.size(); ++n) {
        const auto& sr = series[n];
        const char* c = colors[n % 6];
        std::string pts;
        for (std::size_t j = 0; j < std::min(sr.x.size(), sr.y.size()); ++j) {
            if (!usable(sr.x[j], sr.y[j])) continue;
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(sr.x[j]), py(sr.y[j]));
            pts += buf;
        }
        s += "<polyline fill=\"none\" stroke=\"" + std::string(c) + "\" stroke-width=\"1.5\"" +
             (sr.dashed ? " stroke-dasharray=\"5,4\"" : "") + " points=\"" + pts + "\"/>\n";
        std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" fill=\"%s\">%s</text>\n", W - mr - 150, mt + 16 + 14.0 * n, c, sr.label.c_str());
        s += buf;
    }
    s += "</svg>\n";
    return s;
}

} // namespace eulervac
