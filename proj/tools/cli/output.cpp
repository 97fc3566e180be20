#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <unistd.h>

#ifndef SEMIWAVE_VERSION
#define SEMIWAVE_VERSION "unknown"
#endif

namespace semiwave::cli {

const char* const version_string = SEMIWAVE_VERSION;

void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    namespace fs = std::filesystem;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns, std::string config_hash)
    : columns_(std::move(columns)), hash_(std::move(config_hash))
{
}

void CsvTable::add_row(const std::vector<double>& row)
{
    if (row.size() != columns_.size())
        throw std::logic_error("csv row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i)
            body_ += ',';
        body_ += format_number(row[i]);
    }
    body_ += '\n';
}

std::string CsvTable::str() const
{
    std::string head = "# semiwave " + std::string(version_string) + " schema 1 config " + hash_ + "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i)
        head += (i ? "," : "") + columns_[i];
    return head + "\n" + body_;
}

namespace {

std::string esc(const std::string& s)
{
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

std::string fmt(double x, const char* f = "%.6g")
{
    char buf[32];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

std::vector<double> ticks(double lo, double hi, int target)
{
    double span = hi - lo;
    double raw = span / target;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    std::vector<double> t;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step)
        t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    return t;
}

} // namespace

std::string svg_line_chart(const ChartSpec& spec, const std::vector<Series>& series)
{
    constexpr double W = 720, H = 450, left = 80, right = 170, top = 40, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
                x0 = std::min(x0, s.x[i]);
                x1 = std::max(x1, s.x[i]);
                y0 = std::min(y0, s.y[i]);
                y1 = std::max(y1, s.y[i]);
            }
    if (!(x1 >= x0)) {
        x0 = 0;
        x1 = 1;
        y0 = 0;
        y1 = 1;
    }
    if (x1 == x0)
        x1 = x0 + 1;
    if (y1 == y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
       << esc(spec.title) << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t : ticks(x0, x1, 6)) {
        double x = px(t);
        os << "<line x1=\"" << fmt(x) << "\" y1=\"" << top + ph << "\" x2=\"" << fmt(x) << "\" y2=\""
           << top + ph + 5 << "\" stroke=\"black\"/>";
        os << "<text x=\"" << fmt(x) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << fmt(t, "%g")
           << "</text>\n";
    }
    for (double t : ticks(y0, y1, 6)) {
        double y = py(t);
        os << "<line x1=\"" << left - 5 << "\" y1=\"" << fmt(y) << "\" x2=\"" << left << "\" y2=\"" << fmt(y)
           << "\" stroke=\"black\"/>";
        os << "<text x=\"" << left - 8 << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">" << fmt(t, "%g")
           << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
       << esc(spec.x_label) << "</text>\n";
    os << "<text transform=\"translate(20 " << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
       << esc(spec.y_label) << "</text>\n";
    if (spec.zero_line && y0 < 0 && y1 > 0)
        os << "<line x1=\"" << left << "\" y1=\"" << fmt(py(0)) << "\" x2=\"" << left + pw << "\" y2=\""
           << fmt(py(0)) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = colors[k % (sizeof colors / sizeof *colors)];
        std::string pts;
        auto flush = [&] {
            if (!pts.empty())
                os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts
                   << "\"/>\n";
            pts.clear();
        };
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                flush();
                continue;
            }
            pts += fmt(px(s.x[i])) + "," + fmt(py(s.y[i])) + " ";
        }
        flush();
        double ly = top + 10 + 18 * static_cast<double>(k);
        os << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 35 << "\" y2=\""
           << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
        os << "<text x=\"" << left + pw + 40 << "\" y=\"" << ly + 4 << "\">" << esc(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace semiwave::cli
