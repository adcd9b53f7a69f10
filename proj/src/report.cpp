#include "qdsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qdsim {

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

void write_meta(std::ofstream& out, const ScanResult& r, const std::string& prefix)
{
    for (const auto& [k, v] : r.metadata) {
        if (k.rfind("created", 0) == 0) continue; // wall-clock stays out of the artifact
        out << "# " << prefix << k << " = " << v << "\n";
    }
}

void write_body(std::ofstream& out, const ScanResult& r, const std::string& label)
{
    int conv_col = -1;
    for (size_t i = 0; i < r.columns.size(); ++i)
        if (r.columns[i] == "converged") conv_col = int(i);

    size_t dropped = 0;
    for (const auto& row : r.rows)
        if (conv_col >= 0 && row[conv_col] < 0.5) ++dropped;
    if (dropped > 0)
        out << "# dropped_unconverged = " << dropped << "\n";

    for (const auto& row : r.rows) {
        if (conv_col >= 0 && row[conv_col] < 0.5) continue;
        if (!label.empty()) out << label << ",";
        for (size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << num(row[c]);
        out << "\n";
    }
}

} // namespace

void write_csv(const std::string& path, const ScanResult& r)
{
    auto out = open_out(path);
    out << "# experiment = " << r.experiment << "\n";
    write_meta(out, r, "");
    for (size_t c = 0; c < r.columns.size(); ++c)
        out << (c ? "," : "") << r.columns[c];
    out << "\n";
    write_body(out, r, "");
}

void write_csv(const std::string& path,
               const std::vector<std::pair<std::string, ScanResult>>& results,
               const std::string& label_column)
{
    if (results.empty())
        throw std::invalid_argument("write_csv: no results");
    auto out = open_out(path);
    out << "# experiment = " << results.front().second.experiment << "\n";
    for (const auto& [label, r] : results)
        write_meta(out, r, label + ".");
    out << label_column;
    for (const auto& c : results.front().second.columns)
        out << "," << c;
    out << "\n";
    for (const auto& [label, r] : results)
        write_body(out, r, label);
}

namespace {

struct AxisMap {
    double lo, hi;
    bool log;
    double px0, px1;

    double operator()(double v) const
    {
        double t;
        if (log)
            t = (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
        else
            t = (v - lo) / (hi - lo);
        return px0 + t * (px1 - px0);
    }
};

std::vector<double> linear_ticks(double lo, double hi)
{
    const double span = hi - lo;
    if (!(span > 0)) return {lo};
    double step = std::pow(10.0, std::floor(std::log10(span / 4.0)));
    if (span / step > 8) step *= 2;
    if (span / step > 8) step *= 2.5;
    std::vector<double> t;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step)
        t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    return t;
}

std::vector<double> log_ticks(double lo, double hi)
{
    std::vector<double> t;
    for (int e = int(std::floor(std::log10(lo))); e <= int(std::ceil(std::log10(hi))); ++e) {
        const double v = std::pow(10.0, e);
        if (v >= lo * 0.999 && v <= hi * 1.001) t.push_back(v);
    }
    if (t.empty()) t = {lo, hi};
    return t;
}

std::string tick_label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

const char* kPalette[] = {"#000000", "#1f77b4", "#d62728", "#d8a400",
                          "#2ca02c", "#9467bd", "#8c564b"};

void finite_minmax(const std::vector<double>& v, bool log_scale, double& lo, double& hi)
{
    for (double x : v) {
        if (!std::isfinite(x)) continue;
        if (log_scale && x <= 0) continue;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
}

} // namespace

void write_svg_lines(const std::string& path, const std::vector<SvgSeries>& series,
                     const SvgOptions& opt)
{
    if (series.empty())
        throw std::invalid_argument("write_svg_lines: no series");

    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const auto& s : series) {
        finite_minmax(s.x, opt.log_x, xlo, xhi);
        finite_minmax(s.y, opt.log_y, ylo, yhi);
    }
    if (!(xhi > xlo)) { xhi = xlo + 1; }
    if (!(yhi > ylo)) { yhi = ylo + 1; }
    if (!opt.log_y) {
        const double pad = 0.05 * (yhi - ylo);
        ylo -= pad;
        yhi += pad;
    }

    const double ml = 72, mr = 16, mt = 34, mb = 52;
    AxisMap X{xlo, xhi, opt.log_x, ml, opt.width - mr};
    AxisMap Y{ylo, yhi, opt.log_y, opt.height - mb, mt};

    auto out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
        << opt.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << opt.width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">"
        << opt.title << "</text>\n";

    // frame and ticks
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << (opt.width - ml - mr)
        << "\" height=\"" << (opt.height - mt - mb) << "\" fill=\"none\" stroke=\"black\"/>\n";
    const auto xticks = opt.log_x ? log_ticks(xlo, xhi) : linear_ticks(xlo, xhi);
    for (double v : xticks) {
        const double px = X(v);
        out << "<line x1=\"" << px << "\" y1=\"" << (opt.height - mb) << "\" x2=\"" << px
            << "\" y2=\"" << (opt.height - mb + 5) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px << "\" y=\"" << (opt.height - mb + 18)
            << "\" text-anchor=\"middle\">" << tick_label(v) << "</text>\n";
    }
    const auto yticks = opt.log_y ? log_ticks(ylo, yhi) : linear_ticks(ylo, yhi);
    for (double v : yticks) {
        const double py = Y(v);
        out << "<line x1=\"" << (ml - 5) << "\" y1=\"" << py << "\" x2=\"" << ml << "\" y2=\""
            << py << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << (ml - 8) << "\" y=\"" << (py + 4)
            << "\" text-anchor=\"end\">" << tick_label(v) << "</text>\n";
    }
    out << "<text x=\"" << (ml + (opt.width - ml - mr) / 2) << "\" y=\"" << (opt.height - 14)
        << "\" text-anchor=\"middle\">" << opt.x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << (mt + (opt.height - mt - mb) / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (mt + (opt.height - mt - mb) / 2) << ")\">" << opt.y_label << "</text>\n";

    for (double g : opt.vertical_guides) {
        if (g <= xlo || g >= xhi) continue;
        out << "<line x1=\"" << X(g) << "\" y1=\"" << mt << "\" x2=\"" << X(g) << "\" y2=\""
            << (opt.height - mb) << "\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";
    }

    for (size_t s = 0; s < series.size(); ++s) {
        out << "<polyline fill=\"none\" stroke=\"" << kPalette[s % 7]
            << "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < series[s].x.size(); ++i) {
            const double xv = series[s].x[i], yv = series[s].y[i];
            if (!std::isfinite(xv) || !std::isfinite(yv)) continue;
            if ((opt.log_x && xv <= 0) || (opt.log_y && yv <= 0)) continue;
            out << num(X(xv)) << "," << num(Y(yv)) << " ";
        }
        out << "\"/>\n";
        out << "<text x=\"" << (opt.width - mr - 8) << "\" y=\"" << (mt + 16 + 16 * s)
            << "\" text-anchor=\"end\" fill=\"" << kPalette[s % 7] << "\">" << series[s].label
            << "</text>\n";
    }
    out << "</svg>\n";
}

namespace {

// five-stop color ramp, dark blue -> yellow
void ramp(double t, int& r, int& g, int& b)
{
    static const int stops[5][3] = {
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const int i = std::min(3, int(t));
    const double f = t - i;
    r = int(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]));
    g = int(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]));
    b = int(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]));
}

double edge(double a, double b, bool log_scale)
{
    return log_scale ? std::sqrt(a * b) : (a + b) / 2.0;
}

} // namespace

void write_svg_heatmap(const std::string& path, const std::vector<double>& x,
                       const std::vector<double>& y, const std::vector<double>& values,
                       const SvgHeatmapOptions& opt)
{
    const size_t nx = x.size(), ny = y.size();
    if (values.size() != nx * ny)
        throw std::invalid_argument("write_svg_heatmap: values must be nx*ny, x-major");

    double vlo = 1e300, vhi = -1e300;
    finite_minmax(values, false, vlo, vhi);
    if (!(vhi > vlo)) vhi = vlo + 1;

    const double ml = 72, mr = 70, mt = 34, mb = 52;
    const double xlo = x.front(), xhi = x.back(), ylo = y.front(), yhi = y.back();
    AxisMap X{xlo, xhi, opt.log_x, ml, opt.width - mr};
    AxisMap Y{ylo, yhi, opt.log_y, opt.height - mb, mt};

    auto out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
        << opt.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << opt.width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">"
        << opt.title << "</text>\n";

    for (size_t i = 0; i < nx; ++i) {
        const double xl = i == 0 ? xlo : edge(x[i - 1], x[i], opt.log_x);
        const double xr = i + 1 == nx ? xhi : edge(x[i], x[i + 1], opt.log_x);
        for (size_t j = 0; j < ny; ++j) {
            const double yl = j == 0 ? ylo : edge(y[j - 1], y[j], opt.log_y);
            const double yr = j + 1 == ny ? yhi : edge(y[j], y[j + 1], opt.log_y);
            int r, g, b;
            ramp((values[i * ny + j] - vlo) / (vhi - vlo), r, g, b);
            out << "<rect x=\"" << num(X(xl)) << "\" y=\"" << num(Y(yr)) << "\" width=\""
                << num(X(xr) - X(xl)) << "\" height=\"" << num(Y(yl) - Y(yr))
                << "\" fill=\"rgb(" << r << "," << g << "," << b << ")\"/>\n";
        }
    }

    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << (opt.width - ml - mr)
        << "\" height=\"" << (opt.height - mt - mb) << "\" fill=\"none\" stroke=\"black\"/>\n";
    const auto xticks = opt.log_x ? log_ticks(xlo, xhi) : linear_ticks(xlo, xhi);
    for (double v : xticks) {
        out << "<text x=\"" << X(v) << "\" y=\"" << (opt.height - mb + 18)
            << "\" text-anchor=\"middle\">" << tick_label(v) << "</text>\n";
    }
    const auto yticks = opt.log_y ? log_ticks(ylo, yhi) : linear_ticks(ylo, yhi);
    for (double v : yticks) {
        out << "<text x=\"" << (ml - 8) << "\" y=\"" << (Y(v) + 4)
            << "\" text-anchor=\"end\">" << tick_label(v) << "</text>\n";
    }
    out << "<text x=\"" << (ml + (opt.width - ml - mr) / 2) << "\" y=\"" << (opt.height - 14)
        << "\" text-anchor=\"middle\">" << opt.x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << (mt + (opt.height - mt - mb) / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (mt + (opt.height - mt - mb) / 2) << ")\">" << opt.y_label << "</text>\n";

    // colorbar
    const double cb_x = opt.width - mr + 18, cb_w = 14;
    for (int k = 0; k < 64; ++k) {
        int r, g, b;
        ramp((k + 0.5) / 64.0, r, g, b);
        const double y0 = (opt.height - mb) - (k + 1) * (opt.height - mt - mb) / 64.0;
        out << "<rect x=\"" << cb_x << "\" y=\"" << num(y0) << "\" width=\"" << cb_w
            << "\" height=\"" << num((opt.height - mt - mb) / 64.0 + 0.5) << "\" fill=\"rgb("
            << r << "," << g << "," << b << ")\"/>\n";
    }
    out << "<text x=\"" << (cb_x + cb_w / 2) << "\" y=\"" << (mt - 6)
        << "\" text-anchor=\"middle\">" << tick_label(vhi) << "</text>\n";
    out << "<text x=\"" << (cb_x + cb_w / 2) << "\" y=\"" << (opt.height - mb + 14)
        << "\" text-anchor=\"middle\">" << tick_label(vlo) << "</text>\n";
    out << "</svg>\n";
}

} // namespace qdsim
