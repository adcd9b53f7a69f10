#pragma once

#include "qdsim/experiments.hpp"

#include <string>
#include <vector>

namespace qdsim {

/// Writes a ScanResult as CSV: '#'-prefixed "key = value" metadata header,
/// a column-name row, then comma-separated values at 12 significant digits,
/// LF line endings.  Rows whose 'converged' column (when present) is 0 are
/// dropped and counted in the header, so published files contain converged
/// points only.  Output is byte-identical for identical inputs.
void write_csv(const std::string& path, const ScanResult& result);

/// Same, for several results concatenated with a leading label column.
void write_csv(const std::string& path, const std::vector<std::pair<std::string, ScanResult>>& results,
               const std::string& label_column);

/// Minimal static SVG line plots; CSV stays the authoritative artifact.
struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    int width = 720;
    int height = 480;
    std::vector<double> vertical_guides; // x positions marked with dashed lines
};

void write_svg_lines(const std::string& path, const std::vector<SvgSeries>& series,
                     const SvgOptions& opt);

/// Heatmap over a rectangular (x, y) grid; values mapped on a linear
/// grayscale-to-color ramp.
struct SvgHeatmapOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    int width = 720;
    int height = 520;
};

void write_svg_heatmap(const std::string& path, const std::vector<double>& x,
                       const std::vector<double>& y, const std::vector<double>& values,
                       const SvgHeatmapOptions& opt);

} // namespace qdsim
