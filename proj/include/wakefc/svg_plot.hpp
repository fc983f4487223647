#pragma once

#include <string>
#include <vector>

namespace wakefc {

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    double width = 720.0;
    double height = 440.0;
};

/// Self-contained SVG line chart. Output depends only on the spec.
std::string render_svg(const PlotSpec& spec);

void write_svg_file(const std::string& path, const PlotSpec& spec);

} // namespace wakefc
