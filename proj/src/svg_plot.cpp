#include "wakefc/svg_plot.hpp"

#include "wakefc/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace wakefc {

namespace {

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double x, int digits)
{
    if (std::abs(x) < 0.5 * std::pow(10.0, -digits)) {
        x = 0.0;
    }
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, digits);
    return std::string(buf, r.ptr);
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

double nice_step(double span, int target_ticks)
{
    const double raw = span / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    const double nice = f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0;
    return nice * mag;
}

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    double step = 0.2;
    int digits = 1;
};

Axis make_axis(double lo, double hi)
{
    if (!(hi > lo)) {
        const double pad = std::abs(lo) > 0.0 ? 0.05 * std::abs(lo) : 1.0;
        lo -= pad;
        hi += pad;
    }
    Axis a;
    a.step = nice_step(hi - lo, 6);
    a.lo = std::floor(lo / a.step) * a.step;
    a.hi = std::ceil(hi / a.step) * a.step;
    a.digits = std::max(0, -static_cast<int>(std::floor(std::log10(a.step))));
    return a;
}

} // namespace

std::string render_svg(const PlotSpec& spec)
{
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    for (const auto& s : spec.series) {
        if (s.x.size() != s.y.size()) {
            throw DomainError("plot series " + s.name + ": x and y lengths differ");
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                continue;
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = 0.0;
        xmax = 1.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    const Axis ax = make_axis(xmin, xmax);
    const Axis ay = make_axis(ymin, ymax);

    const double left = 80.0, right = 170.0, top = 40.0, bottom = 60.0;
    const double pw = spec.width - left - right;
    const double ph = spec.height - top - bottom;
    const auto px = [&](double x) { return left + (x - ax.lo) / (ax.hi - ax.lo) * pw; };
    const auto py = [&](double y) { return top + ph - (y - ay.lo) / (ay.hi - ay.lo) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(spec.width, 0) << "\" height=\""
       << fixed(spec.height, 0) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << fixed(left + pw / 2, 1) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << escape(spec.title) << "</text>\n";

    const auto nx = static_cast<int>(std::llround((ax.hi - ax.lo) / ax.step));
    for (int i = 0; i <= nx; ++i) {
        const double v = ax.lo + i * ax.step;
        const std::string X = fixed(px(v), 1);
        os << "<line x1=\"" << X << "\" y1=\"" << fixed(top, 1) << "\" x2=\"" << X << "\" y2=\"" << fixed(top + ph, 1)
           << "\" stroke=\"#e6e6e6\"/>\n";
        os << "<text x=\"" << X << "\" y=\"" << fixed(top + ph + 18, 1) << "\" text-anchor=\"middle\">"
           << fixed(v, ax.digits) << "</text>\n";
    }
    const auto ny = static_cast<int>(std::llround((ay.hi - ay.lo) / ay.step));
    for (int i = 0; i <= ny; ++i) {
        const double v = ay.lo + i * ay.step;
        const std::string Y = fixed(py(v), 1);
        os << "<line x1=\"" << fixed(left, 1) << "\" y1=\"" << Y << "\" x2=\"" << fixed(left + pw, 1) << "\" y2=\""
           << Y << "\" stroke=\"#e6e6e6\"/>\n";
        os << "<text x=\"" << fixed(left - 8, 1) << "\" y=\"" << fixed(py(v) + 4, 1) << "\" text-anchor=\"end\">"
           << fixed(v, ay.digits) << "</text>\n";
    }
    os << "<rect x=\"" << fixed(left, 1) << "\" y=\"" << fixed(top, 1) << "\" width=\"" << fixed(pw, 1)
       << "\" height=\"" << fixed(ph, 1) << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fixed(left + pw / 2, 1) << "\" y=\"" << fixed(spec.height - 18, 1)
       << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
    os << "<text transform=\"translate(22," << fixed(top + ph / 2, 1) << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape(spec.y_label) << "</text>\n";

    for (std::size_t s = 0; s < spec.series.size(); ++s) {
        const auto& ser = spec.series[s];
        const char* color = kPalette[s % kPalette.size()];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < ser.x.size(); ++i) {
            if (!std::isfinite(ser.x[i]) || !std::isfinite(ser.y[i])) {
                continue;
            }
            os << (first ? "" : " ") << fixed(px(ser.x[i]), 2) << ',' << fixed(py(ser.y[i]), 2);
            first = false;
        }
        os << "\"/>\n";
        const double ly = top + 14.0 + 18.0 * static_cast<double>(s);
        os << "<line x1=\"" << fixed(left + pw + 12, 1) << "\" y1=\"" << fixed(ly, 1) << "\" x2=\""
           << fixed(left + pw + 36, 1) << "\" y2=\"" << fixed(ly, 1) << "\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << fixed(left + pw + 42, 1) << "\" y=\"" << fixed(ly + 4, 1) << "\">" << escape(ser.name)
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_svg_file(const std::string& path, const PlotSpec& spec)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error("cannot open " + path + " for writing");
    }
    f << render_svg(spec);
}

} // namespace wakefc
