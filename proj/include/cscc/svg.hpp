#ifndef CSCC_SVG_HPP
#define CSCC_SVG_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "boundary.hpp"
#include "errors.hpp"
#include "evaluation.hpp"

namespace cscc {

struct Series {
    std::string name;
    std::vector<CurvePoint> points;
};

struct PlotStyle {
    std::string title;
    std::string x_label = "x";
    std::string y_label = "y";
};

namespace svg {

inline constexpr double kWidth = 800.0;
inline constexpr double kHeight = 600.0;
inline constexpr double kLeft = 80.0;
inline constexpr double kRight = 30.0;
inline constexpr double kTop = 50.0;
inline constexpr double kBottom = 70.0;
inline constexpr int kTicks = 5;
inline constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c",
                                                        "#9467bd", "#ff7f0e", "#8c564b"};

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

inline std::string escape(const std::string& s) {
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

/// Maps data coordinates onto the plot area.
struct Frame {
    double x0, x1, y0, y1;

    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

inline std::string header(const PlotStyle& style) {
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                    "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" "
                    "height=\"600\">\n"
                    "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    if (!style.title.empty())
        s += "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">" +
             escape(style.title) + "</text>\n";
    return s;
}

inline std::string axes(const Frame& f, const PlotStyle& style) {
    const double left = kLeft, right = kWidth - kRight, top = kTop, bottom = kHeight - kBottom;
    std::string s = "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(bottom) + "\" x2=\"" + num(right) + "\" y2=\"" +
         num(bottom) + "\"/>\n";
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" + num(bottom) +
         "\"/>\n";
    if (f.y0 < 0.0 && f.y1 > 0.0)
        s += "<line x1=\"" + num(left) + "\" y1=\"" + num(f.py(0.0)) + "\" x2=\"" + num(right) + "\" y2=\"" +
             num(f.py(0.0)) + "\" stroke=\"#999999\" stroke-dasharray=\"4 4\"/>\n";
    s += "</g>\n<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (int i = 0; i < kTicks; ++i) {
        const double xv = f.x0 + (f.x1 - f.x0) * i / (kTicks - 1);
        const double yv = f.y0 + (f.y1 - f.y0) * i / (kTicks - 1);
        const double x = f.px(xv), y = f.py(yv);
        s += "<line x1=\"" + num(x) + "\" y1=\"" + num(bottom) + "\" x2=\"" + num(x) + "\" y2=\"" +
             num(bottom + 6) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(x) + "\" y=\"" + num(bottom + 22) + "\" text-anchor=\"middle\">" + label(xv) +
             "</text>\n";
        s += "<line x1=\"" + num(left - 6) + "\" y1=\"" + num(y) + "\" x2=\"" + num(left) + "\" y2=\"" + num(y) +
             "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(left - 10) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" + label(yv) +
             "</text>\n";
    }
    s += "<text x=\"" + num((left + right) / 2) + "\" y=\"" + num(kHeight - 20) + "\" text-anchor=\"middle\">" +
         escape(style.x_label) + "</text>\n";
    s += "<text x=\"20\" y=\"" + num((top + bottom) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
         num((top + bottom) / 2) + ")\">" + escape(style.y_label) + "</text>\n";
    s += "</g>\n";
    return s;
}

inline std::string polyline(const Frame& f, std::span<const CurvePoint> pts, const char* color) {
    std::string s = "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) s += ' ';
        s += num(f.px(pts[i].x)) + "," + num(f.py(pts[i].y));
    }
    return s + "\"/>\n";
}

inline std::string legend(std::span<const Series> series) {
    std::string s = "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double y = kTop + 10 + 18.0 * static_cast<double>(i);
        const char* color = kPalette[i % kPalette.size()];
        s += "<line x1=\"" + num(kWidth - kRight - 150) + "\" y1=\"" + num(y) + "\" x2=\"" +
             num(kWidth - kRight - 125) + "\" y2=\"" + num(y) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + num(kWidth - kRight - 118) + "\" y=\"" + num(y + 4) + "\">" + escape(series[i].name) +
             "</text>\n";
    }
    return s + "</g>\n";
}

}  // namespace svg

/// Line plot of one or more curves. The y range always includes 0, so an
/// all-zero curve lies on the horizontal axis.
inline std::string emit_svg(std::span<const Series> series, const PlotStyle& style = {}) {
    if (series.empty()) throw EmptyCurve("no curves to plot");
    double x0 = INFINITY, x1 = -INFINITY, y0 = 0.0, y1 = 0.0;
    for (const Series& s : series) {
        if (s.points.empty()) throw EmptyCurve("curve '" + s.name + "' has no points");
        for (const CurvePoint& p : s.points) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y))
                throw DataError("NonFiniteCurve", "curve '" + s.name + "' has a non-finite point");
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
    }
    if (x1 <= x0) x1 = x0 + 1.0;
    if (y1 <= y0) y1 = y0 + 1.0;
    const svg::Frame f{x0, x1, y0, y1};
    std::string out = svg::header(style) + svg::axes(f, style);
    for (std::size_t i = 0; i < series.size(); ++i)
        out += svg::polyline(f, series[i].points, svg::kPalette[i % svg::kPalette.size()]);
    if (series.size() > 1 || !series[0].name.empty()) out += svg::legend(series);
    return out + "</svg>\n";
}

inline std::string emit_svg(std::span<const CurvePoint> curve, const PlotStyle& style = {}) {
    const Series s{"", {curve.begin(), curve.end()}};
    return emit_svg(std::span<const Series>(&s, 1), style);
}

/// Decision boundary in the (p11, t) plane over p11 in [0,1], t in [-1,1].
/// The infeasible triangles t > p11 and t < p11 - 1 are shaded grey and the
/// treated side of the boundary is tinted.
inline std::string emit_boundary_svg(const DecisionBoundary& b, const PlotStyle& style = {"", "p11", "t"}) {
    const svg::Frame f{0.0, 1.0, -1.0, 1.0};
    auto pt = [&](double x, double y) { return svg::num(f.px(x)) + "," + svg::num(f.py(y)); };
    std::string out = svg::header(style);

    out += "<clipPath id=\"plot\"><rect x=\"" + svg::num(f.px(0.0)) + "\" y=\"" + svg::num(f.py(1.0)) +
           "\" width=\"" + svg::num(f.px(1.0) - f.px(0.0)) + "\" height=\"" + svg::num(f.py(-1.0) - f.py(1.0)) +
           "\"/></clipPath>\n";
    const double ya = b.tau_star(0.0);
    const double yb = b.tau_star(1.0);
    const double edge = b.inverted() ? std::min({-1.0, ya, yb}) - 1.0 : std::max({1.0, ya, yb}) + 1.0;
    out += "<polygon clip-path=\"url(#plot)\" fill=\"#d9ead3\" stroke=\"none\" points=\"" + pt(0.0, ya) + " " +
           pt(1.0, yb) + " " + pt(1.0, edge) + " " + pt(0.0, edge) + "\"/>\n";
    out += "<polygon fill=\"#cccccc\" stroke=\"none\" points=\"" + pt(0.0, 0.0) + " " + pt(1.0, 1.0) + " " +
           pt(0.0, 1.0) + "\"/>\n";
    out += "<polygon fill=\"#cccccc\" stroke=\"none\" points=\"" + pt(0.0, -1.0) + " " + pt(1.0, -1.0) + " " +
           pt(1.0, 0.0) + "\"/>\n";
    out += "<text x=\"" + svg::num(f.px(0.15)) + "\" y=\"" + svg::num(f.py(0.8)) +
           "\" font-family=\"sans-serif\" font-size=\"16\">A</text>\n";
    out += "<text x=\"" + svg::num(f.px(0.8)) + "\" y=\"" + svg::num(f.py(-0.8)) +
           "\" font-family=\"sans-serif\" font-size=\"16\">C</text>\n";
    out += svg::axes(f, style);

    out += "<line clip-path=\"url(#plot)\" x1=\"" + svg::num(f.px(0.0)) + "\" y1=\"" + svg::num(f.py(b.tau_star(0.0))) +
           "\" x2=\"" + svg::num(f.px(1.0)) + "\" y2=\"" + svg::num(f.py(b.tau_star(1.0))) +
           "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
    return out + "</svg>\n";
}

}  // namespace cscc

#endif  // CSCC_SVG_HPP
