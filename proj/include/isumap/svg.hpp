#ifndef ISUMAP_SVG_HPP
#define ISUMAP_SVG_HPP

#include <algorithm>
#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include "isumap/core.hpp"
#include "isumap/io.hpp"
#include "isumap/mds.hpp"
#include "isumap/separation.hpp"

namespace isumap {

// Categorical colors; labels cycle through them modulo 12.
inline const std::array<const char*, 12>& categorical_palette() {
    static const std::array<const char*, 12> colors = {
        "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc949",
        "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#86bcb6", "#d37295"};
    return colors;
}

namespace detail {

struct SvgFrame {
    double minx, miny, scale, offx, offy;
    double x(double v) const { return offx + (v - minx) * scale; }
    // svg y grows downward, data y grows upward
    double y(double v) const { return 800.0 - (offy + (v - miny) * scale); }
};

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace detail

// Self-contained square scatter plot of the first two embedding coordinates,
// one circle per point colored by its label (single color without labels).
// When a separation trace is given, each cluster's medoid path is overlaid as
// a polyline in the cluster color. Fixed 800 x 800 viewport, no external
// references.
inline std::string scatter_svg(const Embedding& e, const std::vector<int>* labels = nullptr,
                               const std::vector<SeparationState::Record>* trace = nullptr) {
    if (e.n == 0) throw InvalidInput("scatter_svg: empty embedding");
    if (labels && labels->size() != e.n) throw InvalidInput("scatter_svg: label count mismatch");
    const auto& pal = categorical_palette();
    auto px = [&](std::size_t i) { return e.at(i, 0); };
    auto py = [&](std::size_t i) { return e.m >= 2 ? e.at(i, 1) : 0.0; };

    double minx = px(0), maxx = px(0), miny = py(0), maxy = py(0);
    auto widen = [&](double x, double y) {
        minx = std::min(minx, x);
        maxx = std::max(maxx, x);
        miny = std::min(miny, y);
        maxy = std::max(maxy, y);
    };
    for (std::size_t i = 1; i < e.n; ++i) widen(px(i), py(i));
    if (trace)
        for (const auto& r : *trace)
            for (std::size_t j = 0; 2 * j + 1 < r.medoid_xy.size(); ++j)
                widen(r.medoid_xy[2 * j], r.medoid_xy[2 * j + 1]);

    const double margin = 40.0, span = 800.0 - 2.0 * margin;
    const double w = std::max({maxx - minx, maxy - miny, 1e-12});
    detail::SvgFrame f;
    f.minx = minx;
    f.miny = miny;
    f.scale = span / w;
    // center the short axis
    f.offx = margin + 0.5 * (span - (maxx - minx) * f.scale);
    f.offy = margin + 0.5 * (span - (maxy - miny) * f.scale);

    std::string svg =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
        "viewBox=\"0 0 800 800\">\n"
        "<rect width=\"800\" height=\"800\" fill=\"#ffffff\"/>\n";
    for (std::size_t i = 0; i < e.n; ++i) {
        const char* color = pal[labels ? static_cast<std::size_t>((*labels)[i]) % 12 : 0];
        svg += "<circle cx=\"" + detail::num(f.x(px(i))) + "\" cy=\"" + detail::num(f.y(py(i))) +
               "\" r=\"4\" fill=\"" + color + "\" fill-opacity=\"0.75\"/>\n";
    }
    if (trace && !trace->empty()) {
        const std::size_t c = trace->front().medoid_xy.size() / 2;
        for (std::size_t j = 0; j < c; ++j) {
            std::string pts;
            for (const auto& r : *trace) {
                if (2 * j + 1 >= r.medoid_xy.size()) continue;
                pts += detail::num(f.x(r.medoid_xy[2 * j])) + "," +
                       detail::num(f.y(r.medoid_xy[2 * j + 1])) + " ";
            }
            if (!pts.empty()) pts.pop_back();
            svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + pal[j % 12] +
                   "\" stroke-width=\"2.5\" stroke-opacity=\"0.9\"/>\n";
        }
    }
    svg += "</svg>";
    return svg;
}

inline void write_scatter_svg(const std::string& path, const Embedding& e,
                              const std::vector<int>* labels = nullptr,
                              const std::vector<SeparationState::Record>* trace = nullptr) {
    detail::open_out(path) << scatter_svg(e, labels, trace) << "\n";
}

}  // namespace isumap

#endif
