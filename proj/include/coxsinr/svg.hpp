/*
   Copyright 2026 the coxsinr authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

#include "coxsinr/environment.hpp"
#include "coxsinr/graphs.hpp"

namespace coxsinr {

struct SvgStyle {
    double point_radius = 0.02;      // in window units
    double edge_width = 0.008;
    bool show_environment = false;   // grain disks / tessellation segments
    std::string point_color = "#1f3a5f";
    std::string edge_color = "#777777";
    std::string env_color = "#c8d8e8";
};

namespace detail {

inline std::string svg_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

}  // namespace detail

/// Static SVG rendering: points as circles, edges as line segments, optional
/// environment overlay; viewBox = reporting window. Deterministic output.
inline std::string render_svg(const PointPattern& p, const SpatialGraph& g, const SvgStyle& style,
                              const Environment* env = nullptr) {
    if (p.window.dim != 2) throw std::invalid_argument("render_svg: d = 2 only");
    using detail::svg_num;
    const Box b = p.window.box();
    const double w = b.hi.x - b.lo.x, h = b.hi.y - b.lo.y;
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + svg_num(b.lo.x) + " " +
         svg_num(b.lo.y) + " " + svg_num(w) + " " + svg_num(h) + "\" width=\"800\" height=\"" +
         svg_num(800.0 * h / w) + "\">\n";
    // y grows upward in window coordinates
    s += "<g transform=\"translate(0," + svg_num(b.lo.y + b.hi.y) + ") scale(1,-1)\">\n";
    s += "<rect x=\"" + svg_num(b.lo.x) + "\" y=\"" + svg_num(b.lo.y) + "\" width=\"" + svg_num(w) +
         "\" height=\"" + svg_num(h) + "\" fill=\"white\"/>\n";

    if (style.show_environment && env != nullptr) {
        s += "<g class=\"environment\">\n";
        if (env->model.kind == IntensityKind::ShotNoise ||
            env->model.kind == IntensityKind::Modulated) {
            const double r = env->model.kind == IntensityKind::ShotNoise
                                 ? env->model.kernel_radius
                                 : env->model.xi.grain_radius;
            for (const auto& c : env->germs)
                s += "<ellipse cx=\"" + svg_num(c.x) + "\" cy=\"" + svg_num(c.y) + "\" rx=\"" +
                     svg_num(r) + "\" ry=\"" + svg_num(r) + "\" fill=\"" + style.env_color +
                     "\" fill-opacity=\"0.6\"/>\n";
        }
        for (const auto& seg : env->segments.segments)
            s += "<path d=\"M" + svg_num(seg.a.x) + " " + svg_num(seg.a.y) + " L" +
                 svg_num(seg.b.x) + " " + svg_num(seg.b.y) + "\" stroke=\"" + style.env_color +
                 "\" stroke-width=\"" + svg_num(style.edge_width) + "\" fill=\"none\"/>\n";
        s += "</g>\n";
    }

    s += "<g class=\"edges\">\n";
    for (const auto& [i, j] : g.edge_list())
        s += "<line x1=\"" + svg_num(p.pts[i].x) + "\" y1=\"" + svg_num(p.pts[i].y) + "\" x2=\"" +
             svg_num(p.pts[j].x) + "\" y2=\"" + svg_num(p.pts[j].y) + "\" stroke=\"" +
             style.edge_color + "\" stroke-width=\"" + svg_num(style.edge_width) + "\"/>\n";
    s += "</g>\n";

    s += "<g class=\"points\">\n";
    for (const auto& q : p.pts)
        s += "<circle cx=\"" + svg_num(q.x) + "\" cy=\"" + svg_num(q.y) + "\" r=\"" +
             svg_num(style.point_radius) + "\" fill=\"" + style.point_color + "\"/>\n";
    s += "</g>\n</g>\n</svg>\n";
    return s;
}

}  // namespace coxsinr
