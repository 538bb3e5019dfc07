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

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "coxsinr/geometry.hpp"

namespace coxsinr {

struct Disk {
    Point c;
    double r = 0.0;
};

struct Segment {
    Point a, b;
    double length() const { return euclid(a, b); }
};

inline double dist_point_segment(Point p, const Segment& s) {
    const Point d = s.b - s.a;
    const double len2 = dot(d, d);
    double t = len2 > 0 ? dot(p - s.a, d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return euclid(p, s.a + t * d);
}

/// Liang-Barsky clip of a segment to an axis-aligned box (2D).
inline std::optional<Segment> clip_segment(const Segment& s, const Box& box) {
    double t0 = 0.0, t1 = 1.0;
    const double dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {s.a.x - box.lo.x, box.hi.x - s.a.x, s.a.y - box.lo.y, box.hi.y - s.a.y};
    for (int k = 0; k < 4; ++k) {
        if (p[k] == 0.0) {
            if (q[k] < 0.0) return std::nullopt;
        } else {
            const double t = q[k] / p[k];
            if (p[k] < 0.0) {
                if (t > t1) return std::nullopt;
                t0 = std::max(t0, t);
            } else {
                if (t < t0) return std::nullopt;
                t1 = std::min(t1, t);
            }
        }
    }
    if (t0 > t1) return std::nullopt;
    Segment out;
    out.a = {s.a.x + t0 * dx, s.a.y + t0 * dy, 0.0};
    out.b = {s.a.x + t1 * dx, s.a.y + t1 * dy, 0.0};
    return out;
}

/// Proper or touching intersection of two 2D segments (tolerance on touches).
inline bool segments_intersect(const Segment& s, const Segment& t, double tol = 1e-12) {
    auto orient = [](Point a, Point b, Point c) { return cross2(b - a, c - a); };
    const double d1 = orient(s.a, s.b, t.a);
    const double d2 = orient(s.a, s.b, t.b);
    const double d3 = orient(t.a, t.b, s.a);
    const double d4 = orient(t.a, t.b, s.b);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    return dist_point_segment(t.a, s) <= tol || dist_point_segment(t.b, s) <= tol ||
           dist_point_segment(s.a, t) <= tol || dist_point_segment(s.b, t) <= tol;
}

namespace detail {

// Angular intervals on [0, 2pi), possibly wrapping; used to mark the parts of
// a circle that do not bound the union (covered by a peer disk or outside the
// clip box).
using AngIntervals = std::vector<std::pair<double, double>>;

inline void add_interval(AngIntervals& iv, double a, double b) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    if (b - a >= two_pi - 1e-12) {
        iv.emplace_back(0.0, two_pi);
        return;
    }
    a = std::fmod(a, two_pi);
    if (a < 0) a += two_pi;
    b = std::fmod(b, two_pi);
    if (b < 0) b += two_pi;
    if (a <= b) {
        iv.emplace_back(a, b);
    } else {
        iv.emplace_back(a, two_pi);
        iv.emplace_back(0.0, b);
    }
}

inline AngIntervals merge_intervals(AngIntervals iv) {
    std::sort(iv.begin(), iv.end());
    AngIntervals out;
    for (auto& p : iv) {
        if (!out.empty() && p.first <= out.back().second) {
            out.back().second = std::max(out.back().second, p.second);
        } else {
            out.push_back(p);
        }
    }
    return out;
}

// Angular interval of circle (c, r) lying on the wrong side of the half-plane
// axis >= bound (side=+1) or axis <= bound (side=-1); axis 0 = x, 1 = y.
inline void add_halfplane_violation(AngIntervals& iv, const Disk& d, int axis, double bound,
                                    int side) {
    const double center = axis == 0 ? d.c.x : d.c.y;
    const double t = (bound - center) / d.r;  // cos/sin threshold
    const double base = axis == 0 ? 0.0 : 1.5707963267948966;
    constexpr double two_pi = 6.283185307179586476925286766559;
    if (side > 0) {
        // violating where coordinate < bound
        if (t <= -1.0) return;  // never violates
        if (t >= 1.0) {         // whole circle violates
            add_interval(iv, 0.0, two_pi);
            return;
        }
        const double phi = std::acos(t);
        add_interval(iv, base + phi, base + two_pi - phi);
    } else {
        // violating where coordinate > bound
        if (t >= 1.0) return;
        if (t <= -1.0) {
            add_interval(iv, 0.0, two_pi);
            return;
        }
        const double phi = std::acos(t);
        add_interval(iv, base - phi, base + phi);
    }
}

}  // namespace detail

/// Exact area of (union of disks) intersected with an axis-aligned box, via
/// Green's theorem over the circular arcs and box-edge pieces that bound the
/// region. Tangential degeneracies are resolved by tolerance.
inline double disks_union_box_area(const std::vector<Disk>& disks_in, const Box& box) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    std::vector<Disk> disks;
    disks.reserve(disks_in.size());
    for (std::size_t i = 0; i < disks_in.size(); ++i) {
        const Disk& d = disks_in[i];
        if (d.r <= 0) continue;
        // Skip disks contained in another disk (ties broken by index).
        bool covered = false;
        for (std::size_t j = 0; j < disks_in.size() && !covered; ++j) {
            if (j == i || disks_in[j].r <= 0) continue;
            const double dist = euclid(d.c, disks_in[j].c);
            const double slack = disks_in[j].r - d.r - dist;
            if (slack > 1e-12 || (slack > -1e-12 && j < i)) covered = true;
        }
        if (!covered) disks.push_back(d);
    }

    double area2 = 0.0;  // twice the area

    for (std::size_t i = 0; i < disks.size(); ++i) {
        const Disk& d = disks[i];
        detail::AngIntervals bad;
        detail::add_halfplane_violation(bad, d, 0, box.lo.x, +1);
        detail::add_halfplane_violation(bad, d, 0, box.hi.x, -1);
        detail::add_halfplane_violation(bad, d, 1, box.lo.y, +1);
        detail::add_halfplane_violation(bad, d, 1, box.hi.y, -1);
        for (std::size_t j = 0; j < disks.size(); ++j) {
            if (j == i) continue;
            const Disk& e = disks[j];
            const double dist = euclid(d.c, e.c);
            if (dist >= d.r + e.r) continue;        // disjoint boundaries
            if (dist + e.r <= d.r) continue;        // e inside d, no arc coverage
            const double cosphi = (dist * dist + d.r * d.r - e.r * e.r) / (2 * dist * d.r);
            const double phi = std::acos(std::clamp(cosphi, -1.0, 1.0));
            const double beta = std::atan2(e.c.y - d.c.y, e.c.x - d.c.x);
            detail::add_interval(bad, beta - phi, beta + phi);
        }
        const auto merged = detail::merge_intervals(std::move(bad));
        // Complement of `merged` in [0, 2pi) are the contributing arcs.
        double prev = 0.0;
        auto arc = [&](double a, double b) {
            if (b <= a) return;
            // integral of (x dy - y dx) over the ccw arc
            area2 += d.c.x * d.r * (std::sin(b) - std::sin(a)) -
                     d.c.y * d.r * (std::cos(b) - std::cos(a)) + d.r * d.r * (b - a);
        };
        for (const auto& m : merged) {
            arc(prev, m.first);
            prev = std::max(prev, m.second);
        }
        arc(prev, two_pi);
    }

    // Box edges, counter-clockwise; pieces covered by the union contribute.
    const Point corners[5] = {{box.lo.x, box.lo.y, 0},
                              {box.hi.x, box.lo.y, 0},
                              {box.hi.x, box.hi.y, 0},
                              {box.lo.x, box.hi.y, 0},
                              {box.lo.x, box.lo.y, 0}};
    for (int e = 0; e < 4; ++e) {
        const Point A = corners[e], B = corners[e + 1];
        const Point dir = B - A;
        const double len2 = dot(dir, dir);
        if (len2 <= 0) continue;
        std::vector<std::pair<double, double>> cov;
        for (const auto& d : disks) {
            // |A + t dir - c|^2 < r^2  ->  quadratic in t
            const Point f = A - d.c;
            const double a = len2, b = 2 * dot(f, dir), c = dot(f, f) - d.r * d.r;
            const double disc = b * b - 4 * a * c;
            if (disc <= 0) continue;
            const double sq = std::sqrt(disc);
            const double t0 = std::max(0.0, (-b - sq) / (2 * a));
            const double t1 = std::min(1.0, (-b + sq) / (2 * a));
            if (t1 > t0) cov.emplace_back(t0, t1);
        }
        std::sort(cov.begin(), cov.end());
        double cur_lo = 0.0, cur_hi = -1.0;
        auto flush = [&]() {
            if (cur_hi <= cur_lo) return;
            const Point p = A + cur_lo * dir;
            const Point q = A + cur_hi * dir;
            area2 += p.x * q.y - p.y * q.x;
        };
        for (const auto& [lo, hi] : cov) {
            if (lo > cur_hi) {
                flush();
                cur_lo = lo;
                cur_hi = hi;
            } else {
                cur_hi = std::max(cur_hi, hi);
            }
        }
        flush();
    }

    return std::max(0.0, area2 / 2.0);
}

/// Area of a single disk clipped to a box.
inline double disk_box_area(const Disk& d, const Box& box) {
    return disks_union_box_area({d}, box);
}

inline bool point_in_any_disk(const std::vector<Disk>& disks, Point p, double tol = 0.0) {
    for (const auto& d : disks) {
        const double dx = p.x - d.c.x, dy = p.y - d.c.y;
        if (dx * dx + dy * dy <= (d.r + tol) * (d.r + tol)) return true;
    }
    return false;
}

}  // namespace coxsinr
