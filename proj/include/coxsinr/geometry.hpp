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

#include <array>
#include <cmath>
#include <stdexcept>

namespace coxsinr {

/// A point in R^2 or R^3; z stays 0 in two dimensions so the distance
/// formulas below work unchanged for both.
struct Point {
    double x = 0.0, y = 0.0, z = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y, s * p.z}; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Point p) { return std::sqrt(dot(p, p)); }
inline double cross2(Point a, Point b) { return a.x * b.y - a.y * b.x; }

/// Axis-aligned box, used for measure evaluation and block geometry.
struct Box {
    Point lo, hi;

    bool contains(Point p, double tol = 0.0) const {
        return p.x >= lo.x - tol && p.x <= hi.x + tol && p.y >= lo.y - tol &&
               p.y <= hi.y + tol && p.z >= lo.z - tol && p.z <= hi.z + tol;
    }
    double volume(int dim) const {
        double v = (hi.x - lo.x) * (hi.y - lo.y);
        if (dim == 3) v *= (hi.z - lo.z);
        return v;
    }
};

/// Cube Q_r(x) = x + [-r/2, r/2]^d.
inline Box centered_cube(Point x, double r, int dim) {
    Box b;
    b.lo = {x.x - r / 2, x.y - r / 2, dim == 3 ? x.z - r / 2 : 0.0};
    b.hi = {x.x + r / 2, x.y + r / 2, dim == 3 ? x.z + r / 2 : 0.0};
    return b;
}

enum class Boundary { Hard, Periodic };

/// Simulation region. `guard` is an extra margin sampled around the reporting
/// region in Hard mode to mitigate edge effects; Periodic windows wrap and
/// take no guard.
struct Window {
    int dim = 2;
    Point lower, upper;
    Boundary boundary = Boundary::Periodic;
    double guard = 0.0;

    Window() = default;
    Window(int d, Point lo, Point hi, Boundary b, double g = 0.0)
        : dim(d), lower(lo), upper(hi), boundary(b), guard(g) {
        if (d != 2 && d != 3) throw std::invalid_argument("window: dim must be 2 or 3");
        if (!(hi.x > lo.x) || !(hi.y > lo.y) || (d == 3 && !(hi.z > lo.z)))
            throw std::invalid_argument("window: upper must exceed lower in every axis");
        if (g < 0.0) throw std::invalid_argument("window: guard must be >= 0");
        if (b == Boundary::Periodic && g != 0.0)
            throw std::invalid_argument("window: periodic windows take guard 0");
        if (d == 2) {
            lower.z = 0.0;
            upper.z = 0.0;
        }
    }

    static Window rect(double w, double h, Boundary b, double g = 0.0) {
        return Window(2, {0, 0, 0}, {w, h, 0}, b, g);
    }

    double extent(int axis) const {
        switch (axis) {
            case 0: return upper.x - lower.x;
            case 1: return upper.y - lower.y;
            default: return dim == 3 ? upper.z - lower.z : 0.0;
        }
    }

    double volume() const {
        double v = extent(0) * extent(1);
        if (dim == 3) v *= extent(2);
        return v;
    }

    /// Reporting region as a box.
    Box box() const { return {lower, upper}; }

    /// Reporting region grown by the guard margin; equals box() when periodic.
    Box sample_box() const {
        Box b = box();
        b.lo.x -= guard;
        b.lo.y -= guard;
        b.hi.x += guard;
        b.hi.y += guard;
        if (dim == 3) {
            b.lo.z -= guard;
            b.hi.z += guard;
        }
        return b;
    }

    bool contains(Point p, double tol = 1e-9) const { return sample_box().contains(p, tol); }
};

inline double periodic_delta(double d, double extent) {
    d = std::fabs(d);
    d -= extent * std::floor(d / extent);
    return d > extent / 2 ? extent - d : d;
}

inline double pair_distance_sq(Point a, Point b, const Window& w) {
    if (w.boundary == Boundary::Periodic) {
        const double dx = periodic_delta(a.x - b.x, w.extent(0));
        const double dy = periodic_delta(a.y - b.y, w.extent(1));
        double s = dx * dx + dy * dy;
        if (w.dim == 3) {
            const double dz = periodic_delta(a.z - b.z, w.extent(2));
            s += dz * dz;
        }
        return s;
    }
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

/// Euclidean distance in Hard mode, minimum-image distance in Periodic mode.
/// Both points must lie inside the window (guard included).
inline double pair_distance(Point a, Point b, const Window& w) {
    if (!w.contains(a) || !w.contains(b))
        throw std::invalid_argument("pair_distance: point outside window");
    return std::sqrt(pair_distance_sq(a, b, w));
}

inline double euclid(Point a, Point b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace coxsinr
