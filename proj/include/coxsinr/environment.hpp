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
#include <functional>
#include <stdexcept>
#include <vector>

#include "coxsinr/components.hpp"
#include "coxsinr/diskgeom.hpp"
#include "coxsinr/geometry.hpp"
#include "coxsinr/intensity.hpp"
#include "coxsinr/pattern.hpp"
#include "coxsinr/random.hpp"
#include "coxsinr/tessellation.hpp"

namespace coxsinr {

/// One sampled realization of the random measure: germs, grain centers or a
/// clipped segment set, enough to evaluate L(B) for boxes in the sampled
/// region. Immutable after sampling.
struct Environment {
    IntensityModel model;
    Window window;
    SeedPath seed;
    std::vector<Point> germs;  // shot-noise germs / modulated grain centers / tessellation sites
    SegmentSet segments;       // tessellation edges, clipped to the sample region

    Box region() const { return window.sample_box(); }

    /// Density of the absolutely continuous variants at a point
    /// (minimum-image in periodic windows).
    double density_at(Point p) const {
        switch (model.kind) {
            case IntensityKind::Homogeneous: return model.density;
            case IntensityKind::ShotNoise: {
                const double r2 = model.kernel_radius * model.kernel_radius;
                double v = 0.0;
                for (const auto& g : germs)
                    if (pair_distance_sq(p, g, window) < r2) v += model.amplitude;
                return v;
            }
            case IntensityKind::Modulated: {
                const double r2 = model.xi.grain_radius * model.xi.grain_radius;
                for (const auto& g : germs)
                    if (pair_distance_sq(p, g, window) <= r2) return model.lambda1;
                return model.lambda2;
            }
            default:
                throw std::invalid_argument("density_at: singular measure has no density");
        }
    }

    /// An upper bound on the density, for thinning samplers.
    double sup_density() const {
        switch (model.kind) {
            case IntensityKind::Homogeneous: return model.density;
            case IntensityKind::Modulated: return std::max(model.lambda1, model.lambda2);
            case IntensityKind::ShotNoise: {
                // Germs covering a common point are pairwise within 2R of each
                // other, so the max coverage count is bounded by the densest
                // 2R-ball around a germ.
                if (germs.empty()) return 0.0;
                const double r2 = 4.0 * model.kernel_radius * model.kernel_radius;
                std::size_t best = 1;
                for (std::size_t i = 0; i < germs.size(); ++i) {
                    std::size_t c = 0;
                    for (std::size_t j = 0; j < germs.size(); ++j)
                        if (pair_distance_sq(germs[i], germs[j], window) <= r2) ++c;
                    best = std::max(best, c);
                }
                return model.amplitude * static_cast<double>(best);
            }
            default:
                throw std::invalid_argument("sup_density: singular measure has no density");
        }
    }
};

namespace detail {

inline Point uniform_in_box(Rng& rng, const Box& b, int dim) {
    Point p;
    p.x = rng.uniform(b.lo.x, b.hi.x);
    p.y = rng.uniform(b.lo.y, b.hi.y);
    p.z = dim == 3 ? rng.uniform(b.lo.z, b.hi.z) : 0.0;
    return p;
}

inline Point uniform_in_ball(Rng& rng, double r, int dim) {
    for (;;) {
        Point p{rng.uniform(-r, r), rng.uniform(-r, r), dim == 3 ? rng.uniform(-r, r) : 0.0};
        if (dot(p, p) <= r * r) return p;
    }
}

inline Point wrap_into(Point p, const Window& w) {
    auto wrap1 = [](double v, double lo, double ext) {
        v = std::fmod(v - lo, ext);
        if (v < 0) v += ext;
        return lo + v;
    };
    p.x = wrap1(p.x, w.lower.x, w.extent(0));
    p.y = wrap1(p.y, w.lower.y, w.extent(1));
    if (w.dim == 3) p.z = wrap1(p.z, w.lower.z, w.extent(2));
    return p;
}

/// Translates of c that may matter for queries near periodic boundaries.
inline std::vector<Point> periodic_images(Point c, const Window& w) {
    std::vector<Point> out;
    const int zr = w.dim == 3 ? 1 : 0;
    for (int ix = -1; ix <= 1; ++ix)
        for (int iy = -1; iy <= 1; ++iy)
            for (int iz = -zr; iz <= zr; ++iz)
                out.push_back({c.x + ix * w.extent(0), c.y + iy * w.extent(1),
                               c.z + iz * w.extent(2)});
    return out;
}

/// Germ centers (with images in periodic mode) whose radius-r ball can touch B.
inline std::vector<Point> effective_centers(const std::vector<Point>& germs, const Window& w,
                                            const Box& B, double r) {
    std::vector<Point> out;
    auto touches = [&](Point c) {
        const double dx = std::max({B.lo.x - c.x, 0.0, c.x - B.hi.x});
        const double dy = std::max({B.lo.y - c.y, 0.0, c.y - B.hi.y});
        const double dz = w.dim == 3 ? std::max({B.lo.z - c.z, 0.0, c.z - B.hi.z}) : 0.0;
        return dx * dx + dy * dy + dz * dz <= r * r;
    };
    for (const auto& g : germs) {
        if (w.boundary == Boundary::Periodic) {
            for (const auto& im : periodic_images(g, w))
                if (touches(im)) out.push_back(im);
        } else if (touches(g)) {
            out.push_back(g);
        }
    }
    return out;
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double tol, int depth) {
    const double m = (a + b) / 2;
    const double lm = (a + m) / 2, rm = (m + b) / 2;
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15 * tol)
        return left + right + (left + right - whole) / 15;
    return adaptive_simpson(f, a, m, fa, flm, fm, tol / 2, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, tol / 2, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    const double fa = f(a), fb = f(b), fm = f((a + b) / 2);
    return adaptive_simpson(f, a, b, fa, fm, fb, tol, 28);
}

}  // namespace detail

/// Draws a realization of the random measure on window + guard,
/// deterministically in the seed path.
inline Environment sample_environment(const IntensityModel& model, const Window& w,
                                      const SeedPath& seed) {
    Environment env;
    env.model = model;
    env.window = w;
    env.seed = seed;
    const Box region = w.sample_box();
    const double vol = region.volume(w.dim);
    Rng rng(seed.child("env", 0));

    switch (model.kind) {
        case IntensityKind::Homogeneous: break;
        case IntensityKind::ShotNoise: {
            const long n = rng.poisson(model.lambda_s * vol);
            env.germs.reserve(n);
            for (long i = 0; i < n; ++i) env.germs.push_back(detail::uniform_in_box(rng, region, w.dim));
            break;
        }
        case IntensityKind::Modulated: {
            const long n = rng.poisson(model.xi.germ_intensity * vol);
            env.germs.reserve(n);
            for (long i = 0; i < n; ++i) env.germs.push_back(detail::uniform_in_box(rng, region, w.dim));
            break;
        }
        case IntensityKind::VoronoiEdges:
        case IntensityKind::DelaunayEdges: {
            if (w.dim != 2)
                throw std::invalid_argument("sample_environment: tessellations need d = 2");
            const bool periodic = w.boundary == Boundary::Periodic;
            if (periodic && model.lambda_s * vol < 20.0)
                throw std::invalid_argument(
                    "sample_environment: periodic tessellation needs >= 20 expected sites");
            const long n = rng.poisson(model.lambda_s * vol);
            if (n < 3)
                throw std::runtime_error("sample_environment: too few tessellation sites drawn");
            std::vector<Point> sites;
            sites.reserve(n);
            for (long i = 0; i < n; ++i) sites.push_back(detail::uniform_in_box(rng, region, w.dim));
            env.germs = sites;
            std::vector<Point> work = sites;
            if (periodic) {
                // 3x3 replication yields the torus tessellation inside the window
                work.clear();
                for (int ix = -1; ix <= 1; ++ix)
                    for (int iy = -1; iy <= 1; ++iy)
                        for (const auto& s : sites)
                            work.push_back({s.x + ix * w.extent(0), s.y + iy * w.extent(1), 0.0});
            }
            const Triangulation tri = delaunay(work, seed.child("tess", 0));
            env.segments = model.kind == IntensityKind::VoronoiEdges
                               ? voronoi_edges(tri, region)
                               : delaunay_edges(tri, region);
            break;
        }
    }
    return env;
}

/// L(B) for an axis-aligned box inside the sampled region. Exact for d = 2
/// (piecewise-analytic disk/segment geometry); slice quadrature for d = 3.
inline double measure_box(const Environment& env, const Box& B) {
    const Box region = env.region();
    if (!region.contains(B.lo, 1e-9) || !region.contains(B.hi, 1e-9))
        throw std::invalid_argument("measure_box: box escapes the sampled region");
    const IntensityModel& m = env.model;
    const int dim = env.window.dim;

    switch (m.kind) {
        case IntensityKind::Homogeneous: return m.density * B.volume(dim);
        case IntensityKind::ShotNoise: {
            const auto centers =
                detail::effective_centers(env.germs, env.window, B, m.kernel_radius);
            double mass = 0.0;
            if (dim == 2) {
                for (const auto& c : centers)
                    mass += disk_box_area({c, m.kernel_radius}, B);
            } else {
                const Box slice{{B.lo.x, B.lo.y, 0}, {B.hi.x, B.hi.y, 0}};
                for (const auto& c : centers) {
                    const double z0 = std::max(B.lo.z, c.z - m.kernel_radius);
                    const double z1 = std::min(B.hi.z, c.z + m.kernel_radius);
                    mass += detail::integrate(
                        [&](double z) {
                            const double dz = z - c.z;
                            const double rr = m.kernel_radius * m.kernel_radius - dz * dz;
                            if (rr <= 0) return 0.0;
                            return disk_box_area({{c.x, c.y, 0}, std::sqrt(rr)}, slice);
                        },
                        z0, z1, 1e-10 * std::max(1.0, ball_volume(3, m.kernel_radius)));
                }
            }
            return m.amplitude * mass;
        }
        case IntensityKind::Modulated: {
            const auto centers =
                detail::effective_centers(env.germs, env.window, B, m.xi.grain_radius);
            double covered = 0.0;
            if (dim == 2) {
                std::vector<Disk> disks;
                disks.reserve(centers.size());
                for (const auto& c : centers) disks.push_back({c, m.xi.grain_radius});
                covered = disks_union_box_area(disks, B);
            } else {
                const Box slice{{B.lo.x, B.lo.y, 0}, {B.hi.x, B.hi.y, 0}};
                covered = detail::integrate(
                    [&](double z) {
                        std::vector<Disk> disks;
                        for (const auto& c : centers) {
                            const double dz = z - c.z;
                            const double rr = m.xi.grain_radius * m.xi.grain_radius - dz * dz;
                            if (rr > 0) disks.push_back({{c.x, c.y, 0}, std::sqrt(rr)});
                        }
                        return disks_union_box_area(disks, slice);
                    },
                    B.lo.z, B.hi.z, 1e-10 * std::max(1.0, B.volume(3)));
            }
            return m.lambda1 * covered + m.lambda2 * (B.volume(dim) - covered);
        }
        case IntensityKind::VoronoiEdges:
        case IntensityKind::DelaunayEdges: {
            double len = 0.0;
            for (const auto& s : env.segments.segments)
                if (auto c = clip_segment(s, B)) len += c->length();
            return m.tess_norm * len;
        }
    }
    return 0.0;
}

/// Conditional Poisson sample of the Cox process given the realization.
/// Homogeneous/modulated variants thin a dominating homogeneous process;
/// shot-noise uses the exact cluster representation; tessellations place a
/// Poisson number of points uniformly by length.
inline PointPattern sample_cox(const Environment& env, double lambda, const SeedPath& seed) {
    if (!(lambda > 0)) throw std::invalid_argument("sample_cox: lambda must be > 0");
    const Window& w = env.window;
    const Box region = w.sample_box();
    const double vol = region.volume(w.dim);
    Rng rng(seed.child("cox", 0));
    std::vector<Point> pts;

    switch (env.model.kind) {
        case IntensityKind::Homogeneous: {
            const long n = rng.poisson(lambda * env.model.density * vol);
            pts.reserve(n);
            for (long i = 0; i < n; ++i) pts.push_back(detail::uniform_in_box(rng, region, w.dim));
            break;
        }
        case IntensityKind::Modulated: {
            const double sup = env.sup_density();
            const long n = rng.poisson(lambda * sup * vol);
            pts.reserve(n / 2 + 1);
            for (long i = 0; i < n; ++i) {
                const Point p = detail::uniform_in_box(rng, region, w.dim);
                if (rng.uniform() * sup < env.density_at(p)) pts.push_back(p);
            }
            break;
        }
        case IntensityKind::ShotNoise: {
            const double per_germ =
                lambda * env.model.amplitude * ball_volume(w.dim, env.model.kernel_radius);
            for (const auto& g : env.germs) {
                const long k = rng.poisson(per_germ);
                for (long i = 0; i < k; ++i) {
                    Point p = g + detail::uniform_in_ball(rng, env.model.kernel_radius, w.dim);
                    if (w.boundary == Boundary::Periodic) {
                        pts.push_back(detail::wrap_into(p, w));
                    } else if (region.contains(p)) {
                        pts.push_back(p);
                    }
                }
            }
            break;
        }
        case IntensityKind::VoronoiEdges:
        case IntensityKind::DelaunayEdges: {
            const auto& segs = env.segments.segments;
            std::vector<double> cum(segs.size() + 1, 0.0);
            for (std::size_t i = 0; i < segs.size(); ++i)
                cum[i + 1] = cum[i] + segs[i].length();
            const double total = cum.back();
            const long n = rng.poisson(lambda * env.model.tess_norm * total);
            pts.reserve(n);
            for (long i = 0; i < n; ++i) {
                const double u = rng.uniform() * total;
                const auto it = std::upper_bound(cum.begin(), cum.end(), u);
                const std::size_t k =
                    std::min(segs.size() - 1,
                             static_cast<std::size_t>(std::distance(cum.begin(), it)) - 1);
                const double t = (u - cum[k]) / std::max(cum[k + 1] - cum[k], 1e-300);
                pts.push_back(segs[k].a + t * (segs[k].b - segs[k].a));
            }
            break;
        }
    }
    return make_pattern(std::move(pts), w, lambda, seed, env.model.id());
}

/// A connected component of the support inside a box.
struct SupportComponent {
    double diameter = 0.0;
    bool touches_boundary = false;
    bool whole_box = false;
    std::vector<Disk> disks;
    std::vector<Segment> segments;

    bool contains(Point p, double tol = 1e-9) const {
        if (whole_box) return true;
        for (const auto& d : disks) {
            const double dx = p.x - d.c.x, dy = p.y - d.c.y, dz = p.z - d.c.z;
            if (dx * dx + dy * dy + dz * dz <= (d.r + tol) * (d.r + tol)) return true;
        }
        for (const auto& s : segments)
            if (dist_point_segment(p, s) <= tol) return true;
        return false;
    }
};

namespace detail {

inline double disk_component_diameter(const std::vector<Disk>& disks, const Box& B) {
    if (disks.size() == 1) {
        const Disk& d = disks[0];
        const bool inside = B.contains({d.c.x - d.r, d.c.y - d.r, 0}) &&
                            B.contains({d.c.x + d.r, d.c.y + d.r, 0});
        if (inside) return 2.0 * d.r;
    }
    std::vector<Point> cand;
    constexpr int kSamples = 32;
    for (const auto& d : disks) {
        for (int k = 0; k < kSamples; ++k) {
            const double a = 6.283185307179586 * k / kSamples;
            const Point p{d.c.x + d.r * std::cos(a), d.c.y + d.r * std::sin(a), 0};
            if (B.contains(p, 1e-12)) cand.push_back(p);
        }
        // circle / box-edge crossings are exact extreme candidates
        auto cross = [&](int axis, double bound) {
            const double cc = axis == 0 ? d.c.x : d.c.y;
            const double oc = axis == 0 ? d.c.y : d.c.x;
            const double t = d.r * d.r - (bound - cc) * (bound - cc);
            if (t <= 0) return;
            const double s = std::sqrt(t);
            for (double o : {oc - s, oc + s}) {
                const Point p = axis == 0 ? Point{bound, o, 0} : Point{o, bound, 0};
                if (B.contains(p, 1e-12)) cand.push_back(p);
            }
        };
        cross(0, B.lo.x);
        cross(0, B.hi.x);
        cross(1, B.lo.y);
        cross(1, B.hi.y);
    }
    // pairwise extremes along center lines (exact when unclipped)
    for (std::size_t i = 0; i < disks.size(); ++i)
        for (std::size_t j = i; j < disks.size(); ++j) {
            Point u = disks[j].c - disks[i].c;
            const double n = norm(u);
            if (n <= 1e-15) {
                if (i != j) continue;
                u = {1, 0, 0};
            } else {
                u = (1.0 / n) * u;
            }
            const Point a = disks[i].c - disks[i].r * u;
            const Point b = disks[j].c + disks[j].r * u;
            if (B.contains(a, 1e-12)) cand.push_back(a);
            if (B.contains(b, 1e-12)) cand.push_back(b);
        }
    double best = 0.0;
    for (std::size_t i = 0; i < cand.size(); ++i)
        for (std::size_t j = i + 1; j < cand.size(); ++j)
            best = std::max(best, euclid(cand[i], cand[j]));
    return best;
}

}  // namespace detail

/// Connected components of the support primitives (pairwise-overlap closure),
/// clipped to B for diameter measurement. Components of diameter below
/// `min_diameter` are dropped.
inline std::vector<SupportComponent> support_components(const Environment& env, const Box& B,
                                                        double min_diameter) {
    const IntensityModel& m = env.model;
    std::vector<SupportComponent> out;

    auto whole = [&]() {
        SupportComponent c;
        c.whole_box = true;
        c.touches_boundary = true;
        c.diameter = euclid(B.lo, B.hi);
        if (c.diameter >= min_diameter) out.push_back(c);
        return out;
    };

    if (m.kind == IntensityKind::Homogeneous) return whole();
    if (m.kind == IntensityKind::Modulated && m.lambda1 > 0 && m.lambda2 > 0) return whole();

    if (m.kind == IntensityKind::ShotNoise ||
        (m.kind == IntensityKind::Modulated && m.lambda2 == 0)) {
        const double r = m.kind == IntensityKind::ShotNoise ? m.kernel_radius : m.xi.grain_radius;
        const auto centers = detail::effective_centers(env.germs, env.window, B, r);
        std::vector<std::pair<std::uint32_t, std::uint32_t>> overlap;
        for (std::uint32_t i = 0; i < centers.size(); ++i)
            for (std::uint32_t j = i + 1; j < centers.size(); ++j)
                if (euclid(centers[i], centers[j]) <= 2 * r) overlap.emplace_back(i, j);
        const auto lab = components(centers.size(), overlap);
        std::vector<SupportComponent> comps(lab.sizes.size());
        for (std::uint32_t i = 0; i < centers.size(); ++i)
            comps[lab.label[i]].disks.push_back({centers[i], r});
        for (auto& c : comps) {
            c.diameter = detail::disk_component_diameter(c.disks, B);
            for (const auto& d : c.disks) {
                const bool inside = B.contains({d.c.x - d.r, d.c.y - d.r, d.c.z}) &&
                                    B.contains({d.c.x + d.r, d.c.y + d.r, d.c.z});
                if (!inside) c.touches_boundary = true;
            }
            if (c.diameter >= min_diameter) out.push_back(std::move(c));
        }
        return out;
    }
    if (m.kind == IntensityKind::Modulated)
        throw std::invalid_argument(
            "support_components: complement-supported modulated model (lambda1 = 0) is not representable");

    // tessellations: clipped segments, connected when they intersect or touch
    std::vector<Segment> clipped;
    for (const auto& s : env.segments.segments)
        if (auto c = clip_segment(s, B)) {
            if (c->length() > 1e-12) clipped.push_back(*c);
        }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> touch;
    for (std::uint32_t i = 0; i < clipped.size(); ++i)
        for (std::uint32_t j = i + 1; j < clipped.size(); ++j)
            if (segments_intersect(clipped[i], clipped[j], 1e-9)) touch.emplace_back(i, j);
    const auto lab = components(clipped.size(), touch);
    std::vector<SupportComponent> comps(lab.sizes.size());
    for (std::uint32_t i = 0; i < clipped.size(); ++i)
        comps[lab.label[i]].segments.push_back(clipped[i]);
    for (auto& c : comps) {
        double best = 0.0;
        for (std::size_t i = 0; i < c.segments.size(); ++i)
            for (std::size_t j = i; j < c.segments.size(); ++j)
                for (Point p : {c.segments[i].a, c.segments[i].b})
                    for (Point q : {c.segments[j].a, c.segments[j].b})
                        best = std::max(best, euclid(p, q));
        c.diameter = best;
        for (const auto& s : c.segments)
            for (Point p : {s.a, s.b})
                if (std::fabs(p.x - B.lo.x) < 1e-9 || std::fabs(p.x - B.hi.x) < 1e-9 ||
                    std::fabs(p.y - B.lo.y) < 1e-9 || std::fabs(p.y - B.hi.y) < 1e-9)
                    c.touches_boundary = true;
        if (c.diameter >= min_diameter) out.push_back(std::move(c));
    }
    return out;
}

}  // namespace coxsinr
