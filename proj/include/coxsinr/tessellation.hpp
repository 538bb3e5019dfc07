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
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coxsinr/diskgeom.hpp"
#include "coxsinr/geometry.hpp"
#include "coxsinr/random.hpp"

namespace coxsinr {

/// Planar Delaunay triangulation (d = 2). Circumcircles are cached per
/// triangle; the empty-circumcircle property holds up to 1e-12 relative.
struct Triangulation {
    std::vector<Point> sites;  // as triangulated (jittered when degeneracies hit)
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::pair<int, int>> edges;  // deduplicated, first < second
    std::vector<Point> circumcenters;        // per triangle
    bool jitter_applied = false;
};

/// Edge segments clipped to a region, with their total length.
struct SegmentSet {
    std::vector<Segment> segments;
    double total_length = 0.0;

    void add(const Segment& s) {
        const double len = s.length();
        if (len <= 1e-12) return;
        segments.push_back(s);
        total_length += len;
    }
};

namespace detail {

struct Circum {
    Point c;
    double r2 = 0.0;
    bool degenerate = false;
};

inline Circum circumcircle(Point a, Point b, Point c) {
    const double bx = b.x - a.x, by = b.y - a.y;
    const double cx = c.x - a.x, cy = c.y - a.y;
    const double d = 2.0 * (bx * cy - by * cx);
    Circum out;
    const double scale = (bx * bx + by * by) + (cx * cx + cy * cy);
    if (std::fabs(d) <= 1e-14 * scale) {
        out.degenerate = true;
        out.r2 = std::numeric_limits<double>::infinity();
        return out;
    }
    const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
    const double ux = (cy * b2 - by * c2) / d;
    const double uy = (bx * c2 - cx * b2) / d;
    out.c = {a.x + ux, a.y + uy, 0.0};
    out.r2 = ux * ux + uy * uy;
    return out;
}

struct BwTriangle {
    int v[3];
    Point cc;
    double r2;
    bool alive = true;
};

struct BwResult {
    std::vector<BwTriangle> tris;
    bool degenerate_hit = false;
};

inline BwResult bowyer_watson(const std::vector<Point>& pts) {
    BwResult res;
    const std::size_t n = pts.size();
    double lox = pts[0].x, hix = pts[0].x, loy = pts[0].y, hiy = pts[0].y;
    for (const auto& p : pts) {
        lox = std::min(lox, p.x);
        hix = std::max(hix, p.x);
        loy = std::min(loy, p.y);
        hiy = std::max(hiy, p.y);
    }
    const double span = std::max({hix - lox, hiy - loy, 1e-9});
    const double cx = (lox + hix) / 2, cy = (loy + hiy) / 2;
    std::vector<Point> all(pts);
    const double m = 64.0 * span;
    all.push_back({cx - 2 * m, cy - m, 0});
    all.push_back({cx + 2 * m, cy - m, 0});
    all.push_back({cx, cy + 2 * m, 0});

    auto make_tri = [&](int a, int b, int c) {
        BwTriangle t;
        // enforce ccw orientation
        if (cross2(all[b] - all[a], all[c] - all[a]) < 0) std::swap(b, c);
        t.v[0] = a;
        t.v[1] = b;
        t.v[2] = c;
        const Circum cc = circumcircle(all[a], all[b], all[c]);
        if (cc.degenerate) res.degenerate_hit = true;
        t.cc = cc.c;
        t.r2 = cc.r2;
        return t;
    };
    res.tris.push_back(make_tri(static_cast<int>(n), static_cast<int>(n) + 1,
                                static_cast<int>(n) + 2));

    std::vector<std::size_t> bad;
    std::map<std::pair<int, int>, int> edge_count;
    for (std::size_t ip = 0; ip < n; ++ip) {
        const Point p = pts[ip];
        bad.clear();
        edge_count.clear();
        for (std::size_t t = 0; t < res.tris.size(); ++t) {
            if (!res.tris[t].alive) continue;
            const double dx = p.x - res.tris[t].cc.x, dy = p.y - res.tris[t].cc.y;
            const double d2 = dx * dx + dy * dy;
            if (std::fabs(d2 - res.tris[t].r2) <= 1e-12 * (d2 + res.tris[t].r2))
                res.degenerate_hit = true;
            if (d2 < res.tris[t].r2) bad.push_back(t);
        }
        for (std::size_t t : bad) {
            const auto& v = res.tris[t].v;
            for (int e = 0; e < 3; ++e) {
                int a = v[e], b = v[(e + 1) % 3];
                if (a > b) std::swap(a, b);
                ++edge_count[{a, b}];
            }
            res.tris[t].alive = false;
        }
        for (const auto& [edge, cnt] : edge_count) {
            if (cnt != 1) continue;  // interior cavity edge
            res.tris.push_back(make_tri(edge.first, edge.second, static_cast<int>(ip)));
        }
    }
    return res;
}

}  // namespace detail

/// Incremental Bowyer-Watson triangulation. Cocircular or collinear
/// degeneracies are broken by a deterministic seed-derived jitter of
/// magnitude 1e-9 * site span; Poisson inputs are almost surely in general
/// position, so the jitter only guards file-loaded inputs.
inline Triangulation delaunay(const std::vector<Point>& sites_in,
                              const SeedPath& jitter_seed = SeedPath::root(0)) {
    if (sites_in.size() < 3) throw std::invalid_argument("delaunay: need at least 3 sites");
    Triangulation out;
    out.sites = sites_in;

    double lox = sites_in[0].x, hix = sites_in[0].x;
    double loy = sites_in[0].y, hiy = sites_in[0].y;
    for (const auto& p : sites_in) {
        lox = std::min(lox, p.x);
        hix = std::max(hix, p.x);
        loy = std::min(loy, p.y);
        hiy = std::max(hiy, p.y);
    }
    const double span = std::max(hix - lox, hiy - loy);

    detail::BwResult bw;
    for (int attempt = 0; attempt < 3; ++attempt) {
        bw = detail::bowyer_watson(out.sites);
        if (!bw.degenerate_hit) break;
        if (attempt == 2) break;  // keep the last jittered result
        Rng rng(jitter_seed.child("jitter", static_cast<std::uint64_t>(attempt)));
        const double mag = 1e-9 * span * std::pow(10.0, attempt);
        out.sites = sites_in;
        for (auto& p : out.sites) {
            p.x += rng.uniform(-mag, mag);
            p.y += rng.uniform(-mag, mag);
        }
        out.jitter_applied = true;
    }

    const int n = static_cast<int>(sites_in.size());
    std::map<std::pair<int, int>, int> seen;
    for (const auto& t : bw.tris) {
        if (!t.alive) continue;
        if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;  // touches super-triangle
        out.triangles.push_back({t.v[0], t.v[1], t.v[2]});
        out.circumcenters.push_back(t.cc);
        for (int e = 0; e < 3; ++e) {
            int a = t.v[e], b = t.v[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            if (seen.emplace(std::make_pair(a, b), 1).second) out.edges.emplace_back(a, b);
        }
    }
    if (out.triangles.empty())
        throw std::invalid_argument("delaunay: degenerate input (collinear sites)");
    return out;
}

/// A Voronoi edge with the pair of sites it separates.
struct VoronoiEdge {
    Segment seg;
    int site_a = -1, site_b = -1;
    bool interior = false;  // dual to a Delaunay edge shared by two triangles
};

/// Voronoi edges as circumcenter-to-circumcenter segments of adjacent
/// triangles; unbounded cells contribute rays clipped to the region box.
inline std::vector<VoronoiEdge> voronoi_edges_detailed(const Triangulation& tri,
                                                       const Box& region) {
    std::map<std::pair<int, int>, std::vector<int>> by_edge;
    for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
        const auto& v = tri.triangles[t];
        for (int e = 0; e < 3; ++e) {
            int a = v[e], b = v[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            by_edge[{a, b}].push_back(static_cast<int>(t));
        }
    }
    const double diag = euclid(region.lo, region.hi);
    std::vector<VoronoiEdge> out;
    for (const auto& [edge, ts] : by_edge) {
        const Point u = tri.sites[edge.first], v = tri.sites[edge.second];
        VoronoiEdge ve;
        ve.site_a = edge.first;
        ve.site_b = edge.second;
        if (ts.size() == 2) {
            ve.interior = true;
            Segment s{tri.circumcenters[ts[0]], tri.circumcenters[ts[1]]};
            if (auto c = clip_segment(s, region)) {
                ve.seg = *c;
                if (ve.seg.length() > 1e-12) out.push_back(ve);
            }
        } else if (ts.size() == 1) {
            // hull edge: ray outward, away from the opposite vertex
            const auto& tv = tri.triangles[ts[0]];
            Point w{};
            for (int k = 0; k < 3; ++k)
                if (tv[k] != edge.first && tv[k] != edge.second) w = tri.sites[tv[k]];
            const Point mid = 0.5 * (u + v);
            Point nrm{-(v.y - u.y), v.x - u.x, 0.0};
            const double nl = norm(nrm);
            if (nl <= 0) continue;
            nrm = (1.0 / nl) * nrm;
            if (dot(nrm, mid - w) < 0) nrm = -1.0 * nrm;
            const Point cc = tri.circumcenters[ts[0]];
            const double reach = 4.0 * diag + euclid(cc, mid);
            Segment s{cc, cc + reach * nrm};
            if (auto c = clip_segment(s, region)) {
                ve.seg = *c;
                if (ve.seg.length() > 1e-12) out.push_back(ve);
            }
        }
    }
    return out;
}

inline SegmentSet voronoi_edges(const Triangulation& tri, const Box& region) {
    SegmentSet out;
    for (const auto& ve : voronoi_edges_detailed(tri, region)) out.add(ve.seg);
    return out;
}

/// Voronoi edge set straight from sites; two sites yield the clipped
/// perpendicular bisector, three or more go through the triangulation.
inline SegmentSet voronoi_of_sites(const std::vector<Point>& sites, const Box& region,
                                   const SeedPath& seed = SeedPath::root(0)) {
    if (sites.size() < 2) throw std::invalid_argument("voronoi_of_sites: need at least 2 sites");
    if (sites.size() == 2) {
        const Point mid = 0.5 * (sites[0] + sites[1]);
        Point dir{-(sites[1].y - sites[0].y), sites[1].x - sites[0].x, 0.0};
        const double nl = norm(dir);
        if (nl <= 0) throw std::invalid_argument("voronoi_of_sites: coincident sites");
        dir = (1.0 / nl) * dir;
        const double reach = 4.0 * euclid(region.lo, region.hi);
        SegmentSet out;
        if (auto c = clip_segment({mid - reach * dir, mid + reach * dir}, region)) out.add(*c);
        return out;
    }
    return voronoi_edges(delaunay(sites, seed), region);
}

/// Triangulation edges clipped to the region box.
inline SegmentSet delaunay_edges(const Triangulation& tri, const Box& region) {
    SegmentSet out;
    for (const auto& [a, b] : tri.edges) {
        Segment s{tri.sites[a], tri.sites[b]};
        if (auto c = clip_segment(s, region)) out.add(*c);
    }
    return out;
}

}  // namespace coxsinr
