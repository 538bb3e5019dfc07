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
#include <map>
#include <stdexcept>
#include <vector>

#include "coxsinr/components.hpp"
#include "coxsinr/environment.hpp"
#include "coxsinr/graphs.hpp"

namespace coxsinr {

struct ClusterStats {
    double largest_fraction = 0.0;
    std::size_t component_count = 0;
    std::vector<std::pair<std::size_t, std::size_t>> size_histogram;  // (size, count)
};

/// Finite-window percolation proxy: largest-component fraction plus the
/// component size histogram.
inline ClusterStats largest_cluster_stats(const SpatialGraph& g) {
    ClusterStats out;
    if (g.n == 0) return out;
    const auto lab = components(g.n, g.edge_list());
    out.component_count = lab.sizes.size();
    std::map<std::size_t, std::size_t> hist;
    std::size_t best = 0;
    for (std::size_t s : lab.sizes) {
        best = std::max(best, s);
        ++hist[s];
    }
    out.largest_fraction = static_cast<double>(best) / static_cast<double>(g.n);
    out.size_histogram.assign(hist.begin(), hist.end());
    return out;
}

/// Rectangle-crossing event: alpha*n x n rectangle, crossed in the hard
/// (long) or easy (short) direction by the Gilbert graph at radius r.
struct CrossingSpec {
    Point anchor;        // lower corner; long axis along x
    double n = 1.0;      // short side
    double alpha = 3.0;  // long side = alpha * n
    bool hard = true;    // connect the two short sides (span the long axis)
    double r = 1.0;

    Box rect() const {
        if (!(alpha >= 1.0) || !(n > 0) || !(r > 0))
            throw std::invalid_argument("crossing: need alpha >= 1, n > 0, r > 0");
        return {anchor, {anchor.x + alpha * n, anchor.y + n, 0.0}};
    }
};

/// True when a component of gilbert(p, r) restricted to the rectangle has a
/// point within r/2 of each target side. Distances inside the rectangle are
/// Euclidean; the rectangle is a genuine subregion with real sides.
inline bool crossing(const PointPattern& p, const CrossingSpec& spec) {
    const Box rect = spec.rect();
    const Box region = p.window.sample_box();
    if (!region.contains(rect.lo, 1e-9) || !region.contains(rect.hi, 1e-9))
        throw std::invalid_argument("crossing: rectangle outside window");

    std::vector<Point> local;
    for (const auto& q : p.pts)
        if (rect.contains(q)) local.push_back(q);
    if (local.empty()) return false;

    const Window sub(2, rect.lo, rect.hi, Boundary::Hard, 0.0);
    const double side = std::max(
        spec.r, std::sqrt(rect.volume(2) / static_cast<double>(std::max<std::size_t>(local.size(), 1))));
    const CellGrid grid(sub, side, local);
    DisjointSets ds(local.size());
    const double r2 = spec.r * spec.r;
    for (std::uint32_t i = 0; i < local.size(); ++i)
        grid.for_each_candidate(local[i], spec.r, [&](std::uint32_t j) {
            if (j <= i) return;
            const double dx = local[i].x - local[j].x, dy = local[i].y - local[j].y;
            if (dx * dx + dy * dy < r2) ds.unite(i, j);
        });

    const double half = spec.r / 2.0;
    std::vector<std::uint8_t> lo_mark(local.size(), 0), hi_mark(local.size(), 0);
    std::vector<std::uint8_t> root_lo(local.size(), 0), root_hi(local.size(), 0);
    for (std::uint32_t i = 0; i < local.size(); ++i) {
        const bool near_lo = spec.hard ? local[i].x - rect.lo.x < half : local[i].y - rect.lo.y < half;
        const bool near_hi = spec.hard ? rect.hi.x - local[i].x < half : rect.hi.y - local[i].y < half;
        const std::uint32_t r = ds.find(i);
        if (near_lo) root_lo[r] = 1;
        if (near_hi) root_hi[r] = 1;
    }
    for (std::uint32_t i = 0; i < local.size(); ++i)
        if (root_lo[i] && root_hi[i]) return true;
    return false;
}

enum class StabilizationCheck { ConstantRange, EmpiricalVoronoi, Skip };

/// Block spec for the renormalized site diagnostics.
struct GoodSiteSpec {
    double n = 1.0;  // block scale
    double r = 1.0;  // Gilbert radius, upsilon0 < r < r_B
    StabilizationCheck check = StabilizationCheck::Skip;
    double b = 0.0;  // dependence range, for ConstantRange
};

enum class NGoodReason { None, Stabilization, Occupancy, Connectivity };

struct NGoodResult {
    bool good = false;
    NGoodReason reason = NGoodReason::None;
    bool boundary_touching = false;  // some Xi component was clipped by its block

    static const char* reason_name(NGoodReason r) {
        switch (r) {
            case NGoodReason::None: return "ok";
            case NGoodReason::Stabilization: return "stabilization";
            case NGoodReason::Occupancy: return "occupancy";
            case NGoodReason::Connectivity: return "connectivity";
        }
        return "?";
    }
};

namespace detail {

inline std::vector<std::uint32_t> points_in_box(const PointPattern& p, const Box& b) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < p.size(); ++i)
        if (b.contains(p.pts[i])) out.push_back(i);
    return out;
}

}  // namespace detail

/// n-goodness of a site z: (1) the stabilization check passes, (2) the
/// pattern meets Xi_n(nz), the union of support components in Q_n(nz) of
/// diameter >= n/3, and (3) all pattern points of Xi_n(nz) and of every
/// neighbouring Xi_n(nz') are connected inside gilbert(r) on Q_{6n}(nz).
inline NGoodResult n_good(const PointPattern& p, const Environment& env, const GoodSiteSpec& spec,
                          int zx, int zy) {
    if (env.window.dim != 2) throw std::invalid_argument("n_good: d = 2 only");
    const double n = spec.n;
    const Point center{n * zx, n * zy, 0.0};
    const Box block6 = centered_cube(center, 6.0 * n, 2);
    const Box region = env.region();
    if (!region.contains(block6.lo, 1e-9) || !region.contains(block6.hi, 1e-9))
        throw std::invalid_argument("n_good: block Q_{6n}(nz) outside window");

    NGoodResult res;

    // (1) stabilization
    switch (spec.check) {
        case StabilizationCheck::Skip: break;
        case StabilizationCheck::ConstantRange:
            if (!(spec.b < n / 2.0)) {
                res.reason = NGoodReason::Stabilization;
                return res;
            }
            break;
        case StabilizationCheck::EmpiricalVoronoi: {
            if (env.germs.empty()) {
                res.reason = NGoodReason::Stabilization;
                return res;
            }
            const Box block = centered_cube(center, n, 2);
            double worst = 0.0;
            for (int ix = 0; ix < 5; ++ix)
                for (int iy = 0; iy < 5; ++iy) {
                    const Point probe{block.lo.x + (ix + 0.5) / 5.0 * (block.hi.x - block.lo.x),
                                      block.lo.y + (iy + 0.5) / 5.0 * (block.hi.y - block.lo.y), 0.0};
                    double best = std::numeric_limits<double>::infinity();
                    for (const auto& g : env.germs) best = std::min(best, euclid(probe, g));
                    worst = std::max(worst, best);
                }
            if (!(2.0 * worst < n / 2.0)) {
                res.reason = NGoodReason::Stabilization;
                return res;
            }
            break;
        }
    }

    // (2) occupancy of Xi_n for z and (later) its neighbours
    auto xi_of = [&](int ax, int ay) {
        const Box blk = centered_cube({n * ax, n * ay, 0.0}, n, 2);
        return support_components(env, blk, n / 3.0);
    };
    auto points_in_xi = [&](const std::vector<SupportComponent>& comps, const Box& blk) {
        std::vector<std::uint32_t> ids;
        for (std::uint32_t i : detail::points_in_box(p, blk)) {
            for (const auto& c : comps)
                if (c.contains(p.pts[i], 1e-9)) {
                    ids.push_back(i);
                    break;
                }
        }
        return ids;
    };

    const auto xi_z = xi_of(zx, zy);
    for (const auto& c : xi_z)
        if (c.touches_boundary && !c.whole_box) res.boundary_touching = true;
    const auto own = points_in_xi(xi_z, centered_cube(center, n, 2));
    if (own.empty()) {
        res.reason = NGoodReason::Occupancy;
        return res;
    }

    // (3) connectivity inside Q_{6n}(nz), Euclidean within the block
    const auto block_ids = detail::points_in_box(p, block6);
    std::map<std::uint32_t, std::uint32_t> local;
    for (std::uint32_t t = 0; t < block_ids.size(); ++t) local[block_ids[t]] = t;
    DisjointSets ds(block_ids.size());
    const double r2 = spec.r * spec.r;
    for (std::uint32_t a = 0; a < block_ids.size(); ++a)
        for (std::uint32_t b = a + 1; b < block_ids.size(); ++b) {
            const Point pa = p.pts[block_ids[a]], pb = p.pts[block_ids[b]];
            const double dx = pa.x - pb.x, dy = pa.y - pb.y;
            if (dx * dx + dy * dy < r2) ds.unite(a, b);
        }

    const std::uint32_t home_root = ds.find(local.at(own[0]));
    for (std::uint32_t i : own)
        if (ds.find(local.at(i)) != home_root) {
            res.reason = NGoodReason::Connectivity;
            return res;
        }
    for (int ax = zx - 1; ax <= zx + 1; ++ax)
        for (int ay = zy - 1; ay <= zy + 1; ++ay) {
            if (ax == zx && ay == zy) continue;
            const auto xi_nb = xi_of(ax, ay);
            for (const auto& c : xi_nb)
                if (c.touches_boundary && !c.whole_box) res.boundary_touching = true;
            const auto other = points_in_xi(xi_nb, centered_cube({n * ax, n * ay, 0.0}, n, 2));
            for (std::uint32_t i : other)
                if (ds.find(local.at(i)) != home_root) {
                    res.reason = NGoodReason::Connectivity;
                    return res;
                }
        }

    res.good = true;
    return res;
}

/// B_{n,M}(z): the shifted interference I_{6n}(nz) stays below M.
inline bool interference_event(const PointPattern& p, Point nz, double n, double M,
                               const PathLoss& pl) {
    return shifted_interference(p, nz, 6.0 * n, pl).total <= M;
}

/// Admissible cancellation factor gamma' = (N0/M)(ell(r)/ell(r_B) - 1); at
/// this value ell(r)/(N0 + gamma'*M) = tau holds identically.
inline double admissible_gamma(const PathLoss& pl, double r, const SinrParams& sp, double M) {
    if (!(M > 0)) throw std::invalid_argument("admissible_gamma: M must be > 0");
    const double rb = snr_radius(pl, sp);
    if (!(r > pl.plateau_end()) || !(r < rb))
        throw std::invalid_argument("admissible_gamma: r must lie in (upsilon0, r_B)");
    return sp.noise / M * (pl.eval(r) / (sp.tau * sp.noise) - 1.0);
}

/// Isolation threshold L' = (1 + 2 tau gamma) M / (tau^2 gamma N0): any
/// delta/2-square holding more than L' points (ell(delta) > tau N0) has all
/// its points isolated in the SINR graph.
inline double isolation_threshold(double M, const SinrParams& sp) {
    if (!(M > 0) || !(sp.gamma > 0) || !(sp.tau > 0) || !(sp.noise > 0))
        throw std::invalid_argument("isolation_threshold: M, gamma, tau, N0 must be > 0");
    return (1.0 + 2.0 * sp.tau * sp.gamma) * M / (sp.tau * sp.tau * sp.gamma * sp.noise);
}

}  // namespace coxsinr
