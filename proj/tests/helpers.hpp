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

// Brute-force oracles used by the unit and acceptance suites. Everything here
// is deliberately independent of the library's indexed/grid/cached paths.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "coxsinr/diskgeom.hpp"
#include "coxsinr/geometry.hpp"
#include "coxsinr/graphs.hpp"
#include "coxsinr/pattern.hpp"

namespace oracle {

using namespace coxsinr;

inline std::vector<std::uint32_t> neighbors(const std::vector<Point>& pts, Point x, double radius,
                                            const Window& w,
                                            std::uint32_t exclude = coxsinr::kNoExclude) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < pts.size(); ++i) {
        if (i == exclude) continue;
        if (pair_distance(pts[i], x, w) < radius) out.push_back(i);
    }
    return out;
}

/// Reachability closure by repeated boolean matrix squaring.
inline std::vector<std::vector<bool>> reachability(
    std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
    for (auto [i, j] : edges) reach[i][j] = reach[j][i] = true;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (reach[i][j]) continue;
                for (std::size_t k = 0; k < n; ++k)
                    if (reach[i][k] && reach[k][j]) {
                        reach[i][j] = true;
                        changed = true;
                        break;
                    }
            }
    }
    return reach;
}

inline std::vector<std::pair<std::uint32_t, std::uint32_t>> gilbert_edges(
    const std::vector<Point>& pts, double r, const Window& w) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::uint32_t i = 0; i < pts.size(); ++i)
        for (std::uint32_t j = i + 1; j < pts.size(); ++j)
            if (pair_distance(pts[i], pts[j], w) < r) out.emplace_back(i, j);
    return out;
}

inline double interference(const PointPattern& p, Point y, const PathLoss& pl,
                           const std::vector<std::uint32_t>& exclude = {}) {
    double sum = 0;
    for (std::uint32_t k = 0; k < p.size(); ++k) {
        if (std::find(exclude.begin(), exclude.end(), k) != exclude.end()) continue;
        sum += pl.eval(pair_distance(p.pts[k], y, p.window));
    }
    return sum;
}

/// All-pairs directed SINR arcs straight from the definition.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> sinr_arcs(const PointPattern& p,
                                                                      const SinrParams& sp,
                                                                      const PathLoss& pl) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::uint32_t i = 0; i < p.size(); ++i)
        for (std::uint32_t j = 0; j < p.size(); ++j) {
            if (i == j) continue;
            const double signal = pl.eval(pair_distance(p.pts[i], p.pts[j], p.window));
            const double interf = interference(p, p.pts[j], pl, {i, j});
            const bool edge = sp.noise > 0 ? signal / (sp.noise + sp.gamma * interf) > sp.tau
                                           : signal > sp.tau * sp.gamma * interf;
            if (edge) out.emplace_back(i, j);
        }
    return out;
}

inline std::vector<std::vector<std::uint32_t>> knn_lists(const PointPattern& p, int k) {
    std::vector<std::vector<std::uint32_t>> out(p.size());
    for (std::uint32_t i = 0; i < p.size(); ++i) {
        std::vector<std::pair<double, std::uint32_t>> cand;
        for (std::uint32_t j = 0; j < p.size(); ++j)
            if (j != i) cand.emplace_back(pair_distance(p.pts[i], p.pts[j], p.window), j);
        std::sort(cand.begin(), cand.end());
        for (std::size_t t = 0; t < std::min<std::size_t>(k, cand.size()); ++t)
            out[i].push_back(cand[t].second);
        std::sort(out[i].begin(), out[i].end());
    }
    return out;
}

inline std::vector<Point> random_points(Rng& rng, std::size_t n, const Box& b, int dim = 2) {
    std::vector<Point> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back({rng.uniform(b.lo.x, b.hi.x), rng.uniform(b.lo.y, b.hi.y),
                       dim == 3 ? rng.uniform(b.lo.z, b.hi.z) : 0.0});
    return pts;
}

/// Monte Carlo box-mass of a union of disks (quadrature oracle).
inline double mc_disks_area(Rng& rng, const std::vector<Disk>& disks, const Box& box, long samples) {
    long hit = 0;
    for (long s = 0; s < samples; ++s) {
        const Point p{rng.uniform(box.lo.x, box.hi.x), rng.uniform(box.lo.y, box.hi.y), 0};
        if (point_in_any_disk(disks, p)) ++hit;
    }
    return box.volume(2) * static_cast<double>(hit) / static_cast<double>(samples);
}

}  // namespace oracle
