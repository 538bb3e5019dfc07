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
#include <cstdint>
#include <vector>

#include "coxsinr/geometry.hpp"

namespace coxsinr {

/// Uniform bucket grid over the window's sample region. Queries inspect
/// ceil(radius / cell side) rings of cells, wrapping in Periodic mode.
class CellGrid {
  public:
    CellGrid() = default;

    CellGrid(const Window& w, double cell_side, const std::vector<Point>& pts) : win_(w) {
        const Box region = w.sample_box();
        origin_ = region.lo;
        for (int a = 0; a < 3; ++a) {
            const double ext = (a == 0)   ? region.hi.x - region.lo.x
                               : (a == 1) ? region.hi.y - region.lo.y
                                          : region.hi.z - region.lo.z;
            extent_[a] = ext;
            if (a == 2 && w.dim == 2) {
                n_[a] = 1;
                side_[a] = 1.0;
                continue;
            }
            n_[a] = std::max<int>(1, static_cast<int>(std::floor(ext / std::max(cell_side, 1e-12))));
            side_[a] = ext / n_[a];
        }
        buckets_.assign(static_cast<std::size_t>(n_[0]) * n_[1] * n_[2], {});
        for (std::uint32_t i = 0; i < pts.size(); ++i)
            buckets_[bucket_index(pts[i])].push_back(i);
    }

    const Window& window() const { return win_; }
    int cells(int axis) const { return n_[axis]; }

    std::size_t bucket_index(Point p) const {
        const int cx = clamp_cell(static_cast<int>(std::floor((p.x - origin_.x) / side_[0])), 0);
        const int cy = clamp_cell(static_cast<int>(std::floor((p.y - origin_.y) / side_[1])), 1);
        const int cz = win_.dim == 3
                           ? clamp_cell(static_cast<int>(std::floor((p.z - origin_.z) / side_[2])), 2)
                           : 0;
        return (static_cast<std::size_t>(cz) * n_[1] + cy) * n_[0] + cx;
    }

    /// Visit ids in all cells within `radius` of x (superset of true neighbors).
    template <typename F>
    void for_each_candidate(Point x, double radius, F&& f) const {
        int ring[3];
        bool all[3];
        for (int a = 0; a < 3; ++a) {
            if (a == 2 && win_.dim == 2) {
                ring[a] = 0;
                all[a] = false;
                continue;
            }
            ring[a] = static_cast<int>(std::ceil(radius / side_[a]));
            all[a] = 2 * ring[a] + 1 >= n_[a];
        }
        const int cx = static_cast<int>(std::floor((x.x - origin_.x) / side_[0]));
        const int cy = static_cast<int>(std::floor((x.y - origin_.y) / side_[1]));
        const int cz = win_.dim == 3 ? static_cast<int>(std::floor((x.z - origin_.z) / side_[2])) : 0;
        const bool periodic = win_.boundary == Boundary::Periodic;

        auto lo = [&](int c, int a) { return all[a] ? 0 : c - ring[a]; };
        auto hi = [&](int c, int a) { return all[a] ? n_[a] - 1 : c + ring[a]; };
        for (int iz = lo(cz, 2); iz <= hi(cz, 2); ++iz) {
            int wz = iz;
            if (!wrap(wz, 2, periodic)) continue;
            for (int iy = lo(cy, 1); iy <= hi(cy, 1); ++iy) {
                int wy = iy;
                if (!wrap(wy, 1, periodic)) continue;
                for (int ix = lo(cx, 0); ix <= hi(cx, 0); ++ix) {
                    int wx = ix;
                    if (!wrap(wx, 0, periodic)) continue;
                    const auto& b =
                        buckets_[(static_cast<std::size_t>(wz) * n_[1] + wy) * n_[0] + wx];
                    for (std::uint32_t id : b) f(id);
                }
            }
        }
    }

    const std::vector<std::vector<std::uint32_t>>& buckets() const { return buckets_; }

  private:
    int clamp_cell(int c, int axis) const { return std::clamp(c, 0, n_[axis] - 1); }

    bool wrap(int& c, int axis, bool periodic) const {
        if (c >= 0 && c < n_[axis]) return true;
        if (!periodic) return false;
        c %= n_[axis];
        if (c < 0) c += n_[axis];
        return true;
    }

    Window win_;
    Point origin_;
    double extent_[3] = {1, 1, 1};
    double side_[3] = {1, 1, 1};
    int n_[3] = {1, 1, 1};
    std::vector<std::vector<std::uint32_t>> buckets_;
};

constexpr std::uint32_t kNoExclude = 0xffffffffu;

/// Ids at pair_distance strictly below `radius` from x, optionally excluding
/// one designated id. Matches an exhaustive scan exactly.
inline std::vector<std::uint32_t> neighbors_within(const CellGrid& grid,
                                                   const std::vector<Point>& pts, Point x,
                                                   double radius,
                                                   std::uint32_t exclude = kNoExclude) {
    std::vector<std::uint32_t> out;
    if (radius <= 0.0) return out;
    const double r2 = radius * radius;
    grid.for_each_candidate(x, radius, [&](std::uint32_t id) {
        if (id == exclude) return;
        if (pair_distance_sq(pts[id], x, grid.window()) < r2) out.push_back(id);
    });
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace coxsinr
