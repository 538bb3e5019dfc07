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
#include <stdexcept>
#include <string>
#include <vector>

#include "coxsinr/geometry.hpp"
#include "coxsinr/grid.hpp"
#include "coxsinr/random.hpp"

namespace coxsinr {

/// A realization of the point process inside a window, with provenance and a
/// cell-grid index. Immutable after construction.
struct PointPattern {
    std::vector<Point> pts;
    Window window;
    double lambda = 0.0;
    SeedPath seed;
    std::string env_tag;
    CellGrid grid;

    std::size_t size() const { return pts.size(); }

    /// True when no two points share a position.
    bool simple() const {
        std::vector<Point> s = pts;
        std::sort(s.begin(), s.end(), [](Point a, Point b) {
            if (a.x != b.x) return a.x < b.x;
            if (a.y != b.y) return a.y < b.y;
            return a.z < b.z;
        });
        for (std::size_t i = 1; i < s.size(); ++i)
            if (s[i].x == s[i - 1].x && s[i].y == s[i - 1].y && s[i].z == s[i - 1].z) return false;
        return true;
    }
};

inline PointPattern make_pattern(std::vector<Point> pts, const Window& w, double lambda,
                                 const SeedPath& seed, std::string env_tag) {
    for (const auto& p : pts)
        if (!w.contains(p)) throw std::invalid_argument("pattern: point outside window");
    PointPattern out;
    out.window = w;
    out.lambda = lambda;
    out.seed = seed;
    out.env_tag = std::move(env_tag);
    // cell side near the typical spacing keeps candidate counts O(1)
    const double vol = w.sample_box().volume(w.dim);
    const std::size_t n = std::max<std::size_t>(pts.size(), 1);
    double side = w.dim == 3 ? std::cbrt(vol / static_cast<double>(n))
                             : std::sqrt(vol / static_cast<double>(n));
    side = std::max(side, 1e-6);
    out.grid = CellGrid(w, side, pts);
    out.pts = std::move(pts);
    return out;
}

}  // namespace coxsinr
