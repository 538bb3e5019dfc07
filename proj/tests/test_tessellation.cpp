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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "coxsinr/tessellation.hpp"
#include "helpers.hpp"

using namespace coxsinr;

TEST_CASE("delaunay: tiny inputs") {
    const std::vector<Point> tri_sites = {{0, 0, 0}, {1, 0, 0}, {0.4, 0.9, 0}};
    const Triangulation tri = delaunay(tri_sites);
    REQUIRE(tri.triangles.size() == 1);
    REQUIRE(tri.edges.size() == 3);

    // cocircular square corners are broken by jitter: 2 triangles, 5 edges
    const std::vector<Point> square = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    const Triangulation sq = delaunay(square, SeedPath::root(3));
    REQUIRE(sq.triangles.size() == 2);
    REQUIRE(sq.edges.size() == 5);

    REQUIRE_THROWS_AS(delaunay({{0, 0, 0}, {1, 1, 0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(delaunay({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}}),
                      std::invalid_argument);
}

TEST_CASE("delaunay: empty-circumcircle certificate on random sites") {
    Rng rng(SeedPath::root(21));
    const Box box{{0, 0, 0}, {10, 10, 0}};
    const auto sites = oracle::random_points(rng, 200, box);
    const Triangulation tri = delaunay(sites);
    REQUIRE(tri.sites.size() == 200);
    for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
        const Point cc = tri.circumcenters[t];
        const double r2 = [&] {
            const Point a = tri.sites[tri.triangles[t][0]];
            const double dx = a.x - cc.x, dy = a.y - cc.y;
            return dx * dx + dy * dy;
        }();
        for (std::size_t s = 0; s < tri.sites.size(); ++s) {
            const double dx = tri.sites[s].x - cc.x, dy = tri.sites[s].y - cc.y;
            const double d2 = dx * dx + dy * dy;
            REQUIRE(d2 >= r2 * (1.0 - 1e-12) - 1e-12);
        }
    }
}

TEST_CASE("voronoi: two sites give one clipped bisector") {
    const Box box{{0, 0, 0}, {4, 4, 0}};
    const auto set = voronoi_of_sites({{1, 2, 0}, {3, 2, 0}}, box);
    REQUIRE(set.segments.size() == 1);
    REQUIRE(set.segments[0].a.x == Catch::Approx(2.0));
    REQUIRE(set.segments[0].b.x == Catch::Approx(2.0));
    REQUIRE(set.total_length == Catch::Approx(4.0));
}

TEST_CASE("voronoi: equidistance certificates on random sites") {
    Rng rng(SeedPath::root(22));
    const Box box{{0, 0, 0}, {10, 10, 0}};
    const auto sites = oracle::random_points(rng, 200, box);
    const Triangulation tri = delaunay(sites);

    // interior Voronoi vertices (circumcenters) are equidistant from 3 sites
    for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
        const Point cc = tri.circumcenters[t];
        const double d0 = euclid(cc, tri.sites[tri.triangles[t][0]]);
        const double d1 = euclid(cc, tri.sites[tri.triangles[t][1]]);
        const double d2 = euclid(cc, tri.sites[tri.triangles[t][2]]);
        REQUIRE(std::fabs(d0 - d1) <= 1e-9 * (1 + d0));
        REQUIRE(std::fabs(d0 - d2) <= 1e-9 * (1 + d0));
    }

    // each Voronoi segment is equidistant from exactly its two defining sites
    // at its midpoint
    const Box wide{{-20, -20, 0}, {30, 30, 0}};
    for (const auto& ve : voronoi_edges_detailed(tri, wide)) {
        const Point mid = 0.5 * (ve.seg.a + ve.seg.b);
        const double da = euclid(mid, tri.sites[ve.site_a]);
        const double db = euclid(mid, tri.sites[ve.site_b]);
        REQUIRE(std::fabs(da - db) <= 1e-9 * (1 + da));
        for (std::size_t s = 0; s < tri.sites.size(); ++s)
            REQUIRE(euclid(mid, tri.sites[s]) >= da - 1e-9 * (1 + da));
    }
}

TEST_CASE("delaunay edges: perimeter and clipping") {
    const std::vector<Point> tri_sites = {{0, 0, 0}, {3, 0, 0}, {0, 4, 0}};
    const Triangulation tri = delaunay(tri_sites);
    const Box big{{-1, -1, 0}, {5, 5, 0}};
    const auto all = delaunay_edges(tri, big);
    REQUIRE(all.segments.size() == 3);
    REQUIRE(all.total_length == Catch::Approx(3.0 + 4.0 + 5.0));

    // clipping removes the exterior part of an edge
    const Box half{{-1, -1, 0}, {1.5, 5, 0}};
    const auto clipped = delaunay_edges(tri, half);
    REQUIRE(clipped.total_length < all.total_length);
    for (const auto& s : clipped.segments) {
        REQUIRE(s.a.x <= 1.5 + 1e-12);
        REQUIRE(s.b.x <= 1.5 + 1e-12);
    }
}

TEST_CASE("duality: interior Voronoi segments match interior Delaunay adjacencies") {
    Rng rng(SeedPath::root(23));
    const Box box{{0, 0, 0}, {8, 8, 0}};
    const auto sites = oracle::random_points(rng, 120, box);
    const Triangulation tri = delaunay(sites);
    // interior adjacency = edge shared by two triangles
    std::map<std::pair<int, int>, int> count;
    for (const auto& t : tri.triangles)
        for (int e = 0; e < 3; ++e) {
            int a = t[e], b = t[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            ++count[{a, b}];
        }
    std::size_t interior = 0;
    for (const auto& [k, c] : count)
        if (c == 2) ++interior;
    const Box wide{{-50, -50, 0}, {60, 60, 0}};
    std::size_t voronoi_interior = 0;
    for (const auto& ve : voronoi_edges_detailed(tri, wide))
        if (ve.interior) ++voronoi_interior;
    REQUIRE(voronoi_interior == interior);
}
