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

#include "coxsinr/graphs.hpp"
#include "helpers.hpp"

using namespace coxsinr;

namespace {

PointPattern pattern_of(std::vector<Point> pts, const Window& w) {
    return make_pattern(std::move(pts), w, 1.0, SeedPath::root(0), "test");
}

PointPattern random_pattern(Rng& rng, std::size_t n, const Window& w) {
    return pattern_of(oracle::random_points(rng, n, w.box(), w.dim), w);
}

}  // namespace

TEST_CASE("gilbert: examples and oracle") {
    const Window w(2, {0, 0, 0}, {10, 10, 0}, Boundary::Hard);
    const auto p = pattern_of({{0, 0, 0}, {0.9, 0, 0}}, w);
    REQUIRE(gilbert(p, 1.0).edge_count() == 1);
    REQUIRE(gilbert(p, 0.0).edge_count() == 0);

    Rng rng(SeedPath::root(41));
    for (Boundary b : {Boundary::Hard, Boundary::Periodic}) {
        const Window win(2, {0, 0, 0}, {10, 10, 0}, b);
        for (int t = 0; t < 20; ++t) {
            const auto pat = random_pattern(rng, 30 + rng.below(170), win);
            const double r = rng.uniform(0.3, 3.0);
            const auto g = gilbert(pat, r);
            auto want = oracle::gilbert_edges(pat.pts, r, win);
            auto got = g.edge_list();
            REQUIRE(got == want);
        }
    }
}

TEST_CASE("interference_at: examples and oracle") {
    const Window w(2, {0, 0, 0}, {20, 20, 0}, Boundary::Hard);
    const PathLoss pl = PathLoss::truncated_power(1.0, 4.0);
    const auto p = pattern_of({{5, 5, 0}}, w);
    REQUIRE(interference_at(p, {7, 5, 0}, pl) == Catch::Approx(0.0625));
    REQUIRE(interference_at(p, {7, 5, 0}, pl, {0}) == 0.0);

    Rng rng(SeedPath::root(42));
    for (const PathLoss& loss : {PathLoss::truncated_power(1.0, 4.0),
                                 PathLoss::compact_power(1.0, 4.0, 2.0)}) {
        for (Boundary b : {Boundary::Hard, Boundary::Periodic}) {
            const Window win(2, {0, 0, 0}, {12, 12, 0}, b);
            const auto pat = random_pattern(rng, 300, win);
            for (int q = 0; q < 10; ++q) {
                const Point y{rng.uniform(0, 12), rng.uniform(0, 12), 0};
                const double got = interference_at(pat, y, loss);
                const double want = oracle::interference(pat, y, loss);
                REQUIRE(got == Catch::Approx(want).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("interference field: cached totals match and bound the nearest neighbor") {
    Rng rng(SeedPath::root(43));
    const Window w(2, {0, 0, 0}, {9, 9, 0}, Boundary::Periodic);
    const PathLoss pl = PathLoss::truncated_power(1.0, 4.0);
    const auto pat = random_pattern(rng, 120, w);
    const auto field = interference_field(pat, pl);
    for (std::uint32_t j = 0; j < pat.size(); ++j) {
        const double want = oracle::interference(pat, pat.pts[j], pl, {j});
        REQUIRE(field.total[j] == Catch::Approx(want).epsilon(1e-12));
        double nn = std::numeric_limits<double>::infinity();
        for (std::uint32_t k = 0; k < pat.size(); ++k)
            if (k != j) nn = std::min(nn, pair_distance(pat.pts[k], pat.pts[j], w));
        REQUIRE(field.total[j] >= pl.eval(nn));
    }
}

TEST_CASE("shifted_interference: split and domination") {
    const Window w(2, {0, 0, 0}, {40, 40, 0}, Boundary::Hard);
    const PathLoss pl = PathLoss::truncated_power(1.0, 4.0);
    const auto empty = pattern_of({}, w);
    const auto none = shifted_interference(empty, {20, 20, 0}, 1.0, pl);
    REQUIRE(none.total == 0.0);
    REQUIRE(none.inner == 0.0);
    REQUIRE(none.outer == 0.0);

    // all points inside the inner cube -> outer = 0
    const auto tight = pattern_of({{20, 20, 0}, {21, 20, 0}, {19, 21, 0}}, w);
    const auto s = shifted_interference(tight, {20, 20, 0}, 2.0, pl);
    REQUIRE(s.outer == 0.0);
    REQUIRE(s.total == s.inner);

    Rng rng(SeedPath::root(44));
    for (int t = 0; t < 50; ++t) {
        const auto pat = random_pattern(rng, 150, w);
        const double a = rng.uniform(0.5, 4.0);
        const Point z{rng.uniform(12, 28), rng.uniform(12, 28), 0};
        const auto got = shifted_interference(pat, z, a, pl);
        double want = 0;
        for (const auto& x : pat.pts) want += shifted_eval(pl, a, 2, euclid(z, x));
        REQUIRE(got.total == Catch::Approx(want).epsilon(1e-12));
        REQUIRE(got.total == got.inner + got.outer);
        // I(x) <= I_a(z) for x in Q_a(z)
        const Point x{z.x + rng.uniform(-a / 2, a / 2), z.y + rng.uniform(-a / 2, a / 2), 0};
        REQUIRE(oracle::interference(pat, x, pl) <= got.total + 1e-12);
    }
}

TEST_CASE("sinr_value: hand-computed chain") {
    const Window w(2, {-1, -1, 0}, {4, 1, 0}, Boundary::Hard);
    const auto p = pattern_of({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, w);
    const PathLoss pl = PathLoss::truncated_power(1.0, 4.0);
    const SinrParams sp(0.1, 1.0, 0.1);
    const auto d = sinr_value(p, 0, 1, sp, pl);
    REQUIRE(d.value == Catch::Approx(5.0).epsilon(1e-12));
    REQUIRE(d.edge);
    REQUIRE_THROWS_AS(sinr_value(p, 1, 1, sp, pl), std::invalid_argument);

    // two isolated points, N0 = 0: zero interference, any positive signal wins
    const auto pair = pattern_of({{0, 0, 0}, {3, 0, 0}}, w);
    const SinrParams zero_noise(0.0, 1.0, 0.7);
    REQUIRE(sinr_value(pair, 0, 1, zero_noise, pl).edge);
}

TEST_CASE("sinr graphs: gamma = 0 equals the Gilbert graph at r_B exactly") {
    Rng rng(SeedPath::root(45));
    const PathLoss pl = PathLoss::truncated_power(1.0, 4.0);
    for (int t = 0; t < 30; ++t) {
        const Window w(2, {0, 0, 0}, {8, 8, 0},
                       t % 2 == 0 ? Boundary::Periodic : Boundary::Hard);
        const auto pat = random_pattern(rng, 20 + rng.below(120), w);
        const SinrParams sp(rng.uniform(0.05, 0.6), rng.uniform(0.5, 2.0), 0.0);
        if (sp.tau * sp.noise >= 1.0) continue;
        const double rb = snr_radius(pl, sp);
        const auto g = sinr_graph(pat, sp, pl);
        const auto gb = gilbert(pat, rb);
        REQUIRE(g.edge_list() == gb.edge_list());
    }
}

TEST_CASE("sinr_digraph: brute-force oracle") {
    Rng rng(SeedPath::root(46));
    const PathLoss tp = PathLoss::truncated_power(1.0, 4.0);
    const PathLoss cp = PathLoss::compact_power(1.0, 4.0, 2.0);
    for (int t = 0; t < 40; ++t) {
        const bool periodic = t % 2 == 0;
        const Window w(2, {0, 0, 0}, {7, 7, 0}, periodic ? Boundary::Periodic : Boundary::Hard);
        const auto pat = random_pattern(rng, 2 + rng.below(99), w);
        const bool compact = t % 3 == 0;
        const PathLoss& pl = compact ? cp : tp;
        const bool zero_noise = t % 5 == 0;
        if (zero_noise && !compact) continue;  // unbounded edges: keep the oracle finite
        const SinrParams sp(zero_noise ? 0.0 : rng.uniform(0.05, 0.5), rng.uniform(0.5, 2.0),
                            rng.uniform(0.01, 1.0));
        const auto g = sinr_digraph(pat, sp, pl);
        auto got = g.edge_list();
        auto want = oracle::sinr_arcs(pat, sp, pl);
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        REQUIRE(got == want);
    }

    // single point: no arcs
    const Window w(2, {0, 0, 0}, {5, 5, 0}, Boundary::Hard);
    const auto lone = pattern_of({{1, 1, 0}}, w);
    REQUIRE(sinr_digraph(lone, SinrParams(0.1, 1.0, 0.3), tp).edge_count() == 0);
}

TEST_CASE("sinr: a saturated cluster loses all arcs") {
    const Window w(2, {0, 0, 0}, {4, 4, 0}, Boundary::Hard);
    // three points inside the plateau: signal 1, interference 1 per arc
    const auto p = pattern_of({{1, 1, 0}, {1.5, 1, 0}, {1.2, 1.4, 0}}, w);
    const PathLoss pl = PathLoss::truncated_power(1.0, 4.0);
    const SinrParams sp(0.1, 1.0, 1.0);
    REQUIRE(sinr_digraph(p, sp, pl).edge_count() == 0);
}

TEST_CASE("gamma monotonicity and Gilbert domination") {
    Rng rng(SeedPath::root(47));
    const PathLoss pl = PathLoss::truncated_power(1.0, 4.0);
    for (int t = 0; t < 20; ++t) {
        const Window w(2, {0, 0, 0}, {8, 8, 0}, Boundary::Periodic);
        const auto pat = random_pattern(rng, 20 + rng.below(100), w);
        const SinrParams base(0.25, 1.0, 0.0);
        const double rb = snr_radius(pl, base);
        SpatialGraph prev_d = sinr_digraph(pat, base.with_gamma(0.0), pl);
        SpatialGraph prev_u = sinr_graph(pat, base.with_gamma(0.0), pl);
        const auto bound = gilbert(pat, rb);
        for (double gamma : {0.01, 0.04, 0.1, 0.4, 1.1}) {
            const auto gd = sinr_digraph(pat, base.with_gamma(gamma), pl);
            const auto gu = sinr_graph(pat, base.with_gamma(gamma), pl);
            REQUIRE(gd.subgraph_of(prev_d));
            REQUIRE(gu.subgraph_of(prev_u));
            REQUIRE(gu.subgraph_of(bound));
            prev_d = gd;
            prev_u = gu;
        }
    }
    // compact support bounds edges by r_max even without noise
    const PathLoss cp = PathLoss::compact_power(1.0, 4.0, 1.5);
    for (int t = 0; t < 10; ++t) {
        const Window w(2, {0, 0, 0}, {8, 8, 0}, Boundary::Hard);
        const auto pat = random_pattern(rng, 60, w);
        const auto gu = sinr_graph(pat, SinrParams(0.0, 1.0, 0.05), cp);
        REQUIRE(gu.subgraph_of(gilbert(pat, cp.r_max + 1e-9)));
    }
}

TEST_CASE("figure-style run: edge counts fall as gamma grows") {
    const Window w(2, {0, 0, 0}, {1, 1, 0}, Boundary::Hard);
    const PathLoss pl = PathLoss::truncated_power(100.0, 4.0);
    Rng rng(SeedPath::root(48));
    const auto pat = pattern_of(oracle::random_points(rng, 40, w.box()), w);
    const SinrParams base(2.0, 1.0, 0.0);
    std::vector<std::size_t> counts;
    for (double gamma : {0.0, 0.01, 0.04, 0.1, 0.2})
        counts.push_back(sinr_graph(pat, base.with_gamma(gamma), pl).edge_count());
    for (std::size_t i = 1; i < counts.size(); ++i) REQUIRE(counts[i] < counts[i - 1]);
}

TEST_CASE("knn: examples and oracle") {
    const Window w(2, {0, 0, 0}, {10, 10, 0}, Boundary::Hard);
    const auto two = pattern_of({{1, 1, 0}, {2, 2, 0}}, w);
    REQUIRE(knn_graph(two, 1, true).edge_count() == 1);
    REQUIRE_THROWS_AS(knn_graph(two, 0, true), std::invalid_argument);

    Rng rng(SeedPath::root(49));
    for (int t = 0; t < 25; ++t) {
        const Window win(2, {0, 0, 0}, {10, 10, 0},
                         t % 2 == 0 ? Boundary::Hard : Boundary::Periodic);
        const auto pat = random_pattern(rng, 2 + rng.below(99), win);
        const int k = 1 + static_cast<int>(rng.below(6));
        const auto lists = oracle::knn_lists(pat, k);
        const auto bi = knn_graph(pat, k, true);
        const auto un = knn_graph(pat, k, false);
        for (std::uint32_t i = 0; i < pat.size(); ++i)
            for (std::uint32_t j = i + 1; j < pat.size(); ++j) {
                const bool i_lists_j = std::binary_search(lists[i].begin(), lists[i].end(), j);
                const bool j_lists_i = std::binary_search(lists[j].begin(), lists[j].end(), i);
                REQUIRE(bi.has_edge(i, j) == (i_lists_j && j_lists_i));
                REQUIRE(un.has_edge(i, j) == (i_lists_j || j_lists_i));
            }
        REQUIRE(bi.subgraph_of(un));
    }
}

TEST_CASE("max_in_degree_bound") {
    REQUIRE(max_in_degree_bound(SinrParams(0.1, 1.0, 1.0)) == 1);
    REQUIRE(max_in_degree_bound(SinrParams(0.1, 2.0, 0.25)) == 2);   // tau*gamma = 1/2
    REQUIRE(max_in_degree_bound(SinrParams(0.1, 1.0, 0.07)) == 15);  // tau*gamma = 7/100
    REQUIRE_THROWS_AS(max_in_degree_bound(SinrParams(0.1, 1.0, 0.0)), std::invalid_argument);
}

TEST_CASE("degree bound and knn domination") {
    Rng rng(SeedPath::root(50));
    const PathLoss pl = PathLoss::truncated_power(1.0, 4.0);
    for (int t = 0; t < 30; ++t) {
        const Window w(2, {0, 0, 0}, {7, 7, 0}, Boundary::Periodic);
        const auto pat = random_pattern(rng, 25 + rng.below(100), w);
        const SinrParams sp(rng.uniform(0.05, 0.4), rng.uniform(0.5, 2.0),
                            rng.uniform(0.02, 1.5));
        const auto gd = sinr_digraph(pat, sp, pl);
        const int bound = max_in_degree_bound(sp);
        for (std::uint32_t deg : gd.in_degrees())
            REQUIRE(deg < 1.0 + 1.0 / (sp.tau * sp.gamma));
        const auto gu = sinr_graph(pat, sp, pl);
        if (pat.size() >= 2) {
            const auto knn = knn_graph(pat, bound, true);
            REQUIRE(gu.subgraph_of(knn));
        }
        if (sp.gamma >= 1.0 / sp.tau)
            for (const auto& a : gu.adj) REQUIRE(a.size() <= 1);
    }
}
