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

#include <array>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "coxsinr/geometry.hpp"
#include "coxsinr/pathloss.hpp"
#include "coxsinr/random.hpp"

using namespace coxsinr;

TEST_CASE("pathloss eval") {
    const PathLoss tp = PathLoss::truncated_power(1.0, 4.0);
    REQUIRE(tp.eval(0.5) == 1.0);  // inside the plateau, upsilon0 = 1
    REQUIRE(tp.eval(2.0) == Catch::Approx(0.0625));
    REQUIRE(tp.plateau_end() == Catch::Approx(1.0));

    const PathLoss cp = PathLoss::compact_power(1.0, 4.0, 3.0);
    REQUIRE(cp.eval(3.1) == 0.0);
    REQUIRE(cp.eval(3.0) == Catch::Approx(std::pow(3.0, -4)));
    REQUIRE_THROWS_AS(tp.eval(-1.0), std::invalid_argument);
}

TEST_CASE("pathloss monotone, eval_sq consistent") {
    Rng rng(SeedPath::root(5));
    for (const PathLoss& pl : {PathLoss::truncated_power(1.0, 4.0),
                               PathLoss::truncated_power(100.0, 3.0),
                               PathLoss::compact_power(1.0, 4.0, 2.5)}) {
        for (int t = 0; t < 200; ++t) {
            const double r1 = rng.uniform(0, 5), r2 = rng.uniform(0, 5);
            const double lo = std::min(r1, r2), hi = std::max(r1, r2);
            REQUIRE(pl.eval(lo) >= pl.eval(hi));
            REQUIRE(pl.eval(r1) == Catch::Approx(pl.eval_sq(r1 * r1)).epsilon(1e-12));
        }
    }
}

TEST_CASE("validate: assumption report") {
    const auto ok = validate(PathLoss::truncated_power(1.0, 4.0), SinrParams(0.25, 1.0, 0.0), 2);
    REQUIRE(ok.all_ok());

    // the reference figures use ell(0) = 100 > 1 with tau*N0 = 2; only the
    // cap bound trips, the SNR condition still holds
    const auto warn = validate(PathLoss::truncated_power(100.0, 4.0), SinrParams(2.0, 1.0, 0.0), 2);
    REQUIRE_FALSE(warn.power_ok);
    REQUIRE(warn.integrable_ok);
    REQUIRE(warn.shape_ok);
    REQUIRE(warn.notes.size() == 1);

    const auto diverges = validate(PathLoss::truncated_power(1.0, 2.0), SinrParams(0.1, 1.0, 0.0), 2);
    REQUIRE_FALSE(diverges.integrable_ok);
}

TEST_CASE("snr_radius") {
    REQUIRE(snr_radius(PathLoss::truncated_power(1.0, 4.0), SinrParams(0.25, 1.0, 0.0)) ==
            Catch::Approx(std::sqrt(2.0)));
    REQUIRE_THROWS_AS(snr_radius(PathLoss::truncated_power(1.0, 4.0), SinrParams(1.0, 2.0, 0.0)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(snr_radius(PathLoss::truncated_power(1.0, 4.0), SinrParams(0.0, 1.0, 0.5)),
                      std::invalid_argument);
    // inversion inside a compact support: ell(0.5) = 16 with cap 100
    const PathLoss cp = PathLoss::compact_power(100.0, 4.0, 1.0);
    REQUIRE(snr_radius(cp, SinrParams(16.0, 1.0, 0.0)) == Catch::Approx(0.5));
    // target below ell(r_max): no solution inside the support
    REQUIRE_THROWS_AS(snr_radius(cp, SinrParams(0.5, 1.0, 0.0)), std::invalid_argument);
}

TEST_CASE("criticalradius identity") {
    Rng rng(SeedPath::root(6));
    for (int t = 0; t < 100; ++t) {
        const PathLoss pl = PathLoss::truncated_power(rng.uniform(0.5, 2.0), rng.uniform(2.5, 6.0));
        const SinrParams sp(rng.uniform(0.01, 0.3), rng.uniform(0.5, 2.0), 0.0);
        if (sp.tau * sp.noise >= pl.eval(0.0)) continue;
        const double rb = snr_radius(pl, sp);
        REQUIRE(std::fabs(pl.eval(rb) - sp.tau * sp.noise) <= 1e-12 * sp.tau * sp.noise);
    }
}

TEST_CASE("shifted_eval") {
    const PathLoss pl = PathLoss::truncated_power(1.0, 4.0);
    Rng rng(SeedPath::root(7));
    for (int t = 0; t < 20; ++t) {
        const double r = rng.uniform(0, 6);
        REQUIRE(shifted_eval(pl, 0.0, 2, r) == pl.eval(r));
    }
    // d = 2, a = 6: the shift is 3*sqrt(2), so 5 lands back on the plateau
    REQUIRE(shifted_eval(pl, 6.0, 2, 5.0) == 1.0);
    const double expect = std::pow(10.0 - 3.0 * std::sqrt(2.0), -4.0);
    REQUIRE(shifted_eval(pl, 6.0, 2, 10.0) == Catch::Approx(expect).epsilon(1e-12));
    REQUIRE(expect == Catch::Approx(9.1e-4).margin(2e-5));
}

TEST_CASE("shift domination: ell(|x-y|) <= ell_a(|z-y|) for x in Q_a(z)") {
    const PathLoss pl = PathLoss::truncated_power(1.0, 4.0);
    Rng rng(SeedPath::root(8));
    for (int t = 0; t < 1000; ++t) {
        const int d = rng.uniform() < 0.5 ? 2 : 3;
        const double a = rng.uniform(0.1, 8.0);
        const Point z{rng.uniform(-5, 5), rng.uniform(-5, 5), d == 3 ? rng.uniform(-5, 5) : 0};
        const Point x{z.x + rng.uniform(-a / 2, a / 2), z.y + rng.uniform(-a / 2, a / 2),
                      d == 3 ? z.z + rng.uniform(-a / 2, a / 2) : 0};
        const Point y{rng.uniform(-20, 20), rng.uniform(-20, 20),
                      d == 3 ? rng.uniform(-20, 20) : 0};
        REQUIRE(pl.eval(euclid(x, y)) <= shifted_eval(pl, a, d, euclid(z, y)) + 1e-15);
    }
}

TEST_CASE("k0_bound: convergence and the lattice-sum certificate") {
    const PathLoss pl = PathLoss::truncated_power(1.0, 4.0);
    const double k0 = k0_bound(pl, 2);
    REQUIRE(std::isfinite(k0));
    REQUIRE(k0 > 0);
    const double k0_tight = k0_bound(pl, 2, 1e-15);
    REQUIRE(std::fabs(k0 - k0_tight) <= 1e-9 * k0_tight);

    // compact support: finitely many nonzero terms
    REQUIRE(std::isfinite(k0_bound(PathLoss::compact_power(1.0, 4.0, 2.0), 2)));
    REQUIRE_THROWS_AS(k0_bound(PathLoss::truncated_power(1.0, 2.0), 2), std::invalid_argument);

    Rng rng(SeedPath::root(9));
    for (int trial = 0; trial < 100; ++trial) {
        const int d = rng.uniform() < 0.5 ? 2 : 3;
        const double bound = k0_bound(pl, d);
        const double n = rng.uniform(1.0, 5.0);
        const Point x{rng.uniform(-10, 10), rng.uniform(-10, 10), d == 3 ? rng.uniform(-10, 10) : 0};
        std::vector<std::array<int, 3>> sites;
        double sum = 0;
        for (int s = 0; s < 60; ++s) {
            std::array<int, 3> z{static_cast<int>(rng.below(21)) - 10,
                                 static_cast<int>(rng.below(21)) - 10,
                                 d == 3 ? static_cast<int>(rng.below(21)) - 10 : 0};
            if (std::find(sites.begin(), sites.end(), z) != sites.end()) continue;
            sites.push_back(z);
            const Point nz{n * z[0], n * z[1], n * z[2]};
            sum += shifted_eval(pl, 6.0 * n, d, euclid(x, nz));
        }
        REQUIRE(sum <= bound);
    }
}

TEST_CASE("sinr params reject the degenerate case") {
    REQUIRE_THROWS_AS(SinrParams(0.0, 1.0, 0.0), std::invalid_argument);
    REQUIRE_NOTHROW(SinrParams(0.0, 1.0, 0.5));
    REQUIRE_NOTHROW(SinrParams(0.5, 1.0, 0.0));
}
