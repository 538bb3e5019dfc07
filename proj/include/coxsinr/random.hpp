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

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace coxsinr {

/// SplitMix64 step; also used as the mixing function when deriving substreams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Hierarchical seed: a master seed plus a path of (label, index) derivations.
/// Equal paths give identical streams; distinct paths give independent ones.
struct SeedPath {
    std::uint64_t master = 0;
    std::vector<std::pair<std::string, std::uint64_t>> path;
    std::uint64_t state = 0;

    static SeedPath root(std::uint64_t master_seed) {
        SeedPath s;
        s.master = master_seed;
        std::uint64_t st = master_seed ^ 0x6a09e667f3bcc908ull;
        s.state = splitmix64(st);
        return s;
    }

    SeedPath child(std::string_view label, std::uint64_t index) const {
        SeedPath out = *this;
        out.path.emplace_back(std::string(label), index);
        std::uint64_t st = state;
        st ^= fnv1a64(label);
        (void)splitmix64(st);
        st ^= index * 0x9e3779b97f4a7c15ull + 0x516cc3a0f1659b4dull;
        std::uint64_t mixed = splitmix64(st);
        out.state = mixed ^ splitmix64(st);
        return out;
    }
};

inline SeedPath derive_seed(const SeedPath& s, std::string_view label, std::uint64_t index) {
    return s.child(label, index);
}

/// xoshiro256++ seeded from a SeedPath via SplitMix64 expansion.
class Rng {
  public:
    using result_type = std::uint64_t;

    explicit Rng(const SeedPath& s) { seed_from(s.state); }
    explicit Rng(std::uint64_t state) { seed_from(state); }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Lemire-style rejection keeps the draw unbiased.
        std::uint64_t x = (*this)();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t t = -n % n;
            while (lo < t) {
                x = (*this)();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    long poisson(double mean) {
        if (mean <= 0.0) return 0;
        std::poisson_distribution<long> d(mean);
        return d(*this);
    }

    double normal(double mu = 0.0, double sigma = 1.0) {
        std::normal_distribution<double> d(mu, sigma);
        return d(*this);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    void seed_from(std::uint64_t state) {
        for (auto& w : s_) w = splitmix64(state);
        if (s_[0] == 0 && s_[1] == 0 && s_[2] == 0 && s_[3] == 0) s_[0] = 1;
    }

    std::uint64_t s_[4]{};
};

}  // namespace coxsinr
