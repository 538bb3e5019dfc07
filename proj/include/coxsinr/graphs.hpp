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
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "coxsinr/components.hpp"
#include "coxsinr/grid.hpp"
#include "coxsinr/pathloss.hpp"
#include "coxsinr/pattern.hpp"

namespace coxsinr {

/// Vertex-indexed edge structure over a point pattern, tagged with the rule
/// that built it. Undirected graphs keep symmetric adjacency.
struct SpatialGraph {
    std::uint32_t n = 0;
    bool directed = false;
    std::vector<std::vector<std::uint32_t>> adj;  // sorted; out-neighbors when directed
    std::string rule;

    void add_edge(std::uint32_t i, std::uint32_t j) {
        adj[i].push_back(j);
        if (!directed) adj[j].push_back(i);
    }

    void finish() {
        for (auto& a : adj) std::sort(a.begin(), a.end());
    }

    bool has_edge(std::uint32_t i, std::uint32_t j) const {
        return std::binary_search(adj[i].begin(), adj[i].end(), j);
    }

    std::size_t edge_count() const {
        std::size_t s = 0;
        for (const auto& a : adj) s += a.size();
        return directed ? s : s / 2;
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_list() const {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j : adj[i])
                if (directed || i < j) out.emplace_back(i, j);
        return out;
    }

    std::vector<std::uint32_t> in_degrees() const {
        std::vector<std::uint32_t> deg(n, 0);
        if (!directed) {
            for (std::uint32_t i = 0; i < n; ++i) deg[i] = static_cast<std::uint32_t>(adj[i].size());
            return deg;
        }
        for (const auto& a : adj)
            for (std::uint32_t j : a) ++deg[j];
        return deg;
    }

    /// True when every edge of *this also lies in g.
    bool subgraph_of(const SpatialGraph& g) const {
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j : adj[i])
                if (!g.has_edge(i, j)) return false;
        return true;
    }
};

inline SpatialGraph make_graph(std::uint32_t n, bool directed, std::string rule) {
    SpatialGraph g;
    g.n = n;
    g.directed = directed;
    g.adj.assign(n, {});
    g.rule = std::move(rule);
    return g;
}

/// Gilbert graph: edge between points at distance strictly below r.
inline SpatialGraph gilbert(const PointPattern& p, double r) {
    if (!(r >= 0)) throw std::invalid_argument("gilbert: radius must be >= 0");
    auto g = make_graph(static_cast<std::uint32_t>(p.size()), false, "gilbert(" + std::to_string(r) + ")");
    if (r == 0.0) return g;
    const double r2 = r * r;
    for (std::uint32_t i = 0; i < p.size(); ++i) {
        p.grid.for_each_candidate(p.pts[i], r, [&](std::uint32_t j) {
            if (j <= i) return;
            if (pair_distance_sq(p.pts[i], p.pts[j], p.window) < r2) g.add_edge(i, j);
        });
    }
    g.finish();
    return g;
}

/// Total received power at y from all pattern points not excluded,
/// boundary-mode aware. Grid-assisted when ell has compact support.
inline double interference_at(const PointPattern& p, Point y, const PathLoss& pl,
                              const std::vector<std::uint32_t>& exclude = {}) {
    if (!p.window.contains(y)) throw std::invalid_argument("interference_at: point outside window");
    auto excluded = [&](std::uint32_t id) {
        return std::find(exclude.begin(), exclude.end(), id) != exclude.end();
    };
    double sum = 0.0;
    if (pl.compact()) {
        p.grid.for_each_candidate(y, pl.r_max, [&](std::uint32_t id) {
            if (excluded(id)) return;
            sum += pl.eval_sq(pair_distance_sq(p.pts[id], y, p.window));
        });
        return sum;
    }
    for (std::uint32_t id = 0; id < p.size(); ++id) {
        if (excluded(id)) continue;
        sum += pl.eval_sq(pair_distance_sq(p.pts[id], y, p.window));
    }
    return sum;
}

/// Cached per-vertex interference I_j = sum_{k != j} ell(|X_k - X_j|).
struct InterferenceField {
    std::vector<double> total;
    Boundary boundary = Boundary::Periodic;
};

inline InterferenceField interference_field(const PointPattern& p, const PathLoss& pl) {
    InterferenceField f;
    f.boundary = p.window.boundary;
    const std::size_t n = p.size();
    f.total.assign(n, 0.0);
    if (pl.compact()) {
        const double rm2 = pl.r_max * pl.r_max;
        for (std::uint32_t i = 0; i < n; ++i) {
            p.grid.for_each_candidate(p.pts[i], pl.r_max, [&](std::uint32_t j) {
                if (j <= i) return;
                const double d2 = pair_distance_sq(p.pts[i], p.pts[j], p.window);
                if (d2 > rm2) return;
                const double v = pl.eval_sq(d2);
                f.total[i] += v;
                f.total[j] += v;
            });
        }
        return f;
    }
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) {
            const double v = pl.eval_sq(pair_distance_sq(p.pts[i], p.pts[j], p.window));
            f.total[i] += v;
            f.total[j] += v;
        }
    return f;
}

struct ShiftedInterference {
    double total = 0.0;
    double inner = 0.0;  // points inside Q_{2a sqrt(d)}(z)
    double outer = 0.0;
};

/// I_a(z) = sum_i ell_a(|z - X_i|), split at the cube Q_{2a sqrt(d)}(z).
inline ShiftedInterference shifted_interference(const PointPattern& p, Point z, double a,
                                                const PathLoss& pl) {
    if (!(a > 0)) throw std::invalid_argument("shifted_interference: a must be > 0");
    ShiftedInterference out;
    const int d = p.window.dim;
    const double half_box = a * std::sqrt(static_cast<double>(d));  // half-side of Q_{2a sqrt d}
    const bool periodic = p.window.boundary == Boundary::Periodic;
    for (const auto& x : p.pts) {
        double dx = x.x - z.x, dy = x.y - z.y, dz = d == 3 ? x.z - z.z : 0.0;
        if (periodic) {
            dx = periodic_delta(dx, p.window.extent(0));
            dy = periodic_delta(dy, p.window.extent(1));
            if (d == 3) dz = periodic_delta(dz, p.window.extent(2));
        } else {
            dx = std::fabs(dx);
            dy = std::fabs(dy);
            dz = std::fabs(dz);
        }
        const double v = shifted_eval(pl, a, d, std::sqrt(dx * dx + dy * dy + dz * dz));
        const bool in_box = dx <= half_box && dy <= half_box && (d == 2 || dz <= half_box);
        (in_box ? out.inner : out.outer) += v;
    }
    out.total = out.inner + out.outer;
    return out;
}

/// Largest integer strictly below 1 + 1/(tau*gamma): the in-degree bound of
/// the directed SINR graph.
inline int max_in_degree_bound(const SinrParams& sp) {
    if (!(sp.gamma > 0)) throw std::invalid_argument("max_in_degree_bound: gamma must be > 0");
    return static_cast<int>(std::ceil(1.0 + 1.0 / (sp.tau * sp.gamma))) - 1;
}

struct SinrDecision {
    double value = 0.0;  // SINR when N0 > 0; signal-vs-threshold margin when N0 = 0
    bool edge = false;
};

/// SINR of the transmission i -> j, and the threshold decision. With N0 = 0
/// the convention compares ell(|Xi-Xj|) against tau*gamma*interference.
inline SinrDecision sinr_value(const PointPattern& p, std::uint32_t i, std::uint32_t j,
                               const SinrParams& sp, const PathLoss& pl) {
    if (i == j) throw std::invalid_argument("sinr_value: i and j must differ");
    const double signal = pl.eval_sq(pair_distance_sq(p.pts[i], p.pts[j], p.window));
    const double interf = sp.gamma > 0 ? interference_at(p, p.pts[j], pl, {i, j}) : 0.0;
    SinrDecision out;
    if (sp.noise > 0) {
        out.value = signal / (sp.noise + sp.gamma * interf);
        out.edge = out.value > sp.tau;
    } else {
        out.value = signal - sp.tau * sp.gamma * interf;
        out.edge = signal > sp.tau * sp.gamma * interf;
    }
    return out;
}

namespace detail {

/// Candidate pruning radius for SINR arcs: exact necessary conditions only.
inline double arc_prune_radius(const SinrParams& sp, const PathLoss& pl) {
    double r = std::numeric_limits<double>::infinity();
    if (pl.compact()) r = pl.r_max;
    if (sp.noise > 0) {
        if (sp.tau * sp.noise >= pl.eval(0.0)) return 0.0;  // no arc can pass
        const double rb = std::pow(sp.tau * sp.noise, -1.0 / pl.alpha);
        r = std::min(r, rb);
    }
    return r;
}

template <typename F>
void for_each_arc_candidate(const PointPattern& p, double prune, F&& f) {
    const std::uint32_t n = static_cast<std::uint32_t>(p.size());
    if (std::isinf(prune)) {
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = i + 1; j < n; ++j)
                f(i, j, pair_distance_sq(p.pts[i], p.pts[j], p.window));
        return;
    }
    if (prune <= 0.0) return;
    const double r2 = prune * prune;
    for (std::uint32_t i = 0; i < n; ++i) {
        p.grid.for_each_candidate(p.pts[i], prune, [&](std::uint32_t j) {
            if (j <= i) return;
            const double d2 = pair_distance_sq(p.pts[i], p.pts[j], p.window);
            if (d2 < r2) f(i, j, d2);
        });
    }
}

}  // namespace detail

/// Directed SINR graph: arc i -> j when SINR(i, j) exceeds tau. Candidates are
/// pruned by the exact necessary distance conditions (r_B when N0 > 0, r_max
/// for compact ell), which never changes the result.
inline SpatialGraph sinr_digraph(const PointPattern& p, const SinrParams& sp, const PathLoss& pl) {
    auto g = make_graph(static_cast<std::uint32_t>(p.size()), true, "sinr");
    const double prune = detail::arc_prune_radius(sp, pl);
    if (sp.gamma == 0.0) {
        // SNR graph; with N0 > 0 this is exactly the Gilbert graph at r_B
        detail::for_each_arc_candidate(p, prune, [&](std::uint32_t i, std::uint32_t j, double) {
            g.add_edge(i, j);
            g.add_edge(j, i);
        });
        g.finish();
        return g;
    }
    const InterferenceField field = interference_field(p, pl);
    detail::for_each_arc_candidate(p, prune, [&](std::uint32_t i, std::uint32_t j, double d2) {
        const double signal = pl.eval_sq(d2);
        if (signal <= 0.0) return;
        // interference at the receiver, excluding transmitter and receiver
        const double to_j = field.total[j] - signal;
        const double to_i = field.total[i] - signal;
        if (sp.noise > 0) {
            if (signal > sp.tau * (sp.noise + sp.gamma * to_j)) g.add_edge(i, j);
            if (signal > sp.tau * (sp.noise + sp.gamma * to_i)) g.add_edge(j, i);
        } else {
            if (signal > sp.tau * sp.gamma * to_j) g.add_edge(i, j);
            if (signal > sp.tau * sp.gamma * to_i) g.add_edge(j, i);
        }
    });
    g.finish();
    return g;
}

/// Undirected SINR graph: edge when both arcs are present.
inline SpatialGraph sinr_graph(const PointPattern& p, const SinrParams& sp, const PathLoss& pl) {
    const SpatialGraph d = sinr_digraph(p, sp, pl);
    auto g = make_graph(d.n, false, "sinr");
    for (std::uint32_t i = 0; i < d.n; ++i)
        for (std::uint32_t j : d.adj[i])
            if (i < j && d.has_edge(j, i)) g.add_edge(i, j);
    g.finish();
    return g;
}

/// k-nearest-neighbour graph. Bidirectional: edge when the points are
/// mutually among each other's k nearest; otherwise an edge needs only one
/// of the two relations. Distance ties break by vertex id.
inline SpatialGraph knn_graph(const PointPattern& p, int k, bool bidirectional) {
    const std::uint32_t n = static_cast<std::uint32_t>(p.size());
    if (k < 1) throw std::invalid_argument("knn_graph: k must be >= 1");
    if (n < 2) throw std::invalid_argument("knn_graph: need at least 2 points");
    std::vector<std::vector<std::uint32_t>> nearest(n);
    std::vector<std::pair<double, std::uint32_t>> cand;
    for (std::uint32_t i = 0; i < n; ++i) {
        cand.clear();
        cand.reserve(n - 1);
        for (std::uint32_t j = 0; j < n; ++j)
            if (j != i) cand.emplace_back(pair_distance_sq(p.pts[i], p.pts[j], p.window), j);
        const std::size_t kk = std::min<std::size_t>(k, cand.size());
        std::partial_sort(cand.begin(), cand.begin() + kk, cand.end());
        nearest[i].reserve(kk);
        for (std::size_t t = 0; t < kk; ++t) nearest[i].push_back(cand[t].second);
        std::sort(nearest[i].begin(), nearest[i].end());
    }
    auto g = make_graph(n, false,
                        std::string(bidirectional ? "knn-bi(" : "knn(") + std::to_string(k) + ")");
    if (bidirectional) {
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j : nearest[i])
                if (j > i && std::binary_search(nearest[j].begin(), nearest[j].end(), i))
                    g.add_edge(i, j);
    } else {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j : nearest[i])
                pairs.emplace_back(std::min(i, j), std::max(i, j));
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
        for (auto [i, j] : pairs) g.add_edge(i, j);
    }
    g.finish();
    return g;
}

/// Degree histogram (index = degree; undirected degree or out-degree).
inline std::vector<std::size_t> degree_histogram(const SpatialGraph& g) {
    std::vector<std::size_t> h;
    for (const auto& a : g.adj) {
        const std::size_t d = a.size();
        if (d >= h.size()) h.resize(d + 1, 0);
        ++h[d];
    }
    if (h.empty()) h.resize(1, 0);
    return h;
}

}  // namespace coxsinr
