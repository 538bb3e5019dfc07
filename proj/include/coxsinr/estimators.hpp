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

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "coxsinr/environment.hpp"
#include "coxsinr/graphs.hpp"
#include "coxsinr/percolation.hpp"

namespace coxsinr {

/// Runs f(0..n-1) across workers; results must be written to per-index slots
/// so the thread count never changes the output.
template <typename F>
void parallel_for(int n, int threads, F&& f) {
    threads = std::max(1, std::min(threads, n));
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct WilsonCi {
    double lo = 0.0, hi = 1.0;
};

/// Wilson 95% score interval for a binomial proportion.
inline WilsonCi wilson_ci(long successes, long trials) {
    if (trials <= 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    WilsonCi ci{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (successes == 0) ci.lo = 0.0;
    if (successes == trials) ci.hi = 1.0;
    return ci;
}

enum class ProxyKind { CrossingHard, LargestFraction };
enum class GraphRule { Gilbert, Sinr };

struct EstimatorConfig {
    IntensityModel model;
    PathLoss pathloss = PathLoss::truncated_power(1.0, 4.0);
    SinrParams sinr{0.25, 1.0, 0.0};
    Window window = Window::rect(10, 10, Boundary::Periodic);
    int reps = 100;
    ProxyKind proxy = ProxyKind::CrossingHard;
    double crossing_alpha = 3.0;
    double crossing_n = 0.0;  // 0 = fit the largest alpha*n x n rectangle
    double frac_threshold = 0.3;
    GraphRule rule = GraphRule::Gilbert;
    double gilbert_r = 1.0;
    double p_succ = 0.5;
    double tol = 0.05;
    int max_iter = 60;
    std::uint64_t master_seed = 1;
    int threads = 1;

    void validate() const {
        if (reps < 1) throw std::invalid_argument("estimator: reps must be >= 1");
        if (!(p_succ > 0 && p_succ < 1)) throw std::invalid_argument("estimator: p_succ in (0,1)");
        if (!(tol > 0)) throw std::invalid_argument("estimator: tolerance must be > 0");
    }
};

/// One sweep-table row. `ms` is serialized as zero so reruns stay
/// byte-identical; measured wall time lives in the run manifest.
struct SweepRow {
    std::string model;
    double lambda = 0, gamma = 0, r = 0, n = 0, alpha = 0;
    long reps = 0, successes = 0;
    double p_hat = 0, ci_lo = 0, ci_hi = 1;
    std::uint64_t seed = 0;
    long ms = 0;
};

class BracketError : public std::runtime_error {
  public:
    BracketError(const std::string& msg, double lo_p, double hi_p)
        : std::runtime_error(msg), lo_p(lo_p), hi_p(hi_p) {}
    double lo_p, hi_p;
};

namespace detail {

inline std::uint64_t bits_of(double x) { return std::bit_cast<std::uint64_t>(x); }

/// Rectangle for the crossing proxy, centered in the window, long axis x.
inline CrossingSpec crossing_spec_for(const EstimatorConfig& cfg, double margin_r) {
    CrossingSpec spec;
    spec.alpha = cfg.crossing_alpha;
    spec.r = margin_r;
    double n = cfg.crossing_n;
    if (n <= 0) n = std::min(cfg.window.extent(0) / cfg.crossing_alpha, cfg.window.extent(1));
    spec.n = n;
    const double w = spec.alpha * n, h = n;
    if (w > cfg.window.extent(0) + 1e-9 || h > cfg.window.extent(1) + 1e-9)
        throw std::invalid_argument("estimator: crossing rectangle exceeds the window");
    spec.anchor = {cfg.window.lower.x + (cfg.window.extent(0) - w) / 2,
                   cfg.window.lower.y + (cfg.window.extent(1) - h) / 2, 0.0};
    return spec;
}

/// Maximum SINR edge length: r_B when N0 > 0, else the path-loss support.
inline double sinr_edge_bound(const PathLoss& pl, const SinrParams& sp) {
    if (sp.noise > 0) {
        if (sp.tau * sp.noise >= pl.eval(0.0)) return 0.0;
        return std::min(std::pow(sp.tau * sp.noise, -1.0 / pl.alpha),
                        pl.compact() ? pl.r_max : std::numeric_limits<double>::infinity());
    }
    if (pl.compact()) return pl.r_max;
    throw std::invalid_argument("estimator: unbounded SINR edge length (N0 = 0, full support)");
}

/// Crossing of an arbitrary graph restricted to the rectangle.
inline bool graph_crossing(const PointPattern& p, const SpatialGraph& g, const CrossingSpec& spec) {
    const Box rect = spec.rect();
    std::vector<std::uint32_t> ids;
    std::vector<std::uint32_t> local(p.size(), 0xffffffffu);
    for (std::uint32_t i = 0; i < p.size(); ++i)
        if (rect.contains(p.pts[i])) {
            local[i] = static_cast<std::uint32_t>(ids.size());
            ids.push_back(i);
        }
    if (ids.empty()) return false;
    DisjointSets ds(ids.size());
    for (std::uint32_t i : ids)
        for (std::uint32_t j : g.adj[i])
            if (j > i && local[j] != 0xffffffffu) ds.unite(local[i], local[j]);
    const double half = spec.r / 2.0;
    std::vector<std::uint8_t> root_lo(ids.size(), 0), root_hi(ids.size(), 0);
    for (std::uint32_t t = 0; t < ids.size(); ++t) {
        const Point q = p.pts[ids[t]];
        const bool near_lo = spec.hard ? q.x - rect.lo.x < half : q.y - rect.lo.y < half;
        const bool near_hi = spec.hard ? rect.hi.x - q.x < half : rect.hi.y - q.y < half;
        const std::uint32_t r = ds.find(t);
        if (near_lo) root_lo[r] = 1;
        if (near_hi) root_hi[r] = 1;
    }
    for (std::uint32_t t = 0; t < ids.size(); ++t)
        if (root_lo[t] && root_hi[t]) return true;
    return false;
}

}  // namespace detail

/// Monte Carlo estimate of the percolation-proxy success probability at
/// (lambda, gamma). Every replication samples a fresh environment and
/// pattern; the result is deterministic in the master seed.
inline SweepRow estimate_proxy(const EstimatorConfig& cfg, double lambda, double gamma,
                               const SeedPath& base) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::uint8_t> success(cfg.reps, 0);
    parallel_for(cfg.reps, cfg.threads, [&](int k) {
        const SeedPath s = base.child("rep", static_cast<std::uint64_t>(k));
        const Environment env = sample_environment(cfg.model, cfg.window, s);
        const PointPattern pat = sample_cox(env, lambda, s);
        bool ok = false;
        if (cfg.rule == GraphRule::Gilbert) {
            if (cfg.proxy == ProxyKind::CrossingHard) {
                CrossingSpec spec = detail::crossing_spec_for(cfg, cfg.gilbert_r);
                ok = crossing(pat, spec);
            } else {
                const auto g = gilbert(pat, cfg.gilbert_r);
                ok = largest_cluster_stats(g).largest_fraction >= cfg.frac_threshold;
            }
        } else {
            const SinrParams sp = cfg.sinr.with_gamma(gamma);
            const auto g = sinr_graph(pat, sp, cfg.pathloss);
            if (cfg.proxy == ProxyKind::CrossingHard) {
                CrossingSpec spec =
                    detail::crossing_spec_for(cfg, detail::sinr_edge_bound(cfg.pathloss, sp));
                ok = detail::graph_crossing(pat, g, spec);
            } else {
                ok = largest_cluster_stats(g).largest_fraction >= cfg.frac_threshold;
            }
        }
        success[k] = ok ? 1 : 0;
    });
    SweepRow row;
    row.model = cfg.model.id();
    row.lambda = lambda;
    row.gamma = gamma;
    row.r = cfg.rule == GraphRule::Gilbert ? cfg.gilbert_r : 0.0;
    row.n = cfg.crossing_n;
    row.alpha = cfg.proxy == ProxyKind::CrossingHard ? cfg.crossing_alpha : 0.0;
    row.reps = cfg.reps;
    for (auto s : success) row.successes += s;
    row.p_hat = static_cast<double>(row.successes) / cfg.reps;
    const WilsonCi ci = wilson_ci(row.successes, row.reps);
    row.ci_lo = ci.lo;
    row.ci_hi = ci.hi;
    row.seed = base.state;
    row.ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                   t0)
                 .count();
    return row;
}

inline SweepRow estimate_proxy(const EstimatorConfig& cfg, double lambda, double gamma) {
    return estimate_proxy(cfg, lambda, gamma,
                          SeedPath::root(cfg.master_seed)
                              .child("lambda", detail::bits_of(lambda))
                              .child("gamma", detail::bits_of(gamma)));
}

struct BisectResult {
    double estimate = 0.0;
    double lo = 0.0, hi = 0.0;  // final bracket
    std::vector<SweepRow> evals;
};

/// Critical intensity for Gilbert-graph percolation at radius r, by bisection
/// on the proxy success probability. The bracket is validated first; each
/// lambda is evaluated with a seed derived from its value, so p_hat is a
/// deterministic function of lambda.
inline BisectResult bisect_lambda_c(EstimatorConfig cfg, double r, double lambda_lo,
                                    double lambda_hi) {
    cfg.validate();
    cfg.rule = GraphRule::Gilbert;
    cfg.gilbert_r = r;
    const SeedPath root = SeedPath::root(cfg.master_seed).child("lambda_c", detail::bits_of(r));
    auto eval = [&](double lam) {
        return estimate_proxy(cfg, lam, 0.0, root.child("lambda", detail::bits_of(lam)));
    };
    BisectResult res;
    SweepRow lo_row = eval(lambda_lo), hi_row = eval(lambda_hi);
    res.evals.push_back(lo_row);
    res.evals.push_back(hi_row);
    if (lo_row.p_hat >= cfg.p_succ || hi_row.p_hat < cfg.p_succ)
        throw BracketError("bisect_lambda_c: invalid bracket, p(" + std::to_string(lambda_lo) +
                               ") = " + std::to_string(lo_row.p_hat) + ", p(" +
                               std::to_string(lambda_hi) + ") = " + std::to_string(hi_row.p_hat),
                           lo_row.p_hat, hi_row.p_hat);
    double lo = lambda_lo, hi = lambda_hi;
    for (int it = 0; it < cfg.max_iter && hi - lo > cfg.tol; ++it) {
        const double mid = (lo + hi) / 2;
        const SweepRow row = eval(mid);
        res.evals.push_back(row);
        (row.p_hat >= cfg.p_succ ? hi : lo) = mid;
    }
    res.lo = lo;
    res.hi = hi;
    res.estimate = (lo + hi) / 2;
    return res;
}

namespace detail {

/// Per-replication cache for the gamma bisection: undirected candidate edges
/// with the critical gamma below which the edge exists, plus the proxy
/// vertex set. Shared across all gamma evaluations (common random numbers).
struct GammaReplicate {
    struct Edge {
        std::uint32_t i, j;
        double theta;
    };
    std::vector<Edge> edges;  // over proxy-local vertex ids
    std::uint32_t n = 0;
    std::vector<std::uint8_t> lo_mark, hi_mark;  // crossing marks (empty for fraction proxy)
    bool use_fraction = false;
    double frac_threshold = 0.3;

    bool success_at(double gamma) const {
        if (n == 0) return false;
        DisjointSets ds(n);
        for (const auto& e : edges)
            if (e.theta > gamma) ds.unite(e.i, e.j);
        if (use_fraction) {
            std::vector<std::uint32_t> count(n, 0);
            std::uint32_t best = 0;
            for (std::uint32_t v = 0; v < n; ++v) best = std::max(best, ++count[ds.find(v)]);
            return static_cast<double>(best) / n >= frac_threshold;
        }
        std::vector<std::uint8_t> rlo(n, 0), rhi(n, 0);
        for (std::uint32_t v = 0; v < n; ++v) {
            const std::uint32_t r = ds.find(v);
            if (lo_mark[v]) rlo[r] = 1;
            if (hi_mark[v]) rhi[r] = 1;
        }
        for (std::uint32_t v = 0; v < n; ++v)
            if (rlo[v] && rhi[v]) return true;
        return false;
    }

    /// sup{gamma : proxy succeeds}; 0 when it fails already at gamma -> 0+,
    /// +inf when it succeeds with the empty edge set.
    double critical_gamma() const {
        if (!success_at(0.0)) return 0.0;
        std::vector<double> thetas;
        thetas.reserve(edges.size());
        for (const auto& e : edges) thetas.push_back(e.theta);
        std::sort(thetas.begin(), thetas.end());
        thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
        if (thetas.empty() || success_at(thetas.back()))
            return std::numeric_limits<double>::infinity();
        // first threshold at which the proxy fails
        std::size_t lo = 0, hi = thetas.size() - 1;
        // invariant: success at every gamma < thetas[lo] tested so far; failure at thetas[hi]
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (success_at(thetas[mid]))
                lo = mid + 1;
            else
                hi = mid;
        }
        return thetas[lo];
    }
};

inline GammaReplicate build_gamma_replicate(const EstimatorConfig& cfg, double lambda,
                                            const SeedPath& s) {
    const Environment env = sample_environment(cfg.model, cfg.window, s);
    const PointPattern pat = sample_cox(env, lambda, s);
    const PathLoss& pl = cfg.pathloss;
    const SinrParams& sp = cfg.sinr;
    const double bound = sinr_edge_bound(pl, sp);
    if (!(bound > 0) || std::isinf(bound))
        throw std::invalid_argument("gamma bisection needs a finite SINR edge bound");

    GammaReplicate rep;
    rep.use_fraction = cfg.proxy == ProxyKind::LargestFraction;
    rep.frac_threshold = cfg.frac_threshold;

    std::vector<std::uint32_t> local(pat.size(), 0xffffffffu);
    if (rep.use_fraction) {
        rep.n = static_cast<std::uint32_t>(pat.size());
        for (std::uint32_t i = 0; i < pat.size(); ++i) local[i] = i;
    } else {
        const CrossingSpec spec = crossing_spec_for(cfg, bound);
        const Box rect = spec.rect();
        // no wrap edges inside the rectangle, or the restriction is not Euclidean
        if (pat.window.boundary == Boundary::Periodic &&
            (rect.hi.x - rect.lo.x > pat.window.extent(0) - bound + 1e-9 ||
             rect.hi.y - rect.lo.y > pat.window.extent(1) - bound + 1e-9))
            throw std::invalid_argument(
                "gamma bisection: rectangle too close to the periodic window size");
        std::vector<std::uint32_t> ids;
        for (std::uint32_t i = 0; i < pat.size(); ++i)
            if (rect.contains(pat.pts[i])) {
                local[i] = static_cast<std::uint32_t>(ids.size());
                ids.push_back(i);
            }
        rep.n = static_cast<std::uint32_t>(ids.size());
        rep.lo_mark.assign(rep.n, 0);
        rep.hi_mark.assign(rep.n, 0);
        const double half = spec.r / 2.0;
        for (std::uint32_t t = 0; t < ids.size(); ++t) {
            const Point q = pat.pts[ids[t]];
            if (spec.hard ? q.x - rect.lo.x < half : q.y - rect.lo.y < half) rep.lo_mark[t] = 1;
            if (spec.hard ? rect.hi.x - q.x < half : rect.hi.y - q.y < half) rep.hi_mark[t] = 1;
        }
    }

    const InterferenceField field = interference_field(pat, pl);
    auto arc_theta = [&](double signal, double interf) {
        if (interf <= 0.0) return std::numeric_limits<double>::infinity();
        const double numer = sp.noise > 0 ? signal / sp.tau - sp.noise : signal / sp.tau;
        return numer / interf;
    };
    detail::for_each_arc_candidate(pat, bound, [&](std::uint32_t i, std::uint32_t j, double d2) {
        if (local[i] == 0xffffffffu || local[j] == 0xffffffffu) return;
        const double signal = pl.eval_sq(d2);
        if (signal <= 0.0 || (sp.noise > 0 && signal <= sp.tau * sp.noise)) return;
        const double theta =
            std::min(arc_theta(signal, field.total[j] - signal),
                     arc_theta(signal, field.total[i] - signal));
        rep.edges.push_back({local[i], local[j], theta});
    });
    return rep;
}

}  // namespace detail

struct GammaStarResult {
    double estimate = 0.0;
    double lo = 0.0, hi = 0.0;      // final bracket
    double p_at_zero = 0.0;         // proxy success probability at gamma = 0
    std::vector<double> critical;   // per-replication critical gamma
    std::vector<SweepRow> evals;
};

/// Critical interference-cancellation factor gamma*(lambda) by bisection on
/// gamma, reusing the same seeded realizations across gamma values. Per
/// realization the success indicator is exactly monotone in gamma, so the
/// cached per-replication critical values determine every evaluation.
inline GammaStarResult bisect_gamma_star(EstimatorConfig cfg, double lambda, double gamma_hi = 0.0) {
    cfg.validate();
    cfg.rule = GraphRule::Sinr;
    if (gamma_hi <= 0) gamma_hi = 1.0 / cfg.sinr.tau;  // degree-bound cap
    const SeedPath root = SeedPath::root(cfg.master_seed).child("gamma_star", detail::bits_of(lambda));

    GammaStarResult res;
    res.critical.assign(cfg.reps, 0.0);
    parallel_for(cfg.reps, cfg.threads, [&](int k) {
        const auto rep = detail::build_gamma_replicate(
            cfg, lambda, root.child("rep", static_cast<std::uint64_t>(k)));
        res.critical[k] = rep.critical_gamma();
    });

    auto eval = [&](double gamma) {
        SweepRow row;
        row.model = cfg.model.id();
        row.lambda = lambda;
        row.gamma = gamma;
        row.n = cfg.crossing_n;
        row.alpha = cfg.proxy == ProxyKind::CrossingHard ? cfg.crossing_alpha : 0.0;
        row.reps = cfg.reps;
        for (double c : res.critical)
            if (c > gamma) ++row.successes;
        row.p_hat = static_cast<double>(row.successes) / cfg.reps;
        const WilsonCi ci = wilson_ci(row.successes, row.reps);
        row.ci_lo = ci.lo;
        row.ci_hi = ci.hi;
        row.seed = root.state;
        return row;
    };

    const SweepRow zero = eval(0.0);
    res.p_at_zero = zero.p_hat;
    res.evals.push_back(zero);
    if (zero.p_hat < cfg.p_succ) {
        // subcritical at gamma = 0: gamma* = 0 (domination by the SNR graph)
        res.estimate = res.lo = res.hi = 0.0;
        return res;
    }
    SweepRow top = eval(gamma_hi);
    res.evals.push_back(top);
    if (top.p_hat >= cfg.p_succ) {
        res.estimate = res.lo = res.hi = gamma_hi;
        return res;
    }
    double lo = 0.0, hi = gamma_hi;
    for (int it = 0; it < cfg.max_iter && hi - lo > cfg.tol; ++it) {
        const double mid = (lo + hi) / 2;
        const SweepRow row = eval(mid);
        res.evals.push_back(row);
        (row.p_hat >= cfg.p_succ ? lo : hi) = mid;
    }
    res.lo = lo;
    res.hi = hi;
    res.estimate = (lo + hi) / 2;
    return res;
}

struct SweepTuple {
    double lambda = 1.0;
    double gamma = 0.0;
    double r = 1.0;
    double n = 0.0;

    bool operator<(const SweepTuple& o) const {
        if (lambda != o.lambda) return lambda < o.lambda;
        if (gamma != o.gamma) return gamma < o.gamma;
        if (r != o.r) return r < o.r;
        return n < o.n;
    }
    bool operator==(const SweepTuple& o) const {
        return lambda == o.lambda && gamma == o.gamma && r == o.r && n == o.n;
    }
};

/// Evaluates estimate_proxy on every tuple. Per-tuple seeds derive from the
/// tuple's index in canonical sorted order, so permuting the grid permutes
/// the rows and nothing else.
inline std::vector<SweepRow> sweep(const EstimatorConfig& cfg, const std::vector<SweepTuple>& grid) {
    std::vector<SweepTuple> sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const SeedPath root = SeedPath::root(cfg.master_seed);
    std::vector<SweepRow> rows(grid.size());
    for (std::size_t t = 0; t < grid.size(); ++t) {
        const auto it = std::lower_bound(sorted.begin(), sorted.end(), grid[t]);
        const std::uint64_t canon = static_cast<std::uint64_t>(it - sorted.begin());
        EstimatorConfig local = cfg;
        local.gilbert_r = grid[t].r;
        if (grid[t].n > 0) local.crossing_n = grid[t].n;
        rows[t] = estimate_proxy(local, grid[t].lambda, grid[t].gamma, root.child("tuple", canon));
        rows[t].r = grid[t].r;
        rows[t].n = local.crossing_n;
    }
    return rows;
}

}  // namespace coxsinr
