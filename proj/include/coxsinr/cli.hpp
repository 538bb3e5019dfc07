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

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coxsinr/config.hpp"
#include "coxsinr/io.hpp"
#include "coxsinr/svg.hpp"

namespace coxsinr::cli {

inline constexpr const char* kVersion = "0.1.0";

namespace detail {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::optional<double> lambda, gamma, r;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline RunConfig load(const CommonOpts& o) {
    RunConfig rc = load_config(read_file(o.config_path));
    if (o.seed) rc.est.master_seed = *o.seed;
    rc.est.threads = std::max(1, o.threads);
    if (o.lambda) rc.lambda = *o.lambda;
    if (o.gamma) rc.est.sinr.gamma = *o.gamma;
    if (o.r) rc.est.gilbert_r = *o.r;
    return rc;
}

inline std::string out_path(const CommonOpts& o, const std::string& name) {
    std::filesystem::create_directories(o.out_dir);
    return (std::filesystem::path(o.out_dir) / name).string();
}

inline nlohmann::json base_manifest(const std::string& subcommand, const RunConfig& rc,
                                    const CommonOpts& o) {
    nlohmann::json j;
    j["subcommand"] = subcommand;
    j["version"] = kVersion;
    j["master_seed"] = rc.est.master_seed;
    j["threads"] = rc.est.threads;
    j["boundary"] = rc.est.window.boundary == Boundary::Periodic ? "periodic" : "hard";
    j["guard"] = rc.est.window.guard;
    const ValidationReport rep = validate(rc.est.pathloss, rc.est.sinr, rc.est.window.dim);
    j["validation"] = {{"shape_ok", rep.shape_ok},
                       {"power_ok", rep.power_ok},
                       {"integrable_ok", rep.integrable_ok},
                       {"notes", rep.notes}};
    j["calibration"] = {{"voronoi_edge_intensity", calibration::kVoronoiEdgeIntensity},
                        {"voronoi_edge_intensity_ci", calibration::kVoronoiEdgeIntensityCi},
                        {"delaunay_edge_intensity", calibration::kDelaunayEdgeIntensity},
                        {"delaunay_edge_intensity_ci", calibration::kDelaunayEdgeIntensityCi}};
    j["config"] = rc.config_text;
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["timestamp"] = buf;
    j["out_dir"] = o.out_dir;
    return j;
}

inline void finish_manifest(nlohmann::json& j, const CommonOpts& o,
                            const std::vector<std::string>& outputs,
                            std::chrono::steady_clock::time_point t0) {
    j["outputs"] = outputs;
    j["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    write_file(out_path(o, "manifest.json"), j.dump(2) + "\n");
}

inline SpatialGraph build_graph(const RunConfig& rc, const PointPattern& pat,
                                const std::string& rule) {
    if (rule == "gilbert") return gilbert(pat, rc.est.gilbert_r);
    if (rule == "knn") return knn_graph(pat, rc.knn_k, rc.knn_bidirectional);
    if (rule == "sinr") return sinr_graph(pat, rc.est.sinr, rc.est.pathloss);
    throw ConfigError("graph rule must be sinr, gilbert or knn");
}

inline int cmd_validate(const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig rc = load(o);
    const ValidationReport rep = validate(rc.est.pathloss, rc.est.sinr, rc.est.window.dim);
    std::cout << "shape:       " << (rep.shape_ok ? "PASS" : "FAIL") << "\n";
    std::cout << "power:       " << (rep.power_ok ? "PASS" : "FAIL") << "\n";
    std::cout << "integrable:  " << (rep.integrable_ok ? "PASS" : "FAIL") << "\n";
    for (const auto& n : rep.notes) std::cout << "note: " << n << "\n";
    nlohmann::json j = base_manifest("validate", rc, o);
    finish_manifest(j, o, {}, t0);
    return 0;
}

inline int cmd_sample(const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig rc = load(o);
    const SeedPath s = SeedPath::root(rc.est.master_seed).child("sample", 0);
    const Environment env = sample_environment(rc.est.model, rc.est.window, s);
    const PointPattern pat = sample_cox(env, rc.lambda, s);
    std::vector<std::string> outputs = {"pattern.csv", "environment.json"};
    write_file(out_path(o, "pattern.csv"), pattern_csv(pat));
    write_file(out_path(o, "environment.json"), environment_json(env).dump(2) + "\n");
    if (!env.segments.segments.empty()) {
        write_file(out_path(o, "segments.csv"), segments_csv(env.segments));
        outputs.push_back("segments.csv");
    }
    nlohmann::json j = base_manifest("sample", rc, o);
    j["lambda"] = rc.lambda;
    j["points"] = pat.size();
    finish_manifest(j, o, outputs, t0);
    std::cout << "sampled " << pat.size() << " points\n";
    return 0;
}

inline int cmd_graph(const CommonOpts& o, const std::string& rule_flag) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig rc = load(o);
    const std::string rule = rule_flag.empty() ? rc.graph_rule : rule_flag;
    const SeedPath s = SeedPath::root(rc.est.master_seed).child("sample", 0);
    const Environment env = sample_environment(rc.est.model, rc.est.window, s);
    const PointPattern pat = sample_cox(env, rc.lambda, s);
    const SpatialGraph g = build_graph(rc, pat, rule);
    write_file(out_path(o, "edges.csv"), graph_csv(g));
    write_file(out_path(o, "degrees.csv"), degree_histogram_csv(g));
    nlohmann::json j = base_manifest("graph", rc, o);
    j["rule"] = rule;
    j["lambda"] = rc.lambda;
    j["points"] = pat.size();
    j["edges"] = g.edge_count();
    finish_manifest(j, o, {"edges.csv", "degrees.csv"}, t0);
    std::cout << "graph " << rule << ": " << pat.size() << " vertices, " << g.edge_count()
              << " edges\n";
    return 0;
}

inline int cmd_percolate(const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig rc = load(o);
    const SeedPath s = SeedPath::root(rc.est.master_seed).child("sample", 0);
    const Environment env = sample_environment(rc.est.model, rc.est.window, s);
    const PointPattern pat = sample_cox(env, rc.lambda, s);

    GoodSiteSpec spec;
    spec.n = rc.block_n;
    spec.r = rc.block_r;
    if (rc.stabilization == "constant") {
        spec.check = StabilizationCheck::ConstantRange;
        const auto b = dependence_range(rc.est.model);
        if (!b) throw ConfigError("percolate: constant-range stabilization needs a b-dependent model");
        spec.b = *b;
    } else if (rc.stabilization == "voronoi") {
        spec.check = StabilizationCheck::EmpiricalVoronoi;
    } else if (rc.stabilization == "skip") {
        spec.check = StabilizationCheck::Skip;
    } else {
        throw ConfigError("percolate: stabilization must be constant, voronoi or skip");
    }

    // sites are swept around the window center
    const Window& w = rc.est.window;
    const int z0x = static_cast<int>(std::lround((w.lower.x + w.upper.x) / 2 / spec.n));
    const int z0y = static_cast<int>(std::lround((w.lower.y + w.upper.y) / 2 / spec.n));
    std::vector<SiteSweepEntry> entries;
    for (int zx = -rc.site_range; zx <= rc.site_range; ++zx)
        for (int zy = -rc.site_range; zy <= rc.site_range; ++zy) {
            SiteSweepEntry e;
            e.zx = zx;
            e.zy = zy;
            e.good = n_good(pat, env, spec, z0x + zx, z0y + zy);
            const Point nz{spec.n * (z0x + zx), spec.n * (z0y + zy), 0.0};
            e.i6n = shifted_interference(pat, nz, 6.0 * spec.n, rc.est.pathloss).total;
            e.b_event = rc.big_m > 0 && e.i6n <= rc.big_m;
            entries.push_back(e);
        }
    write_file(out_path(o, "sites.csv"), site_sweep_csv(entries));

    const auto g = gilbert(pat, rc.block_r);
    const auto stats = largest_cluster_stats(g);
    nlohmann::json j = base_manifest("percolate", rc, o);
    j["lambda"] = rc.lambda;
    j["points"] = pat.size();
    j["largest_fraction"] = stats.largest_fraction;
    j["components"] = stats.component_count;
    finish_manifest(j, o, {"sites.csv"}, t0);
    long good = 0;
    for (const auto& e : entries) good += e.good.good ? 1 : 0;
    std::cout << "sites good: " << good << "/" << entries.size()
              << ", largest cluster fraction " << stats.largest_fraction << "\n";
    return 0;
}

inline int cmd_sweep(const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig rc = load(o);
    std::vector<double> lams = rc.lambda_grid.empty() ? std::vector<double>{rc.lambda}
                                                      : rc.lambda_grid;
    std::vector<double> gams =
        rc.gamma_grid.empty() ? std::vector<double>{rc.est.sinr.gamma} : rc.gamma_grid;
    std::vector<SweepTuple> grid;
    for (double lam : lams)
        for (double gam : gams)
            grid.push_back({lam, gam, rc.est.gilbert_r, rc.est.crossing_n});
    const auto rows = sweep(rc.est, grid);
    write_file(out_path(o, "sweep.csv"), sweep_csv(rows));
    nlohmann::json j = base_manifest("sweep", rc, o);
    j["rows"] = rows.size();
    finish_manifest(j, o, {"sweep.csv"}, t0);
    std::cout << "sweep: " << rows.size() << " rows\n";
    return 0;
}

inline int cmd_bisect(const CommonOpts& o, const std::string& target) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig rc = load(o);
    nlohmann::json j = base_manifest("bisect", rc, o);
    std::vector<SweepRow> evals;
    double estimate = 0, lo = 0, hi = 0;
    if (target == "lambda") {
        const auto res = bisect_lambda_c(rc.est, rc.est.gilbert_r, rc.lambda_lo, rc.lambda_hi);
        estimate = res.estimate;
        lo = res.lo;
        hi = res.hi;
        evals = res.evals;
    } else if (target == "gamma") {
        const auto res = bisect_gamma_star(rc.est, rc.lambda, rc.gamma_hi);
        estimate = res.estimate;
        lo = res.lo;
        hi = res.hi;
        evals = res.evals;
        j["p_at_zero"] = res.p_at_zero;
    } else {
        throw ConfigError("bisect: --target must be lambda or gamma");
    }
    write_file(out_path(o, "bisect.csv"), sweep_csv(evals));
    j["target"] = target;
    j["estimate"] = estimate;
    j["bracket_lo"] = lo;
    j["bracket_hi"] = hi;
    finish_manifest(j, o, {"bisect.csv"}, t0);
    std::cout << "bisect " << target << ": estimate " << fmt(estimate) << " bracket [" << fmt(lo)
              << ", " << fmt(hi) << "]\n";
    return 0;
}

inline int cmd_render(const CommonOpts& o, const std::string& rule_flag) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig rc = load(o);
    const std::string rule = rule_flag.empty() ? rc.graph_rule : rule_flag;
    const SeedPath s = SeedPath::root(rc.est.master_seed).child("sample", 0);
    const Environment env = sample_environment(rc.est.model, rc.est.window, s);
    const PointPattern pat = sample_cox(env, rc.lambda, s);
    const SpatialGraph g = build_graph(rc, pat, rule);
    SvgStyle style;
    style.show_environment = rc.est.model.kind != IntensityKind::Homogeneous;
    const double ext = std::max(rc.est.window.extent(0), rc.est.window.extent(1));
    style.point_radius = ext / 220.0;
    style.edge_width = ext / 900.0;
    write_file(out_path(o, "figure.svg"), render_svg(pat, g, style, &env));
    nlohmann::json j = base_manifest("render", rc, o);
    j["rule"] = rule;
    j["points"] = pat.size();
    j["edges"] = g.edge_count();
    finish_manifest(j, o, {"figure.svg"}, t0);
    std::cout << "rendered " << pat.size() << " points, " << g.edge_count() << " edges\n";
    return 0;
}

}  // namespace detail

/// Entry point for the `coxsinr` tool; argv without the program name.
/// Exit codes: 0 success, 2 config error, 3 runtime error.
inline int run(const std::vector<std::string>& args) {
    CLI::App app{"Cox-process SINR/Gilbert percolation simulator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    detail::CommonOpts opts;
    std::string rule_flag;
    std::string target = "lambda";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "config file path")->required();
        cmd->add_option("--seed", opts.seed, "master seed override");
        cmd->add_option("--out", opts.out_dir, "output directory");
        cmd->add_option("--threads", opts.threads, "worker count (never affects output)");
        cmd->add_option("--lambda", opts.lambda, "intensity override");
        cmd->add_option("--gamma", opts.gamma, "interference cancellation factor override");
        cmd->add_option("--r", opts.r, "connection radius override");
    };

    CLI::App* c_sample = app.add_subcommand("sample", "sample an environment and point pattern");
    CLI::App* c_graph = app.add_subcommand("graph", "build and export a graph");
    CLI::App* c_perc = app.add_subcommand("percolate", "site-sweep block diagnostics");
    CLI::App* c_sweep = app.add_subcommand("sweep", "Monte Carlo proxy sweep over a grid");
    CLI::App* c_bisect = app.add_subcommand("bisect", "bisection for lambda_c or gamma*");
    CLI::App* c_render = app.add_subcommand("render", "emit an SVG figure");
    CLI::App* c_valid = app.add_subcommand("validate", "check the path-loss assumptions");
    for (CLI::App* c : {c_sample, c_graph, c_perc, c_sweep, c_bisect, c_render, c_valid})
        add_common(c);
    c_graph->add_option("--rule", rule_flag, "sinr | gilbert | knn");
    c_render->add_option("--rule", rule_flag, "sinr | gilbert | knn");
    c_bisect->add_option("--target", target, "lambda | gamma");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(c_sample)) return detail::cmd_sample(opts);
        if (app.got_subcommand(c_graph)) return detail::cmd_graph(opts, rule_flag);
        if (app.got_subcommand(c_perc)) return detail::cmd_percolate(opts);
        if (app.got_subcommand(c_sweep)) return detail::cmd_sweep(opts);
        if (app.got_subcommand(c_bisect)) return detail::cmd_bisect(opts, target);
        if (app.got_subcommand(c_render)) return detail::cmd_render(opts, rule_flag);
        if (app.got_subcommand(c_valid)) return detail::cmd_validate(opts);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace coxsinr::cli
