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

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "coxsinr/environment.hpp"
#include "coxsinr/estimators.hpp"
#include "coxsinr/graphs.hpp"
#include "coxsinr/percolation.hpp"

namespace coxsinr {

/// 17 significant digits: round-trips doubles exactly.
inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

inline std::string pattern_csv(const PointPattern& p) {
    std::string s = p.window.dim == 3 ? "id,x,y,z\n" : "id,x,y\n";
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += std::to_string(i) + "," + fmt(p.pts[i].x) + "," + fmt(p.pts[i].y);
        if (p.window.dim == 3) s += "," + fmt(p.pts[i].z);
        s += "\n";
    }
    return s;
}

inline std::string graph_csv(const SpatialGraph& g) {
    std::string s = g.directed ? "src,dst,directed\n" : "src,dst\n";
    for (const auto& [i, j] : g.edge_list()) {
        s += std::to_string(i) + "," + std::to_string(j);
        if (g.directed) s += ",1";
        s += "\n";
    }
    return s;
}

inline std::string degree_histogram_csv(const SpatialGraph& g) {
    std::string s = "degree,count\n";
    const auto h = degree_histogram(g);
    for (std::size_t d = 0; d < h.size(); ++d)
        s += std::to_string(d) + "," + std::to_string(h[d]) + "\n";
    return s;
}

inline std::string segments_csv(const SegmentSet& set) {
    std::string s = "x1,y1,x2,y2\n";
    for (const auto& seg : set.segments)
        s += fmt(seg.a.x) + "," + fmt(seg.a.y) + "," + fmt(seg.b.x) + "," + fmt(seg.b.y) + "\n";
    return s;
}

/// Sweep table; `ms` is fixed to 0 so reruns are byte-identical.
inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string s = "model,lambda,gamma,r,n,alpha,reps,successes,p_hat,ci_lo,ci_hi,seed,ms\n";
    for (const auto& r : rows) {
        s += r.model + "," + fmt(r.lambda) + "," + fmt(r.gamma) + "," + fmt(r.r) + "," + fmt(r.n) +
             "," + fmt(r.alpha) + "," + std::to_string(r.reps) + "," + std::to_string(r.successes) +
             "," + fmt(r.p_hat) + "," + fmt(r.ci_lo) + "," + fmt(r.ci_hi) + "," +
             std::to_string(r.seed) + ",0\n";
    }
    return s;
}

struct SiteSweepEntry {
    int zx = 0, zy = 0;
    NGoodResult good;
    double i6n = 0.0;
    bool b_event = false;
};

inline std::string site_sweep_csv(const std::vector<SiteSweepEntry>& entries) {
    std::string s = "zx,zy,good,reason,I6n,B_event\n";
    for (const auto& e : entries) {
        std::string reason = NGoodResult::reason_name(e.good.reason);
        if (e.good.boundary_touching) reason += "+boundary";
        s += std::to_string(e.zx) + "," + std::to_string(e.zy) + "," +
             (e.good.good ? "1" : "0") + "," + reason + "," + fmt(e.i6n) + "," +
             (e.b_event ? "1" : "0") + "\n";
    }
    return s;
}

inline nlohmann::json seed_path_json(const SeedPath& s) {
    nlohmann::json j;
    j["master"] = s.master;
    nlohmann::json path = nlohmann::json::array();
    for (const auto& [label, index] : s.path) path.push_back({{"label", label}, {"index", index}});
    j["path"] = path;
    return j;
}

inline nlohmann::json model_json(const IntensityModel& m) {
    nlohmann::json j;
    j["type"] = m.id();
    j["normalized"] = m.normalized;
    switch (m.kind) {
        case IntensityKind::Homogeneous: j["density"] = m.density; break;
        case IntensityKind::ShotNoise:
            j["lambda_s"] = m.lambda_s;
            j["kernel_radius"] = m.kernel_radius;
            j["amplitude"] = m.amplitude;
            break;
        case IntensityKind::Modulated:
            j["lambda1"] = m.lambda1;
            j["lambda2"] = m.lambda2;
            j["germ_intensity"] = m.xi.germ_intensity;
            j["grain_radius"] = m.xi.grain_radius;
            break;
        case IntensityKind::VoronoiEdges:
        case IntensityKind::DelaunayEdges:
            j["lambda_s"] = m.lambda_s;
            j["norm"] = m.tess_norm;
            break;
    }
    return j;
}

/// Environment manifest: model, seed path, normalization constant, payload.
inline nlohmann::json environment_json(const Environment& env) {
    nlohmann::json j;
    j["model"] = model_json(env.model);
    j["seed"] = seed_path_json(env.seed);
    j["boundary"] = env.window.boundary == Boundary::Periodic ? "periodic" : "hard";
    j["guard"] = env.window.guard;
    if (!env.germs.empty()) {
        nlohmann::json g = nlohmann::json::array();
        for (const auto& p : env.germs) {
            if (env.window.dim == 3)
                g.push_back({p.x, p.y, p.z});
            else
                g.push_back({p.x, p.y});
        }
        j["germs"] = g;
    }
    if (!env.segments.segments.empty()) {
        nlohmann::json s = nlohmann::json::array();
        for (const auto& seg : env.segments.segments)
            s.push_back({seg.a.x, seg.a.y, seg.b.x, seg.b.y});
        j["segments"] = s;
        j["total_length"] = env.segments.total_length;
    }
    return j;
}

}  // namespace coxsinr
