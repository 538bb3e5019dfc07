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

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "coxsinr/estimators.hpp"

namespace coxsinr {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Plain-text key/value sections: `[section]`, `key = value`, `#` comments.
/// Unknown keys are fatal; lookups track consumption.
class ConfigFile {
  public:
    static ConfigFile parse(const std::string& text) {
        ConfigFile cf;
        cf.text_ = text;
        std::istringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find_first_of("#;");
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("config line " + std::to_string(lineno) +
                                      ": unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                if (section.empty())
                    throw ConfigError("config line " + std::to_string(lineno) + ": empty section name");
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
            if (section.empty())
                throw ConfigError("config line " + std::to_string(lineno) + ": key before any section");
            cf.values_[section][key] = value;
        }
        return cf;
    }

    const std::string& text() const { return text_; }

    bool has(const std::string& section, const std::string& key) const {
        const auto s = values_.find(section);
        return s != values_.end() && s->second.count(key) > 0;
    }

    std::string get(const std::string& section, const std::string& key) const {
        if (!has(section, key)) throw ConfigError("config: missing key " + section + "." + key);
        consumed_.insert(section + "." + key);
        return values_.at(section).at(key);
    }

    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const {
        if (!has(section, key)) return fallback;
        return get(section, key);
    }

    double get_double(const std::string& section, const std::string& key) const {
        return to_double(get(section, key), section, key);
    }
    double get_double_or(const std::string& section, const std::string& key, double fallback) const {
        if (!has(section, key)) return fallback;
        return to_double(get(section, key), section, key);
    }
    long get_long_or(const std::string& section, const std::string& key, long fallback) const {
        if (!has(section, key)) return fallback;
        return static_cast<long>(to_double(get(section, key), section, key));
    }
    std::uint64_t get_u64_or(const std::string& section, const std::string& key,
                             std::uint64_t fallback) const {
        if (!has(section, key)) return fallback;
        const std::string v = get(section, key);
        try {
            return std::stoull(v);
        } catch (...) {
            throw ConfigError("config: " + section + "." + key + " is not an unsigned integer");
        }
    }
    bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const {
        if (!has(section, key)) return fallback;
        const std::string v = get(section, key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError("config: " + section + "." + key + " is not a boolean");
    }
    std::vector<double> get_list_or(const std::string& section, const std::string& key,
                                    std::vector<double> fallback) const {
        if (!has(section, key)) return fallback;
        const std::string v = get(section, key);
        std::vector<double> out;
        std::istringstream in(v);
        std::string item;
        while (std::getline(in, item, ',')) out.push_back(to_double(trim(item), section, key));
        if (out.empty()) throw ConfigError("config: " + section + "." + key + " is an empty list");
        return out;
    }

    static double parse_number(const std::string& v, const std::string& what) {
        return to_double(v, what, "value");
    }

    /// Fails listing every key that was never consumed by the schema.
    void ensure_all_consumed() const {
        std::vector<std::string> unknown;
        for (const auto& [section, kv] : values_)
            for (const auto& [key, value] : kv)
                if (consumed_.count(section + "." + key) == 0) unknown.push_back(section + "." + key);
        if (!unknown.empty()) {
            std::string msg = "config: unknown keys:";
            for (const auto& k : unknown) msg += " " + k;
            throw ConfigError(msg);
        }
    }

  private:
    static std::string trim(const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return "";
        const auto b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    }
    static double to_double(const std::string& v, const std::string& section,
                            const std::string& key) {
        try {
            std::size_t pos = 0;
            const double x = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            return x;
        } catch (...) {
            throw ConfigError("config: " + section + "." + key + " is not a number: '" + v + "'");
        }
    }

    std::string text_;
    std::map<std::string, std::map<std::string, std::string>> values_;
    mutable std::set<std::string> consumed_;
};

/// Everything a run needs, parsed from the five config sections.
struct RunConfig {
    EstimatorConfig est;
    double lambda = 1.0;  // intensity for sample/graph/percolate/render
    double lambda_lo = 0.5, lambda_hi = 3.0;
    double gamma_hi = 0.0;
    std::vector<double> lambda_grid, gamma_grid;
    std::string graph_rule = "sinr";  // sinr | gilbert | knn
    int knn_k = 4;
    bool knn_bidirectional = true;
    // percolate block diagnostics
    double block_n = 2.0;
    double block_r = 1.0;
    int site_range = 0;
    double big_m = 0.0;  // 0 = report I6n only, no B event threshold
    std::string stabilization = "skip";
    std::string config_text;
};

inline RunConfig load_config(const std::string& text) {
    const ConfigFile cf = ConfigFile::parse(text);
    RunConfig rc;
    rc.config_text = text;

    // [model]
    const std::string type = cf.get("model", "type");
    IntensityModel model;
    if (type == "poisson" || type == "homogeneous") {
        model = IntensityModel::homogeneous(cf.get_double_or("model", "density", 1.0));
    } else if (type == "shotnoise") {
        model = IntensityModel::shot_noise(cf.get_double("model", "lambda_s"),
                                           cf.get_double("model", "kernel_radius"),
                                           cf.get_double_or("model", "amplitude", 1.0));
    } else if (type == "modulated") {
        model = IntensityModel::modulated(
            cf.get_double("model", "lambda1"), cf.get_double("model", "lambda2"),
            {cf.get_double("model", "germ_intensity"), cf.get_double("model", "grain_radius")});
    } else if (type == "voronoi") {
        model = IntensityModel::voronoi(cf.get_double("model", "lambda_s"));
    } else if (type == "delaunay") {
        model = IntensityModel::delaunay_model(cf.get_double("model", "lambda_s"));
    } else {
        throw ConfigError("config: model.type must be poisson|shotnoise|modulated|voronoi|delaunay");
    }

    // [window]
    const int dim = static_cast<int>(cf.get_long_or("window", "dim", 2));
    const double w = cf.get_double("window", "width");
    const double h = cf.get_double("window", "height");
    const double depth = dim == 3 ? cf.get_double("window", "depth") : 0.0;
    const std::string bnd = cf.get_or("window", "boundary", "periodic");
    if (bnd != "periodic" && bnd != "hard")
        throw ConfigError("config: window.boundary must be periodic or hard");
    const Boundary boundary = bnd == "periodic" ? Boundary::Periodic : Boundary::Hard;
    double guard = 0.0;
    const std::string guard_s = cf.get_or("window", "guard", "auto");
    if (guard_s == "auto") {
        guard = boundary == Boundary::Periodic ? 0.0 : default_guard(model, dim);
    } else {
        guard = ConfigFile::parse_number(guard_s, "window.guard");
    }
    Window window;
    try {
        window = Window(dim, {0, 0, 0}, {w, h, depth}, boundary, guard);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    if (cf.get_bool_or("model", "normalize", true)) model = normalize(model, dim);

    // [pathloss]
    const std::string pk = cf.get_or("pathloss", "type", "truncated");
    PathLoss pl;
    if (pk == "truncated") {
        pl = PathLoss::truncated_power(cf.get_double_or("pathloss", "cap", 1.0),
                                       cf.get_double_or("pathloss", "alpha", 4.0));
    } else if (pk == "compact") {
        pl = PathLoss::compact_power(cf.get_double_or("pathloss", "cap", 1.0),
                                     cf.get_double_or("pathloss", "alpha", 4.0),
                                     cf.get_double("pathloss", "rmax"));
    } else {
        throw ConfigError("config: pathloss.type must be truncated or compact");
    }

    // [sinr]
    SinrParams sp;
    try {
        sp = SinrParams(cf.get_double("sinr", "n0"), cf.get_double("sinr", "tau"),
                        cf.get_double_or("sinr", "gamma", 0.0));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    // [estimator]
    EstimatorConfig est;
    est.model = model;
    est.pathloss = pl;
    est.sinr = sp;
    est.window = window;
    est.reps = static_cast<int>(cf.get_long_or("estimator", "reps", 100));
    const std::string proxy = cf.get_or("estimator", "proxy", "crossing");
    if (proxy == "crossing") {
        est.proxy = ProxyKind::CrossingHard;
    } else if (proxy == "fraction") {
        est.proxy = ProxyKind::LargestFraction;
    } else {
        throw ConfigError("config: estimator.proxy must be crossing or fraction");
    }
    est.crossing_alpha = cf.get_double_or("estimator", "alpha", 3.0);
    est.crossing_n = cf.get_double_or("estimator", "n", 0.0);
    est.frac_threshold = cf.get_double_or("estimator", "frac_threshold", 0.3);
    est.gilbert_r = cf.get_double_or("estimator", "r", 1.0);
    est.p_succ = cf.get_double_or("estimator", "p_succ", 0.5);
    est.tol = cf.get_double_or("estimator", "tol", 0.05);
    est.max_iter = static_cast<int>(cf.get_long_or("estimator", "max_iter", 60));
    est.master_seed = cf.get_u64_or("estimator", "seed", 1);
    const std::string rule = cf.get_or("estimator", "rule", "gilbert");
    if (rule == "gilbert") {
        est.rule = GraphRule::Gilbert;
    } else if (rule == "sinr") {
        est.rule = GraphRule::Sinr;
    } else {
        throw ConfigError("config: estimator.rule must be gilbert or sinr");
    }
    try {
        est.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    rc.est = est;

    rc.lambda = cf.get_double_or("estimator", "lambda", 1.0);
    rc.lambda_lo = cf.get_double_or("estimator", "lambda_lo", 0.5);
    rc.lambda_hi = cf.get_double_or("estimator", "lambda_hi", 3.0);
    rc.gamma_hi = cf.get_double_or("estimator", "gamma_hi", 0.0);
    rc.lambda_grid = cf.get_list_or("estimator", "lambda_grid", {});
    rc.gamma_grid = cf.get_list_or("estimator", "gamma_grid", {});
    rc.graph_rule = cf.get_or("estimator", "graph_rule", "sinr");
    rc.knn_k = static_cast<int>(cf.get_long_or("estimator", "k", 4));
    rc.knn_bidirectional = cf.get_bool_or("estimator", "bidirectional", true);
    rc.block_n = cf.get_double_or("estimator", "block_n", 2.0);
    rc.block_r = cf.get_double_or("estimator", "block_r", 1.0);
    rc.site_range = static_cast<int>(cf.get_long_or("estimator", "site_range", 0));
    rc.big_m = cf.get_double_or("estimator", "m", 0.0);
    rc.stabilization = cf.get_or("estimator", "stabilization", "skip");

    cf.ensure_all_consumed();
    return rc;
}

}  // namespace coxsinr
