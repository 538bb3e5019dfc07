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

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace coxsinr {

enum class PathLossKind { TruncatedPower, CompactPower };

/// Path-loss function, ell(r) = min{cap, r^-alpha}, optionally truncated to 0
/// beyond r_max. The plateau ends at upsilon0 = cap^(-1/alpha).
struct PathLoss {
    PathLossKind kind = PathLossKind::TruncatedPower;
    double cap = 1.0;
    double alpha = 4.0;
    double r_max = std::numeric_limits<double>::infinity();

    static PathLoss truncated_power(double cap, double alpha) {
        if (cap <= 0 || alpha <= 0) throw std::invalid_argument("pathloss: cap and alpha must be > 0");
        return {PathLossKind::TruncatedPower, cap, alpha,
                std::numeric_limits<double>::infinity()};
    }

    static PathLoss compact_power(double cap, double alpha, double r_max) {
        if (cap <= 0 || alpha <= 0 || r_max <= 0)
            throw std::invalid_argument("pathloss: cap, alpha and r_max must be > 0");
        return {PathLossKind::CompactPower, cap, alpha, r_max};
    }

    bool compact() const { return kind == PathLossKind::CompactPower; }

    /// End of the constant plateau, upsilon0.
    double plateau_end() const { return std::pow(cap, -1.0 / alpha); }

    double eval(double r) const {
        if (r < 0) throw std::invalid_argument("pathloss: negative distance");
        if (r > r_max) return 0.0;
        if (r <= plateau_end()) return cap;
        return std::pow(r, -alpha);
    }

    /// eval from a squared distance, with fast paths for the common exponents.
    double eval_sq(double r2) const {
        if (r2 > r_max * r_max) return 0.0;
        const double u0 = plateau_end();
        if (r2 <= u0 * u0) return cap;
        if (alpha == 4.0) return 1.0 / (r2 * r2);
        if (alpha == 2.0) return 1.0 / r2;
        if (alpha == 3.0) return 1.0 / (r2 * std::sqrt(r2));
        return std::pow(r2, -alpha / 2.0);
    }

    double operator()(double r) const { return eval(r); }
};

/// SINR parameters; the transmit power is fixed to 1.
struct SinrParams {
    double noise = 0.0;  // N0
    double tau = 1.0;
    double gamma = 0.0;

    SinrParams() = default;
    SinrParams(double n0, double tau_, double gamma_) : noise(n0), tau(tau_), gamma(gamma_) {
        if (noise < 0) throw std::invalid_argument("sinr: N0 must be >= 0");
        if (tau <= 0) throw std::invalid_argument("sinr: tau must be > 0");
        if (gamma < 0) throw std::invalid_argument("sinr: gamma must be >= 0");
        if (noise == 0 && gamma == 0)
            throw std::invalid_argument("sinr: gamma = N0 = 0 is degenerate");
    }

    SinrParams with_gamma(double g) const {
        SinrParams p = *this;
        p.gamma = g;
        if (p.noise == 0 && g == 0) throw std::invalid_argument("sinr: gamma = N0 = 0 is degenerate");
        return p;
    }
};

struct ValidationReport {
    bool shape_ok = true;        // constant plateau then strictly decreasing
    bool power_ok = true;        // 1 >= ell(0) > tau*N0
    bool integrable_ok = true;   // alpha > d (or compact support)
    std::vector<std::string> notes;

    bool all_ok() const { return shape_ok && power_ok && integrable_ok; }
};

/// Checks the path-loss assumptions. Violations are reported as warnings, not
/// fatal; runs proceed and the report lands in the manifest.
inline ValidationReport validate(const PathLoss& pl, const SinrParams& sp, int dim) {
    ValidationReport rep;
    if (pl.compact() && pl.plateau_end() > pl.r_max) {
        rep.shape_ok = false;
        rep.notes.push_back("plateau extends past r_max; function is never strictly decreasing");
    }
    if (pl.cap > 1.0) {
        rep.power_ok = false;
        rep.notes.push_back("ell(0) = " + std::to_string(pl.cap) + " exceeds 1");
    }
    if (!(pl.eval(0.0) > sp.tau * sp.noise)) {
        rep.power_ok = false;
        rep.notes.push_back("ell(0) <= tau*N0: the SNR graph is empty");
    }
    if (!pl.compact() && !(pl.alpha > dim)) {
        rep.integrable_ok = false;
        rep.notes.push_back("alpha <= d: integral of ell(|x|) diverges");
    }
    return rep;
}

/// SNR radius r_B = ell^-1(tau*N0).
inline double snr_radius(const PathLoss& pl, const SinrParams& sp) {
    if (sp.noise <= 0) throw std::invalid_argument("snr_radius: undefined for N0 = 0");
    const double target = sp.tau * sp.noise;
    if (target >= pl.eval(0.0)) throw std::invalid_argument("snr_radius: tau*N0 >= ell(0), no solution");
    const double r = std::pow(target, -1.0 / pl.alpha);
    if (pl.compact() && r > pl.r_max)
        throw std::invalid_argument("snr_radius: tau*N0 below ell(r_max), no solution inside support");
    return r;
}

/// Shifted path loss ell_a(r): ell(0) for r < a*sqrt(d)/2, else
/// ell(r - a*sqrt(d)/2). Dominates ell(|x - y|) for x in Q_a(z), r = |z - y|.
inline double shifted_eval(const PathLoss& pl, double a, int dim, double r) {
    if (a < 0 || r < 0) throw std::invalid_argument("shifted_eval: negative argument");
    const double shift = a * std::sqrt(static_cast<double>(dim)) / 2.0;
    if (r < shift) return pl.eval(0.0);
    return pl.eval(r - shift);
}

/// Uniform bound K0 on sums of ell_{6n} over distinct lattice sites:
/// 2^d + sum_{i=0}^{ceil(6 sqrt(d)/2)} ell(0)((2i+2)^d - (2i)^d)
///     + sum_{i>=ceil(6 sqrt(d)/2)} ((2i+2)^d - (2i)^d) ell(i - 6 sqrt(d)/2),
/// tail truncated once the increment drops below 1e-12 of the partial sum.
inline double k0_bound(const PathLoss& pl, int dim, double tail_eps = 1e-12) {
    if (!pl.compact() && !(pl.alpha > dim))
        throw std::invalid_argument("k0_bound: series diverges for alpha <= d");
    const double d = static_cast<double>(dim);
    const double half_diag = 6.0 * std::sqrt(d) / 2.0;
    const long head_end = static_cast<long>(std::ceil(half_diag));
    auto shell = [&](long i) {
        return std::pow(2.0 * i + 2.0, d) - std::pow(2.0 * i, d);
    };
    double sum = std::pow(2.0, d);
    for (long i = 0; i <= head_end; ++i) sum += pl.eval(0.0) * shell(i);
    // analytic bound on the remaining tail: terms beyond i are at most
    // 2^d d (h+2)^(d-1) (i-h)^(d-1-alpha) with h = 6 sqrt(d)/2
    const double c_tail = std::pow(2.0, d) * d * std::pow(half_diag + 2.0, d - 1.0);
    for (long i = head_end;; ++i) {
        const double arg = static_cast<double>(i) - half_diag;
        const double term = shell(i) * pl.eval(std::max(arg, 0.0));
        sum += term;
        if (pl.compact() && arg > pl.r_max) break;
        if (!pl.compact() && arg >= 1.0) {
            const double tail = c_tail * std::pow(arg, d - pl.alpha) / (pl.alpha - d);
            if (tail < tail_eps * sum || i >= 2000000L) {
                sum += tail;
                break;
            }
        }
    }
    return sum;
}

}  // namespace coxsinr
