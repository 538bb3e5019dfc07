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
#include <optional>
#include <stdexcept>
#include <string>

#include "coxsinr/calibration.hpp"

namespace coxsinr {

enum class IntensityKind { Homogeneous, ShotNoise, Modulated, VoronoiEdges, DelaunayEdges };

/// Boolean model of a homogeneous Poisson process: germ intensity + grain radius.
struct BooleanModelSpec {
    double germ_intensity = 0.0;
    double grain_radius = 0.0;
};

/// Specification of the random intensity measure. Rates are >= 0; the
/// normalize() op rescales so the mean mass per unit volume is 1.
struct IntensityModel {
    IntensityKind kind = IntensityKind::Homogeneous;
    double density = 1.0;        // homogeneous
    double lambda_s = 1.0;       // shot-noise germ / tessellation site intensity
    double kernel_radius = 0.5;  // shot-noise disk kernel k(x) = amplitude*1{|x|<kernel_radius}
    double amplitude = 1.0;
    double lambda1 = 0.0, lambda2 = 0.0;  // modulated
    BooleanModelSpec xi;
    double tess_norm = 1.0;  // mass per unit edge length (tessellations)
    bool normalized = false;

    static IntensityModel homogeneous(double density = 1.0) {
        IntensityModel m;
        m.kind = IntensityKind::Homogeneous;
        m.density = density;
        return m;
    }
    static IntensityModel shot_noise(double lambda_s, double kernel_radius,
                                     double amplitude = 1.0) {
        if (lambda_s < 0 || kernel_radius <= 0 || amplitude < 0)
            throw std::invalid_argument("shot_noise: bad parameters");
        IntensityModel m;
        m.kind = IntensityKind::ShotNoise;
        m.lambda_s = lambda_s;
        m.kernel_radius = kernel_radius;
        m.amplitude = amplitude;
        return m;
    }
    static IntensityModel modulated(double lambda1, double lambda2, BooleanModelSpec xi) {
        if (lambda1 < 0 || lambda2 < 0 || lambda1 + lambda2 <= 0)
            throw std::invalid_argument("modulated: need lambda1, lambda2 >= 0, lambda1+lambda2 > 0");
        if (xi.germ_intensity <= 0 || xi.grain_radius <= 0)
            throw std::invalid_argument("modulated: Boolean model needs positive germ intensity and grain radius");
        IntensityModel m;
        m.kind = IntensityKind::Modulated;
        m.lambda1 = lambda1;
        m.lambda2 = lambda2;
        m.xi = xi;
        return m;
    }
    static IntensityModel voronoi(double lambda_s) {
        if (lambda_s <= 0) throw std::invalid_argument("voronoi: lambda_s must be > 0");
        IntensityModel m;
        m.kind = IntensityKind::VoronoiEdges;
        m.lambda_s = lambda_s;
        return m;
    }
    static IntensityModel delaunay_model(double lambda_s) {
        if (lambda_s <= 0) throw std::invalid_argument("delaunay: lambda_s must be > 0");
        IntensityModel m;
        m.kind = IntensityKind::DelaunayEdges;
        m.lambda_s = lambda_s;
        return m;
    }

    bool singular() const {
        return kind == IntensityKind::VoronoiEdges || kind == IntensityKind::DelaunayEdges;
    }

    std::string id() const {
        switch (kind) {
            case IntensityKind::Homogeneous: return "poisson";
            case IntensityKind::ShotNoise: return "shotnoise";
            case IntensityKind::Modulated: return "modulated";
            case IntensityKind::VoronoiEdges: return "voronoi";
            case IntensityKind::DelaunayEdges: return "delaunay";
        }
        return "?";
    }
};

inline double ball_volume(int dim, double r) {
    return dim == 3 ? 4.0 / 3.0 * 3.14159265358979323846 * r * r * r
                    : 3.14159265358979323846 * r * r;
}

/// Probability that a fixed point is covered by the Boolean model.
inline double coverage_probability(const BooleanModelSpec& xi, int dim) {
    return 1.0 - std::exp(-xi.germ_intensity * ball_volume(dim, xi.grain_radius));
}

/// Analytic (tessellations: calibrated) mean mass of the unit cube, E[L(Q_1)].
inline double mean_unit_mass(const IntensityModel& m, int dim) {
    switch (m.kind) {
        case IntensityKind::Homogeneous: return m.density;
        case IntensityKind::ShotNoise:
            return m.lambda_s * m.amplitude * ball_volume(dim, m.kernel_radius);
        case IntensityKind::Modulated: {
            const double p = coverage_probability(m.xi, dim);
            return m.lambda1 * p + m.lambda2 * (1.0 - p);
        }
        case IntensityKind::VoronoiEdges:
            if (dim != 2) throw std::invalid_argument("voronoi intensity: d = 2 only");
            return m.tess_norm * calibration::kVoronoiEdgeIntensity * std::sqrt(m.lambda_s);
        case IntensityKind::DelaunayEdges:
            if (dim != 2) throw std::invalid_argument("delaunay intensity: d = 2 only");
            return m.tess_norm * calibration::kDelaunayEdgeIntensity * std::sqrt(m.lambda_s);
    }
    return 0.0;
}

/// Rescales the model so E[L(Q_1)] = 1.
inline IntensityModel normalize(const IntensityModel& m, int dim) {
    const double mean = mean_unit_mass(m, dim);
    if (!(mean > 0)) throw std::invalid_argument("normalize: model has zero mean mass");
    IntensityModel out = m;
    switch (m.kind) {
        case IntensityKind::Homogeneous: out.density /= mean; break;
        case IntensityKind::ShotNoise: out.amplitude /= mean; break;
        case IntensityKind::Modulated:
            out.lambda1 /= mean;
            out.lambda2 /= mean;
            break;
        case IntensityKind::VoronoiEdges:
        case IntensityKind::DelaunayEdges: out.tess_norm /= mean; break;
    }
    out.normalized = true;
    return out;
}

/// Dependence range b of the measure: restrictions to sets at distance > b
/// are independent. Tessellations are not b-dependent (nullopt = unbounded).
inline std::optional<double> dependence_range(const IntensityModel& m) {
    switch (m.kind) {
        case IntensityKind::Homogeneous: return 0.0;
        case IntensityKind::ShotNoise: return 2.0 * m.kernel_radius;
        case IntensityKind::Modulated: return 2.0 * m.xi.grain_radius;
        default: return std::nullopt;
    }
}

/// Default guard margin for Hard windows so interior statistics are unbiased.
inline double default_guard(const IntensityModel& m, int dim) {
    (void)dim;
    switch (m.kind) {
        case IntensityKind::Homogeneous: return 0.0;
        case IntensityKind::ShotNoise: return 2.0 * m.kernel_radius;
        case IntensityKind::Modulated: return 2.0 * m.xi.grain_radius;
        case IntensityKind::VoronoiEdges:
        case IntensityKind::DelaunayEdges: return 3.0 / std::sqrt(m.lambda_s);
    }
    return 0.0;
}

}  // namespace coxsinr
