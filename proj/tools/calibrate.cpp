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

// Measures the tessellation edge intensity (mean edge length per unit area
// at lambda_S = 1). Its output is frozen into calibration.hpp together with
// the 95% CI.

#include <cmath>
#include <cstdio>

#include "coxsinr/environment.hpp"

using namespace coxsinr;

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::atoi(argv[1]) : 100;
    const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20260101ull;
    const Window w(2, {0, 0, 0}, {10, 10, 0}, Boundary::Hard, 3.0);
    const Box inner = w.box();
    const double area = inner.volume(2);

    for (const char* name : {"voronoi", "delaunay"}) {
        const IntensityModel model = std::string(name) == "voronoi"
                                         ? IntensityModel::voronoi(1.0)
                                         : IntensityModel::delaunay_model(1.0);
        double sum = 0, sum2 = 0;
        for (int k = 0; k < reps; ++k) {
            const SeedPath s = SeedPath::root(seed).child(name, k);
            const Environment env = sample_environment(model, w, s);
            double len = 0;
            for (const auto& seg : env.segments.segments)
                if (auto c = clip_segment(seg, inner)) len += c->length();
            const double x = len / area;
            sum += x;
            sum2 += x * x;
        }
        const double mean = sum / reps;
        const double var = (sum2 - sum * sum / reps) / (reps - 1);
        const double ci = 1.959963984540054 * std::sqrt(var / reps);
        std::printf("%s: edge intensity %.6f +- %.6f (95%% CI, %d reps)\n", name, mean, ci, reps);
    }
    return 0;
}
