// SPDX-License-Identifier: Apache-2.0
//
// rismimo - spectral-efficiency analysis for RIS-aided MIMO broadcast channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RISMIMO_RNG_HPP
#define RISMIMO_RNG_HPP

#include "rismimo/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace rismimo
{
    // Stream tags separate independent uses of the same (seed, index) pair.
    enum class StreamTag : std::uint64_t
    {
        channel = 1,
        positions = 2,
        phases = 3,
        bound_mc = 4,
        test = 5,
    };

    // SplitMix64 finalizer.
    constexpr std::uint64_t mix64(std::uint64_t z)
    {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // A pseudo-random stream keyed by (seed, index, tag). Streams with the same key
    // produce identical sequences regardless of which thread creates them.
    class RngStream
    {
    public:
        RngStream(std::uint64_t seed, std::uint64_t index, StreamTag tag = StreamTag::channel)
            : engine_(mix64(mix64(mix64(seed) ^ index) ^ static_cast<std::uint64_t>(tag)))
        {
        }

        // Uniform on [0, 1).
        double uniform() { return std::generate_canonical<double, 53>(engine_); }

        // Standard real Gaussian (Box-Muller on the stream's own uniforms, so the
        // sequence does not depend on the standard library's distribution code).
        double normal()
        {
            if (has_spare_)
            {
                has_spare_ = false;
                return spare_;
            }
            double u1 = uniform();
            while (u1 <= 0.0)
                u1 = uniform();
            const double u2 = uniform();
            const double r = std::sqrt(-2.0 * std::log(u1));
            const double t = 2.0 * 3.14159265358979323846 * u2;
            spare_ = r * std::sin(t);
            has_spare_ = true;
            return r * std::cos(t);
        }

        // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
        cplx complex_normal(double variance = 1.0)
        {
            const double s = std::sqrt(0.5 * variance);
            const double re = normal();
            const double im = normal();
            return {s * re, s * im};
        }

        CVec complex_normal_vector(Eigen::Index n, double variance = 1.0)
        {
            CVec v(n);
            for (Eigen::Index i = 0; i < n; ++i)
                v(i) = complex_normal(variance);
            return v;
        }

    private:
        std::mt19937_64 engine_;
        double spare_ = 0.0;
        bool has_spare_ = false;
    };
}

#endif
