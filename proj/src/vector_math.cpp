/*
   Copyright 2026 The nuh Authors

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

#include "nuh/vector_math.hpp"

#include <cmath>
#include <cstdint>

namespace nuh {

// This translation unit is built with -ffast-math so the loops below call
// the vector log; keep infinities and NaNs out of it.

void fill_exponential(RandomStream& rng, std::span<double> out)
{
    const std::uint64_t base = rng.position();
    const std::size_t n = out.size();
    double* __restrict dst = out.data();
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t bits = rng.at(base + 1 + i) >> 11;
        const double u = (static_cast<double>(static_cast<std::int64_t>(bits)) + 0.5) * 0x1.0p-53;
        dst[i] = -std::log(u);
    }
    rng.discard(n);
}

void fill_uniform(RandomStream& rng, std::span<double> out)
{
    const std::uint64_t base = rng.position();
    const std::size_t n = out.size();
    double* __restrict dst = out.data();
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t bits = rng.at(base + 1 + i) >> 11;
        dst[i] = (static_cast<double>(static_cast<std::int64_t>(bits)) + 0.5) * 0x1.0p-53;
    }
    rng.discard(n);
}

void excitation_waits(std::span<const double> xi,
                      std::span<const double> excitation,
                      double rate,
                      double never,
                      std::span<double> out)
{
    const std::size_t n = out.size();
    const double inv_rate = 1.0 / rate;
    const double* __restrict x = xi.data();
    const double* __restrict e = excitation.data();
    double* __restrict dst = out.data();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = rate * x[i] / (e[i] > 1e-300 ? e[i] : 1e-300);
        const bool arrives = r < 1.0;
        const double s = -std::log1p(-(arrives ? r : 0.5)) * inv_rate;
        dst[i] = arrives ? s : never;
    }
}

} // namespace nuh
