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

#pragma once

#include <span>

#include "nuh/random.hpp"

namespace nuh {

/// Fills \p out with unit-rate exponential draws from \p rng, advancing it by
/// out.size() positions. Vectorized; the values are a deterministic function
/// of the stream position.
void fill_exponential(RandomStream& rng, std::span<double> out);

/// Fills \p out with uniform (0, 1) draws from \p rng.
void fill_uniform(RandomStream& rng, std::span<double> out);

/**
 * Waiting times of the self-excited part of an exponential Hawkes intensity.
 *
 * With excitation E decaying at \p rate, the first point of a Poisson process
 * of intensity E exp(-rate s) after a unit exponential budget xi is
 * -log(1 - rate xi / E) / rate, and never arrives when rate xi >= E. Writes
 * that waiting time into \p out, or \p never for the no-arrival case.
 */
void excitation_waits(std::span<const double> xi,
                      std::span<const double> excitation,
                      double rate,
                      double never,
                      std::span<double> out);

} // namespace nuh
