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

#include <complex>
#include <cstddef>
#include <vector>

#include "nuh/grid_function.hpp"
#include "nuh/kernel.hpp"
#include "nuh/random.hpp"

namespace nuh {

/// Grid step used when the caller does not pick one: a fiftieth of the
/// kernel's shortest time scale.
double default_resolvent_step(const KernelSpec& kernel);

/**
 * psi = sum_{k>=1} (a_T phi)^{*k} on {0, step, ..., horizon}.
 *
 * Solves psi = phi^T + phi^T * psi by forward substitution. The convolution
 * is a product trapezoidal rule: psi is interpolated linearly between grid
 * points and integrated exactly (to quadrature precision) against the kernel,
 * so the discrete kernel keeps its mass a_T however coarse the grid is.
 * The kernel is zero past its truncation horizon, which bounds the work at
 * O(n H / step).
 *
 * Throws StepTooCoarse when step exceeds a tenth of the kernel time scale or
 * when more than 0.1% of the values needed clamping at zero.
 */
Grid compute_resolvent(const KernelSpec& kernel, double horizon, double step);

/**
 * Density of X^T = (1/T) sum_{i<=I} X_i on [0, horizon_rescaled]:
 * rho(x) = T psi(T x) / |psi|_1 with |psi|_1 = a_T / (1 - a_T).
 *
 * The kernel norm is taken from the regime. \p step is the time step of the
 * underlying resolvent grid; the returned grid has step step / T.
 */
Grid rho_density(const KernelSpec& kernel, const RegimeSpec& regime,
                 double horizon_rescaled, double step);

/// (lambda / m) exp(-x lambda / m), the limit of rho_density.
double exponential_limit_density(double x, double lambda, double mean);

/// Characteristic function of X^T, summed as a geometric series.
std::complex<double> rho_cf(const KernelSpec& kernel, const RegimeSpec& regime, double z);

/// n draws of X^T, with I geometric on {1, 2, ...} of parameter 1 - a_T.
std::vector<double> sample_geometric_sum(const KernelSpec& kernel, const RegimeSpec& regime,
                                         std::size_t n, RandomStream& rng);

/// 1 / (1 - C (iz)^alpha) on the principal branch. C may be complex: for a
/// power-law base kernel it is sigma / lambda with sigma from
/// tail_scale_sigma.
std::complex<double> mittag_leffler_cf(double alpha, std::complex<double> C, double z);

/**
 * sigma with cf(z) - 1 ~ sigma (iz)^alpha as z -> 0+, for power-law kernels.
 *
 * Evaluates (cf(z) - 1) / (iz)^alpha at z = 1e-3, 1e-4, 1e-5 and removes the
 * z^(1 - alpha) and z correction terms by an exact three-point fit.
 */
std::complex<double> tail_scale_sigma(const KernelSpec& kernel);

} // namespace nuh
