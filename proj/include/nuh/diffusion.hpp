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

#include <cstdint>

#include "nuh/grid_function.hpp"
#include "nuh/random.hpp"

namespace nuh {

/// dX = kappa (theta - X) dt + nu sqrt(X) dB, X_0 = x0.
struct CIRParams
{
    double kappa;
    double theta;
    double nu;
    double x0 = 0;

    CIRParams(double kappa, double theta, double nu, double x0 = 0);

    /// Limit of the rescaled intensity (1 - a_T) lambda_{tT}: kappa = lambda / m,
    /// theta = mu, nu = sqrt(lambda) / m.
    static CIRParams from_hawkes(double lambda, double mean, double mu);
    /// Variance factor of the signed model: kappa = lambda / m,
    /// theta = 2 mu / lambda, nu = 1 / m.
    static CIRParams heston_variance(double lambda, double mean, double mu);

    /// Inverse of from_hawkes: lambda = kappa^2 / nu^2.
    double hawkes_lambda() const;
    /// Inverse of from_hawkes: m = kappa / nu^2.
    double hawkes_mean() const;

    /// Degrees of freedom 4 kappa theta / nu^2 of the transition law.
    double dimension() const;

    /// E[X_{t+dt} | X_t = x].
    double conditional_mean(double x, double dt) const noexcept;
    /// Var[X_{t+dt} | X_t = x].
    double conditional_variance(double x, double dt) const noexcept;
};

/// P with dP = price_scale sqrt(C) dB2, C a CIR process driven by an
/// independent B1.
struct HestonParams
{
    CIRParams cir;
    double price_scale;
    double p0 = 0;

    HestonParams(CIRParams cir, double price_scale, double p0 = 0);
};

/**
 * One exact draw of X_{t+dt} given X_t = x.
 *
 * X_{t+dt} / c is noncentral chi-square with d = 4 kappa theta / nu^2 degrees
 * of freedom and noncentrality x e^{-kappa dt} / c, where
 * c = nu^2 (1 - e^{-kappa dt}) / (4 kappa). For d > 1 it is drawn as a
 * squared shifted normal plus a central chi-square with d - 1 degrees of
 * freedom, otherwise as a Poisson mixture of central chi-squares. nu = 0
 * follows the mean ODE.
 */
double cir_exact_step(const CIRParams& params, double x, double dt, RandomStream& rng);

/// Full-truncation Euler step; kept only as a reference for the exact one.
double cir_euler_step(const CIRParams& params, double x, double dt, RandomStream& rng);

enum class CIRScheme { Exact, Euler };

struct CIRPath
{
    Grid level;
    /// Trapezoidal int_0^t X ds.
    Grid integrated;
};

CIRPath cir_path(const CIRParams& params, double horizon, double step, RandomStream& rng,
                 CIRScheme scheme = CIRScheme::Exact);
CIRPath cir_path(const CIRParams& params, double horizon, double step, std::uint64_t seed,
                 CIRScheme scheme = CIRScheme::Exact);

/// P(X_t <= x) for the process started at x0.
double cir_marginal_cdf(const CIRParams& params, double t, double x);

struct HestonPath
{
    Grid variance;
    Grid price;
};

/**
 * C by exact CIR steps; P by Gaussian increments with variance
 * price_scale^2 (C_i + C_{i+1}) dt / 2.
 */
HestonPath heston_paths(const HestonParams& params, double horizon, double step,
                        RandomStream& rng);
HestonPath heston_paths(const HestonParams& params, double horizon, double step,
                        std::uint64_t seed);

} // namespace nuh
