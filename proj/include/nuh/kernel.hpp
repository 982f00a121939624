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
#include <optional>
#include <variant>
#include <vector>

namespace nuh {

/// phi(t) = beta exp(-beta t).
struct Exponential
{
    double beta;
};

/// phi(t) = alpha x0^alpha / (x0 + t)^(1 + alpha). Infinite mean for
/// alpha <= 1; only the heavy-tail operations accept it.
struct PowerLaw
{
    double alpha;
    double x0;
};

struct ExponentialComponent
{
    double weight;
    double rate;
};

/// phi(t) = sum_k w_k beta_k exp(-beta_k t), weights rescaled to sum to one.
struct SumOfExponentials
{
    std::vector<ExponentialComponent> components;
};

using KernelShape = std::variant<Exponential, PowerLaw, SumOfExponentials>;

/// Residual tail mass allowed beyond the default truncation horizon.
inline constexpr double kTailTolerance = 1e-10;

/**
 * The scaled excitation kernel a_T phi, with phi a unit-mass density.
 *
 * Immutable once built. The scaling a_T is the L1 norm of the kernel; a_T = 0
 * is accepted and turns every simulator into a Poisson process.
 */
class KernelSpec
{
  public:
    KernelSpec(KernelShape shape, double a_T,
               std::optional<double> truncation_horizon = std::nullopt);

    static KernelSpec exponential(double beta, double a_T);
    static KernelSpec power_law(double alpha, double x0, double a_T);
    static KernelSpec sum_of_exponentials(std::vector<ExponentialComponent> components,
                                          double a_T);

    const KernelShape& shape() const noexcept { return shape_; }
    double a_T() const noexcept { return a_T_; }
    double truncation_horizon() const noexcept { return horizon_; }

    /// Same base kernel with a different norm. The truncation horizon is kept
    /// only if it was set explicitly.
    KernelSpec with_scaling(double a_T) const;

    bool has_finite_mean() const noexcept;
    bool is_single_exponential() const noexcept;

    /// a_T phi(t), zero beyond the truncation horizon.
    double operator()(double t) const;

    /// Untruncated, unscaled phi(t).
    double base_density(double t) const;
    double base_cdf(double t) const;
    /// int_t^inf phi, without cancellation for large t.
    double base_tail(double t) const;
    /// Inverse of base_cdf on [0, 1).
    double base_quantile(double p) const;

    /// int_0^inf s phi(s) ds. Throws InfiniteMean for power laws.
    double mean() const;

    /// Characteristic function of the base density.
    std::complex<double> cf(double z) const;
    /// cf(z) - 1, accurate for small |z|.
    std::complex<double> cf_minus_one(double z) const;

    /// Shortest time scale of the kernel (1/beta, min 1/beta_k, or x0).
    double time_scale() const noexcept;

    /// Normalized exponential components; empty for power laws.
    std::vector<ExponentialComponent> exponential_components() const;

    /// Smallest H with int_H^inf phi < tolerance.
    double default_truncation_horizon(double tolerance = kTailTolerance) const;

  private:
    KernelShape shape_;
    double a_T_;
    double horizon_;
    bool explicit_horizon_;
};

/// Observation scale and baseline. With exponent 1 this is the critical
/// regime T (1 - a_T) = lambda; the heavy-tail regime uses
/// (1 - a_T) T^exponent = lambda.
struct RegimeSpec
{
    double T;
    double lambda;
    double mu;
    double exponent = 1.0;

    RegimeSpec(double T, double lambda, double mu, double exponent = 1.0);

    double a_T() const noexcept;
    /// T (1 - a_T) / lambda; one by construction of a_T.
    double u_T() const noexcept;
    /// m / lambda, the mean of the limiting exponential law.
    double d0(double kernel_mean) const noexcept { return kernel_mean / lambda; }
};

double eval_kernel(const KernelSpec& spec, double t);
double kernel_mean(const KernelSpec& spec);
std::complex<double> kernel_cf(const KernelSpec& spec, double z);

} // namespace nuh
