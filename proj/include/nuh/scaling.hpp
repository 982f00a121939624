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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nuh/grid_function.hpp"
#include "nuh/hawkes.hpp"
#include "nuh/kernel.hpp"
#include "nuh/point_path.hpp"
#include "nuh/stats.hpp"

namespace nuh {

inline constexpr double kDefaultRescaledStep = 1.0 / 500.0;

enum class RescaledKind { IntensityC, CountV, MartingaleB, PriceP };

std::string_view to_string(RescaledKind kind) noexcept;

/// A rescaled functional of a Hawkes path on [0, 1] with its scaling.
struct RescaledPath
{
    RescaledKind kind;
    Grid grid;
    RegimeSpec regime;
    double a_T;
    /// Kernel mean m; NaN when the kernel has none.
    double kernel_mean;
    std::uint64_t source_seed_tag;

    std::map<std::string, double> metadata() const;
};

/// C_t = (1 - a_T) lambda_{tT}, left limits on the grid.
RescaledPath rescale_intensity(const PointPath& path, const KernelSpec& kernel,
                               const RegimeSpec& regime, double step = kDefaultRescaledStep);

/// V_t = ((1 - a_T) / T) N_{tT}.
RescaledPath rescale_count(const PointPath& path, const RegimeSpec& regime,
                           double step = kDefaultRescaledStep);

/// B_t = sqrt(u_T / T) (sum_{J <= tT} lambda(J-)^{-1/2} - int_0^{tT} sqrt(lambda)).
RescaledPath rescale_martingale(const PointPath& path, const KernelSpec& kernel,
                                const RegimeSpec& regime, double step = kDefaultRescaledStep);

/// P_t = (N+_{tT} - N-_{tT}) / T. Throws UnmarkedPath for unmarked paths.
RescaledPath rescale_price(const PointPath& path, const RegimeSpec& regime,
                           double step = kDefaultRescaledStep);

/**
 * int_0^dt sqrt(mu + E e^{-beta s}) ds in closed form:
 * (2/beta)(y0 - y1) + (2 sqrt(mu)/beta) log((y1 + sqrt(mu)) / (y0 + sqrt(mu)))
 * + sqrt(mu) dt, with y0, y1 the square roots of the end point intensities.
 */
double sqrt_intensity_integral(double mu, double beta, double excitation, double dt) noexcept;

/**
 * E[N_t] = mu t + mu int_0^t psi(t - s) s ds = mu t + mu int_0^t Psi(u) du,
 * with Psi the integrated resolvent. Closed form for a single exponential,
 * otherwise from the resolvent grid.
 */
class ExpectedCount
{
  public:
    ExpectedCount(const KernelSpec& kernel, double mu, double horizon);
    double operator()(double t) const;

  private:
    double mu_;
    double beta_ = 0;
    double gamma_ = 0;
    double a_ = 0;
    bool closed_form_;
    std::optional<Grid> integrated_;
};

/// [B1, B1]_1, [B2, B2]_1 and [B1, B2]_1 of one path of the signed model.
struct QuadraticCovariation
{
    double b11 = 0;
    double b22 = 0;
    double b12 = 0;
};

/// Sums of 1 / (T (lambda+ + lambda-)(J-)) over jumps, signed by mark for b12.
QuadraticCovariation bivariate_covariation(const PointPath& path,
                                           const BivariateKernelSpec& kernels, double mu,
                                           double T);

/// Passes when each sample-mean entry is within 0.05 of the identity.
ComparisonReport covariation_report(std::span<const QuadraticCovariation> values,
                                    double tolerance = 0.05);
ComparisonReport covariation_test(std::span<const PointPath> paths,
                                  const BivariateKernelSpec& kernels, const RegimeSpec& regime);

struct DegenerateScheduleEntry
{
    double T;
    double a_T;
};

/**
 * D(T) = E[sup_v (((1 - a_T) / T) |N_{Tv} - E N_{Tv}|)^2] by Monte Carlo for
 * each scheduled (T, a_T). Passes when D(T) <= slack 4 mu / (T (1 - a_T))
 * everywhere and D decreases along the schedule up to three standard errors.
 */
ComparisonReport check_degenerate_regime(const KernelSpec& base, double mu,
                                         std::span<const DegenerateScheduleEntry> schedule,
                                         std::size_t paths, std::uint64_t seed,
                                         unsigned threads = 0, double slack = 1.25);

/**
 * Empirical variance of ((1 - a_T) / T) N_T along a schedule with
 * T (1 - a_T) -> 0. Reports the trend only; always passes.
 */
ComparisonReport variance_blowup_diagnostic(const KernelSpec& base, double mu,
                                            std::span<const DegenerateScheduleEntry> schedule,
                                            std::size_t paths, std::uint64_t seed,
                                            unsigned threads = 0);

} // namespace nuh
