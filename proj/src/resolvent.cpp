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

#include "nuh/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "nuh/errors.hpp"

namespace nuh {

using boost::math::quadrature::gauss;

double default_resolvent_step(const KernelSpec& kernel)
{
    return kernel.time_scale() / 50.0;
}

Grid compute_resolvent(const KernelSpec& kernel, double horizon, double step)
{
    const Eigen::Index n = grid_points(horizon, step);
    if (step > kernel.time_scale() / 10.0) {
        std::ostringstream msg;
        msg << "resolvent step " << step << " exceeds a tenth of the kernel time scale "
            << kernel.time_scale();
        fail(ErrorKind::StepTooCoarse, msg.str());
    }

    const double h = step;
    const double cutoff = kernel.truncation_horizon();
    const auto lag_cells = static_cast<Eigen::Index>(std::ceil(cutoff / h)) + 1;
    const Eigen::Index lags = std::min(n - 1, lag_cells);

    // Hat-function weights: left[k] pairs psi_j with lag k = n - j through the
    // half hat on [t_j, t_j + h], right[k] through the half hat on
    // [t_j - h, t_j]. Interior nodes see both halves.
    Eigen::VectorXd left(lags + 1), right(lags + 1);
    for (Eigen::Index k = 0; k <= lags; ++k) {
        const double t = static_cast<double>(k) * h;
        right[k] = gauss<double, 10>::integrate(
            [&](double u) { return kernel(t + u) * (1.0 - u / h); }, 0.0, h);
        left[k] = k == 0 ? 0.0
                         : gauss<double, 10>::integrate(
                               [&](double u) { return kernel(t - u) * (1.0 - u / h); }, 0.0, h);
    }
    // reversed_full[L - k] = left[k] + right[k] for k = 1..L.
    Eigen::VectorXd reversed_full(lags);
    for (Eigen::Index k = 1; k <= lags; ++k) {
        reversed_full[lags - k] = left[k] + right[k];
    }

    const double diagonal = 1.0 - right[0];
    require(diagonal > 0, "resolvent step too coarse for the kernel peak");

    Eigen::VectorXd psi(n);
    psi[0] = kernel(0.0);
    std::size_t clamped = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
        const double t = static_cast<double>(i) * h;
        double rhs = kernel(t);
        if (i <= lags) {
            rhs += left[i] * psi[0];
        }
        const Eigen::Index span = std::min(lags, i - 1);
        if (span > 0) {
            rhs += reversed_full.tail(span).dot(psi.segment(i - span, span));
        }
        double value = rhs / diagonal;
        if (value < 0) {
            value = 0;
            ++clamped;
        }
        psi[i] = value;
    }
    if (static_cast<double>(clamped) > 1e-3 * static_cast<double>(n)) {
        std::ostringstream msg;
        msg << "resolvent solve clamped " << clamped << " of " << n << " values at zero";
        fail(ErrorKind::StepTooCoarse, msg.str());
    }
    return Grid(h, std::move(psi));
}

Grid rho_density(const KernelSpec& kernel, const RegimeSpec& regime,
                 double horizon_rescaled, double step)
{
    const double a = regime.a_T();
    const KernelSpec scaled = kernel.with_scaling(a);
    const Grid psi = compute_resolvent(scaled, regime.T * horizon_rescaled, step);
    const double psi_norm = a / (1.0 - a);
    return Grid(step / regime.T, (regime.T / psi_norm) * psi.values());
}

double exponential_limit_density(double x, double lambda, double mean)
{
    const double rate = lambda / mean;
    return rate * std::exp(-x * rate);
}

std::complex<double> rho_cf(const KernelSpec& kernel, const RegimeSpec& regime, double z)
{
    const double a = regime.a_T();
    const std::complex<double> shift = kernel.cf_minus_one(z / regime.T);
    return (1.0 + shift) / (1.0 - (a / (1.0 - a)) * shift);
}

std::vector<double> sample_geometric_sum(const KernelSpec& kernel, const RegimeSpec& regime,
                                         std::size_t n, RandomStream& rng)
{
    const double a = regime.a_T();
    const double log_a = std::log1p(-(1.0 - a));
    const auto components = kernel.exponential_components();
    const auto* power = std::get_if<PowerLaw>(&kernel.shape());

    auto draw = [&]() -> double {
        if (power) {
            // Survival (x0 / (x0 + t))^alpha inverted at a uniform level.
            return power->x0 * std::expm1(-std::log(rng.uniform_positive()) / power->alpha);
        }
        double rate = components.front().rate;
        if (components.size() > 1) {
            double u = rng.uniform();
            for (const auto& c : components) {
                rate = c.rate;
                if (u < c.weight) {
                    break;
                }
                u -= c.weight;
            }
        }
        return rng.exponential() / rate;
    };

    std::vector<double> out(n);
    for (auto& x : out) {
        std::uint64_t count = 1;
        if (a > 0) {
            count += static_cast<std::uint64_t>(std::floor(std::log(rng.uniform_positive()) / log_a));
        }
        double sum = 0;
        for (std::uint64_t i = 0; i < count; ++i) {
            sum += draw();
        }
        x = sum / regime.T;
    }
    return out;
}

std::complex<double> mittag_leffler_cf(double alpha, std::complex<double> C, double z)
{
    require(alpha > 0 && alpha <= 1, "Mittag-Leffler exponent must lie in (0, 1]");
    if (z == 0) {
        return {1.0, 0.0};
    }
    const double sign = z > 0 ? 1.0 : -1.0;
    const std::complex<double> iz_alpha =
        std::polar(std::pow(std::abs(z), alpha), sign * alpha * M_PI / 2);
    return 1.0 / (1.0 - C * iz_alpha);
}

std::complex<double> tail_scale_sigma(const KernelSpec& kernel)
{
    const auto* power = std::get_if<PowerLaw>(&kernel.shape());
    require(power != nullptr, "tail scale is only defined for power-law kernels");
    require(power->alpha < 1, "tail scale needs alpha < 1");
    const double alpha = power->alpha;

    const double zs[3] = {1e-3, 1e-4, 1e-5};
    Eigen::Matrix3cd basis;
    Eigen::Vector3cd ratio;
    for (int i = 0; i < 3; ++i) {
        const double z = zs[i];
        const std::complex<double> iz_alpha = std::polar(std::pow(z, alpha), alpha * M_PI / 2);
        ratio[i] = kernel.cf_minus_one(z) / iz_alpha;
        basis(i, 0) = 1.0;
        basis(i, 1) = std::pow(z, 1 - alpha);
        basis(i, 2) = z;
    }
    const Eigen::Vector3cd coeffs = basis.fullPivLu().solve(ratio);
    return coeffs[0];
}

} // namespace nuh
