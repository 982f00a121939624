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

#include "nuh/diffusion.hpp"

#include <cmath>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

#include "nuh/errors.hpp"
#include "nuh/grid_function.hpp"

namespace nuh {

namespace {

double standard_normal(RandomStream& rng)
{
    return boost::random::normal_distribution<double>(0.0, 1.0)(rng);
}

/// Central chi-square with k >= 0 degrees of freedom.
double chi_square(double k, RandomStream& rng)
{
    if (k <= 0) {
        return 0;
    }
    return boost::random::gamma_distribution<double>(0.5 * k, 2.0)(rng);
}

} // namespace

CIRParams::CIRParams(double kappa_, double theta_, double nu_, double x0_)
    : kappa(kappa_), theta(theta_), nu(nu_), x0(x0_)
{
    require(std::isfinite(kappa) && kappa > 0, "CIR kappa must be > 0");
    require(std::isfinite(theta) && theta >= 0, "CIR theta must be >= 0");
    require(std::isfinite(nu) && nu >= 0, "CIR nu must be >= 0");
    require(std::isfinite(x0) && x0 >= 0, "CIR x0 must be >= 0");
}

CIRParams CIRParams::from_hawkes(double lambda, double mean, double mu)
{
    require(lambda > 0 && mean > 0 && mu > 0, "lambda, m and mu must be > 0");
    return CIRParams(lambda / mean, mu, std::sqrt(lambda) / mean, 0.0);
}

CIRParams CIRParams::heston_variance(double lambda, double mean, double mu)
{
    require(lambda > 0 && mean > 0 && mu > 0, "lambda, m and mu must be > 0");
    return CIRParams(lambda / mean, 2 * mu / lambda, 1 / mean, 0.0);
}

double CIRParams::hawkes_lambda() const
{
    require(nu > 0, "the Hawkes mapping needs nu > 0");
    return kappa * kappa / (nu * nu);
}

double CIRParams::hawkes_mean() const
{
    require(nu > 0, "the Hawkes mapping needs nu > 0");
    return kappa / (nu * nu);
}

double CIRParams::dimension() const
{
    require(nu > 0, "the transition dimension needs nu > 0");
    return 4 * kappa * theta / (nu * nu);
}

double CIRParams::conditional_mean(double x, double dt) const noexcept
{
    return theta + (x - theta) * std::exp(-kappa * dt);
}

double CIRParams::conditional_variance(double x, double dt) const noexcept
{
    const double e = std::exp(-kappa * dt);
    const double v = nu * nu / kappa;
    return x * v * (e - e * e) + theta * 0.5 * v * (1 - e) * (1 - e);
}

HestonParams::HestonParams(CIRParams cir_, double price_scale_, double p0_)
    : cir(cir_), price_scale(price_scale_), p0(p0_)
{
    require(std::isfinite(price_scale) && price_scale > 0, "price scale must be finite and > 0");
    require(std::isfinite(p0), "p0 must be finite");
}

double cir_exact_step(const CIRParams& params, double x, double dt, RandomStream& rng)
{
    require(x >= 0, "CIR level must be >= 0");
    require(dt > 0, "CIR step must be > 0");
    if (params.nu == 0) {
        return params.conditional_mean(x, dt);
    }
    const double decay = std::exp(-params.kappa * dt);
    const double c = params.nu * params.nu * (-std::expm1(-params.kappa * dt)) /
                     (4 * params.kappa);
    const double d = params.dimension();
    const double noncentrality = x * decay / c;
    double draw;
    if (d > 1) {
        const double shifted = standard_normal(rng) + std::sqrt(noncentrality);
        draw = shifted * shifted + chi_square(d - 1, rng);
    } else {
        const auto n = noncentrality > 0
                           ? boost::random::poisson_distribution<long, double>(0.5 * noncentrality)(rng)
                           : 0L;
        draw = chi_square(d + 2.0 * static_cast<double>(n), rng);
    }
    return c * draw;
}

double cir_euler_step(const CIRParams& params, double x, double dt, RandomStream& rng)
{
    const double xp = std::max(x, 0.0);
    const double next = x + params.kappa * (params.theta - xp) * dt +
                        params.nu * std::sqrt(xp * dt) * standard_normal(rng);
    return std::max(next, 0.0);
}

CIRPath cir_path(const CIRParams& params, double horizon, double step, RandomStream& rng,
                 CIRScheme scheme)
{
    const Eigen::Index n = grid_points(horizon, step);
    Grid::Vector level(n);
    Grid::Vector integral(n);
    level[0] = params.x0;
    integral[0] = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
        level[i] = scheme == CIRScheme::Exact ? cir_exact_step(params, level[i - 1], step, rng)
                                              : cir_euler_step(params, level[i - 1], step, rng);
        integral[i] = integral[i - 1] + 0.5 * step * (level[i - 1] + level[i]);
    }
    return {Grid(step, std::move(level)), Grid(step, std::move(integral))};
}

CIRPath cir_path(const CIRParams& params, double horizon, double step, std::uint64_t seed,
                 CIRScheme scheme)
{
    RandomStream rng = RandomStream(seed).substream("cir");
    return cir_path(params, horizon, step, rng, scheme);
}

double cir_marginal_cdf(const CIRParams& params, double t, double x)
{
    require(t > 0, "marginal time must be > 0");
    if (x <= 0) {
        return 0;
    }
    if (params.nu == 0) {
        return x >= params.conditional_mean(params.x0, t) ? 1.0 : 0.0;
    }
    const double c = params.nu * params.nu * (-std::expm1(-params.kappa * t)) /
                     (4 * params.kappa);
    const double d = params.dimension();
    const double noncentrality = params.x0 * std::exp(-params.kappa * t) / c;
    if (noncentrality == 0) {
        return boost::math::gamma_p(0.5 * d, 0.5 * x / c);
    }
    return boost::math::cdf(boost::math::non_central_chi_squared(d, noncentrality), x / c);
}

HestonPath heston_paths(const HestonParams& params, double horizon, double step,
                        RandomStream& rng)
{
    RandomStream variance_rng = rng.substream("variance");
    RandomStream price_rng = rng.substream("price");
    const Eigen::Index n = grid_points(horizon, step);
    Grid::Vector c(n);
    Grid::Vector p(n);
    c[0] = params.cir.x0;
    p[0] = params.p0;
    for (Eigen::Index i = 1; i < n; ++i) {
        c[i] = cir_exact_step(params.cir, c[i - 1], step, variance_rng);
        const double var = params.price_scale * params.price_scale * 0.5 * (c[i - 1] + c[i]) * step;
        p[i] = p[i - 1] + std::sqrt(var) * standard_normal(price_rng);
    }
    return {Grid(step, std::move(c)), Grid(step, std::move(p))};
}

HestonPath heston_paths(const HestonParams& params, double horizon, double step,
                        std::uint64_t seed)
{
    RandomStream rng = RandomStream(seed).substream("heston");
    return heston_paths(params, horizon, step, rng);
}

} // namespace nuh
