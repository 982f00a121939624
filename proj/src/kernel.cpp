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

#include "nuh/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "nuh/errors.hpp"

namespace nuh {

namespace {

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

KernelShape validated(KernelShape shape)
{
    return std::visit(
        overloaded{
            [](Exponential e) -> KernelShape {
                require(std::isfinite(e.beta) && e.beta > 0, "kernel.beta must be > 0");
                return e;
            },
            [](PowerLaw p) -> KernelShape {
                require(p.alpha > 0 && p.alpha <= 1, "kernel.alpha must lie in (0, 1]");
                require(std::isfinite(p.x0) && p.x0 > 0, "kernel.x0 must be > 0");
                return p;
            },
            [](SumOfExponentials s) -> KernelShape {
                require(!s.components.empty(), "kernel.components must not be empty");
                double total = 0;
                for (const auto& c : s.components) {
                    require(std::isfinite(c.weight) && c.weight >= 0,
                            "kernel component weights must be >= 0");
                    require(std::isfinite(c.rate) && c.rate > 0,
                            "kernel component rates must be > 0");
                    total += c.weight;
                }
                require(total > 0, "kernel component weights must not all be zero");
                for (auto& c : s.components) {
                    c.weight /= total;
                }
                return s;
            },
        },
        std::move(shape));
}

double sum_exp_tail(const SumOfExponentials& s, double t)
{
    double tail = 0;
    for (const auto& c : s.components) {
        tail += c.weight * std::exp(-c.rate * t);
    }
    return tail;
}

} // namespace

KernelSpec::KernelSpec(KernelShape shape, double a_T, std::optional<double> truncation_horizon)
    : shape_(validated(std::move(shape))),
      a_T_(a_T),
      horizon_(0),
      explicit_horizon_(truncation_horizon.has_value())
{
    if (!(a_T >= 0 && a_T < 1)) {
        std::ostringstream msg;
        msg << "a_T must lie in [0, 1) for a stable kernel, got " << a_T;
        fail(ErrorKind::InvalidArgument, msg.str());
    }
    if (truncation_horizon) {
        require(*truncation_horizon >= 0, "kernel truncation horizon must be >= 0");
        horizon_ = *truncation_horizon;
    } else {
        horizon_ = default_truncation_horizon();
    }
}

KernelSpec KernelSpec::exponential(double beta, double a_T)
{
    return KernelSpec(Exponential{beta}, a_T);
}

KernelSpec KernelSpec::power_law(double alpha, double x0, double a_T)
{
    return KernelSpec(PowerLaw{alpha, x0}, a_T);
}

KernelSpec KernelSpec::sum_of_exponentials(std::vector<ExponentialComponent> components,
                                           double a_T)
{
    return KernelSpec(SumOfExponentials{std::move(components)}, a_T);
}

KernelSpec KernelSpec::with_scaling(double a_T) const
{
    return KernelSpec(shape_, a_T,
                      explicit_horizon_ ? std::optional<double>(horizon_) : std::nullopt);
}

bool KernelSpec::has_finite_mean() const noexcept
{
    return !std::holds_alternative<PowerLaw>(shape_);
}

bool KernelSpec::is_single_exponential() const noexcept
{
    if (std::holds_alternative<Exponential>(shape_)) {
        return true;
    }
    if (const auto* s = std::get_if<SumOfExponentials>(&shape_)) {
        const double rate = s->components.front().rate;
        return std::all_of(s->components.begin(), s->components.end(),
                           [&](const auto& c) { return c.rate == rate; });
    }
    return false;
}

double KernelSpec::operator()(double t) const
{
    require(t >= 0, "kernel evaluated at negative time");
    if (t > horizon_) {
        return 0.0;
    }
    return a_T_ * base_density(t);
}

double KernelSpec::base_density(double t) const
{
    return std::visit(
        overloaded{
            [t](const Exponential& e) { return e.beta * std::exp(-e.beta * t); },
            [t](const PowerLaw& p) {
                return p.alpha * std::pow(p.x0, p.alpha) / std::pow(p.x0 + t, 1 + p.alpha);
            },
            [t](const SumOfExponentials& s) {
                double v = 0;
                for (const auto& c : s.components) {
                    v += c.weight * c.rate * std::exp(-c.rate * t);
                }
                return v;
            },
        },
        shape_);
}

double KernelSpec::base_tail(double t) const
{
    if (t <= 0) {
        return 1.0;
    }
    return std::visit(
        overloaded{
            [t](const Exponential& e) { return std::exp(-e.beta * t); },
            [t](const PowerLaw& p) { return std::pow(p.x0 / (p.x0 + t), p.alpha); },
            [t](const SumOfExponentials& s) { return sum_exp_tail(s, t); },
        },
        shape_);
}

double KernelSpec::base_cdf(double t) const
{
    if (t <= 0) {
        return 0.0;
    }
    return std::visit(
        overloaded{
            [t](const Exponential& e) { return -std::expm1(-e.beta * t); },
            [t](const PowerLaw& p) {
                return -std::expm1(p.alpha * std::log(p.x0 / (p.x0 + t)));
            },
            [t](const SumOfExponentials& s) {
                double v = 0;
                for (const auto& c : s.components) {
                    v += c.weight * -std::expm1(-c.rate * t);
                }
                return v;
            },
        },
        shape_);
}

double KernelSpec::base_quantile(double p) const
{
    require(p >= 0 && p < 1, "quantile level must lie in [0, 1)");
    return std::visit(
        overloaded{
            [p](const Exponential& e) { return -std::log1p(-p) / e.beta; },
            [p](const PowerLaw& pl) {
                return pl.x0 * std::expm1(-std::log1p(-p) / pl.alpha);
            },
            [this, p](const SumOfExponentials& s) {
                // Bracket between the fastest and slowest component quantiles.
                double lo = std::numeric_limits<double>::max();
                double hi = 0;
                for (const auto& c : s.components) {
                    if (c.weight > 0) {
                        const double q = -std::log1p(-p) / c.rate;
                        lo = std::min(lo, q);
                        hi = std::max(hi, q);
                    }
                }
                const double target = 1 - p;
                for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (base_tail(mid) > target) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return 0.5 * (lo + hi);
            },
        },
        shape_);
}

double KernelSpec::mean() const
{
    return std::visit(
        overloaded{
            [](const Exponential& e) { return 1.0 / e.beta; },
            [](const PowerLaw&) -> double {
                fail(ErrorKind::InfiniteMean,
                     "power-law kernels have infinite mean; use the heavy-tail operations");
            },
            [](const SumOfExponentials& s) {
                double m = 0;
                for (const auto& c : s.components) {
                    m += c.weight / c.rate;
                }
                return m;
            },
        },
        shape_);
}

std::complex<double> KernelSpec::cf(double z) const
{
    return 1.0 + cf_minus_one(z);
}

std::complex<double> KernelSpec::cf_minus_one(double z) const
{
    using cplx = std::complex<double>;
    if (z == 0) {
        return {0.0, 0.0};
    }
    return std::visit(
        overloaded{
            [z](const Exponential& e) { return cplx(0, z) / cplx(e.beta, -z); },
            [z](const SumOfExponentials& s) {
                cplx v = 0;
                for (const auto& c : s.components) {
                    v += c.weight * cplx(0, z) / cplx(c.rate, -z);
                }
                return v;
            },
            [z](const PowerLaw& p) {
                if (z < 0) {
                    return std::conj(KernelSpec(p, 0.0).cf_minus_one(-z));
                }
                // Integrate by parts against the survival function
                // S(s) = (x0 / (x0 + s))^alpha and rotate the contour onto the
                // positive imaginary axis, where e^{izs} decays:
                //   cf(z) - 1 = -int_0^inf e^{-u} S(i u / z) du.
                const double scale = p.x0 * z;
                auto survival = [&](double u) {
                    return std::pow(cplx(scale, 0) / cplx(scale, u), p.alpha);
                };
                boost::math::quadrature::exp_sinh<double> integrator;
                const double tol = 1e-13;
                const double re = integrator.integrate(
                    [&](double u) { return std::exp(-u) * survival(u).real(); }, tol);
                const double im = integrator.integrate(
                    [&](double u) { return std::exp(-u) * survival(u).imag(); }, tol);
                return -cplx(re, im);
            },
        },
        shape_);
}

double KernelSpec::time_scale() const noexcept
{
    return std::visit(
        overloaded{
            [](const Exponential& e) { return 1.0 / e.beta; },
            [](const PowerLaw& p) { return p.x0; },
            [](const SumOfExponentials& s) {
                double scale = std::numeric_limits<double>::max();
                for (const auto& c : s.components) {
                    if (c.weight > 0) {
                        scale = std::min(scale, 1.0 / c.rate);
                    }
                }
                return scale;
            },
        },
        shape_);
}

std::vector<ExponentialComponent> KernelSpec::exponential_components() const
{
    return std::visit(
        overloaded{
            [](const Exponential& e) {
                return std::vector<ExponentialComponent>{{1.0, e.beta}};
            },
            [](const PowerLaw&) { return std::vector<ExponentialComponent>{}; },
            [](const SumOfExponentials& s) {
                std::vector<ExponentialComponent> out;
                for (const auto& c : s.components) {
                    if (c.weight > 0) {
                        out.push_back(c);
                    }
                }
                return out;
            },
        },
        shape_);
}

double KernelSpec::default_truncation_horizon(double tolerance) const
{
    return std::visit(
        overloaded{
            [tolerance](const Exponential& e) { return -std::log(tolerance) / e.beta; },
            [tolerance](const PowerLaw& p) {
                return p.x0 * std::expm1(-std::log(tolerance) / p.alpha);
            },
            [tolerance](const SumOfExponentials& s) {
                double slowest = std::numeric_limits<double>::max();
                for (const auto& c : s.components) {
                    if (c.weight > 0) {
                        slowest = std::min(slowest, c.rate);
                    }
                }
                double lo = 0;
                double hi = -std::log(tolerance) / slowest;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (sum_exp_tail(s, mid) > tolerance) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return hi;
            },
        },
        shape_);
}

RegimeSpec::RegimeSpec(double T_, double lambda_, double mu_, double exponent_)
    : T(T_), lambda(lambda_), mu(mu_), exponent(exponent_)
{
    require(std::isfinite(T) && T > 0, "regime.T must be > 0");
    require(std::isfinite(lambda) && lambda > 0, "regime.lambda must be > 0");
    require(std::isfinite(mu) && mu > 0, "regime.mu must be > 0");
    require(exponent > 0 && exponent <= 1, "regime exponent must lie in (0, 1]");
    if (!(std::pow(T, exponent) > lambda)) {
        std::ostringstream msg;
        msg << "regime needs T^" << exponent << " > lambda so that a_T = 1 - lambda/T^"
            << exponent << " lies in (0, 1); got T=" << T << ", lambda=" << lambda;
        fail(ErrorKind::InvalidArgument, msg.str());
    }
}

double RegimeSpec::a_T() const noexcept
{
    return 1.0 - lambda / std::pow(T, exponent);
}

double RegimeSpec::u_T() const noexcept
{
    return T * (1.0 - a_T()) / lambda;
}

double eval_kernel(const KernelSpec& spec, double t)
{
    return spec(t);
}

double kernel_mean(const KernelSpec& spec)
{
    return spec.mean();
}

std::complex<double> kernel_cf(const KernelSpec& spec, double z)
{
    return spec.cf(z);
}

} // namespace nuh
