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

#include "doctest.h"

#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nuh/errors.hpp"
#include "nuh/parallel.hpp"
#include "nuh/scaling.hpp"

using namespace nuh;

TEST_SUITE("scaling") {

TEST_CASE("empty paths")
{
    const RegimeSpec r(1e4, 1, 1);
    const KernelSpec k = KernelSpec::exponential(1, r.a_T());
    const PointPath empty(1e4, {});
    const auto c = rescale_intensity(empty, k, r);
    CHECK(c.kind == RescaledKind::IntensityC);
    CHECK(c.grid.values().isConstant((1 - r.a_T()) * r.mu, 1e-15));
    CHECK(rescale_count(empty, r).grid.values().isZero());
    const auto b = rescale_martingale(empty, k, r);
    CHECK(b.grid[b.grid.size() - 1] == doctest::Approx(-std::sqrt(r.T * r.u_T() * r.mu)).epsilon(1e-9));
}

TEST_CASE("paths shorter than T are rejected")
{
    const RegimeSpec r(1000, 1, 1);
    CHECK_THROWS_AS(rescale_count(PointPath(10, {}), r), Error);
}

TEST_CASE("price from an all-plus path")
{
    const RegimeSpec r(100, 1, 1);
    const PointPath p(100, {1, 2, 3}, {Mark::Plus, Mark::Plus, Mark::Plus});
    const auto price = rescale_price(p, r);
    CHECK(price.grid[price.grid.size() - 1] == doctest::Approx(3.0 / 100));
    CHECK_THROWS_AS(rescale_price(PointPath(100, {1.0}), r), Error);
}

TEST_CASE("square-root intensity integral")
{
    const double mu = 0.7, beta = 1.3, e = 2.5, dt = 0.9;
    const double quad = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double s) { return std::sqrt(mu + e * std::exp(-beta * s)); }, 0.0, dt, 10, 1e-14);
    CHECK(sqrt_intensity_integral(mu, beta, e, dt) == doctest::Approx(quad).epsilon(1e-12));
    CHECK(sqrt_intensity_integral(mu, beta, 0, dt) == doctest::Approx(std::sqrt(mu) * dt));
}

TEST_CASE("rescaled count, intensity and martingale on simulated paths")
{
    const RegimeSpec r(2000, 1, 1);
    const KernelSpec k = KernelSpec::exponential(1, r.a_T());
    const auto paths = parallel_map(200, 0, [&](std::size_t i) {
        return simulate_inversion(k, r.mu, r.T, RandomStream(1).child(i)());
    });
    RunningStats gap, b1;
    for (const auto& p : paths) {
        const auto v = rescale_count(p, r);
        const auto c = rescale_intensity(p, k, r);
        const auto b = rescale_martingale(p, k, r);
        CHECK((v.grid.values().tail(v.grid.size() - 1) - v.grid.values().head(v.grid.size() - 1))
                  .minCoeff() >= 0);
        gap.add(std::abs(v.grid[v.grid.size() - 1] - c.grid.integral()));
        b1.add(b.grid[b.grid.size() - 1]);
    }
    CHECK(gap.mean() <= 5 / std::sqrt(r.T));
    CHECK(std::abs(b1.mean()) < 3 * b1.standard_error());
}

TEST_CASE("martingale without a closed form matches the closed form")
{
    const RegimeSpec r(500, 1, 1);
    const KernelSpec k = KernelSpec::exponential(1, r.a_T());
    const KernelSpec same = KernelSpec::sum_of_exponentials({{0.5, 1}, {0.5, 1 + 1e-12}}, r.a_T());
    const PointPath p = simulate_inversion(k, r.mu, r.T, 3);
    const auto exact = rescale_martingale(p, k, r);
    const auto quad = rescale_martingale(p, same, r);
    CHECK(sup_distance(exact.grid, [&](double t) { return quad.grid(t); }) < 1e-6);
}

TEST_CASE("expected count")
{
    const KernelSpec k = KernelSpec::exponential(1, 0.8);
    const ExpectedCount exact(k, 1.0, 60);
    const KernelSpec sum = KernelSpec::sum_of_exponentials({{0.5, 1}, {0.5, 1 + 1e-9}}, 0.8);
    const ExpectedCount numeric(sum, 1.0, 60);
    for (double t : {1.0, 10.0, 60.0}) {
        CHECK(numeric(t) == doctest::Approx(exact(t)).epsilon(1e-4));
    }
    CHECK(ExpectedCount(KernelSpec::exponential(1, 0), 2.0, 10)(10) == doctest::Approx(20));

    // Finite differences of the mean against the renewal identity
    // m'(t) = mu (1 + int_0^t psi).
    const double h = 1e-3;
    const double t = 5;
    const double slope = (exact(t + h) - exact(t - h)) / (2 * h);
    const double a = 0.8, g = 1 - a;
    CHECK(slope == doctest::Approx(1 + a / g * (1 - std::exp(-g * t))).epsilon(1e-6));

    const KernelSpec mixed = KernelSpec::sum_of_exponentials({{0.5, 1}, {0.5, 3}}, 0.7);
    const ExpectedCount em(mixed, 0.5, 40);
    RunningStats n;
    for (std::size_t i = 0; i < 2000; ++i) {
        n.add(static_cast<double>(simulate_cluster(mixed, 0.5, 40, RandomStream(4).child(i)()).size()));
    }
    CHECK(std::abs(n.mean() - em(40)) < 3 * n.standard_error());
}

TEST_CASE("co-variations of independent Poisson streams")
{
    const BivariateKernelSpec b(Exponential{1}, 0.6, Exponential{1}, 0.4, 0);
    const double T = 2000;
    std::vector<QuadraticCovariation> qs;
    for (std::size_t i = 0; i < 200; ++i) {
        const PointPath p = simulate_bivariate_inversion(b, 1.0, T, RandomStream(5).child(i)());
        qs.push_back(bivariate_covariation(p, b, 1.0, T));
    }
    const auto r = covariation_report(qs);
    CHECK(r.passed);
    CHECK(r.details["b12_mean"].get<double>() == doctest::Approx(0).epsilon(0.01));
}

TEST_CASE("degenerate regime bound")
{
    const KernelSpec base = KernelSpec::exponential(1, 0.5);
    const std::vector<DegenerateScheduleEntry> poisson = {{1000, 0.0}};
    CHECK(check_degenerate_regime(base, 1.0, poisson, 50, 1).passed);
    const std::vector<DegenerateScheduleEntry> one = {{1e4, 0.99}};
    const auto r = check_degenerate_regime(base, 1.0, one, 100, 2);
    CHECK(r.passed);
    CHECK(r.statistic <= 1.25);
}

}
