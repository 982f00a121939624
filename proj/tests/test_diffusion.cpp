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

#include "nuh/diffusion.hpp"
#include "nuh/errors.hpp"
#include "nuh/parallel.hpp"
#include "nuh/stats.hpp"

using namespace nuh;

TEST_SUITE("diffusion") {

TEST_CASE("parameter validation and the Hawkes mapping")
{
    CHECK_THROWS_AS(CIRParams(0, 1, 1), Error);
    CHECK_THROWS_AS(CIRParams(1, -1, 1), Error);
    CHECK_THROWS_AS(CIRParams(1, 1, -1), Error);
    const CIRParams p = CIRParams::from_hawkes(2, 0.5, 3);
    CHECK(p.kappa == doctest::Approx(4));
    CHECK(p.theta == doctest::Approx(3));
    CHECK(p.hawkes_lambda() == doctest::Approx(2));
    CHECK(p.hawkes_mean() == doctest::Approx(0.5));
}

TEST_CASE("vanishing noise follows the ODE")
{
    RandomStream rng(1);
    const double x = 0.2, dt = 0.3;
    const CIRParams ode(1, 1, 0);
    CHECK(cir_exact_step(ode, x, dt, rng) == doctest::Approx(ode.conditional_mean(x, dt)).epsilon(1e-15));
    // At nu = 1e-8 the standard deviation of one step is about 4e-9, so the
    // draw sits within a few of those; at nu = 1e-12 it is within 1e-10.
    const CIRParams small(1, 1, 1e-8);
    const double sd = std::sqrt(small.conditional_variance(x, dt));
    for (int i = 0; i < 100; ++i) {
        CHECK(std::abs(cir_exact_step(small, x, dt, rng) - small.conditional_mean(x, dt)) < 6 * sd);
    }
    const CIRParams tiny(1, 1, 1e-12);
    for (int i = 0; i < 100; ++i) {
        CHECK(std::abs(cir_exact_step(tiny, x, dt, rng) - tiny.conditional_mean(x, dt)) < 1e-10);
    }
}

TEST_CASE("exact step moments")
{
    const double x = 0.2, dt = 0.3;
    for (double nu : {0.5, 2.0}) { // dimension above and below one
        const CIRParams q(1, 1, nu);
        RandomStream rng(2);
        std::vector<double> xs(100000);
        for (auto& v : xs) {
            v = cir_exact_step(q, x, dt, rng);
        }
        const RunningStats s = summarize(xs);
        CHECK(std::abs(s.mean() - q.conditional_mean(x, dt)) < 3 * s.standard_error());
        // Standard error of the sample variance from the fourth moment.
        double m4 = 0;
        for (double v : xs) {
            m4 += std::pow(v - s.mean(), 4);
        }
        m4 /= static_cast<double>(xs.size());
        const double var_se = std::sqrt((m4 - s.variance() * s.variance()) / static_cast<double>(xs.size()));
        CHECK(std::abs(s.variance() - q.conditional_variance(x, dt)) < 3 * var_se);
    }
}

TEST_CASE("paths: mean curve, positivity and step halving")
{
    const CIRParams p = CIRParams::from_hawkes(1, 1, 1);
    const auto paths = parallel_map(2000, 0, [&](std::size_t i) {
        return cir_path(p, 1.0, 0.01, RandomStream(3).child(i)());
    });
    for (double t : {0.25, 0.5, 1.0}) {
        RunningStats s;
        for (const auto& path : paths) {
            s.add(path.level(t));
        }
        CHECK(std::abs(s.mean() - (1 - std::exp(-t))) < 3 * s.standard_error());
    }
    bool nonnegative = true;
    std::vector<double> coarse;
    for (const auto& path : paths) {
        nonnegative = nonnegative && path.level.values().minCoeff() >= 0;
        coarse.push_back(path.level[path.level.size() - 1]);
    }
    CHECK(nonnegative);

    const auto fine = parallel_map(2000, 0, [&](std::size_t i) {
        const auto path = cir_path(p, 1.0, 0.005, RandomStream(4).child(i)());
        return path.level[path.level.size() - 1];
    });
    const auto report = ks_marginal_test(coarse, EmpiricalReference{fine});
    CHECK(report.passed);
}

TEST_CASE("marginal cdf")
{
    const CIRParams p = CIRParams::from_hawkes(1, 1, 1);
    CHECK(cir_marginal_cdf(p, 1.0, 0.0) == doctest::Approx(0.0));
    CHECK(cir_marginal_cdf(p, 1.0, 100.0) == doctest::Approx(1.0));
    // From x0 > 0 the law is noncentral; compare with simulated draws.
    const CIRParams q(2, 1, 0.7, 0.5);
    RandomStream rng(5);
    std::vector<double> xs(5000);
    for (auto& v : xs) {
        v = cir_exact_step(q, q.x0, 0.4, rng);
    }
    const auto report = ks_marginal_test(xs, CIRMarginalReference{q, 0.4});
    CHECK(report.passed);
}

TEST_CASE("Euler scheme stays close to the exact one")
{
    const CIRParams p(2, 1, 0.5, 1);
    const auto run = [&](CIRScheme scheme, std::uint64_t seed) {
        RunningStats s;
        for (std::size_t i = 0; i < 2000; ++i) {
            const auto path = cir_path(p, 1.0, 0.001, RandomStream(seed).child(i)(), scheme);
            s.add(path.level[path.level.size() - 1]);
        }
        return s;
    };
    const auto exact = run(CIRScheme::Exact, 6);
    const auto euler = run(CIRScheme::Euler, 7);
    CHECK(std::abs(exact.mean() - euler.mean()) <
          3 * std::hypot(exact.standard_error(), euler.standard_error()));
}

TEST_CASE("Heston price moments")
{
    const double lambda = 1, m = 1, mu = 1, scale = 1 / 0.8;
    const HestonParams h(CIRParams::heston_variance(lambda, m, mu), scale);
    const auto paths = parallel_map(2000, 0, [&](std::size_t i) {
        return heston_paths(h, 1.0, 0.002, RandomStream(8).child(i)());
    });
    RunningStats p1, p2;
    for (const auto& path : paths) {
        const double p = path.price[path.price.size() - 1];
        p1.add(p);
        p2.add(p * p);
    }
    // int_0^1 (2 mu / lambda)(1 - e^{-s}) ds
    const double integrated = 2 * mu / lambda * std::exp(-1.0);
    CHECK(std::abs(p1.mean()) < 3 * p1.standard_error());
    CHECK(std::abs(p2.mean() - scale * scale * integrated) < 3 * p2.standard_error());
}

TEST_CASE("constant variance gives Brownian prices")
{
    const HestonParams h(CIRParams(1, 2, 0, 2), 1.5);
    RunningStats s;
    for (std::size_t i = 0; i < 4000; ++i) {
        const auto path = heston_paths(h, 1.0, 0.01, RandomStream(9).child(i)());
        CHECK(path.variance.values().isConstant(2.0, 1e-12));
        s.add(path.price[path.price.size() - 1]);
    }
    const double target = 1.5 * 1.5 * 2;
    CHECK(std::abs(s.variance() - target) < 4 * target * std::sqrt(2.0 / 4000));
}

}
