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

#include "nuh/errors.hpp"
#include "nuh/resolvent.hpp"
#include "nuh/stats.hpp"

using namespace nuh;

namespace {

/// sum_{k=1}^{K} (a phi)^{*k} for phi = Exp(beta): Gamma(k, beta) densities.
double neumann_exponential(double a, double beta, double t, int K)
{
    double term = a * beta * std::exp(-beta * t); // k = 1
    double sum = term;
    for (int k = 2; k <= K; ++k) {
        term *= a * beta * t / (k - 1);
        sum += term;
    }
    return sum;
}

} // namespace

TEST_SUITE("resolvent") {

TEST_CASE("exponential closed form against the Neumann series")
{
    const double a = 0.9;
    const KernelSpec k = KernelSpec::exponential(1, a);
    const Grid psi = compute_resolvent(k, 50, 0.001);
    double worst = 0;
    double worst_series = 0;
    for (Eigen::Index i = 0; i < psi.size(); i += 7) {
        const double t = psi.time(i);
        const double exact = a * std::exp(-(1 - a) * t);
        worst = std::max(worst, std::abs(psi[i] - exact));
        worst_series = std::max(worst_series, std::abs(neumann_exponential(a, 1, t, 400) - exact));
    }
    CHECK(worst_series < 1e-12);
    CHECK(worst < 1e-6);
}

TEST_CASE("L1 norm identity")
{
    for (double a : {0.5, 0.9}) {
        const KernelSpec ks[] = {KernelSpec::exponential(1, a),
                                 KernelSpec::sum_of_exponentials({{0.5, 1}, {0.5, 2}}, a)};
        for (const auto& k : ks) {
            const double horizon = 40 / (1 - a);
            const Grid psi = compute_resolvent(k, horizon, default_resolvent_step(k));
            CHECK(psi.integral() == doctest::Approx(a / (1 - a)).epsilon(1e-3));
        }
    }
}

TEST_CASE("small a_T: psi is the kernel")
{
    const KernelSpec k = KernelSpec::sum_of_exponentials({{0.5, 1}, {0.5, 4}}, 1e-6);
    const Grid psi = compute_resolvent(k, 10, 0.01);
    CHECK(sup_distance(psi, [&](double t) { return k(t); }) < 1e-5);
}

TEST_CASE("coarse step is rejected")
{
    const KernelSpec k = KernelSpec::exponential(1, 0.5);
    try {
        compute_resolvent(k, 10, 0.5);
        FAIL("expected StepTooCoarse");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::StepTooCoarse);
    }
    CHECK_THROWS_AS(compute_resolvent(k, 10, 0.03), Error); // does not divide
}

TEST_CASE("rho density")
{
    const KernelSpec base = KernelSpec::exponential(1, 0.5);
    const RegimeSpec r(1000, 1, 1);
    const Grid rho = rho_density(base, r, 8, 0.02);
    CHECK(rho.integral() == doctest::Approx(1).epsilon(1e-3));
    CHECK(l2_distance(rho, [](double x) { return exponential_limit_density(x, 1, 1); }) < 0.05);

    double previous = 0;
    for (double T : {1e2, 1e3, 1e4}) {
        const Grid g = rho_density(base, RegimeSpec(T, 1, 1), 1, 0.02);
        const double peak = g.values().maxCoeff();
        CHECK(peak <= 1.0 + 1e-9);
        CHECK(peak >= previous - 1e-9);
        previous = peak;
    }
}

TEST_CASE("rho characteristic function")
{
    const KernelSpec base = KernelSpec::exponential(1, 0.5);
    const RegimeSpec r(1000, 1, 1);
    CHECK(std::abs(rho_cf(base, r, 0) - 1.0) < 1e-15);
    CHECK(std::abs(rho_cf(base, r, 1) - 1.0 / std::complex<double>(1, -1)) < 0.01);
    for (double z = 1e-2; z <= 1e4; z *= 3) {
        CHECK(std::abs(rho_cf(base, r, z)) <= 2 * std::min(1.0, 1 / z));
    }
}

TEST_CASE("geometric sums")
{
    const KernelSpec base = KernelSpec::exponential(1, 0.5);
    const RegimeSpec r(1000, 1, 1);
    RandomStream rng(5);
    const auto xs = sample_geometric_sum(base, r, 100000, rng);
    const RunningStats s = summarize(xs);
    CHECK(std::abs(s.mean() - r.d0(1)) < 3 * s.standard_error());

    // Exact exponential law with mean a_T-free d0 for the exponential base.
    const auto report = ks_marginal_test(std::span(xs).first(5000), ExponentialReference{1 / r.d0(1)});
    CHECK(report.statistic < 0.05);

    const RegimeSpec trivial(1000, 1000 * (1 - 1e-12), 1);
    RandomStream rng2(6);
    const auto ys = sample_geometric_sum(base, trivial, 20000, rng2);
    const RunningStats t = summarize(ys);
    CHECK(std::abs(t.mean() - 1e-3) < 3 * t.standard_error());
}

TEST_CASE("Mittag-Leffler characteristic function")
{
    CHECK(std::abs(mittag_leffler_cf(0.5, 1.0, 0) - 1.0) < 1e-15);
    for (double z : {0.3, 1.0, 4.0}) {
        const auto exp_cf = 1.0 / (1.0 - std::complex<double>(0, 2 * z));
        CHECK(std::abs(mittag_leffler_cf(1.0, 2.0, z) - exp_cf) < 1e-14);
    }
    const auto expected = 1.0 / (1.0 - std::polar(1.0, M_PI / 4));
    CHECK(std::abs(mittag_leffler_cf(0.5, 1.0, 1.0) - expected) < 1e-14);
}

TEST_CASE("Mittag-Leffler alpha = 1/2 against its Laplace transform")
{
    // With C = 1 the law has Laplace transform 1 / (1 + s^{1/2}); the
    // density is x^{-1/2} E_{1/2,1/2}(-x^{1/2}), and E_{1/2,1/2}(-y) =
    // 1/sqrt(pi) - y e^{y^2} erfc(y). Integrate e^{-s x} against it.
    auto density = [](double x) {
        const double y = std::sqrt(x);
        return (1 / std::sqrt(M_PI) - y * std::exp(y * y) * std::erfc(y)) / y;
    };
    const double s = 2.0;
    // Substitute x = v^2 to remove the singularity at zero.
    double laplace = 0;
    const int n = 200000;
    const double vmax = 8.0;
    for (int i = 0; i < n; ++i) {
        const double v = (i + 0.5) * vmax / n;
        laplace += std::exp(-s * v * v) * density(v * v) * 2 * v * (vmax / n);
    }
    CHECK(laplace == doctest::Approx(1 / (1 + std::sqrt(s))).epsilon(1e-4));
    // The CF is the Laplace transform at s = -iz on the principal branch.
    // Written as 1 / (1 - C (iz)^{1/2}) this law has C = i, the same phase
    // as the power-law tail scale.
    const double z = 1.5;
    const auto cf = mittag_leffler_cf(0.5, std::complex<double>(0, 1), z);
    CHECK(std::abs(cf - 1.0 / (1.0 + std::sqrt(std::complex<double>(0, -z)))) < 1e-13);
}

TEST_CASE("tail scale of the power law")
{
    const auto sigma = tail_scale_sigma(KernelSpec::power_law(0.5, 1, 0.5));
    // cf(z) - 1 ~ -Gamma(1 - alpha) x0^alpha (-iz)^alpha, written over (iz)^alpha.
    const auto expected = -std::tgamma(0.5) * std::polar(1.0, -M_PI / 2);
    CHECK(std::abs(sigma - expected) < 1e-3);
    CHECK_THROWS_AS(tail_scale_sigma(KernelSpec::exponential(1, 0.5)), Error);
}

}
