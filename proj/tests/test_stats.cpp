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
#include <numeric>
#include <vector>

#include "nuh/random.hpp"
#include "nuh/stats.hpp"

using namespace nuh;

namespace {

std::vector<double> exponential_draws(std::size_t n, double rate, std::uint64_t seed)
{
    RandomStream rng(seed);
    std::vector<double> xs(n);
    for (auto& x : xs) {
        x = rng.exponential() / rate;
    }
    return xs;
}

} // namespace

TEST_SUITE("stats") {

TEST_CASE("running statistics")
{
    const std::vector<double> xs = {1, 2, 3, 4, 10};
    const RunningStats s = summarize(xs);
    CHECK(s.count() == 5);
    CHECK(s.mean() == doctest::Approx(4));
    CHECK(s.variance() == doctest::Approx(12.5));
    RunningStats a = summarize(std::span(xs).first(2));
    a.merge(summarize(std::span(xs).subspan(2)));
    CHECK(a.mean() == doctest::Approx(4));
    CHECK(a.variance() == doctest::Approx(12.5));
}

TEST_CASE("KS statistic")
{
    const std::vector<double> xs = {0.5};
    CHECK(ks_statistic(xs, [](double x) { return x; }) == doctest::Approx(0.5));
    const std::vector<double> a = {1, 2, 3};
    const std::vector<double> b = {4, 5, 6};
    CHECK(ks_statistic_two_sample(a, b) == doctest::Approx(1));
    CHECK(ks_statistic_two_sample(a, a) == doctest::Approx(0));
}

TEST_CASE("KS null calibration")
{
    int passed = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto xs = exponential_draws(2000, 2.0, 100 + seed);
        passed += ks_marginal_test(xs, ExponentialReference{2.0}).passed ? 1 : 0;
    }
    CHECK(passed >= 95);
    const auto wrong = exponential_draws(2000, 1.5, 7);
    CHECK_FALSE(ks_marginal_test(wrong, ExponentialReference{2.0}).passed);
}

TEST_CASE("report serialization")
{
    const auto xs = exponential_draws(500, 1.0, 3);
    ComparisonReport r = ks_marginal_test(xs, ExponentialReference{1.0});
    r.seeds = {3};
    const auto j = r.to_json();
    CHECK(j["n_samples"] == 500);
    CHECK(j["passed"].is_boolean());
    CHECK(j["seeds"][0] == 3);
    CHECK(j["statistic"].get<double>() == doctest::Approx(r.statistic));
}

TEST_CASE("empirical characteristic function")
{
    const double d0 = 1.0;
    const std::size_t n = 5000;
    const auto xs = exponential_draws(n, 1 / d0, 4);
    std::vector<double> zs;
    for (int i = 1; i <= 100; ++i) {
        zs.push_back(0.1 * i);
    }
    const auto cf = [&](double z) { return 1.0 / std::complex<double>(1, -z * d0); };
    const auto r = empirical_cf_test(xs, cf, zs, 0.01, 3.0);
    CHECK(r.statistic < 3 / std::sqrt(double(n)) + 0.01);
    CHECK(r.passed);
    const std::vector<double> zero = {0.0};
    CHECK(empirical_cf_test(xs, cf, zero).statistic < 1e-12);
}

TEST_CASE("mean z test")
{
    RunningStats s;
    for (double x : exponential_draws(10000, 1.0, 5)) {
        s.add(x);
    }
    CHECK(mean_z_test("m", s, 1.0).passed);
    CHECK_FALSE(mean_z_test("m", s, 1.2).passed);
}

}
