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

#include "nuh/errors.hpp"
#include "nuh/hawkes.hpp"
#include "nuh/parallel.hpp"
#include "nuh/stats.hpp"

using namespace nuh;

namespace {

template <class Sim>
RunningStats counts(std::size_t paths, std::uint64_t seed, Sim&& sim)
{
    RunningStats s;
    const auto n = parallel_map(paths, 0, [&](std::size_t i) {
        return static_cast<double>(sim(RandomStream(seed).child(i)()));
    });
    for (double x : n) {
        s.add(x);
    }
    return s;
}

double pooled_z(const RunningStats& a, const RunningStats& b)
{
    return std::abs(a.mean() - b.mean()) /
           std::hypot(a.standard_error(), b.standard_error());
}

struct Recorder
{
    std::vector<EventRecord> events;
    std::vector<ProbeRecord> probes;
    void on_event(const EventRecord& r) { events.push_back(r); }
    void on_probe(const ProbeRecord& r) { probes.push_back(r); }
};

} // namespace

TEST_SUITE("hawkes") {

TEST_CASE("point path validation")
{
    CHECK_NOTHROW(PointPath(1.0, {0.1, 0.5}));
    CHECK_THROWS_AS(PointPath(1.0, {0.5, 0.1}), Error);
    CHECK_THROWS_AS(PointPath(1.0, {0.5, 1.5}), Error);
    CHECK_THROWS_AS(PointPath(1.0, {0.5}, {Mark::Plus, Mark::Minus}), Error);
    const PointPath p(2.0, {0.5, 1.0, 1.5}, {Mark::Plus, Mark::Minus, Mark::Plus});
    CHECK(p.count_until(1.0) == 2);
    CHECK(p.signed_count_until(2.0) == 1);
    try {
        PointPath(1.0, {0.5}).signed_count_until(1.0);
        FAIL("expected UnmarkedPath");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnmarkedPath);
    }
}

TEST_CASE("a_T = 0 is a Poisson process")
{
    const KernelSpec k = KernelSpec::exponential(1, 0);
    const auto s = counts(500, 1, [&](std::uint64_t seed) {
        return simulate_thinning(k, 2, 100, seed).size();
    });
    CHECK(std::abs(s.mean() - 200) < 3 * s.standard_error());
}

TEST_CASE("stationary rate mu / (1 - a_T)")
{
    const KernelSpec k = KernelSpec::exponential(1, 0.5);
    const auto s = counts(400, 2, [&](std::uint64_t seed) {
        const PointPath p = simulate_thinning(k, 1, 200, seed);
        return p.size() - p.count_until(20.0);
    });
    CHECK(std::abs(s.mean() / 180 - 2) < 3 * s.standard_error() / 180);
}

TEST_CASE("thinning, cluster and inversion agree")
{
    const KernelSpec k = KernelSpec::exponential(2, 0.6);
    const auto thin = counts(1500, 3, [&](std::uint64_t s) { return simulate_thinning(k, 1, 50, s).size(); });
    const auto clus = counts(1500, 4, [&](std::uint64_t s) { return simulate_cluster(k, 1, 50, s).size(); });
    const auto inv = counts(1500, 5, [&](std::uint64_t s) { return simulate_inversion(k, 1, 50, s).size(); });
    CHECK(pooled_z(thin, clus) < 3);
    CHECK(pooled_z(thin, inv) < 3);

    const KernelSpec p = KernelSpec::power_law(0.5, 1, 0.4);
    const auto pt = counts(800, 6, [&](std::uint64_t s) { return simulate_thinning(p, 1, 30, s).size(); });
    const auto pc = counts(800, 7, [&](std::uint64_t s) { return simulate_cluster(p, 1, 30, s).size(); });
    CHECK(pooled_z(pt, pc) < 3);
}

TEST_CASE("same seed, same path")
{
    const KernelSpec k = KernelSpec::sum_of_exponentials({{0.5, 1}, {0.5, 4}}, 0.7);
    CHECK(simulate_thinning(k, 1, 100, 9) == simulate_thinning(k, 1, 100, 9));
    CHECK(simulate_cluster(k, 1, 100, 9) == simulate_cluster(k, 1, 100, 9));
    CHECK(simulate_thinning(k, 1, 100, 9).seed_tag() == 9);
    CHECK_FALSE(simulate_thinning(k, 1, 100, 9) == simulate_thinning(k, 1, 100, 10));
}

TEST_CASE("cluster offspring statistics")
{
    RandomStream rng(11);
    const KernelSpec k = KernelSpec::exponential(1, 0.8);
    const double horizon = 1000;
    const ClusterTree tree = simulate_cluster_tree(k, 10, horizon, rng);
    std::vector<int> children(tree.times.size(), 0);
    for (std::size_t i = 0; i < tree.times.size(); ++i) {
        if (tree.parents[i] >= 0) {
            ++children[static_cast<std::size_t>(tree.parents[i])];
        }
    }
    RunningStats direct;
    for (std::size_t i = 0; i < tree.times.size(); ++i) {
        if (tree.times[i] < horizon - 50) {
            direct.add(children[i]);
        }
    }
    CHECK(direct.count() > 10000);
    CHECK(std::abs(direct.mean() - 0.8) < 3 * direct.standard_error());

    RandomStream rng2(12);
    const ClusterTree t2 = simulate_cluster_tree(KernelSpec::exponential(1, 0.5), 10, horizon, rng2);
    std::vector<std::size_t> root(t2.times.size());
    std::vector<double> size(t2.times.size(), 0);
    for (std::size_t i = 0; i < t2.times.size(); ++i) {
        root[i] = t2.parents[i] < 0 ? i : root[static_cast<std::size_t>(t2.parents[i])];
        size[root[i]] += 1;
    }
    RunningStats descendants;
    for (std::size_t i = 0; i < t2.times.size(); ++i) {
        if (t2.parents[i] < 0 && t2.times[i] < horizon - 100) {
            descendants.add(size[i] - 1);
        }
    }
    CHECK(std::abs(descendants.mean() - 1.0) < 3 * descendants.standard_error());
}

TEST_CASE("tiny baseline gives an empty path")
{
    CHECK(simulate_thinning(KernelSpec::exponential(1, 0.5), 1e-12, 10, 1).empty());
    CHECK(simulate_cluster(KernelSpec::exponential(1, 0.5), 1e-12, 10, 1).empty());
}

TEST_CASE("event cap")
{
    try {
        simulate_thinning(KernelSpec::exponential(1, 0.5), 100, 100, 1, 1000);
        FAIL("expected GenerationOverflow");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::GenerationOverflow);
    }
}

TEST_CASE("observer sees events and probes")
{
    const KernelSpec k = KernelSpec::exponential(1, 0.5);
    const std::vector<double> probes = {1, 2, 5, 10};
    for (int method = 0; method < 2; ++method) {
        Recorder rec;
        RandomStream rng(13);
        std::size_t n = 0;
        if (method == 0) {
            detail::ExponentialState state(k);
            n = run_thinning(state, 1.0, 10.0, probes, rng, rec);
        } else {
            n = run_exponential_inversion(k, 1.0, 10.0, probes, rng, rec);
        }
        CHECK(rec.events.size() == n);
        REQUIRE(rec.probes.size() == probes.size());
        for (std::size_t i = 0; i < rec.events.size(); ++i) {
            CHECK(rec.events[i].intensity_after ==
                  doctest::Approx(rec.events[i].intensity_before + 0.5));
            CHECK(rec.events[i].count == i + 1);
        }
        std::size_t seen = 0;
        for (const auto& p : rec.probes) {
            while (seen < rec.events.size() && rec.events[seen].time <= p.time) {
                ++seen;
            }
            CHECK(p.count == seen);
            CHECK(p.intensity >= 1.0);
            CHECK(p.compensator >= p.time);
        }
    }
}

TEST_CASE("intensity path")
{
    const KernelSpec k = KernelSpec::exponential(1, 0.5);
    const Grid flat = intensity_path(PointPath(3, {}), k, 1.0, 0.5);
    CHECK(flat.values().isConstant(1.0));
    const Grid one = intensity_path(PointPath(3, {1.0}), k, 1.0, 0.5);
    CHECK(one(2.0) == doctest::Approx(1 + 0.5 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(one(1.0) == doctest::Approx(1.0)); // left limit at the jump

    const PointPath path = simulate_thinning(KernelSpec::power_law(0.5, 1, 0.6), 1, 50, 3);
    const Grid g = intensity_path(path, KernelSpec::power_law(0.5, 1, 0.6), 1.0, 0.01);
    CHECK(g.values().minCoeff() >= 1.0);
}

TEST_CASE("bivariate construction")
{
    CHECK_THROWS_AS(BivariateKernelSpec(Exponential{1}, 1.0, Exponential{1}, 0.0, 0.5), Error);
    CHECK_THROWS_AS(BivariateKernelSpec(Exponential{1}, 0.6, Exponential{1}, 0.5, 0.5), Error);
    const BivariateKernelSpec b(Exponential{1}, 0.6, Exponential{1}, 0.4, 0.5);
    CHECK(b.price_scale() == doctest::Approx(1 / 0.8));
    CHECK(b.has_common_exponential_rate());
    CHECK(b.mean() == doctest::Approx(1));
}

TEST_CASE("bivariate symmetry and total process")
{
    const BivariateKernelSpec b(Exponential{1}, 0.6, Exponential{1}, 0.4, 0.7);
    const BivariateKernelSpec slow(Exponential{1}, 0.6, SumOfExponentials{{{0.5, 1}, {0.5, 2}}}, 0.4, 0.7);
    for (int which = 0; which < 3; ++which) {
        RunningStats plus, minus, total;
        const auto paths = parallel_map(800, 0, [&](std::size_t i) {
            const std::uint64_t seed = RandomStream(20 + which).child(i)();
            if (which == 0) {
                return simulate_bivariate(b, 1, 40, seed);
            }
            if (which == 1) {
                return simulate_bivariate_inversion(b, 1, 40, seed);
            }
            return simulate_bivariate(slow, 1, 40, seed);
        });
        for (const auto& p : paths) {
            const long long s = p.signed_count_until(40);
            const auto n = static_cast<long long>(p.size());
            plus.add(static_cast<double>((n + s) / 2));
            minus.add(static_cast<double>((n - s) / 2));
            total.add(static_cast<double>(n));
        }
        CHECK(pooled_z(plus, minus) < 3);
        if (which < 2) {
            const KernelSpec k = b.total_kernel();
            const auto uni = counts(800, 30 + which, [&](std::uint64_t s) {
                return simulate_thinning(k, 2, 40, s).size();
            });
            CHECK(pooled_z(total, uni) < 3);
        }
    }
}

TEST_CASE("bivariate intensity")
{
    const BivariateKernelSpec b(Exponential{1}, 0.6, Exponential{1}, 0.4, 0.5);
    const PointPath p(3, {1.0}, {Mark::Plus});
    const auto [plus, minus] = intensity_path(p, b, 1.0, 0.5);
    CHECK(plus(2.0) == doctest::Approx(1 + 0.5 * 0.6 * std::exp(-1.0)));
    CHECK(minus(2.0) == doctest::Approx(1 + 0.5 * 0.4 * std::exp(-1.0)));
    CHECK_THROWS_AS(intensity_path(PointPath(3, {1.0}), b, 1.0, 0.5), Error);
}

}
