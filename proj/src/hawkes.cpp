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

#include "nuh/hawkes.hpp"

#include <algorithm>
#include <cmath>

#include <boost/random/poisson_distribution.hpp>

namespace nuh {

namespace {

double checked_norm(double a_T, double w1, double w2)
{
    require(w1 >= 0, "w1 must be >= 0");
    require(w2 > 0, "phi2 must not vanish: w2 must be > 0");
    require(std::abs(w1 + w2 - 1) < 1e-12, "w1 + w2 must equal 1");
    require(a_T >= 0 && a_T < 1, "a_T must lie in [0, 1)");
    return a_T;
}

struct EventCollector
{
    std::vector<double> times;
    std::vector<Mark> marks;

    void on_event(const EventRecord& e) { times.push_back(e.time); }
    void on_event(const MarkedEventRecord& e)
    {
        times.push_back(e.time);
        marks.push_back(e.mark);
    }
};

} // namespace

BivariateKernelSpec::BivariateKernelSpec(KernelShape phi1, double w1, KernelShape phi2,
                                         double w2, double a_T)
    : self_(std::move(phi1), checked_norm(a_T, w1, w2) * w1),
      cross_(std::move(phi2), a_T * w2),
      w1_(w1),
      w2_(w2),
      a_T_(a_T)
{
}

double BivariateKernelSpec::mean() const
{
    return w1_ * self_.mean() + w2_ * cross_.mean();
}

KernelSpec BivariateKernelSpec::total_kernel() const
{
    require(self_.has_finite_mean() && cross_.has_finite_mean(),
            "the total kernel needs exponential shapes");
    if (has_common_exponential_rate()) {
        return KernelSpec::exponential(self_.exponential_components().front().rate, a_T_);
    }
    std::vector<ExponentialComponent> all;
    for (const auto& c : self_.exponential_components()) {
        all.push_back({w1_ * c.weight, c.rate});
    }
    for (const auto& c : cross_.exponential_components()) {
        all.push_back({w2_ * c.weight, c.rate});
    }
    return KernelSpec::sum_of_exponentials(std::move(all), a_T_);
}

bool BivariateKernelSpec::has_common_exponential_rate() const noexcept
{
    if (!self_.is_single_exponential() || !cross_.is_single_exponential()) {
        return false;
    }
    return self_.exponential_components().front().rate ==
           cross_.exponential_components().front().rate;
}

ClusterTree simulate_cluster_tree(const KernelSpec& kernel, double mu, double horizon,
                                  RandomStream& rng, std::size_t event_cap)
{
    require(mu > 0, "baseline intensity must be > 0");
    require(horizon > 0, "horizon must be > 0");
    ClusterTree tree;
    auto poisson = [&rng](double mean) -> std::int64_t {
        if (!(mean > 0)) {
            return 0;
        }
        return boost::random::poisson_distribution<std::int64_t, double>(mean)(rng);
    };
    auto push = [&](double time, std::int64_t parent) {
        if (tree.times.size() >= event_cap) {
            fail(ErrorKind::GenerationOverflow, "event cap exceeded in cluster simulation");
        }
        tree.times.push_back(time);
        tree.parents.push_back(parent);
    };

    const std::int64_t immigrants = poisson(mu * horizon);
    for (std::int64_t i = 0; i < immigrants; ++i) {
        push(horizon * rng.uniform_positive(), -1);
    }
    if (kernel.a_T() == 0) {
        return tree;
    }

    const auto components = kernel.exponential_components();
    const double a = kernel.a_T();
    for (std::size_t i = 0; i < tree.times.size(); ++i) {
        const double s = tree.times[i];
        const double window = std::min(horizon - s, kernel.truncation_horizon());
        const auto parent = static_cast<std::int64_t>(i);
        if (!components.empty()) {
            for (const auto& c : components) {
                const double cut = std::expm1(-c.rate * window); // -F(window)
                const std::int64_t n = poisson(-a * c.weight * cut);
                for (std::int64_t j = 0; j < n; ++j) {
                    const double offset = -std::log1p(rng.uniform_positive() * cut) / c.rate;
                    push(std::min(s + offset, horizon), parent);
                }
            }
        } else {
            const double cdf = kernel.base_cdf(window);
            const std::int64_t n = poisson(a * cdf);
            for (std::int64_t j = 0; j < n; ++j) {
                const double offset = kernel.base_quantile(rng.uniform_positive() * cdf);
                push(std::min(s + offset, horizon), parent);
            }
        }
    }
    return tree;
}

PointPath simulate_thinning(const KernelSpec& kernel, double mu, double horizon,
                            std::uint64_t seed, std::size_t event_cap)
{
    RandomStream rng = RandomStream(seed).substream("thinning");
    EventCollector out;
    if (kernel.has_finite_mean()) {
        detail::ExponentialState state(kernel);
        run_thinning(state, mu, horizon, {}, rng, out, event_cap);
    } else {
        detail::HistoryState state(kernel);
        run_thinning(state, mu, horizon, {}, rng, out, event_cap);
    }
    return PointPath(horizon, std::move(out.times), {}, seed);
}

PointPath simulate_cluster(const KernelSpec& kernel, double mu, double horizon,
                           std::uint64_t seed, std::size_t event_cap)
{
    RandomStream rng = RandomStream(seed).substream("cluster");
    ClusterTree tree = simulate_cluster_tree(kernel, mu, horizon, rng, event_cap);
    std::sort(tree.times.begin(), tree.times.end());
    return PointPath(horizon, std::move(tree.times), {}, seed);
}

PointPath simulate_inversion(const KernelSpec& kernel, double mu, double horizon,
                             std::uint64_t seed, std::size_t event_cap)
{
    RandomStream rng = RandomStream(seed).substream("inversion");
    EventCollector out;
    run_exponential_inversion(kernel, mu, horizon, {}, rng, out, event_cap);
    return PointPath(horizon, std::move(out.times), {}, seed);
}

PointPath simulate_bivariate(const BivariateKernelSpec& kernels, double mu, double horizon,
                             std::uint64_t seed, std::size_t event_cap)
{
    RandomStream rng = RandomStream(seed).substream("bivariate");
    EventCollector out;
    run_bivariate_thinning(kernels, mu, horizon, {}, rng, out, event_cap);
    return PointPath(horizon, std::move(out.times), std::move(out.marks), seed);
}

PointPath simulate_bivariate_inversion(const BivariateKernelSpec& kernels, double mu,
                                       double horizon, std::uint64_t seed,
                                       std::size_t event_cap)
{
    RandomStream rng = RandomStream(seed).substream("bivariate-inversion");
    EventCollector out;
    run_bivariate_inversion(kernels, mu, horizon, {}, rng, out, event_cap);
    return PointPath(horizon, std::move(out.times), std::move(out.marks), seed);
}

Grid intensity_path(const PointPath& path, const KernelSpec& kernel, double mu, double step)
{
    const Eigen::Index n = grid_points(path.horizon(), step);
    Grid::Vector values(n);
    detail::AnyState state(kernel);
    const auto jumps = path.jumps();
    std::size_t j = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * step;
        while (j < jumps.size() && jumps[j] < t) {
            state.advance_to(jumps[j]);
            state.add_event();
            ++j;
        }
        values[i] = mu + state.excitation_at(t);
    }
    return Grid(step, std::move(values));
}

std::pair<Grid, Grid> intensity_path(const PointPath& path, const BivariateKernelSpec& kernels,
                                     double mu, double step)
{
    if (!path.is_marked()) {
        fail(ErrorKind::UnmarkedPath, "bivariate intensity needs a marked path");
    }
    const Eigen::Index n = grid_points(path.horizon(), step);
    Grid::Vector plus(n);
    Grid::Vector minus(n);
    detail::AnyState self_plus(kernels.self_kernel());
    detail::AnyState cross_minus(kernels.cross_kernel());
    detail::AnyState self_minus(kernels.self_kernel());
    detail::AnyState cross_plus(kernels.cross_kernel());
    const auto jumps = path.jumps();
    const auto marks = path.marks();
    std::size_t j = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * step;
        while (j < jumps.size() && jumps[j] < t) {
            for (auto* s : {&self_plus, &cross_minus, &self_minus, &cross_plus}) {
                s->advance_to(jumps[j]);
            }
            if (marks[j] == Mark::Plus) {
                self_plus.add_event();
                cross_plus.add_event();
            } else {
                self_minus.add_event();
                cross_minus.add_event();
            }
            ++j;
        }
        plus[i] = mu + self_plus.excitation_at(t) + cross_minus.excitation_at(t);
        minus[i] = mu + self_minus.excitation_at(t) + cross_plus.excitation_at(t);
    }
    return {Grid(step, std::move(plus)), Grid(step, std::move(minus))};
}

} // namespace nuh
