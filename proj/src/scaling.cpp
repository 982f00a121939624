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

#include "nuh/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

#include "nuh/errors.hpp"
#include "nuh/parallel.hpp"
#include "nuh/resolvent.hpp"

namespace nuh {

namespace {

void check_horizon(const PointPath& path, const RegimeSpec& regime)
{
    require(std::abs(path.horizon() - regime.T) <= 1e-9 * regime.T,
            "path horizon must equal the regime T");
}

RescaledPath make(RescaledKind kind, Grid grid, const RegimeSpec& regime, double mean,
                  std::uint64_t tag)
{
    return RescaledPath{kind, std::move(grid), regime, regime.a_T(), mean, tag};
}

double mean_or_nan(const KernelSpec& kernel)
{
    return kernel.has_finite_mean() ? kernel.mean() : std::numeric_limits<double>::quiet_NaN();
}

} // namespace

std::string_view to_string(RescaledKind kind) noexcept
{
    switch (kind) {
    case RescaledKind::IntensityC: return "intensity";
    case RescaledKind::CountV: return "count";
    case RescaledKind::MartingaleB: return "martingale";
    case RescaledKind::PriceP: return "price";
    }
    return "unknown";
}

std::map<std::string, double> RescaledPath::metadata() const
{
    return {{"T", regime.T},       {"a_T", a_T},   {"lambda", regime.lambda},
            {"m", kernel_mean},    {"mu", regime.mu}, {"step", grid.step()}};
}

RescaledPath rescale_intensity(const PointPath& path, const KernelSpec& kernel,
                               const RegimeSpec& regime, double step)
{
    check_horizon(path, regime);
    const double scale = 1 - regime.a_T();
    const Grid lambda = intensity_path(path, kernel, regime.mu, step * regime.T);
    return make(RescaledKind::IntensityC, Grid(step, scale * lambda.values()), regime,
                mean_or_nan(kernel), path.seed_tag());
}

RescaledPath rescale_count(const PointPath& path, const RegimeSpec& regime, double step)
{
    check_horizon(path, regime);
    const Eigen::Index n = grid_points(1.0, step);
    const double scale = (1 - regime.a_T()) / regime.T;
    Grid::Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v[i] = scale * static_cast<double>(path.count_until(static_cast<double>(i) * step * regime.T));
    }
    return make(RescaledKind::CountV, Grid(step, std::move(v)), regime,
                std::numeric_limits<double>::quiet_NaN(), path.seed_tag());
}

double sqrt_intensity_integral(double mu, double beta, double excitation, double dt) noexcept
{
    const double r = std::sqrt(mu);
    const double y0 = std::sqrt(mu + excitation);
    const double y1 = std::sqrt(mu + excitation * std::exp(-beta * dt));
    return (2 / beta) * (y0 - y1) + (2 * r / beta) * std::log((y1 + r) / (y0 + r)) + r * dt;
}

RescaledPath rescale_martingale(const PointPath& path, const KernelSpec& kernel,
                                const RegimeSpec& regime, double step)
{
    check_horizon(path, regime);
    const double mu = regime.mu;
    const double scale = std::sqrt(regime.u_T() / regime.T);
    const bool closed = kernel.is_single_exponential();
    const double beta = closed ? kernel.exponential_components().front().rate : 0.0;
    detail::AnyState state(kernel);
    double now = 0;
    auto integral_to = [&](double b) {
        if (b <= now) {
            return 0.0;
        }
        if (closed) {
            return sqrt_intensity_integral(mu, beta, state.excitation(), b - now);
        }
        return boost::math::quadrature::gauss<double, 10>::integrate(
            [&](double s) { return std::sqrt(mu + state.excitation_at(s)); }, now, b);
    };

    const Eigen::Index n = grid_points(1.0, step);
    Grid::Vector v(n);
    v[0] = 0;
    double acc = 0;
    const auto jumps = path.jumps();
    std::size_t j = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
        const double target = static_cast<double>(i) * step * regime.T;
        while (j < jumps.size() && jumps[j] <= target) {
            acc -= integral_to(jumps[j]);
            state.advance_to(jumps[j]);
            now = jumps[j];
            acc += 1 / std::sqrt(mu + state.excitation());
            state.add_event();
            ++j;
        }
        acc -= integral_to(target);
        state.advance_to(target);
        now = target;
        v[i] = scale * acc;
    }
    return make(RescaledKind::MartingaleB, Grid(step, std::move(v)), regime, mean_or_nan(kernel),
                path.seed_tag());
}

RescaledPath rescale_price(const PointPath& path, const RegimeSpec& regime, double step)
{
    if (!path.is_marked()) {
        fail(ErrorKind::UnmarkedPath, "price rescaling needs a marked path");
    }
    check_horizon(path, regime);
    const Eigen::Index n = grid_points(1.0, step);
    Grid::Vector v(n);
    const auto jumps = path.jumps();
    const auto marks = path.marks();
    long long signed_count = 0;
    std::size_t j = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double target = static_cast<double>(i) * step * regime.T;
        while (j < jumps.size() && jumps[j] <= target) {
            signed_count += static_cast<int>(marks[j]);
            ++j;
        }
        v[i] = static_cast<double>(signed_count) / regime.T;
    }
    return make(RescaledKind::PriceP, Grid(step, std::move(v)), regime,
                std::numeric_limits<double>::quiet_NaN(), path.seed_tag());
}

ExpectedCount::ExpectedCount(const KernelSpec& kernel, double mu, double horizon)
    : mu_(mu), closed_form_(kernel.is_single_exponential())
{
    require(mu > 0 && horizon > 0, "mu and horizon must be > 0");
    if (closed_form_) {
        beta_ = kernel.exponential_components().front().rate;
        a_ = kernel.a_T();
        gamma_ = beta_ * (1 - a_);
        return;
    }
    const double base_step = default_resolvent_step(kernel);
    const double cells = std::ceil(horizon / base_step);
    const Grid psi = compute_resolvent(kernel, cells * base_step, base_step);
    integrated_ = psi.cumulative_integral().cumulative_integral();
}

double ExpectedCount::operator()(double t) const
{
    if (closed_form_) {
        if (a_ == 0) {
            return mu_ * t;
        }
        const double g = gamma_;
        return mu_ * t + mu_ * a_ * beta_ * (t / g + std::expm1(-g * t) / (g * g));
    }
    return mu_ * (t + (*integrated_)(t));
}

QuadraticCovariation bivariate_covariation(const PointPath& path,
                                           const BivariateKernelSpec& kernels, double mu,
                                           double T)
{
    if (!path.is_marked()) {
        fail(ErrorKind::UnmarkedPath, "co-variation needs a marked path");
    }
    detail::AnyState self_plus(kernels.self_kernel());
    detail::AnyState cross_minus(kernels.cross_kernel());
    detail::AnyState self_minus(kernels.self_kernel());
    detail::AnyState cross_plus(kernels.cross_kernel());
    QuadraticCovariation q;
    const auto jumps = path.jumps();
    const auto marks = path.marks();
    for (std::size_t j = 0; j < jumps.size() && jumps[j] <= T; ++j) {
        for (auto* s : {&self_plus, &cross_minus, &self_minus, &cross_plus}) {
            s->advance_to(jumps[j]);
        }
        const double total = 2 * mu + self_plus.excitation() + cross_minus.excitation() +
                             self_minus.excitation() + cross_plus.excitation();
        const double w = 1 / (T * total);
        q.b11 += w;
        q.b22 += w;
        if (marks[j] == Mark::Plus) {
            q.b12 += w;
            self_plus.add_event();
            cross_plus.add_event();
        } else {
            q.b12 -= w;
            self_minus.add_event();
            cross_minus.add_event();
        }
    }
    return q;
}

ComparisonReport covariation_report(std::span<const QuadraticCovariation> values,
                                    double tolerance)
{
    require(!values.empty(), "co-variation test needs paths");
    RunningStats b11;
    RunningStats b22;
    RunningStats b12;
    for (const auto& q : values) {
        b11.add(q.b11);
        b22.add(q.b22);
        b12.add(q.b12);
    }
    ComparisonReport r;
    r.test_name = "covariation";
    r.n_samples = values.size();
    const double d11 = std::abs(b11.mean() - 1);
    const double d22 = std::abs(b22.mean() - 1);
    const double d12 = std::abs(b12.mean());
    r.statistic = std::max({d11, d22, d12});
    r.threshold = tolerance;
    r.passed = d11 < tolerance && d22 < tolerance && d12 < tolerance;
    r.details["b11_mean"] = b11.mean();
    r.details["b22_mean"] = b22.mean();
    r.details["b12_mean"] = b12.mean();
    r.details["b11_se"] = b11.standard_error();
    r.details["b12_se"] = b12.standard_error();
    return r;
}

ComparisonReport covariation_test(std::span<const PointPath> paths,
                                  const BivariateKernelSpec& kernels, const RegimeSpec& regime)
{
    std::vector<QuadraticCovariation> values;
    values.reserve(paths.size());
    for (const auto& p : paths) {
        check_horizon(p, regime);
        values.push_back(bivariate_covariation(p, kernels, regime.mu, regime.T));
    }
    ComparisonReport r = covariation_report(values);
    for (const auto& p : paths) {
        r.seeds.push_back(p.seed_tag());
    }
    r.metadata = {{"T", regime.T}, {"a_T", kernels.a_T()}, {"lambda", regime.lambda},
                  {"m", kernels.mean()}, {"mu", regime.mu}};
    return r;
}

namespace {

/// Running sup_t |N_t - E N_t| over a streamed path.
struct SupDeviation
{
    const ExpectedCount* expected;
    double sup = 0;

    void on_event(const EventRecord& e)
    {
        const double m = (*expected)(e.time);
        const double before = static_cast<double>(e.count - 1);
        sup = std::max({sup, std::abs(before - m), std::abs(before + 1 - m)});
    }
};

struct CountOnly
{
};

void validate_schedule(std::span<const DegenerateScheduleEntry> schedule)
{
    require(!schedule.empty(), "schedule must not be empty");
    for (const auto& e : schedule) {
        require(e.T > 0 && e.a_T >= 0 && e.a_T < 1, "schedule entries need T > 0, a_T in [0, 1)");
    }
}

} // namespace

ComparisonReport check_degenerate_regime(const KernelSpec& base, double mu,
                                         std::span<const DegenerateScheduleEntry> schedule,
                                         std::size_t paths, std::uint64_t seed,
                                         unsigned threads, double slack)
{
    validate_schedule(schedule);
    require(paths >= 2, "need at least two paths per T");
    const RandomStream master = RandomStream(seed).substream("degenerate");
    ComparisonReport r;
    r.test_name = "degenerate";
    r.seeds = {seed};
    r.n_samples = paths * schedule.size();
    r.passed = true;
    double worst_ratio = 0;
    std::vector<RunningStats> d(schedule.size());
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        const auto [T, a] = schedule[k];
        const KernelSpec kernel = base.with_scaling(a);
        const ExpectedCount expected(kernel, mu, T);
        const RandomStream level = master.child(k);
        const auto values = parallel_map(paths, threads, [&](std::size_t i) {
            RandomStream rng = level.child(i);
            SupDeviation obs{&expected};
            const std::size_t n = run_hawkes(kernel, mu, T, {}, rng, obs);
            const double sup = std::max(obs.sup, std::abs(static_cast<double>(n) - expected(T)));
            const double scaled = (1 - a) / T * sup;
            return scaled * scaled;
        });
        for (double v : values) {
            d[k].add(v);
        }
        const double bound = 4 * mu / (T * (1 - a));
        const double ratio = d[k].mean() / bound;
        worst_ratio = std::max(worst_ratio, ratio);
        bool decreasing = true;
        if (k > 0) {
            const double se = std::hypot(d[k].standard_error(), d[k - 1].standard_error());
            decreasing = d[k].mean() <= d[k - 1].mean() + 3 * se;
        }
        r.passed = r.passed && ratio <= slack && decreasing;
        rows.push_back({{"T", T},
                        {"a_T", a},
                        {"D", d[k].mean()},
                        {"D_se", d[k].standard_error()},
                        {"bound", bound},
                        {"decreasing", decreasing}});
    }
    r.statistic = worst_ratio;
    r.threshold = slack;
    r.details["schedule"] = rows;
    r.metadata = {{"mu", mu}, {"paths", static_cast<double>(paths)}};
    return r;
}

ComparisonReport variance_blowup_diagnostic(const KernelSpec& base, double mu,
                                            std::span<const DegenerateScheduleEntry> schedule,
                                            std::size_t paths, std::uint64_t seed,
                                            unsigned threads)
{
    validate_schedule(schedule);
    require(paths >= 2, "need at least two paths per T");
    const RandomStream master = RandomStream(seed).substream("variance-blowup");
    ComparisonReport r;
    r.test_name = "variance-blowup";
    r.seeds = {seed};
    r.n_samples = paths * schedule.size();
    r.passed = true;
    nlohmann::json rows = nlohmann::json::array();
    double last = 0;
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        const auto [T, a] = schedule[k];
        const KernelSpec kernel = base.with_scaling(a);
        const RandomStream level = master.child(k);
        const auto values = parallel_map(paths, threads, [&](std::size_t i) {
            RandomStream rng = level.child(i);
            CountOnly obs;
            return (1 - a) / T * static_cast<double>(run_hawkes(kernel, mu, T, {}, rng, obs));
        });
        RunningStats s;
        for (double v : values) {
            s.add(v);
        }
        last = s.variance();
        rows.push_back({{"T", T}, {"a_T", a}, {"T_one_minus_a", T * (1 - a)}, {"variance", last}});
    }
    r.statistic = last;
    r.threshold = std::numeric_limits<double>::infinity();
    r.details["schedule"] = rows;
    r.details["note"] = "diagnostic only";
    return r;
}

} // namespace nuh
