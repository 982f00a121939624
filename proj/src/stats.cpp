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

#include "nuh/stats.hpp"

#include <algorithm>
#include <cmath>

#include "nuh/errors.hpp"

namespace nuh {

nlohmann::json ComparisonReport::to_json() const
{
    nlohmann::json j;
    j["test_name"] = test_name;
    j["statistic"] = statistic;
    j["threshold"] = threshold;
    j["n_samples"] = n_samples;
    j["passed"] = passed;
    j["seeds"] = seeds;
    j["metadata"] = metadata;
    j["details"] = details;
    return j;
}

void RunningStats::add(double x) noexcept
{
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) noexcept
{
    if (other.n_ == 0) {
        return;
    }
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double n = static_cast<double>(n_ + other.n_);
    const double delta = other.mean_ - mean_;
    mean_ += delta * static_cast<double>(other.n_) / n;
    m2_ += other.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(other.n_) / n;
    n_ += other.n_;
}

double RunningStats::variance() const noexcept
{
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double RunningStats::standard_error() const noexcept
{
    return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

RunningStats summarize(std::span<const double> xs)
{
    RunningStats s;
    for (double x : xs) {
        s.add(x);
    }
    return s;
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf)
{
    require(!samples.empty(), "KS needs samples");
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_statistic_two_sample(std::span<const double> a, std::span<const double> b)
{
    require(!a.empty() && !b.empty(), "KS needs samples");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size());
    const double m = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= v) {
            ++i;
        }
        while (j < y.size() && y[j] <= v) {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    return d;
}

ComparisonReport ks_marginal_test(std::span<const double> samples, const KSReference& reference,
                                  double loosen, std::optional<double> threshold)
{
    require(samples.size() >= 100, "KS test needs at least 100 samples");
    ComparisonReport r;
    r.n_samples = samples.size();
    double effective = static_cast<double>(samples.size());
    if (const auto* e = std::get_if<ExponentialReference>(&reference)) {
        require(e->rate > 0, "exponential rate must be > 0");
        const double rate = e->rate;
        r.test_name = "ks-exponential";
        r.statistic = ks_statistic(samples, [rate](double x) {
            return x <= 0 ? 0.0 : -std::expm1(-rate * x);
        });
        r.details["rate"] = rate;
    } else if (const auto* c = std::get_if<CIRMarginalReference>(&reference)) {
        const CIRMarginalReference ref = *c;
        r.test_name = "ks-cir-marginal";
        r.statistic = ks_statistic(samples, [&ref](double x) {
            return cir_marginal_cdf(ref.params, ref.t, x);
        });
        r.details["t"] = ref.t;
        r.details["kappa"] = ref.params.kappa;
        r.details["theta"] = ref.params.theta;
        r.details["nu"] = ref.params.nu;
    } else {
        const auto& other = std::get<EmpiricalReference>(reference).samples;
        require(other.size() >= 100, "KS reference sample needs at least 100 values");
        r.test_name = "ks-two-sample";
        r.statistic = ks_statistic_two_sample(samples, other);
        const double m = static_cast<double>(other.size());
        effective = effective * m / (effective + m);
        r.details["reference_size"] = other.size();
    }
    r.threshold = threshold ? *threshold : loosen * 1.63 / std::sqrt(effective);
    r.passed = r.statistic < r.threshold;
    return r;
}

ComparisonReport empirical_cf_test(std::span<const double> samples,
                                   const std::function<std::complex<double>(double)>& cf,
                                   std::span<const double> z_grid, double tolerance,
                                   double allowance)
{
    require(samples.size() >= 1000, "CF test needs at least 1000 samples");
    ComparisonReport r;
    r.test_name = "empirical-cf";
    r.n_samples = samples.size();
    const double n = static_cast<double>(samples.size());
    double worst = 0;
    double worst_z = 0;
    for (double z : z_grid) {
        double re = 0;
        double im = 0;
        for (double x : samples) {
            re += std::cos(z * x);
            im += std::sin(z * x);
        }
        const double err = std::abs(std::complex<double>(re / n, im / n) - cf(z));
        if (err > worst) {
            worst = err;
            worst_z = z;
        }
    }
    r.statistic = worst;
    r.threshold = tolerance + allowance / std::sqrt(n);
    r.passed = r.statistic < r.threshold;
    r.details["worst_z"] = worst_z;
    r.details["grid_size"] = z_grid.size();
    return r;
}

ComparisonReport mean_z_test(const std::string& name, const RunningStats& stats, double expected,
                             double z_max)
{
    ComparisonReport r;
    r.test_name = name;
    r.n_samples = stats.count();
    const double se = stats.standard_error();
    r.statistic = se > 0 ? std::abs(stats.mean() - expected) / se
                         : (stats.mean() == expected ? 0.0 : INFINITY);
    r.threshold = z_max;
    r.passed = r.statistic <= z_max;
    r.details["mean"] = stats.mean();
    r.details["expected"] = expected;
    r.details["standard_error"] = se;
    return r;
}

} // namespace nuh
