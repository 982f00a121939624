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

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "nuh/diffusion.hpp"

namespace nuh {

/// Outcome of one statistical check. passed is statistic <= threshold
/// unless the test says otherwise in its details.
struct ComparisonReport
{
    std::string test_name;
    double statistic = 0;
    double threshold = 0;
    std::size_t n_samples = 0;
    bool passed = false;
    std::vector<std::uint64_t> seeds;
    /// Scaling metadata such as T, a_T, lambda, m, mu, step.
    std::map<std::string, double> metadata;
    nlohmann::json details = nlohmann::json::object();

    nlohmann::json to_json() const;
};

/// Streaming mean and variance (Welford).
class RunningStats
{
  public:
    void add(double x) noexcept;
    void merge(const RunningStats& other) noexcept;

    std::size_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    /// Unbiased sample variance.
    double variance() const noexcept;
    double standard_error() const noexcept;

  private:
    std::size_t n_ = 0;
    double mean_ = 0;
    double m2_ = 0;
};

RunningStats summarize(std::span<const double> xs);

/// sup_x |F_n(x) - F(x)|.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);
/// sup_x |F_n(x) - G_m(x)|.
double ks_statistic_two_sample(std::span<const double> a, std::span<const double> b);

struct ExponentialReference
{
    double rate;
};

struct CIRMarginalReference
{
    CIRParams params;
    double t;
};

struct EmpiricalReference
{
    std::vector<double> samples;
};

using KSReference = std::variant<ExponentialReference, CIRMarginalReference, EmpiricalReference>;

/**
 * Two-sided KS test. The threshold is 1.63 / sqrt(n) (the asymptotic 1%
 * point; with the two-sample effective size for an empirical reference)
 * times \p loosen, unless \p threshold is given.
 */
ComparisonReport ks_marginal_test(std::span<const double> samples, const KSReference& reference,
                                  double loosen = 1.0, std::optional<double> threshold = {});

/**
 * max_z |(1/n) sum_j exp(i z X_j) - cf(z)| over \p z_grid, accepted below
 * tolerance + allowance / sqrt(n).
 */
ComparisonReport empirical_cf_test(std::span<const double> samples,
                                   const std::function<std::complex<double>(double)>& cf,
                                   std::span<const double> z_grid, double tolerance = 0.05,
                                   double allowance = 3.0);

/// |mean - expected| / standard error, accepted when <= z_max.
ComparisonReport mean_z_test(const std::string& name, const RunningStats& stats, double expected,
                             double z_max = 3.0);

} // namespace nuh
