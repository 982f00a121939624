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

#include <cstdint>
#include <string>
#include <vector>

#include "nuh/kernel.hpp"
#include "nuh/stats.hpp"

namespace nuh {

/// Master seed used when neither the config nor the environment sets one.
inline constexpr std::uint64_t kDefaultSeed = 1729;

/// (x, y, yerr) triples for one figure-like comparison.
struct PlotSeries
{
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> yerr;
};

struct ExperimentResult
{
    ComparisonReport report;
    /// Per-path (or per-sample) statistics, one row per path.
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<PlotSeries> plots;
};

/**
 * Parameters of the limit experiments. Fields an experiment does not use are
 * ignored; defaults are the desk-scale settings each experiment is tuned for
 * (see default_experiment_config).
 */
struct ExperimentConfig
{
    std::string name;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 0;
    KernelShape shape = Exponential{1.0};
    double T = 1000;
    /// Second horizon of the T-doubling comparison (cir-marginal).
    double T2 = 0;
    double lambda = 1;
    double mu = 1;
    std::size_t paths = 1000;
    /// Number of independent draws for sample-based experiments.
    std::size_t samples = 5000;
    double step = 1.0 / 500.0;
    /// Acceptance threshold of the experiment's headline statistic.
    double threshold = 0.05;
    /// Bivariate weights.
    double w1 = 0.6;
    double w2 = 0.4;
    /// Regime exponent: (1 - a_T) T^exponent = lambda.
    double exponent = 1;
    /// Horizons of the degenerate-regime schedule.
    std::vector<double> schedule = {1e3, 4e3, 1.6e4};
    /// Length of the calibration path in rescaled time units.
    double calibration_length = 300;
    /// Seeds of the KS null-calibration run.
    std::size_t null_seeds = 100;
};

/// Names accepted by run_experiment.
const std::vector<std::string>& experiment_names();

/// The tuned defaults for \p name; throws InvalidArgument for unknown names.
ExperimentConfig default_experiment_config(const std::string& name);

ExperimentResult run_experiment(const ExperimentConfig& config);

ExperimentResult run_geometric_sum(const ExperimentConfig& config);
ExperimentResult run_cir_mean(const ExperimentConfig& config);
ExperimentResult run_integrated_count(const ExperimentConfig& config);
ExperimentResult run_cir_marginal(const ExperimentConfig& config);
ExperimentResult run_degenerate(const ExperimentConfig& config);
ExperimentResult run_martingale_qv(const ExperimentConfig& config);
ExperimentResult run_heavy_tail(const ExperimentConfig& config);
ExperimentResult run_heston_price(const ExperimentConfig& config);
ExperimentResult run_covariation(const ExperimentConfig& config);
ExperimentResult run_calibration(const ExperimentConfig& config);
ExperimentResult run_cross_simulator(const ExperimentConfig& config);
ExperimentResult run_variance_blowup(const ExperimentConfig& config);

} // namespace nuh
