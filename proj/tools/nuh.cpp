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

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "nuh/cli/commands.hpp"
#include "nuh/experiments.hpp"

namespace {

using nuh::cli::GlobalOptions;

void add_globals(CLI::App& app, GlobalOptions& g, std::string& config, std::string& output,
                 std::optional<std::uint64_t>& seed)
{
    app.add_option("--config", config, "key=value configuration file");
    app.add_option("--set", g.overrides, "override one configuration key (key=value)")
        ->take_all();
    app.add_option("--seed", seed, "master seed");
    app.add_option("--threads", g.threads, "worker threads, 0 for all cores");
    app.add_option("--output", output, "output directory");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Simulation and limit checks for nearly unstable Hawkes processes", "nuh"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    std::string config;
    std::string output = ".";
    std::optional<std::uint64_t> seed;
    add_globals(app, g, config, output, seed);

    std::optional<std::size_t> paths;
    std::string experiment;
    bool per_path = false;
    std::string input;
    std::optional<double> horizon;

    auto* hawkes = app.add_subcommand("hawkes", "Hawkes process paths");
    hawkes->require_subcommand(1);
    auto* hawkes_sim = hawkes->add_subcommand("simulate", "simulate event times into events.csv");
    hawkes_sim->add_option("--paths", paths, "number of independent paths");

    auto* resolvent = app.add_subcommand("resolvent", "kernel resolvent");
    resolvent->require_subcommand(1);
    auto* resolvent_compute =
        resolvent->add_subcommand("compute", "tabulate the resolvent into resolvent.csv");

    auto* cir = app.add_subcommand("cir", "CIR diffusion");
    cir->require_subcommand(1);
    auto* cir_sim = cir->add_subcommand("simulate", "simulate CIR paths into cir.csv");
    cir_sim->add_option("--paths", paths, "number of independent paths");

    auto* heston = app.add_subcommand("heston", "Heston model");
    heston->require_subcommand(1);
    auto* heston_sim = heston->add_subcommand("simulate", "simulate variance and price into heston.csv");
    heston_sim->add_option("--paths", paths, "number of independent paths");

    auto* limit = app.add_subcommand("limit", "scaling-limit checks");
    limit->require_subcommand(1);
    auto* limit_check = limit->add_subcommand("check", "run one named limit experiment");
    limit_check->add_option("--experiment", experiment, "experiment name")
        ->required()
        ->check(CLI::IsMember(nuh::experiment_names()));
    limit_check->add_flag("--per-path", per_path, "also write per-path statistics");
    limit_check->add_flag("--emit-plot-data", g.emit_plot_data, "also write plot series");

    auto* estimate = app.add_subcommand("estimate", "parameter estimation");
    estimate->require_subcommand(1);
    auto* estimate_cir = estimate->add_subcommand("cir", "fit CIR parameters to a sampled path");
    estimate_cir->add_option("--input", input, "CSV with columns t,X")->required();
    estimate_cir->add_option("--T", horizon, "regime T, to report the implied branching ratio");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? nuh::cli::kSuccess : nuh::cli::kValidationError;
    }
    if (!config.empty()) {
        g.config_file = config;
    }
    g.output = output;
    g.seed = seed;

    return nuh::cli::guarded([&]() -> int {
        if (*hawkes_sim) {
            return nuh::cli::hawkes_simulate(g, paths);
        }
        if (*resolvent_compute) {
            return nuh::cli::resolvent_compute(g);
        }
        if (*cir_sim) {
            return nuh::cli::cir_simulate(g, paths);
        }
        if (*heston_sim) {
            return nuh::cli::heston_simulate(g, paths);
        }
        if (*limit_check) {
            return nuh::cli::limit_check(g, experiment, per_path);
        }
        if (*estimate_cir) {
            return nuh::cli::estimate_cir_command(g, input, horizon);
        }
        return nuh::cli::kValidationError;
    });
}
