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

#include "nuh/cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "nuh/calibration.hpp"
#include "nuh/diffusion.hpp"
#include "nuh/errors.hpp"
#include "nuh/experiments.hpp"
#include "nuh/hawkes.hpp"
#include "nuh/parallel.hpp"
#include "nuh/resolvent.hpp"

namespace nuh::cli {

namespace {

std::string number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// CSV file with '#' metadata lines ahead of the header row.
class CsvWriter
{
  public:
    CsvWriter(const std::filesystem::path& path, const Effective& eff, const std::string& command,
              const std::vector<std::string>& columns)
        : out_(path), path_(path)
    {
        require(static_cast<bool>(out_), "cannot write '" + path.string() + "'");
        out_ << "# command=" << command << '\n';
        out_ << "# config_hash=" << eff.config.hash() << '\n';
        out_ << "# seed=" << eff.seed << '\n';
        for (std::size_t i = 0; i < columns.size(); ++i) {
            out_ << (i ? "," : "") << columns[i];
        }
        out_ << '\n';
    }

    void comment(const std::string& text) { out_ << "# " << text << '\n'; }

    void row(std::initializer_list<double> values) { row(values.begin(), values.end()); }
    void row(const std::vector<double>& values) { row(values.begin(), values.end()); }

    template <class It>
    void row(It first, It last)
    {
        for (It it = first; it != last; ++it) {
            out_ << (it == first ? "" : ",") << number(*it);
        }
        out_ << '\n';
    }

    const std::filesystem::path& path() const { return path_; }

  private:
    std::ofstream out_;
    std::filesystem::path path_;
};

std::filesystem::path prepare_output(const GlobalOptions& options)
{
    std::filesystem::create_directories(options.output);
    return options.output;
}

void print_summary(const nlohmann::json& j)
{
    std::cout << j.dump() << std::endl;
}

BivariateKernelSpec bivariate_spec(const RunConfig& config)
{
    const KernelSpec single = kernel_spec(config);
    return BivariateKernelSpec(kernel_shape(config), config.get_double("bivariate.w1", 0.6),
                               kernel_shape(config), config.get_double("bivariate.w2", 0.4),
                               single.a_T());
}

} // namespace

Effective effective_config(const GlobalOptions& options)
{
    RunConfig config = options.config_file ? RunConfig::load(*options.config_file) : RunConfig{};
    for (const auto& o : options.overrides) {
        config.set_assignment(o);
    }
    return {config, resolve_seed(config, options.seed)};
}

int hawkes_simulate(const GlobalOptions& options, std::optional<std::size_t> paths_flag)
{
    Effective eff = effective_config(options);
    if (paths_flag) {
        eff.config.set("sim.paths", std::to_string(*paths_flag));
    }
    const RunConfig& cfg = eff.config;
    const std::size_t paths = cfg.get_uint("sim.paths", 1);
    const std::string method = cfg.get_string("sim.method", "thinning");
    const std::string model = cfg.get_string("sim.model", "univariate");
    const double mu = cfg.get_double("regime.mu", 1.0);
    const double horizon = cfg.get_double("sim.horizon", cfg.get_double("regime.T", 1000.0));
    const std::size_t cap = cfg.get_uint("sim.event_cap", kDefaultEventCap);
    require(method == "thinning" || method == "cluster" || method == "inversion",
            "sim.method must be thinning, cluster or inversion");
    require(model == "univariate" || model == "bivariate", "sim.model must be univariate or bivariate");
    const RandomStream master = RandomStream(eff.seed).substream("hawkes");

    std::vector<PointPath> out;
    if (model == "bivariate") {
        require(method != "cluster", "the bivariate model has no cluster simulator");
        const BivariateKernelSpec kernels = bivariate_spec(cfg);
        out = parallel_map(paths, options.threads, [&](std::size_t i) {
            const std::uint64_t seed = master.at(i + 1);
            return method == "inversion"
                       ? simulate_bivariate_inversion(kernels, mu, horizon, seed, cap)
                       : simulate_bivariate(kernels, mu, horizon, seed, cap);
        });
    } else {
        const KernelSpec kernel = kernel_spec(cfg);
        out = parallel_map(paths, options.threads, [&](std::size_t i) {
            const std::uint64_t seed = master.at(i + 1);
            if (method == "cluster") {
                return simulate_cluster(kernel, mu, horizon, seed, cap);
            }
            if (method == "inversion") {
                return simulate_inversion(kernel, mu, horizon, seed, cap);
            }
            return simulate_thinning(kernel, mu, horizon, seed, cap);
        });
    }

    const auto dir = prepare_output(options);
    CsvWriter csv(dir / "events.csv", eff, "hawkes simulate", {"path_id", "time", "mark"});
    csv.comment("horizon=" + number(horizon));
    std::size_t events = 0;
    for (std::size_t p = 0; p < out.size(); ++p) {
        const auto jumps = out[p].jumps();
        const auto marks = out[p].marks();
        for (std::size_t j = 0; j < jumps.size(); ++j) {
            csv.row({static_cast<double>(p), jumps[j],
                     marks.empty() ? 0.0 : static_cast<double>(static_cast<int>(marks[j]))});
        }
        events += jumps.size();
    }
    print_summary({{"command", "hawkes simulate"},
                   {"paths", paths},
                   {"events", events},
                   {"file", csv.path().string()},
                   {"config_hash", cfg.hash()},
                   {"seed", eff.seed}});
    return kSuccess;
}

int resolvent_compute(const GlobalOptions& options)
{
    const Effective eff = effective_config(options);
    const RunConfig& cfg = eff.config;
    const RegimeSpec regime = regime_spec(cfg);
    const KernelSpec kernel = kernel_spec(cfg);
    const double mean = kernel.has_finite_mean() ? kernel.mean() : NAN;
    const double step = cfg.get_double("resolvent.step", default_resolvent_step(kernel));
    double horizon = cfg.get_double("resolvent.horizon", 0.0);
    if (horizon <= 0) {
        require(kernel.has_finite_mean(), "resolvent.horizon is required for power-law kernels");
        // Eight decay scales of the resolvent, T m / lambda each.
        horizon = std::ceil(8 * regime.T * mean / regime.lambda / step) * step;
    }
    const Grid psi = compute_resolvent(kernel, horizon, step);
    const double norm = kernel.a_T() / (1 - kernel.a_T());

    const auto dir = prepare_output(options);
    CsvWriter csv(dir / "resolvent.csv", eff, "resolvent compute",
                  {"t", "psi_T", "rho_T", "rho_limit"});
    csv.comment("rho columns are evaluated at x = t / T with T=" + number(regime.T));
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        const double t = psi.time(i);
        const double x = t / regime.T;
        csv.row({t, psi[i], regime.T * psi[i] / norm,
                 std::isfinite(mean) ? exponential_limit_density(x, regime.lambda, mean) : NAN});
    }
    print_summary({{"command", "resolvent compute"},
                   {"points", psi.size()},
                   {"integral", psi.integral()},
                   {"expected_integral", norm},
                   {"file", csv.path().string()},
                   {"config_hash", cfg.hash()},
                   {"seed", eff.seed}});
    return kSuccess;
}

namespace {

CIRParams cir_params(const RunConfig& cfg)
{
    const RegimeSpec regime = regime_spec(cfg);
    const KernelSpec kernel = kernel_spec(cfg);
    const CIRParams derived = CIRParams::from_hawkes(regime.lambda, kernel.mean(), regime.mu);
    return CIRParams(cfg.get_double("cir.kappa", derived.kappa),
                     cfg.get_double("cir.theta", derived.theta), cfg.get_double("cir.nu", derived.nu),
                     cfg.get_double("cir.x0", derived.x0));
}

} // namespace

int cir_simulate(const GlobalOptions& options, std::optional<std::size_t> paths_flag)
{
    Effective eff = effective_config(options);
    if (paths_flag) {
        eff.config.set("sim.paths", std::to_string(*paths_flag));
    }
    const RunConfig& cfg = eff.config;
    const CIRParams params = cir_params(cfg);
    const std::size_t paths = cfg.get_uint("sim.paths", 1);
    const double horizon = cfg.get_double("cir.horizon", 1.0);
    const double step = cfg.get_double("cir.step", 1.0 / 500.0);
    const std::string scheme = cfg.get_string("cir.scheme", "exact");
    require(scheme == "exact" || scheme == "euler", "cir.scheme must be exact or euler");
    const RandomStream master = RandomStream(eff.seed).substream("cir");
    const auto out = parallel_map(paths, options.threads, [&](std::size_t i) {
        RandomStream rng = master.child(i);
        return cir_path(params, horizon, step, rng,
                        scheme == "exact" ? CIRScheme::Exact : CIRScheme::Euler);
    });
    const auto dir = prepare_output(options);
    CsvWriter csv(dir / "cir.csv", eff, "cir simulate", {"path_id", "t", "X"});
    csv.comment("kappa=" + number(params.kappa) + " theta=" + number(params.theta) +
                " nu=" + number(params.nu) + " x0=" + number(params.x0));
    for (std::size_t p = 0; p < out.size(); ++p) {
        for (Eigen::Index i = 0; i < out[p].level.size(); ++i) {
            csv.row({static_cast<double>(p), out[p].level.time(i), out[p].level[i]});
        }
    }
    print_summary({{"command", "cir simulate"},
                   {"paths", paths},
                   {"file", csv.path().string()},
                   {"config_hash", cfg.hash()},
                   {"seed", eff.seed}});
    return kSuccess;
}

int heston_simulate(const GlobalOptions& options, std::optional<std::size_t> paths_flag)
{
    Effective eff = effective_config(options);
    if (paths_flag) {
        eff.config.set("sim.paths", std::to_string(*paths_flag));
    }
    const RunConfig& cfg = eff.config;
    const RegimeSpec regime = regime_spec(cfg);
    const BivariateKernelSpec kernels = bivariate_spec(cfg);
    const CIRParams derived = CIRParams::heston_variance(regime.lambda, kernels.mean(), regime.mu);
    const HestonParams params(
        CIRParams(cfg.get_double("heston.kappa", derived.kappa),
                  cfg.get_double("heston.theta", derived.theta),
                  cfg.get_double("heston.nu", derived.nu), cfg.get_double("heston.x0", 0.0)),
        cfg.get_double("heston.price_scale", kernels.price_scale()));
    const std::size_t paths = cfg.get_uint("sim.paths", 1);
    const double horizon = cfg.get_double("heston.horizon", 1.0);
    const double step = cfg.get_double("heston.step", 1.0 / 500.0);
    const RandomStream master = RandomStream(eff.seed).substream("heston");
    const auto out = parallel_map(paths, options.threads, [&](std::size_t i) {
        RandomStream rng = master.child(i);
        return heston_paths(params, horizon, step, rng);
    });
    const auto dir = prepare_output(options);
    CsvWriter csv(dir / "heston.csv", eff, "heston simulate", {"path_id", "t", "C", "P"});
    csv.comment("kappa=" + number(params.cir.kappa) + " theta=" + number(params.cir.theta) +
                " nu=" + number(params.cir.nu) + " price_scale=" + number(params.price_scale));
    for (std::size_t p = 0; p < out.size(); ++p) {
        for (Eigen::Index i = 0; i < out[p].variance.size(); ++i) {
            csv.row({static_cast<double>(p), out[p].variance.time(i), out[p].variance[i],
                     out[p].price[i]});
        }
    }
    print_summary({{"command", "heston simulate"},
                   {"paths", paths},
                   {"file", csv.path().string()},
                   {"config_hash", cfg.hash()},
                   {"seed", eff.seed}});
    return kSuccess;
}

int limit_check(const GlobalOptions& options, const std::string& experiment, bool per_path)
{
    const Effective eff = effective_config(options);
    const RunConfig& cfg = eff.config;
    ExperimentConfig ex = default_experiment_config(experiment);
    ex.seed = eff.seed;
    ex.threads = options.threads;
    if (cfg.contains("kernel.shape")) {
        ex.shape = kernel_shape(cfg);
    }
    ex.T = cfg.get_double("experiment.T", ex.T);
    ex.T2 = cfg.get_double("experiment.T2", ex.T2);
    ex.lambda = cfg.get_double("regime.lambda", ex.lambda);
    ex.mu = cfg.get_double("regime.mu", ex.mu);
    ex.exponent = cfg.get_double("regime.exponent", ex.exponent);
    ex.paths = cfg.get_uint("experiment.paths", ex.paths);
    ex.samples = cfg.get_uint("experiment.samples", ex.samples);
    ex.step = cfg.get_double("experiment.step", ex.step);
    ex.threshold = cfg.get_double("experiment.threshold", ex.threshold);
    ex.w1 = cfg.get_double("bivariate.w1", ex.w1);
    ex.w2 = cfg.get_double("bivariate.w2", ex.w2);
    ex.schedule = cfg.get_list("experiment.schedule", ex.schedule);
    ex.calibration_length = cfg.get_double("experiment.calibration_length", ex.calibration_length);
    ex.null_seeds = cfg.get_uint("experiment.null_seeds", ex.null_seeds);
    per_path = per_path || cfg.get_bool("output.per_path", false);
    const bool plots = options.emit_plot_data || cfg.get_bool("output.plot_data", false);

    const ExperimentResult result = run_experiment(ex);
    nlohmann::json report = result.report.to_json();
    report["experiment"] = experiment;
    report["config_hash"] = cfg.hash();
    report["seed"] = eff.seed;

    const auto dir = prepare_output(options);
    {
        std::ofstream json(dir / (experiment + ".json"));
        require(static_cast<bool>(json), "cannot write the report file");
        json << report.dump(2) << '\n';
    }
    if (per_path && !result.columns.empty()) {
        CsvWriter csv(dir / (experiment + "_paths.csv"), eff, "limit check " + experiment,
                      result.columns);
        for (const auto& row : result.rows) {
            csv.row(row);
        }
    }
    if (plots && !result.plots.empty()) {
        CsvWriter csv(dir / (experiment + "_plot.csv"), eff, "limit check " + experiment,
                      {"series", "x", "y", "yerr"});
        for (std::size_t s = 0; s < result.plots.size(); ++s) {
            const auto& series = result.plots[s];
            csv.comment("series " + std::to_string(s) + "=" + series.name);
            for (std::size_t i = 0; i < series.x.size(); ++i) {
                csv.row({static_cast<double>(s), series.x[i], series.y[i], series.yerr[i]});
            }
        }
    }
    std::cout << report.dump() << std::endl;
    return result.report.passed ? kSuccess : kExperimentFailed;
}

int estimate_cir_command(const GlobalOptions& options, const std::filesystem::path& input,
                         std::optional<double> T)
{
    const Effective eff = effective_config(options);
    const RunConfig& cfg = eff.config;
    std::ifstream in(input);
    require(static_cast<bool>(in), "cannot read '" + input.string() + "'");
    std::vector<double> t;
    std::vector<double> x;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::stringstream ss(line);
        std::string a;
        std::string b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) {
            fail(ErrorKind::InvalidArgument, "estimate input rows need two columns t,X");
        }
        char* end = nullptr;
        const double tv = std::strtod(a.c_str(), &end);
        if (end == a.c_str()) {
            require(t.empty(), "non-numeric row after data in '" + input.string() + "'");
            continue; // header
        }
        t.push_back(tv);
        x.push_back(std::strtod(b.c_str(), nullptr));
    }
    require(t.size() >= 2, "estimate input needs at least two rows");
    const double step = t[1] - t[0];
    require(step > 0, "estimate input times must increase");
    for (std::size_t i = 1; i < t.size(); ++i) {
        require(std::abs(t[i] - t[i - 1] - step) <= 1e-6 * step,
                "estimate input times must be uniformly spaced");
    }
    const Grid path(step, Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())),
                    t.front());
    std::optional<double> horizon = T;
    if (!horizon && cfg.contains("estimate.T")) {
        horizon = cfg.get_double("estimate.T", 0.0);
    }
    const CIREstimate est = estimate_cir(path, horizon);
    nlohmann::json report = est.to_json();
    if (horizon) {
        const BranchingRatio a = implied_branching_ratio(est, *horizon);
        report["a_T"] = {{"value", a.value}, {"se", a.standard_error}};
        report["T"] = *horizon;
    }
    report["input"] = input.string();
    report["config_hash"] = cfg.hash();
    report["seed"] = eff.seed;
    const auto dir = prepare_output(options);
    std::ofstream json(dir / "estimate.json");
    json << report.dump(2) << '\n';
    std::cout << report.dump() << std::endl;
    return kSuccess;
}

int guarded(const std::function<int()>& body)
{
    auto report = [](const std::string& kind, const std::string& message) {
        nlohmann::json j{{"level", "error"}, {"kind", kind}, {"message", message}};
        std::cerr << j.dump() << std::endl;
    };
    try {
        return body();
    } catch (const Error& e) {
        report(std::string(to_string(e.kind())), e.what());
        return e.kind() == ErrorKind::BoundViolation ? kInternalError : kValidationError;
    } catch (const std::filesystem::filesystem_error& e) {
        report("IOError", e.what());
        return kValidationError;
    } catch (const std::exception& e) {
        report("Internal", e.what());
        return kInternalError;
    }
}

} // namespace nuh::cli
