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
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nuh/cli/config.hpp"

namespace nuh::cli {

enum ExitCode : int {
    kSuccess = 0,
    kValidationError = 1,
    kExperimentFailed = 2,
    kInternalError = 3,
};

/// Options shared by every subcommand.
struct GlobalOptions
{
    std::optional<std::filesystem::path> config_file;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    std::filesystem::path output = ".";
    bool emit_plot_data = false;
};

/// The file config with --set overrides applied, plus the resolved seed.
struct Effective
{
    RunConfig config;
    std::uint64_t seed;
};

Effective effective_config(const GlobalOptions& options);

int hawkes_simulate(const GlobalOptions& options, std::optional<std::size_t> paths);
int resolvent_compute(const GlobalOptions& options);
int cir_simulate(const GlobalOptions& options, std::optional<std::size_t> paths);
int heston_simulate(const GlobalOptions& options, std::optional<std::size_t> paths);
int limit_check(const GlobalOptions& options, const std::string& experiment, bool per_path);
int estimate_cir_command(const GlobalOptions& options, const std::filesystem::path& input,
                         std::optional<double> T);

/// Runs \p body and maps exceptions to exit codes, reporting each failure on
/// stderr as one JSON line.
int guarded(const std::function<int()>& body);

} // namespace nuh::cli
