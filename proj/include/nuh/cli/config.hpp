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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nuh/kernel.hpp"

namespace nuh::cli {

/**
 * Flat key=value configuration with dotted section keys.
 *
 * Blank lines and lines starting with '#' are ignored; keys and values are
 * trimmed. Later assignments win. The hash is computed over the sorted
 * entries, so reordering lines does not change it.
 */
class RunConfig
{
  public:
    RunConfig() = default;

    static RunConfig parse(std::string_view text, std::string_view origin = "config");
    static RunConfig load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value);
    /// Applies a "key=value" override.
    void set_assignment(std::string_view assignment);

    bool contains(const std::string& key) const { return entries_.count(key) > 0; }
    std::optional<std::string> get(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const;

    const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

    /// 16 hex digits of FNV-1a over "key=value\n" in key order.
    std::string hash() const;

  private:
    std::map<std::string, std::string> entries_;
};

/// Master seed: sim.seed from the file, then NUH_SEED, then the flag.
std::uint64_t resolve_seed(const RunConfig& config, std::optional<std::uint64_t> flag);

/// Kernel shape from kernel.shape and its parameters.
KernelShape kernel_shape(const RunConfig& config);

/// Kernel from kernel.* with a_T from kernel.a_T or else the regime.
KernelSpec kernel_spec(const RunConfig& config);

RegimeSpec regime_spec(const RunConfig& config);

} // namespace nuh::cli
