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

#include "nuh/cli/config.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nuh/errors.hpp"
#include "nuh/experiments.hpp"
#include "nuh/random.hpp"

namespace nuh::cli {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value)
{
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(value.c_str(), &end);
    require(errno == 0 && end != value.c_str() && *end == '\0',
            "config key '" + key + "' expects a number, got '" + value + "'");
    return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value)
{
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    require(ec == std::errc() && ptr == value.data() + value.size(),
            "config key '" + key + "' expects a nonnegative integer, got '" + value + "'");
    return v;
}

} // namespace

RunConfig RunConfig::parse(std::string_view text, std::string_view origin)
{
    RunConfig config;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const std::string_view raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos || trim(line.substr(0, eq)).empty()) {
            fail(ErrorKind::InvalidArgument, std::string(origin) + ":" + std::to_string(line_no) +
                                                 ": expected key=value");
        }
        const std::string key(trim(line.substr(0, eq)));
        if (config.contains(key)) {
            fail(ErrorKind::InvalidArgument, std::string(origin) + ":" + std::to_string(line_no) +
                                                 ": duplicate key '" + key + "'");
        }
        config.set(key, std::string(trim(line.substr(eq + 1))));
    }
    return config;
}

RunConfig RunConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    require(static_cast<bool>(in), "cannot read config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse(text.str(), path.string());
}

void RunConfig::set(const std::string& key, const std::string& value)
{
    require(!key.empty(), "config keys must not be empty");
    entries_[key] = value;
}

void RunConfig::set_assignment(std::string_view assignment)
{
    const auto eq = assignment.find('=');
    require(eq != std::string_view::npos, "override must look like key=value");
    set(std::string(trim(assignment.substr(0, eq))), std::string(trim(assignment.substr(eq + 1))));
}

std::optional<std::string> RunConfig::get(const std::string& key) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const
{
    return get(key).value_or(fallback);
}

double RunConfig::get_double(const std::string& key, double fallback) const
{
    const auto v = get(key);
    return v ? parse_double(key, *v) : fallback;
}

std::uint64_t RunConfig::get_uint(const std::string& key, std::uint64_t fallback) const
{
    const auto v = get(key);
    return v ? parse_uint(key, *v) : fallback;
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const
{
    const auto v = get(key);
    if (!v) {
        return fallback;
    }
    if (*v == "true" || *v == "1" || *v == "yes") {
        return true;
    }
    if (*v == "false" || *v == "0" || *v == "no") {
        return false;
    }
    fail(ErrorKind::InvalidArgument, "config key '" + key + "' expects true or false");
}

std::vector<double> RunConfig::get_list(const std::string& key, std::vector<double> fallback) const
{
    const auto v = get(key);
    if (!v) {
        return fallback;
    }
    std::vector<double> out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double(key, std::string(trim(item))));
    }
    require(!out.empty(), "config key '" + key + "' expects a comma-separated list");
    return out;
}

std::string RunConfig::hash() const
{
    std::string canonical;
    for (const auto& [k, v] : entries_) {
        canonical += k;
        canonical += '=';
        canonical += v;
        canonical += '\n';
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(name_tag(canonical)));
    return buf;
}

std::uint64_t resolve_seed(const RunConfig& config, std::optional<std::uint64_t> flag)
{
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv("NUH_SEED"); env != nullptr && *env != '\0') {
        return parse_uint("NUH_SEED", env);
    }
    return config.get_uint("sim.seed", kDefaultSeed);
}

KernelShape kernel_shape(const RunConfig& config)
{
    const std::string shape = config.get_string("kernel.shape", "exponential");
    if (shape == "exponential") {
        return Exponential{config.get_double("kernel.beta", 1.0)};
    }
    if (shape == "power_law" || shape == "power-law") {
        return PowerLaw{config.get_double("kernel.alpha", 0.5), config.get_double("kernel.x0", 1.0)};
    }
    if (shape == "sum_of_exponentials" || shape == "sum-of-exponentials") {
        // kernel.components = w1:rate1, w2:rate2, ...
        const auto text = config.get("kernel.components");
        require(text.has_value(), "kernel.components is required for sum_of_exponentials");
        SumOfExponentials sum;
        std::stringstream ss(*text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto colon = item.find(':');
            require(colon != std::string::npos,
                    "kernel.components entries must look like weight:rate");
            sum.components.push_back(
                {parse_double("kernel.components", std::string(trim(item.substr(0, colon)))),
                 parse_double("kernel.components", std::string(trim(item.substr(colon + 1))))});
        }
        return sum;
    }
    fail(ErrorKind::InvalidArgument, "kernel.shape must be exponential, power_law or "
                                     "sum_of_exponentials, got '" + shape + "'");
}

RegimeSpec regime_spec(const RunConfig& config)
{
    return RegimeSpec(config.get_double("regime.T", 1000.0), config.get_double("regime.lambda", 1.0),
                      config.get_double("regime.mu", 1.0), config.get_double("regime.exponent", 1.0));
}

KernelSpec kernel_spec(const RunConfig& config)
{
    const double a_T = config.contains("kernel.a_T") ? config.get_double("kernel.a_T", 0.0)
                                                     : regime_spec(config).a_T();
    std::optional<double> truncation;
    if (config.contains("kernel.truncation_horizon")) {
        truncation = config.get_double("kernel.truncation_horizon", 0.0);
    }
    return KernelSpec(kernel_shape(config), a_T, truncation);
}

} // namespace nuh::cli
