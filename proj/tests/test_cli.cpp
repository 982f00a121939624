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

#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "nuh/cli/commands.hpp"
#include "nuh/cli/config.hpp"
#include "nuh/errors.hpp"

using namespace nuh;
using namespace nuh::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_tool(const std::string& args, const fs::path& stdout_file)
{
    const std::string cmd = std::string(NUH_TOOL_PATH) + " " + args + " > " + stdout_file.string() +
                            " 2> " + stdout_file.string() + ".err";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("nuh_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing")
{
    const RunConfig c = RunConfig::parse("# comment\nkernel.shape = exponential\n\nregime.T=1000\n");
    CHECK(c.get_string("kernel.shape", "") == "exponential");
    CHECK(c.get_double("regime.T", 0) == 1000);
    CHECK(c.get_double("regime.mu", 2.5) == 2.5);
    CHECK_THROWS_AS(RunConfig::parse("no equals sign"), Error);
    CHECK_THROWS_AS(RunConfig::parse("a=1\na=2"), Error);
    RunConfig d;
    d.set_assignment("experiment.schedule=1e3,4e3");
    CHECK(d.get_list("experiment.schedule", {}) == std::vector<double>{1e3, 4e3});
    CHECK_THROWS_AS(d.get_double("experiment.schedule", 0), Error);
}

TEST_CASE("config hash ignores key order and formatting")
{
    const RunConfig a = RunConfig::parse("kernel.a_T=0.5\nregime.T=1000\n");
    const RunConfig b = RunConfig::parse("regime.T = 1000\n# note\nkernel.a_T=0.5");
    const RunConfig c = RunConfig::parse("regime.T=1000\nkernel.a_T=0.6\n");
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() != c.hash());
    CHECK(a.hash().size() == 16);
}

TEST_CASE("seed precedence")
{
    RunConfig c;
    unsetenv("NUH_SEED");
    CHECK(resolve_seed(c, std::nullopt) == 1729);
    c.set("sim.seed", "5");
    CHECK(resolve_seed(c, std::nullopt) == 5);
    setenv("NUH_SEED", "6", 1);
    CHECK(resolve_seed(c, std::nullopt) == 6);
    CHECK(resolve_seed(c, 7) == 7);
    unsetenv("NUH_SEED");
}

TEST_CASE("kernel and regime sections")
{
    const RunConfig c = RunConfig::parse(
        "kernel.shape=sum_of_exponentials\nkernel.components=0.5:1,0.5:3\nregime.T=100\nregime.lambda=2\n");
    const KernelSpec k = kernel_spec(c);
    CHECK(k.a_T() == doctest::Approx(0.98));
    CHECK(k.exponential_components().size() == 2);
    CHECK(kernel_spec(RunConfig::parse("kernel.a_T=0.3")).a_T() == doctest::Approx(0.3));
    CHECK_THROWS_AS(kernel_spec(RunConfig::parse("kernel.shape=gaussian")), Error);
}

TEST_CASE("malformed a_T exits with a validation error")
{
    const fs::path dir = scratch("bad");
    const int code = run_tool("hawkes simulate --set kernel.a_T=1.2 --output " + dir.string(),
                              dir / "out.txt");
    CHECK(code == 1);
    const std::string err = slurp(dir / "out.txt.err");
    const auto j = nlohmann::json::parse(err);
    CHECK(j["level"] == "error");
    CHECK(j["message"].get<std::string>().find("a_T") != std::string::npos);
}

TEST_CASE("hawkes simulate is reproducible")
{
    const fs::path a = scratch("repro_a");
    const fs::path b = scratch("repro_b");
    const std::string args = "hawkes simulate --paths 2 --seed 7 --set regime.T=200 --output ";
    REQUIRE(run_tool(args + a.string(), a / "out.txt") == 0);
    REQUIRE(run_tool(args + b.string() + " --threads 1", b / "out.txt") == 0);
    const std::string ea = slurp(a / "events.csv");
    CHECK(ea == slurp(b / "events.csv"));
    CHECK(ea.rfind("# command=hawkes simulate\n# config_hash=", 0) == 0);
    CHECK(ea.find("# seed=7\n") != std::string::npos);
    CHECK(ea.find("path_id,time,mark\n") != std::string::npos);
}

TEST_CASE("geometric-sum check passes at the defaults")
{
    const fs::path dir = scratch("geo");
    const int code = run_tool("limit check --experiment geometric-sum --emit-plot-data --output " +
                                  dir.string(),
                              dir / "out.txt");
    CHECK(code == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "geometric-sum.json"));
    CHECK(j["passed"] == true);
    CHECK(j["seed"] == 1729);
    CHECK(j.contains("config_hash"));
    CHECK(fs::exists(dir / "geometric-sum_plot.csv"));
}

TEST_CASE("failed experiment exits with 2")
{
    const fs::path dir = scratch("fail");
    const int code = run_tool("limit check --experiment geometric-sum --set experiment.threshold=1e-6 --set experiment.null_seeds=1 --output " +
                                  dir.string(),
                              dir / "out.txt");
    CHECK(code == 2);
}

TEST_CASE("other subcommands write their files")
{
    const fs::path dir = scratch("files");
    CHECK(run_tool("resolvent compute --set kernel.a_T=0.9 --set resolvent.horizon=20 --output " + dir.string(),
                   dir / "r.txt") == 0);
    CHECK(slurp(dir / "resolvent.csv").find("t,psi_T,rho_T,rho_limit\n") != std::string::npos);
    CHECK(run_tool("cir simulate --paths 3 --output " + dir.string(), dir / "c.txt") == 0);
    CHECK(run_tool("heston simulate --paths 3 --output " + dir.string(), dir / "h.txt") == 0);
    CHECK(slurp(dir / "heston.csv").find("path_id,t,C,P\n") != std::string::npos);

    // Estimate from the CIR output of a single long path.
    CHECK(run_tool("cir simulate --set cir.kappa=2 --set cir.theta=1 --set cir.nu=0.5 --set cir.x0=1 "
                   "--set cir.horizon=50 --set cir.step=0.01 --output " + dir.string(),
                   dir / "c.txt") == 0);
    std::ifstream in(dir / "cir.csv");
    std::ofstream tx(dir / "tx.csv");
    std::string line;
    tx << "t,X\n";
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'p') {
            continue;
        }
        tx << line.substr(line.find(',') + 1) << '\n';
    }
    tx.close();
    CHECK(run_tool("estimate cir --input " + (dir / "tx.csv").string() + " --output " + dir.string(),
                   dir / "e.txt") == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "estimate.json"));
    CHECK(j["kappa"]["value"].get<double>() > 0);
}

}
