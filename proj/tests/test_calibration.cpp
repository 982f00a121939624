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

#include <cmath>

#include "nuh/calibration.hpp"
#include "nuh/diffusion.hpp"
#include "nuh/errors.hpp"

using namespace nuh;

TEST_SUITE("calibration") {

TEST_CASE("round trip on an exact CIR path")
{
    const CIRParams truth(2, 1, 0.5, 1);
    const CIRPath path = cir_path(truth, 100, 1e-3, 17);
    const CIREstimate e = estimate_cir(path.level);
    CHECK(std::abs(e.kappa / 2 - 1) < 0.15);
    CHECK(std::abs(e.theta - 1) < 0.15);
    CHECK(std::abs(e.nu / 0.5 - 1) < 0.15);
    CHECK(e.kappa_se > 0);
    CHECK(e.n == static_cast<std::size_t>(path.level.size() - 1)); // transitions
    // Hawkes mapping: lambda = kappa^2 / nu^2, m = kappa / nu^2, mu = theta.
    CHECK(e.lambda == doctest::Approx(e.kappa * e.kappa / (e.nu * e.nu)));
    CHECK(e.m == doctest::Approx(e.kappa / (e.nu * e.nu)));
    CHECK(e.mu == doctest::Approx(e.theta));
}

TEST_CASE("scale equivariance")
{
    // X -> c X maps (kappa, theta, nu) to (kappa, c theta, sqrt(c) nu).
    const CIRPath path = cir_path(CIRParams(2, 1, 0.5, 1), 50, 1e-2, 3);
    const double c = 4;
    const CIREstimate a = estimate_cir(path.level);
    const CIREstimate b = estimate_cir(Grid(path.level.step(), c * path.level.values()));
    CHECK(b.kappa == doctest::Approx(a.kappa).epsilon(1e-6));
    CHECK(b.theta == doctest::Approx(c * a.theta).epsilon(1e-6));
    CHECK(b.nu == doctest::Approx(std::sqrt(c) * a.nu).epsilon(1e-6));
}

TEST_CASE("constant path is degenerate")
{
    const Grid flat(0.01, Grid::Vector::Constant(1000, 1.0));
    try {
        estimate_cir(flat);
        FAIL("expected DegenerateEstimate");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateEstimate);
    }
}

TEST_CASE("implied branching ratio")
{
    CIREstimate e{};
    e.lambda = 1;
    e.lambda_se = 0.1;
    const BranchingRatio r = implied_branching_ratio(e, 1e4);
    CHECK(r.value == doctest::Approx(0.9999));
    CHECK(r.standard_error == doctest::Approx(1e-5));
    e.lambda = 2e4;
    try {
        implied_branching_ratio(e, 1e4);
        FAIL("expected OutOfRange");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::OutOfRange);
    }
}

TEST_CASE("json output")
{
    const CIRPath path = cir_path(CIRParams(2, 1, 0.5, 1), 20, 1e-2, 5);
    const auto j = estimate_cir(path.level, 1e4).to_json();
    CHECK(j.contains("kappa"));
    CHECK(j.contains("a_T"));
}

}
