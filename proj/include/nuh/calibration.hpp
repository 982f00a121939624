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

#include <optional>

#include "json.hpp"

#include "nuh/grid_function.hpp"

namespace nuh {

/// CIR fit with standard errors and the implied Hawkes quantities
/// lambda = kappa^2 / nu^2, m = kappa / nu^2, mu = theta.
struct CIREstimate
{
    double kappa;
    double theta;
    double nu;
    double kappa_se;
    double theta_se;
    double nu_se;
    double lambda;
    double m;
    double mu;
    double lambda_se;
    /// 1 - lambda / T when T was given, NaN otherwise.
    double a_T;
    std::size_t n;

    nlohmann::json to_json() const;
};

/**
 * Weighted conditional least squares on the Euler regression
 * X_{t+dt} - X_t = kappa (theta - X_t) dt + eps, Var(eps | X_t) = nu^2 X_t dt,
 * with weights 1 / max(X_t, 1e-6 mean(X)). nu^2 is the weighted residual
 * mean square over dt; standard errors come from the sandwich covariance.
 *
 * Throws DegenerateEstimate when kappa or nu^2 comes out nonpositive or the
 * path carries no mean-reversion signal.
 */
CIREstimate estimate_cir(const Grid& path, std::optional<double> T = std::nullopt);

struct BranchingRatio
{
    double value;
    double standard_error;
};

/// 1 - lambda_hat / T. Throws OutOfRange when that leaves (0, 1).
BranchingRatio implied_branching_ratio(const CIREstimate& estimate, double T);

} // namespace nuh
