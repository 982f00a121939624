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

#include "nuh/calibration.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "nuh/errors.hpp"

namespace nuh {

nlohmann::json CIREstimate::to_json() const
{
    nlohmann::json j;
    j["kappa"] = {{"value", kappa}, {"se", kappa_se}};
    j["theta"] = {{"value", theta}, {"se", theta_se}};
    j["nu"] = {{"value", nu}, {"se", nu_se}};
    j["lambda"] = {{"value", lambda}, {"se", lambda_se}};
    j["m"] = m;
    j["mu"] = mu;
    if (std::isfinite(a_T)) {
        j["a_T"] = a_T;
    }
    j["n"] = n;
    return j;
}

CIREstimate estimate_cir(const Grid& path, std::optional<double> T)
{
    const Eigen::Index n = path.size() - 1;
    require(n + 1 >= 200, "CIR estimation needs at least 200 grid points");
    require((path.values().array() >= 0).all(), "CIR path values must be >= 0");
    const double dt = path.step();
    const Eigen::VectorXd& x = path.values();
    const Eigen::VectorXd level = x.head(n);
    const Eigen::VectorXd dx = x.tail(n) - level;

    const double floor = 1e-6 * x.mean();
    if (!(floor > 0)) {
        fail(ErrorKind::DegenerateEstimate, "path is identically zero");
    }
    const Eigen::VectorXd w = level.cwiseMax(floor).cwiseInverse();

    Eigen::MatrixXd design(n, 2);
    design.col(0).setOnes();
    design.col(1) = level;
    const Eigen::Matrix2d bread = design.transpose() * w.asDiagonal() * design;
    // A constant level leaves the slope unidentified.
    const double spread = (level.array() - level.mean()).square().sum();
    if (spread <= 1e-24 * std::max(1.0, level.squaredNorm())) {
        fail(ErrorKind::DegenerateEstimate, "path has no variation; kappa is not identified");
    }
    const Eigen::Matrix2d bread_inv = bread.inverse();
    const Eigen::Vector2d b = bread_inv * (design.transpose() * w.asDiagonal() * dx);
    const Eigen::VectorXd resid = dx - design * b;

    const double kappa = -b[1] / dt;
    const Eigen::ArrayXd scaled = w.array() * resid.array().square() / dt;
    const double nu2 = scaled.sum() / static_cast<double>(n - 2);
    if (!(kappa > 0) || !(nu2 > 0) || !std::isfinite(kappa) || !std::isfinite(nu2)) {
        fail(ErrorKind::DegenerateEstimate, "estimated kappa or nu^2 is not positive");
    }
    const double theta = -b[0] / b[1];
    const double nu = std::sqrt(nu2);

    const Eigen::VectorXd score_weight = w.array() * resid.array();
    const Eigen::Matrix2d meat =
        design.transpose() * score_weight.array().square().matrix().asDiagonal() * design;
    const Eigen::Matrix2d cov = bread_inv * meat * bread_inv;
    const double kappa_se = std::sqrt(cov(1, 1)) / dt;
    const Eigen::Vector2d grad(-1 / b[1], b[0] / (b[1] * b[1]));
    const double theta_se = std::sqrt(grad.dot(cov * grad));
    const double nu2_se = std::sqrt((scaled - scaled.mean()).square().sum() /
                                    static_cast<double>(n - 1) / static_cast<double>(n));
    const double nu_se = nu2_se / (2 * nu);

    CIREstimate e{};
    e.kappa = kappa;
    e.theta = theta;
    e.nu = nu;
    e.kappa_se = kappa_se;
    e.theta_se = theta_se;
    e.nu_se = nu_se;
    e.lambda = kappa * kappa / nu2;
    e.m = kappa / nu2;
    e.mu = theta;
    e.lambda_se = std::hypot(2 * kappa / nu2 * kappa_se, 2 * kappa * kappa / (nu2 * nu) * nu_se);
    e.a_T = T ? 1 - e.lambda / *T : std::numeric_limits<double>::quiet_NaN();
    e.n = static_cast<std::size_t>(n);
    return e;
}

BranchingRatio implied_branching_ratio(const CIREstimate& estimate, double T)
{
    require(estimate.lambda > 0, "lambda estimate must be > 0");
    require(T > 0, "T must be > 0");
    const double a = 1 - estimate.lambda / T;
    if (!(a > 0 && a < 1)) {
        fail(ErrorKind::OutOfRange, "implied branching ratio leaves (0, 1)");
    }
    return {a, estimate.lambda_se / T};
}

} // namespace nuh
