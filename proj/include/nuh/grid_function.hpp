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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>

#include <Eigen/Core>

#include "nuh/errors.hpp"

namespace nuh {

/**
 * A function sampled on the uniform grid start + i * step, i = 0..size()-1.
 *
 * Values are finite and there are at least two of them. Immutable after
 * construction; arithmetic goes through values(), which is a plain Eigen
 * column vector.
 */
template <typename Scalar>
class GridFunction
{
  public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    GridFunction(Scalar step, Vector values, Scalar start = Scalar(0))
        : start_(start), step_(step), values_(std::move(values))
    {
        require(step_ > Scalar(0), "grid step must be > 0");
        require(values_.size() >= 2, "a grid function needs at least two samples");
        require(values_.allFinite(), "grid function values must be finite");
    }

    /// Samples f on {start, start + step, ..., start + (n - 1) step}.
    template <class F>
    static GridFunction sample(F&& f, Scalar step, Eigen::Index n, Scalar start = Scalar(0))
    {
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            v[i] = f(start + Scalar(i) * step);
        }
        return GridFunction(step, std::move(v), start);
    }

    Scalar start() const noexcept { return start_; }
    Scalar step() const noexcept { return step_; }
    Eigen::Index size() const noexcept { return values_.size(); }
    Scalar end() const noexcept { return time(size() - 1); }
    Scalar time(Eigen::Index i) const noexcept { return start_ + Scalar(i) * step_; }

    const Vector& values() const noexcept { return values_; }
    Scalar operator[](Eigen::Index i) const { return values_[i]; }

    /// Linear interpolation; clamps outside [start, end].
    Scalar operator()(Scalar t) const
    {
        const Scalar x = (t - start_) / step_;
        if (x <= Scalar(0)) {
            return values_[0];
        }
        const auto i = static_cast<Eigen::Index>(std::floor(x));
        if (i >= size() - 1) {
            return values_[size() - 1];
        }
        const Scalar w = x - Scalar(i);
        return (Scalar(1) - w) * values_[i] + w * values_[i + 1];
    }

    /// Trapezoidal integral over the whole grid.
    Scalar integral() const
    {
        return step_ * (values_.sum() - Scalar(0.5) * (values_[0] + values_[size() - 1]));
    }

    /// Running trapezoidal integral, zero at start.
    GridFunction cumulative_integral() const
    {
        Vector out(size());
        out[0] = Scalar(0);
        for (Eigen::Index i = 1; i < size(); ++i) {
            out[i] = out[i - 1] + Scalar(0.5) * step_ * (values_[i - 1] + values_[i]);
        }
        return GridFunction(step_, std::move(out), start_);
    }

  private:
    Scalar start_;
    Scalar step_;
    Vector values_;
};

using Grid = GridFunction<double>;

/// Number of points of the grid {0, step, ..., horizon}; step must divide
/// the horizon.
inline Eigen::Index grid_points(double horizon, double step)
{
    require(horizon > 0 && step > 0, "horizon and step must be > 0");
    const double ratio = horizon / step;
    const double n = std::round(ratio);
    require(n >= 1 && std::abs(ratio - n) <= 1e-9 * std::max(1.0, ratio),
            "step must divide the horizon");
    return static_cast<Eigen::Index>(n) + 1;
}

/// Trapezoidal L2 distance between a grid function and a reference function.
template <typename Scalar, class F>
Scalar l2_distance(const GridFunction<Scalar>& g, F&& reference)
{
    typename GridFunction<Scalar>::Vector diff(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        const Scalar d = g[i] - reference(g.time(i));
        diff[i] = d * d;
    }
    return std::sqrt(GridFunction<Scalar>(g.step(), std::move(diff), g.start()).integral());
}

template <typename Scalar, class F>
Scalar sup_distance(const GridFunction<Scalar>& g, F&& reference)
{
    Scalar worst(0);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        worst = std::max(worst, std::abs(g[i] - reference(g.time(i))));
    }
    return worst;
}

} // namespace nuh
