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

#include <cmath>
#include <cstddef>
#include <variant>
#include <vector>

#include "nuh/kernel.hpp"

namespace nuh::detail {

/**
 * Excitation sum_i phi^T(t - J_i) for an exponential-type kernel, kept as one
 * decaying state per component. Exponential kernels are handled untruncated.
 *
 * All const queries look forward from the current time and leave the state
 * alone, so probing the intensity never perturbs a simulation.
 */
class ExponentialState
{
  public:
    explicit ExponentialState(const KernelSpec& kernel)
    {
        for (const auto& c : kernel.exponential_components()) {
            rates_.push_back(c.rate);
            jumps_.push_back(kernel.a_T() * c.weight * c.rate);
            masses_.push_back(kernel.a_T() * c.weight);
        }
        level_.assign(rates_.size(), 0.0);
    }

    double now() const noexcept { return now_; }

    double excitation() const noexcept
    {
        double s = 0;
        for (double e : level_) {
            s += e;
        }
        return s;
    }

    double excitation_at(double t) const noexcept
    {
        double s = 0;
        for (std::size_t k = 0; k < level_.size(); ++k) {
            s += level_[k] * std::exp(-rates_[k] * (t - now_));
        }
        return s;
    }

    /// int_0^t of the excitation.
    double integrated_at(double t) const noexcept
    {
        double s = 0;
        for (std::size_t k = 0; k < level_.size(); ++k) {
            s += masses_[k] * static_cast<double>(count_) -
                 level_[k] * std::exp(-rates_[k] * (t - now_)) / rates_[k];
        }
        return s;
    }

    void advance_to(double t) noexcept
    {
        for (std::size_t k = 0; k < level_.size(); ++k) {
            level_[k] *= std::exp(-rates_[k] * (t - now_));
        }
        now_ = t;
    }

    void add_event() noexcept
    {
        for (std::size_t k = 0; k < level_.size(); ++k) {
            level_[k] += jumps_[k];
        }
        ++count_;
    }

  private:
    std::vector<double> rates_;
    std::vector<double> jumps_;
    std::vector<double> masses_;
    std::vector<double> level_;
    double now_ = 0;
    std::size_t count_ = 0;
};

/// Excitation from the full jump history, dropping jumps older than the
/// truncation horizon. Used for power-law kernels.
class HistoryState
{
  public:
    explicit HistoryState(const KernelSpec& kernel)
        : kernel_(kernel), window_(kernel.truncation_horizon())
    {
    }

    double now() const noexcept { return now_; }
    double excitation() const { return excitation_at(now_); }

    double excitation_at(double t) const
    {
        double s = 0;
        for (std::size_t i = first_; i < events_.size(); ++i) {
            s += kernel_(t - events_[i]);
        }
        return s;
    }

    double integrated_at(double t) const
    {
        double s = retired_;
        for (std::size_t i = first_; i < events_.size(); ++i) {
            s += kernel_.a_T() * kernel_.base_cdf(std::min(t - events_[i], window_));
        }
        return s;
    }

    void advance_to(double t)
    {
        now_ = t;
        while (first_ < events_.size() && t - events_[first_] > window_) {
            retired_ += kernel_.a_T() * kernel_.base_cdf(window_);
            ++first_;
        }
        if (first_ > 4096 && 2 * first_ > events_.size()) {
            events_.erase(events_.begin(), events_.begin() + static_cast<std::ptrdiff_t>(first_));
            first_ = 0;
        }
    }

    void add_event() { events_.push_back(now_); }

  private:
    KernelSpec kernel_;
    double window_;
    std::vector<double> events_;
    std::size_t first_ = 0;
    double retired_ = 0;
    double now_ = 0;
};

/// Either of the above, picked from the kernel shape.
class AnyState
{
  public:
    explicit AnyState(const KernelSpec& kernel)
        : state_(kernel.has_finite_mean() ? State(ExponentialState(kernel))
                                          : State(HistoryState(kernel)))
    {
    }

    double excitation() const
    {
        return std::visit([](const auto& s) { return s.excitation(); }, state_);
    }
    double excitation_at(double t) const
    {
        return std::visit([t](const auto& s) { return s.excitation_at(t); }, state_);
    }
    double integrated_at(double t) const
    {
        return std::visit([t](const auto& s) { return s.integrated_at(t); }, state_);
    }
    void advance_to(double t)
    {
        std::visit([t](auto& s) { s.advance_to(t); }, state_);
    }
    void add_event()
    {
        std::visit([](auto& s) { s.add_event(); }, state_);
    }

  private:
    using State = std::variant<ExponentialState, HistoryState>;
    State state_;
};

} // namespace nuh::detail
