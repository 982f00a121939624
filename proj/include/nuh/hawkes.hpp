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
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "nuh/errors.hpp"
#include "nuh/grid_function.hpp"
#include "nuh/hawkes_state.hpp"
#include "nuh/kernel.hpp"
#include "nuh/point_path.hpp"
#include "nuh/random.hpp"
#include "nuh/vector_math.hpp"

namespace nuh {

inline constexpr std::size_t kDefaultEventCap = 10'000'000;

/**
 * The two-stream kernel pair of the signed price model.
 *
 * lambda+ is excited by a_T w1 phi1 on + jumps and a_T w2 phi2 on - jumps;
 * lambda- symmetrically. phi1 and phi2 are unit-mass shapes and w1 + w2 = 1.
 */
class BivariateKernelSpec
{
  public:
    BivariateKernelSpec(KernelShape phi1, double w1, KernelShape phi2, double w2, double a_T);

    /// Self-excitation kernel a_T w1 phi1.
    const KernelSpec& self_kernel() const noexcept { return self_; }
    /// Cross-excitation kernel a_T w2 phi2.
    const KernelSpec& cross_kernel() const noexcept { return cross_; }

    double w1() const noexcept { return w1_; }
    double w2() const noexcept { return w2_; }
    double a_T() const noexcept { return a_T_; }

    /// int s (w1 phi1 + w2 phi2)(s) ds.
    double mean() const;
    /// |phi1 - phi2|_1 in the signed sense, w1 - w2.
    double signed_norm() const noexcept { return w1_ - w2_; }
    /// 1 / (1 - (w1 - w2)).
    double price_scale() const noexcept { return 1.0 / (1.0 - signed_norm()); }

    /// a_T (w1 phi1 + w2 phi2), the kernel of N+ + N-. Needs exponential
    /// shapes.
    KernelSpec total_kernel() const;

    /// Both shapes single exponentials with a common rate.
    bool has_common_exponential_rate() const noexcept;

  private:
    KernelSpec self_;
    KernelSpec cross_;
    double w1_;
    double w2_;
    double a_T_;
};

struct EventRecord
{
    double time;
    double intensity_before;
    double intensity_after;
    std::size_t count;
};

struct ProbeRecord
{
    std::size_t index;
    double time;
    double intensity;
    double compensator;
    std::size_t count;
};

struct MarkedEventRecord
{
    double time;
    Mark mark;
    double plus_before;
    double minus_before;
};

struct MarkedProbeRecord
{
    std::size_t index;
    double time;
    double plus_intensity;
    double minus_intensity;
    double plus_compensator;
    double minus_compensator;
    std::size_t plus_count;
    std::size_t minus_count;
};

/// Observer that ignores everything.
struct NullObserver
{
};

namespace detail {

template <class Observer, class Record>
inline void notify_event(Observer& obs, const Record& r)
{
    if constexpr (requires { obs.on_event(r); }) {
        obs.on_event(r);
    }
}

template <class Observer, class Record>
inline void notify_probe(Observer& obs, const Record& r)
{
    if constexpr (requires { obs.on_probe(r); }) {
        obs.on_probe(r);
    }
}

inline void check_probes(std::span<const double> probes, double horizon)
{
    for (std::size_t i = 0; i < probes.size(); ++i) {
        require(probes[i] >= 0 && probes[i] <= horizon, "probe times must lie in [0, horizon]");
        require(i == 0 || probes[i] >= probes[i - 1], "probe times must be sorted");
    }
}

inline constexpr double kNever = 1e300;
inline constexpr std::size_t kBlock = 256;

} // namespace detail

/**
 * Ogata thinning with the intensity just after the last candidate as the
 * bound; valid because every kernel here is nonincreasing.
 *
 * The observer may define on_event(const EventRecord&) and
 * on_probe(const ProbeRecord&). Probes report the intensity (left limit),
 * the compensator and the count at each of the sorted \p probes times.
 * Returns the number of events.
 */
template <class State, class Observer>
std::size_t run_thinning(State& state, double mu, double horizon, std::span<const double> probes,
                         RandomStream& rng, Observer& obs,
                         std::size_t event_cap = kDefaultEventCap)
{
    require(mu > 0, "baseline intensity must be > 0");
    require(horizon > 0, "horizon must be > 0");
    detail::check_probes(probes, horizon);
    double t = 0;
    std::size_t count = 0;
    std::size_t next = 0;
    auto emit_before = [&](double limit) {
        while (next < probes.size() && probes[next] < limit) {
            const double p = probes[next];
            detail::notify_probe(obs, ProbeRecord{next, p, mu + state.excitation_at(p),
                                                  mu * p + state.integrated_at(p), count});
            ++next;
        }
    };
    for (;;) {
        const double bound = mu + state.excitation();
        const double candidate = t + rng.exponential() / bound;
        if (candidate > horizon) {
            break;
        }
        const double lambda = mu + state.excitation_at(candidate);
        if (lambda > bound * (1 + 1e-12)) {
            fail(ErrorKind::BoundViolation, "thinning bound below the intensity at a candidate");
        }
        const double u = rng.uniform();
        emit_before(candidate);
        state.advance_to(candidate);
        t = candidate;
        if (u * bound <= lambda) {
            if (++count > event_cap) {
                fail(ErrorKind::GenerationOverflow, "event cap exceeded");
            }
            state.add_event();
            detail::notify_event(obs, EventRecord{t, lambda, mu + state.excitation(), count});
        }
    }
    emit_before(std::numeric_limits<double>::infinity());
    return count;
}

/**
 * Exact simulation for a single-exponential kernel by inverting the
 * compensator between events.
 *
 * With excitation E right after an event and budget xi ~ Exp(1), the next
 * self-excited arrival is -log(1 - beta xi / E) / beta later, or never when
 * beta xi >= E. Baseline arrivals form an independent Poisson(mu) stream;
 * whichever comes first is the next event. Waits are computed in blocks with
 * the vector log; the sequence of events is identical to doing it one by one.
 */
template <class Observer>
std::size_t run_exponential_inversion(const KernelSpec& kernel, double mu, double horizon,
                                      std::span<const double> probes, RandomStream& rng,
                                      Observer& obs,
                                      std::size_t event_cap = std::numeric_limits<std::size_t>::max())
{
    require(kernel.is_single_exponential(), "inversion needs a single exponential kernel");
    require(mu > 0, "baseline intensity must be > 0");
    require(horizon > 0, "horizon must be > 0");
    detail::check_probes(probes, horizon);
    const double beta = kernel.exponential_components().front().rate;
    const double jump = kernel.a_T() * beta;
    const double mass = kernel.a_T();
    RandomStream excitation_rng = rng.substream("excitation");
    RandomStream baseline_rng = rng.substream("baseline");

    std::array<double, detail::kBlock> xi{};
    std::array<double, detail::kBlock> level{};
    std::array<double, detail::kBlock> wait{};

    double t = 0;
    double E = 0;
    std::size_t count = 0;
    std::size_t next = 0;
    double next_probe = probes.empty() ? detail::kNever : probes[0];
    double tb = baseline_rng.exponential() / mu;

    // Probes strictly before `limit`, with E the excitation right after t.
    auto emit_before = [&](double limit, double e) {
        while (next_probe < limit) {
            const double p = next_probe;
            const double decayed = e * std::exp(-beta * (p - t));
            detail::notify_probe(obs, ProbeRecord{next, p, mu + decayed,
                                                  mu * p + mass * static_cast<double>(count) -
                                                      decayed / beta,
                                                  count});
            ++next;
            next_probe = next < probes.size() ? probes[next] : detail::kNever;
        }
    };
    auto record = [&]() {
        if (++count > event_cap) {
            fail(ErrorKind::GenerationOverflow, "event cap exceeded");
        }
    };

    for (;;) {
        fill_exponential(excitation_rng, xi);
        double e = E;
        for (std::size_t k = 0; k < detail::kBlock; ++k) {
            level[k] = e;
            e += jump - beta * xi[k];
        }
        excitation_waits(xi, level, beta, detail::kNever, wait);
        std::size_t k = 0;
        for (; k < detail::kBlock; ++k) {
            const double tn = t + wait[k];
            if (tn >= tb) {
                break;
            }
            if (tn > horizon) {
                emit_before(detail::kNever, level[k]);
                return count;
            }
            if (tn > next_probe) {
                emit_before(tn, level[k]);
            }
            t = tn;
            const double before = std::max(level[k] - beta * xi[k], 0.0);
            record();
            detail::notify_event(obs, EventRecord{t, mu + before, mu + before + jump, count});
        }
        if (k == detail::kBlock) {
            E = e;
            continue;
        }
        // The baseline arrival precedes candidate k; the rest of the block
        // is discarded.
        E = level[k];
        if (tb > horizon) {
            emit_before(detail::kNever, E);
            return count;
        }
        emit_before(tb, E);
        E *= std::exp(-beta * (tb - t));
        t = tb;
        record();
        detail::notify_event(obs, EventRecord{t, mu + E, mu + E + jump, count});
        E += jump;
        tb += baseline_rng.exponential() / mu;
    }
}

/**
 * Two-stream thinning for the signed model. The bound is 2 mu plus the four
 * excitation terms at the last candidate; a candidate is marked + with
 * probability lambda+ / bound and - with lambda- / bound.
 */
template <class Observer>
std::pair<std::size_t, std::size_t>
run_bivariate_thinning(const BivariateKernelSpec& kernels, double mu, double horizon,
                       std::span<const double> probes, RandomStream& rng, Observer& obs,
                       std::size_t event_cap = kDefaultEventCap)
{
    require(mu > 0, "baseline intensity must be > 0");
    require(horizon > 0, "horizon must be > 0");
    detail::check_probes(probes, horizon);
    // self_plus: phi1 on + jumps, feeds lambda+. cross_minus: phi2 on -
    // jumps, feeds lambda+. Symmetrically for lambda-.
    detail::AnyState self_plus(kernels.self_kernel());
    detail::AnyState cross_minus(kernels.cross_kernel());
    detail::AnyState self_minus(kernels.self_kernel());
    detail::AnyState cross_plus(kernels.cross_kernel());
    auto all = [&](auto&& f) {
        f(self_plus);
        f(cross_minus);
        f(self_minus);
        f(cross_plus);
    };
    double t = 0;
    std::size_t plus = 0;
    std::size_t minus = 0;
    std::size_t next = 0;
    auto emit_before = [&](double limit) {
        while (next < probes.size() && probes[next] < limit) {
            const double p = probes[next];
            detail::notify_probe(
                obs, MarkedProbeRecord{
                         next, p, mu + self_plus.excitation_at(p) + cross_minus.excitation_at(p),
                         mu + self_minus.excitation_at(p) + cross_plus.excitation_at(p),
                         mu * p + self_plus.integrated_at(p) + cross_minus.integrated_at(p),
                         mu * p + self_minus.integrated_at(p) + cross_plus.integrated_at(p), plus,
                         minus});
            ++next;
        }
    };
    for (;;) {
        const double bound = 2 * mu + self_plus.excitation() + cross_minus.excitation() +
                             self_minus.excitation() + cross_plus.excitation();
        const double candidate = t + rng.exponential() / bound;
        if (candidate > horizon) {
            break;
        }
        const double lp =
            mu + self_plus.excitation_at(candidate) + cross_minus.excitation_at(candidate);
        const double lm =
            mu + self_minus.excitation_at(candidate) + cross_plus.excitation_at(candidate);
        if (lp + lm > bound * (1 + 1e-12)) {
            fail(ErrorKind::BoundViolation, "thinning bound below the intensity at a candidate");
        }
        const double u = rng.uniform() * bound;
        emit_before(candidate);
        all([&](detail::AnyState& s) { s.advance_to(candidate); });
        t = candidate;
        if (u > lp + lm) {
            continue;
        }
        if (plus + minus + 1 > event_cap) {
            fail(ErrorKind::GenerationOverflow, "event cap exceeded");
        }
        if (u <= lp) {
            ++plus;
            self_plus.add_event();
            cross_plus.add_event();
            detail::notify_event(obs, MarkedEventRecord{t, Mark::Plus, lp, lm});
        } else {
            ++minus;
            self_minus.add_event();
            cross_minus.add_event();
            detail::notify_event(obs, MarkedEventRecord{t, Mark::Minus, lp, lm});
        }
    }
    emit_before(std::numeric_limits<double>::infinity());
    return {plus, minus};
}

/**
 * Exact simulation of the signed model when phi1 and phi2 are exponentials
 * with a common rate beta.
 *
 * N+ + N- is then a univariate exponential Hawkes process with baseline
 * 2 mu and norm a_T, simulated by inversion as above. Each event is marked +
 * with probability lambda+ / (lambda+ + lambda-) at its left limit; lambda+
 * is tracked alongside the total, both decaying at rate beta.
 */
template <class Observer>
std::pair<std::size_t, std::size_t>
run_bivariate_inversion(const BivariateKernelSpec& kernels, double mu, double horizon,
                        std::span<const double> probes, RandomStream& rng, Observer& obs,
                        std::size_t event_cap = std::numeric_limits<std::size_t>::max())
{
    require(kernels.has_common_exponential_rate(),
            "bivariate inversion needs exponential kernels with a common rate");
    require(mu > 0, "baseline intensity must be > 0");
    require(horizon > 0, "horizon must be > 0");
    detail::check_probes(probes, horizon);
    const double beta = kernels.self_kernel().exponential_components().front().rate;
    const double a = kernels.a_T();
    const double jump = a * beta;
    const double self_jump = a * kernels.w1() * beta;
    const double cross_jump = a * kernels.w2() * beta;
    const double self_mass = a * kernels.w1();
    const double cross_mass = a * kernels.w2();
    RandomStream excitation_rng = rng.substream("excitation");
    RandomStream mark_rng = rng.substream("marks");
    RandomStream baseline_rng = rng.substream("baseline");

    std::array<double, detail::kBlock> xi{};
    std::array<double, detail::kBlock> level{};
    std::array<double, detail::kBlock> wait{};
    std::array<double, detail::kBlock> u{};

    double t = 0;
    double S = 0;  // lambda+ + lambda- - 2 mu, right after t
    double Ep = 0; // lambda+ - mu, right after t
    std::size_t plus = 0;
    std::size_t minus = 0;
    std::size_t next = 0;
    double next_probe = probes.empty() ? detail::kNever : probes[0];
    double tb = baseline_rng.exponential() / (2 * mu);

    auto emit_before = [&](double limit, double s) {
        while (next_probe < limit) {
            const double p = next_probe;
            const double f = std::exp(-beta * (p - t));
            const double ep = Ep * f;
            const double em = (s - Ep) * f;
            const double np = static_cast<double>(plus);
            const double nm = static_cast<double>(minus);
            detail::notify_probe(obs, MarkedProbeRecord{next, p, mu + ep, mu + em,
                                                        mu * p + self_mass * np +
                                                            cross_mass * nm - ep / beta,
                                                        mu * p + self_mass * nm +
                                                            cross_mass * np - em / beta,
                                                        plus, minus});
            ++next;
            next_probe = next < probes.size() ? probes[next] : detail::kNever;
        }
    };
    // Marks and applies one event at time t, given the decayed levels.
    auto apply = [&](double s_before, double ep_before, double v) {
        if (plus + minus + 1 > event_cap) {
            fail(ErrorKind::GenerationOverflow, "event cap exceeded");
        }
        const double lp = mu + ep_before;
        const double lm = mu + (s_before - ep_before);
        if (v * (lp + lm) < lp) {
            ++plus;
            Ep = ep_before + self_jump;
            detail::notify_event(obs, MarkedEventRecord{t, Mark::Plus, lp, lm});
        } else {
            ++minus;
            Ep = ep_before + cross_jump;
            detail::notify_event(obs, MarkedEventRecord{t, Mark::Minus, lp, lm});
        }
        S = s_before + jump;
    };

    for (;;) {
        fill_exponential(excitation_rng, xi);
        fill_uniform(mark_rng, u);
        double e = S;
        for (std::size_t k = 0; k < detail::kBlock; ++k) {
            level[k] = e;
            e += jump - beta * xi[k];
        }
        excitation_waits(xi, level, beta, detail::kNever, wait);
        std::size_t k = 0;
        for (; k < detail::kBlock; ++k) {
            const double tn = t + wait[k];
            if (tn >= tb) {
                break;
            }
            if (tn > horizon) {
                emit_before(detail::kNever, S);
                return {plus, minus};
            }
            if (tn > next_probe) {
                emit_before(tn, S);
            }
            const double s_before = std::max(level[k] - beta * xi[k], 0.0);
            const double ep_before = S > 0 ? Ep * (s_before / S) : 0.0;
            t = tn;
            apply(s_before, std::min(ep_before, s_before), u[k]);
        }
        if (k == detail::kBlock) {
            continue;
        }
        if (tb > horizon) {
            emit_before(detail::kNever, S);
            return {plus, minus};
        }
        emit_before(tb, S);
        const double f = std::exp(-beta * (tb - t));
        t = tb;
        apply(S * f, Ep * f, baseline_rng.uniform());
        tb += baseline_rng.exponential() / (2 * mu);
    }
}

/**
 * Streams one univariate path through \p obs with the fastest exact method
 * for the kernel: inversion for a single exponential, thinning otherwise.
 */
template <class Observer>
std::size_t run_hawkes(const KernelSpec& kernel, double mu, double horizon,
                       std::span<const double> probes, RandomStream& rng, Observer& obs,
                       std::size_t event_cap = std::numeric_limits<std::size_t>::max())
{
    if (kernel.is_single_exponential()) {
        return run_exponential_inversion(kernel, mu, horizon, probes, rng, obs, event_cap);
    }
    if (kernel.has_finite_mean()) {
        detail::ExponentialState state(kernel);
        return run_thinning(state, mu, horizon, probes, rng, obs, event_cap);
    }
    detail::HistoryState state(kernel);
    return run_thinning(state, mu, horizon, probes, rng, obs, event_cap);
}

/// Bivariate analogue of run_hawkes.
template <class Observer>
std::pair<std::size_t, std::size_t>
run_bivariate(const BivariateKernelSpec& kernels, double mu, double horizon,
              std::span<const double> probes, RandomStream& rng, Observer& obs,
              std::size_t event_cap = std::numeric_limits<std::size_t>::max())
{
    if (kernels.has_common_exponential_rate()) {
        return run_bivariate_inversion(kernels, mu, horizon, probes, rng, obs, event_cap);
    }
    return run_bivariate_thinning(kernels, mu, horizon, probes, rng, obs, event_cap);
}

/// Parents of each event in a branching simulation; -1 for immigrants.
struct ClusterTree
{
    std::vector<double> times;
    std::vector<std::int64_t> parents;
};

/**
 * Branching construction: Poisson(mu) immigrants on (0, horizon], then
 * children of each event generation by generation, each an inhomogeneous
 * Poisson process of intensity phi^T(. - parent) cut at the horizon.
 * Events are in generation order.
 */
ClusterTree simulate_cluster_tree(const KernelSpec& kernel, double mu, double horizon,
                                  RandomStream& rng, std::size_t event_cap = kDefaultEventCap);

PointPath simulate_thinning(const KernelSpec& kernel, double mu, double horizon,
                            std::uint64_t seed, std::size_t event_cap = kDefaultEventCap);
PointPath simulate_cluster(const KernelSpec& kernel, double mu, double horizon,
                           std::uint64_t seed, std::size_t event_cap = kDefaultEventCap);
/// Exact inversion; single exponential kernels only.
PointPath simulate_inversion(const KernelSpec& kernel, double mu, double horizon,
                             std::uint64_t seed, std::size_t event_cap = kDefaultEventCap);
/// Marked path of the signed model by two-stream thinning.
PointPath simulate_bivariate(const BivariateKernelSpec& kernels, double mu, double horizon,
                             std::uint64_t seed, std::size_t event_cap = kDefaultEventCap);
/// Marked path by inversion; common-rate exponential kernels only.
PointPath simulate_bivariate_inversion(const BivariateKernelSpec& kernels, double mu,
                                       double horizon, std::uint64_t seed,
                                       std::size_t event_cap = kDefaultEventCap);

/// lambda on {0, step, ..., horizon} as left limits: a jump at a grid time
/// counts only from the next grid point on.
Grid intensity_path(const PointPath& path, const KernelSpec& kernel, double mu, double step);
/// (lambda+, lambda-) of a marked path.
std::pair<Grid, Grid> intensity_path(const PointPath& path, const BivariateKernelSpec& kernels,
                                     double mu, double step);

} // namespace nuh
