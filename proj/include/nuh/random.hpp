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

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

namespace nuh {

/// 64-bit finalizer from SplitMix64 (Stafford's variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// FNV-1a hash, used to turn substream names into stream indices.
constexpr std::uint64_t name_tag(std::string_view name) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

/**
 * Counter-based random stream.
 *
 * The n-th output is a pure function of (key, gamma, n), so a stream can be
 * split into children without touching its own position. Children are keyed
 * by hashing the parent's identity with an index; this is how a Monte Carlo
 * run derives one stream per path from the master seed, independent of the
 * order in which the paths are scheduled.
 *
 * Satisfies UniformRandomBitGenerator, so the boost::random distributions
 * can draw from it directly.
 */
class RandomStream
{
  public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed = 0) noexcept
        : key_(mix64(seed + 0x9e3779b97f4a7c15ull)), gamma_(make_gamma(seed))
    {
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept
    {
        return mix64(key_ + (++counter_) * gamma_);
    }

    /// Output at an arbitrary counter position; does not advance the stream.
    result_type at(std::uint64_t counter) const noexcept
    {
        return mix64(key_ + counter * gamma_);
    }

    void discard(std::uint64_t n) noexcept { counter_ += n; }
    std::uint64_t position() const noexcept { return counter_; }

    /// Independent child stream; a function of this stream's key only.
    RandomStream child(std::uint64_t index) const noexcept
    {
        return RandomStream(mix64(key_ ^ mix64(gamma_ + index)) + index);
    }

    RandomStream substream(std::string_view name) const noexcept
    {
        return child(name_tag(name));
    }

    /// Uniform on [0, 1).
    double uniform() noexcept
    {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1); safe to take the log of.
    double uniform_positive() noexcept
    {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Unit-rate exponential by inversion.
    double exponential() noexcept { return -std::log(uniform_positive()); }

  private:
    static std::uint64_t make_gamma(std::uint64_t seed) noexcept
    {
        // Odd increment with enough bit transitions, as in SplittableRandom.
        std::uint64_t z = mix64(seed ^ 0x6a09e667f3bcc909ull) | 1ull;
        if (std::popcount(z ^ (z >> 1)) < 24) {
            z ^= 0xaaaaaaaaaaaaaaaaull;
        }
        return z;
    }

    std::uint64_t key_;
    std::uint64_t gamma_;
    std::uint64_t counter_ = 0;
};

} // namespace nuh
