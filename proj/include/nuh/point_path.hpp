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
#include <span>
#include <vector>

namespace nuh {

enum class Mark : std::int8_t { Plus = 1, Minus = -1 };

/**
 * A realized point-process trajectory on (0, horizon].
 *
 * Jumps are strictly increasing. Bivariate paths carry one mark per jump;
 * strict monotonicity also means the two streams never share a jump time.
 */
class PointPath
{
  public:
    PointPath(double horizon, std::vector<double> jumps, std::vector<Mark> marks = {},
              std::uint64_t seed_tag = 0);

    double horizon() const noexcept { return horizon_; }
    std::span<const double> jumps() const noexcept { return jumps_; }
    std::span<const Mark> marks() const noexcept { return marks_; }
    bool is_marked() const noexcept { return !marks_.empty(); }
    std::size_t size() const noexcept { return jumps_.size(); }
    bool empty() const noexcept { return jumps_.empty(); }
    std::uint64_t seed_tag() const noexcept { return seed_tag_; }

    /// Number of jumps in (0, t].
    std::size_t count_until(double t) const noexcept;
    /// N+ - N- on (0, t]; requires marks.
    long long signed_count_until(double t) const;

    bool operator==(const PointPath&) const = default;

  private:
    double horizon_;
    std::vector<double> jumps_;
    std::vector<Mark> marks_;
    std::uint64_t seed_tag_;
};

} // namespace nuh
