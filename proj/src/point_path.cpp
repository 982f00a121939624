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

#include "nuh/point_path.hpp"

#include <algorithm>
#include <cmath>

#include "nuh/errors.hpp"

namespace nuh {

PointPath::PointPath(double horizon, std::vector<double> jumps, std::vector<Mark> marks,
                     std::uint64_t seed_tag)
    : horizon_(horizon), jumps_(std::move(jumps)), marks_(std::move(marks)), seed_tag_(seed_tag)
{
    require(std::isfinite(horizon_) && horizon_ > 0, "path horizon must be > 0");
    require(marks_.empty() || marks_.size() == jumps_.size(),
            "a marked path needs one mark per jump");
    for (std::size_t i = 0; i < jumps_.size(); ++i) {
        require(jumps_[i] > 0 && jumps_[i] <= horizon_, "jump times must lie in (0, horizon]");
        require(i == 0 || jumps_[i] > jumps_[i - 1], "jump times must be strictly increasing");
    }
}

std::size_t PointPath::count_until(double t) const noexcept
{
    return static_cast<std::size_t>(std::upper_bound(jumps_.begin(), jumps_.end(), t) -
                                    jumps_.begin());
}

long long PointPath::signed_count_until(double t) const
{
    if (!is_marked()) {
        fail(ErrorKind::UnmarkedPath, "signed count needs a marked (bivariate) path");
    }
    const std::size_t n = count_until(t);
    long long total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total += static_cast<int>(marks_[i]);
    }
    return total;
}

} // namespace nuh
