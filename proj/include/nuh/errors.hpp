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

#include <stdexcept>
#include <string>
#include <string_view>

namespace nuh {

enum class ErrorKind {
    InvalidArgument,
    InfiniteMean,
    StepTooCoarse,
    BoundViolation,
    GenerationOverflow,
    UnmarkedPath,
    DegenerateEstimate,
    OutOfRange,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InfiniteMean: return "InfiniteMean";
    case ErrorKind::StepTooCoarse: return "StepTooCoarse";
    case ErrorKind::BoundViolation: return "BoundViolation";
    case ErrorKind::GenerationOverflow: return "GenerationOverflow";
    case ErrorKind::UnmarkedPath: return "UnmarkedPath";
    case ErrorKind::DegenerateEstimate: return "DegenerateEstimate";
    case ErrorKind::OutOfRange: return "OutOfRange";
    }
    return "Unknown";
}

/// Every failure the library reports carries one of the kinds above.
class Error : public std::runtime_error
{
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message)
{
    throw Error(kind, message);
}

inline void require(bool condition, const std::string& message)
{
    if (!condition) {
        fail(ErrorKind::InvalidArgument, message);
    }
}

} // namespace nuh
