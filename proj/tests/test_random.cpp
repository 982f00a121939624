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

#include <set>

#include "nuh/random.hpp"
#include "nuh/stats.hpp"

using namespace nuh;

TEST_SUITE("random") {

TEST_CASE("same seed, same stream")
{
    RandomStream a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(a() == b());
    }
    RandomStream c(43);
    CHECK(RandomStream(42)() != c());
}

TEST_CASE("at() matches sequential draws without advancing")
{
    RandomStream s(7);
    const auto third = s.at(3);
    s();
    s();
    CHECK(s.position() == 2);
    CHECK(s() == third);
}

TEST_CASE("children depend on the index only, not on the parent position")
{
    RandomStream a(11), b(11);
    b.discard(1000);
    CHECK(a.child(5)() == b.child(5)());
    CHECK(a.substream("x")() == b.substream("x")());
    CHECK(a.child(5)() != a.child(6)());
    CHECK(a.substream("x")() != a.substream("y")());
}

TEST_CASE("child streams do not collide")
{
    RandomStream root(1729);
    std::set<std::uint64_t> first;
    for (std::uint64_t i = 0; i < 10000; ++i) {
        first.insert(root.child(i)());
    }
    CHECK(first.size() == 10000);
}

TEST_CASE("uniform and exponential moments")
{
    RandomStream s(3);
    RunningStats u, e;
    for (int i = 0; i < 200000; ++i) {
        const double x = s.uniform();
        CHECK_UNARY(x >= 0.0);
        CHECK_UNARY(x < 1.0);
        u.add(x);
        e.add(s.exponential());
    }
    CHECK(std::abs(u.mean() - 0.5) < 3 * u.standard_error() + 1e-12);
    CHECK(std::abs(u.variance() - 1.0 / 12) < 2e-3);
    CHECK(std::abs(e.mean() - 1.0) < 3 * e.standard_error());
}

}
