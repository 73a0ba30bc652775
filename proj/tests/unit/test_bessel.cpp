// SPDX-License-Identifier: Apache-2.0
//
// oamlink: link-level simulator for line-of-sight multi-mode OAM radio links
// Copyright (C) 2026 The oamlink authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "oracles.hpp"

#include "oamlink/bessel.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace oam;

TEST_CASE("Bessel J_n matches a long-double power series", "[bessel]")
{
    double worst = 0.0;
    for (int n = 0; n <= 10; ++n)
        for (double x = 0.0; x <= 20.0; x += 0.173)
            worst = std::max(worst, std::abs(bessel_j(n, x) - oracle::bessel_series(n, x)));
    CHECK(worst < 1e-12);
}

TEST_CASE("Bessel J_n matches the standard library at large argument", "[bessel]")
{
    double worst = 0.0;
    for (int n = 0; n <= 12; ++n)
        for (double x = 12.0; x <= 120.0; x += 0.731)
            worst = std::max(worst, std::abs(bessel_j(n, x) - std::cyl_bessel_j((double)n, x)));
    CHECK(worst < 1e-12);
}

TEST_CASE("Bessel symmetries and special values", "[bessel]")
{
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(3, 0.0) == 0.0);
    for (double x : {0.3, 2.7, 9.1, 31.0})
        for (int n : {1, 2, 3, 4})
        {
            CHECK(bessel_j(-n, x) == Catch::Approx((n % 2 ? -1.0 : 1.0) * bessel_j(n, x)).margin(1e-15));
            CHECK(bessel_j(n, -x) == Catch::Approx((n % 2 ? -1.0 : 1.0) * bessel_j(n, x)).margin(1e-15));
        }
    // first zero of J_0
    CHECK(std::abs(bessel_j(0, 2.404825557695773)) < 1e-14);
}
