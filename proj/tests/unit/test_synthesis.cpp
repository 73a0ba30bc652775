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

#include "oamlink/errors.hpp"
#include "oamlink/synthesis.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

using namespace oam;
using Catch::Approx;

TEST_CASE("mode matrix rows are orthonormal", "[synthesis]")
{
    for (int N : {4, 9, 16})
    {
        const ModeSet m = ModeSet::centered(N % 2 ? N : N - 1);
        const arma::cx_mat F = dft_mode_matrix(N, m);
        CHECK(arma::abs(F * F.t() - arma::eye<arma::cx_mat>(m.size(), m.size())).max() < 1e-13);
        for (size_t u = 0; u < m.size(); ++u)
            for (int n = 0; n < N; ++n)
                CHECK(std::abs(F(u, n) - std::polar(1.0 / std::sqrt(N), -2.0 * pi * m.modes[u] * n / N)) < 1e-14);
    }
    CHECK_THROWS_AS(dft_mode_matrix(8, ModeSet{{0, 4}}), argument_error);
    CHECK_THROWS_AS(dft_mode_matrix(8, ModeSet{{1, 1}}), argument_error);
}

TEST_CASE("analog synthesis equals the digital feed", "[synthesis]")
{
    const ArrayConfig a{9, 0.3, 0.0};
    const ModeSet m = ModeSet::centered(8);
    arma::arma_rng::set_seed(3);
    const arma::cx_vec s = arma::randn<arma::cx_vec>(8);
    CHECK(arma::abs(synthesize(s, dft_mode_matrix(9, m)) - synthesize_analog(s, m, a)).max() < 1e-13);
}

TEST_CASE("training frame uses one mode per slot", "[synthesis]")
{
    const ModeSet m = ModeSet::centered(4);
    const auto g = CarrierGrid::uniform_grid(47.0, 1.0, 3);
    arma::cx_mat pil(4, 3, arma::fill::ones);
    pil(2, 1) = cx(0.0, -1.0);
    const TrainingFrame f = training_sequence(9, m, g, pil);
    REQUIRE(f.feeds.size() == 3);
    const arma::cx_mat F = dft_mode_matrix(9, m);
    CHECK(arma::abs(f.feeds[1].col(2) - F.row(2).t() * cx(0.0, -1.0)).max() < 1e-15);
    pil(0, 0) = 0.0;
    CHECK_THROWS_AS(training_sequence(9, m, g, pil), argument_error);
    CHECK_THROWS_AS(training_sequence(9, m, g, arma::cx_mat(4, 2, arma::fill::ones)), argument_error);
}

TEST_CASE("single-mode phase fronts wind l times", "[synthesis]")
{
    const double k = 2.0 * pi * 2.45e9 / 299792458.0;
    const double lambda = 2.0 * pi / k;
    const ArrayConfig a{8, 0.66 * lambda, 0.0};
    for (int l : {1, 2, 3, -2})
    {
        const arma::cx_vec feed = synthesize(arma::cx_vec{cx(1.0)}, dft_mode_matrix(8, ModeSet{{l}}));
        // feed F^H e_l winds as exp(+i 2 pi l n / N); the radiated phase follows
        CHECK(std::lround(winding_number(a, feed, k, 2.0 * lambda, 0.66 * lambda)) == l);
    }
}

TEST_CASE("superposed mode pairs produce |l1 - l2| arms", "[synthesis]")
{
    const double k = 2.0 * pi * 2.45e9 / 299792458.0;
    const double lambda = 2.0 * pi / k;
    const ArrayConfig a{8, 0.66 * lambda, 0.0};
    const PlaneSpec plane{2.0 * lambda, 4.0 * lambda, 161};
    for (auto [l1, l2] : std::vector<std::pair<int, int>>{{-1, 1}, {-2, 2}, {1, 3}})
    {
        const arma::cx_vec feed = synthesize(arma::cx_vec{cx(1.0), cx(1.0)}, dft_mode_matrix(8, ModeSet{{l1, l2}}));
        const PhaseRaster ras = field_phase_map(a, feed, k, plane);
        CHECK(interference_arms(ras, 0.66 * lambda).arms == std::abs(l1 - l2));
    }
}

TEST_CASE("raster writers", "[synthesis]")
{
    const ArrayConfig a{8, 0.1, 0.0};
    const arma::cx_vec feed = synthesize(arma::cx_vec{cx(1.0)}, dft_mode_matrix(8, ModeSet{{1}}));
    const PhaseRaster ras = field_phase_map(a, feed, 50.0, PlaneSpec{0.3, 0.4, 21});
    CHECK(ras.width == 21);
    CHECK(ras.phase.size() == 441u);
    CHECK_THROWS_AS(interference_arms(ras, 0.5), argument_error);

    const auto dir = std::filesystem::temp_directory_path() / "oamlink_raster_test";
    std::filesystem::create_directories(dir);
    write_raster_pgm(ras, (dir / "r.pgm").string());
    write_raster_csv(ras, (dir / "r.csv").string());
    std::ifstream f(dir / "r.pgm", std::ios::binary);
    std::string magic;
    int w, h, mx;
    f >> magic >> w >> h >> mx;
    CHECK(magic == "P5");
    CHECK(w == 21);
    CHECK(h == 21);
    CHECK(mx == 255);
    CHECK(std::filesystem::file_size(dir / "r.pgm") >= 441u);
    std::filesystem::remove_all(dir);
}
