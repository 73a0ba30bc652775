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
#include "oamlink/receiver.hpp"
#include "oamlink/synthesis.hpp"

#include <catch_amalgamated.hpp>

using namespace oam;
using Catch::Approx;

namespace
{
    const double lambda1 = 2.0 * pi / 47.0;

    // ratio |zeta(l)| / |zeta(0)| of the exact steered diagonal at the true pose
    double exact_ratio(const LinkPose &pose, const ArrayConfig &a, double k, int l)
    {
        const ModeSet m = ModeSet::contiguous(-(a.element_count - 1) / 2, a.element_count - 1 + a.element_count % 2);
        const arma::cx_mat He = effective_oam_channel(build_channel(k, pose, a, a), m, m, steering_vector(pose, a, k));
        const int off = -m.modes.front();
        return std::abs(He(l + off, l + off)) / std::abs(He(off, off));
    }
}

TEST_CASE("amplitude matrix reproduces the closed form", "[receiver]")
{
    const ArrayConfig a{9, 15.0 * lambda1, 0.0};
    const LinkPose pose{40.0, deg2rad(7), deg2rad(7)};
    const ModeSet m = ModeSet::centered(8);
    const arma::cx_vec z = amplitude_matrix(pose, m, 47.0, a, a);
    for (size_t u = 0; u < m.size(); ++u)
        CHECK(z(u) == diagonal_gain_closed_form(m.modes[u], 47.0, 40.0, a.radius, a.radius, 9));
    const cx eta = 1.0 / (2.0 * 47.0 * 40.0 * 9.0) * std::exp(cx(0.0, -47.0 * 40.0));
    CHECK(std::abs(z(4) - eta * 81.0) < 1e-16);

    // far link, high order: the closed form underflows
    const ModeSet hi = ModeSet::contiguous(30, 1);
    CHECK_THROWS_AS(amplitude_matrix(LinkPose{1e6, 0.0, 0.0}, hi, 1.0, ArrayConfig{64, 1e-3, 0.0}, ArrayConfig{64, 1e-3, 0.0}),
                    conditioning_error);
}

TEST_CASE("fourth-order gain ratio agrees with the exact diagonal in the Taylor regime", "[receiver]")
{
    const ArrayConfig a{9, 5.0 * lambda1, 0.0};
    const LinkPose pose{40.0, deg2rad(7), deg2rad(7)};
    const double S = 47.0 * a.radius * a.radius / 40.0;
    const double closed = std::pow(S, 4) / 16.0 / 24.0;
    for (int l : {-4, 4})
        CHECK(exact_ratio(pose, a, 47.0, l) == Approx(closed).epsilon(0.1));
}

TEST_CASE("fourth-order gain ratio at the reference radii", "[receiver][!mayfail]")
{
    const ArrayConfig a{9, 15.0 * lambda1, 0.0};
    const LinkPose pose{40.0, deg2rad(7), deg2rad(7)};
    const double S = 47.0 * a.radius * a.radius / 40.0;
    const double closed = std::pow(S, 4) / 16.0 / 24.0;
    for (int l : {-4, 4})
    {
        INFO("l = " << l << ", closed " << closed << ", exact " << exact_ratio(pose, a, 47.0, l));
        CHECK(exact_ratio(pose, a, 47.0, l) == Approx(closed).epsilon(0.1));
    }
}

TEST_CASE("noiseless detection recovers symbols for low-order modes", "[receiver]")
{
    const ArrayConfig a{9, 3.0 * lambda1, 0.0};
    const LinkPose pose{40.0, 0.0, 0.0};
    const ModeSet m = ModeSet::contiguous(-2, 5);
    const auto g = CarrierGrid::uniform_grid(45.0, 1.0, 3);
    const DetectionSet det = detection_set(pose, m, g, a, a, 1.0, GainModel::geometric);
    const arma::cx_vec s{cx(1, 1), cx(-1, 1), cx(1, -1), cx(-1, -1), cx(1, 0)};
    std::vector<arma::cx_vec> rx;
    for (size_t p = 0; p < g.size(); ++p)
        rx.push_back(build_channel(g.k[p], pose, a, a) * synthesize(s, det.F));
    const arma::cx_mat x = detect(rx, det);
    for (size_t p = 0; p < g.size(); ++p)
        CHECK(arma::max(arma::abs(x.col(p) - s) / arma::abs(s)) < 0.01);

    std::vector<arma::cx_vec> zero(g.size(), arma::cx_vec(9, arma::fill::zeros));
    CHECK(arma::abs(detect(zero, det)).max() == 0.0);
}

TEST_CASE("closed-form gain model leaves the Fresnel phase in the detected symbols", "[receiver][!mayfail]")
{
    const ArrayConfig a{9, 15.0 * lambda1, 0.0};
    const LinkPose pose{40.0, 0.0, 0.0};
    const ModeSet m = ModeSet::contiguous(-2, 5);
    const auto g = CarrierGrid::uniform_grid(47.0, 1.0, 1);
    const DetectionSet det = detection_set(pose, m, g, a, a);
    const arma::cx_vec s(5, arma::fill::ones);
    const arma::cx_mat x = detect(std::vector<arma::cx_vec>{build_channel(47.0, pose, a, a) * synthesize(s, det.F)}, det);
    INFO("worst relative error " << arma::abs(x.col(0) - s).max());
    CHECK(arma::abs(x.col(0) - s).max() < 0.01);
}

TEST_CASE("detection front end is semi-unitary", "[receiver]")
{
    const ArrayConfig a{9, 15.0 * lambda1, 0.0};
    const DetectionSet det = detection_set(LinkPose{40.0, deg2rad(7), deg2rad(7)}, ModeSet::centered(8),
                                           CarrierGrid::uniform_grid(47.0, 1.0, 3), a, a);
    for (size_t p = 0; p < 3; ++p)
    {
        const arma::cx_mat A = det.front_end(p);
        CHECK(arma::abs(A * A.t() - arma::eye<arma::cx_mat>(8, 8)).max() < 1e-12);
    }
}

TEST_CASE("single-ring UCCA detection reduces to UCA detection", "[receiver]")
{
    const ArrayConfig a{9, 5.0 * lambda1, 0.0};
    const UccaConfig u{{a}};
    const LinkPose pose{40.0, deg2rad(3), deg2rad(4)};
    const ModeSet m = ModeSet::centered(4);
    const auto g = CarrierGrid::uniform_grid(47.0, 1.0, 2);
    for (GainModel gm : {GainModel::closed_form, GainModel::geometric, GainModel::exact})
    {
        const DetectionSet d1 = detection_set(pose, m, g, a, a, 1.0, gm);
        const UccaDetectionSet d2 = ucca_detection_set(pose, u, u, m, g, 1.0, gm);
        arma::arma_rng::set_seed(5);
        const arma::cx_mat Y = arma::randn<arma::cx_mat>(9, 3);
        for (size_t p = 0; p < 2; ++p)
        {
            CHECK(arma::abs(d1.front_end(p) - d2.front_end(p)).max() < 1e-15);
            CHECK(arma::abs(arma::cx_vec(d2.gamma[p].diag()) - d1.gamma[p]).max() < 1e-15 * arma::abs(d1.gamma[p]).max());
            CHECK(arma::abs(detect(Y, d1, p) - detect(Y, d2, p)).max() < 1e-9 * arma::abs(detect(Y, d1, p)).max());
        }
    }
}

TEST_CASE("UCCA ring gain matrices", "[receiver]")
{
    UccaConfig u;
    for (int i = 1; i <= 4; ++i)
        u.rings.push_back(ArrayConfig{16, 3.75 * i * lambda1, 0.0});
    const LinkPose pose{40.0, 0.0, 0.0};
    const ModeSet m = ModeSet::contiguous(-2, 4);
    const auto g = CarrierGrid::uniform_grid(47.0, 1.0, 1);

    // closed-form ring matrices are outer products, hence singular
    try
    {
        ucca_detection_set(pose, u, u, m, g, 1.0, GainModel::closed_form);
        FAIL("expected conditioning_error");
    }
    catch (const conditioning_error &e)
    {
        CHECK(std::string(e.what()).find("mode") != std::string::npos);
    }

    // exact diagonal, aligned link: the block channel is mode-diagonal, so Gi H' = I
    const UccaDetectionSet d = ucca_detection_set(pose, u, u, m, g, 1.0, GainModel::exact);
    std::vector<arma::cx_vec> st = d.steering[0];
    const arma::cx_mat He = effective_ucca_channel(build_ucca_channel(47.0, pose, u, u), 4, m, st);
    const arma::cx_mat R = d.gamma_inv[0] * He - arma::eye<arma::cx_mat>(16, 16);
    for (int kappa = 0; kappa < 16; ++kappa)
        CHECK(10.0 * std::log10(std::pow(arma::norm(R.row(kappa)), 2) + 1e-300) < -20.0);
}
