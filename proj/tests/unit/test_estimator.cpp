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
#include "oamlink/estimator.hpp"
#include "oamlink/synthesis.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

using namespace oam;
using Catch::Approx;

namespace
{
    const double lambda1 = 2.0 * pi / 47.0;

    EstimatorConfig sec7_config()
    {
        EstimatorConfig c;
        c.link.tx = c.link.rx = ArrayConfig{9, 15.0 * lambda1, 0.0};
        c.modes = ModeSet::centered(8);
        c.grid = CarrierGrid::uniform_grid(47.0, 1.0, 8);
        c.search.alpha_a = deg2rad(2);
        c.search.alpha_b = deg2rad(8);
        c.prior = DistancePrior::around(40.0);
        return c;
    }

    arma::cx_mat test_pilots(size_t U, size_t P)
    {
        arma::cx_mat s(U, P);
        for (size_t u = 0; u < U; ++u)
            for (size_t p = 0; p < P; ++p)
                s(u, p) = std::polar(1.0, pi / 4.0 + pi / 2.0 * double((3 * u + 5 * p) % 4));
        return s;
    }
}

TEST_CASE("training model matches an independent Bessel evaluation", "[estimator]")
{
    const auto c = sec7_config();
    const LinkPose pose{40.0, deg2rad(7), deg2rad(7)};
    const arma::cx_mat s = test_pilots(8, 8);
    const arma::cx_mat X = training_signal_model(pose, c.link, c.modes, c.grid, s);
    const double g = std::acos(std::cos(pose.elevation) * std::cos(pose.azimuth));
    for (size_t u = 0; u < 8; ++u)
        for (size_t p = 0; p < 8; ++p)
        {
            const int l = c.modes.modes[u];
            const double k = c.grid.k[p], x = k * c.link.tx.radius * std::sin(pose.elevation);
            const double J = (double)oracle::bessel_series(l, x) * (double)oracle::bessel_series(0, x);
            const cx want = 81.0 / (2.0 * k * 40.0) * s(u, p) * std::polar(1.0, k * 40.0 + l * g - l * pi / 2.0) * J;
            CHECK(std::abs(X(u, p) - want) < 1e-12 * std::abs(want) + 1e-18);
        }
}

TEST_CASE("combine_training sums each slot over the receive elements", "[estimator]")
{
    const ArrayConfig a{9, 0.5, 0.0};
    const ModeSet m = ModeSet::contiguous(-1, 3);
    const auto g = CarrierGrid::uniform_grid(47.0, 1.0, 2);
    const LinkPose pose{40.0, deg2rad(5), deg2rad(4)};
    const arma::cx_mat s = test_pilots(3, 2);
    const TrainingFrame f = training_sequence(9, m, g, s);
    std::vector<arma::cx_mat> rx;
    for (size_t p = 0; p < g.size(); ++p)
        rx.push_back(build_channel(g.k[p], pose, a, a) * f.feeds[p]);
    const auto comb = combine_training(rx, m, g, s);
    for (size_t p = 0; p < 2; ++p)
        for (size_t u = 0; u < 3; ++u)
        {
            cx want = 0.0;
            for (int n = 0; n < 9; ++n)
                want += rx[p](n, u);
            CHECK(std::abs(comb.X(u, p) - want) < 1e-15);
        }
    rx.pop_back();
    CHECK_THROWS_AS(combine_training(rx, m, g, s), argument_error);
}

// Reported but allowed to fail: with the transmit array facing the link axis, the transmit sum carries no
// J_l(k R_t sin a) factor, so the exact channel departs from the far-field training model.
TEST_CASE("exact-channel combined training against the far-field model at the reference link", "[estimator][!mayfail]")
{
    const auto c = sec7_config();
    const LinkPose pose{40.0, deg2rad(7), deg2rad(7)};
    const arma::cx_mat s = test_pilots(8, 8);
    const TrainingFrame f = training_sequence(9, c.modes, c.grid, s);
    std::vector<arma::cx_mat> rx;
    for (size_t p = 0; p < c.grid.size(); ++p)
        rx.push_back(build_channel(c.grid.k[p], pose, c.link.tx, c.link.rx) * f.feeds[p] * 3.0);
    const auto comb = combine_training(rx, c.modes, c.grid, s);
    const arma::cx_mat X = training_signal_model(pose, c.link, c.modes, c.grid, s);
    const double worst = arma::abs(arma::abs(comb.X) / arma::abs(X) - 1.0).max();
    INFO("worst relative magnitude error " << worst);
    CHECK(worst < 0.01);
}

TEST_CASE("normalize removes pilots, beta and i^-l", "[estimator]")
{
    const ModeSet m = ModeSet::contiguous(-1, 3);
    arma::cx_mat s = test_pilots(3, 2);
    arma::cx_mat X(3, 2);
    for (int u = 0; u < 3; ++u)
        for (int p = 0; p < 2; ++p)
            X(u, p) = 3.0 * std::polar(1.0, 0.3 * p + 0.2 * u) * s(u, p) * cx(0.0, 2.0) * i_pow(-m.modes[u]);
    arma::mat sg(3, 2, arma::fill::ones);
    sg(1, 1) = -1.0;
    const arma::cx_mat Xt = normalize(X, s, m, sg, cx(0.0, 2.0));
    for (int u = 0; u < 3; ++u)
        for (int p = 0; p < 2; ++p)
            CHECK(std::abs(Xt(u, p) - sg(u, p) * std::polar(1.0, 0.3 * p + 0.2 * u)) < 1e-14);
    X(0, 0) = 0.0;
    CHECK_THROWS_AS(normalize(X, s, m, sg), estimation_error);
}

TEST_CASE("ESPRIT: single-snapshot and EVD forms agree", "[estimator]")
{
    arma::cx_mat Xt(6, 5);
    for (int u = 0; u < 6; ++u)
        for (int p = 0; p < 5; ++p)
            Xt(u, p) = std::polar(1.0, 0.7 * p - 1.1 * u);
    CHECK(esprit_phase_step(Xt, EspritAxis::subcarrier) == Approx(0.7).margin(1e-12));
    CHECK(esprit_phase_step(Xt, EspritAxis::mode) == Approx(-1.1).margin(1e-12));
    const auto e = esprit_phase_step(std::vector<arma::cx_mat>{Xt}, EspritAxis::subcarrier);
    CHECK(e.phase == Approx(0.7).margin(1e-12));
    CHECK(std::isinf(e.eig_ratio));
    CHECK_THROWS_AS(esprit_phase_step(arma::cx_mat(6, 1, arma::fill::ones), EspritAxis::subcarrier), estimation_error);
}

TEST_CASE("distance ambiguity resolution", "[estimator]")
{
    const double ph = std::remainder(40.0, 2.0 * pi);
    const auto a = resolve_distance_ambiguity(ph, 1.0, DistancePrior{37.0, 42.0});
    CHECK(a.distance == Approx(40.0).margin(1e-12));
    CHECK(a.wraps == 6);
    CHECK_THROWS_AS(resolve_distance_ambiguity(ph, 1.0, DistancePrior{30.0, 42.0}), estimation_error);
    CHECK_THROWS_AS(resolve_distance_ambiguity(ph, 1.0, DistancePrior{41.0, 42.0}), estimation_error);
    CHECK_THROWS_AS(resolve_distance_ambiguity(ph, 0.0, DistancePrior{37.0, 42.0}), argument_error);
}

TEST_CASE("elevation solver recovers alpha from noiseless signals", "[estimator]")
{
    const auto c = sec7_config();
    const LinkPose pose{40.0, deg2rad(7), deg2rad(5.5)};
    const arma::cx_mat s = test_pilots(8, 8);
    const arma::cx_mat X = training_signal_model(pose, c.link, c.modes, c.grid, s);
    const ElevationSolver solver(c.link, c.modes, c.grid, c.search);
    arma::mat sign(8, 8);
    for (int u = 0; u < 8; ++u)
        for (int p = 0; p < 8; ++p)
            sign(u, p) = bessel_product(c.modes.modes[u], c.grid.k[p], pose.elevation, c.link.tx.radius, c.link.rx.radius) < 0 ? -1 : 1;
    const ElevationRoots roots = solver.solve(X, s, 40.0, sign);
    CHECK(roots.pair_count == 64);
    CHECK(roots.empty_pairs.empty());
    for (int pair = 0; pair < 64; ++pair)
    {
        bool hit = false;
        for (const auto &cd : roots.candidates)
            hit = hit || (cd.pair == pair && std::abs(cd.alpha - pose.elevation) < 1e-7);
        CHECK(hit);
    }
    // spurious roots of other pairs share the true bin, so the loop ends in the fallback
    const ClusterResult cl = cluster_and_average(roots, c.search);
    CHECK(cl.status != ClusterStatus::weak);
    CHECK(cl.members == 64);
    CHECK(cl.alpha == Approx(pose.elevation).margin(1e-7));
}

TEST_CASE("clustering statuses", "[estimator]")
{
    ElevationSearchSpec spec;
    spec.alpha_a = 0.0;
    spec.alpha_b = 0.2;
    spec.initial_intervals = 2;
    spec.max_intervals = 16;

    ElevationRoots r;
    r.pair_count = 4;
    for (int p = 0; p < 4; ++p)
        r.candidates.push_back({0.15 + 1e-4 * (p - 1.5), p});
    r.candidates.push_back({0.03, 0});
    auto c = cluster_and_average(r, spec);
    CHECK(c.status == ClusterStatus::exact);
    CHECK(c.intervals == 2);
    CHECK(c.alpha == Approx(0.15).margin(1e-12));

    ElevationRoots rel;
    rel.pair_count = 5;
    for (int p = 0; p < 4; ++p)
        rel.candidates.push_back({0.101 + 1e-4 * p, p});
    rel.candidates.push_back({0.02, 4});
    c = cluster_and_average(rel, spec);
    CHECK(c.status == ClusterStatus::relaxed);
    CHECK(c.members == 4);
    CHECK(c.intervals == 16);
    CHECK(c.alpha == Approx(0.10115).margin(1e-12));

    ElevationRoots weak;
    weak.pair_count = 5;
    weak.candidates = {{0.101, 0}, {0.1012, 1}, {0.02, 2}, {0.05, 3}, {0.18, 4}};
    c = cluster_and_average(weak, spec);
    CHECK(c.status == ClusterStatus::weak);
    CHECK(c.members == 2);

    // cluster sitting on a bin edge of every even partition is recovered by the shifted grid
    ElevationRoots edge;
    edge.pair_count = 6;
    for (int p = 0; p < 6; ++p)
        edge.candidates.push_back({0.1 + 1e-9 * (p % 2 ? 1 : -1), p});
    edge.candidates.push_back({0.1 + 2e-9, 0});
    c = cluster_and_average(edge, spec);
    CHECK(c.members == 6);
    CHECK(c.status == ClusterStatus::relaxed);
    CHECK(c.alpha == Approx(0.1).margin(1e-8));
}

TEST_CASE("noiseless pose estimate is exact", "[estimator]")
{
    const auto c = sec7_config();
    const PoseEstimator est(c);
    CHECK(est.sign_patterns().size() > 1);
    for (auto [phi, al] : std::vector<std::pair<double, double>>{{7, 7}, {3, 5}, {10, 2.5}})
    {
        const LinkPose pose{40.3, deg2rad(phi), deg2rad(al)};
        const arma::cx_mat s = test_pilots(8, 8);
        CombinedTrainingSignals x{training_signal_model(pose, c.link, c.modes, c.grid, s), c.modes, c.grid, s};
        const PoseEstimate e = est.estimate(x);
        CHECK(e.r_hat == Approx(40.3).margin(1e-9));
        CHECK(e.gamma_hat == Approx(tilt_angle(pose)).margin(1e-9));
        CHECK(e.alpha_hat == Approx(pose.elevation).margin(1e-7));
        CHECK(e.phi_hat == Approx(pose.azimuth).margin(1e-5));
        CHECK(e.cluster.members == 64);

        const std::string rep = diagnostics_report(e, c);
        CHECK(rep.find("# pose estimate") != std::string::npos);
        CHECK(rep.find("# sign hypotheses (" + std::to_string(e.hypotheses.size()) + ")") != std::string::npos);
        CHECK(rep.find("members = 64 of 64") != std::string::npos);
        CHECK(rep.find(std::to_string(e.chosen_hypothesis) + "* ") != std::string::npos);
    }
}

TEST_CASE("estimator configuration errors", "[estimator]")
{
    auto c = sec7_config();
    c.grid = CarrierGrid::uniform_grid(47.0, 1.0, 1);
    CHECK_THROWS_AS(PoseEstimator(c), estimation_error);
    c = sec7_config();
    c.search.alpha_b = c.search.alpha_a;
    CHECK_THROWS_AS(PoseEstimator(c), argument_error);
    c = sec7_config();
    CHECK_THROWS_AS(PoseEstimator(c).estimate(CombinedTrainingSignals{arma::cx_mat(3, 3, arma::fill::ones), c.modes, c.grid, {}}),
                    estimation_error);
}
