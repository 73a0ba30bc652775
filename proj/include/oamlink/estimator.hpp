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

#ifndef OAMLINK_ESTIMATOR_H
#define OAMLINK_ESTIMATOR_H

#include "oamlink/channel.hpp"

#include <armadillo>
#include <string>
#include <vector>

namespace oam
{
    // X' (U~ x P~), entry x'(l_u, k_p)
    struct CombinedTrainingSignals
    {
        arma::cx_mat X;
        ModeSet modes;
        CarrierGrid grid;
        arma::cx_mat pilots;
    };

    // Known link constants used by the receiver
    struct LinkModel
    {
        ArrayConfig tx, rx;
        cx beta = 1.0;
    };

    struct ElevationSearchSpec
    {
        double alpha_a = 0.0, alpha_b = 0.0; // radians
        int initial_intervals = 2;           // D
        int grid_points = 2000;              // dense bracketing samples
        double tolerance = 1e-8;             // bisection stop, radians
        int max_intervals = 64;              // split budget
        double relax_fraction = 0.8;         // relaxed acceptance threshold

        void validate() const;
    };

    struct DistancePrior
    {
        double lo = 0.0, hi = 0.0;
        static DistancePrior around(double nominal, double half_width = 3.0);
    };

    // Per-slot received element vectors: one N x U~ matrix per subcarrier -> column sums
    CombinedTrainingSignals combine_training(const std::vector<arma::cx_mat> &received, const ModeSet &modes,
                                             const CarrierGrid &grid, const arma::cx_mat &pilots);

    // Noiseless far-field training model: sigma e^{ikr} e^{il gamma} i^{-l} J_l(k R_t sin a) J_0(k R_r sin a),
    // sigma = beta N^2 / (2 k r) s'
    arma::cx_mat training_signal_model(const LinkPose &pose, const LinkModel &link, const ModeSet &modes,
                                       const CarrierGrid &grid, const arma::cx_mat &pilots);

    // Bessel product J_l(k R_t sin a) J_0(k R_r sin a)
    double bessel_product(int l, double k, double alpha, double Rt, double Rr);

    // (x'/|x'|)(s'^*/|s'|)(beta^*/|beta|) i^l sign
    arma::cx_mat normalize(const arma::cx_mat &X, const arma::cx_mat &pilots, const ModeSet &modes,
                           const arma::mat &sign_pattern, cx beta = 1.0);

    enum class EspritAxis
    {
        subcarrier,
        mode
    };

    struct EspritResult
    {
        double phase = 0.0;      // arg(Phi) in (-pi, pi]
        double eig_ratio = 0.0;  // dominant / sum of remaining eigenvalues (inf for rank 1)
    };

    // Covariance over snapshots, dominant eigenvector via Hermitian EVD, Phi = q1^+ q2
    EspritResult esprit_phase_step(const std::vector<arma::cx_mat> &snapshots, EspritAxis axis);

    // Single snapshot: the dominant eigenvector of x x^H is x / |x|, so Phi reduces to x1^H x2
    double esprit_phase_step(const arma::cx_mat &Xt, EspritAxis axis);

    struct AmbiguityResult
    {
        double distance = 0.0;
        long wraps = 0;
    };

    // Unique r = phase/dk + j 2pi/dk inside [lo, hi]
    AmbiguityResult resolve_distance_ambiguity(double phase_step, double dk, const DistancePrior &prior);

    struct ElevationCandidate
    {
        double alpha = 0.0;
        int pair = 0; // u * P~ + p
    };

    struct ElevationRoots
    {
        std::vector<ElevationCandidate> candidates;
        std::vector<int> empty_pairs; // (l,k) pairs without any root
        int pair_count = 0;
    };

    // Precomputed Bessel-product tables over the search grid for one configuration
    class ElevationSolver
    {
    public:
        ElevationSolver(const LinkModel &link, const ModeSet &modes, const CarrierGrid &grid, const ElevationSearchSpec &spec);

        // delta(l,k) = |x'| / |sigma(r_hat)| * sign
        ElevationRoots solve(const arma::cx_mat &X, const arma::cx_mat &pilots, double r_hat, const arma::mat &sign_pattern) const;

        const arma::vec &alpha_grid() const { return grid_alpha_; }
        const arma::cube &table() const { return table_; } // U~ x P~ x grid

    private:
        LinkModel link_;
        ModeSet modes_;
        CarrierGrid grid_;
        ElevationSearchSpec spec_;
        arma::vec grid_alpha_;
        arma::cube table_;
    };

    enum class ClusterStatus
    {
        exact,   // max-count bin holds one candidate per (l,k)
        relaxed, // fallback bin with >= relax_fraction of the pairs
        weak     // fallback bin below the relaxed threshold
    };

    struct ClusterResult
    {
        double alpha = 0.0;
        ClusterStatus status = ClusterStatus::exact;
        int intervals = 0;        // D at termination
        double lo = 0.0, hi = 0.0; // winning interval
        int members = 0;          // distinct (l,k) pairs averaged
    };

    ClusterResult cluster_and_average(const ElevationRoots &roots, const ElevationSearchSpec &spec);

    struct HypothesisScore
    {
        double alpha_seed = 0.0; // grid elevation that induced the pattern
        double fit = 0.0;        // |a^H x~|^2 / (U~ P~)^2
        double eig_ratio = 0.0;
        double phase_r = 0.0, phase_gamma = 0.0;
    };

    struct PoseEstimate
    {
        double r_hat = 0.0, gamma_hat = 0.0, alpha_hat = 0.0, phi_hat = 0.0;

        // diagnostics
        std::vector<HypothesisScore> hypotheses;
        int chosen_hypothesis = -1;
        long ambiguity_wraps = 0;
        ElevationRoots roots;
        ClusterResult cluster;

        LinkPose pose() const { return LinkPose{r_hat, phi_hat, alpha_hat}; }
    };

    struct EstimatorConfig
    {
        LinkModel link;
        ModeSet modes;
        CarrierGrid grid;
        ElevationSearchSpec search;
        DistancePrior prior;
        int hypothesis_grid = 600; // elevations sampled to enumerate sign patterns
    };

    // Reusable estimator; tables and sign patterns built once, estimate() is const and thread safe
    class PoseEstimator
    {
    public:
        explicit PoseEstimator(const EstimatorConfig &cfg);

        PoseEstimate estimate(const CombinedTrainingSignals &x) const;
        const std::vector<arma::mat> &sign_patterns() const { return patterns_; }
        const EstimatorConfig &config() const { return cfg_; }

    private:
        EstimatorConfig cfg_;
        ElevationSolver solver_;
        std::vector<arma::mat> patterns_;
        std::vector<double> pattern_seed_;
    };

    // Frame-level convenience: combine, then estimate
    PoseEstimate estimate_pose(const std::vector<arma::cx_mat> &received, const arma::cx_mat &pilots, const EstimatorConfig &cfg);

    // Structured text report of a PoseEstimate
    std::string diagnostics_report(const PoseEstimate &est, const EstimatorConfig &cfg);
}

#endif
