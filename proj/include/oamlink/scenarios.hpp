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

#ifndef OAMLINK_SCENARIOS_H
#define OAMLINK_SCENARIOS_H

#include "oamlink/estimator.hpp"
#include "oamlink/metrics.hpp"
#include "oamlink/receiver.hpp"
#include "oamlink/synthesis.hpp"

#include <optional>
#include <random>
#include <vector>

namespace oam
{
    // Where the training SNR is referenced
    enum class TrainingSnr
    {
        per_sample, // every combined sample x'(l,k) sees the configured SNR
        mean        // noise variance set against the mean sample power
    };

    // Training link driven by the far-field signal model
    struct EstimatorScenario
    {
        LinkPose truth;
        LinkModel link;
        ModeSet modes;
        CarrierGrid grid;
        ElevationSearchSpec search;
        DistancePrior prior;
        int hypothesis_grid = 600;
        TrainingSnr snr_reference = TrainingSnr::per_sample;

        EstimatorConfig config() const;
    };

    // Random unit-modulus QPSK pilots, U~ x P~
    arma::cx_mat qpsk_pilots(size_t modes, size_t subcarriers, std::mt19937_64 &rng);

    // Noisy combined training signals for one frame
    CombinedTrainingSignals noisy_training(const EstimatorScenario &sc, double snr_db, std::mt19937_64 &rng);

    // Per-trial estimates, NaN where the estimator raised
    struct EstimatorTrials
    {
        std::vector<double> r, gamma, alpha, phi;
        size_t failures = 0;
    };

    EstimatorTrials run_estimator_trials(const EstimatorScenario &sc, double snr_db, size_t trials, uint64_t seed,
                                         uint64_t stream, unsigned workers = 1);

    // Finite entries only
    std::vector<double> finite_values(const std::vector<double> &v);
    double median(std::vector<double> v);

    // End-to-end coded-free BER link: QAM on data modes, exact channel, AWGN per element, steering + amplitude detection
    struct BerScenario
    {
        ArrayConfig tx, rx;
        LinkPose truth;
        CarrierGrid grid;
        ModeSet modes;
        int qam_order = 16;
        GainModel gain = GainModel::closed_form;
        cx beta = 1.0;
        int symbols_per_trial = 64;                 // per (mode, subcarrier)
        std::optional<EstimatorScenario> training;  // absent: detection uses the true pose
    };

    // Noise variance per element so that mean received signal power / noise power equals the SNR
    double ber_noise_variance(const BerScenario &sc, double snr_db);

    struct BerPoint
    {
        BerResult ber;
        size_t estimator_failures = 0; // frames counted at BER 1/2
    };

    BerPoint run_ber_point(const BerScenario &sc, double snr_db, size_t trials, uint64_t seed, uint64_t stream,
                           unsigned workers = 1);

    // Spectral efficiency of a UCA (one ring) or UCCA link against an equal-power MIMO-OFDM baseline
    struct SeScenario
    {
        UccaConfig tx, rx;
        LinkPose truth;
        CarrierGrid grid;           // data subcarriers
        ModeSet modes;              // data modes, one stream per mode and ring
        GainModel gain = GainModel::closed_form;
        cx beta = 1.0;
        OverheadModel overhead;     // OAM training overhead
        double mimo_pilots = 0.0;   // baseline pilots per subcarrier (rings * N when zero)
        double cap_db = 30.0;
        std::optional<EstimatorScenario> training; // absent: true pose
    };

    struct SePoint
    {
        double se = 0.0;           // mean over trials
        Interval ci;
        double se_true_pose = 0.0; // detection built from the true pose
        double se_no_steering = 0.0; // amplitude detection at the true distance, no beam steering
        double se_mimo = 0.0;
        size_t estimator_failures = 0;
    };

    SePoint run_se_point(const SeScenario &sc, double snr_db, size_t trials, uint64_t seed, uint64_t stream,
                         unsigned workers = 1);

    // Per-mode SINR table for a detection pose; (rings U) x P
    arma::mat se_sinr_table(const SeScenario &sc, const LinkPose &detect_pose, double noise_var);
    double se_noise_variance(const SeScenario &sc, double snr_db);

    // Phase maps of single- and multi-mode beams
    struct PhaseMapResult
    {
        std::vector<int> modes;
        PhaseRaster raster;
        double winding = 0.0; // around the analysis circle, direct field evaluation
        ArmAnalysis arms;
    };

    std::vector<PhaseMapResult> run_phase_maps(const ArrayConfig &array, double k, const PlaneSpec &plane,
                                               const std::vector<std::vector<int>> &mode_sets, double analysis_radius);

    // First positive zero of J_n
    double bessel_first_zero(int n);
}

#endif
