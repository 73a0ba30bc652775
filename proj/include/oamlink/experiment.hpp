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

#ifndef OAMLINK_EXPERIMENT_H
#define OAMLINK_EXPERIMENT_H

#include "oamlink/keyvalue.hpp"
#include "oamlink/scenarios.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace oam
{
    enum class Scenario
    {
        nmse,           // estimator accuracy sweep over SNR, U~ or P~
        estimate,       // one training frame, diagnostics report
        ber,            // BER curves: aligned baseline and estimated-pose detection
        se,             // spectral efficiency of UCA/UCCA OAM vs MIMO-OFDM
        phase_map,      // phase rasters of single- and multi-mode beams
        channel_export  // element-domain channel per subcarrier
    };

    enum class SweepVariable
    {
        snr,
        training_modes,
        training_subcarriers
    };

    struct ExperimentSpec
    {
        std::string source, name, output;
        Scenario scenario = Scenario::nmse;
        uint64_t seed = 1;
        size_t trials = 1;

        int elements = 0;
        double radius_tx = 0.0, radius_rx = 0.0;
        std::vector<double> ring_radii; // UCCA, inner to outer; empty for a single UCA
        LinkPose pose;

        CarrierGrid grid, training_grid;
        ModeSet modes, training_modes;

        double alpha_min = 0.0, alpha_max = 0.0, prior_half_width = 3.0;
        int hypothesis_grid = 600, grid_points = 2000;
        TrainingSnr training_snr = TrainingSnr::per_sample;

        std::vector<double> snr_db;
        SweepVariable sweep = SweepVariable::snr;
        std::vector<long> sweep_values;

        // ber
        int qam_order = 16;
        int symbols_per_trial = 64;
        GainModel gain = GainModel::closed_form;
        std::vector<long> data_mode_counts, training_mode_counts;
        bool include_true_pose = false;

        // se
        double coherence = 256.0, training_symbols = 0.0, mimo_pilots = 0.0, sinr_cap_db = 30.0;
        bool estimated_pose = true;

        // phase_map
        double frequency = 0.0, plane_distance = 0.0, plane_extent = 0.0, analysis_radius = 0.0;
        int resolution = 256;
        std::vector<std::vector<int>> mode_sets;

        // channel_export
        ChannelModel channel_model = ChannelModel::exact;

        ArrayConfig tx() const { return ArrayConfig{elements, radius_tx, 0.0}; }
        ArrayConfig rx() const { return ArrayConfig{elements, radius_rx, 0.0}; }
        UccaConfig ucca() const;
        EstimatorScenario estimator_scenario(const ArrayConfig &tx, const ArrayConfig &rx) const;
    };

    // Parse + invariant check; config_error names the offending field and line
    ExperimentSpec parse_experiment(const KeyValueSpec &kv);
    ExperimentSpec load_experiment(const std::string &path);

    // Derived quantities as "key = value" lines (gamma, overhead factor, main-lobe check, ...)
    std::vector<std::string> describe_experiment(const ExperimentSpec &spec);

    struct RunOptions
    {
        std::optional<uint64_t> seed; // overrides the spec seed
        unsigned workers = 1;
        std::string out_dir = ".";
        std::ostream *log = nullptr; // one summary line per sweep point
    };

    // Executes the scenario; returns the written files
    std::vector<std::string> run_experiment(const ExperimentSpec &spec, const RunOptions &opt);
}

#endif
