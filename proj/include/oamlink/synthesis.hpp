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

#ifndef OAMLINK_SYNTHESIS_H
#define OAMLINK_SYNTHESIS_H

#include "oamlink/channel.hpp"

#include <armadillo>
#include <string>
#include <vector>

namespace oam
{
    // U x N partial DFT, row u = exp(-i 2 pi l_u n / N) / sqrt(N), n = 0..N-1
    arma::cx_mat dft_mode_matrix(int N, const ModeSet &modes);

    // Element feeds F^H s
    arma::cx_vec synthesize(const arma::cx_vec &symbols, const arma::cx_mat &F);

    // Per-element amplitude/phase form sum_u exp(i l_u phi_n) s_u / sqrt(N)
    arma::cx_vec synthesize_analog(const arma::cx_vec &symbols, const ModeSet &modes, const ArrayConfig &array);

    // Ũ sequential single-mode slots per subcarrier
    struct TrainingFrame
    {
        ModeSet modes;
        CarrierGrid grid;
        arma::cx_mat pilots;              // U~ x P~, s'(l_u, k_p)
        std::vector<arma::cx_mat> feeds;  // per subcarrier, N x U~, column u = slot u feed
    };

    TrainingFrame training_sequence(int N, const ModeSet &modes, const CarrierGrid &grid, const arma::cx_mat &pilots);

    // Observation plane parallel to the array, centred on the boresight axis
    struct PlaneSpec
    {
        double distance = 0.1; // z of the plane, meters
        double extent = 0.2;   // full width of the square window, meters
        int resolution = 256;  // points per side
    };

    struct PhaseRaster
    {
        int width = 0, height = 0;
        double extent = 0.0, distance = 0.0;
        std::vector<double> phase;   // row-major, y from +extent/2 down to -extent/2
        std::vector<double> amplitude;
        std::vector<unsigned char> valid;

        double at(int row, int col) const { return phase[(size_t)row * width + col]; }
    };

    // Phase of sum_n feed_n exp(i k |p - r_n|) / |p - r_n| on the plane, isotropic elements
    PhaseRaster field_phase_map(const ArrayConfig &array, const arma::cx_vec &feed, double k, const PlaneSpec &plane);

    // Phase at an arbitrary point (same field sum)
    cx field_at(const ArrayConfig &array, const arma::cx_vec &feed, double k, double x, double y, double z);

    // Unwrapped phase accumulated around a boresight-centred circle, divided by 2 pi
    double winding_number(const ArrayConfig &array, const arma::cx_vec &feed, double k, double z, double radius,
                          int samples = 720);

    // Dominant angular harmonic |m| of the phase deviation from a mean helix on a circle sampled from the raster
    struct ArmAnalysis
    {
        int arms = 0;
        double dominant_power = 0.0, runner_up_power = 0.0;
        double mean_winding = 0.0;
    };
    ArmAnalysis interference_arms(const PhaseRaster &raster, double radius, int samples = 720, int max_harmonic = 12);

    // Writers: CSV grid of phase floats, 8-bit binary PGM ([-pi, pi) mapped to 0..255)
    void write_raster_csv(const PhaseRaster &raster, const std::string &path);
    void write_raster_pgm(const PhaseRaster &raster, const std::string &path);
}

#endif
