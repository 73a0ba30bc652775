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

#ifndef OAMLINK_RECEIVER_H
#define OAMLINK_RECEIVER_H

#include "oamlink/channel.hpp"

#include <armadillo>
#include <vector>

namespace oam
{
    // How the per-mode diagonal gain zeta is obtained
    enum class GainModel
    {
        closed_form, // S = k R_t R_r / r_hat only
        geometric,   // closed form with Fresnel phase and in-plane rotation exp(i l phi_hat)
        exact        // diagonal of the exact steered effective channel at the estimated pose
    };

    // Per-mode zeta(l_u, k) for one subcarrier; throws conditioning_error naming the mode on underflow
    arma::cx_vec amplitude_matrix(const LinkPose &pose_est, const ModeSet &modes, double k, const ArrayConfig &tx,
                                  const ArrayConfig &rx, cx beta = 1.0, GainModel model = GainModel::closed_form);

    // Per-subcarrier steering, despiralization and diagonal gains for a UCA link
    struct DetectionSet
    {
        ModeSet modes;
        CarrierGrid grid;
        arma::cx_mat F;                     // U x N
        std::vector<arma::cx_vec> steering; // per subcarrier, N
        std::vector<arma::cx_vec> gamma;    // per subcarrier, U

        // (F_U . B) for subcarrier p, U x N with unit-norm orthogonal rows
        arma::cx_mat front_end(size_t p) const;
    };

    DetectionSet detection_set(const LinkPose &pose_est, const ModeSet &modes, const CarrierGrid &grid,
                               const ArrayConfig &tx, const ArrayConfig &rx, cx beta = 1.0,
                               GainModel model = GainModel::closed_form);

    // received: one N-vector per subcarrier; result is U x P, column p = Gamma^-1 (F . B) y_p
    arma::cx_mat detect(const std::vector<arma::cx_vec> &received, const DetectionSet &det);

    // Single subcarrier, several symbol vectors at once (columns of Y)
    arma::cx_mat detect(const arma::cx_mat &Y, const DetectionSet &det, size_t p);

    // UCCA: block steering, block gains and their per-mode inverses
    struct UccaDetectionSet
    {
        ModeSet modes;
        CarrierGrid grid;
        int rings = 0;
        arma::cx_mat F;                                   // U x N, shared by all rings
        std::vector<std::vector<arma::cx_vec>> steering;  // [p][ring]
        std::vector<arma::cx_mat> gamma;                  // per subcarrier, (rings U) x (rings U), index ring * U + u
        std::vector<arma::cx_mat> gamma_inv;

        // Block-diagonal diag(F . B_1, ..., F . B_rings), (rings U) x (rings N)
        arma::cx_mat front_end(size_t p) const;
    };

    // Per-mode rings x rings gain matrices are inverted separately; condition > max_condition raises
    UccaDetectionSet ucca_detection_set(const LinkPose &pose_est, const UccaConfig &tx, const UccaConfig &rx,
                                        const ModeSet &modes, const CarrierGrid &grid, cx beta = 1.0,
                                        GainModel model = GainModel::closed_form, double max_condition = 1e12);

    // Y: (rings N) x S received vectors at subcarrier p -> (rings U) x S
    arma::cx_mat detect(const arma::cx_mat &Y, const UccaDetectionSet &det, size_t p);
}

#endif
