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

#ifndef OAMLINK_CHANNEL_H
#define OAMLINK_CHANNEL_H

#include "oamlink/geometry.hpp"

#include <armadillo>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace oam
{
    using cx = std::complex<double>;

    // Subcarrier wavenumbers k_p in rad/m
    struct CarrierGrid
    {
        std::vector<double> k;
        bool uniform = false;
        double dk = 0.0;

        static CarrierGrid uniform_grid(double k0, double dk, int count);
        void validate() const;
        size_t size() const { return k.size(); }
    };

    // OAM mode numbers
    struct ModeSet
    {
        std::vector<int> modes;
        bool uniform = false;
        int dl = 0;

        // count consecutive modes starting at lo
        static ModeSet contiguous(int lo, int count);

        // count consecutive modes centred as -count/2 ... count-count/2-1
        static ModeSet centered(int count);

        // Throws when a mode violates |l| < N/2, order or spacing
        void validate(int element_count) const;
        size_t size() const { return modes.size(); }
    };

    // beta / (2 k d) * exp(-i k d)
    cx coeff(double k, double d, cx beta = 1.0);

    enum class ChannelModel
    {
        exact,
        farfield
    };

    // Element-domain channel, rows = receive elements
    arma::cx_mat build_channel(double k, const LinkPose &pose, const ArrayConfig &tx, const ArrayConfig &rx,
                               cx beta = 1.0, ChannelModel model = ChannelModel::exact, const FarFieldGuard &guard = {});

    // Block channel [H_{m,n}], block (m,n) from transmit ring n to receive ring m
    arma::cx_mat build_ucca_channel(double k, const LinkPose &pose, const UccaConfig &tx, const UccaConfig &rx,
                                    cx beta = 1.0, ChannelModel model = ChannelModel::exact);

    // Receive steering phases exp(i W_m), W_m = k R_r (sin th sin phi sin a - cos th cos phi sin a)
    arma::cx_vec steering_vector(const LinkPose &pose_est, const ArrayConfig &rx, double k);

    // F_rx diag(steering) H F_tx^H with unitary partial DFT matrices
    arma::cx_mat effective_oam_channel(const arma::cx_mat &H, const ModeSet &tx_modes, const ModeSet &rx_modes,
                                       const std::optional<arma::cx_vec> &steering = std::nullopt);

    // Block version: (I (x) F) diag(B_1..B_R) Hbar (I (x) F^H); block (m,n) is U x U
    arma::cx_mat effective_ucca_channel(const arma::cx_mat &Hbar, int ring_count, const ModeSet &modes,
                                        const std::vector<arma::cx_vec> &steering = {});

    // i^n by lookup
    cx i_pow(int n);

    // tau = min(|l|, N - |l|)
    int mode_order(int l, int N);

    // eta(k) N^2 / 2^tau * i^tau / tau! * S^tau, S = k R_t R_r / r, eta = beta / (2 k r N) exp(-i k r)
    cx diagonal_gain_closed_form(int l, double k, double r, double Rt, double Rr, int N, cx beta = 1.0);

    // Closed form with eta's phase taken at sqrt(r^2 + R_t^2 + R_r^2) and the in-plane factor exp(i l phi)
    cx diagonal_gain_geometric(int l, double k, const LinkPose &pose, double Rt, double Rr, int N, cx beta = 1.0);

    // One file per subcarrier: <dir>/<prefix>_k<p>.csv with columns row,col,re,im (1-based)
    std::vector<std::string> export_channel_csv(const std::string &dir, const std::string &prefix,
                                                const std::vector<arma::cx_mat> &H);
}

#endif
