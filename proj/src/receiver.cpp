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

#include "oamlink/receiver.hpp"
#include "oamlink/errors.hpp"
#include "oamlink/synthesis.hpp"

#include <cmath>
#include <sstream>

namespace oam
{
    static cx checked(cx z, int l, double k)
    {
        if (!(std::abs(z) > 1e-300) || !std::isfinite(std::abs(z)))
        {
            std::ostringstream o;
            o << "diagonal gain underflow for mode " << l << " at k = " << k;
            throw conditioning_error(o.str());
        }
        return z;
    }

    arma::cx_vec amplitude_matrix(const LinkPose &pose_est, const ModeSet &modes, double k, const ArrayConfig &tx,
                                  const ArrayConfig &rx, cx beta, GainModel model)
    {
        if (!(pose_est.distance > 0.0))
            throw argument_error("estimated distance must be positive");
        if (tx.element_count != rx.element_count)
            throw config_error("transmit and receive element counts differ");
        const int N = tx.element_count;
        modes.validate(N);
        arma::cx_vec z(modes.size());
        if (model == GainModel::exact)
        {
            const arma::cx_mat H = build_channel(k, pose_est, tx, rx, beta, ChannelModel::exact);
            const arma::cx_mat He = effective_oam_channel(H, modes, modes, steering_vector(pose_est, rx, k));
            for (size_t u = 0; u < modes.size(); ++u)
                z(u) = checked(He(u, u), modes.modes[u], k);
            return z;
        }
        for (size_t u = 0; u < modes.size(); ++u)
        {
            const int l = modes.modes[u];
            const cx g = model == GainModel::closed_form
                             ? diagonal_gain_closed_form(l, k, pose_est.distance, tx.radius, rx.radius, N, beta)
                             : diagonal_gain_geometric(l, k, pose_est, tx.radius, rx.radius, N, beta);
            z(u) = checked(g, l, k);
        }
        return z;
    }

    arma::cx_mat DetectionSet::front_end(size_t p) const
    {
        arma::cx_mat A = F;
        A.each_row() %= steering.at(p).st();
        return A;
    }

    DetectionSet detection_set(const LinkPose &pose_est, const ModeSet &modes, const CarrierGrid &grid,
                               const ArrayConfig &tx, const ArrayConfig &rx, cx beta, GainModel model)
    {
        grid.validate();
        DetectionSet d;
        d.modes = modes;
        d.grid = grid;
        d.F = dft_mode_matrix(rx.element_count, modes);
        for (double k : grid.k)
        {
            d.steering.push_back(steering_vector(pose_est, rx, k));
            d.gamma.push_back(amplitude_matrix(pose_est, modes, k, tx, rx, beta, model));
        }
        return d;
    }

    arma::cx_mat detect(const arma::cx_mat &Y, const DetectionSet &det, size_t p)
    {
        if (p >= det.grid.size() || Y.n_rows != det.F.n_cols)
            throw argument_error("received block does not match the detection set");
        arma::cx_mat X = det.front_end(p) * Y;
        X.each_col() /= det.gamma[p];
        return X;
    }

    arma::cx_mat detect(const std::vector<arma::cx_vec> &received, const DetectionSet &det)
    {
        if (received.size() != det.grid.size())
            throw argument_error("one received vector per subcarrier required");
        arma::cx_mat X(det.modes.size(), received.size());
        for (size_t p = 0; p < received.size(); ++p)
            X.col(p) = detect(arma::cx_mat(received[p]), det, p);
        return X;
    }

    arma::cx_mat UccaDetectionSet::front_end(size_t p) const
    {
        const arma::uword U = F.n_rows, N = F.n_cols;
        arma::cx_mat A(rings * U, rings * N, arma::fill::zeros);
        for (int m = 0; m < rings; ++m)
        {
            arma::cx_mat Fm = F;
            Fm.each_row() %= steering.at(p).at(m).st();
            A.submat(m * U, m * N, m * U + U - 1, m * N + N - 1) = Fm;
        }
        return A;
    }

    UccaDetectionSet ucca_detection_set(const LinkPose &pose_est, const UccaConfig &tx, const UccaConfig &rx,
                                        const ModeSet &modes, const CarrierGrid &grid, cx beta, GainModel model,
                                        double max_condition)
    {
        tx.validate();
        rx.validate();
        grid.validate();
        if (tx.ring_count() != rx.ring_count() || tx.element_count() != rx.element_count())
            throw config_error("UCCA ring layouts differ between transmitter and receiver");
        if (!(pose_est.distance > 0.0))
            throw argument_error("estimated distance must be positive");
        const int R = tx.ring_count(), N = tx.element_count(), U = (int)modes.size();
        modes.validate(N);

        UccaDetectionSet d;
        d.modes = modes;
        d.grid = grid;
        d.rings = R;
        d.F = dft_mode_matrix(N, modes);
        for (double k : grid.k)
        {
            std::vector<arma::cx_vec> st;
            for (int m = 0; m < R; ++m)
                st.push_back(steering_vector(pose_est, rx.rings[m], k));

            arma::cx_mat G(R * U, R * U, arma::fill::zeros);
            if (model == GainModel::exact)
            {
                const arma::cx_mat He = effective_ucca_channel(build_ucca_channel(k, pose_est, tx, rx, beta), R, modes, st);
                for (int m = 0; m < R; ++m)
                    for (int n = 0; n < R; ++n)
                        for (int u = 0; u < U; ++u)
                            G(m * U + u, n * U + u) = He(m * U + u, n * U + u);
            }
            else
            {
                for (int m = 0; m < R; ++m)
                    for (int n = 0; n < R; ++n)
                        for (int u = 0; u < U; ++u)
                        {
                            const int l = modes.modes[u];
                            const double Rt = tx.rings[n].radius, Rr = rx.rings[m].radius;
                            G(m * U + u, n * U + u) = model == GainModel::closed_form
                                                          ? diagonal_gain_closed_form(l, k, pose_est.distance, Rt, Rr, N, beta)
                                                          : diagonal_gain_geometric(l, k, pose_est, Rt, Rr, N, beta);
                        }
            }

            arma::cx_mat Gi(R * U, R * U, arma::fill::zeros);
            for (int u = 0; u < U; ++u)
            {
                arma::cx_mat g(R, R);
                for (int m = 0; m < R; ++m)
                    for (int n = 0; n < R; ++n)
                        g(m, n) = G(m * U + u, n * U + u);
                const double c = arma::cond(g);
                if (!(c <= max_condition))
                {
                    std::ostringstream o;
                    o << "ring gain matrix of mode " << modes.modes[u] << " at k = " << k << " has condition number " << c;
                    throw conditioning_error(o.str());
                }
                const arma::cx_mat gi = arma::inv(g);
                for (int m = 0; m < R; ++m)
                    for (int n = 0; n < R; ++n)
                        Gi(m * U + u, n * U + u) = gi(m, n);
            }
            d.steering.push_back(std::move(st));
            d.gamma.push_back(std::move(G));
            d.gamma_inv.push_back(std::move(Gi));
        }
        return d;
    }

    arma::cx_mat detect(const arma::cx_mat &Y, const UccaDetectionSet &det, size_t p)
    {
        if (p >= det.grid.size() || Y.n_rows != det.F.n_cols * det.rings)
            throw argument_error("received block does not match the UCCA detection set");
        return det.gamma_inv[p] * (det.front_end(p) * Y);
    }
}
