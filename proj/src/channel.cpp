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

#include "oamlink/channel.hpp"
#include "oamlink/csv.hpp"
#include "oamlink/errors.hpp"
#include "oamlink/synthesis.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>

namespace oam
{
    CarrierGrid CarrierGrid::uniform_grid(double k0, double dk, int count)
    {
        if (count < 1 || !(dk > 0.0))
            throw argument_error("uniform carrier grid needs count >= 1 and dk > 0");
        CarrierGrid g;
        for (int p = 0; p < count; ++p)
            g.k.push_back(k0 + dk * p);
        g.uniform = true;
        g.dk = dk;
        return g;
    }

    void CarrierGrid::validate() const
    {
        if (k.empty())
            throw argument_error("carrier grid is empty");
        for (size_t p = 0; p < k.size(); ++p)
        {
            if (!(k[p] > 0.0))
                throw argument_error("wavenumbers must be positive");
            if (p > 0 && !(k[p] > k[p - 1]))
                throw argument_error("wavenumbers must be strictly increasing");
            if (p > 0 && uniform && std::abs(k[p] - k[p - 1] - dk) > 1e-9 * std::max(1.0, dk))
                throw argument_error("grid declared uniform but spacing differs from dk");
        }
    }

    ModeSet ModeSet::contiguous(int lo, int count)
    {
        if (count < 1)
            throw argument_error("mode count must be >= 1");
        ModeSet s;
        for (int u = 0; u < count; ++u)
            s.modes.push_back(lo + u);
        s.uniform = true;
        s.dl = 1;
        return s;
    }

    ModeSet ModeSet::centered(int count)
    {
        return contiguous(-(count / 2), count);
    }

    void ModeSet::validate(int element_count) const
    {
        if (modes.empty())
            throw argument_error("mode set is empty");
        for (size_t u = 0; u < modes.size(); ++u)
        {
            if (2 * std::abs(modes[u]) >= element_count)
                throw argument_error("mode " + std::to_string(modes[u]) + " violates |l| < N/2 for N = " +
                                     std::to_string(element_count));
            if (u > 0 && modes[u] <= modes[u - 1])
                throw argument_error("modes must be strictly increasing");
            if (u > 0 && uniform && modes[u] - modes[u - 1] != dl)
                throw argument_error("mode set declared uniform but spacing differs from dl");
        }
    }

    cx coeff(double k, double d, cx beta)
    {
        if (!(k > 0.0) || !(d > 0.0))
            throw argument_error("coeff requires k > 0 and d > 0");
        return beta / (2.0 * k * d) * std::exp(cx(0.0, -k * d));
    }

    arma::cx_mat build_channel(double k, const LinkPose &pose, const ArrayConfig &tx, const ArrayConfig &rx, cx beta,
                               ChannelModel model, const FarFieldGuard &guard)
    {
        tx.validate();
        rx.validate();
        pose.validate();
        arma::cx_mat H(rx.element_count, tx.element_count);
        if (model == ChannelModel::exact)
        {
            arma::mat D = distance_matrix(pose, tx, rx, false);
            for (arma::uword i = 0; i < D.n_elem; ++i)
                H(i) = coeff(k, D(i), beta);
        }
        else
        {
            arma::mat D = distance_matrix(pose, tx, rx, true, guard);
            const double amp = std::abs(beta) / (2.0 * k * pose.distance);
            const double ph0 = std::arg(beta);
            for (arma::uword i = 0; i < D.n_elem; ++i)
                H(i) = std::polar(amp, ph0 - k * D(i));
        }
        return H;
    }

    arma::cx_mat build_ucca_channel(double k, const LinkPose &pose, const UccaConfig &tx, const UccaConfig &rx, cx beta,
                                    ChannelModel model)
    {
        tx.validate();
        rx.validate();
        if (tx.ring_count() != rx.ring_count())
            throw config_error("UCCA ring counts differ between transmitter and receiver");
        if (tx.element_count() != rx.element_count())
            throw config_error("UCCA element counts differ between transmitter and receiver");
        const int R = tx.ring_count(), N = tx.element_count();
        arma::cx_mat Hb(R * N, R * N);
        for (int m = 0; m < R; ++m)
            for (int n = 0; n < R; ++n)
                Hb.submat(m * N, n * N, m * N + N - 1, n * N + N - 1) = build_channel(k, pose, tx.rings[n], rx.rings[m], beta, model);
        return Hb;
    }

    arma::cx_vec steering_vector(const LinkPose &pose_est, const ArrayConfig &rx, double k)
    {
        arma::cx_vec b(rx.element_count);
        const double sa = std::sin(pose_est.elevation), sz = std::sin(pose_est.azimuth), cz = std::cos(pose_est.azimuth);
        for (int m = 1; m <= rx.element_count; ++m)
        {
            const double th = element_angle(rx, m);
            const double W = k * rx.radius * (std::sin(th) * sz * sa - std::cos(th) * cz * sa);
            b(m - 1) = std::exp(cx(0.0, W));
        }
        return b;
    }

    arma::cx_mat effective_oam_channel(const arma::cx_mat &H, const ModeSet &tx_modes, const ModeSet &rx_modes,
                                       const std::optional<arma::cx_vec> &steering)
    {
        const int N = (int)H.n_rows;
        if ((int)H.n_cols != N)
            throw argument_error("channel matrix must be square");
        if ((int)tx_modes.size() > N || (int)rx_modes.size() > N)
            throw argument_error("more modes than elements");
        arma::cx_mat Fr = dft_mode_matrix(N, rx_modes);
        arma::cx_mat Ft = dft_mode_matrix(N, tx_modes);
        if (steering)
        {
            if ((int)steering->n_elem != N)
                throw argument_error("steering vector length differs from element count");
            Fr.each_row() %= steering->st();
        }
        return Fr * H * Ft.t();
    }

    arma::cx_mat effective_ucca_channel(const arma::cx_mat &Hbar, int ring_count, const ModeSet &modes,
                                        const std::vector<arma::cx_vec> &steering)
    {
        if (ring_count < 1 || Hbar.n_rows % ring_count != 0 || Hbar.n_rows != Hbar.n_cols)
            throw argument_error("block channel size is not a multiple of the ring count");
        if (!steering.empty() && (int)steering.size() != ring_count)
            throw argument_error("one steering vector per receive ring required");
        const int N = (int)Hbar.n_rows / ring_count, U = (int)modes.size();
        const arma::cx_mat F = dft_mode_matrix(N, modes);
        arma::cx_mat Fr(ring_count * U, ring_count * N, arma::fill::zeros), Ft(ring_count * U, ring_count * N, arma::fill::zeros);
        for (int m = 0; m < ring_count; ++m)
        {
            arma::cx_mat Fm = F;
            if (!steering.empty())
            {
                if ((int)steering[m].n_elem != N)
                    throw argument_error("steering vector length differs from element count");
                Fm.each_row() %= steering[m].st();
            }
            Fr.submat(m * U, m * N, m * U + U - 1, m * N + N - 1) = Fm;
            Ft.submat(m * U, m * N, m * U + U - 1, m * N + N - 1) = F;
        }
        return Fr * Hbar * Ft.t();
    }

    cx i_pow(int n)
    {
        static const cx lut[4] = {cx(1, 0), cx(0, 1), cx(-1, 0), cx(0, -1)};
        return lut[((n % 4) + 4) % 4];
    }

    int mode_order(int l, int N)
    {
        const int a = std::abs(l);
        return std::min(a, N - a);
    }

    static double taylor_factor(int tau, double S, int N)
    {
        double v = double(N) * double(N);
        for (int j = 1; j <= tau; ++j)
            v *= S / (2.0 * j);
        return v;
    }

    cx diagonal_gain_closed_form(int l, double k, double r, double Rt, double Rr, int N, cx beta)
    {
        const int tau = mode_order(l, N);
        const double S = k * Rt * Rr / r;
        const cx eta = beta / (2.0 * k * r * N) * std::exp(cx(0.0, -k * r));
        return eta * taylor_factor(tau, S, N) * i_pow(tau);
    }

    cx diagonal_gain_geometric(int l, double k, const LinkPose &pose, double Rt, double Rr, int N, cx beta)
    {
        const double r = pose.distance;
        const int tau = mode_order(l, N);
        const double S = k * Rt * Rr / r;
        const double rf = std::sqrt(r * r + Rt * Rt + Rr * Rr);
        const cx eta = beta / (2.0 * k * r * N) * std::exp(cx(0.0, -k * rf));
        return eta * taylor_factor(tau, S, N) * i_pow(tau) * std::exp(cx(0.0, l * pose.azimuth));
    }

    std::vector<std::string> export_channel_csv(const std::string &dir, const std::string &prefix,
                                                const std::vector<arma::cx_mat> &H)
    {
        std::filesystem::create_directories(dir);
        std::vector<std::string> paths;
        for (size_t p = 0; p < H.size(); ++p)
        {
            CsvTable t({"row", "col", "re", "im"});
            for (arma::uword i = 0; i < H[p].n_rows; ++i)
                for (arma::uword j = 0; j < H[p].n_cols; ++j)
                    t.add_row({std::to_string(i + 1), std::to_string(j + 1), csv_number(H[p](i, j).real()),
                               csv_number(H[p](i, j).imag())});
            std::string path = (std::filesystem::path(dir) / (prefix + "_k" + std::to_string(p + 1) + ".csv")).string();
            t.write(path);
            paths.push_back(path);
        }
        return paths;
    }
}
