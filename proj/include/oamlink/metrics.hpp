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

#ifndef OAMLINK_METRICS_H
#define OAMLINK_METRICS_H

#include "oamlink/channel.hpp"

#include <armadillo>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oam
{
    // Square Gray-mapped QAM with unit average energy (M = 4, 16, 64)
    class Qam
    {
    public:
        explicit Qam(int order);

        int order() const { return M_; }
        int bits_per_symbol() const { return b_; }
        const std::vector<cx> &points() const { return pts_; } // indexed by bit label

        // bits: 0/1 values, MSB first per symbol
        arma::cx_vec modulate(const std::vector<uint8_t> &bits) const;
        std::vector<uint8_t> demodulate(const arma::cx_vec &symbols) const;

        // Symbol labels and nearest-label decisions
        cx point(unsigned label) const { return pts_[label]; }
        unsigned decide(cx y) const;

    private:
        int M_, b_, m_; // m_ = sqrt(M)
        double scale_;
        std::vector<cx> pts_;
        std::vector<unsigned> gray_; // level index -> gray bits
        std::vector<unsigned> level_of_gray_;
    };

    // 10^(dB/10) and back
    inline double db2lin(double db) { return std::pow(10.0, db / 10.0); }
    inline double lin2db(double v) { return 10.0 * std::log10(v); }

    // Coherence length T_c and training length T_p in symbols; P data and P~ training subcarriers
    struct OverheadModel
    {
        double Tc = 256.0, Tp = 0.0;
        int P = 1, P_train = 1;

        void validate() const;
        double factor() const; // 1 - T_p P~ / (T_c P)
    };

    // Per-mode SINR at one subcarrier: |zeta|^2 E|s|^2 / (cross-mode leakage + residual self term + noise);
    // Heff is the steered effective channel (rows = receive modes), noise_var per despiralized mode
    arma::vec sinr_uca(const arma::cx_mat &Heff, const arma::cx_vec &zeta, const arma::vec &symbol_power, double noise_var);

    // UCCA SINR from R^I = (Gi H' - I) E[ss^H] (.)^H and R^z = D E[zz^H] D^H with D = Gi (front end);
    // entry kappa = ring * U + u
    arma::vec sinr_ucca(const arma::cx_mat &Heff, const arma::cx_mat &gamma_inv, const arma::cx_mat &front_end,
                        const arma::vec &symbol_power, double noise_var);

    // SINR table (U x P) -> bits/s/Hz; +inf and anything above cap_db is clipped to the cap
    double spectral_efficiency(const arma::mat &sinr, const OverheadModel &ovh, double cap_db = 30.0);

    // SINR table ((rings U) x P, row ring * U + u): ring 1 pays the training overhead, rings 2.. do not
    double spectral_efficiency_ucca(const arma::mat &sinr, int rings, const OverheadModel &ovh, double cap_db = 30.0);

    // Equal-power MIMO capacity log2 det(I + (p / sigma^2) H H^H) for one subcarrier
    double mimo_capacity(const arma::cx_mat &H, double per_antenna_power, double noise_var);

    // E{(x_hat - x)^2 / x^2}
    double nmse(const std::vector<double> &estimates, double truth);
    double nmse(const std::vector<double> &estimates, const std::vector<double> &truth);

    struct Interval
    {
        double lo = 0.0, hi = 0.0;
    };

    // Wilson score interval at 95 %
    Interval binomial_ci95(uint64_t errors, uint64_t trials);

    // mean +- 1.96 standard errors
    Interval mean_ci95(const std::vector<double> &samples);

    struct BerResult
    {
        uint64_t errors = 0, bits = 0;
        double ber = 0.0;
        Interval ci;
    };
    BerResult ber_from_counts(uint64_t errors, uint64_t bits);

    // Independent per-trial generator derived from (master seed, stream id, trial index)
    std::mt19937_64 trial_rng(uint64_t master_seed, uint64_t stream, uint64_t trial);

    // Circular complex Gaussian with total variance var
    void add_awgn(arma::cx_mat &Y, double var, std::mt19937_64 &rng);
    cx complex_gaussian(double var, std::mt19937_64 &rng);

    // Runs fn(i) for i in [0, count) on `workers` threads (0 = hardware concurrency); rethrows the first exception
    void parallel_for(size_t count, unsigned workers, const std::function<void(size_t)> &fn);

    // One Monte-Carlo trial returns (bit errors, bits)
    struct TrialCount
    {
        uint64_t errors = 0, bits = 0;
    };
    using BerTrial = std::function<TrialCount(std::mt19937_64 &rng, size_t trial)>;

    // Sums independent seeded trials; result is independent of the worker count
    BerResult ber_monte_carlo(const BerTrial &trial, size_t trials, uint64_t master_seed, uint64_t stream, unsigned workers = 1);
}

#endif
