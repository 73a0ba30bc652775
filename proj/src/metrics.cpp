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

#include "oamlink/metrics.hpp"
#include "oamlink/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace oam
{
    Qam::Qam(int order) : M_(order)
    {
        if (order != 4 && order != 16 && order != 64)
            throw argument_error("QAM order must be 4, 16 or 64");
        b_ = order == 4 ? 2 : order == 16 ? 4 : 6;
        m_ = 1 << (b_ / 2);
        scale_ = 1.0 / std::sqrt(2.0 * (order - 1) / 3.0);
        gray_.resize(m_);
        level_of_gray_.resize(m_);
        for (int i = 0; i < m_; ++i)
        {
            gray_[i] = unsigned(i ^ (i >> 1));
            level_of_gray_[gray_[i]] = unsigned(i);
        }
        pts_.resize(order);
        const unsigned half = unsigned(b_ / 2), mask = unsigned(m_ - 1);
        for (unsigned label = 0; label < unsigned(order); ++label)
        {
            const int iI = (int)level_of_gray_[label >> half], iQ = (int)level_of_gray_[label & mask];
            pts_[label] = scale_ * cx(2.0 * iI - (m_ - 1), 2.0 * iQ - (m_ - 1));
        }
    }

    unsigned Qam::decide(cx y) const
    {
        auto level = [&](double v) {
            const double t = std::round((v / scale_ + (m_ - 1)) / 2.0);
            return (int)std::clamp(t, 0.0, double(m_ - 1));
        };
        return (gray_[level(y.real())] << (b_ / 2)) | gray_[level(y.imag())];
    }

    arma::cx_vec Qam::modulate(const std::vector<uint8_t> &bits) const
    {
        if (bits.size() % b_ != 0)
            throw argument_error("bit count must be a multiple of log2(M)");
        arma::cx_vec s(bits.size() / b_);
        for (size_t i = 0; i < s.n_elem; ++i)
        {
            unsigned label = 0;
            for (int j = 0; j < b_; ++j)
                label = (label << 1) | (bits[i * b_ + j] & 1u);
            s(i) = pts_[label];
        }
        return s;
    }

    std::vector<uint8_t> Qam::demodulate(const arma::cx_vec &symbols) const
    {
        std::vector<uint8_t> bits(symbols.n_elem * b_);
        for (size_t i = 0; i < symbols.n_elem; ++i)
        {
            const unsigned label = decide(symbols(i));
            for (int j = 0; j < b_; ++j)
                bits[i * b_ + j] = uint8_t((label >> (b_ - 1 - j)) & 1u);
        }
        return bits;
    }

    void OverheadModel::validate() const
    {
        if (!(Tc > 0.0) || Tp < 0.0 || P < 1 || P_train < 0)
            throw config_error("overhead model needs T_c > 0, T_p >= 0, P >= 1, P~ >= 0");
        if (Tp * P_train > Tc * P)
            throw config_error("training overhead T_p P~ exceeds the coherence budget T_c P");
    }

    double OverheadModel::factor() const
    {
        validate();
        return 1.0 - Tp * P_train / (Tc * P);
    }

    arma::vec sinr_uca(const arma::cx_mat &Heff, const arma::cx_vec &zeta, const arma::vec &symbol_power, double noise_var)
    {
        const arma::uword U = zeta.n_elem;
        if (Heff.n_rows != U || Heff.n_cols != U || symbol_power.n_elem != U)
            throw argument_error("SINR inputs must share the mode count");
        arma::vec out(U);
        for (arma::uword u = 0; u < U; ++u)
        {
            double den = std::norm(Heff(u, u) - zeta(u)) * symbol_power(u) + noise_var;
            for (arma::uword v = 0; v < U; ++v)
                if (v != u)
                    den += std::norm(Heff(u, v)) * symbol_power(v);
            const double num = std::norm(zeta(u)) * symbol_power(u);
            out(u) = den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
        }
        return out;
    }

    arma::vec sinr_ucca(const arma::cx_mat &Heff, const arma::cx_mat &gamma_inv, const arma::cx_mat &front_end,
                        const arma::vec &symbol_power, double noise_var)
    {
        const arma::uword K = Heff.n_rows;
        if (Heff.n_cols != K || gamma_inv.n_rows != K || gamma_inv.n_cols != K || front_end.n_rows != K ||
            symbol_power.n_elem != K)
            throw argument_error("UCCA SINR inputs have inconsistent sizes");
        const arma::cx_mat E = gamma_inv * Heff - arma::eye<arma::cx_mat>(K, K);
        const arma::cx_mat D = gamma_inv * front_end;
        arma::vec out(K);
        for (arma::uword q = 0; q < K; ++q)
        {
            double ri = 0.0;
            for (arma::uword v = 0; v < K; ++v)
                ri += std::norm(E(q, v)) * symbol_power(v);
            const double rz = noise_var * std::real(arma::cdot(D.row(q).t(), D.row(q).t()));
            const double den = ri + rz;
            out(q) = den > 0.0 ? symbol_power(q) / den : std::numeric_limits<double>::infinity();
        }
        return out;
    }

    static double capped_log(double s, double cap)
    {
        return std::log2(1.0 + std::min(s, cap));
    }

    double spectral_efficiency(const arma::mat &sinr, const OverheadModel &ovh, double cap_db)
    {
        if (sinr.n_cols < 1)
            throw argument_error("empty SINR table");
        const double cap = db2lin(cap_db);
        double acc = 0.0;
        for (double s : sinr)
            acc += capped_log(s, cap);
        return ovh.factor() * acc / double(sinr.n_cols);
    }

    double spectral_efficiency_ucca(const arma::mat &sinr, int rings, const OverheadModel &ovh, double cap_db)
    {
        if (rings < 1 || sinr.n_rows % rings != 0 || sinr.n_cols < 1)
            throw argument_error("UCCA SINR table rows must be a multiple of the ring count");
        const double cap = db2lin(cap_db);
        const arma::uword U = sinr.n_rows / rings;
        double first = 0.0, rest = 0.0;
        for (arma::uword p = 0; p < sinr.n_cols; ++p)
            for (arma::uword q = 0; q < sinr.n_rows; ++q)
                (q < U ? first : rest) += capped_log(sinr(q, p), cap);
        return (ovh.factor() * first + rest) / double(sinr.n_cols);
    }

    double mimo_capacity(const arma::cx_mat &H, double per_antenna_power, double noise_var)
    {
        if (!(noise_var > 0.0))
            throw argument_error("noise variance must be positive");
        const arma::vec ev = arma::eig_sym(arma::cx_mat(H * H.t()));
        double c = 0.0;
        for (double l : ev)
            c += std::log2(1.0 + per_antenna_power / noise_var * std::max(l, 0.0));
        return c;
    }

    double nmse(const std::vector<double> &estimates, double truth)
    {
        return nmse(estimates, std::vector<double>(estimates.size(), truth));
    }

    double nmse(const std::vector<double> &estimates, const std::vector<double> &truth)
    {
        if (estimates.empty() || estimates.size() != truth.size())
            throw argument_error("nmse needs equally sized, non-empty inputs");
        double acc = 0.0;
        for (size_t i = 0; i < estimates.size(); ++i)
        {
            if (truth[i] == 0.0)
                throw argument_error("nmse undefined for zero truth");
            const double e = (estimates[i] - truth[i]) / truth[i];
            acc += e * e;
        }
        return acc / double(estimates.size());
    }

    Interval binomial_ci95(uint64_t errors, uint64_t trials)
    {
        if (trials == 0)
            return {0.0, 1.0};
        const double z = 1.959963984540054, n = double(trials), p = double(errors) / n;
        const double den = 1.0 + z * z / n;
        const double c = (p + z * z / (2.0 * n)) / den;
        const double h = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / den;
        return {errors == 0 ? 0.0 : std::max(0.0, c - h), errors == trials ? 1.0 : std::min(1.0, c + h)};
    }

    Interval mean_ci95(const std::vector<double> &x)
    {
        if (x.empty())
            return {std::nan(""), std::nan("")};
        double m = 0.0;
        for (double v : x)
            m += v;
        m /= double(x.size());
        if (x.size() < 2)
            return {m, m};
        double s = 0.0;
        for (double v : x)
            s += (v - m) * (v - m);
        const double se = std::sqrt(s / double(x.size() - 1) / double(x.size()));
        return {m - 1.959963984540054 * se, m + 1.959963984540054 * se};
    }

    BerResult ber_from_counts(uint64_t errors, uint64_t bits)
    {
        BerResult r;
        r.errors = errors;
        r.bits = bits;
        r.ber = bits ? double(errors) / double(bits) : 0.0;
        r.ci = binomial_ci95(errors, bits);
        return r;
    }

    std::mt19937_64 trial_rng(uint64_t master_seed, uint64_t stream, uint64_t trial)
    {
        std::seed_seq seq{uint32_t(master_seed), uint32_t(master_seed >> 32), uint32_t(stream), uint32_t(stream >> 32),
                          uint32_t(trial), uint32_t(trial >> 32)};
        return std::mt19937_64(seq);
    }

    cx complex_gaussian(double var, std::mt19937_64 &rng)
    {
        std::normal_distribution<double> n(0.0, std::sqrt(0.5 * var));
        const double re = n(rng);
        const double im = n(rng);
        return {re, im};
    }

    void add_awgn(arma::cx_mat &Y, double var, std::mt19937_64 &rng)
    {
        std::normal_distribution<double> n(0.0, std::sqrt(0.5 * var));
        for (auto &y : Y)
        {
            const double re = n(rng);
            const double im = n(rng);
            y += cx(re, im);
        }
    }

    void parallel_for(size_t count, unsigned workers, const std::function<void(size_t)> &fn)
    {
        if (workers == 0)
            workers = std::max(1u, std::thread::hardware_concurrency());
        workers = (unsigned)std::min<size_t>(workers, std::max<size_t>(count, 1));
        if (workers <= 1)
        {
            for (size_t i = 0; i < count; ++i)
                fn(i);
            return;
        }
        std::atomic<size_t> next{0};
        std::exception_ptr first;
        std::mutex mu;
        auto body = [&] {
            for (;;)
            {
                const size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lk(mu);
                    if (!first)
                        first = std::current_exception();
                    next.store(count);
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(body);
        for (auto &t : pool)
            t.join();
        if (first)
            std::rethrow_exception(first);
    }

    BerResult ber_monte_carlo(const BerTrial &trial, size_t trials, uint64_t master_seed, uint64_t stream, unsigned workers)
    {
        if (trials < 1)
            throw argument_error("at least one trial required");
        std::vector<TrialCount> counts(trials);
        parallel_for(trials, workers, [&](size_t t) {
            auto rng = trial_rng(master_seed, stream, t);
            counts[t] = trial(rng, t);
        });
        uint64_t e = 0, b = 0;
        for (const auto &c : counts)
            e += c.errors, b += c.bits;
        return ber_from_counts(e, b);
    }
}
