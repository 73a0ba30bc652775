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

#include "oamlink/scenarios.hpp"
#include "oamlink/bessel.hpp"
#include "oamlink/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace oam
{
    EstimatorConfig EstimatorScenario::config() const
    {
        EstimatorConfig c;
        c.link = link;
        c.modes = modes;
        c.grid = grid;
        c.search = search;
        c.prior = prior;
        c.hypothesis_grid = hypothesis_grid;
        return c;
    }

    arma::cx_mat qpsk_pilots(size_t modes, size_t subcarriers, std::mt19937_64 &rng)
    {
        std::uniform_int_distribution<int> q(0, 3);
        arma::cx_mat S(modes, subcarriers);
        for (auto &s : S)
            s = std::polar(1.0, pi / 4.0 + q(rng) * pi / 2.0);
        return S;
    }

    CombinedTrainingSignals noisy_training(const EstimatorScenario &sc, double snr_db, std::mt19937_64 &rng)
    {
        const arma::cx_mat pilots = qpsk_pilots(sc.modes.size(), sc.grid.size(), rng);
        arma::cx_mat X = training_signal_model(sc.truth, sc.link, sc.modes, sc.grid, pilots);
        const double snr = db2lin(snr_db);
        const double mean_pow = arma::accu(arma::square(arma::abs(X))) / double(X.n_elem);
        for (auto &x : X)
        {
            const double var = (sc.snr_reference == TrainingSnr::per_sample ? std::norm(x) : mean_pow) / snr;
            x += complex_gaussian(var, rng);
        }
        return CombinedTrainingSignals{X, sc.modes, sc.grid, pilots};
    }

    EstimatorTrials run_estimator_trials(const EstimatorScenario &sc, double snr_db, size_t trials, uint64_t seed,
                                         uint64_t stream, unsigned workers)
    {
        const PoseEstimator est(sc.config());
        const double nan = std::numeric_limits<double>::quiet_NaN();
        EstimatorTrials out;
        out.r.assign(trials, nan);
        out.gamma.assign(trials, nan);
        out.alpha.assign(trials, nan);
        out.phi.assign(trials, nan);
        std::vector<char> failed(trials, 0);
        parallel_for(trials, workers, [&](size_t t) {
            auto rng = trial_rng(seed, stream, t);
            const auto x = noisy_training(sc, snr_db, rng);
            try
            {
                const PoseEstimate e = est.estimate(x);
                out.r[t] = e.r_hat;
                out.gamma[t] = e.gamma_hat;
                out.alpha[t] = e.alpha_hat;
                out.phi[t] = e.phi_hat;
            }
            catch (const estimation_error &)
            {
                failed[t] = 1;
            }
        });
        out.failures = (size_t)std::count(failed.begin(), failed.end(), 1);
        return out;
    }

    std::vector<double> finite_values(const std::vector<double> &v)
    {
        std::vector<double> o;
        for (double x : v)
            if (std::isfinite(x))
                o.push_back(x);
        return o;
    }

    double median(std::vector<double> v)
    {
        if (v.empty())
            return std::numeric_limits<double>::quiet_NaN();
        std::sort(v.begin(), v.end());
        const size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    }

    static std::vector<arma::cx_mat> tx_responses(const BerScenario &sc)
    {
        const arma::cx_mat F = dft_mode_matrix(sc.tx.element_count, sc.modes);
        std::vector<arma::cx_mat> A;
        for (double k : sc.grid.k)
            A.push_back(build_channel(k, sc.truth, sc.tx, sc.rx, sc.beta) * F.t());
        return A;
    }

    static double noise_from_responses(const std::vector<arma::cx_mat> &A, int rx_elements, double snr_db)
    {
        double p = 0.0;
        for (const auto &a : A)
            p += std::pow(arma::norm(a, "fro"), 2) / rx_elements;
        return p / double(A.size()) / db2lin(snr_db);
    }

    double ber_noise_variance(const BerScenario &sc, double snr_db)
    {
        return noise_from_responses(tx_responses(sc), sc.rx.element_count, snr_db);
    }

    BerPoint run_ber_point(const BerScenario &sc, double snr_db, size_t trials, uint64_t seed, uint64_t stream,
                           unsigned workers)
    {
        sc.grid.validate();
        sc.modes.validate(sc.tx.element_count);
        if (sc.symbols_per_trial < 1)
            throw argument_error("symbols per trial must be >= 1");
        const Qam qam(sc.qam_order);
        const auto A = tx_responses(sc);
        const double var = noise_from_responses(A, sc.rx.element_count, snr_db);
        std::optional<PoseEstimator> est;
        if (sc.training)
            est.emplace(sc.training->config());
        const size_t U = sc.modes.size(), P = sc.grid.size(), S = (size_t)sc.symbols_per_trial;
        const uint64_t bits_per_trial = uint64_t(U * P * S) * qam.bits_per_symbol();

        std::vector<TrialCount> counts(trials);
        std::vector<char> failed(trials, 0);
        parallel_for(trials, workers, [&](size_t t) {
            auto rng = trial_rng(seed, stream, t);
            LinkPose pose = sc.truth;
            if (est)
            {
                const auto x = noisy_training(*sc.training, snr_db, rng);
                try
                {
                    pose = est->estimate(x).pose();
                }
                catch (const estimation_error &)
                {
                    failed[t] = 1;
                    counts[t] = {bits_per_trial / 2, bits_per_trial};
                    return;
                }
            }
            const DetectionSet det = detection_set(pose, sc.modes, sc.grid, sc.tx, sc.rx, sc.beta, sc.gain);
            std::uniform_int_distribution<unsigned> lab(0, unsigned(qam.order() - 1));
            uint64_t errors = 0;
            for (size_t p = 0; p < P; ++p)
            {
                arma::umat L(U, S);
                arma::cx_mat Sx(U, S);
                for (arma::uword i = 0; i < L.n_elem; ++i)
                {
                    L(i) = lab(rng);
                    Sx(i) = qam.point((unsigned)L(i));
                }
                arma::cx_mat Y = A[p] * Sx;
                add_awgn(Y, var, rng);
                const arma::cx_mat X = detect(Y, det, p);
                for (arma::uword i = 0; i < X.n_elem; ++i)
                    errors += std::popcount(qam.decide(X(i)) ^ (unsigned)L(i));
            }
            counts[t] = {errors, bits_per_trial};
        });
        uint64_t e = 0, b = 0;
        for (const auto &c : counts)
            e += c.errors, b += c.bits;
        BerPoint out;
        out.ber = ber_from_counts(e, b);
        out.estimator_failures = (size_t)std::count(failed.begin(), failed.end(), 1);
        return out;
    }

    static std::vector<arma::cx_mat> ucca_channels(const SeScenario &sc)
    {
        std::vector<arma::cx_mat> H;
        for (double k : sc.grid.k)
            H.push_back(build_ucca_channel(k, sc.truth, sc.tx, sc.rx, sc.beta));
        return H;
    }

    static double isotropic_noise(const std::vector<arma::cx_mat> &H, double snr_db)
    {
        double p = 0.0;
        for (const auto &h : H)
        {
            const double n = double(h.n_cols);
            p += std::pow(arma::norm(h, "fro"), 2) / n / double(h.n_rows);
        }
        return p / double(H.size()) / db2lin(snr_db);
    }

    static arma::mat sinr_table(const SeScenario &sc, const std::vector<arma::cx_mat> &H, const LinkPose &pose,
                                double noise_var)
    {
        const int R = sc.tx.ring_count();
        const size_t U = sc.modes.size();
        const arma::vec ps(R * U, arma::fill::value(1.0 / double(R * U)));
        arma::mat out(R * U, sc.grid.size());
        for (size_t p = 0; p < sc.grid.size(); ++p)
        {
            const double k = sc.grid.k[p];
            std::vector<arma::cx_vec> st;
            for (int m = 0; m < R; ++m)
                st.push_back(steering_vector(pose, sc.rx.rings[m], k));
            const arma::cx_mat He = effective_ucca_channel(H[p], R, sc.modes, st);
            if (R == 1)
            {
                const arma::cx_vec z = amplitude_matrix(pose, sc.modes, k, sc.tx.rings[0], sc.rx.rings[0], sc.beta, sc.gain);
                out.col(p) = sinr_uca(He, z, ps, noise_var);
            }
            else
            {
                CarrierGrid one;
                one.k = {k};
                const UccaDetectionSet d = ucca_detection_set(pose, sc.tx, sc.rx, sc.modes, one, sc.beta, sc.gain);
                out.col(p) = sinr_ucca(He, d.gamma_inv[0], d.front_end(0), ps, noise_var);
            }
        }
        return out;
    }

    arma::mat se_sinr_table(const SeScenario &sc, const LinkPose &detect_pose, double noise_var)
    {
        return sinr_table(sc, ucca_channels(sc), detect_pose, noise_var);
    }

    double se_noise_variance(const SeScenario &sc, double snr_db)
    {
        return isotropic_noise(ucca_channels(sc), snr_db);
    }

    SePoint run_se_point(const SeScenario &sc, double snr_db, size_t trials, uint64_t seed, uint64_t stream,
                         unsigned workers)
    {
        sc.tx.validate();
        sc.rx.validate();
        sc.grid.validate();
        sc.modes.validate(sc.tx.element_count());
        const auto H = ucca_channels(sc);
        const double var = isotropic_noise(H, snr_db);
        const int R = sc.tx.ring_count(), N = sc.tx.element_count();

        SePoint out;
        out.se_true_pose = spectral_efficiency_ucca(sinr_table(sc, H, sc.truth, var), R, sc.overhead, sc.cap_db);
        const LinkPose unsteered{sc.truth.distance, 0.0, 0.0};
        out.se_no_steering = spectral_efficiency_ucca(sinr_table(sc, H, unsteered, var), R, sc.overhead, sc.cap_db);

        const double pilots = sc.mimo_pilots > 0.0 ? sc.mimo_pilots : double(R * N);
        double cm = 0.0;
        for (const auto &h : H)
            cm += mimo_capacity(h, 1.0 / double(R * N), var);
        out.se_mimo = (1.0 - pilots / sc.overhead.Tc) * cm / double(H.size());

        if (!sc.training)
        {
            out.se = out.se_true_pose;
            out.ci = {out.se, out.se};
            return out;
        }
        const PoseEstimator est(sc.training->config());
        // a frame whose pose estimate fails carries no data
        std::vector<double> se(trials, 0.0);
        std::vector<char> failed(trials, 0);
        parallel_for(trials, workers, [&](size_t t) {
            auto rng = trial_rng(seed, stream, t);
            const auto x = noisy_training(*sc.training, snr_db, rng);
            try
            {
                const LinkPose pose = est.estimate(x).pose();
                se[t] = spectral_efficiency_ucca(sinr_table(sc, H, pose, var), R, sc.overhead, sc.cap_db);
            }
            catch (const estimation_error &)
            {
                failed[t] = 1;
            }
        });
        out.estimator_failures = (size_t)std::count(failed.begin(), failed.end(), 1);
        out.ci = mean_ci95(se);
        out.se = 0.5 * (out.ci.lo + out.ci.hi);
        return out;
    }

    std::vector<PhaseMapResult> run_phase_maps(const ArrayConfig &array, double k, const PlaneSpec &plane,
                                               const std::vector<std::vector<int>> &mode_sets, double analysis_radius)
    {
        std::vector<PhaseMapResult> out;
        for (const auto &ms : mode_sets)
        {
            ModeSet m;
            m.modes = ms;
            const arma::cx_mat F = dft_mode_matrix(array.element_count, m);
            const arma::cx_vec feed = synthesize(arma::cx_vec(ms.size(), arma::fill::ones), F);
            PhaseMapResult r;
            r.modes = ms;
            r.raster = field_phase_map(array, feed, k, plane);
            r.winding = winding_number(array, feed, k, plane.distance, analysis_radius);
            r.arms = interference_arms(r.raster, analysis_radius);
            out.push_back(std::move(r));
        }
        return out;
    }

    double bessel_first_zero(int n)
    {
        n = std::abs(n);
        double a = 1e-3, fa = bessel_j(n, a);
        for (double b = a + 0.01; b < 100.0; b += 0.01)
        {
            const double fb = bessel_j(n, b);
            if ((fa > 0.0) != (fb > 0.0))
            {
                double lo = a, hi = b;
                for (int i = 0; i < 60; ++i)
                {
                    const double m = 0.5 * (lo + hi);
                    ((bessel_j(n, m) > 0.0) == (fa > 0.0) ? lo : hi) = m;
                }
                return 0.5 * (lo + hi);
            }
            a = b;
        }
        throw invariant_error("no Bessel zero below 100");
    }
}
