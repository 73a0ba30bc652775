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

#include "oamlink/estimator.hpp"
#include "oamlink/bessel.hpp"
#include "oamlink/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace oam
{
    void ElevationSearchSpec::validate() const
    {
        if (!(alpha_a < alpha_b))
            throw argument_error("elevation search needs alpha_a < alpha_b");
        if (initial_intervals < 2)
            throw argument_error("initial interval count must be >= 2");
        if (grid_points < 2)
            throw argument_error("elevation grid needs at least 2 points");
        if (!(tolerance > 0.0))
            throw argument_error("bisection tolerance must be positive");
        if (max_intervals < initial_intervals)
            throw argument_error("split budget below the initial interval count");
    }

    DistancePrior DistancePrior::around(double nominal, double half_width)
    {
        return DistancePrior{nominal - half_width, nominal + half_width};
    }

    CombinedTrainingSignals combine_training(const std::vector<arma::cx_mat> &received, const ModeSet &modes,
                                             const CarrierGrid &grid, const arma::cx_mat &pilots)
    {
        if (received.size() != grid.size())
            throw argument_error("one received block per training subcarrier required");
        CombinedTrainingSignals out;
        out.modes = modes;
        out.grid = grid;
        out.pilots = pilots;
        out.X.set_size(modes.size(), grid.size());
        for (size_t p = 0; p < received.size(); ++p)
        {
            if (received[p].n_cols != modes.size())
                throw argument_error("received block must hold one column per training slot");
            out.X.col(p) = arma::sum(received[p], 0).st();
        }
        return out;
    }

    double bessel_product(int l, double k, double alpha, double Rt, double Rr)
    {
        const double s = std::sin(alpha);
        return bessel_j(l, k * Rt * s) * bessel_j(0, k * Rr * s);
    }

    arma::cx_mat training_signal_model(const LinkPose &pose, const LinkModel &link, const ModeSet &modes,
                                       const CarrierGrid &grid, const arma::cx_mat &pilots)
    {
        const double r = pose.distance, g = tilt_angle(pose);
        const double N = link.tx.element_count;
        arma::cx_mat X(modes.size(), grid.size());
        for (size_t p = 0; p < grid.size(); ++p)
        {
            const double k = grid.k[p];
            for (size_t u = 0; u < modes.size(); ++u)
            {
                const int l = modes.modes[u];
                const cx sigma = link.beta * N * N / (2.0 * k * r) * pilots(u, p);
                X(u, p) = sigma * std::exp(cx(0.0, k * r + l * g)) * i_pow(-l) *
                          bessel_product(l, k, pose.elevation, link.tx.radius, link.rx.radius);
            }
        }
        return X;
    }

    arma::cx_mat normalize(const arma::cx_mat &X, const arma::cx_mat &pilots, const ModeSet &modes,
                           const arma::mat &sign_pattern, cx beta)
    {
        if (X.n_rows != modes.size() || pilots.n_rows != X.n_rows || pilots.n_cols != X.n_cols ||
            sign_pattern.n_rows != X.n_rows || sign_pattern.n_cols != X.n_cols)
            throw argument_error("normalize: dimension mismatch");
        const cx bph = std::conj(beta) / std::abs(beta);
        arma::cx_mat Xt(X.n_rows, X.n_cols);
        for (arma::uword p = 0; p < X.n_cols; ++p)
            for (arma::uword u = 0; u < X.n_rows; ++u)
            {
                const double a = std::abs(X(u, p));
                if (!(a > 0.0))
                    throw estimation_error("normalize", "degenerate signal: zero combined sample");
                Xt(u, p) = X(u, p) / a * std::conj(pilots(u, p)) / std::abs(pilots(u, p)) * bph *
                           i_pow(modes.modes[u]) * sign_pattern(u, p);
            }
        return Xt;
    }

    static arma::cx_vec stack(const arma::cx_mat &Xt, EspritAxis axis)
    {
        return axis == EspritAxis::subcarrier ? arma::cx_vec(arma::vectorise(Xt)) : arma::cx_vec(arma::vectorise(Xt.st()));
    }

    static arma::uword shift_of(const arma::cx_mat &Xt, EspritAxis axis)
    {
        return axis == EspritAxis::subcarrier ? Xt.n_rows : Xt.n_cols;
    }

    static void check_axis(const arma::cx_mat &Xt, EspritAxis axis)
    {
        const arma::uword len = axis == EspritAxis::subcarrier ? Xt.n_cols : Xt.n_rows;
        if (len < 2)
            throw estimation_error("esprit", "need at least 2 samples along the estimation axis");
    }

    EspritResult esprit_phase_step(const std::vector<arma::cx_mat> &snapshots, EspritAxis axis)
    {
        if (snapshots.empty())
            throw estimation_error("esprit", "no snapshots");
        check_axis(snapshots[0], axis);
        const arma::uword L = snapshots[0].n_elem, off = shift_of(snapshots[0], axis);
        arma::cx_mat R(L, L, arma::fill::zeros);
        for (const auto &S : snapshots)
        {
            arma::cx_vec x = stack(S, axis);
            R += x * x.t();
        }
        R /= double(snapshots.size());
        if (!(arma::norm(R, "fro") > 0.0))
            throw estimation_error("esprit", "zero covariance");
        arma::vec ev;
        arma::cx_mat Q;
        if (!arma::eig_sym(ev, Q, R))
            throw estimation_error("esprit", "eigendecomposition failed");
        const arma::cx_vec q = Q.col(L - 1);
        const arma::cx_vec q1 = q.head(L - off), q2 = q.tail(L - off);
        EspritResult res;
        const cx Phi = arma::cdot(q1, q2) / arma::cdot(q1, q1);
        res.phase = std::arg(Phi);
        const double rest = arma::sum(ev) - ev(L - 1);
        res.eig_ratio = rest > 1e-14 * ev(L - 1) ? ev(L - 1) / rest : std::numeric_limits<double>::infinity();
        return res;
    }

    double esprit_phase_step(const arma::cx_mat &Xt, EspritAxis axis)
    {
        check_axis(Xt, axis);
        const arma::cx_vec x = stack(Xt, axis);
        const arma::uword L = x.n_elem, off = shift_of(Xt, axis);
        const cx Phi = arma::cdot(x.head(L - off), x.tail(L - off));
        if (std::abs(Phi) == 0.0)
            throw estimation_error("esprit", "rank-deficient signal");
        return std::arg(Phi);
    }

    AmbiguityResult resolve_distance_ambiguity(double phase_step, double dk, const DistancePrior &prior)
    {
        if (!(dk > 0.0))
            throw argument_error("dk must be positive");
        const double L = 2.0 * pi / dk;
        if (!(prior.hi > prior.lo))
            throw estimation_error("distance", "empty prior window");
        if (prior.hi - prior.lo > L * (1.0 + 1e-12))
            throw estimation_error("distance", "prior window wider than the unambiguous range 2pi/dk");
        const double base = phase_step / dk;
        const long j = (long)std::ceil((prior.lo - base) / L - 1e-12);
        const double r = base + j * L;
        if (r > prior.hi + 1e-12)
            throw estimation_error("distance", "no distance candidate inside the prior window");
        if (r + L <= prior.hi - 1e-12 && prior.hi - prior.lo >= L * (1.0 - 1e-12))
            throw estimation_error("distance", "prior window holds two distance candidates");
        return AmbiguityResult{r, j};
    }

    ElevationSolver::ElevationSolver(const LinkModel &link, const ModeSet &modes, const CarrierGrid &grid,
                                     const ElevationSearchSpec &spec)
        : link_(link), modes_(modes), grid_(grid), spec_(spec)
    {
        spec_.validate();
        grid_alpha_ = arma::linspace(spec.alpha_a, spec.alpha_b, spec.grid_points);
        table_.set_size(modes.size(), grid.size(), spec.grid_points);
        for (size_t u = 0; u < modes.size(); ++u)
            for (size_t p = 0; p < grid.size(); ++p)
                for (int g = 0; g < spec.grid_points; ++g)
                    table_(u, p, g) = bessel_product(modes.modes[u], grid.k[p], grid_alpha_(g), link.tx.radius, link.rx.radius);
    }

    ElevationRoots ElevationSolver::solve(const arma::cx_mat &X, const arma::cx_mat &pilots, double r_hat,
                                          const arma::mat &sign_pattern) const
    {
        if (!(r_hat > 0.0))
            throw estimation_error("elevation", "distance estimate must be positive");
        const double N = link_.tx.element_count;
        const int U = (int)modes_.size(), P = (int)grid_.size(), G = spec_.grid_points;
        ElevationRoots out;
        out.pair_count = U * P;
        for (int u = 0; u < U; ++u)
            for (int p = 0; p < P; ++p)
            {
                const int l = modes_.modes[u];
                const double k = grid_.k[p];
                const double sigma = std::abs(link_.beta) * N * N / (2.0 * k * r_hat) * std::abs(pilots(u, p));
                const double delta = std::abs(X(u, p)) / sigma * sign_pattern(u, p);
                auto f = [&](double a) { return bessel_product(l, k, a, link_.tx.radius, link_.rx.radius) - delta; };
                const int pair = u * P + p;
                bool found = false;
                double f0 = table_(u, p, 0) - delta;
                for (int g = 0; g + 1 < G; ++g)
                {
                    const double f1 = table_(u, p, g + 1) - delta;
                    if (f0 == 0.0)
                    {
                        out.candidates.push_back({grid_alpha_(g), pair});
                        found = true;
                    }
                    else if (f0 * f1 < 0.0)
                    {
                        double a = grid_alpha_(g), b = grid_alpha_(g + 1), fa = f0;
                        while (b - a > spec_.tolerance)
                        {
                            const double m = 0.5 * (a + b), fm = f(m);
                            if (fm == 0.0)
                            {
                                a = b = m;
                                break;
                            }
                            if ((fa < 0.0) == (fm < 0.0))
                                a = m, fa = fm;
                            else
                                b = m;
                        }
                        out.candidates.push_back({0.5 * (a + b), pair});
                        found = true;
                    }
                    f0 = f1;
                }
                if (f0 == 0.0)
                {
                    out.candidates.push_back({grid_alpha_(G - 1), pair});
                    found = true;
                }
                if (!found)
                    out.empty_pairs.push_back(pair);
            }
        return out;
    }

    static std::vector<int> bin_of(const ElevationRoots &roots, double lo, double hi, int D)
    {
        std::vector<int> b(roots.candidates.size());
        for (size_t i = 0; i < b.size(); ++i)
        {
            int v = (int)std::floor((roots.candidates[i].alpha - lo) / (hi - lo) * D);
            b[i] = std::clamp(v, 0, D - 1);
        }
        return b;
    }

    ClusterResult cluster_and_average(const ElevationRoots &roots, const ElevationSearchSpec &spec)
    {
        spec.validate();
        if (roots.candidates.empty())
            throw estimation_error("cluster", "no elevation candidates");
        const double lo = spec.alpha_a, hi = spec.alpha_b;
        const int target = roots.pair_count;
        ClusterResult res;

        for (int D = spec.initial_intervals; D <= spec.max_intervals; ++D)
        {
            const auto b = bin_of(roots, lo, hi, D);
            std::vector<int> cnt(D, 0);
            for (int v : b)
                ++cnt[v];
            const int e = int(std::max_element(cnt.begin(), cnt.end()) - cnt.begin());
            if (cnt[e] != target)
                continue;
            std::set<int> pairs;
            double sum = 0.0;
            for (size_t i = 0; i < b.size(); ++i)
                if (b[i] == e)
                {
                    pairs.insert(roots.candidates[i].pair);
                    sum += roots.candidates[i].alpha;
                }
            if ((int)pairs.size() != target)
                continue;
            res.alpha = sum / target;
            res.status = ClusterStatus::exact;
            res.intervals = D;
            res.lo = lo + (hi - lo) * e / D;
            res.hi = lo + (hi - lo) * (e + 1) / D;
            res.members = target;
            return res;
        }

        // fallback at the split budget: bin with the most distinct (l,k) pairs, one candidate per pair;
        // the grid is also tried shifted by half a bin so a cluster on a bin edge is not split
        const int D = spec.max_intervals;
        const double w = (hi - lo) / D;
        std::vector<int> b;
        int e = -1;
        size_t best_pairs = 0;
        int best_cnt = 0;
        double edge = lo;
        for (int shift = 0; shift < 2; ++shift)
        {
            const double start = lo - 0.5 * w * shift;
            const int bins = D + shift;
            const auto bs = bin_of(roots, start, start + w * bins, bins);
            std::vector<std::set<int>> pairs(bins);
            std::vector<int> cnt(bins, 0);
            for (size_t i = 0; i < bs.size(); ++i)
            {
                pairs[bs[i]].insert(roots.candidates[i].pair);
                ++cnt[bs[i]];
            }
            for (int j = 0; j < bins; ++j)
                if (pairs[j].size() > best_pairs || (pairs[j].size() == best_pairs && cnt[j] > best_cnt))
                {
                    best_pairs = pairs[j].size();
                    best_cnt = cnt[j];
                    e = j;
                    b = bs;
                    edge = start;
                }
        }
        std::vector<double> members;
        for (size_t i = 0; i < b.size(); ++i)
            if (b[i] == e)
                members.push_back(roots.candidates[i].alpha);
        std::vector<double> sorted = members;
        std::sort(sorted.begin(), sorted.end());
        const size_t n = sorted.size();
        const double med = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
        std::map<int, double> pick;
        for (size_t i = 0; i < b.size(); ++i)
        {
            if (b[i] != e)
                continue;
            const auto &c = roots.candidates[i];
            auto it = pick.find(c.pair);
            if (it == pick.end() || std::abs(c.alpha - med) < std::abs(it->second - med))
                pick[c.pair] = c.alpha;
        }
        double sum = 0.0;
        for (auto &kv : pick)
            sum += kv.second;
        res.alpha = sum / double(pick.size());
        res.intervals = D;
        res.lo = std::max(lo, edge + w * e);
        res.hi = std::min(hi, edge + w * (e + 1));
        res.members = (int)pick.size();
        const int need = (int)std::ceil(spec.relax_fraction * target - 1e-9);
        res.status = res.members >= need ? ClusterStatus::relaxed : ClusterStatus::weak;
        return res;
    }

    PoseEstimator::PoseEstimator(const EstimatorConfig &cfg)
        : cfg_(cfg), solver_(cfg.link, cfg.modes, cfg.grid, cfg.search)
    {
        cfg_.grid.validate();
        if (!cfg_.grid.uniform || cfg_.grid.size() < 2)
            throw estimation_error("config", "training subcarriers must form a uniform grid of at least 2");
        if (!cfg_.modes.uniform || cfg_.modes.size() < 2)
            throw estimation_error("config", "training modes must be uniform and at least 2");
        cfg_.modes.validate(cfg_.link.tx.element_count);
        if (cfg_.hypothesis_grid < 2)
            throw argument_error("hypothesis grid needs at least 2 elevations");

        const int U = (int)cfg_.modes.size(), P = (int)cfg_.grid.size();
        std::set<std::string> seen;
        const arma::vec al = arma::linspace(cfg_.search.alpha_a, cfg_.search.alpha_b, cfg_.hypothesis_grid);
        for (double a : al)
        {
            arma::mat s(U, P);
            std::string key(U * P, '+');
            for (int u = 0; u < U; ++u)
                for (int p = 0; p < P; ++p)
                {
                    const double v = bessel_product(cfg_.modes.modes[u], cfg_.grid.k[p], a, cfg_.link.tx.radius, cfg_.link.rx.radius);
                    s(u, p) = v < 0.0 ? -1.0 : 1.0;
                    if (v < 0.0)
                        key[u * P + p] = '-';
                }
            if (seen.insert(key).second)
            {
                patterns_.push_back(s);
                pattern_seed_.push_back(a);
            }
        }
    }

    PoseEstimate PoseEstimator::estimate(const CombinedTrainingSignals &x) const
    {
        const int U = (int)cfg_.modes.size(), P = (int)cfg_.grid.size();
        if ((int)x.X.n_rows != U || (int)x.X.n_cols != P)
            throw estimation_error("combine", "combined signal size differs from the training configuration");
        const arma::mat ones(U, P, arma::fill::ones);
        const arma::cx_mat base = normalize(x.X, x.pilots, cfg_.modes, ones, cfg_.link.beta);

        PoseEstimate est;
        double best = -1.0;
        for (size_t h = 0; h < patterns_.size(); ++h)
        {
            const arma::cx_mat Xt = base % patterns_[h];
            HypothesisScore sc;
            sc.alpha_seed = pattern_seed_[h];
            sc.phase_r = esprit_phase_step(Xt, EspritAxis::subcarrier);
            sc.phase_gamma = esprit_phase_step(Xt, EspritAxis::mode);
            cx acc = 0.0;
            for (int p = 0; p < P; ++p)
                for (int u = 0; u < U; ++u)
                    acc += Xt(u, p) * std::exp(cx(0.0, -(p * sc.phase_r + u * sc.phase_gamma)));
            sc.fit = std::norm(acc) / double(U * P) / double(U * P);
            arma::vec sv = arma::svd(Xt);
            const double rest = arma::accu(arma::square(sv)) - sv(0) * sv(0);
            sc.eig_ratio = rest > 0.0 ? sv(0) * sv(0) / rest : std::numeric_limits<double>::infinity();
            est.hypotheses.push_back(sc);
            // |phi|, |alpha| < pi/2 bound the tilt below pi/2
            if (std::abs(sc.phase_gamma) / double(cfg_.modes.dl) >= 0.5 * pi)
                continue;
            if (sc.fit > best)
            {
                best = sc.fit;
                est.chosen_hypothesis = (int)h;
            }
        }
        if (est.chosen_hypothesis < 0)
            throw estimation_error("hypothesis", "no sign hypothesis yields a tilt below 90 degrees");
        const HypothesisScore &win = est.hypotheses[est.chosen_hypothesis];
        const AmbiguityResult amb = resolve_distance_ambiguity(win.phase_r, cfg_.grid.dk, cfg_.prior);
        est.r_hat = amb.distance;
        est.ambiguity_wraps = amb.wraps;
        est.gamma_hat = std::abs(win.phase_gamma) / double(cfg_.modes.dl);

        est.roots = solver_.solve(x.X, x.pilots, est.r_hat, patterns_[est.chosen_hypothesis]);
        if (est.roots.candidates.empty())
            throw estimation_error("elevation", "no elevation root for any (mode, subcarrier) pair");
        est.cluster = cluster_and_average(est.roots, cfg_.search);
        est.alpha_hat = est.cluster.alpha;
        est.phi_hat = azimuth_from_tilt(est.gamma_hat, est.alpha_hat);
        return est;
    }

    PoseEstimate estimate_pose(const std::vector<arma::cx_mat> &received, const arma::cx_mat &pilots, const EstimatorConfig &cfg)
    {
        PoseEstimator pe(cfg);
        return pe.estimate(combine_training(received, cfg.modes, cfg.grid, pilots));
    }

    static const char *status_name(ClusterStatus s)
    {
        switch (s)
        {
        case ClusterStatus::exact:
            return "exact";
        case ClusterStatus::relaxed:
            return "relaxed";
        default:
            return "weak";
        }
    }

    std::string diagnostics_report(const PoseEstimate &est, const EstimatorConfig &cfg)
    {
        std::ostringstream o;
        o << std::setprecision(10);
        o << "# pose estimate\n";
        o << "r_hat_m = " << est.r_hat << "\n";
        o << "gamma_hat_deg = " << rad2deg(est.gamma_hat) << "\n";
        o << "alpha_hat_deg = " << rad2deg(est.alpha_hat) << "\n";
        o << "phi_hat_deg = " << rad2deg(est.phi_hat) << "\n";
        o << "ambiguity_wraps = " << est.ambiguity_wraps << "\n";
        o << "prior_window_m = [" << cfg.prior.lo << ", " << cfg.prior.hi << "]\n";
        o << "\n# sign hypotheses (" << est.hypotheses.size() << ")\n";
        o << "index alpha_seed_deg fit eig_ratio phase_r phase_gamma\n";
        for (size_t h = 0; h < est.hypotheses.size(); ++h)
        {
            const auto &s = est.hypotheses[h];
            o << h << (int(h) == est.chosen_hypothesis ? "* " : " ") << rad2deg(s.alpha_seed) << " " << s.fit << " "
              << s.eig_ratio << " " << s.phase_r << " " << s.phase_gamma << "\n";
        }
        o << "\n# clustering\n";
        o << "status = " << status_name(est.cluster.status) << "\n";
        o << "intervals = " << est.cluster.intervals << "\n";
        o << "interval_deg = [" << rad2deg(est.cluster.lo) << ", " << rad2deg(est.cluster.hi) << "]\n";
        o << "members = " << est.cluster.members << " of " << est.roots.pair_count << "\n";
        o << "empty_pairs =";
        for (int p : est.roots.empty_pairs)
            o << " " << p;
        o << "\n\n# elevation candidates (pair mode k alpha_deg)\n";
        const int P = (int)cfg.grid.size();
        for (const auto &c : est.roots.candidates)
            o << c.pair << " " << cfg.modes.modes[c.pair / P] << " " << cfg.grid.k[c.pair % P] << " " << rad2deg(c.alpha) << "\n";
        return o.str();
    }
}
