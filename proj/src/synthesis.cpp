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

#include "oamlink/synthesis.hpp"
#include "oamlink/csv.hpp"
#include "oamlink/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace oam
{
    arma::cx_mat dft_mode_matrix(int N, const ModeSet &modes)
    {
        if (N < 1)
            throw argument_error("element count must be >= 1");
        std::set<int> seen;
        for (int l : modes.modes)
        {
            if (!seen.insert(l).second)
                throw argument_error("duplicate mode " + std::to_string(l));
            if (2 * std::abs(l) >= N && N > 1)
                throw argument_error("mode " + std::to_string(l) + " violates |l| < N/2");
        }
        const double s = 1.0 / std::sqrt((double)N);
        arma::cx_mat F(modes.size(), N);
        for (size_t u = 0; u < modes.size(); ++u)
            for (int n = 0; n < N; ++n)
            {
                // reduce l*n mod N before forming the angle
                long long q = ((long long)modes.modes[u] * n) % N;
                F(u, n) = std::polar(s, -2.0 * pi * double(q) / double(N));
            }
        return F;
    }

    arma::cx_vec synthesize(const arma::cx_vec &symbols, const arma::cx_mat &F)
    {
        if (symbols.n_elem != F.n_rows)
            throw argument_error("symbol count differs from mode matrix rows");
        return F.t() * symbols;
    }

    arma::cx_vec synthesize_analog(const arma::cx_vec &symbols, const ModeSet &modes, const ArrayConfig &array)
    {
        if (symbols.n_elem != modes.size())
            throw argument_error("symbol count differs from mode count");
        arma::cx_vec feed(array.element_count, arma::fill::zeros);
        const double s = 1.0 / std::sqrt((double)array.element_count);
        for (int n = 1; n <= array.element_count; ++n)
        {
            const double phn = 2.0 * pi * double(n - 1) / double(array.element_count);
            cx acc = 0.0;
            for (size_t u = 0; u < modes.size(); ++u)
                acc += std::exp(cx(0.0, modes.modes[u] * phn)) * symbols(u);
            feed(n - 1) = s * acc;
        }
        return feed;
    }

    TrainingFrame training_sequence(int N, const ModeSet &modes, const CarrierGrid &grid, const arma::cx_mat &pilots)
    {
        if (pilots.n_rows != modes.size() || pilots.n_cols != grid.size())
            throw argument_error("pilot matrix must be U~ x P~");
        for (arma::uword i = 0; i < pilots.n_elem; ++i)
            if (!(std::abs(pilots(i)) > 0.0))
                throw argument_error("zero pilot at entry " + std::to_string(i));
        TrainingFrame tf;
        tf.modes = modes;
        tf.grid = grid;
        tf.pilots = pilots;
        const arma::cx_mat F = dft_mode_matrix(N, modes);
        for (size_t p = 0; p < grid.size(); ++p)
            tf.feeds.push_back(F.t() * arma::diagmat(pilots.col(p)));
        return tf;
    }

    cx field_at(const ArrayConfig &array, const arma::cx_vec &feed, double k, double x, double y, double z)
    {
        cx acc = 0.0;
        for (int n = 1; n <= array.element_count; ++n)
        {
            const double a = element_angle(array, n);
            const double dx = x - array.radius * std::cos(a), dy = y - array.radius * std::sin(a);
            const double d = std::sqrt(dx * dx + dy * dy + z * z);
            if (d == 0.0)
                throw argument_error("observation point coincides with an element");
            acc += feed(n - 1) * std::exp(cx(0.0, k * d)) / d;
        }
        return acc;
    }

    PhaseRaster field_phase_map(const ArrayConfig &array, const arma::cx_vec &feed, double k, const PlaneSpec &plane)
    {
        if ((int)feed.n_elem != array.element_count)
            throw argument_error("feed length differs from element count");
        if (plane.resolution < 2 || !(plane.extent > 0.0))
            throw argument_error("raster needs resolution >= 2 and positive extent");
        PhaseRaster R;
        R.width = R.height = plane.resolution;
        R.extent = plane.extent;
        R.distance = plane.distance;
        const size_t n = (size_t)R.width * R.height;
        R.phase.assign(n, 0.0);
        R.amplitude.assign(n, 0.0);
        R.valid.assign(n, 1);
        const double step = plane.extent / (plane.resolution - 1);
        for (int row = 0; row < R.height; ++row)
        {
            const double y = 0.5 * plane.extent - row * step;
            for (int col = 0; col < R.width; ++col)
            {
                const double x = -0.5 * plane.extent + col * step;
                const size_t i = (size_t)row * R.width + col;
                try
                {
                    cx e = field_at(array, feed, k, x, y, plane.distance);
                    double ph = std::arg(e);
                    if (ph >= pi)
                        ph -= 2.0 * pi;
                    R.phase[i] = ph;
                    R.amplitude[i] = std::abs(e);
                }
                catch (const argument_error &)
                {
                    R.valid[i] = 0;
                }
            }
        }
        return R;
    }

    static double wrap(double a)
    {
        a = std::remainder(a, 2.0 * pi);
        return a;
    }

    double winding_number(const ArrayConfig &array, const arma::cx_vec &feed, double k, double z, double radius, int samples)
    {
        double total = 0.0, prev = 0.0;
        for (int s = 0; s <= samples; ++s)
        {
            const double psi = 2.0 * pi * s / samples;
            const double ph = std::arg(field_at(array, feed, k, radius * std::cos(psi), radius * std::sin(psi), z));
            if (s > 0)
                total += wrap(ph - prev);
            prev = ph;
        }
        return total / (2.0 * pi);
    }

    static double sample_phase(const PhaseRaster &R, double x, double y)
    {
        const double step = R.extent / (R.width - 1);
        int col = (int)std::lround((x + 0.5 * R.extent) / step);
        int row = (int)std::lround((0.5 * R.extent - y) / step);
        col = std::clamp(col, 0, R.width - 1);
        row = std::clamp(row, 0, R.height - 1);
        return R.at(row, col);
    }

    ArmAnalysis interference_arms(const PhaseRaster &raster, double radius, int samples, int max_harmonic)
    {
        if (radius <= 0.0 || radius > 0.5 * raster.extent)
            throw argument_error("analysis circle must lie inside the raster");
        std::vector<cx> v(samples);
        double total = 0.0, prev = 0.0;
        for (int s = 0; s < samples; ++s)
        {
            const double psi = 2.0 * pi * s / samples;
            const double ph = sample_phase(raster, radius * std::cos(psi), radius * std::sin(psi));
            v[s] = std::exp(cx(0.0, ph));
            if (s > 0)
                total += wrap(ph - prev);
            prev = ph;
        }
        total += wrap(sample_phase(raster, radius, 0.0) - prev);

        // angular spectrum of exp(i phase) along the circle
        std::vector<std::pair<double, int>> power;
        for (int m = -max_harmonic; m <= max_harmonic; ++m)
        {
            cx c = 0.0;
            for (int s = 0; s < samples; ++s)
                c += v[s] * std::exp(cx(0.0, -2.0 * pi * m * s / samples));
            power.push_back({std::norm(c / double(samples)), m});
        }
        std::sort(power.begin(), power.end(), [](auto &a, auto &b) { return a.first > b.first; });
        ArmAnalysis A;
        A.arms = std::abs(power[0].second - power[1].second);
        A.dominant_power = power[0].first;
        A.runner_up_power = power[1].first;
        A.mean_winding = total / (2.0 * pi);
        return A;
    }

    void write_raster_csv(const PhaseRaster &R, const std::string &path)
    {
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw config_error("cannot open " + path + " for writing");
        for (int row = 0; row < R.height; ++row)
        {
            for (int col = 0; col < R.width; ++col)
            {
                if (col)
                    f << ',';
                const size_t i = (size_t)row * R.width + col;
                f << (R.valid[i] ? csv_number(R.phase[i]) : std::string("nan"));
            }
            f << "\r\n";
        }
    }

    void write_raster_pgm(const PhaseRaster &R, const std::string &path)
    {
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw config_error("cannot open " + path + " for writing");
        f << "P5\n" << R.width << ' ' << R.height << "\n255\n";
        for (size_t i = 0; i < R.phase.size(); ++i)
        {
            int v = R.valid[i] ? (int)std::floor((R.phase[i] + pi) / (2.0 * pi) * 256.0) : 0;
            f.put((char)(unsigned char)std::clamp(v, 0, 255));
        }
    }
}
