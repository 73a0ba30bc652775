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

#include "oamlink/experiment.hpp"
#include "oamlink/csv.hpp"
#include "oamlink/errors.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace oam
{
    constexpr double speed_of_light = 299792458.0;

    UccaConfig ExperimentSpec::ucca() const
    {
        UccaConfig u;
        if (ring_radii.empty())
            u.rings.push_back(tx());
        else
            for (double r : ring_radii)
                u.rings.push_back(ArrayConfig{elements, r, 0.0});
        return u;
    }

    EstimatorScenario ExperimentSpec::estimator_scenario(const ArrayConfig &t, const ArrayConfig &r) const
    {
        EstimatorScenario sc;
        sc.truth = pose;
        sc.link.tx = t;
        sc.link.rx = r;
        sc.modes = training_modes;
        sc.grid = training_grid;
        sc.search.alpha_a = alpha_min;
        sc.search.alpha_b = alpha_max;
        sc.search.grid_points = grid_points;
        sc.prior = DistancePrior::around(pose.distance, prior_half_width);
        sc.hypothesis_grid = hypothesis_grid;
        sc.snr_reference = training_snr;
        return sc;
    }

    static Scenario scenario_of(const KeyValueSpec &kv)
    {
        const std::string s = kv.str("scenario");
        if (s == "nmse")
            return Scenario::nmse;
        if (s == "estimate")
            return Scenario::estimate;
        if (s == "ber")
            return Scenario::ber;
        if (s == "se")
            return Scenario::se;
        if (s == "phase_map")
            return Scenario::phase_map;
        if (s == "channel_export")
            return Scenario::channel_export;
        kv.fail("scenario", "unknown scenario '" + s + "' (nmse, estimate, ber, se, phase_map, channel_export)");
    }

    // plain meters under `key`, or multiples of the reference wavelength under `key_lambda`
    static double length(const KeyValueSpec &kv, const std::string &key, double lambda)
    {
        if (kv.has(key) && kv.has(key + "_lambda"))
            kv.fail(key, "given both in meters and in wavelengths");
        if (kv.has(key + "_lambda"))
            return kv.num(key + "_lambda") * lambda;
        return kv.num(key);
    }

    static bool has_length(const KeyValueSpec &kv, const std::string &key)
    {
        return kv.has(key) || kv.has(key + "_lambda");
    }

    static std::string length_key(const KeyValueSpec &kv, const std::string &key)
    {
        return kv.has(key + "_lambda") ? key + "_lambda" : key;
    }

    static ModeSet mode_set(const KeyValueSpec &kv, const std::string &list_key, const std::string &count_key, int N)
    {
        ModeSet m;
        std::string key;
        if (kv.has(list_key))
        {
            key = list_key;
            for (long l : kv.int_list(list_key))
                m.modes.push_back((int)l);
            m.uniform = true;
            m.dl = m.modes.size() > 1 ? m.modes[1] - m.modes[0] : 1;
            for (size_t u = 1; u < m.modes.size(); ++u)
                if (m.modes[u] - m.modes[u - 1] != m.dl)
                    m.uniform = false;
            if (!m.uniform)
                m.dl = 0;
        }
        else
        {
            key = count_key;
            const long c = kv.integer(count_key);
            if (c < 1)
                kv.fail(count_key, "mode count must be >= 1");
            if (c > N)
                kv.fail(count_key, "mode count " + std::to_string(c) + " exceeds the element count N = " + std::to_string(N));
            m = ModeSet::centered((int)c);
        }
        if ((int)m.size() > N)
            kv.fail(key, "mode count " + std::to_string(m.size()) + " exceeds the element count N = " + std::to_string(N));
        try
        {
            m.validate(N);
        }
        catch (const argument_error &e)
        {
            kv.fail(key, std::string(e.what()) + " (an N-element UCA carries at most the modes |l| < N/2)");
        }
        return m;
    }

    static CarrierGrid carrier_grid(const KeyValueSpec &kv, const std::string &prefix, double k0_default, double dk_default,
                                    long count_default)
    {
        const double k0 = kv.num(prefix + "k0", k0_default);
        const double dk = kv.num(prefix + "dk", dk_default);
        const long n = kv.integer(prefix + "subcarriers", count_default);
        if (!(k0 > 0.0))
            kv.fail(prefix + "k0", "wavenumber must be positive");
        if (!(dk > 0.0))
            kv.fail(prefix + "dk", "spacing must be positive");
        if (n < 1)
            kv.fail(prefix + "subcarriers", "need at least one subcarrier");
        return CarrierGrid::uniform_grid(k0, dk, (int)n);
    }

    static GainModel gain_of(const KeyValueSpec &kv)
    {
        const std::string g = kv.str("gain_model", "closed_form");
        if (g == "closed_form")
            return GainModel::closed_form;
        if (g == "geometric")
            return GainModel::geometric;
        if (g == "exact")
            return GainModel::exact;
        kv.fail("gain_model", "expected closed_form, geometric or exact");
    }

    static void parse_pose(const KeyValueSpec &kv, ExperimentSpec &s)
    {
        s.pose.distance = kv.num("distance");
        s.pose.azimuth = deg2rad(kv.num("azimuth_deg", 0.0));
        s.pose.elevation = deg2rad(kv.num("elevation_deg", 0.0));
        if (!(s.pose.distance > 0.0))
            kv.fail("distance", "must be positive");
        if (!(std::abs(s.pose.azimuth) < pi / 2))
            kv.fail("azimuth_deg", "must lie in (-90, 90)");
        if (!(std::abs(s.pose.elevation) < pi / 2))
            kv.fail("elevation_deg", "must lie in (-90, 90)");
    }

    static void parse_arrays(const KeyValueSpec &kv, ExperimentSpec &s, double lambda, bool allow_rings)
    {
        s.elements = (int)kv.integer("elements");
        if (s.elements < 2)
            kv.fail("elements", "need at least 2 elements");
        if (allow_rings && (kv.has("ring_radii") || kv.has("ring_radii_lambda")))
        {
            const std::string key = kv.has("ring_radii") ? "ring_radii" : "ring_radii_lambda";
            for (double r : kv.list(key))
                s.ring_radii.push_back(key == "ring_radii" ? r : r * lambda);
            for (size_t i = 0; i < s.ring_radii.size(); ++i)
            {
                if (!(s.ring_radii[i] > 0.0))
                    kv.fail(key, "radii must be positive");
                if (i && !(s.ring_radii[i] > s.ring_radii[i - 1]))
                    kv.fail(key, "radii must be strictly increasing");
            }
            s.radius_tx = s.radius_rx = s.ring_radii.back();
            return;
        }
        if (has_length(kv, "radius"))
            s.radius_tx = s.radius_rx = length(kv, "radius", lambda);
        else
        {
            s.radius_tx = length(kv, "radius_tx", lambda);
            s.radius_rx = length(kv, "radius_rx", lambda);
        }
        const std::string kr = has_length(kv, "radius") ? length_key(kv, "radius") : length_key(kv, "radius_tx");
        if (!(s.radius_tx > 0.0))
            kv.fail(kr, "radius must be positive");
        if (!(s.radius_rx > 0.0))
            kv.fail(has_length(kv, "radius") ? kr : length_key(kv, "radius_rx"), "radius must be positive");
    }

    static void parse_estimator(const KeyValueSpec &kv, ExperimentSpec &s)
    {
        s.training_grid = carrier_grid(kv, "training_", s.grid.k.front(), s.grid.dk, (long)s.grid.size());
        s.training_modes = mode_set(kv, "training_modes", "training_mode_count", s.elements);
        s.alpha_min = deg2rad(kv.num("alpha_min_deg"));
        s.alpha_max = deg2rad(kv.num("alpha_max_deg"));
        if (!(s.alpha_min < s.alpha_max))
            kv.fail("alpha_max_deg", "must exceed alpha_min_deg");
        s.prior_half_width = kv.num("prior_half_width", 3.0);
        if (!(s.prior_half_width > 0.0))
            kv.fail("prior_half_width", "must be positive");
        if (2.0 * s.prior_half_width > 2.0 * pi / s.training_grid.dk)
            kv.fail("prior_half_width", "distance window wider than the unambiguous range 2 pi / dk");
        s.hypothesis_grid = (int)kv.integer("hypothesis_grid", 600);
        s.grid_points = (int)kv.integer("elevation_grid_points", 2000);
        if (s.hypothesis_grid < 2)
            kv.fail("hypothesis_grid", "must be >= 2");
        if (s.grid_points < 2)
            kv.fail("elevation_grid_points", "must be >= 2");
        const std::string ref = kv.str("training_snr", "per_sample");
        if (ref == "per_sample")
            s.training_snr = TrainingSnr::per_sample;
        else if (ref == "mean")
            s.training_snr = TrainingSnr::mean;
        else
            kv.fail("training_snr", "expected per_sample or mean");
    }

    static void parse_common_link(const KeyValueSpec &kv, ExperimentSpec &s, bool rings)
    {
        s.grid = carrier_grid(kv, "", 0.0, 0.0, 0);
        const double lambda = 2.0 * pi / s.grid.k.front();
        parse_arrays(kv, s, lambda, rings);
        parse_pose(kv, s);
    }

    static void parse_trials(const KeyValueSpec &kv, ExperimentSpec &s)
    {
        const long t = kv.integer("trials");
        if (t < 1)
            kv.fail("trials", "must be >= 1");
        s.trials = (size_t)t;
        s.snr_db = kv.list("snr_db");
        if (s.snr_db.empty())
            kv.fail("snr_db", "empty SNR list");
    }

    ExperimentSpec parse_experiment(const KeyValueSpec &kv)
    {
        ExperimentSpec s;
        s.source = kv.source();
        s.name = kv.str("name", std::filesystem::path(kv.source()).stem().string());
        s.output = kv.str("output", s.name);
        s.scenario = scenario_of(kv);
        const long seed = kv.integer("seed", 1);
        if (seed < 0)
            kv.fail("seed", "must be non-negative");
        s.seed = (uint64_t)seed;

        switch (s.scenario)
        {
        case Scenario::nmse:
        case Scenario::estimate:
        {
            parse_common_link(kv, s, false);
            parse_estimator(kv, s);
            if (s.scenario == Scenario::estimate)
            {
                s.trials = 1;
                s.snr_db = {kv.num("snr_db")};
                break;
            }
            parse_trials(kv, s);
            const std::string sw = kv.str("sweep", "snr");
            if (sw == "snr")
                s.sweep = SweepVariable::snr;
            else if (sw == "training_modes")
                s.sweep = SweepVariable::training_modes;
            else if (sw == "training_subcarriers")
                s.sweep = SweepVariable::training_subcarriers;
            else
                kv.fail("sweep", "expected snr, training_modes or training_subcarriers");
            if (s.sweep != SweepVariable::snr)
            {
                s.sweep_values = kv.int_list("sweep_values");
                if (s.snr_db.size() != 1)
                    kv.fail("snr_db", "a U~ or P~ sweep runs at exactly one SNR");
                for (long v : s.sweep_values)
                {
                    if (v < 2)
                        kv.fail("sweep_values", "ESPRIT needs at least 2 samples per axis");
                    if (s.sweep == SweepVariable::training_modes)
                    {
                        if (v > s.elements)
                            kv.fail("sweep_values", "U~ = " + std::to_string(v) + " exceeds N = " + std::to_string(s.elements));
                        try
                        {
                            ModeSet::centered((int)v).validate(s.elements);
                        }
                        catch (const argument_error &e)
                        {
                            kv.fail("sweep_values", std::string(e.what()) + " (an N-element UCA carries at most the modes |l| < N/2)");
                        }
                    }
                }
            }
            break;
        }
        case Scenario::ber:
        {
            parse_common_link(kv, s, false);
            parse_trials(kv, s);
            s.qam_order = (int)kv.integer("qam_order", 16);
            if (s.qam_order != 4 && s.qam_order != 16 && s.qam_order != 64)
                kv.fail("qam_order", "expected 4, 16 or 64");
            s.symbols_per_trial = (int)kv.integer("symbols_per_trial", 64);
            if (s.symbols_per_trial < 1)
                kv.fail("symbols_per_trial", "must be >= 1");
            s.gain = gain_of(kv);
            s.include_true_pose = kv.flag("include_true_pose", false);
            s.data_mode_counts = kv.int_list("data_mode_counts");
            for (long u : s.data_mode_counts)
            {
                if (u < 1 || u > s.elements)
                    kv.fail("data_mode_counts", "U must lie in [1, N]");
                try
                {
                    ModeSet::centered((int)u).validate(s.elements);
                }
                catch (const argument_error &e)
                {
                    kv.fail("data_mode_counts", std::string(e.what()) + " (an N-element UCA carries at most the modes |l| < N/2)");
                }
            }
            s.training_mode_counts = kv.has("training_mode_counts") ? kv.int_list("training_mode_counts") : std::vector<long>{};
            for (long u : s.training_mode_counts)
            {
                if (u < 2 || u > s.elements)
                    kv.fail("training_mode_counts", "U~ must lie in [2, N]");
                try
                {
                    ModeSet::centered((int)u).validate(s.elements);
                }
                catch (const argument_error &e)
                {
                    kv.fail("training_mode_counts", std::string(e.what()) + " (an N-element UCA carries at most the modes |l| < N/2)");
                }
            }
            if (!s.training_mode_counts.empty())
            {
                // estimator settings; training modes are swept per curve
                s.training_grid = carrier_grid(kv, "training_", s.grid.k.front(), s.grid.dk, (long)s.grid.size());
                s.training_modes = ModeSet::centered((int)s.training_mode_counts.front());
                s.alpha_min = deg2rad(kv.num("alpha_min_deg"));
                s.alpha_max = deg2rad(kv.num("alpha_max_deg"));
                if (!(s.alpha_min < s.alpha_max))
                    kv.fail("alpha_max_deg", "must exceed alpha_min_deg");
                s.prior_half_width = kv.num("prior_half_width", 3.0);
                if (!(s.prior_half_width > 0.0) || 2.0 * s.prior_half_width > 2.0 * pi / s.training_grid.dk)
                    kv.fail("prior_half_width", "must be positive and no wider than the unambiguous range 2 pi / dk");
                s.hypothesis_grid = (int)kv.integer("hypothesis_grid", 600);
                s.grid_points = (int)kv.integer("elevation_grid_points", 2000);
            }
            break;
        }
        case Scenario::se:
        {
            parse_common_link(kv, s, true);
            parse_trials(kv, s);
            s.modes = mode_set(kv, "modes", "mode_count", s.elements);
            s.gain = gain_of(kv);
            s.coherence = kv.num("coherence_symbols", 256.0);
            s.mimo_pilots = kv.num("mimo_pilots", 0.0);
            s.sinr_cap_db = kv.num("sinr_cap_db", 30.0);
            const std::string src = kv.str("pose_source", "estimated");
            if (src != "estimated" && src != "true")
                kv.fail("pose_source", "expected estimated or true");
            s.estimated_pose = src == "estimated";
            parse_estimator(kv, s);
            s.training_symbols = kv.num("training_symbols", double(s.training_modes.size()));
            OverheadModel o{s.coherence, s.training_symbols, (int)s.grid.size(), (int)s.training_grid.size()};
            try
            {
                o.validate();
            }
            catch (const config_error &e)
            {
                kv.fail("coherence_symbols", e.what());
            }
            const double ring_count = s.ring_radii.empty() ? 1.0 : double(s.ring_radii.size());
            const double pilots = s.mimo_pilots > 0.0 ? s.mimo_pilots : ring_count * s.elements;
            if (pilots > s.coherence)
                kv.fail("mimo_pilots", "baseline pilots exceed the coherence length");
            break;
        }
        case Scenario::phase_map:
        {
            s.frequency = kv.num("frequency_hz");
            if (!(s.frequency > 0.0))
                kv.fail("frequency_hz", "must be positive");
            const double lambda = speed_of_light / s.frequency;
            s.grid = CarrierGrid::uniform_grid(2.0 * pi / lambda, 1.0, 1);
            parse_arrays(kv, s, lambda, false);
            s.plane_distance = length(kv, "plane_distance", lambda);
            s.plane_extent = length(kv, "plane_extent", lambda);
            s.analysis_radius = length(kv, "analysis_radius", lambda);
            s.resolution = (int)kv.integer("resolution", 256);
            if (!(s.plane_distance > 0.0))
                kv.fail(length_key(kv, "plane_distance"), "must be positive");
            if (!(s.plane_extent > 0.0))
                kv.fail(length_key(kv, "plane_extent"), "must be positive");
            if (s.resolution < 2)
                kv.fail("resolution", "must be >= 2");
            if (!(s.analysis_radius > 0.0) || s.analysis_radius > 0.5 * s.plane_extent)
                kv.fail(length_key(kv, "analysis_radius"), "must be positive and inside the raster");
            for (const auto &g : kv.groups("mode_sets"))
            {
                if (g.empty())
                    kv.fail("mode_sets", "empty mode set");
                std::vector<int> ms(g.begin(), g.end());
                for (int l : ms)
                    if (2 * std::abs(l) >= s.elements)
                        kv.fail("mode_sets", "mode " + std::to_string(l) + " violates |l| < N/2 for N = " +
                                                 std::to_string(s.elements) + " (an N-element UCA carries at most the modes |l| < N/2)");
                s.mode_sets.push_back(ms);
            }
            break;
        }
        case Scenario::channel_export:
        {
            parse_common_link(kv, s, true);
            const std::string m = kv.str("channel_model", "exact");
            if (m == "exact")
                s.channel_model = ChannelModel::exact;
            else if (m == "farfield")
                s.channel_model = ChannelModel::farfield;
            else
                kv.fail("channel_model", "expected exact or farfield");
            if (s.channel_model == ChannelModel::farfield && !s.ring_radii.empty())
                kv.fail("channel_model", "the far-field model is available for single UCAs only");
            break;
        }
        }

        const auto extra = kv.unused();
        if (!extra.empty())
            kv.fail(extra.front(), "unknown or not used by scenario '" + kv.str("scenario") + "'");
        return s;
    }

    ExperimentSpec load_experiment(const std::string &path)
    {
        return parse_experiment(KeyValueSpec::load(path));
    }

    static std::string fmt(double v, int prec = 6)
    {
        std::ostringstream o;
        o.precision(prec);
        o << v;
        return o.str();
    }

    std::vector<std::string> describe_experiment(const ExperimentSpec &s)
    {
        static const char *names[] = {"nmse", "estimate", "ber", "se", "phase_map", "channel_export"};
        std::vector<std::string> out;
        out.push_back("scenario = " + std::string(names[(int)s.scenario]));
        out.push_back("elements = " + std::to_string(s.elements));
        if (!s.ring_radii.empty())
        {
            std::string r;
            for (double x : s.ring_radii)
                r += (r.empty() ? "" : ", ") + fmt(x);
            out.push_back("ring_radii_m = " + r);
        }
        else
            out.push_back("radius_tx_m = " + fmt(s.radius_tx) + ", radius_rx_m = " + fmt(s.radius_rx));
        if (s.scenario == Scenario::phase_map)
        {
            out.push_back("wavenumber_rad_per_m = " + fmt(s.grid.k.front()));
            out.push_back("plane_distance_m = " + fmt(s.plane_distance));
            out.push_back("mode_sets = " + std::to_string(s.mode_sets.size()));
            return out;
        }
        out.push_back("tilt_angle_deg = " + fmt(rad2deg(tilt_angle(s.pose)), 8));
        out.push_back("farfield_ratio = " + fmt(s.pose.distance / std::max(s.radius_tx, s.radius_rx)));

        // receive aperture seen from the transmit axis: argument k R_t sin(theta) with tan(theta) = R_r / r
        const double kmax = s.grid.k.back();
        const double arg = kmax * s.radius_tx * std::sin(std::atan(s.radius_rx / s.pose.distance));
        std::vector<int> ls = s.modes.modes;
        ls.insert(ls.end(), s.training_modes.modes.begin(), s.training_modes.modes.end());
        for (long u : s.data_mode_counts)
            for (int l : ModeSet::centered((int)u).modes)
                ls.push_back(l);
        if (ls.empty())
            ls.push_back(0);
        std::vector<int> orders;
        for (int l : ls)
            orders.push_back(std::abs(l));
        std::sort(orders.begin(), orders.end());
        orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
        std::string inside, outside;
        for (int a : orders)
        {
            const double z = bessel_first_zero(a);
            std::string &dst = arg < z ? inside : outside;
            dst += (dst.empty() ? "" : ", ") + std::to_string(a) + " (j=" + fmt(z, 4) + ")";
        }
        out.push_back("main_lobe_argument = " + fmt(arg) + " (k_max R_t sin(atan(R_r / r)))");
        out.push_back("main_lobe_inside_for_|l| = " + (inside.empty() ? std::string("none") : inside));
        out.push_back("main_lobe_outside_for_|l| = " + (outside.empty() ? std::string("none") : outside));
        out.push_back(std::string("main_lobe_check = ") + (outside.empty() ? "inside" : "outside (warning)"));

        if (!s.training_grid.k.empty())
        {
            out.push_back("unambiguous_range_m = " + fmt(2.0 * pi / s.training_grid.dk));
            out.push_back("prior_window_m = [" + fmt(s.pose.distance - s.prior_half_width) + ", " +
                          fmt(s.pose.distance + s.prior_half_width) + "]");
            const double Tp = s.training_symbols > 0.0 ? s.training_symbols : double(s.training_modes.size());
            OverheadModel o{s.coherence, Tp, (int)s.grid.size(), (int)s.training_grid.size()};
            out.push_back("overhead_factor = " + fmt(o.factor(), 8) + " (T_p = " + fmt(Tp) + ", T_c = " + fmt(s.coherence) +
                          ", P = " + std::to_string(s.grid.size()) + ", P~ = " + std::to_string(s.training_grid.size()) + ")");
        }
        return out;
    }

    static std::string path_in(const RunOptions &o, const std::string &file)
    {
        return (std::filesystem::path(o.out_dir) / file).string();
    }

    static void say(const RunOptions &o, const std::string &line)
    {
        if (o.log)
            (*o.log) << line << std::endl;
    }

    static std::vector<std::string> run_nmse(const ExperimentSpec &s, const RunOptions &o, uint64_t seed)
    {
        const char *col = s.sweep == SweepVariable::snr ? "snr_db" : s.sweep == SweepVariable::training_modes ? "training_modes" : "training_subcarriers";
        CsvTable t({col, "parameter", "nmse", "ci_low", "ci_high", "median", "trials", "failures"});
        std::vector<double> points;
        if (s.sweep == SweepVariable::snr)
            points = s.snr_db;
        else
            for (long v : s.sweep_values)
                points.push_back(double(v));
        const double g = tilt_angle(s.pose);
        for (size_t i = 0; i < points.size(); ++i)
        {
            EstimatorScenario sc = s.estimator_scenario(s.tx(), s.rx());
            double snr = s.snr_db.front();
            if (s.sweep == SweepVariable::snr)
                snr = points[i];
            else if (s.sweep == SweepVariable::training_modes)
                sc.modes = ModeSet::centered((int)points[i]);
            else
                sc.grid = CarrierGrid::uniform_grid(s.training_grid.k.front(), s.training_grid.dk, (int)points[i]);
            const EstimatorTrials tr = run_estimator_trials(sc, snr, s.trials, seed, i, o.workers);

            struct P
            {
                const char *name;
                const std::vector<double> *v;
                double truth, unit;
            } ps[] = {{"r", &tr.r, s.pose.distance, 1.0},
                      {"gamma", &tr.gamma, g, 180.0 / pi},
                      {"alpha", &tr.alpha, s.pose.elevation, 180.0 / pi},
                      {"phi", &tr.phi, s.pose.azimuth, 180.0 / pi}};
            std::ostringstream line;
            line << col << "=" << points[i];
            for (const auto &p : ps)
            {
                const auto ok = finite_values(*p.v);
                std::vector<double> se;
                for (double x : ok)
                    se.push_back(std::pow((x - p.truth) / p.truth, 2));
                const Interval ci = mean_ci95(se);
                const double m = ok.empty() ? std::nan("") : nmse(ok, p.truth);
                t.add_row({csv_number(points[i]), p.name, csv_number(m), csv_number(ci.lo), csv_number(ci.hi),
                           csv_number(median(ok) * p.unit), std::to_string(s.trials), std::to_string(tr.failures)});
                line << " nmse_" << p.name << "=" << fmt(m, 4);
            }
            line << " failures=" << tr.failures;
            say(o, line.str());
        }
        const std::string f = path_in(o, s.output + ".csv");
        t.write(f);
        return {f};
    }

    static std::vector<std::string> run_estimate(const ExperimentSpec &s, const RunOptions &o, uint64_t seed)
    {
        const EstimatorScenario sc = s.estimator_scenario(s.tx(), s.rx());
        const PoseEstimator est(sc.config());
        auto rng = trial_rng(seed, 0, 0);
        const auto x = noisy_training(sc, s.snr_db.front(), rng);
        const PoseEstimate e = est.estimate(x);
        const std::string rep = path_in(o, s.output + "_diagnostics.txt");
        {
            std::ofstream f(rep, std::ios::binary);
            if (!f)
                throw config_error("cannot open " + rep + " for writing");
            f << "# training snr_db = " << s.snr_db.front() << "\n" << diagnostics_report(e, sc.config());
        }
        CsvTable t({"parameter", "estimate", "truth", "unit"});
        t.add_row({"r", csv_number(e.r_hat), csv_number(s.pose.distance), "m"});
        t.add_row({"gamma", csv_number(rad2deg(e.gamma_hat)), csv_number(rad2deg(tilt_angle(s.pose))), "deg"});
        t.add_row({"alpha", csv_number(rad2deg(e.alpha_hat)), csv_number(rad2deg(s.pose.elevation)), "deg"});
        t.add_row({"phi", csv_number(rad2deg(e.phi_hat)), csv_number(rad2deg(s.pose.azimuth)), "deg"});
        const std::string f = path_in(o, s.output + ".csv");
        t.write(f);
        say(o, "r_hat=" + fmt(e.r_hat, 8) + " gamma_hat_deg=" + fmt(rad2deg(e.gamma_hat)) + " alpha_hat_deg=" +
                   fmt(rad2deg(e.alpha_hat)) + " phi_hat_deg=" + fmt(rad2deg(e.phi_hat)));
        return {f, rep};
    }

    static std::vector<std::string> run_ber(const ExperimentSpec &s, const RunOptions &o, uint64_t seed)
    {
        CsvTable t({"snr_db", "curve", "data_modes", "training_modes", "ber", "ci_low", "ci_high", "errors", "bits",
                    "estimator_failures"});
        struct Curve
        {
            std::string name;
            long U, Ut;
            BerScenario sc;
        };
        std::vector<Curve> curves;
        for (long U : s.data_mode_counts)
        {
            BerScenario b;
            b.tx = s.tx();
            b.rx = s.rx();
            b.truth = s.pose;
            b.grid = s.grid;
            b.modes = ModeSet::centered((int)U);
            b.qam_order = s.qam_order;
            b.gain = s.gain;
            b.symbols_per_trial = s.symbols_per_trial;
            BerScenario al = b;
            al.truth.azimuth = al.truth.elevation = 0.0;
            curves.push_back({"aligned_ad", U, 0, al});
            if (s.include_true_pose)
                curves.push_back({"misaligned_bs_ad_true_pose", U, 0, b});
            for (long Ut : s.training_mode_counts)
            {
                BerScenario e = b;
                EstimatorScenario es = s.estimator_scenario(b.tx, b.rx);
                es.modes = ModeSet::centered((int)Ut);
                e.training = es;
                curves.push_back({"misaligned_bs_ad_estimated", U, Ut, e});
            }
        }
        for (size_t c = 0; c < curves.size(); ++c)
            for (size_t i = 0; i < s.snr_db.size(); ++i)
            {
                const BerPoint p = run_ber_point(curves[c].sc, s.snr_db[i], s.trials, seed, 1000 * c + i, o.workers);
                t.add_row({csv_number(s.snr_db[i]), curves[c].name, std::to_string(curves[c].U),
                           curves[c].Ut ? std::to_string(curves[c].Ut) : "", csv_number(p.ber.ber), csv_number(p.ber.ci.lo),
                           csv_number(p.ber.ci.hi), std::to_string(p.ber.errors), std::to_string(p.ber.bits),
                           std::to_string(p.estimator_failures)});
                say(o, curves[c].name + " U=" + std::to_string(curves[c].U) +
                           (curves[c].Ut ? " U~=" + std::to_string(curves[c].Ut) : std::string()) +
                           " snr_db=" + fmt(s.snr_db[i]) + " ber=" + fmt(p.ber.ber, 4));
            }
        const std::string f = path_in(o, s.output + ".csv");
        t.write(f);
        return {f};
    }

    static std::vector<std::string> run_se(const ExperimentSpec &s, const RunOptions &o, uint64_t seed)
    {
        SeScenario sc;
        sc.tx = s.ucca();
        sc.rx = s.ucca();
        sc.truth = s.pose;
        sc.grid = s.grid;
        sc.modes = s.modes;
        sc.gain = s.gain;
        sc.overhead = OverheadModel{s.coherence, s.training_symbols, (int)s.grid.size(), (int)s.training_grid.size()};
        sc.mimo_pilots = s.mimo_pilots;
        sc.cap_db = s.sinr_cap_db;
        if (s.estimated_pose)
        {
            const ArrayConfig outer = sc.tx.rings.back();
            sc.training = s.estimator_scenario(outer, sc.rx.rings.back());
        }
        CsvTable t({"snr_db", "metric", "value", "ci_low", "ci_high", "estimator_failures"});
        for (size_t i = 0; i < s.snr_db.size(); ++i)
        {
            const SePoint p = run_se_point(sc, s.snr_db[i], s.trials, seed, i, o.workers);
            const std::string snr = csv_number(s.snr_db[i]), nf = std::to_string(p.estimator_failures);
            t.add_row({snr, s.estimated_pose ? "oam_se_estimated_pose" : "oam_se_true_pose", csv_number(p.se),
                       csv_number(p.ci.lo), csv_number(p.ci.hi), nf});
            if (s.estimated_pose)
                t.add_row({snr, "oam_se_true_pose", csv_number(p.se_true_pose), "", "", ""});
            t.add_row({snr, "oam_se_no_steering", csv_number(p.se_no_steering), "", "", ""});
            t.add_row({snr, "mimo_ofdm_se", csv_number(p.se_mimo), "", "", ""});
            t.add_row({snr, "uplift", csv_number(p.se / p.se_mimo - 1.0), "", "", ""});
            say(o, "snr_db=" + fmt(s.snr_db[i]) + " oam_se=" + fmt(p.se, 5) + " mimo_se=" + fmt(p.se_mimo, 5) +
                       " uplift=" + fmt(100.0 * (p.se / p.se_mimo - 1.0), 4) + "%");
        }
        const std::string f = path_in(o, s.output + ".csv");
        t.write(f);
        return {f};
    }

    static std::string mode_tag(const std::vector<int> &ms)
    {
        std::string t = "modes";
        for (int l : ms)
            t += "_" + std::string(l < 0 ? "m" : "p") + std::to_string(std::abs(l));
        return t;
    }

    static std::vector<std::string> run_phase(const ExperimentSpec &s, const RunOptions &o)
    {
        PlaneSpec plane{s.plane_distance, s.plane_extent, s.resolution};
        const auto res = run_phase_maps(s.tx(), s.grid.k.front(), plane, s.mode_sets, s.analysis_radius);
        std::vector<std::string> files;
        CsvTable t({"modes", "winding", "arms", "dominant_power", "runner_up_power", "raster_winding", "pgm", "csv"});
        for (const auto &r : res)
        {
            const std::string stem = s.output + "_" + mode_tag(r.modes);
            const std::string pgm = path_in(o, stem + ".pgm"), csv = path_in(o, stem + ".csv");
            write_raster_pgm(r.raster, pgm);
            write_raster_csv(r.raster, csv);
            files.push_back(pgm);
            files.push_back(csv);
            std::string ms;
            for (int l : r.modes)
                ms += (ms.empty() ? "" : " ") + std::to_string(l);
            t.add_row({ms, csv_number(r.winding), std::to_string(r.arms.arms), csv_number(r.arms.dominant_power),
                       csv_number(r.arms.runner_up_power), csv_number(r.arms.mean_winding), stem + ".pgm", stem + ".csv"});
            say(o, "modes=[" + ms + "] winding=" + fmt(r.winding, 4) + " arms=" + std::to_string(r.arms.arms));
        }
        const std::string f = path_in(o, s.output + ".csv");
        t.write(f);
        files.insert(files.begin(), f);
        return files;
    }

    static std::vector<std::string> run_export(const ExperimentSpec &s, const RunOptions &o)
    {
        std::vector<arma::cx_mat> H;
        for (double k : s.grid.k)
            H.push_back(s.ring_radii.empty() ? build_channel(k, s.pose, s.tx(), s.rx(), 1.0, s.channel_model)
                                             : build_ucca_channel(k, s.pose, s.ucca(), s.ucca(), 1.0, s.channel_model));
        const auto files = export_channel_csv(o.out_dir, s.output, H);
        say(o, "exported " + std::to_string(files.size()) + " subcarrier channels of size " + std::to_string(H.front().n_rows) +
                   " x " + std::to_string(H.front().n_cols));
        return files;
    }

    std::vector<std::string> run_experiment(const ExperimentSpec &s, const RunOptions &o)
    {
        std::filesystem::create_directories(o.out_dir);
        const uint64_t seed = o.seed ? *o.seed : s.seed;
        switch (s.scenario)
        {
        case Scenario::nmse:
            return run_nmse(s, o, seed);
        case Scenario::estimate:
            return run_estimate(s, o, seed);
        case Scenario::ber:
            return run_ber(s, o, seed);
        case Scenario::se:
            return run_se(s, o, seed);
        case Scenario::phase_map:
            return run_phase(s, o);
        case Scenario::channel_export:
            return run_export(s, o);
        }
        return {};
    }
}
