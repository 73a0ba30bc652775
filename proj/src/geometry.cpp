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

#include "oamlink/geometry.hpp"
#include "oamlink/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

namespace oam
{
    static std::atomic<unsigned long long> guard_warnings{0};

    void ArrayConfig::validate() const
    {
        if (element_count < 1)
            throw argument_error("element_count must be >= 1, got " + std::to_string(element_count));
        if (!(radius > 0.0) || !std::isfinite(radius))
            throw argument_error("radius must be > 0, got " + std::to_string(radius));
        if (!(initial_angle >= 0.0 && initial_angle < 2.0 * pi))
            throw argument_error("initial_angle must be in [0, 2pi), got " + std::to_string(initial_angle));
    }

    void UccaConfig::validate() const
    {
        if (rings.empty())
            throw config_error("UCCA needs at least one ring");
        for (size_t i = 0; i < rings.size(); ++i)
        {
            rings[i].validate();
            if (rings[i].element_count != rings[0].element_count)
                throw config_error("UCCA rings must share element_count (ring " + std::to_string(i + 1) + ")");
            if (i > 0 && !(rings[i].radius > rings[i - 1].radius))
                throw config_error("UCCA ring radii must be strictly increasing (ring " + std::to_string(i + 1) + ")");
        }
    }

    void LinkPose::validate() const
    {
        if (!(distance > 0.0) || !std::isfinite(distance))
            throw argument_error("distance must be > 0");
        if (!(std::abs(azimuth) < 0.5 * pi))
            throw argument_error("azimuth must lie in (-pi/2, pi/2)");
        if (!(std::abs(elevation) < 0.5 * pi))
            throw argument_error("elevation must lie in (-pi/2, pi/2)");
    }

    double element_angle(const ArrayConfig &config, int index)
    {
        if (index < 1 || index > config.element_count)
            throw argument_error("element index " + std::to_string(index) + " outside [1, " +
                                 std::to_string(config.element_count) + "]");
        double a = 2.0 * pi * double(index - 1) / double(config.element_count) + config.initial_angle;
        a = std::fmod(a, 2.0 * pi);
        if (a < 0.0)
            a += 2.0 * pi;
        return a;
    }

    double tilt_angle(const LinkPose &pose)
    {
        double c = std::cos(pose.elevation) * std::cos(pose.azimuth);
        return std::acos(std::clamp(c, -1.0, 1.0));
    }

    double azimuth_from_tilt(double gamma, double elevation)
    {
        double c = std::cos(gamma) / std::cos(elevation);
        return std::acos(std::clamp(c, -1.0, 1.0));
    }

    double pairwise_distance(const LinkPose &pose, const ArrayConfig &tx, const ArrayConfig &rx, int m, int n)
    {
        const double r = pose.distance, al = pose.elevation, az = pose.azimuth;
        const double g = tilt_angle(pose);
        const double Rt = tx.radius, Rr = rx.radius;
        const double th = element_angle(rx, m), ph = element_angle(tx, n);
        const double ct = std::cos(th), st = std::sin(th), cp = std::cos(ph), sp = std::sin(ph);
        const double ca = std::cos(al), sa = std::sin(al), cz = std::cos(az), sz = std::sin(az);

        double d2 = Rt * Rt + Rr * Rr + r * r - 2.0 * r * Rr * ct * cz * sa;
        d2 -= 2.0 * Rt * Rr * (cp * ct * std::cos(g) + sp * st * cz);
        d2 -= 2.0 * Rt * Rr * (sp * ct * sz - cp * st * sz * ca);
        d2 += 2.0 * r * Rr * st * sz * sa;
        if (!(d2 > 0.0))
            throw invariant_error("negative radicand in element distance");
        return std::sqrt(d2);
    }

    unsigned long long farfield_guard_warnings() { return guard_warnings.load(); }

    static void check_guard(const LinkPose &pose, const ArrayConfig &tx, const ArrayConfig &rx, const FarFieldGuard &guard)
    {
        if (pose.distance > guard.ratio * std::max(tx.radius, rx.radius))
            return;
        if (guard.warn_only)
        {
            ++guard_warnings;
            return;
        }
        throw precondition_error("far-field guard violated: r = " + std::to_string(pose.distance) + " <= " +
                                 std::to_string(guard.ratio) + " * max radius");
    }

    double pairwise_distance_farfield(const LinkPose &pose, const ArrayConfig &tx, const ArrayConfig &rx, int m, int n,
                                      const FarFieldGuard &guard)
    {
        check_guard(pose, tx, rx, guard);
        const double r = pose.distance, al = pose.elevation, az = pose.azimuth;
        const double g = tilt_angle(pose);
        const double Rt = tx.radius, Rr = rx.radius;
        const double th = element_angle(rx, m), ph = element_angle(tx, n);
        const double ct = std::cos(th), st = std::sin(th), cp = std::cos(ph), sp = std::sin(ph);
        const double ca = std::cos(al), sa = std::sin(al), cz = std::cos(az), sz = std::sin(az);

        double d = r;
        d -= Rt * Rr / r * (cp * ct * std::cos(g) + sp * st * cz);
        d -= Rt * Rr / r * (sp * ct * sz - cp * st * sz * ca);
        d -= Rr * (ct * cz * sa - st * sz * sa);
        return d;
    }

    arma::mat distance_matrix(const LinkPose &pose, const ArrayConfig &tx, const ArrayConfig &rx, bool farfield,
                              const FarFieldGuard &guard)
    {
        arma::mat D(rx.element_count, tx.element_count);
        for (int m = 1; m <= rx.element_count; ++m)
            for (int n = 1; n <= tx.element_count; ++n)
                D(m - 1, n - 1) = farfield ? pairwise_distance_farfield(pose, tx, rx, m, n, guard)
                                           : pairwise_distance(pose, tx, rx, m, n);
        return D;
    }
}
