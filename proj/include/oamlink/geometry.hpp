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

#ifndef OAMLINK_GEOMETRY_H
#define OAMLINK_GEOMETRY_H

#include <armadillo>
#include <vector>

namespace oam
{
    constexpr double pi = 3.141592653589793238462643383279502884;

    inline double deg2rad(double d) { return d * pi / 180.0; }
    inline double rad2deg(double r) { return r * 180.0 / pi; }

    // One uniform circular array
    struct ArrayConfig
    {
        int element_count = 1;
        double radius = 1.0;        // meters
        double initial_angle = 0.0; // radians, [0, 2pi)

        void validate() const;
    };

    // Concentric rings, inner to outer
    struct UccaConfig
    {
        std::vector<ArrayConfig> rings;

        void validate() const;
        int element_count() const { return rings.empty() ? 0 : rings.front().element_count; }
        int ring_count() const { return (int)rings.size(); }
    };

    // Transmitter placement seen from the receiver: distance r, azimuth phi, elevation alpha
    struct LinkPose
    {
        double distance = 1.0;
        double azimuth = 0.0;
        double elevation = 0.0;

        void validate() const;
    };

    // 2 pi (index - 1) / N + initial angle, wrapped to [0, 2pi); index is 1-based
    double element_angle(const ArrayConfig &config, int index);

    // gamma = arccos(cos(alpha) cos(phi))
    double tilt_angle(const LinkPose &pose);

    // phi = arccos(cos(gamma) / cos(alpha)), argument clamped to [-1, 1]
    double azimuth_from_tilt(double gamma, double elevation);

    // Exact element-to-element distance; m indexes the receive array, n the transmit array
    double pairwise_distance(const LinkPose &pose, const ArrayConfig &tx, const ArrayConfig &rx, int m, int n);

    struct FarFieldGuard
    {
        double ratio = 10.0;   // require r > ratio * max(R_t, R_r)
        bool warn_only = false; // when set, violations are counted instead of thrown
    };

    // Number of guard violations observed with warn_only set (process-wide counter)
    unsigned long long farfield_guard_warnings();

    // Four-term far-field expansion of the distance
    double pairwise_distance_farfield(const LinkPose &pose, const ArrayConfig &tx, const ArrayConfig &rx, int m, int n,
                                      const FarFieldGuard &guard = {});

    // All pairs, rows = receive elements, columns = transmit elements
    arma::mat distance_matrix(const LinkPose &pose, const ArrayConfig &tx, const ArrayConfig &rx, bool farfield = false,
                              const FarFieldGuard &guard = {});
}

#endif
