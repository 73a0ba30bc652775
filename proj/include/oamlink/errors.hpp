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

#ifndef OAMLINK_ERRORS_H
#define OAMLINK_ERRORS_H

#include <stdexcept>
#include <string>

namespace oam
{
    // Bad argument value or shape
    struct argument_error : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    // Inconsistent configuration (ring counts, overhead, spec fields)
    struct config_error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // Operation called outside its validity regime (e.g. far-field guard)
    struct precondition_error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // Geometrically impossible state reached internally
    struct invariant_error : std::logic_error
    {
        using std::logic_error::logic_error;
    };

    // Singular or badly conditioned gain matrices
    struct conditioning_error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // Estimator failure; what() starts with "[stage] "
    struct estimation_error : std::runtime_error
    {
        estimation_error(const std::string &stage, const std::string &msg)
            : std::runtime_error("[" + stage + "] " + msg), stage_(stage) {}
        const std::string &stage() const { return stage_; }

    private:
        std::string stage_;
    };
}

#endif
