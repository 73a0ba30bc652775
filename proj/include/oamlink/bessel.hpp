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

#ifndef OAMLINK_BESSEL_H
#define OAMLINK_BESSEL_H

namespace oam
{
    // Bessel function of the first kind J_n(x), integer order, real argument.
    // Power series (extended precision) for small |x|, Miller downward recurrence otherwise.
    double bessel_j(int n, double x);
}

#endif
