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

#include "oamlink/bessel.hpp"

#include <algorithm>
#include <cmath>

namespace oam
{
    static long double series(int n, long double x)
    {
        long double h = x / 2.0L, term = 1.0L;
        for (int j = 1; j <= n; ++j)
            term *= h / (long double)j;
        const long double q = -h * h;
        long double sum = term;
        for (int m = 0; m < 500; ++m)
        {
            term *= q / ((long double)(m + 1) * (long double)(m + 1 + n));
            sum += term;
            if (std::fabs(term) < 1e-22L * std::fabs(sum) && (long double)m > h)
                break;
        }
        return sum;
    }

    static long double miller(int n, long double x)
    {
        const double top = std::max((double)n, (double)x);
        int M = 2 * ((int)(top + 30.0 + std::sqrt(60.0 * top)) / 2);
        long double jp = 0.0L, j = 1e-30L, norm = 0.0L, jn = 0.0L;
        const long double tox = 2.0L / x;
        for (int k = M; k > 0; --k)
        {
            long double jm = (long double)k * tox * j - jp;
            jp = j;
            j = jm; // j now holds J_{k-1}
            if (std::fabs(j) > 1e200L)
            {
                j *= 1e-200L;
                jp *= 1e-200L;
                norm *= 1e-200L;
                jn *= 1e-200L;
            }
            if (k - 1 == n)
                jn = j;
            if ((k - 1) % 2 == 0 && k - 1 > 0)
                norm += 2.0L * j;
        }
        norm += j;
        return jn / norm;
    }

    double bessel_j(int n, double x)
    {
        double sgn = 1.0;
        if (n < 0)
        {
            n = -n;
            if (n % 2)
                sgn = -sgn;
        }
        if (x < 0.0)
        {
            x = -x;
            if (n % 2)
                sgn = -sgn;
        }
        if (x == 0.0)
            return n == 0 ? 1.0 : 0.0;
        long double v = (x <= 12.0) ? series(n, (long double)x) : miller(n, (long double)x);
        return sgn * (double)v;
    }
}
