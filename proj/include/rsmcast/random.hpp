// SPDX-License-Identifier: Apache-2.0
//
// rsmcast - rate-splitting max-min fair multigroup multicast beamforming
// Copyright (C) 2026 The rsmcast Authors
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

#ifndef RSMCAST_RANDOM_HPP
#define RSMCAST_RANDOM_HPP

#include "rsmcast/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace rsmcast
{

// splitmix64 finalizer
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream seed for (master, index) pairs.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// CN(0, 1) entries: real and imaginary parts N(0, 1/2).
inline CVector complex_gaussian(std::mt19937_64 &rng, Eigen::Index n)
{
    std::normal_distribution<double> dist(0.0, std::sqrt(0.5));
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const double re = dist(rng);
        const double im = dist(rng);
        v[i] = Complex(re, im);
    }
    return v;
}

} // namespace rsmcast

#endif
