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

// Test-only generators and reference computations. Nothing here calls into
// the library's numerical code; the oracles are written out from the
// scalar definitions so they can be compared against it.

#ifndef RSMCAST_TESTS_ORACLES_HPP
#define RSMCAST_TESTS_ORACLES_HPP

#include "rsmcast/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace rsmcast::testing
{

// ---------------------------------------------------------------- generators

class Gen
{
  public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::size_t size(std::size_t lo, std::size_t hi)
    {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    std::uint64_t seed() { return rng_(); }

    Complex complex()
    {
        std::normal_distribution<double> d(0.0, std::sqrt(0.5));
        const double re = d(rng_);
        return {re, d(rng_)};
    }

    CVector vector(std::size_t n)
    {
        CVector v(static_cast<Eigen::Index>(n));
        for (auto &x : v)
            x = complex();
        return v;
    }

    /// Random partition of K users into M non-empty groups (sizes may differ).
    SystemConfig config(std::size_t max_tx, std::size_t max_users, double noise = 1.0, double power = 1.0)
    {
        const std::size_t N = size(1, max_tx);
        const std::size_t K = size(1, max_users);
        const std::size_t M = size(1, K);
        std::vector<std::size_t> perm(K);
        for (std::size_t k = 0; k < K; ++k)
            perm[k] = k;
        std::shuffle(perm.begin(), perm.end(), rng_);
        std::vector<std::vector<std::size_t>> groups(M);
        for (std::size_t m = 0; m < M; ++m)
            groups[m].push_back(perm[m]);
        for (std::size_t k = M; k < K; ++k)
            groups[size(0, M - 1)].push_back(perm[k]);
        return SystemConfig(N, std::move(groups), noise, power);
    }

    ChannelSet channels(const SystemConfig &cfg)
    {
        ChannelSet ch;
        for (std::size_t k = 0; k < cfg.n_users(); ++k)
            ch.vectors.push_back(vector(cfg.n_tx()));
        return ch;
    }

    /// Precoders at a random fraction of the budget. `with_common` off gives
    /// the conventional (NoRS) shape.
    PrecoderSet precoders(const SystemConfig &cfg, bool with_common = true)
    {
        PrecoderSet p = PrecoderSet::zeros(cfg);
        if (with_common)
            p.common = vector(cfg.n_tx());
        for (auto &d : p.designated)
            d = vector(cfg.n_tx());
        const double scale = std::sqrt(uniform(0.05, 1.0) * cfg.power_budget() / p.total_power());
        p.common *= scale;
        for (auto &d : p.designated)
            d *= scale;
        return p;
    }

    std::mt19937_64 &engine() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

// ------------------------------------------------------------------- oracles

/// h^H p written out element by element.
inline Complex inner(const CVector &h, const CVector &p)
{
    Complex acc(0.0, 0.0);
    for (Eigen::Index i = 0; i < h.size(); ++i)
        acc += std::conj(h[i]) * p[i];
    return acc;
}

struct PowerOracle
{
    double S, I, T, Sc, Tc;
};

inline PowerOracle powers_oracle(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre, std::size_t k)
{
    const std::size_t mu = cfg.group_of(k);
    PowerOracle o{};
    o.S = std::norm(inner(ch.vectors[k], pre.designated[mu]));
    o.I = cfg.noise_power();
    for (std::size_t m = 0; m < cfg.n_groups(); ++m)
        if (m != mu)
            o.I += std::norm(inner(ch.vectors[k], pre.designated[m]));
    o.T = o.S + o.I;
    o.Sc = pre.common.size() > 0 ? std::norm(inner(ch.vectors[k], pre.common)) : 0.0;
    o.Tc = o.Sc + o.T;
    return o;
}

/// max over splits C >= 0, sum C <= budget of min_m (floor_m + C_m), by bisection.
inline double max_min_split(const std::vector<double> &floor, double budget)
{
    if (budget < 0.0)
        return -std::numeric_limits<double>::infinity();
    double lo = *std::min_element(floor.begin(), floor.end());
    double hi = lo + budget;
    for (int it = 0; it < 200; ++it)
    {
        const double t = 0.5 * (lo + hi);
        double need = 0.0;
        for (double f : floor)
            need += std::max(0.0, t - f);
        (need <= budget ? lo : hi) = t;
    }
    return lo;
}

/// Exact MMF rate of RS transmission with the common allocation chosen optimally.
inline double mmf_oracle(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre)
{
    std::vector<double> floor(cfg.n_groups(), std::numeric_limits<double>::infinity());
    double rc = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cfg.n_users(); ++k)
    {
        const auto o = powers_oracle(cfg, ch, pre, k);
        auto &f = floor[cfg.group_of(k)];
        f = std::min(f, std::log2(1.0 + o.S / o.I));
        rc = std::min(rc, std::log2(1.0 + o.Sc / o.T));
    }
    return max_min_split(floor, rc);
}

/// Scalar two-user, two-group channel h_1 = h_2 = 1: every user sees
/// T = 1 + q_1 + q_2 and the common stream is heard identically by both.
/// Brute-force MMF rate over (q_1, q_2) with q_c = P - q_1 - q_2 (the common
/// stream is decoded first, so spending leftover power on it never hurts).
/// A coarse pass on the step-0.01 P grid is refined twice around the best cell.
inline double scalar_two_group_oracle(double P, bool rate_splitting)
{
    auto value = [&](double q1, double q2) {
        q1 = std::clamp(q1, 0.0, P);
        q2 = std::clamp(q2, 0.0, P - q1);
        const double qc = rate_splitting ? P - q1 - q2 : 0.0;
        const double T = 1.0 + q1 + q2;
        const double r1 = std::log2(1.0 + q1 / (1.0 + q2));
        const double r2 = std::log2(1.0 + q2 / (1.0 + q1));
        const double rc = std::log2(1.0 + qc / T);
        return max_min_split({r1, r2}, rc);
    };
    double best = -1.0, b1 = 0.0, b2 = 0.0;
    double step = 0.01 * P;
    double lo1 = 0.0, hi1 = P, lo2 = 0.0, hi2 = P;
    for (int pass = 0; pass < 3; ++pass)
    {
        for (double q1 = lo1; q1 <= hi1 + 1e-12; q1 += step)
            for (double q2 = lo2; q2 <= hi2 + 1e-12; q2 += step)
            {
                if (q1 + q2 > P + 1e-12)
                    continue;
                const double v = value(q1, q2);
                if (v > best)
                {
                    best = v;
                    b1 = q1;
                    b2 = q2;
                }
            }
        lo1 = std::max(0.0, b1 - step);
        hi1 = std::min(P, b1 + step);
        lo2 = std::max(0.0, b2 - step);
        hi2 = std::min(P, b2 + step);
        step /= 20.0;
    }
    return best;
}

} // namespace rsmcast::testing

#endif
