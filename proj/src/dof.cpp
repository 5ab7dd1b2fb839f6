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

#include "rsmcast/dof.hpp"

#include <algorithm>
#include <cmath>

namespace rsmcast::dof
{

namespace
{

constexpr double kRankTol = 1e-10;

} // namespace

int n_min(const SystemConfig &cfg)
{
    if (!cfg.has_equal_groups())
        throw AssumptionViolation("N_min is defined for equal group sizes only");
    const auto K = static_cast<int>(cfg.n_users());
    const auto G = static_cast<int>(cfg.group(0).size());
    return 1 + K - G;
}

bool is_overloaded(const SystemConfig &cfg)
{
    return static_cast<int>(cfg.n_tx()) < n_min(cfg);
}

double predicted_dof(const SystemConfig &cfg, Strategy s)
{
    const bool overloaded = is_overloaded(cfg);
    const double per_group = 1.0 / static_cast<double>(cfg.n_groups());
    switch (s)
    {
    case Strategy::NoRS:
        return overloaded ? 0.0 : 1.0;
    case Strategy::RS:
        return overloaded ? per_group : 1.0;
    case Strategy::SS:
        return per_group;
    }
    return 0.0;
}

std::optional<PrecoderSet> nulling_precoders(const SystemConfig &cfg, const ChannelSet &ch)
{
    ch.check(cfg);
    const auto N = static_cast<Eigen::Index>(cfg.n_tx());
    const std::size_t M = cfg.n_groups();
    const double amp = std::sqrt(cfg.power_budget() / static_cast<double>(M));

    PrecoderSet pre = PrecoderSet::zeros(cfg);
    for (std::size_t m = 0; m < M; ++m)
    {
        // rows h_i^H for every user outside group m
        std::vector<std::size_t> others;
        for (std::size_t i = 0; i < cfg.n_users(); ++i)
            if (cfg.group_of(i) != m)
                others.push_back(i);

        Eigen::MatrixXcd null_basis;
        if (others.empty())
        {
            null_basis = Eigen::MatrixXcd::Identity(N, N);
        }
        else
        {
            Eigen::MatrixXcd Hbar_h(static_cast<Eigen::Index>(others.size()), N);
            for (std::size_t r = 0; r < others.size(); ++r)
                Hbar_h.row(static_cast<Eigen::Index>(r)) = ch[others[r]].adjoint();
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Hbar_h, Eigen::ComputeFullV);
            const auto &sv = svd.singularValues();
            const double cutoff = kRankTol * (sv.size() > 0 ? sv[0] : 0.0);
            Eigen::Index rank = 0;
            for (Eigen::Index i = 0; i < sv.size(); ++i)
                if (sv[i] > cutoff)
                    ++rank;
            if (rank >= N)
                return std::nullopt;
            null_basis = svd.matrixV().rightCols(N - rank);
        }

        CVector target = CVector::Zero(N);
        for (std::size_t i : cfg.group(m))
            target += ch[i];
        CVector dir = null_basis * (null_basis.adjoint() * target);
        if (dir.norm() <= kRankTol * std::max(1.0, target.norm()))
            dir = null_basis.col(0);
        pre.designated[m] = amp * dir / dir.norm();
    }
    return pre;
}

double max_relative_leakage(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre)
{
    ch.check(cfg);
    pre.check(cfg);
    double worst = 0.0;
    for (std::size_t m = 0; m < cfg.n_groups(); ++m)
    {
        const double pn = pre.designated[m].norm();
        for (std::size_t i = 0; i < cfg.n_users(); ++i)
        {
            if (cfg.group_of(i) == m)
                continue;
            const double scale = ch[i].norm() * pn;
            if (scale > 0.0)
                worst = std::max(worst, std::abs(ch[i].dot(pre.designated[m])) / scale);
        }
    }
    return worst;
}

double empirical_dof(std::span<const std::pair<double, double>> rate_curve)
{
    if (rate_curve.size() < 2)
        throw ContractViolation("empirical DoF needs at least two (P, rate) points");
    for (std::size_t i = 0; i < rate_curve.size(); ++i)
    {
        if (!(rate_curve[i].first > 0.0))
            throw ContractViolation("power values must be positive");
        if (i > 0 && !(rate_curve[i].first > rate_curve[i - 1].first))
            throw ContractViolation("power values must be strictly increasing");
    }
    if (rate_curve.back().first < 1e3)
        throw ContractViolation("empirical DoF needs the grid to reach P >= 1e3");

    const std::size_t n = rate_curve.size();
    const std::size_t used = std::max<std::size_t>(2, (n + 1) / 2);
    const auto top = rate_curve.subspan(n - used);

    double mx = 0.0, my = 0.0;
    for (const auto &[P, r] : top)
    {
        mx += std::log2(P);
        my += r;
    }
    mx /= static_cast<double>(used);
    my /= static_cast<double>(used);
    double sxy = 0.0, sxx = 0.0;
    for (const auto &[P, r] : top)
    {
        const double dx = std::log2(P) - mx;
        sxy += dx * (r - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

} // namespace rsmcast::dof
