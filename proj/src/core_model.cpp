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

#include "rsmcast/core_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace rsmcast
{

std::string_view to_string(Strategy s)
{
    switch (s)
    {
    case Strategy::RS:
        return "RS";
    case Strategy::NoRS:
        return "NoRS";
    case Strategy::SS:
        return "SS";
    }
    return "?";
}

Strategy parse_strategy(std::string_view name)
{
    std::string lower;
    for (char c : name)
        if (!std::isspace(static_cast<unsigned char>(c)))
            lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "rs")
        return Strategy::RS;
    if (lower == "nors")
        return Strategy::NoRS;
    if (lower == "ss")
        return Strategy::SS;
    throw ContractViolation("unknown strategy '" + std::string(name) + "' (expected RS, NoRS or SS)");
}

std::vector<Strategy> parse_strategy_list(std::string_view list)
{
    std::vector<Strategy> out;
    std::size_t pos = 0;
    while (pos <= list.size())
    {
        auto next = list.find(',', pos);
        if (next == std::string_view::npos)
            next = list.size();
        auto item = list.substr(pos, next - pos);
        if (!item.empty())
        {
            auto s = parse_strategy(item);
            if (std::find(out.begin(), out.end(), s) == out.end())
                out.push_back(s);
        }
        pos = next + 1;
    }
    if (out.empty())
        throw ContractViolation("empty strategy list");
    return out;
}

// ---------------------------------------------------------------------------

SystemConfig::SystemConfig(std::size_t n_tx, std::vector<std::vector<std::size_t>> groups, double noise_power,
                           double power_budget)
    : n_tx_(n_tx), groups_(std::move(groups)), noise_power_(noise_power), power_budget_(power_budget)
{
    if (n_tx_ == 0)
        throw ContractViolation("n_tx must be positive");
    if (groups_.empty())
        throw ContractViolation("at least one group is required");
    if (!(noise_power_ > 0.0) || !std::isfinite(noise_power_))
        throw ContractViolation("noise_power must be positive");
    if (!(power_budget_ > 0.0) || !std::isfinite(power_budget_))
        throw ContractViolation("power_budget must be positive");

    std::size_t K = 0;
    for (const auto &g : groups_)
    {
        if (g.empty())
            throw ContractViolation("groups must be non-empty");
        K += g.size();
    }
    group_of_.assign(K, std::numeric_limits<std::size_t>::max());
    for (std::size_t m = 0; m < groups_.size(); ++m)
    {
        for (std::size_t k : groups_[m])
        {
            if (k >= K)
                throw ContractViolation("user index " + std::to_string(k) + " outside 0.." + std::to_string(K - 1));
            if (group_of_[k] != std::numeric_limits<std::size_t>::max())
                throw ContractViolation("user " + std::to_string(k) + " belongs to more than one group");
            group_of_[k] = m;
        }
    }
}

SystemConfig SystemConfig::from_group_sizes(std::size_t n_tx, std::span<const std::size_t> sizes, double noise_power,
                                            double power_budget)
{
    std::vector<std::vector<std::size_t>> groups;
    std::size_t next = 0;
    for (std::size_t sz : sizes)
    {
        std::vector<std::size_t> g(sz);
        std::iota(g.begin(), g.end(), next);
        next += sz;
        groups.push_back(std::move(g));
    }
    return SystemConfig(n_tx, std::move(groups), noise_power, power_budget);
}

SystemConfig SystemConfig::equal_groups(std::size_t n_tx, std::size_t n_groups, std::size_t group_size,
                                        double noise_power, double power_budget)
{
    std::vector<std::size_t> sizes(n_groups, group_size);
    return from_group_sizes(n_tx, sizes, noise_power, power_budget);
}

SystemConfig SystemConfig::with_power_budget(double power_budget) const
{
    return SystemConfig(n_tx_, groups_, noise_power_, power_budget);
}

SystemConfig SystemConfig::with_noise_power(double noise_power) const
{
    return SystemConfig(n_tx_, groups_, noise_power, power_budget_);
}

std::vector<std::size_t> SystemConfig::group_sizes() const
{
    std::vector<std::size_t> sizes;
    for (const auto &g : groups_)
        sizes.push_back(g.size());
    return sizes;
}

bool SystemConfig::has_equal_groups() const
{
    return std::all_of(groups_.begin(), groups_.end(),
                       [&](const auto &g) { return g.size() == groups_.front().size(); });
}

// ---------------------------------------------------------------------------

void ChannelSet::check(const SystemConfig &cfg) const
{
    if (vectors.size() != cfg.n_users())
        throw ContractViolation("channel set has " + std::to_string(vectors.size()) + " vectors, expected " +
                                std::to_string(cfg.n_users()));
    for (const auto &h : vectors)
        if (static_cast<std::size_t>(h.size()) != cfg.n_tx())
            throw ContractViolation("channel vector of dimension " + std::to_string(h.size()) + ", expected " +
                                    std::to_string(cfg.n_tx()));
}

PrecoderSet PrecoderSet::zeros(const SystemConfig &cfg)
{
    const auto N = static_cast<Eigen::Index>(cfg.n_tx());
    PrecoderSet p;
    p.common = CVector::Zero(N);
    p.designated.assign(cfg.n_groups(), CVector::Zero(N));
    return p;
}

double PrecoderSet::total_power() const
{
    double total = common.squaredNorm();
    for (const auto &p : designated)
        total += p.squaredNorm();
    return total;
}

void PrecoderSet::check(const SystemConfig &cfg) const
{
    const auto N = static_cast<Eigen::Index>(cfg.n_tx());
    if (common.size() != N)
        throw ContractViolation("common precoder has wrong dimension");
    if (designated.size() != cfg.n_groups())
        throw ContractViolation("expected one designated precoder per group");
    for (const auto &p : designated)
        if (p.size() != N)
            throw ContractViolation("designated precoder has wrong dimension");
}

// ---------------------------------------------------------------------------

namespace
{

ReceivePowers powers_unchecked(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre, std::size_t k)
{
    const CVector &h = ch.vectors[k];
    const std::size_t mu = cfg.group_of(k);
    ReceivePowers out;
    out.interference = cfg.noise_power();
    for (std::size_t m = 0; m < pre.designated.size(); ++m)
    {
        const double gain = std::norm(h.dot(pre.designated[m])); // dot() conjugates h
        if (m == mu)
            out.desired = gain;
        else
            out.interference += gain;
    }
    out.total = out.desired + out.interference;
    out.common_desired = std::norm(h.dot(pre.common));
    out.common_total = out.common_desired + out.total;
    return out;
}

} // namespace

ReceivePowers receive_powers(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre, std::size_t k)
{
    ch.check(cfg);
    pre.check(cfg);
    if (k >= cfg.n_users())
        throw ContractViolation("user index out of range");
    return powers_unchecked(cfg, ch, pre, k);
}

RateBreakdown rates(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre,
                    std::span<const double> common_alloc)
{
    ch.check(cfg);
    pre.check(cfg);
    const std::size_t K = cfg.n_users();
    const std::size_t M = cfg.n_groups();
    if (!common_alloc.empty() && common_alloc.size() != M)
        throw ContractViolation("common_alloc must have one entry per group");

    RateBreakdown out;
    out.user_rates.resize(K);
    out.common_user_rates.resize(K);
    for (std::size_t k = 0; k < K; ++k)
    {
        const auto pw = powers_unchecked(cfg, ch, pre, k);
        out.user_rates[k] = std::log2(1.0 + pw.desired / pw.interference);
        // interference for the common stream is T_k
        out.common_user_rates[k] = std::log2(1.0 + pw.common_desired / pw.total);
    }
    out.common_rate = *std::min_element(out.common_user_rates.begin(), out.common_user_rates.end());

    out.common_alloc.assign(M, 0.0);
    if (!common_alloc.empty())
        std::copy(common_alloc.begin(), common_alloc.end(), out.common_alloc.begin());

    out.group_rates.resize(M);
    for (std::size_t m = 0; m < M; ++m)
    {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i : cfg.group(m))
            worst = std::min(worst, out.user_rates[i]);
        out.group_rates[m] = out.common_alloc[m] + worst;
    }
    return out;
}

double mmf_objective(const RateBreakdown &breakdown)
{
    if (breakdown.group_rates.empty())
        throw ContractViolation("breakdown has no groups");
    return *std::min_element(breakdown.group_rates.begin(), breakdown.group_rates.end());
}

double water_fill_min(std::span<const double> floor, double budget, std::vector<double> *alloc)
{
    if (floor.empty())
        throw ContractViolation("water_fill_min needs at least one group");
    if (budget < 0.0)
        return -std::numeric_limits<double>::infinity();

    std::vector<double> sorted(floor.begin(), floor.end());
    std::sort(sorted.begin(), sorted.end());
    // raise the lowest j+1 levels together until the budget runs out
    double level = sorted[0];
    double remaining = budget;
    for (std::size_t j = 0; j < sorted.size(); ++j)
    {
        const double width = static_cast<double>(j + 1);
        const double next = (j + 1 < sorted.size()) ? sorted[j + 1] : std::numeric_limits<double>::infinity();
        const double need = (next - level) * width;
        if (need >= remaining)
        {
            level += remaining / width;
            remaining = 0.0;
            break;
        }
        remaining -= need;
        level = next;
    }

    if (alloc)
    {
        alloc->resize(floor.size());
        for (std::size_t m = 0; m < floor.size(); ++m)
            (*alloc)[m] = std::max(0.0, level - floor[m]);
    }
    return level;
}

} // namespace rsmcast
