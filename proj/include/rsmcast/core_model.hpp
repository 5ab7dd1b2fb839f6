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

#ifndef RSMCAST_CORE_MODEL_HPP
#define RSMCAST_CORE_MODEL_HPP

#include "rsmcast/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace rsmcast
{

/// Transmitter/receiver layout of a multigroup multicast downlink.
///
/// Users are indexed 0..K-1 and groups 0..M-1. The groups must form a
/// partition of the user set: non-empty, pairwise disjoint, covering every
/// user exactly once. Group sizes may differ; only the DoF analysis needs
/// them equal.
class SystemConfig
{
  public:
    SystemConfig(std::size_t n_tx,
                 std::vector<std::vector<std::size_t>> groups,
                 double noise_power = 1.0,
                 double power_budget = 1.0);

    /// Contiguous groups: sizes {2, 2} gives {0,1} and {2,3}.
    static SystemConfig from_group_sizes(std::size_t n_tx,
                                         std::span<const std::size_t> sizes,
                                         double noise_power = 1.0,
                                         double power_budget = 1.0);

    static SystemConfig equal_groups(std::size_t n_tx, std::size_t n_groups, std::size_t group_size,
                                     double noise_power = 1.0, double power_budget = 1.0);

    std::size_t n_tx() const { return n_tx_; }
    std::size_t n_users() const { return group_of_.size(); }
    std::size_t n_groups() const { return groups_.size(); }
    const std::vector<std::vector<std::size_t>> &groups() const { return groups_; }
    const std::vector<std::size_t> &group(std::size_t m) const { return groups_.at(m); }
    std::size_t group_of(std::size_t k) const { return group_of_.at(k); }
    double noise_power() const { return noise_power_; }
    double power_budget() const { return power_budget_; }

    // Same layout, different budget (SNR sweeps).
    SystemConfig with_power_budget(double power_budget) const;
    SystemConfig with_noise_power(double noise_power) const;

    std::vector<std::size_t> group_sizes() const;
    bool has_equal_groups() const;

  private:
    std::size_t n_tx_;
    std::vector<std::vector<std::size_t>> groups_;
    std::vector<std::size_t> group_of_;
    double noise_power_;
    double power_budget_;
};

/// One complex channel vector h_k per user, each of length N.
struct ChannelSet
{
    std::vector<CVector> vectors;

    std::size_t n_users() const { return vectors.size(); }
    const CVector &operator[](std::size_t k) const { return vectors[k]; }

    // Throws ContractViolation if count or dimensions do not match cfg.
    void check(const SystemConfig &cfg) const;
};

/// Common precoder p_c plus one designated precoder per group.
/// A zero common precoder represents conventional (NoRS) transmission.
struct PrecoderSet
{
    CVector common;
    std::vector<CVector> designated;

    static PrecoderSet zeros(const SystemConfig &cfg);

    double total_power() const;
    void check(const SystemConfig &cfg) const;
};

struct ReceivePowers
{
    double desired = 0.0;             // S_k
    double interference = 0.0;        // I_k, includes noise
    double total = 0.0;               // T_k = S_k + I_k
    double common_desired = 0.0;      // S_c,k
    double common_total = 0.0;        // T_c,k = S_c,k + T_k
};

struct RateBreakdown
{
    std::vector<double> user_rates;        // R_k
    std::vector<double> common_user_rates; // R_c,k
    double common_rate = 0.0;              // R_c = min_k R_c,k
    std::vector<double> group_rates;       // C_m + min_{i in G_m} R_i
    std::vector<double> common_alloc;      // C_m
};

ReceivePowers receive_powers(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre,
                             std::size_t k);

/// Per-user SINRs and rates (log2), with the common stream decoded first
/// treating every designated stream as noise. An empty common_alloc means
/// all-zero allocation; otherwise it must have one entry per group.
RateBreakdown rates(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre,
                    std::span<const double> common_alloc = {});

// Worst group rate.
double mmf_objective(const RateBreakdown &breakdown);

/// Largest t with sum_m max(0, t - floor[m]) <= budget, i.e. the best
/// max-min value reachable by splitting a non-negative budget across groups
/// whose own rates are `floor`. Returns -inf if budget < 0.
/// If `alloc` is non-null it receives the optimal split.
double water_fill_min(std::span<const double> floor, double budget, std::vector<double> *alloc = nullptr);

} // namespace rsmcast

#endif
