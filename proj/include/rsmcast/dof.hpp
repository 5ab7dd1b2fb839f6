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

#ifndef RSMCAST_DOF_HPP
#define RSMCAST_DOF_HPP

#include "rsmcast/core_model.hpp"

#include <optional>
#include <span>
#include <utility>

namespace rsmcast::dof
{

/// Empirical high-SNR behaviour of one strategy on one system layout.
/// `empirical_slope` estimates the max-min DoF d = min_m d_m from finite-P
/// data; it is not the limit itself.
struct DofReport
{
    int n_min = 0;
    bool overloaded = false;
    double empirical_slope = 0.0; // bits per unit of log2(P)
    double predicted_dof = 0.0;
    Strategy strategy = Strategy::RS;
};

/// Smallest antenna count that lets every beam null all other groups,
/// 1 + K - G. Requires equal group sizes (throws AssumptionViolation).
int n_min(const SystemConfig &cfg);

bool is_overloaded(const SystemConfig &cfg);

/// DoF predicted for a strategy: NoRS 1 or 0 around N_min; RS 1, or the
/// 1/M lower bound when overloaded; SS 1/M.
double predicted_dof(const SystemConfig &cfg, Strategy s);

/// Zero-forcing across groups: p_m in null(H_bar_m) with ||p_m||^2 = P/M,
/// aligned with the projection of the group's summed channel. Returns
/// nullopt when some H_bar_m has a trivial null space.
std::optional<PrecoderSet> nulling_precoders(const SystemConfig &cfg, const ChannelSet &ch);

/// Largest |h_i^H p_m| / (||h_i|| ||p_m||) over users i outside group m.
double max_relative_leakage(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre);

/// Least-squares slope of rate against log2(P) over the upper half of the
/// power grid (at least two points). Points must be sorted by strictly
/// increasing P > 0. Throws ContractViolation on fewer than two points.
double empirical_dof(std::span<const std::pair<double, double>> rate_curve);

} // namespace rsmcast::dof

#endif
