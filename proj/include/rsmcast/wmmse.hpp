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

#ifndef RSMCAST_WMMSE_HPP
#define RSMCAST_WMMSE_HPP

#include "rsmcast/core_model.hpp"

#include <string_view>
#include <vector>

namespace rsmcast::wmmse
{

/// Receive equalizers: g_c,k for the common stream, g_k for the designated
/// stream (applied after the common stream has been cancelled).
struct EqualizerSet
{
    std::vector<Complex> common;
    std::vector<Complex> designated;
};

/// MSE weights u_c,k and u_k, strictly positive.
struct WeightSet
{
    std::vector<double> common;
    std::vector<double> designated;
};

struct StreamMse
{
    double common = 0.0;     // eps_c,k
    double designated = 0.0; // eps_k
};

/// Per-user MMSE values, eps^MMSE = I / T for each stream.
struct MmseValues
{
    std::vector<double> common;
    std::vector<double> designated;
};

// Weight clamp: [kWeightFloor, 1 / kMinMse].
inline constexpr double kWeightFloor = 1.0;
inline constexpr double kMinMse = 1e-12;

/// Mean square errors of user k under arbitrary equalizers:
///   eps_c,k = |g_c,k|^2 T_c,k - 2 Re{g_c,k h_k^H p_c} + 1
///   eps_k   = |g_k|^2 T_k     - 2 Re{g_k h_k^H p_mu(k)} + 1
StreamMse mse(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre, const EqualizerSet &eq,
              std::size_t k);

EqualizerSet mmse_equalizers(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre);

MmseValues mmse_values(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre);

/// u = 1 / eps^MMSE, clamped to [kWeightFloor, 1 / kMinMse].
/// Throws ContractViolation for eps <= 0.
WeightSet mmse_weights(const MmseValues &eps);

/// xi = u * eps - log2(u). Throws ContractViolation for u <= 0.
double augmented_wmse(double eps, double u);

/// How a (eps, u) pair is turned into a rate estimate in bits.
///   log2:    1 - (u eps - log2 u). Equals R at u = 1/eps^MMSE, but its
///            minimum over u sits at 1/(eps ln 2), so for other precoders
///            it can overshoot the rate by up to 1 - 1/ln 2 - log2(ln 2)
///            (about 0.086 bits).
///   natural: (1 - u eps + ln u) / ln 2. Same value at the MMSE point and
///            a lower bound on R everywhere.
enum class WmseForm
{
    log2,
    natural
};

std::string_view to_string(WmseForm f);
WmseForm parse_wmse_form(std::string_view name);

/// Rate estimate of a stream with MSE eps under weight u (see WmseForm).
/// Throws ContractViolation for u <= 0.
double rate_surrogate(double eps, double u, WmseForm form);

/// max_k |xi^MMSE - (1 - R)| over both stream types, with the MMSE
/// equalizers and unclamped weights u = 1 / eps^MMSE.
double rate_wmmse_gap(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre);

} // namespace rsmcast::wmmse

#endif
