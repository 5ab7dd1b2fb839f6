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

#include "rsmcast/wmmse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace rsmcast::wmmse
{

StreamMse mse(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre, const EqualizerSet &eq,
              std::size_t k)
{
    const auto pw = receive_powers(cfg, ch, pre, k);
    if (eq.common.size() != cfg.n_users() || eq.designated.size() != cfg.n_users())
        throw ContractViolation("equalizer set must hold one entry per user and stream");

    const CVector &h = ch[k];
    const Complex hc = h.dot(pre.common);
    const Complex hd = h.dot(pre.designated[cfg.group_of(k)]);
    const Complex gc = eq.common[k];
    const Complex gd = eq.designated[k];

    StreamMse out;
    out.common = std::norm(gc) * pw.common_total - 2.0 * std::real(gc * hc) + 1.0;
    out.designated = std::norm(gd) * pw.total - 2.0 * std::real(gd * hd) + 1.0;
    return out;
}

EqualizerSet mmse_equalizers(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre)
{
    const std::size_t K = cfg.n_users();
    EqualizerSet eq;
    eq.common.resize(K);
    eq.designated.resize(K);
    for (std::size_t k = 0; k < K; ++k)
    {
        const auto pw = receive_powers(cfg, ch, pre, k);
        const CVector &h = ch[k];
        // p^H h = conj(h^H p)
        eq.common[k] = std::conj(h.dot(pre.common)) / pw.common_total;
        eq.designated[k] = std::conj(h.dot(pre.designated[cfg.group_of(k)])) / pw.total;
    }
    return eq;
}

MmseValues mmse_values(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre)
{
    const std::size_t K = cfg.n_users();
    MmseValues out;
    out.common.resize(K);
    out.designated.resize(K);
    for (std::size_t k = 0; k < K; ++k)
    {
        const auto pw = receive_powers(cfg, ch, pre, k);
        out.common[k] = pw.total / pw.common_total;
        out.designated[k] = pw.interference / pw.total;
    }
    return out;
}

namespace
{

double clamped_weight(double eps)
{
    if (!(eps > 0.0))
        throw ContractViolation("MMSE value must be positive to form a weight");
    return std::clamp(1.0 / eps, kWeightFloor, 1.0 / kMinMse);
}

} // namespace

WeightSet mmse_weights(const MmseValues &eps)
{
    WeightSet w;
    w.common.reserve(eps.common.size());
    w.designated.reserve(eps.designated.size());
    for (double e : eps.common)
        w.common.push_back(clamped_weight(e));
    for (double e : eps.designated)
        w.designated.push_back(clamped_weight(e));
    return w;
}

double augmented_wmse(double eps, double u)
{
    if (!(u > 0.0))
        throw ContractViolation("WMSE weight must be positive");
    return u * eps - std::log2(u);
}

std::string_view to_string(WmseForm f)
{
    return f == WmseForm::log2 ? "log2" : "natural";
}

WmseForm parse_wmse_form(std::string_view name)
{
    if (name == "log2")
        return WmseForm::log2;
    if (name == "natural")
        return WmseForm::natural;
    throw ContractViolation("unknown WMSE form '" + std::string(name) + "' (expected log2 or natural)");
}

double rate_surrogate(double eps, double u, WmseForm form)
{
    if (!(u > 0.0))
        throw ContractViolation("WMSE weight must be positive");
    if (form == WmseForm::log2)
        return 1.0 - augmented_wmse(eps, u);
    return (1.0 - u * eps + std::log(u)) / std::numbers::ln2;
}

double rate_wmmse_gap(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre)
{
    const auto eq = mmse_equalizers(cfg, ch, pre);
    const auto br = rates(cfg, ch, pre);
    double gap = 0.0;
    for (std::size_t k = 0; k < cfg.n_users(); ++k)
    {
        const auto e = mse(cfg, ch, pre, eq, k);
        const double xi_c = augmented_wmse(e.common, 1.0 / e.common);
        const double xi_d = augmented_wmse(e.designated, 1.0 / e.designated);
        gap = std::max(gap, std::abs(xi_c - (1.0 - br.common_user_rates[k])));
        gap = std::max(gap, std::abs(xi_d - (1.0 - br.user_rates[k])));
    }
    return gap;
}

} // namespace rsmcast::wmmse
