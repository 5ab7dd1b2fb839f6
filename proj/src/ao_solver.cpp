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

#include "rsmcast/ao_solver.hpp"

#include "rsmcast/random.hpp"
#include "rsmcast/wmmse.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

namespace rsmcast::ao
{

std::string_view to_string(InitScheme s)
{
    return s == InitScheme::MRT_equal_power ? "MRT_equal_power" : "random_gaussian";
}

InitScheme parse_init_scheme(std::string_view name)
{
    std::string lower;
    for (char c : name)
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "mrt_equal_power" || lower == "mrt")
        return InitScheme::MRT_equal_power;
    if (lower == "random_gaussian" || lower == "random")
        return InitScheme::random_gaussian;
    throw ContractViolation("unknown init scheme '" + std::string(name) + "'");
}

void AoConfig::check() const
{
    if (!(epsilon > 0.0))
        throw ContractViolation("AO epsilon must be positive");
    if (max_iters < 1)
        throw ContractViolation("AO max_iters must be at least 1");
}

namespace
{

CVector unit_or_random(const CVector &dir, std::mt19937_64 &rng)
{
    const double nrm = dir.norm();
    if (nrm > 0.0 && std::isfinite(nrm))
        return dir / nrm;
    CVector r = complex_gaussian(rng, dir.size());
    while (r.norm() == 0.0)
        r = complex_gaussian(rng, dir.size());
    return r / r.norm();
}

CVector principal_direction(const ChannelSet &ch, Eigen::Index N)
{
    Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(N, N);
    for (const auto &h : ch.vectors)
        cov += h * h.adjoint();
    if (cov.norm() == 0.0)
        return CVector::Zero(N);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(cov);
    return eig.eigenvectors().col(N - 1); // eigenvalues ascend
}

/// Retry transform: h -> h / s, sigma^2 -> sigma^2 / s^2, g -> g s leaves every
/// MSE value unchanged while normalizing the channel magnitudes.
subproblem::SubproblemSpec rescaled(const subproblem::SubproblemSpec &spec)
{
    double s = 0.0;
    for (const auto &h : spec.ch.vectors)
        s = std::max(s, h.norm());
    if (!(s > 0.0))
        return spec;
    auto out = spec;
    out.cfg = spec.cfg.with_noise_power(spec.cfg.noise_power() / (s * s));
    for (auto &h : out.ch.vectors)
        h /= s;
    for (auto &g : out.eq.common)
        g *= s;
    for (auto &g : out.eq.designated)
        g *= s;
    return out;
}

bool usable(conic::SolverStatus st)
{
    return st == conic::SolverStatus::optimal || st == conic::SolverStatus::near_optimal;
}

} // namespace

PrecoderSet initialize(const SystemConfig &cfg, const ChannelSet &ch, const AoConfig &ao)
{
    ch.check(cfg);
    const auto N = static_cast<Eigen::Index>(cfg.n_tx());
    const std::size_t M = cfg.n_groups();
    const double P = cfg.power_budget();
    std::mt19937_64 rng(ao.seed);

    PrecoderSet pre = PrecoderSet::zeros(cfg);
    const bool use_common = ao.mode != Strategy::NoRS;
    const bool use_designated = ao.mode != Strategy::SS;
    const double streams = static_cast<double>((use_common ? 1 : 0) + (use_designated ? M : 0));
    const double amp = std::sqrt(P / streams);

    if (ao.init_scheme == InitScheme::MRT_equal_power)
    {
        if (use_common)
            pre.common = amp * unit_or_random(principal_direction(ch, N), rng);
        if (use_designated)
            for (std::size_t m = 0; m < M; ++m)
            {
                CVector sum = CVector::Zero(N);
                for (std::size_t i : cfg.group(m))
                    sum += ch[i];
                pre.designated[m] = amp * unit_or_random(sum, rng);
            }
    }
    else
    {
        if (use_common)
            pre.common = amp * unit_or_random(complex_gaussian(rng, N), rng);
        if (use_designated)
            for (std::size_t m = 0; m < M; ++m)
                pre.designated[m] = amp * unit_or_random(complex_gaussian(rng, N), rng);
    }
    return pre;
}

RsSolution evaluate(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre,
                    std::vector<double> common_alloc)
{
    if (common_alloc.empty())
        common_alloc.assign(cfg.n_groups(), 0.0);
    for (double &c : common_alloc)
        c = std::max(0.0, c);
    const auto exact = rates(cfg, ch, pre);
    const double total = std::accumulate(common_alloc.begin(), common_alloc.end(), 0.0);
    if (total > exact.common_rate && total > 0.0)
    {
        const double factor = exact.common_rate / total;
        for (double &c : common_alloc)
            c *= factor;
    }
    RsSolution sol;
    sol.precoders = pre;
    sol.common_alloc = std::move(common_alloc);
    sol.breakdown = rates(cfg, ch, pre, sol.common_alloc);
    sol.mmf_rate = mmf_objective(sol.breakdown);
    return sol;
}

AoResult solve(const SystemConfig &cfg, const ChannelSet &ch, const AoConfig &ao,
               const conic::SolverSettings &settings)
{
    ao.check();
    ch.check(cfg);

    AoResult result;
    result.solution = evaluate(cfg, ch, initialize(cfg, ch, ao), {});

    PrecoderSet pre = result.solution.precoders;
    double previous = 0.0; // r_g^(0)
    for (int n = 1; n <= ao.max_iters; ++n)
    {
        subproblem::SubproblemSpec spec{cfg, ch, wmmse::mmse_equalizers(cfg, ch, pre),
                                        wmmse::mmse_weights(wmmse::mmse_values(cfg, ch, pre)), ao.mode,
                                        ao.wmse_form};
        auto sub = subproblem::solve(spec, settings);
        if (!usable(sub.solver_status))
            sub = subproblem::solve(rescaled(spec), settings);
        if (!usable(sub.solver_status))
            throw AoAbort("precoder subproblem failed at iteration " + std::to_string(n) + " (" +
                              std::string(conic::to_string(sub.solver_status)) + ")",
                          n, result);

        pre = sub.precoders;
        result.iterations = n;
        result.objective_trace.push_back(sub.objective);
        result.solution = evaluate(cfg, ch, pre, sub.common_alloc);
        if (std::abs(sub.objective - previous) < ao.epsilon)
        {
            result.converged = true;
            break;
        }
        previous = sub.objective;
    }
    return result;
}

AoResult solve_multistart(const SystemConfig &cfg, const ChannelSet &ch, const AoConfig &ao, int starts,
                          const conic::SolverSettings &settings)
{
    if (starts < 1)
        throw ContractViolation("multi-start needs at least one start");
    AoResult best;
    bool have = false;
    int aborted = 0;
    std::optional<AoAbort> first_abort;
    for (int s = 0; s < starts; ++s)
    {
        AoConfig run = ao;
        if (s > 0)
        {
            run.init_scheme = InitScheme::random_gaussian;
            run.seed = derive_seed(ao.seed, static_cast<std::uint64_t>(s));
        }
        AoResult r;
        try
        {
            r = solve(cfg, ch, run, settings);
        }
        catch (const AoAbort &e)
        {
            if (!first_abort)
                first_abort.emplace(e);
            ++aborted;
            r = e.last_good();
            r.converged = false;
        }
        r.start_index = s;
        if (!have || r.solution.mmf_rate > best.solution.mmf_rate)
        {
            best = std::move(r);
            have = true;
        }
    }
    if (aborted == starts)
        throw *first_abort;
    return best;
}

} // namespace rsmcast::ao
