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

#ifndef RSMCAST_AO_SOLVER_HPP
#define RSMCAST_AO_SOLVER_HPP

#include "rsmcast/core_model.hpp"
#include "rsmcast/subproblem.hpp"

#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace rsmcast::ao
{

enum class InitScheme
{
    MRT_equal_power,
    random_gaussian
};

std::string_view to_string(InitScheme s);
InitScheme parse_init_scheme(std::string_view name);

struct AoConfig
{
    double epsilon = 1e-4; // bits
    int max_iters = 200;
    InitScheme init_scheme = InitScheme::MRT_equal_power;
    Strategy mode = Strategy::RS;
    std::uint64_t seed = 0;
    wmmse::WmseForm wmse_form = wmmse::WmseForm::natural;

    void check() const;
};

struct RsSolution
{
    PrecoderSet precoders;
    std::vector<double> common_alloc;
    double mmf_rate = 0.0; // exact rates, not the WMSE surrogate
    RateBreakdown breakdown;
};

struct AoResult
{
    RsSolution solution;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace; // r_g after every iteration
    int start_index = 0;                 // which start won (multi-start)
};

/// Thrown when a subproblem fails twice in a row (plain, then rescaled).
class AoAbort : public std::runtime_error
{
  public:
    AoAbort(const std::string &what, int iteration, AoResult last_good)
        : std::runtime_error(what), iteration_(iteration), last_good_(std::move(last_good))
    {
    }
    int iteration() const { return iteration_; }
    const AoResult &last_good() const { return last_good_; }

  private:
    int iteration_;
    AoResult last_good_;
};

/// Initial precoders at full power, split equally across the active streams.
///   MRT_equal_power: p_m along the sum of its group's channels, p_c along the
///                    principal eigenvector of sum_k h_k h_k^H.
///   random_gaussian: seeded complex Gaussian directions.
/// Beams whose MRT direction vanishes fall back to a seeded random direction.
PrecoderSet initialize(const SystemConfig &cfg, const ChannelSet &ch, const AoConfig &ao);

/// Exact evaluation of a precoder set with a common allocation, scaling
/// the allocation down proportionally if it exceeds the common rate.
RsSolution evaluate(const SystemConfig &cfg, const ChannelSet &ch, const PrecoderSet &pre,
                    std::vector<double> common_alloc);

/// Alternating optimization: MMSE equalizers, MMSE weights, then the conic
/// precoder subproblem, until r_g moves by less than epsilon.
AoResult solve(const SystemConfig &cfg, const ChannelSet &ch, const AoConfig &ao,
               const conic::SolverSettings &settings = {});

/// Best of `starts` runs: start 0 uses ao.init_scheme and ao.seed, later
/// starts use random_gaussian with seeds derived from ao.seed.
/// Ties go to the earliest start.
AoResult solve_multistart(const SystemConfig &cfg, const ChannelSet &ch, const AoConfig &ao, int starts,
                          const conic::SolverSettings &settings = {});

} // namespace rsmcast::ao

#endif
