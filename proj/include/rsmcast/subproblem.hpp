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

#ifndef RSMCAST_SUBPROBLEM_HPP
#define RSMCAST_SUBPROBLEM_HPP

#include "rsmcast/conic_solver.hpp"
#include "rsmcast/core_model.hpp"
#include "rsmcast/wmmse.hpp"

namespace rsmcast::subproblem
{

/// Precoder optimization with equalizers and weights held fixed:
///
///   max r_g  s.t.  C_m + r_m >= r_g              for every group m
///                  rho_i      >= r_m              for every user i in group m
///                  rho_c,k    >= sum_m C_m        for every user k
///                  C_m >= 0,  ||p_c||^2 + sum_m ||p_m||^2 <= P
///
/// where rho is the rate estimate of wmmse::rate_surrogate (1 - xi for the
/// log2 form). NoRS pins p_c = 0 and C = 0; SS pins every p_m = 0 and r = 0.
struct SubproblemSpec
{
    SystemConfig cfg;
    ChannelSet ch;
    wmmse::EqualizerSet eq;
    wmmse::WeightSet wt;
    Strategy mode = Strategy::RS;
    wmmse::WmseForm form = wmmse::WmseForm::natural;

    void check() const;
};

/// Column layout of the real decision vector. Precoders are stored as
/// [Re(p); Im(p)] blocks of length 2N, normalized by sqrt(P) so the power
/// constraint reads ||x_p|| <= 1. Offsets are -1 for pinned blocks.
struct VariableLayout
{
    Eigen::Index n_tx = 0;
    Eigen::Index n_groups = 0;
    Eigen::Index common_precoder = -1;
    Eigen::Index designated_precoders = -1; // M consecutive blocks
    Eigen::Index rate_min = -1;             // r_g
    Eigen::Index group_rates = -1;          // r_1..r_M
    Eigen::Index common_alloc = -1;         // C_1..C_M
    Eigen::Index n_vars = 0;
    double precoder_scale = 1.0;            // sqrt(P)

    Eigen::Index n_precoder_reals() const;
};

struct BuiltSubproblem
{
    conic::ConicProgram program;
    VariableLayout layout;
    // Set when a common-stream constraint carries no precoder dependence
    // and forces sum_m C_m <= 0; C is then fixed at zero.
    bool common_alloc_pinned = false;
    // Set when a precoder-free constraint can never hold.
    bool infeasible = false;
};

struct SubproblemSolution
{
    PrecoderSet precoders;
    std::vector<double> common_alloc; // C_m
    std::vector<double> group_aux;    // r_m
    double objective = 0.0;           // r_g
    conic::SolverStatus solver_status = conic::SolverStatus::numerical_failure;
    int solver_iterations = 0;
};

// Real embedding of complex vectors: v -> [Re(v); Im(v)].
Eigen::VectorXd embed(const CVector &v);
CVector extract(const Eigen::VectorXd &x, Eigen::Index offset, Eigen::Index n);

BuiltSubproblem build(const SubproblemSpec &spec);

SubproblemSolution solve(const SubproblemSpec &spec, const conic::SolverSettings &settings = {});

/// Best r_g reachable with the precoders held fixed (auxiliaries chosen
/// optimally). Returns -inf when no common allocation is feasible.
double surrogate_objective(const SubproblemSpec &spec, const PrecoderSet &pre);

} // namespace rsmcast::subproblem

#endif
