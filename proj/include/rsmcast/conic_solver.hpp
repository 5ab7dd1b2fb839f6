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

#ifndef RSMCAST_CONIC_SOLVER_HPP
#define RSMCAST_CONIC_SOLVER_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <string_view>
#include <vector>

namespace rsmcast::conic
{

/**
 * Cone layout of the slack vector s. The first `linear` entries belong to
 * the non-negative orthant, then one block per entry of `soc`, each a
 * second-order cone {(t, v) : ||v||_2 <= t} of the given dimension.
 */
struct ConeDims
{
    std::size_t linear = 0;
    std::vector<std::size_t> soc;

    std::size_t total() const;
    // Barrier degree: one per orthant entry, one per second-order cone.
    std::size_t degree() const { return linear + soc.size(); }
};

/**
 * Linear program over a product of cones:
 *
 *     minimize    c' x
 *     subject to  G x + s = h,  s in K
 *                 A x = b
 *
 * A may have zero rows.
 */
struct ConicProgram
{
    Eigen::VectorXd c;
    Eigen::MatrixXd G;
    Eigen::VectorXd h;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    ConeDims cones;

    std::size_t n_vars() const { return static_cast<std::size_t>(c.size()); }
    // Throws std::invalid_argument on inconsistent shapes.
    void validate() const;
};

enum class SolverStatus
{
    optimal,
    near_optimal,
    infeasible,
    numerical_failure
};

std::string_view to_string(SolverStatus status);

struct SolverSettings
{
    double feastol = 1e-8; // relative primal/dual residual
    double abstol = 1e-8;  // absolute duality gap s'z
    double reltol = 1e-8;  // relative duality gap
    int max_iters = 100;
    // near_optimal is reported when the run stops early but every
    // criterion is met within this factor of its tolerance
    double near_factor = 1e3;
    bool verbose = false; // per-iteration log on stderr
};

struct ConicSolution
{
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    Eigen::VectorXd s;
    Eigen::VectorXd z;
    SolverStatus status = SolverStatus::numerical_failure;
    int iterations = 0;
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double gap = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
};

/// Primal-dual interior-point method with Nesterov-Todd scaling and a
/// Mehrotra predictor-corrector step. Infeasible start: the initial point
/// only needs to lie inside the cones. Each call owns its workspace, so
/// concurrent calls on different programs are safe.
ConicSolution solve(const ConicProgram &program, const SolverSettings &settings = {});

// Cone helpers, exposed for testing.

/// Largest alpha >= 0 with x + alpha d inside the cones (x strictly inside),
/// or +inf when the ray never leaves.
double max_step(const ConeDims &cones, const Eigen::VectorXd &x, const Eigen::VectorXd &d);

/// min over blocks of the smallest "eigenvalue" (x_i for the orthant,
/// t - ||v|| for second-order cones). Positive iff x is interior.
double min_eigenvalue(const ConeDims &cones, const Eigen::VectorXd &x);

} // namespace rsmcast::conic

#endif
