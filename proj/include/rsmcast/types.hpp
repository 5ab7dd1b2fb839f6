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

#ifndef RSMCAST_TYPES_HPP
#define RSMCAST_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rsmcast
{

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;

/// Transmission strategy.
///   RS   - common stream plus one designated stream per group
///   NoRS - designated streams only, inter-group interference treated as noise
///   SS   - common stream only, carrying all group messages
enum class Strategy
{
    RS,
    NoRS,
    SS
};

std::string_view to_string(Strategy s);

// Accepts "RS"/"NoRS"/"SS" in any letter case.
Strategy parse_strategy(std::string_view name);

// Parses a comma separated list such as "rs,nors,ss".
std::vector<Strategy> parse_strategy_list(std::string_view list);

/// Raised when a caller breaks an operation's preconditions
/// (dimension mismatch, non-positive weight, malformed partition, ...).
class ContractViolation : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an analysis result is requested outside the assumptions it
/// is valid under (for example unequal group sizes for N_min).
class AssumptionViolation : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

} // namespace rsmcast

#endif
