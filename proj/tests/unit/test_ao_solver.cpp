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

#include "oracles.hpp"
#include "rsmcast/ao_solver.hpp"

#include <doctest.h>

#include <array>
#include <cmath>

using namespace rsmcast;
using rsmcast::testing::Gen;

namespace
{

ChannelSet random_channels(Gen &g, const SystemConfig &cfg)
{
    return g.channels(cfg);
}

} // namespace

TEST_SUITE("ao_solver")
{
    TEST_CASE("single user: AO reaches log2(1 + P ||h||^2 / sigma^2)")
    {
        Gen g(501);
        for (int t = 0; t < 10; ++t)
        {
            const std::size_t N = g.size(1, 4);
            const double P = g.log_uniform(0.5, 1e3), s2 = g.log_uniform(0.2, 5.0);
            SystemConfig cfg(N, {{0}}, s2, P);
            const auto ch = random_channels(g, cfg);
            const double exact = std::log2(1.0 + P * ch[0].squaredNorm() / s2);
            for (auto mode : {Strategy::RS, Strategy::NoRS, Strategy::SS})
            {
                ao::AoConfig ao;
                ao.mode = mode;
                const auto r = ao::solve(cfg, ch, ao);
                CHECK(std::abs(r.solution.mmf_rate - exact) <= 1e-3);
                CHECK(r.solution.precoders.total_power() <= P * (1.0 + 1e-6));
            }
        }
    }

    TEST_CASE("scalar two-group instance against brute force")
    {
        SystemConfig cfg(1, {{0}, {1}}, 1.0, 10.0);
        ChannelSet ch{{CVector::Ones(1), CVector::Ones(1)}};
        ao::AoConfig ao;
        const auto rs = ao::solve_multistart(cfg, ch, ao, 3);
        CHECK(std::abs(rs.solution.mmf_rate - testing::scalar_two_group_oracle(10.0, true)) <= 2e-2);
        ao.mode = Strategy::NoRS;
        const auto nors = ao::solve_multistart(cfg, ch, ao, 3);
        CHECK(std::abs(nors.solution.mmf_rate - testing::scalar_two_group_oracle(10.0, false)) <= 2e-2);
    }

    TEST_CASE("property: objective trace is non-decreasing and feasible")
    {
        Gen g(502);
        for (int t = 0; t < 24; ++t)
        {
            const auto cfg = g.config(3, 5, 1.0, g.log_uniform(1.0, 1e4));
            const auto ch = random_channels(g, cfg);
            ao::AoConfig ao;
            ao.mode = std::array{Strategy::RS, Strategy::NoRS, Strategy::SS}[t % 3];
            ao.seed = g.seed();
            ao.init_scheme = t % 2 ? ao::InitScheme::random_gaussian : ao::InitScheme::MRT_equal_power;
            const auto r = ao::solve(cfg, ch, ao);
            REQUIRE_FALSE(r.objective_trace.empty());
            CHECK(r.objective_trace.front() >= -1e-9);
            for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
                CHECK(r.objective_trace[i] >= r.objective_trace[i - 1] - 1e-6);
            CHECK(r.solution.precoders.total_power() <= cfg.power_budget() * (1.0 + 1e-6));
            CHECK(r.iterations == static_cast<int>(r.objective_trace.size()));
            if (r.converged)
                // the surrogate is tight once the weights stop moving
                CHECK(std::abs(r.solution.mmf_rate - r.objective_trace.back()) <= 1e-3);
        }
    }

    TEST_CASE("initialization")
    {
        SystemConfig cfg(2, {{0}, {1}}, 1.0, 3.0);
        ChannelSet ch{{CVector::Zero(2), CVector::Zero(2)}};
        ch.vectors[0] << Complex(3.0, 0.0), Complex(0.0, 4.0);
        ch.vectors[1] << Complex(1.0, 0.0), Complex(0.0, 0.0);

        ao::AoConfig ao;
        const auto rs = ao::initialize(cfg, ch, ao);
        CHECK(rs.common.squaredNorm() == doctest::Approx(1.0));
        CHECK(rs.designated[0].squaredNorm() == doctest::Approx(1.0));
        CHECK(rs.designated[1].squaredNorm() == doctest::Approx(1.0));
        // MRT direction h / ||h||
        CHECK((rs.designated[0] - ch[0] / 5.0).norm() <= 1e-12);
        CHECK((rs.designated[1] - ch[1]).norm() <= 1e-12);

        ao.mode = Strategy::NoRS;
        const auto nors = ao::initialize(cfg, ch, ao);
        CHECK(nors.common.norm() == 0.0);
        CHECK(nors.designated[0].squaredNorm() == doctest::Approx(1.5));
        CHECK((nors.designated[0] - std::sqrt(1.5) * ch[0] / 5.0).norm() <= 1e-12);

        ao.mode = Strategy::SS;
        const auto ss = ao::initialize(cfg, ch, ao);
        CHECK(ss.common.squaredNorm() == doctest::Approx(3.0));
        CHECK(ss.designated[0].norm() == 0.0);

        // zero channels fall back to a random direction at the same power
        ChannelSet zero{{CVector::Zero(2), CVector::Zero(2)}};
        ao.mode = Strategy::RS;
        const auto z = ao::initialize(cfg, zero, ao);
        CHECK(z.common.squaredNorm() == doctest::Approx(1.0));
        CHECK(z.designated[1].squaredNorm() == doctest::Approx(1.0));
        CHECK(z.total_power() == doctest::Approx(3.0));

        ao.init_scheme = ao::InitScheme::random_gaussian;
        ao.seed = 9;
        const auto a = ao::initialize(cfg, ch, ao), b = ao::initialize(cfg, ch, ao);
        CHECK(a.common == b.common);
        CHECK(a.total_power() == doctest::Approx(3.0));

        CHECK(ao::parse_init_scheme("random_gaussian") == ao::InitScheme::random_gaussian);
        CHECK(ao::to_string(ao::InitScheme::MRT_equal_power) == "MRT_equal_power");
        CHECK_THROWS_AS(ao::parse_init_scheme("zf"), ContractViolation);
    }

    TEST_CASE("config errors")
    {
        SystemConfig cfg(1, {{0}}, 1.0, 1.0);
        ChannelSet ch{{CVector::Ones(1)}};
        ao::AoConfig ao;
        ao.epsilon = 0.0;
        CHECK_THROWS_AS(ao::solve(cfg, ch, ao), ContractViolation);
        ao.epsilon = 1e-4;
        ao.max_iters = 0;
        CHECK_THROWS_AS(ao::solve(cfg, ch, ao), ContractViolation);
        ao.max_iters = 10;
        CHECK_THROWS_AS(ao::solve_multistart(cfg, ch, ao, 0), ContractViolation);
        ChannelSet wrong{{CVector::Ones(2)}};
        CHECK_THROWS_AS(ao::solve(cfg, wrong, ao), ContractViolation);
    }

    TEST_CASE("degenerate zero channel gives rate 0 and converges")
    {
        SystemConfig cfg(2, {{0, 1}, {2}}, 1.0, 100.0);
        ChannelSet ch{{CVector::Zero(2), CVector::Zero(2), CVector::Zero(2)}};
        for (auto mode : {Strategy::RS, Strategy::NoRS, Strategy::SS})
        {
            ao::AoConfig ao;
            ao.mode = mode;
            const auto r = ao::solve(cfg, ch, ao);
            CHECK(r.solution.mmf_rate == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
            CHECK(r.converged);
        }
    }

    TEST_CASE("evaluate scales an over-large common allocation back")
    {
        SystemConfig cfg(2, {{0}, {1}}, 1.0, 10.0);
        ChannelSet ch{{CVector::Zero(2), CVector::Zero(2)}};
        ch.vectors[0] << 1.0, 0.0;
        ch.vectors[1] << 0.0, 1.0;
        PrecoderSet pre = PrecoderSet::zeros(cfg);
        pre.common << 1.0, 1.0;
        const double rc = rates(cfg, ch, pre).common_rate; // log2(2) = 1
        REQUIRE(rc == doctest::Approx(1.0));
        const auto sol = ao::evaluate(cfg, ch, pre, {1.5, 0.5});
        CHECK(sol.common_alloc[0] == doctest::Approx(0.75));
        CHECK(sol.common_alloc[1] == doctest::Approx(0.25));
        CHECK(sol.mmf_rate == doctest::Approx(0.25));
        const auto neg = ao::evaluate(cfg, ch, pre, {-1.0, 0.5});
        CHECK(neg.common_alloc[0] == 0.0);
        CHECK(neg.mmf_rate == 0.0);
        CHECK(ao::evaluate(cfg, ch, pre, {}).common_alloc.size() == 2);
    }

    TEST_CASE("determinism and multi-start bookkeeping")
    {
        Gen g(503);
        const auto cfg = SystemConfig::equal_groups(2, 2, 2, 1.0, 100.0);
        const auto ch = random_channels(g, cfg);
        ao::AoConfig ao;
        ao.seed = 17;
        const auto a = ao::solve_multistart(cfg, ch, ao, 3);
        const auto b = ao::solve_multistart(cfg, ch, ao, 3);
        CHECK(a.solution.mmf_rate == b.solution.mmf_rate);
        CHECK(a.objective_trace == b.objective_trace);
        CHECK(a.start_index == b.start_index);
        CHECK(a.start_index >= 0);
        CHECK(a.start_index < 3);
        const auto single = ao::solve(cfg, ch, ao);
        CHECK(a.solution.mmf_rate >= single.solution.mmf_rate);
        const auto one = ao::solve_multistart(cfg, ch, ao, 1);
        CHECK(one.start_index == 0);
        CHECK(one.solution.mmf_rate == single.solution.mmf_rate);
    }

    TEST_CASE("property: RS is never meaningfully worse than NoRS or SS")
    {
        Gen g(504);
        for (int t = 0; t < 8; ++t)
        {
            const auto cfg = SystemConfig::equal_groups(2, 2, 2, 1.0, std::pow(10.0, g.uniform(0.0, 3.0)));
            const auto ch = random_channels(g, cfg);
            ao::AoConfig ao;
            ao.seed = g.seed();
            const double rs = ao::solve_multistart(cfg, ch, ao, 3).solution.mmf_rate;
            ao.mode = Strategy::NoRS;
            const double nors = ao::solve_multistart(cfg, ch, ao, 3).solution.mmf_rate;
            ao.mode = Strategy::SS;
            const double ss = ao::solve_multistart(cfg, ch, ao, 3).solution.mmf_rate;
            CHECK(rs >= nors - 5e-3);
            CHECK(rs >= ss - 5e-3);
        }
    }

    TEST_CASE("overloaded system at P = 1e4: RS clearly beats NoRS")
    {
        Gen g(505);
        const auto cfg = SystemConfig::equal_groups(2, 2, 2, 1.0, 1e4);
        const int trials = 10;
        int wins = 0;
        for (int t = 0; t < trials; ++t)
        {
            const auto ch = random_channels(g, cfg);
            ao::AoConfig ao;
            ao.seed = g.seed();
            const double rs = ao::solve_multistart(cfg, ch, ao, 3).solution.mmf_rate;
            ao.mode = Strategy::NoRS;
            const double nors = ao::solve_multistart(cfg, ch, ao, 3).solution.mmf_rate;
            wins += rs - nors >= 0.5 ? 1 : 0;
        }
        CHECK(wins >= 9);
    }

    TEST_CASE("log2 form still runs and stays monotone")
    {
        Gen g(506);
        const auto cfg = SystemConfig::equal_groups(2, 2, 2, 1.0, 100.0);
        const auto ch = random_channels(g, cfg);
        ao::AoConfig ao;
        ao.wmse_form = wmmse::WmseForm::log2;
        const auto r = ao::solve(cfg, ch, ao);
        for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
            CHECK(r.objective_trace[i] >= r.objective_trace[i - 1] - 1e-6);
        CHECK(r.solution.mmf_rate > 0.0);
    }
}
