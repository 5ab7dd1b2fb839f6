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
#include "rsmcast/conic_solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace rsmcast;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace
{

bool solved(const conic::ConicSolution &s)
{
    return s.status == conic::SolverStatus::optimal || s.status == conic::SolverStatus::near_optimal;
}

} // namespace

TEST_SUITE("conic_solver")
{
    TEST_CASE("small LP")
    {
        // min -x1 - x2  s.t.  x1 + 2 x2 <= 4,  3 x1 + x2 <= 6,  x >= 0
        conic::ConicProgram P;
        P.c = VectorXd::Constant(2, -1.0);
        P.G.resize(4, 2);
        P.G << 1, 2, 3, 1, -1, 0, 0, -1;
        P.h.resize(4);
        P.h << 4, 6, 0, 0;
        P.cones.linear = 4;
        const auto s = conic::solve(P);
        REQUIRE(s.status == conic::SolverStatus::optimal);
        CHECK(s.x[0] == doctest::Approx(1.6).epsilon(1e-7));
        CHECK(s.x[1] == doctest::Approx(1.2).epsilon(1e-7));
        CHECK(s.primal_objective == doctest::Approx(-2.8).epsilon(1e-7));
    }

    TEST_CASE("linear objective over the unit ball")
    {
        testing::Gen g(4);
        for (int t = 0; t < 20; ++t)
        {
            const auto n = static_cast<Eigen::Index>(g.size(1, 6));
            VectorXd c(n);
            for (auto &v : c)
                v = g.uniform(-2.0, 2.0);
            // s = (1, x) in SOC
            conic::ConicProgram P;
            P.c = c;
            P.G = MatrixXd::Zero(n + 1, n);
            P.G.bottomRows(n) = -MatrixXd::Identity(n, n);
            P.h = VectorXd::Zero(n + 1);
            P.h[0] = 1.0;
            P.cones.soc = {static_cast<std::size_t>(n + 1)};
            const auto s = conic::solve(P);
            REQUIRE(solved(s));
            CHECK(s.primal_objective == doctest::Approx(-c.norm()).epsilon(1e-7));
            CHECK((s.x + c / c.norm()).norm() <= 1e-6);
        }
    }

    TEST_CASE("minimum norm point on a hyperplane (equality constraints)")
    {
        // variables (t, x): min t  s.t. ||x|| <= t,  a'x = 1
        VectorXd a(3);
        a << 1.0, -2.0, 0.5;
        conic::ConicProgram P;
        P.c = VectorXd::Zero(4);
        P.c[0] = 1.0;
        P.G = -MatrixXd::Identity(4, 4);
        P.h = VectorXd::Zero(4);
        P.cones.soc = {4};
        P.A = MatrixXd::Zero(1, 4);
        P.A.block(0, 1, 1, 3) = a.transpose();
        P.b = VectorXd::Ones(1);
        const auto s = conic::solve(P);
        REQUIRE(solved(s));
        CHECK(s.x[0] == doctest::Approx(1.0 / a.norm()).epsilon(1e-7));
        CHECK((s.x.tail(3) - a / a.squaredNorm()).norm() <= 1e-6);
    }

    TEST_CASE("rotated cone: max t with t <= 2 and t^2 <= y, y <= 3")
    {
        // (y + 1, 2 t, y - 1) in SOC  <=>  t^2 <= y
        conic::ConicProgram P;
        P.c = VectorXd::Zero(2);
        P.c[0] = -1.0; // variables (t, y)
        P.G = MatrixXd::Zero(5, 2);
        P.h = VectorXd::Zero(5);
        P.G(0, 0) = 1.0;
        P.h[0] = 2.0;
        P.G(1, 1) = 1.0;
        P.h[1] = 3.0;
        P.G(2, 1) = -1.0;
        P.h[2] = 1.0;
        P.G(3, 0) = -2.0;
        P.G(4, 1) = -1.0;
        P.h[4] = -1.0;
        P.cones.linear = 2;
        P.cones.soc = {3};
        const auto s = conic::solve(P);
        REQUIRE(solved(s));
        CHECK(s.x[0] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
    }

    TEST_CASE("property: random bounded SOCPs satisfy strong duality and beat sampled feasible points")
    {
        testing::Gen g(77);
        for (int t = 0; t < 40; ++t)
        {
            const auto n = static_cast<Eigen::Index>(g.size(2, 6));
            const auto q = static_cast<Eigen::Index>(g.size(1, 3)); // extra cones
            conic::ConicProgram P;
            P.c = VectorXd(n);
            for (auto &v : P.c)
                v = g.uniform(-1.0, 1.0);
            // box |x_i| <= 2, unit-ish ball, plus random cones ||B x + d|| <= e'x + f with x = 0 feasible
            const Eigen::Index rows = 2 * n + (n + 1) + q * (n + 1);
            P.G = MatrixXd::Zero(rows, n);
            P.h = VectorXd::Zero(rows);
            P.cones.linear = static_cast<std::size_t>(2 * n);
            for (Eigen::Index i = 0; i < n; ++i)
            {
                P.G(2 * i, i) = 1.0;
                P.h[2 * i] = 2.0;
                P.G(2 * i + 1, i) = -1.0;
                P.h[2 * i + 1] = 2.0;
            }
            Eigen::Index r = 2 * n;
            P.h[r] = 1.5;
            P.G.block(r + 1, 0, n, n) = -MatrixXd::Identity(n, n);
            P.cones.soc.push_back(static_cast<std::size_t>(n + 1));
            r += n + 1;
            std::vector<MatrixXd> Bs;
            std::vector<VectorXd> ds, es;
            std::vector<double> fs;
            for (Eigen::Index j = 0; j < q; ++j)
            {
                MatrixXd B = MatrixXd::NullaryExpr(n, n, [&] { return g.uniform(-1.0, 1.0); });
                VectorXd d = VectorXd::NullaryExpr(n, [&] { return g.uniform(-0.3, 0.3); });
                VectorXd e = VectorXd::NullaryExpr(n, [&] { return g.uniform(-0.5, 0.5); });
                const double f = d.norm() + g.uniform(0.1, 1.0);
                P.G.row(r) = -e.transpose();
                P.h[r] = f;
                P.G.block(r + 1, 0, n, n) = -B;
                P.h.segment(r + 1, n) = d;
                P.cones.soc.push_back(static_cast<std::size_t>(n + 1));
                r += n + 1;
                Bs.push_back(B);
                ds.push_back(d);
                es.push_back(e);
                fs.push_back(f);
            }
            const auto s = conic::solve(P);
            REQUIRE(solved(s));
            CHECK(std::abs(s.primal_objective - s.dual_objective) <= 1e-6);
            CHECK(conic::min_eigenvalue(P.cones, VectorXd(P.h - P.G * s.x)) >= -1e-7);

            for (int k = 0; k < 200; ++k)
            {
                VectorXd x(n);
                for (auto &v : x)
                    v = g.uniform(-1.5, 1.5);
                x *= g.uniform(0.0, 1.0);
                bool feasible = x.norm() <= 1.5;
                for (Eigen::Index j = 0; j < q && feasible; ++j)
                    feasible = (Bs[j] * x + ds[j]).norm() <= es[j].dot(x) + fs[j];
                if (feasible)
                    CHECK(P.c.dot(x) >= s.primal_objective - 1e-6);
            }
        }
    }

    TEST_CASE("cone helpers")
    {
        conic::ConeDims K;
        K.linear = 1;
        K.soc = {3};
        VectorXd x(4), d(4);
        x << 1.0, 2.0, 1.0, 0.0;
        CHECK(conic::min_eigenvalue(K, x) == doctest::Approx(1.0));
        d << -1.0, 0.0, 0.0, 0.0;
        CHECK(conic::max_step(K, x, d) == doctest::Approx(1.0));
        d << 0.0, -1.0, 0.0, 0.0;
        CHECK(conic::max_step(K, x, d) == doctest::Approx(1.0)); // t hits ||v|| = 1
        d << 0.0, 1.0, 0.0, 0.0;
        CHECK(std::isinf(conic::max_step(K, x, d)));
        CHECK(K.total() == 4);
        CHECK(K.degree() == 2);
    }

    TEST_CASE("shape errors")
    {
        conic::ConicProgram P;
        P.c = VectorXd::Zero(2);
        P.G = MatrixXd::Zero(3, 2);
        P.h = VectorXd::Zero(2);
        P.cones.linear = 3;
        CHECK_THROWS_AS(conic::solve(P), std::invalid_argument);
        P.h = VectorXd::Zero(3);
        P.A = MatrixXd::Zero(1, 3);
        P.b = VectorXd::Zero(1);
        CHECK_THROWS_AS(conic::solve(P), std::invalid_argument);
    }
}
