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

#include "rsmcast/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>

namespace rsmcast::subproblem
{

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

namespace
{

// Precoder-free constraints with a constant term within this band of zero
// are treated as exactly tight.
constexpr double kConstantTol = 1e-9;
// Quadratic coefficients below this (relative to the unit weight scale)
// are dropped.
constexpr double kNegligible = 1e-12;

/// One scalar constraint  ||F x||^2 <= lin' x + offset.
struct QuadraticRow
{
    MatrixXd F;
    RowVectorXd lin;
    double offset = 0.0;
    bool precoder_free = false;
};

class ProgramAssembler
{
  public:
    explicit ProgramAssembler(Index n) : n_(n) {}

    // s = h - G x >= 0
    void add_linear(const RowVectorXd &g, double h)
    {
        lin_g_.push_back(g);
        lin_h_.push_back(h);
    }

    // ||F x||^2 <= t, t = lin' x + offset, as (t + 1, 2 F x, t - 1) in a cone
    void add_quadratic(const QuadraticRow &q)
    {
        const Index r = q.F.rows();
        MatrixXd G(r + 2, n_);
        VectorXd h = VectorXd::Zero(r + 2);
        G.row(0) = -q.lin;
        G.middleRows(1, r) = -2.0 * q.F;
        G.row(r + 1) = -q.lin;
        h[0] = q.offset + 1.0;
        h[r + 1] = q.offset - 1.0;
        soc_g_.push_back(std::move(G));
        soc_h_.push_back(std::move(h));
    }

    // ||x_block|| <= radius
    void add_norm_bound(Index offset, Index len, double radius)
    {
        MatrixXd G = MatrixXd::Zero(len + 1, n_);
        G.block(1, offset, len, len) = -MatrixXd::Identity(len, len);
        VectorXd h = VectorXd::Zero(len + 1);
        h[0] = radius;
        soc_g_.push_back(std::move(G));
        soc_h_.push_back(std::move(h));
    }

    conic::ConicProgram finish(const VectorXd &c) const
    {
        conic::ConicProgram P;
        P.c = c;
        P.cones.linear = lin_g_.size();
        Index m = static_cast<Index>(lin_g_.size());
        for (const auto &G : soc_g_)
        {
            P.cones.soc.push_back(static_cast<std::size_t>(G.rows()));
            m += G.rows();
        }
        P.G.resize(m, n_);
        P.h.resize(m);
        Index row = 0;
        for (std::size_t i = 0; i < lin_g_.size(); ++i, ++row)
        {
            P.G.row(row) = lin_g_[i];
            P.h[row] = lin_h_[i];
        }
        for (std::size_t i = 0; i < soc_g_.size(); ++i)
        {
            P.G.middleRows(row, soc_g_[i].rows()) = soc_g_[i];
            P.h.segment(row, soc_h_[i].size()) = soc_h_[i];
            row += soc_g_[i].rows();
        }
        P.A.resize(0, n_);
        P.b.resize(0);
        return P;
    }

  private:
    Index n_;
    std::vector<RowVectorXd> lin_g_;
    std::vector<double> lin_h_;
    std::vector<MatrixXd> soc_g_;
    std::vector<VectorXd> soc_h_;
};

/// Real-embedded rows of h^H p over a 2N block: Re(h^H p) and Im(h^H p).
struct ChannelRows
{
    RowVectorXd re;
    RowVectorXd im;
};

ChannelRows channel_rows(const CVector &h, double scale)
{
    const Index N = h.size();
    ChannelRows r{RowVectorXd(2 * N), RowVectorXd(2 * N)};
    const VectorXd hr = h.real() * scale;
    const VectorXd hi = h.imag() * scale;
    r.re << hr.transpose(), hi.transpose();
    r.im << -hi.transpose(), hr.transpose();
    return r;
}

VariableLayout make_layout(const SystemConfig &cfg, Strategy mode, bool pin_alloc)
{
    VariableLayout L;
    L.n_tx = static_cast<Index>(cfg.n_tx());
    L.n_groups = static_cast<Index>(cfg.n_groups());
    L.precoder_scale = std::sqrt(cfg.power_budget());
    Index next = 0;
    if (mode != Strategy::NoRS)
    {
        L.common_precoder = next;
        next += 2 * L.n_tx;
    }
    if (mode != Strategy::SS)
    {
        L.designated_precoders = next;
        next += 2 * L.n_tx * L.n_groups;
    }
    L.rate_min = next++;
    if (mode != Strategy::SS)
    {
        L.group_rates = next;
        next += L.n_groups;
    }
    if (mode != Strategy::NoRS && !pin_alloc)
    {
        L.common_alloc = next;
        next += L.n_groups;
    }
    L.n_vars = next;
    return L;
}

/// WMSE constraint of one stream as ||F x||^2 <= lin' x + offset, without
/// the rate auxiliaries (the caller subtracts r_m or sum C).
///
/// Both surrogate forms read a - b u eps + log2 u with (a, b) = (1, 1) for
/// log2 and (1/ln 2, 1/ln 2) for natural. With w = b u and
/// eps = |g|^2 (sum_j |h^H p_j|^2 + sigma^2) - 2 Re{g h^H p_own} + 1,
///   rate >= rhs  <=>  w|g|^2 sum_j |h^H p_j|^2 <= a - w|g|^2 sigma^2 - w + log2 u
///                                               + 2w Re{g h^H p_own} - rhs
QuadraticRow stream_row(const VariableLayout &L, const CVector &h, Complex g, double u, double noise,
                        const std::vector<Index> &blocks, Index own_block, wmmse::WmseForm form)
{
    const double a = form == wmmse::WmseForm::log2 ? 1.0 : 1.0 / std::numbers::ln2;
    const double w = a * u;
    const double gain = std::sqrt(w) * std::abs(g);
    const auto rows = channel_rows(h, L.precoder_scale);
    QuadraticRow q;
    q.lin = RowVectorXd::Zero(L.n_vars);
    q.offset = a - w * std::norm(g) * noise - w + std::log2(u);
    q.precoder_free = gain * h.norm() * L.precoder_scale < kNegligible;
    if (q.precoder_free)
    {
        q.F.resize(0, L.n_vars);
        return q;
    }
    q.F = MatrixXd::Zero(2 * static_cast<Index>(blocks.size()), L.n_vars);
    const Index width = 2 * L.n_tx;
    for (std::size_t j = 0; j < blocks.size(); ++j)
    {
        q.F.block(2 * static_cast<Index>(j), blocks[j], 1, width) = gain * rows.re;
        q.F.block(2 * static_cast<Index>(j) + 1, blocks[j], 1, width) = gain * rows.im;
    }
    // Re{g v} = Re(g) Re(v) - Im(g) Im(v)
    q.lin.segment(own_block, width) = 2.0 * w * (g.real() * rows.re - g.imag() * rows.im);
    return q;
}

std::vector<Index> designated_blocks(const VariableLayout &L)
{
    std::vector<Index> out;
    if (L.designated_precoders < 0)
        return out;
    for (Index m = 0; m < L.n_groups; ++m)
        out.push_back(L.designated_precoders + 2 * L.n_tx * m);
    return out;
}

} // namespace

Index VariableLayout::n_precoder_reals() const
{
    Index n = 0;
    if (common_precoder >= 0)
        n += 2 * n_tx;
    if (designated_precoders >= 0)
        n += 2 * n_tx * n_groups;
    return n;
}

void SubproblemSpec::check() const
{
    ch.check(cfg);
    const std::size_t K = cfg.n_users();
    if (eq.common.size() != K || eq.designated.size() != K)
        throw ContractViolation("equalizer set must hold one entry per user and stream");
    if (wt.common.size() != K || wt.designated.size() != K)
        throw ContractViolation("weight set must hold one entry per user and stream");
    for (double u : wt.common)
        if (!(u > 0.0) || !std::isfinite(u))
            throw ContractViolation("weights must be positive");
    for (double u : wt.designated)
        if (!(u > 0.0) || !std::isfinite(u))
            throw ContractViolation("weights must be positive");
}

VectorXd embed(const CVector &v)
{
    VectorXd x(2 * v.size());
    x << v.real(), v.imag();
    return x;
}

CVector extract(const VectorXd &x, Index offset, Index n)
{
    CVector v(n);
    for (Index i = 0; i < n; ++i)
        v[i] = Complex(x[offset + i], x[offset + n + i]);
    return v;
}

BuiltSubproblem build(const SubproblemSpec &spec)
{
    spec.check();
    const auto &cfg = spec.cfg;
    const std::size_t K = cfg.n_users();
    const double noise = cfg.noise_power();
    const bool uses_common = spec.mode != Strategy::NoRS;
    const bool uses_designated = spec.mode != Strategy::SS;

    BuiltSubproblem out;

    // First pass on a provisional layout to find precoder-free common rows.
    auto L = make_layout(cfg, spec.mode, false);
    const auto dblocks = designated_blocks(L);

    std::vector<QuadraticRow> common_rows;
    if (uses_common)
    {
        for (std::size_t k = 0; k < K; ++k)
        {
            std::vector<Index> blocks{L.common_precoder};
            blocks.insert(blocks.end(), dblocks.begin(), dblocks.end());
            auto q = stream_row(L, spec.ch[k], spec.eq.common[k], spec.wt.common[k], noise, blocks, L.common_precoder,
                                spec.form);
            if (q.precoder_free && q.offset <= kConstantTol)
                out.common_alloc_pinned = true;
            common_rows.push_back(std::move(q));
        }
    }
    if (out.common_alloc_pinned)
    {
        L = make_layout(cfg, spec.mode, true);
        for (std::size_t k = 0; k < K; ++k)
        {
            std::vector<Index> blocks{L.common_precoder};
            const auto db = designated_blocks(L);
            blocks.insert(blocks.end(), db.begin(), db.end());
            common_rows[k] =
                stream_row(L, spec.ch[k], spec.eq.common[k], spec.wt.common[k], noise, blocks, L.common_precoder,
                                spec.form);
        }
    }
    out.layout = L;

    const Index n = L.n_vars;
    ProgramAssembler asmb(n);
    auto unit_row = [n](Index i, double v) {
        RowVectorXd r = RowVectorXd::Zero(n);
        r[i] = v;
        return r;
    };

    // Linear block: C_m >= 0, then C_m + r_m - r_g >= 0.
    if (L.common_alloc >= 0)
        for (Index m = 0; m < L.n_groups; ++m)
            asmb.add_linear(unit_row(L.common_alloc + m, -1.0), 0.0);
    for (Index m = 0; m < L.n_groups; ++m)
    {
        RowVectorXd g = unit_row(L.rate_min, 1.0);
        if (L.common_alloc >= 0)
            g[L.common_alloc + m] = -1.0;
        if (L.group_rates >= 0)
            g[L.group_rates + m] = -1.0;
        asmb.add_linear(g, 0.0);
    }

    // Designated streams: ||F x||^2 <= t - r_m.
    if (uses_designated)
    {
        for (std::size_t k = 0; k < K; ++k)
        {
            const auto m = static_cast<Index>(cfg.group_of(k));
            auto q = stream_row(L, spec.ch[k], spec.eq.designated[k], spec.wt.designated[k], noise,
                                designated_blocks(L), L.designated_precoders + 2 * L.n_tx * m, spec.form);
            q.lin[L.group_rates + m] -= 1.0;
            if (q.precoder_free)
                asmb.add_linear(-q.lin, q.offset);
            else
                asmb.add_quadratic(q);
        }
    }

    // Common stream: ||F x||^2 <= t - sum_m C_m.
    for (auto &q : common_rows)
    {
        if (L.common_alloc >= 0)
            q.lin.segment(L.common_alloc, L.n_groups).array() -= 1.0;
        if (q.precoder_free)
        {
            if (L.common_alloc >= 0)
                asmb.add_linear(-q.lin, q.offset);
            else if (q.offset < -kConstantTol)
                out.infeasible = true;
        }
        else
        {
            asmb.add_quadratic(q);
        }
    }

    asmb.add_norm_bound(0, L.n_precoder_reals(), 1.0);

    VectorXd c = VectorXd::Zero(n);
    c[L.rate_min] = -1.0;
    out.program = asmb.finish(c);
    return out;
}

SubproblemSolution solve(const SubproblemSpec &spec, const conic::SolverSettings &settings)
{
    const auto built = build(spec);
    const auto &L = built.layout;
    const auto M = static_cast<std::size_t>(L.n_groups);

    SubproblemSolution out;
    out.precoders = PrecoderSet::zeros(spec.cfg);
    out.common_alloc.assign(M, 0.0);
    out.group_aux.assign(M, 0.0);
    if (built.infeasible)
    {
        out.solver_status = conic::SolverStatus::infeasible;
        return out;
    }

    const auto sol = conic::solve(built.program, settings);
    out.solver_status = sol.status;
    out.solver_iterations = sol.iterations;
    if (sol.status != conic::SolverStatus::optimal && sol.status != conic::SolverStatus::near_optimal)
        return out;

    VectorXd x = sol.x;
    // interior iterates may sit a hair outside the unit ball
    const Index np = L.n_precoder_reals();
    const double radius = x.head(np).norm();
    if (radius > 1.0)
        x.head(np) /= radius;

    const Index N = L.n_tx;
    if (L.common_precoder >= 0)
        out.precoders.common = L.precoder_scale * extract(x, L.common_precoder, N);
    if (L.designated_precoders >= 0)
        for (std::size_t m = 0; m < M; ++m)
            out.precoders.designated[m] =
                L.precoder_scale * extract(x, L.designated_precoders + 2 * N * static_cast<Index>(m), N);
    for (std::size_t m = 0; m < M; ++m)
    {
        if (L.common_alloc >= 0)
            out.common_alloc[m] = std::max(0.0, x[L.common_alloc + static_cast<Index>(m)]);
        if (L.group_rates >= 0)
            out.group_aux[m] = x[L.group_rates + static_cast<Index>(m)];
    }
    out.objective = x[L.rate_min];
    return out;
}

double surrogate_objective(const SubproblemSpec &spec, const PrecoderSet &pre_in)
{
    spec.check();
    pre_in.check(spec.cfg);
    PrecoderSet pre = pre_in;
    if (spec.mode == Strategy::NoRS)
        pre.common.setZero();
    if (spec.mode == Strategy::SS)
        for (auto &p : pre.designated)
            p.setZero();

    const auto &cfg = spec.cfg;
    const std::size_t M = cfg.n_groups();
    std::vector<double> floor(M, std::numeric_limits<double>::infinity());
    double budget = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cfg.n_users(); ++k)
    {
        const auto e = wmmse::mse(cfg, spec.ch, pre, spec.eq, k);
        auto &f = floor[cfg.group_of(k)];
        f = std::min(f, wmmse::rate_surrogate(e.designated, spec.wt.designated[k], spec.form));
        budget = std::min(budget, wmmse::rate_surrogate(e.common, spec.wt.common[k], spec.form));
    }
    if (spec.mode == Strategy::SS)
        std::fill(floor.begin(), floor.end(), 0.0);
    if (spec.mode == Strategy::NoRS)
        return *std::min_element(floor.begin(), floor.end());
    return water_fill_min(floor, budget);
}

} // namespace rsmcast::subproblem
