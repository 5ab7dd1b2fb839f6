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

#include "rsmcast/conic_solver.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace rsmcast::conic
{

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

// Offsets of every second-order cone block inside the slack vector.
std::vector<Index> soc_offsets(const ConeDims &cones)
{
    std::vector<Index> off;
    off.reserve(cones.soc.size());
    auto pos = static_cast<Index>(cones.linear);
    for (std::size_t q : cones.soc)
    {
        off.push_back(pos);
        pos += static_cast<Index>(q);
    }
    return off;
}

// t^2 - ||v||^2 evaluated as (t - ||v||)(t + ||v||).
double soc_residual(double t, double vnorm)
{
    return (t - vnorm) * (t + vnorm);
}

/// Nesterov-Todd scaling W (symmetric, block diagonal) with W z = W^{-1} s = lambda.
struct Scaling
{
    VectorXd d;                     // orthant block: W = diag(d)
    std::vector<double> eta;        // per cone scale
    std::vector<VectorXd> w;        // per cone hyperbolic vector, w' J w = 1
    VectorXd lambda;
};

class ConeAlgebra
{
  public:
    explicit ConeAlgebra(const ConeDims &cones) : cones_(cones), offsets_(soc_offsets(cones)) {}

    Index size() const { return static_cast<Index>(cones_.total()); }

    VectorXd unit() const
    {
        VectorXd e = VectorXd::Zero(size());
        e.head(static_cast<Index>(cones_.linear)).setOnes();
        for (Index off : offsets_)
            e[off] = 1.0;
        return e;
    }

    std::optional<Scaling> scaling(const VectorXd &s, const VectorXd &z) const
    {
        Scaling sc;
        const auto l = static_cast<Index>(cones_.linear);
        sc.d.resize(l);
        for (Index i = 0; i < l; ++i)
        {
            if (!(s[i] > 0.0) || !(z[i] > 0.0))
                return std::nullopt;
            sc.d[i] = std::sqrt(s[i] / z[i]);
        }
        sc.eta.resize(offsets_.size());
        sc.w.resize(offsets_.size());
        for (std::size_t j = 0; j < offsets_.size(); ++j)
        {
            const Index off = offsets_[j];
            const auto q = static_cast<Index>(cones_.soc[j]);
            const double s_res = soc_residual(s[off], s.segment(off + 1, q - 1).norm());
            const double z_res = soc_residual(z[off], z.segment(off + 1, q - 1).norm());
            if (!(s_res > 0.0) || !(z_res > 0.0) || !(s[off] > 0.0) || !(z[off] > 0.0))
                return std::nullopt;
            const double s_nrm = std::sqrt(s_res);
            const double z_nrm = std::sqrt(z_res);
            const VectorXd sb = s.segment(off, q) / s_nrm;
            VectorXd zb = z.segment(off, q) / z_nrm;
            const double gamma = std::sqrt(0.5 * (1.0 + sb.dot(zb)));
            zb.tail(q - 1) *= -1.0; // J z
            sc.w[j] = (sb + zb) / (2.0 * gamma);
            sc.eta[j] = std::sqrt(s_nrm / z_nrm);
        }
        sc.lambda = apply(sc, z, false);
        return sc;
    }

    /// W v (inverse = false) or W^{-1} v (inverse = true).
    VectorXd apply(const Scaling &sc, const VectorXd &v, bool inverse) const
    {
        VectorXd out(v.size());
        const auto l = static_cast<Index>(cones_.linear);
        if (inverse)
            out.head(l) = v.head(l).cwiseQuotient(sc.d);
        else
            out.head(l) = v.head(l).cwiseProduct(sc.d);
        for (std::size_t j = 0; j < offsets_.size(); ++j)
        {
            const Index off = offsets_[j];
            const auto q = static_cast<Index>(cones_.soc[j]);
            const VectorXd &w = sc.w[j];
            const double w0 = w[0];
            const auto w1 = w.tail(q - 1);
            const double v0 = v[off];
            const auto v1 = v.segment(off + 1, q - 1);
            const double w1v1 = w1.dot(v1);
            // W_bar = [w0 w1'; w1 I + w1 w1'/(1 + w0)], W_bar^{-1} = J W_bar J
            const double sign = inverse ? -1.0 : 1.0;
            const double scale = inverse ? 1.0 / sc.eta[j] : sc.eta[j];
            out[off] = scale * (w0 * v0 + sign * w1v1);
            out.segment(off + 1, q - 1) = scale * (v1 + (sign * v0 + w1v1 / (1.0 + w0)) * w1);
        }
        return out;
    }

    MatrixXd apply_cols(const Scaling &sc, const MatrixXd &M, bool inverse) const
    {
        MatrixXd out(M.rows(), M.cols());
        for (Index c = 0; c < M.cols(); ++c)
            out.col(c) = apply(sc, M.col(c), inverse);
        return out;
    }

    /// Jordan product u o v.
    VectorXd product(const VectorXd &u, const VectorXd &v) const
    {
        VectorXd out(u.size());
        const auto l = static_cast<Index>(cones_.linear);
        out.head(l) = u.head(l).cwiseProduct(v.head(l));
        for (std::size_t j = 0; j < offsets_.size(); ++j)
        {
            const Index off = offsets_[j];
            const auto q = static_cast<Index>(cones_.soc[j]);
            out[off] = u.segment(off, q).dot(v.segment(off, q));
            out.segment(off + 1, q - 1) = u[off] * v.segment(off + 1, q - 1) + v[off] * u.segment(off + 1, q - 1);
        }
        return out;
    }

    /// Solves lambda o x = r for x (lambda strictly interior).
    VectorXd divide(const VectorXd &lambda, const VectorXd &r) const
    {
        VectorXd out(r.size());
        const auto l = static_cast<Index>(cones_.linear);
        out.head(l) = r.head(l).cwiseQuotient(lambda.head(l));
        for (std::size_t j = 0; j < offsets_.size(); ++j)
        {
            const Index off = offsets_[j];
            const auto q = static_cast<Index>(cones_.soc[j]);
            const double l0 = lambda[off];
            const auto l1 = lambda.segment(off + 1, q - 1);
            const double r0 = r[off];
            const auto r1 = r.segment(off + 1, q - 1);
            const double det = soc_residual(l0, l1.norm());
            const double x0 = (l0 * r0 - l1.dot(r1)) / det;
            out[off] = x0;
            out.segment(off + 1, q - 1) = (r1 - x0 * l1) / l0;
        }
        return out;
    }

  private:
    const ConeDims &cones_;
    std::vector<Index> offsets_;
};

/// Dense factorization of the reduced Newton system
///   [H A'; A 0] [dx; dy] = [r1; r2],   H = G' W^{-2} G.
class ReducedSystem
{
  public:
    bool factor(const MatrixXd &H, const MatrixXd &A)
    {
        n_ = H.rows();
        p_ = A.rows();
        const double diag_scale = std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
        const double reg = 1e-13 * diag_scale;
        if (p_ == 0)
        {
            H_ = H;
            H_.diagonal().array() += reg;
            llt_.compute(H_);
            use_llt_ = llt_.info() == Eigen::Success;
            if (!use_llt_)
            {
                ldlt_.compute(H_);
                if (ldlt_.info() != Eigen::Success)
                    return false;
            }
            return true;
        }
        K_ = MatrixXd::Zero(n_ + p_, n_ + p_);
        K_.topLeftCorner(n_, n_) = H;
        K_.topLeftCorner(n_, n_).diagonal().array() += reg;
        K_.topRightCorner(n_, p_) = A.transpose();
        K_.bottomLeftCorner(p_, n_) = A;
        K_.bottomRightCorner(p_, p_).diagonal().array() -= reg;
        lu_.compute(K_);
        return std::isfinite(lu_.rcond()) && lu_.rcond() > 1e-300;
    }

    void solve(const VectorXd &r1, const VectorXd &r2, VectorXd &dx, VectorXd &dy) const
    {
        if (p_ == 0)
        {
            dx = use_llt_ ? VectorXd(llt_.solve(r1)) : VectorXd(ldlt_.solve(r1));
            // one step of iterative refinement
            const VectorXd res = r1 - H_ * dx;
            dx += use_llt_ ? VectorXd(llt_.solve(res)) : VectorXd(ldlt_.solve(res));
            dy.resize(0);
            return;
        }
        VectorXd rhs(n_ + p_);
        rhs << r1, r2;
        VectorXd sol = lu_.solve(rhs);
        sol += lu_.solve(VectorXd(rhs - K_ * sol));
        dx = sol.head(n_);
        dy = sol.tail(p_);
    }

  private:
    Index n_ = 0;
    Index p_ = 0;
    bool use_llt_ = true;
    MatrixXd H_;
    MatrixXd K_;
    Eigen::LLT<MatrixXd> llt_;
    Eigen::LDLT<MatrixXd> ldlt_;
    Eigen::PartialPivLU<MatrixXd> lu_;
};

struct Residuals
{
    VectorXd rx, ry, rz;
    double pcost = 0.0, dcost = 0.0, gap = 0.0;
    double pres = 0.0, dres = 0.0;
    std::optional<double> relgap;
};

Residuals residuals(const ConicProgram &P, const VectorXd &x, const VectorXd &y, const VectorXd &s,
                    const VectorXd &z)
{
    Residuals r;
    r.rx = P.G.transpose() * z + P.c;
    if (P.A.rows() > 0)
        r.rx += P.A.transpose() * y;
    r.ry = P.A.rows() > 0 ? VectorXd(P.A * x - P.b) : VectorXd();
    r.rz = P.G * x + s - P.h;
    r.pcost = P.c.dot(x);
    r.dcost = -P.h.dot(z) - (P.b.size() > 0 ? P.b.dot(y) : 0.0);
    r.gap = s.dot(z);
    const double ry_rel = r.ry.size() > 0 ? r.ry.norm() / std::max(1.0, P.b.norm()) : 0.0;
    r.pres = std::max(ry_rel, r.rz.norm() / std::max(1.0, P.h.norm()));
    r.dres = r.rx.norm() / std::max(1.0, P.c.norm());
    if (r.pcost < 0.0)
        r.relgap = r.gap / -r.pcost;
    else if (r.dcost > 0.0)
        r.relgap = r.gap / r.dcost;
    return r;
}

// Worst criterion relative to its tolerance; <= 1 means optimal.
double score(const Residuals &r, const SolverSettings &st)
{
    double g = r.gap / st.abstol;
    if (r.relgap)
        g = std::min(g, *r.relgap / st.reltol);
    return std::max({r.pres / st.feastol, r.dres / st.feastol, g});
}

bool all_finite(const VectorXd &v)
{
    return v.allFinite();
}

} // namespace

std::size_t ConeDims::total() const
{
    return linear + std::accumulate(soc.begin(), soc.end(), std::size_t{0});
}

void ConicProgram::validate() const
{
    const Index n = c.size();
    const auto m = static_cast<Index>(cones.total());
    if (G.rows() != m || G.cols() != n)
        throw std::invalid_argument("G must be (cone dimension) x (number of variables)");
    if (h.size() != m)
        throw std::invalid_argument("h must match the cone dimension");
    if (A.rows() > 0 && A.cols() != n)
        throw std::invalid_argument("A must have one column per variable");
    if (b.size() != A.rows())
        throw std::invalid_argument("b must have one entry per row of A");
    for (std::size_t q : cones.soc)
        if (q < 1)
            throw std::invalid_argument("second-order cones need dimension >= 1");
}

std::string_view to_string(SolverStatus status)
{
    switch (status)
    {
    case SolverStatus::optimal:
        return "optimal";
    case SolverStatus::near_optimal:
        return "near_optimal";
    case SolverStatus::infeasible:
        return "infeasible";
    case SolverStatus::numerical_failure:
        return "numerical_failure";
    }
    return "?";
}

double min_eigenvalue(const ConeDims &cones, const VectorXd &x)
{
    double lo = kInf;
    const auto l = static_cast<Index>(cones.linear);
    if (l > 0)
        lo = x.head(l).minCoeff();
    auto off = l;
    for (std::size_t q : cones.soc)
    {
        const auto qi = static_cast<Index>(q);
        lo = std::min(lo, x[off] - x.segment(off + 1, qi - 1).norm());
        off += qi;
    }
    return lo;
}

double max_step(const ConeDims &cones, const VectorXd &x, const VectorXd &d)
{
    double alpha = kInf;
    const auto l = static_cast<Index>(cones.linear);
    for (Index i = 0; i < l; ++i)
        if (d[i] < 0.0)
            alpha = std::min(alpha, -x[i] / d[i]);

    auto off = l;
    for (std::size_t q : cones.soc)
    {
        const auto qi = static_cast<Index>(q);
        const double x0 = x[off];
        const double d0 = d[off];
        const auto x1 = x.segment(off + 1, qi - 1);
        const auto d1 = d.segment(off + 1, qi - 1);
        off += qi;

        // f(a) = (x0 + a d0)^2 - ||x1 + a d1||^2 = qa a^2 + qb a + qc, qc > 0
        const double qa = soc_residual(d0, d1.norm());
        const double qb = 2.0 * (x0 * d0 - x1.dot(d1));
        const double qc = soc_residual(x0, x1.norm());
        double root = kInf;
        const double scale = std::max({std::abs(qa), std::abs(qb), std::abs(qc)});
        if (std::abs(qa) <= 1e-15 * scale)
        {
            if (qb < 0.0)
                root = -qc / qb;
        }
        else
        {
            const double disc = qb * qb - 4.0 * qa * qc;
            if (disc >= 0.0)
            {
                const double sq = std::sqrt(disc);
                const double t = -0.5 * (qb + (qb >= 0.0 ? sq : -sq));
                for (double r : {t / qa, t != 0.0 ? qc / t : kInf})
                    if (r > 0.0)
                        root = std::min(root, r);
            }
        }
        // f > 0 between 0 and the root also admits the mirrored cone; guard t >= 0
        if (d0 < 0.0)
            root = std::min(root, -x0 / d0);
        alpha = std::min(alpha, root);
    }
    return alpha;
}

ConicSolution solve(const ConicProgram &P, const SolverSettings &st)
{
    P.validate();
    const Index n = P.c.size();
    const Index p = P.A.rows();
    const ConeAlgebra cone(P.cones);
    const VectorXd e = cone.unit();
    const auto degree = static_cast<double>(P.cones.degree());

    ConicSolution out;
    out.x = VectorXd::Zero(n);
    out.y = VectorXd::Zero(p);

    // Starting point from the W = I least-squares systems.
    ReducedSystem sys;
    if (!sys.factor(P.G.transpose() * P.G, P.A))
        return out;
    VectorXd x, y, s, z, tmp;
    sys.solve(P.G.transpose() * P.h, p > 0 ? VectorXd(P.b) : VectorXd(), x, tmp);
    s = P.h - P.G * x;
    sys.solve(-P.c, VectorXd::Zero(p), tmp, y);
    z = P.G * tmp;
    if (p == 0)
        y.resize(0);

    auto shift_into_cone = [&](VectorXd &v) {
        const double t = -min_eigenvalue(P.cones, v);
        if (t >= -1e-8 * std::max(1.0, v.norm()))
            v += (1.0 + t) * e;
    };
    shift_into_cone(s);
    shift_into_cone(z);

    // Late iterations can lose accuracy in the dual residual once the
    // Newton system gets ill-conditioned, so the best iterate is kept.
    Residuals res;
    double best = kInf;
    int since_best = 0;
    int iter = 0;
    for (;; ++iter)
    {
        res = residuals(P, x, y, s, z);
        if (st.verbose)
            std::fprintf(stderr, "%3d  pcost %+.9e  dcost %+.9e  gap %.2e  pres %.2e  dres %.2e\n", iter, res.pcost,
                         res.dcost, res.gap, res.pres, res.dres);
        const double sc_now = score(res, st);
        if (sc_now < best)
        {
            best = sc_now;
            since_best = 0;
            out.x = x;
            out.y = y;
            out.s = s;
            out.z = z;
            out.primal_objective = res.pcost;
            out.dual_objective = res.dcost;
            out.gap = res.gap;
            out.primal_residual = res.pres;
            out.dual_residual = res.dres;
        }
        else
        {
            ++since_best;
        }
        out.iterations = iter;
        if (sc_now <= 1.0)
        {
            out.status = SolverStatus::optimal;
            return out;
        }
        if (since_best >= 4 && best <= st.near_factor)
            break;
        if (iter >= st.max_iters)
            break;

        const auto sc = cone.scaling(s, z);
        if (!sc)
            break;
        const VectorXd &lambda = sc->lambda;
        const double mu = res.gap / degree;

        const MatrixXd Gs = cone.apply_cols(*sc, P.G, true); // W^{-1} G
        if (!sys.factor(Gs.transpose() * Gs, P.A))
            break;
        const VectorXd Wrz = cone.apply(*sc, res.rz, true);
        const VectorXd ry_neg = p > 0 ? VectorXd(-res.ry) : VectorXd();

        // Direction for a given complementarity target q = lambda \ rc,
        // returning scaled dz (W dz) and ds (W^{-1} ds).
        auto direction = [&](const VectorXd &q, VectorXd &dx, VectorXd &dy, VectorXd &dz_s, VectorXd &ds_s) {
            const VectorXd r1 = -res.rx - Gs.transpose() * (Wrz + q);
            sys.solve(r1, ry_neg, dx, dy);
            dz_s = Gs * dx + Wrz + q;
            ds_s = q - dz_s;
        };

        // predictor
        VectorXd dx, dy, dz_s, ds_s;
        direction(-lambda, dx, dy, dz_s, ds_s);
        if (!all_finite(dx))
            break;
        VectorXd dz = cone.apply(*sc, dz_s, true);
        VectorXd ds = cone.apply(*sc, ds_s, false);
        const double a_aff = std::min({1.0, max_step(P.cones, s, ds), max_step(P.cones, z, dz)});
        const double sigma = std::pow(1.0 - a_aff, 3.0);

        // corrector
        const VectorXd rc = -cone.product(lambda, lambda) - cone.product(ds_s, dz_s) + sigma * mu * e;
        direction(cone.divide(lambda, rc), dx, dy, dz_s, ds_s);
        if (!all_finite(dx))
            break;
        dz = cone.apply(*sc, dz_s, true);
        ds = cone.apply(*sc, ds_s, false);
        const double a_max = std::min(max_step(P.cones, s, ds), max_step(P.cones, z, dz));
        const double alpha = std::min(1.0, 0.99 * a_max);
        if (!(alpha > 1e-12))
            break;

        x += alpha * dx;
        if (p > 0)
            y += alpha * dy;
        s += alpha * ds;
        z += alpha * dz;
    }

    out.status = best <= st.near_factor ? SolverStatus::near_optimal : SolverStatus::numerical_failure;
    return out;
}

} // namespace rsmcast::conic
