// SPDX-License-Identifier: Apache-2.0
//
// twrc: relay power minimization for lattice-coded two-way relaying with
// power-splitting energy harvesting.
// Copyright (C) 2026 The twrc authors
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

#include "twrc/sdp.hpp"
#include "twrc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace twrc
{

const char *status_name(SdpStatus status) noexcept
{
    switch (status)
    {
    case SdpStatus::Optimal:
        return "optimal";
    case SdpStatus::Infeasible:
        return "infeasible";
    case SdpStatus::Unbounded:
        return "unbounded";
    case SdpStatus::NumericalFailure:
        return "numerical-failure";
    }
    return "unknown";
}

namespace
{

constexpr std::size_t max_real_dimension = 32;
constexpr std::size_t max_constraints = 8;
constexpr double ray_tolerance = 1e-8;
constexpr double step_fraction = 0.98;

// Scaled problem: each constraint row divided by ||A_k||_F, then b by
// b_scale and C by c_scale so both are O(1).
struct Problem
{
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t ns = 0;
    RealMatrix c;
    std::vector<RealMatrix> a;
    std::vector<double> b;
    std::vector<int> slot;      // slack index of row k, -1 for equalities
    std::vector<double> sign;   // coefficient of the slack in row k
    std::vector<int> slack_row; // inverse of slot
    std::vector<double> row_scale;
    double b_scale = 1.0;
    double c_scale = 1.0;
    double b_norm = 0.0; // unscaled
    double c_norm = 0.0; // unscaled
};

struct Iterate
{
    RealMatrix x;
    RealMatrix z;
    std::vector<double> xs;
    std::vector<double> zs;
    std::vector<double> y;
};

struct Residuals
{
    std::vector<double> rp;
    RealMatrix rd;
    std::vector<double> rds;
};

struct Direction
{
    RealMatrix dx;
    RealMatrix dz;
    std::vector<double> dxs;
    std::vector<double> dzs;
    std::vector<double> dy;
};

struct Metrics
{
    KktResiduals kkt;
    double primal_objective = 0.0; // unscaled
    double dual_objective = 0.0;   // unscaled
};

double norm2(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

Problem prepare(const RealSdpInstance &inst)
{
    Problem p;
    p.n = inst.objective.rows();
    p.m = inst.constraints.size();
    if (p.n == 0 || inst.objective.cols() != p.n)
        throw Error(ErrorCode::InvalidArgument, "sdp: objective must be a non-empty square matrix");
    if (p.n > max_real_dimension)
        throw Error(ErrorCode::InvalidArgument, "sdp: dimension exceeds the dense solver limit");
    if (p.m > max_constraints)
        throw Error(ErrorCode::InvalidArgument, "sdp: too many constraints");

    p.c = symmetrize(inst.objective);
    if (inst.sense == Sense::Maximize)
        p.c *= -1.0;

    std::vector<double> b_unscaled;
    for (const auto &con : inst.constraints)
    {
        if (con.a.rows() != p.n || con.a.cols() != p.n)
            throw Error(ErrorCode::InvalidArgument, "sdp: constraint dimension mismatch");
        if (!std::isfinite(con.rhs))
            throw Error(ErrorCode::InvalidArgument, "sdp: non-finite right-hand side");
        RealMatrix a = symmetrize(con.a);
        double s = a.frobenius_norm();
        if (!(s > 0.0))
            s = 1.0;
        p.row_scale.push_back(s);
        a *= 1.0 / s;
        p.a.push_back(std::move(a));
        p.b.push_back(con.rhs / s);
        b_unscaled.push_back(con.rhs);
        if (con.relation == Relation::Equal)
        {
            p.slot.push_back(-1);
            p.sign.push_back(0.0);
        }
        else
        {
            p.slot.push_back(static_cast<int>(p.ns++));
            p.sign.push_back(con.relation == Relation::GreaterEqual ? -1.0 : 1.0);
            p.slack_row.push_back(static_cast<int>(p.a.size() - 1));
        }
    }
    p.b_norm = norm2(b_unscaled);
    p.c_norm = p.c.frobenius_norm();

    double bmax = 0.0;
    for (double v : p.b)
        bmax = std::max(bmax, std::abs(v));
    p.b_scale = std::max(1.0, bmax);
    p.c_scale = std::max(1.0, p.c.frobenius_norm());
    for (double &v : p.b)
        v /= p.b_scale;
    p.c *= 1.0 / p.c_scale;
    return p;
}

Residuals residuals(const Problem &p, const Iterate &it)
{
    Residuals r;
    r.rp.resize(p.m);
    r.rd = p.c - it.z;
    r.rds.assign(p.ns, 0.0);
    for (std::size_t k = 0; k < p.m; ++k)
    {
        double ax = frobenius_inner(p.a[k], it.x);
        if (p.slot[k] >= 0)
            ax += p.sign[k] * it.xs[p.slot[k]];
        r.rp[k] = p.b[k] - ax;
        r.rd -= p.a[k] * it.y[k];
    }
    for (std::size_t j = 0; j < p.ns; ++j)
    {
        const int k = p.slack_row[j];
        r.rds[j] = -p.sign[k] * it.y[k] - it.zs[j];
    }
    return r;
}

Metrics metrics(const Problem &p, const Iterate &it, const Residuals &r)
{
    Metrics out;
    double rp2 = 0.0;
    for (std::size_t k = 0; k < p.m; ++k)
    {
        const double v = r.rp[k] * p.row_scale[k] * p.b_scale;
        rp2 += v * v;
    }
    double rd2 = r.rd.frobenius_norm() * r.rd.frobenius_norm();
    for (std::size_t j = 0; j < p.ns; ++j)
    {
        const double v = r.rds[j] / p.row_scale[p.slack_row[j]];
        rd2 += v * v;
    }
    const double scale = p.b_scale * p.c_scale;
    out.primal_objective = scale * frobenius_inner(p.c, it.x);
    double by = 0.0;
    for (std::size_t k = 0; k < p.m; ++k)
        by += p.b[k] * it.y[k];
    out.dual_objective = scale * by;
    out.kkt.primal = std::sqrt(rp2) / (1.0 + p.b_norm);
    out.kkt.dual = p.c_scale * std::sqrt(rd2) / (1.0 + p.c_norm);
    out.kkt.gap = std::abs(out.primal_objective - out.dual_objective) /
                  (1.0 + std::abs(out.primal_objective) + std::abs(out.dual_objective));
    return out;
}

// Solves L y = B column by column.
RealMatrix forward_solve(const RealMatrix &lower, const RealMatrix &rhs)
{
    const std::size_t n = lower.rows();
    RealMatrix out = rhs;
    for (std::size_t c = 0; c < rhs.cols(); ++c)
        for (std::size_t i = 0; i < n; ++i)
        {
            double s = out(i, c);
            for (std::size_t k = 0; k < i; ++k)
                s -= lower(i, k) * out(k, c);
            out(i, c) = s / lower(i, i);
        }
    return out;
}

// Largest alpha with X + alpha dX ⪰ 0 (infinity if dX ⪰ 0).
double max_step(const RealMatrix &x, const RealMatrix &dx)
{
    RealMatrix lower;
    if (!cholesky(x, lower))
        return 0.0;
    const RealMatrix t = forward_solve(lower, dx);
    const RealMatrix w = forward_solve(lower, t.transpose());
    const double lmin = eig_symmetric(symmetrize(w)).values.back();
    return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

double max_step(std::span<const double> x, std::span<const double> dx)
{
    double a = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i)
        if (dx[i] < 0.0)
            a = std::min(a, -x[i] / dx[i]);
    return a;
}

class DirectionSolver
{
public:
    DirectionSolver(const Problem &p, const Iterate &it, const Residuals &r, const RealMatrix &z_inv)
        : p_(p), it_(it), r_(r), z_inv_(z_inv)
    {
        std::vector<RealMatrix> w;
        w.reserve(p.m);
        for (std::size_t k = 0; k < p.m; ++k)
            w.push_back(it.x * p.a[k] * z_inv);
        RealMatrix m(p.m, p.m);
        for (std::size_t j = 0; j < p.m; ++j)
            for (std::size_t k = 0; k < p.m; ++k)
                m(j, k) = frobenius_inner(p.a[j], w[k]);
        m = symmetrize(m);
        for (std::size_t k = 0; k < p.m; ++k)
            if (p.slot[k] >= 0)
                m(k, k) += it.xs[p.slot[k]] / it.zs[p.slot[k]];
        ok_ = cholesky(m, schur_);
    }

    bool ok() const noexcept { return ok_; }

    // Newton direction towards X Z = target * I with an optional second-order
    // correction (previous predictor direction).
    Direction solve(double target, const Direction *predictor) const
    {
        const std::size_t n = p_.n;
        RealMatrix k = z_inv_ * target - it_.x - it_.x * r_.rd * z_inv_;
        if (predictor)
            k -= predictor->dx * predictor->dz * z_inv_;
        std::vector<double> ks(p_.ns);
        for (std::size_t j = 0; j < p_.ns; ++j)
        {
            ks[j] = target / it_.zs[j] - it_.xs[j] - it_.xs[j] * r_.rds[j] / it_.zs[j];
            if (predictor)
                ks[j] -= predictor->dxs[j] * predictor->dzs[j] / it_.zs[j];
        }

        std::vector<double> rhs(p_.m);
        for (std::size_t i = 0; i < p_.m; ++i)
        {
            rhs[i] = r_.rp[i] - frobenius_inner(p_.a[i], k);
            if (p_.slot[i] >= 0)
                rhs[i] -= p_.sign[i] * ks[p_.slot[i]];
        }

        Direction d;
        d.dy = p_.m > 0 ? cholesky_solve(schur_, rhs) : std::vector<double>{};
        RealMatrix ady(n, n);
        for (std::size_t i = 0; i < p_.m; ++i)
            ady += p_.a[i] * d.dy[i];
        d.dz = r_.rd - ady;
        d.dx = symmetrize(k + it_.x * ady * z_inv_);
        d.dxs.resize(p_.ns);
        d.dzs.resize(p_.ns);
        for (std::size_t j = 0; j < p_.ns; ++j)
        {
            const int row = p_.slack_row[j];
            d.dzs[j] = r_.rds[j] - p_.sign[row] * d.dy[row];
            d.dxs[j] = ks[j] + it_.xs[j] * p_.sign[row] * d.dy[row] / it_.zs[j];
        }
        return d;
    }

private:
    const Problem &p_;
    const Iterate &it_;
    const Residuals &r_;
    const RealMatrix &z_inv_;
    RealMatrix schur_;
    bool ok_ = false;
};

struct Steps
{
    double primal = 0.0;
    double dual = 0.0;
};

Steps boundary_steps(const Iterate &it, const Direction &d)
{
    return {std::min(max_step(it.x, d.dx), max_step(it.xs, d.dxs)),
            std::min(max_step(it.z, d.dz), max_step(it.zs, d.dzs))};
}

double complementarity(const Iterate &it)
{
    double s = frobenius_inner(it.x, it.z);
    for (std::size_t j = 0; j < it.xs.size(); ++j)
        s += it.xs[j] * it.zs[j];
    return s;
}

RealSdpSolution finish(const Problem &p, const Iterate &it, const Metrics &m, SdpStatus status, int iterations,
                       Sense sense)
{
    RealSdpSolution sol;
    sol.x = it.x * p.b_scale;
    sol.status = status;
    sol.kkt = m.kkt;
    sol.iterations = iterations;
    const double flip = sense == Sense::Maximize ? -1.0 : 1.0;
    sol.objective_value = flip * m.primal_objective;
    sol.dual_bound = flip * m.dual_objective;
    sol.multipliers.resize(p.m);
    for (std::size_t k = 0; k < p.m; ++k)
        sol.multipliers[k] = p.c_scale * it.y[k] / p.row_scale[k];
    return sol;
}

} // namespace

RealSdpSolution solve_real_sdp(const RealSdpInstance &instance, const SdpTolerances &tol)
{
    const Problem p = prepare(instance);
    const std::size_t n = p.n;

    Iterate it;
    const double start = std::max(10.0, std::sqrt(static_cast<double>(n)));
    it.x = RealMatrix::identity(n) * start;
    it.z = RealMatrix::identity(n) * start;
    it.xs.assign(p.ns, start);
    it.zs.assign(p.ns, start);
    it.y.assign(p.m, 0.0);

    const double total = static_cast<double>(n + p.ns);
    Metrics last;
    int iter = 0;
    try
    {
        for (; iter <= tol.max_iterations; ++iter)
        {
            const Residuals r = residuals(p, it);
            last = metrics(p, it, r);
            if (last.kkt.primal <= tol.feasibility && last.kkt.dual <= tol.feasibility && last.kkt.gap <= tol.gap)
                return finish(p, it, last, SdpStatus::Optimal, iter, instance.sense);

            // Improving rays: a dual ray certifies primal infeasibility, a
            // primal ray certifies unboundedness.
            double by = 0.0;
            for (std::size_t k = 0; k < p.m; ++k)
                by += p.b[k] * it.y[k];
            if (by > 0.0)
            {
                RealMatrix ray = p.c - r.rd;
                double ray2 = ray.frobenius_norm() * ray.frobenius_norm();
                for (double v : r.rds)
                    ray2 += v * v;
                if (std::sqrt(ray2) / by < ray_tolerance)
                    return finish(p, it, last, SdpStatus::Infeasible, iter, instance.sense);
            }
            const double cx = frobenius_inner(p.c, it.x);
            if (cx < 0.0)
            {
                std::vector<double> ax(p.m);
                for (std::size_t k = 0; k < p.m; ++k)
                    ax[k] = p.b[k] - r.rp[k];
                if (norm2(ax) / -cx < ray_tolerance)
                    return finish(p, it, last, SdpStatus::Unbounded, iter, instance.sense);
            }
            if (iter == tol.max_iterations)
                break;

            RealMatrix z_lower;
            if (!cholesky(it.z, z_lower))
                break;
            const RealMatrix z_inv = cholesky_inverse(z_lower);
            const double mu = complementarity(it) / total;

            const DirectionSolver solver(p, it, r, z_inv);
            if (!solver.ok())
                break;

            const Direction affine = solver.solve(0.0, nullptr);
            const Steps sa = boundary_steps(it, affine);
            const double ap = std::min(1.0, sa.primal);
            const double ad = std::min(1.0, sa.dual);
            Iterate trial = it;
            trial.x += affine.dx * ap;
            trial.z += affine.dz * ad;
            for (std::size_t j = 0; j < p.ns; ++j)
            {
                trial.xs[j] += ap * affine.dxs[j];
                trial.zs[j] += ad * affine.dzs[j];
            }
            const double mu_aff = std::max(0.0, complementarity(trial) / total);
            const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

            const Direction d = solver.solve(sigma * mu, &affine);
            const Steps s = boundary_steps(it, d);
            const double step_p = std::min(1.0, step_fraction * s.primal);
            const double step_d = std::min(1.0, step_fraction * s.dual);
            if (step_p < 1e-12 && step_d < 1e-12)
                break;

            it.x = symmetrize(it.x + d.dx * step_p);
            it.z = symmetrize(it.z + d.dz * step_d);
            for (std::size_t j = 0; j < p.ns; ++j)
            {
                it.xs[j] += step_p * d.dxs[j];
                it.zs[j] += step_d * d.dzs[j];
            }
            for (std::size_t k = 0; k < p.m; ++k)
                it.y[k] += step_d * d.dy[k];
        }
    }
    catch (const Error &e)
    {
        if (e.code() != ErrorCode::SolverFailure)
            throw;
    }
    return finish(p, it, last, SdpStatus::NumericalFailure, iter, instance.sense);
}

SdpSolution solve_sdp(const SdpInstance &instance, const SdpTolerances &tol)
{
    const std::size_t n = instance.dimension();
    if (n == 0)
        throw Error(ErrorCode::InvalidArgument, "sdp: empty instance");
    if (n > max_real_dimension / 2)
        throw Error(ErrorCode::InvalidArgument, "sdp: Hermitian dimension exceeds 16");

    // Tr(A X) = Tr(emb(A) Y) with Y = emb(X) / 2.
    RealSdpInstance real;
    real.objective = real_embed(instance.objective);
    real.sense = instance.sense;
    for (const auto &con : instance.constraints)
    {
        if (con.a.dim() != n)
            throw Error(ErrorCode::InvalidArgument, "sdp: constraint dimension mismatch");
        real.constraints.push_back({real_embed(con.a), con.relation, con.rhs});
    }

    const RealSdpSolution rs = solve_real_sdp(real, tol);
    SdpSolution sol;
    sol.x = real_unembed(rs.x) * 2.0;
    sol.objective_value = rs.objective_value;
    sol.dual_bound = rs.dual_bound;
    sol.multipliers = rs.multipliers;
    sol.status = rs.status;
    sol.kkt = rs.kkt;
    sol.iterations = rs.iterations;
    return sol;
}

BisectionResult bisect_level(const std::function<bool(double)> &feasible, double lo, double hi, double tol)
{
    if (!(hi > lo) || !(tol > 0.0) || !std::isfinite(lo) || !std::isfinite(hi))
        throw Error(ErrorCode::InvalidArgument, "bisect_level: need finite lo < hi and tol > 0");
    BisectionResult out;
    ++out.oracle_calls;
    if (feasible(lo))
    {
        out.level = lo;
        out.lower = lo;
        return out;
    }
    ++out.oracle_calls;
    if (!feasible(hi))
        throw Error(ErrorCode::BracketError, "bisect_level: upper end of the bracket is infeasible");
    while (hi - lo > tol)
    {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi)
            break;
        ++out.oracle_calls;
        ++out.interior_calls;
        if (feasible(mid))
            hi = mid;
        else
            lo = mid;
    }
    out.level = hi;
    out.lower = lo;
    return out;
}

} // namespace twrc
