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

#include "twrc/design.hpp"
#include "twrc/error.hpp"
#include "twrc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace twrc
{

namespace
{

constexpr double kRankTolerance = 1e-6;
constexpr double kBetaSlack = 1e-9;
constexpr double kLevelTolerance = 1e-9;

void check_channel(const ChannelRealization &channel)
{
    if (channel.h1.size() == 0 || channel.h1.size() != channel.h2.size())
        throw Error(ErrorCode::InvalidArgument, "channel vectors must be non-empty and of equal length");
    if (!channel.h1.is_finite() || !channel.h2.is_finite())
        throw Error(ErrorCode::InvalidArgument, "channel has non-finite entries");
}

void check_vector(const ComplexVector &v, std::size_t n, const char *name)
{
    if (v.size() != n)
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " length does not match the channel");
    if (!v.is_finite())
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " has non-finite entries");
}

double downlink_gain(const ChannelRealization &channel, std::size_t i, const ComplexVector &f)
{
    const double d = effective_gain(channel.user(i), f);
    if (!(d > 0.0))
        throw Error(ErrorCode::DegenerateChannel, "zero downlink gain to user " + std::to_string(i + 1));
    return d;
}

double uplink_gain(const ChannelRealization &channel, std::size_t i, const ComplexVector &g)
{
    const double u = effective_gain(g, channel.user(i));
    if (!(u > 0.0))
        throw Error(ErrorCode::DegenerateChannel, "zero uplink gain from user " + std::to_string(i + 1));
    return u;
}

// Row k of the linear map Delta -> Tr(B Delta) over the real basis of r x r
// Hermitian matrices: diagonal units, then (e_kl + e_lk) and i(e_kl - e_lk).
std::vector<double> hermitian_coordinates(const std::vector<std::vector<Complex>> &b, std::size_t r)
{
    std::vector<double> row;
    row.reserve(r * r);
    for (std::size_t k = 0; k < r; ++k)
        row.push_back(b[k][k].real());
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = k + 1; l < r; ++l)
        {
            row.push_back(2.0 * b[k][l].real());
            row.push_back(2.0 * b[k][l].imag());
        }
    return row;
}

HermitianMatrix hermitian_from_coordinates(const std::vector<double> &x, std::size_t r)
{
    HermitianMatrix d(r);
    std::size_t t = 0;
    for (std::size_t k = 0; k < r; ++k)
        d.set(k, k, x[t++]);
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = k + 1; l < r; ++l)
        {
            const double re = x[t++];
            const double im = x[t++];
            d.set(k, l, Complex(re, im));
        }
    return d;
}

// A unit vector orthogonal to every row, or empty if the rows span the space.
std::vector<double> null_vector(std::vector<std::vector<double>> rows, std::size_t dim)
{
    std::vector<std::vector<double>> basis;
    for (auto &row : rows)
    {
        for (const auto &q : basis)
        {
            double p = 0.0;
            for (std::size_t t = 0; t < dim; ++t)
                p += row[t] * q[t];
            for (std::size_t t = 0; t < dim; ++t)
                row[t] -= p * q[t];
        }
        double n = 0.0;
        for (double v : row)
            n += v * v;
        n = std::sqrt(n);
        if (n > 1e-12)
        {
            for (double &v : row)
                v /= n;
            basis.push_back(row);
        }
    }
    std::vector<double> best;
    double best_norm = 0.0;
    for (std::size_t e = 0; e < dim; ++e)
    {
        std::vector<double> x(dim, 0.0);
        x[e] = 1.0;
        for (const auto &q : basis)
        {
            const double p = q[e];
            for (std::size_t t = 0; t < dim; ++t)
                x[t] -= p * q[t];
        }
        double n = 0.0;
        for (double v : x)
            n += v * v;
        n = std::sqrt(n);
        if (n > best_norm + 1e-12)
        {
            best_norm = n;
            for (double &v : x)
                v /= n;
            best = std::move(x);
        }
    }
    if (best_norm < 1e-8)
        return {};
    return best;
}

} // namespace

void SystemParams::validate() const
{
    if (antennas < 1)
        throw Error(ErrorCode::InvalidArgument, "antenna count must be at least 1");
    if (!(eta > 0.0 && eta <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "conversion efficiency must lie in (0, 1]");
    if (!(circuit_power >= 0.0) || !std::isfinite(circuit_power))
        throw Error(ErrorCode::InvalidArgument, "circuit power must be finite and non-negative");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw Error(ErrorCode::InvalidArgument, "noise power must be finite and positive");
    if (!(sigma2_a >= 0.0 && sigma2_p >= 0.0) || std::abs(sigma2_a + sigma2_p - sigma2) > 1e-12 * sigma2)
        throw Error(ErrorCode::InvalidArgument, "noise split must be non-negative and sum to the noise power");
    for (double r : rate_targets)
        if (!(r > 0.0) || !std::isfinite(r))
            throw Error(ErrorCode::InvalidArgument, "rate targets must be finite and positive");
}

SystemParams SystemParams::make(std::size_t antennas, double eta, double circuit_power, double sigma2,
                                double rate1, double rate2)
{
    SystemParams p;
    p.antennas = antennas;
    p.eta = eta;
    p.circuit_power = circuit_power;
    p.sigma2 = sigma2;
    p.sigma2_a = 0.0;
    p.sigma2_p = sigma2;
    p.rate_targets = {rate1, rate2};
    p.validate();
    return p;
}

RateThresholds rate_thresholds(const SystemParams &params)
{
    for (double r : params.rate_targets)
        if (!(r > 0.0))
            throw Error(ErrorCode::InvalidArgument, "rate targets must be positive");
    const double t1 = std::exp2(2.0 * params.rate_targets[0]);
    const double t2 = std::exp2(2.0 * params.rate_targets[1]);
    return RateThresholds{{t1, t2}, {t2, t1}};
}

double effective_gain(const ComplexVector &a, const ComplexVector &b)
{
    return std::norm(dot(a, b));
}

std::array<double, 2> constraint_rhs(const SystemParams &params, const ComplexVector &g,
                                     const ChannelRealization &channel)
{
    params.validate();
    check_channel(channel);
    check_vector(g, channel.antennas(), "combiner");
    const auto th = rate_thresholds(params);
    const double fixed = 2.0 * params.circuit_power / params.eta;
    std::array<double, 2> a{};
    for (std::size_t i = 0; i < 2; ++i)
    {
        const double u = uplink_gain(channel, i, g);
        a[i] = params.sigma2 * th.uplink[i] / (params.eta * u) + params.sigma2 * (th.downlink[i] - 1.0) + fixed;
    }
    return a;
}

double required_power(const ComplexVector &f, const ComplexVector &g, const ChannelRealization &channel,
                      const SystemParams &params)
{
    const auto a = constraint_rhs(params, g, channel);
    check_vector(f, channel.antennas(), "beamformer");
    double p = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
        p = std::max(p, a[i] / downlink_gain(channel, i, f));
    return p;
}

RankOne rank_one_extract(const HermitianMatrix &m)
{
    const auto e = eig_hermitian(m);
    RankOne r;
    r.scale = e.values.front();
    r.v = e.vectors.front();
    if (e.values.size() > 1)
    {
        const double second = std::max(e.values[1], 0.0);
        r.rank_ratio = r.scale > 0.0 ? second / r.scale : 1.0;
    }
    return r;
}

HermitianMatrix reduce_rank(const HermitianMatrix &m, std::span<const HermitianMatrix> preserved,
                            double relative_cut)
{
    for (const auto &p : preserved)
        if (p.dim() != m.dim())
            throw Error(ErrorCode::InvalidArgument, "preserved matrix dimension mismatch");

    const std::size_t n = m.dim();
    HermitianMatrix current = m;
    for (std::size_t guard = 0; guard < n; ++guard)
    {
        const auto e = eig_hermitian(current);
        const double top = e.values.front();
        if (!(top > 0.0))
            return current;
        std::size_t r = 0;
        while (r < n && e.values[r] > relative_cut * top)
            ++r;

        // current ~= V V^H with V = [sqrt(lambda_k) z_k]
        std::vector<ComplexVector> v;
        for (std::size_t k = 0; k < r; ++k)
            v.push_back(e.vectors[k] * std::sqrt(e.values[k]));
        if (r * r <= preserved.size())
        {
            HermitianMatrix out(n);
            for (const auto &col : v)
                out += HermitianMatrix::outer(col);
            return out;
        }

        std::vector<std::vector<double>> rows;
        for (const auto &p : preserved)
        {
            std::vector<std::vector<Complex>> b(r, std::vector<Complex>(r));
            for (std::size_t l = 0; l < r; ++l)
            {
                const ComplexVector pv = p.apply(v[l]);
                for (std::size_t k = 0; k < r; ++k)
                    b[k][l] = inner(v[k], pv);
            }
            rows.push_back(hermitian_coordinates(b, r));
        }
        const auto x = null_vector(rows, r * r);
        if (x.empty())
            return current;
        HermitianMatrix delta = hermitian_from_coordinates(x, r);
        const auto de = eig_hermitian(delta).values;
        if (de.front() < -de.back())
            delta *= -1.0;
        const double lmax = std::max(de.front(), -de.back());

        // W = I - Delta / lambda_max is PSD with at least one zero eigenvalue
        HermitianMatrix w = HermitianMatrix::identity(r) - delta * (1.0 / lmax);
        HermitianMatrix next(n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a; b < n; ++b)
            {
                Complex s = 0.0;
                for (std::size_t k = 0; k < r; ++k)
                    for (std::size_t l = 0; l < r; ++l)
                        s += v[k][a] * w(k, l) * std::conj(v[l][b]);
                next.set(a, b, s);
            }
        current = next;
    }
    return current;
}

BeamformerResult solve_beamformer_rhs(const std::array<double, 2> &a, const ChannelRealization &channel,
                                      const SdpTolerances &tol)
{
    check_channel(channel);
    const std::size_t n = channel.antennas();

    SdpInstance inst;
    inst.objective = HermitianMatrix::identity(n);
    std::vector<HermitianMatrix> preserved;
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < 2; ++i)
    {
        if (!(a[i] > 0.0))
            continue;
        if (!(channel.user(i).norm_squared() > 0.0))
            throw Error(ErrorCode::DegenerateChannel, "zero channel to user " + std::to_string(i + 1));
        const HermitianMatrix ai = HermitianMatrix::outer(channel.user(i).conj());
        inst.constraints.push_back({ai, Relation::GreaterEqual, a[i]});
        preserved.push_back(ai);
        active.push_back(i);
    }
    if (active.empty())
        throw Error(ErrorCode::InvalidArgument, "beamformer problem has no active constraint");
    preserved.push_back(HermitianMatrix::identity(n));

    const SdpSolution sol = solve_sdp(inst, tol);
    if (sol.status != SdpStatus::Optimal)
        throw Error(ErrorCode::SolverFailure,
                    std::string("beamformer SDP ended with status ") + status_name(sol.status));

    BeamformerResult out;
    out.F = sol.x;
    out.raw_rank_ratio = rank_one_extract(out.F).rank_ratio;
    if (out.raw_rank_ratio > kRankTolerance)
    {
        out.F = reduce_rank(out.F, preserved);
        out.rank_reduced = true;
    }
    const RankOne r1 = rank_one_extract(out.F);
    out.rank_ratio = r1.rank_ratio;
    out.f = r1.v;
    if (out.rank_ratio > kRankTolerance)
    {
        out.fallback = true;
        out.diagnostic = "beamformer solution not rank one (ratio " + std::to_string(out.rank_ratio) +
                         "); projected on the dominant eigenvector and rescaled";
    }
    for (std::size_t i : active)
        out.p_r = std::max(out.p_r, a[i] / downlink_gain(channel, i, out.f));
    return out;
}

BeamformerResult solve_beamformer(const ComplexVector &g, const ChannelRealization &channel,
                                  const SystemParams &params, const SdpTolerances &tol)
{
    return solve_beamformer_rhs(constraint_rhs(params, g, channel), channel, tol);
}

CombinerCoefficients combiner_coefficients(const ComplexVector &f, const ChannelRealization &channel,
                                           const SystemParams &params)
{
    params.validate();
    check_channel(channel);
    check_vector(f, channel.antennas(), "beamformer");
    const auto th = rate_thresholds(params);
    CombinerCoefficients c;
    for (std::size_t i = 0; i < 2; ++i)
    {
        const double d = downlink_gain(channel, i, f);
        c.rho[i] = params.sigma2 * th.uplink[i] / (params.eta * d);
        c.mu[i] = (params.sigma2 * (th.downlink[i] - 1.0) + 2.0 * params.circuit_power / params.eta) / d;
    }
    return c;
}

CombinerResult solve_combiner_coeffs(const CombinerCoefficients &coeffs, const ChannelRealization &channel,
                                     const SdpTolerances &tol, const ComplexVector *incumbent)
{
    check_channel(channel);
    const std::size_t n = channel.antennas();

    std::vector<std::size_t> active;
    std::vector<HermitianMatrix> preserved;
    for (std::size_t i = 0; i < 2; ++i)
    {
        if (!(coeffs.rho[i] > 0.0))
            continue;
        if (!(coeffs.mu[i] >= 0.0))
            throw Error(ErrorCode::InvalidArgument, "combiner offset must be non-negative");
        if (!(channel.user(i).norm_squared() > 0.0))
            throw Error(ErrorCode::DegenerateChannel, "zero channel from user " + std::to_string(i + 1));
        active.push_back(i);
        preserved.push_back(HermitianMatrix::outer(channel.user(i)));
    }
    if (active.empty())
        throw Error(ErrorCode::InvalidArgument, "combiner problem has no active user");
    preserved.push_back(HermitianMatrix::identity(n));

    auto value_at = [&](const ComplexVector &g)
    {
        double v = 0.0;
        for (std::size_t i : active)
            v = std::max(v, coeffs.rho[i] / uplink_gain(channel, i, g) + coeffs.mu[i]);
        return v;
    };

    CombinerResult out;
    if (n == 1)
    {
        out.G = HermitianMatrix::identity(1);
        out.g = ComplexVector{1.0};
        out.p_r = value_at(out.g);
        out.level = out.p_r;
        return out;
    }

    // Bracket: no unit g beats matched filtering for the worst user, and the
    // uniform combiner (or the incumbent, when given) is feasible.
    double lo = 0.0;
    double floor_mu = 0.0;
    for (std::size_t i : active)
    {
        lo = std::max(lo, coeffs.rho[i] / channel.user(i).norm_squared() + coeffs.mu[i]);
        floor_mu = std::max(floor_mu, coeffs.mu[i]);
    }
    ComplexVector start(std::vector<Complex>(n, 1.0 / std::sqrt(static_cast<double>(n))));
    double hi = value_at(start);
    if (incumbent != nullptr)
    {
        check_vector(*incumbent, n, "incumbent combiner");
        const ComplexVector unit = incumbent->normalized();
        const double v = value_at(unit);
        if (v < hi)
        {
            hi = v;
            start = unit;
        }
    }
    const HermitianMatrix start_matrix = HermitianMatrix::outer(start.conj());

    HermitianMatrix best = start_matrix;
    auto oracle = [&](double s)
    {
        if (s <= floor_mu)
            return false;
        if (s >= hi)
        {
            best = start_matrix;
            return true;
        }
        SdpInstance inst;
        inst.objective = HermitianMatrix::identity(n);
        for (std::size_t k = 0; k < active.size(); ++k)
        {
            const std::size_t i = active[k];
            inst.constraints.push_back({preserved[k], Relation::GreaterEqual, coeffs.rho[i] / (s - coeffs.mu[i])});
        }
        const SdpSolution sol = solve_sdp(inst, tol);
        if (sol.status != SdpStatus::Optimal)
            throw Error(ErrorCode::SolverFailure,
                        std::string("combiner feasibility SDP ended with status ") + status_name(sol.status));
        if (sol.objective_value > 1.0)
            return false;
        best = sol.x;
        return true;
    };

    if (hi > lo)
    {
        const BisectionResult bis = bisect_level(oracle, lo, hi, kLevelTolerance * hi);
        out.level = bis.level;
        out.oracle_calls = bis.oracle_calls;
    }
    else
    {
        out.level = hi;
    }

    HermitianMatrix g_mat = best * (1.0 / best.trace());
    out.raw_rank_ratio = rank_one_extract(g_mat).rank_ratio;
    if (out.raw_rank_ratio > kRankTolerance)
    {
        g_mat = reduce_rank(g_mat, preserved);
        out.rank_reduced = true;
    }
    const RankOne r1 = rank_one_extract(g_mat);
    out.G = g_mat;
    out.rank_ratio = r1.rank_ratio;
    out.g = r1.v.conj();
    if (out.rank_ratio > kRankTolerance)
    {
        out.fallback = true;
        out.diagnostic = "combiner solution not rank one (ratio " + std::to_string(out.rank_ratio) +
                         "); projected on the dominant eigenvector";
    }
    out.p_r = value_at(out.g);
    return out;
}

CombinerResult solve_combiner(const ComplexVector &f, const ChannelRealization &channel,
                              const SystemParams &params, const SdpTolerances &tol, const ComplexVector *incumbent)
{
    return solve_combiner_coeffs(combiner_coefficients(f, channel, params), channel, tol, incumbent);
}

BetaInterval beta_interval(std::size_t user, double p_r, const ComplexVector &f, const ComplexVector &g,
                           const ChannelRealization &channel, const SystemParams &params)
{
    params.validate();
    check_channel(channel);
    check_vector(f, channel.antennas(), "beamformer");
    check_vector(g, channel.antennas(), "combiner");
    if (user > 1)
        throw Error(ErrorCode::InvalidArgument, "user index must be 0 or 1");
    if (!(p_r > 0.0) || !std::isfinite(p_r))
        throw Error(ErrorCode::InvalidArgument, "relay power must be finite and positive");
    const auto th = rate_thresholds(params);
    const double d = downlink_gain(channel, user, f);
    const double u = uplink_gain(channel, user, g);
    const double s2 = params.sigma2;
    BetaInterval b;
    b.lower = s2 * (th.downlink[user] - 1.0) / (p_r * d);
    b.upper = 1.0 - s2 * th.uplink[user] / (params.eta * p_r * d * u) -
              2.0 * params.circuit_power / (params.eta * p_r * d);
    return b;
}

std::array<double, 2> recover_beta(double p_r, const ComplexVector &f, const ComplexVector &g,
                                   const ChannelRealization &channel, const SystemParams &params)
{
    const auto th = rate_thresholds(params);
    const double s2 = params.sigma2;
    const double eta = params.eta;
    std::array<double, 2> beta{};
    for (std::size_t i = 0; i < 2; ++i)
    {
        const BetaInterval iv = beta_interval(i, p_r, f, g, channel, params);
        if (iv.upper < iv.lower - kBetaSlack)
            throw Error(ErrorCode::Infeasible, "no splitting ratio meets user " + std::to_string(i + 1) +
                                                   "'s constraints at this relay power");
        const double d = effective_gain(channel.user(i), f);
        const double u = effective_gain(g, channel.user(i));
        const double x = eta * p_r * d;
        double b = 0.5 * (1.0 + (eta * s2 * (th.downlink[i] - 1.0) - 2.0 * params.circuit_power) / x -
                          s2 * th.uplink[i] / (x * u));
        if (b < 0.0 && b > -kBetaSlack)
            b = 0.0;
        if (b > 1.0 && b < 1.0 + kBetaSlack)
            b = 1.0;
        if (!(b >= 0.0 && b <= 1.0))
            throw Error(ErrorCode::Infeasible, "splitting ratio outside [0, 1]");
        beta[i] = b;
    }
    return beta;
}

TransceiverDesign complete_design(const ComplexVector &f, const ComplexVector &g, double p_r,
                                  const ChannelRealization &channel, const SystemParams &params)
{
    TransceiverDesign d;
    d.f = f;
    d.g = g;
    d.p_r = p_r;
    d.beta = recover_beta(p_r, f, g, channel, params);
    double total = 0.0;
    std::array<double, 2> received{};
    for (std::size_t i = 0; i < 2; ++i)
    {
        const double dl = effective_gain(channel.user(i), f);
        d.p_uplink[i] = std::max(0.0, params.eta * (1.0 - d.beta[i]) * p_r * dl - 2.0 * params.circuit_power);
        received[i] = d.p_uplink[i] * effective_gain(g, channel.user(i));
        total += received[i];
    }
    for (std::size_t i = 0; i < 2; ++i)
        d.gamma[i] = total > 0.0 ? received[i] / total : 0.0;
    return d;
}

double RateReport::min_margin() const
{
    return std::min({uplink_margin[0], uplink_margin[1], downlink_margin[0], downlink_margin[1]});
}

RateReport verify_rates(const TransceiverDesign &design, const ChannelRealization &channel,
                        const SystemParams &params)
{
    params.validate();
    check_channel(channel);
    check_vector(design.f, channel.antennas(), "beamformer");
    check_vector(design.g, channel.antennas(), "combiner");
    const double s2 = params.sigma2;

    RateReport r;
    std::array<double, 2> received{};
    double total = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
    {
        received[i] = design.p_uplink[i] * effective_gain(design.g, channel.user(i));
        total += received[i];
    }
    for (std::size_t i = 0; i < 2; ++i)
    {
        r.gamma[i] = total > 0.0 ? received[i] / total : 0.0;
        const double ul = std::log2(r.gamma[i] + received[i] / s2);
        r.uplink_rate[i] = 0.5 * std::max(0.0, ul);
        const double sig = design.beta[i] * design.p_r * effective_gain(channel.user(i), design.f);
        r.downlink_rate[i] = 0.5 * std::log2(1.0 + sig / s2);
        r.downlink_rate_exact[i] = 0.5 * std::log2(1.0 + sig / (design.beta[i] * params.sigma2_a + params.sigma2_p));
    }
    for (std::size_t i = 0; i < 2; ++i)
    {
        r.uplink_margin[i] = r.uplink_rate[i] - params.rate_targets[i];
        r.downlink_margin[i] = r.downlink_rate[i] - params.rate_targets[1 - i];
    }
    r.end_to_end[0] = std::min(r.uplink_rate[0], r.downlink_rate[1]);
    r.end_to_end[1] = std::min(r.uplink_rate[1], r.downlink_rate[0]);
    r.alpha = mmse_alpha(received[0], received[1], s2);
    return r;
}

} // namespace twrc
