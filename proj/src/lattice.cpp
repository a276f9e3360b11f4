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

#include "twrc/lattice.hpp"
#include "twrc/error.hpp"
#include "twrc/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace twrc
{

namespace
{

// LU with partial pivoting; returns the inverse and writes |det|.
RealMatrix invert(const RealMatrix &m, double &abs_det)
{
    const std::size_t n = m.rows();
    RealMatrix a = m;
    RealMatrix inv = RealMatrix::identity(n);
    abs_det = 1.0;
    for (std::size_t col = 0; col < n; ++col)
    {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col)))
                piv = r;
        if (a(piv, col) == 0.0)
        {
            abs_det = 0.0;
            return inv;
        }
        if (piv != col)
            for (std::size_t c = 0; c < n; ++c)
            {
                std::swap(a(piv, c), a(col, c));
                std::swap(inv(piv, c), inv(col, c));
            }
        const double d = a(col, col);
        abs_det *= std::abs(d);
        for (std::size_t c = 0; c < n; ++c)
        {
            a(col, c) /= d;
            inv(col, c) /= d;
        }
        for (std::size_t r = 0; r < n; ++r)
        {
            if (r == col || a(r, col) == 0.0)
                continue;
            const double f = a(r, col);
            for (std::size_t c = 0; c < n; ++c)
            {
                a(r, c) -= f * a(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

bool lex_less(std::span<const double> a, std::span<const double> b)
{
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

double distance_squared(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

void check_dim(const Lattice &lat, std::span<const double> p, const char *what)
{
    if (p.size() != lat.dimension())
        throw Error(ErrorCode::InvalidArgument, std::string(what) + ": dimension mismatch");
}

constexpr std::size_t max_search_points = 4'000'000;

} // namespace

Lattice::Lattice(RealMatrix generator) : generator_(std::move(generator))
{
    if (generator_.rows() == 0 || generator_.rows() != generator_.cols())
        throw Error(ErrorCode::InvalidArgument, "lattice generator must be square and non-empty");
    for (double x : generator_.raw())
        if (!std::isfinite(x))
            throw Error(ErrorCode::InvalidArgument, "lattice generator has non-finite entries");
    inverse_ = invert(generator_, volume_);
    if (!(volume_ > 0.0) || !std::isfinite(inverse_.frobenius_norm()) ||
        generator_.frobenius_norm() * inverse_.frobenius_norm() > 1e12)
        throw Error(ErrorCode::InvalidArgument, "lattice generator is singular");

    diagonal_ = true;
    for (std::size_t r = 0; r < dimension(); ++r)
        for (std::size_t c = 0; c < dimension(); ++c)
            if (r != c && generator_(r, c) != 0.0)
                diagonal_ = false;
}

Lattice Lattice::scaled_integer(std::size_t n, double scale)
{
    RealMatrix g = RealMatrix::identity(n);
    g *= scale;
    return Lattice(std::move(g));
}

RealVector Lattice::point(std::span<const std::int64_t> coords) const
{
    if (coords.size() != dimension())
        throw Error(ErrorCode::InvalidArgument, "lattice point: dimension mismatch");
    RealVector p(dimension(), 0.0);
    for (std::size_t r = 0; r < dimension(); ++r)
        for (std::size_t c = 0; c < dimension(); ++c)
            p[r] += generator_(r, c) * static_cast<double>(coords[c]);
    return p;
}

RealVector Lattice::coordinates(std::span<const double> p) const
{
    check_dim(*this, p, "lattice coordinates");
    return inverse_.multiply(p);
}

std::vector<std::int64_t> Lattice::nearest_coords(std::span<const double> p) const
{
    check_dim(*this, p, "quantize");
    const std::size_t n = dimension();
    const RealVector c = coordinates(p);
    std::vector<std::int64_t> z(n);

    if (diagonal_)
    {
        // Orthogonal basis: per-axis rounding, halves go to the smaller point.
        for (std::size_t k = 0; k < n; ++k)
        {
            const double s = generator_(k, k);
            const double x = p[k] / std::abs(s);
            const double k_up = std::ceil(x - 0.5);
            z[k] = static_cast<std::int64_t>(s > 0.0 ? k_up : -k_up);
        }
        return z;
    }

    // Babai round-off, then exhaustive search of the coordinate box that must
    // contain anything closer than the Babai point.
    for (std::size_t k = 0; k < n; ++k)
        z[k] = static_cast<std::int64_t>(std::llround(c[k]));
    const double d0 = std::sqrt(distance_squared(point(z), p));
    const double radius = inverse_.frobenius_norm() * d0 * (1.0 + 1e-12) + 1e-12;

    std::vector<std::int64_t> lo(n), hi(n);
    double count = 1.0;
    for (std::size_t k = 0; k < n; ++k)
    {
        lo[k] = static_cast<std::int64_t>(std::ceil(c[k] - radius));
        hi[k] = static_cast<std::int64_t>(std::floor(c[k] + radius));
        count *= static_cast<double>(hi[k] - lo[k] + 1);
    }
    if (count > static_cast<double>(max_search_points))
        throw Error(ErrorCode::SolverFailure, "quantize: search window too large for this generator");

    std::vector<std::int64_t> cur = lo;
    RealVector best_point = point(z);
    double best = distance_squared(best_point, p);
    std::vector<std::int64_t> best_z = z;
    while (true)
    {
        const RealVector q = point(cur);
        const double d = distance_squared(q, p);
        const double tie = 1e-12 * std::max(1.0, best);
        if (d < best - tie || (std::abs(d - best) <= tie && lex_less(q, best_point)))
        {
            best = std::min(d, best);
            best_point = q;
            best_z = cur;
        }
        std::size_t k = 0;
        while (k < n && cur[k] == hi[k])
        {
            cur[k] = lo[k];
            ++k;
        }
        if (k == n)
            break;
        ++cur[k];
    }
    return best_z;
}

bool Lattice::contains(std::span<const double> p, double tol) const
{
    const RealVector c = coordinates(p);
    return std::all_of(c.begin(), c.end(), [tol](double x)
                       { return std::abs(x - std::round(x)) <= tol; });
}

RealVector quantize(const Lattice &lat, std::span<const double> p)
{
    return lat.point(lat.nearest_coords(p));
}

RealVector mod_lattice(const Lattice &lat, std::span<const double> p)
{
    RealVector q = quantize(lat, p);
    for (std::size_t i = 0; i < q.size(); ++i)
        q[i] = p[i] - q[i];
    return q;
}

bool in_voronoi(const Lattice &lat, std::span<const double> p)
{
    const auto z = lat.nearest_coords(p);
    return std::all_of(z.begin(), z.end(), [](std::int64_t v)
                       { return v == 0; });
}

MomentEstimate second_moment(const Lattice &lat, std::size_t samples, std::uint64_t seed)
{
    if (samples < 1000)
        throw Error(ErrorCode::InvalidArgument, "second_moment: at least 1000 samples required");
    const std::size_t n = lat.dimension();
    Rng rng(seed);
    RealVector u(n);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < samples; ++s)
    {
        for (auto &x : u)
            x = rng.uniform();
        const RealVector x = lat.generator().multiply(u);
        const RealVector y = mod_lattice(lat, x);
        double e = 0.0;
        for (double v : y)
            e += v * v;
        e /= static_cast<double>(n);
        sum += e;
        sum_sq += e * e;
    }
    const double m = sum / static_cast<double>(samples);
    const double var = std::max(0.0, (sum_sq - static_cast<double>(samples) * m * m) / static_cast<double>(samples - 1));
    return {m, std::sqrt(var / static_cast<double>(samples)), samples};
}

bool is_nested(const Lattice &fine, const Lattice &coarse, double tol)
{
    if (fine.dimension() != coarse.dimension())
        return false;
    const std::size_t n = fine.dimension();
    RealVector col(n);
    for (std::size_t c = 0; c < n; ++c)
    {
        for (std::size_t r = 0; r < n; ++r)
            col[r] = coarse.generator()(r, c);
        if (!fine.contains(col, tol))
            return false;
    }
    return true;
}

NestedChain::NestedChain(Lattice fine, Lattice mid, Lattice coarse)
    : fine_(std::move(fine)), mid_(std::move(mid)), coarse_(std::move(coarse))
{
    if (!is_nested(fine_, mid_))
        throw Error(ErrorCode::NestingViolation, "mid lattice is not a sublattice of the fine lattice");
    if (!is_nested(mid_, coarse_))
        throw Error(ErrorCode::NestingViolation, "coarse lattice is not a sublattice of the mid lattice");
}

NestedChain NestedChain::scaled_integer(std::size_t n, double fine, double mid, double coarse)
{
    return NestedChain(Lattice::scaled_integer(n, fine), Lattice::scaled_integer(n, mid),
                       Lattice::scaled_integer(n, coarse));
}

std::vector<CodebookEntry> enumerate_codebook(const Lattice &fine, const Lattice &shaping)
{
    if (!is_nested(fine, shaping))
        throw Error(ErrorCode::NestingViolation, "shaping lattice is not a sublattice of the code lattice");
    const std::size_t n = fine.dimension();
    const double ratio = shaping.cell_volume() / fine.cell_volume();
    const auto expected = static_cast<std::size_t>(std::llround(ratio));
    if (expected == 0 || expected > max_search_points)
        throw Error(ErrorCode::InvalidArgument, "codebook size out of range");

    // The Voronoi cell lies inside the ball of radius half the summed basis lengths.
    double radius = 0.0;
    for (std::size_t c = 0; c < n; ++c)
    {
        double len = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            len += shaping.generator()(r, c) * shaping.generator()(r, c);
        radius += 0.5 * std::sqrt(len);
    }
    double abs_det = 0.0;
    const double bound = invert(fine.generator(), abs_det).frobenius_norm() * radius;
    const auto reach = static_cast<std::int64_t>(std::ceil(bound + 1e-9));

    double count = 1.0;
    for (std::size_t k = 0; k < n; ++k)
        count *= static_cast<double>(2 * reach + 1);
    if (count > static_cast<double>(max_search_points))
        throw Error(ErrorCode::InvalidArgument, "codebook enumeration window too large");

    std::vector<RealVector> points;
    std::vector<std::int64_t> cur(n, -reach);
    while (true)
    {
        RealVector p = fine.point(cur);
        if (in_voronoi(shaping, p))
            points.push_back(std::move(p));
        std::size_t k = 0;
        while (k < n && cur[k] == reach)
        {
            cur[k] = -reach;
            ++k;
        }
        if (k == n)
            break;
        ++cur[k];
    }
    if (points.size() != expected)
        throw Error(ErrorCode::SolverFailure, "codebook enumeration found " + std::to_string(points.size()) +
                                                  " points, expected " + std::to_string(expected));
    std::sort(points.begin(), points.end(), [](const RealVector &a, const RealVector &b)
              { return lex_less(a, b); });

    std::vector<CodebookEntry> out;
    out.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        out.push_back({std::move(points[i]), i});
    return out;
}

double mmse_alpha(double p1_gain, double p2_gain, double sigma2)
{
    if (!(p1_gain >= 0.0) || !(p2_gain >= 0.0) || !(sigma2 >= 0.0))
        throw Error(ErrorCode::DomainError, "mmse_alpha: powers must be non-negative");
    const double signal = p1_gain + p2_gain;
    const double denom = signal + sigma2;
    if (!(denom > 0.0))
        throw Error(ErrorCode::DomainError, "mmse_alpha: zero signal and zero noise");
    return signal / denom;
}

CofExchange cof_roundtrip(const NestedChain &chain,
                          std::span<const double> w1, std::span<const double> w2,
                          std::span<const double> u1, std::span<const double> u2,
                          double p1_gain, double p2_gain, double sigma2,
                          std::span<const double> noise)
{
    const std::size_t n = chain.dimension();
    if (w1.size() != n || w2.size() != n || u1.size() != n || u2.size() != n ||
        (!noise.empty() && noise.size() != n))
        throw Error(ErrorCode::InvalidArgument, "cof_roundtrip: dimension mismatch");
    if (!chain.fine().contains(w1) || !in_voronoi(chain.coarse(), w1))
        throw Error(ErrorCode::InvalidArgument, "cof_roundtrip: w1 is not a codeword of the coarse-shaped codebook");
    if (!chain.fine().contains(w2) || !in_voronoi(chain.mid(), w2))
        throw Error(ErrorCode::InvalidArgument, "cof_roundtrip: w2 is not a codeword of the mid-shaped codebook");

    CofExchange ex;
    ex.w1.assign(w1.begin(), w1.end());
    ex.w2.assign(w2.begin(), w2.end());
    ex.u1.assign(u1.begin(), u1.end());
    ex.u2.assign(u2.begin(), u2.end());
    ex.alpha = mmse_alpha(p1_gain, p2_gain, sigma2);

    RealVector s1(n), s2(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        s1[i] = w1[i] + u1[i];
        s2[i] = w2[i] + u2[i];
    }
    const RealVector x1 = mod_lattice(chain.coarse(), s1);
    const RealVector x2 = mod_lattice(chain.mid(), s2);

    ex.relay_signal.resize(n);
    RealVector decode(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        ex.relay_signal[i] = x1[i] + x2[i] + (noise.empty() ? 0.0 : noise[i]);
        decode[i] = ex.alpha * ex.relay_signal[i] - u1[i] - u2[i];
    }
    ex.t_decoded = mod_lattice(chain.coarse(), decode);

    const RealVector q2 = quantize(chain.mid(), s2);
    RealVector target(n);
    for (std::size_t i = 0; i < n; ++i)
        target[i] = w1[i] + w2[i] - q2[i];
    ex.t_expected = mod_lattice(chain.coarse(), target);
    return ex;
}

RealVector transmit_block(const Lattice &shaping, std::span<const double> w, std::span<const double> u,
                          Complex effective_gain)
{
    if (w.size() != u.size() || w.size() != shaping.dimension() || w.size() % 2 != 0)
        throw Error(ErrorCode::InvalidArgument, "transmit_block: expected matching even-length blocks");
    if (effective_gain == Complex(0.0, 0.0))
        throw Error(ErrorCode::DomainError, "transmit_block: zero effective channel gain");
    RealVector s(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        s[i] = w[i] + u[i];
    const RealVector shaped = mod_lattice(shaping, s);
    RealVector x(w.size());
    for (std::size_t i = 0; i < w.size(); i += 2)
    {
        const Complex z = Complex(shaped[i], shaped[i + 1]) / effective_gain;
        x[i] = z.real();
        x[i + 1] = z.imag();
    }
    return x;
}

RealVector relay_combine(std::span<const double> x1, Complex gh1,
                         std::span<const double> x2, Complex gh2,
                         std::span<const double> noise)
{
    if (x1.size() != x2.size() || x1.size() % 2 != 0 || (!noise.empty() && noise.size() != x1.size()))
        throw Error(ErrorCode::InvalidArgument, "relay_combine: expected matching even-length blocks");
    RealVector y(x1.size());
    for (std::size_t i = 0; i < x1.size(); i += 2)
    {
        const Complex z = gh1 * Complex(x1[i], x1[i + 1]) + gh2 * Complex(x2[i], x2[i + 1]);
        y[i] = z.real() + (noise.empty() ? 0.0 : noise[i]);
        y[i + 1] = z.imag() + (noise.empty() ? 0.0 : noise[i + 1]);
    }
    return y;
}

} // namespace twrc
