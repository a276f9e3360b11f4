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

// Nested lattice code primitives and the compute-and-forward exchange at the
// relay: the relay recovers t = [w1 + w2 - Q_mid(w2 + u2)] mod coarse from the
// superposition of the two dithered, shaped codewords.
//
// Quantizer ties (a point equidistant from several lattice points) resolve to
// the lexicographically smallest lattice point, so for sZ the Voronoi cell is
// the half-open interval (-s/2, s/2].

#pragma once

#include "twrc/numerics.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace twrc
{

using RealVector = std::vector<double>;

class Lattice
{
public:
    // Columns of `generator` form the basis; throws if it is not square and invertible.
    explicit Lattice(RealMatrix generator);

    // s * Z^n
    static Lattice scaled_integer(std::size_t n, double scale);

    std::size_t dimension() const noexcept { return generator_.rows(); }
    const RealMatrix &generator() const noexcept { return generator_; }

    // |det G|, the volume of a fundamental cell.
    double cell_volume() const noexcept { return volume_; }

    RealVector point(std::span<const std::int64_t> coords) const;
    RealVector coordinates(std::span<const double> p) const;

    // Integer coordinates of the nearest lattice point.
    std::vector<std::int64_t> nearest_coords(std::span<const double> p) const;

    bool contains(std::span<const double> p, double tol = 1e-9) const;

private:
    RealMatrix generator_;
    RealMatrix inverse_;
    double volume_ = 0.0;
    bool diagonal_ = false;
};

RealVector quantize(const Lattice &lat, std::span<const double> p);

// p - Q(p); lands in the Voronoi cell of `lat`.
RealVector mod_lattice(const Lattice &lat, std::span<const double> p);

bool in_voronoi(const Lattice &lat, std::span<const double> p);

struct MomentEstimate
{
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

// Monte Carlo second moment per dimension of the uniform distribution on the
// Voronoi cell. Uniform samples over the fundamental parallelepiped are folded
// into the cell with mod_lattice. Requires samples >= 1000.
MomentEstimate second_moment(const Lattice &lat, std::size_t samples, std::uint64_t seed);

// True if every basis vector of `coarse` has integer coordinates in `fine`.
bool is_nested(const Lattice &fine, const Lattice &coarse, double tol = 1e-9);

// Doubly nested chain coarse ⊆ mid ⊆ fine. User 1 shapes with `coarse`,
// user 2 with `mid`.
class NestedChain
{
public:
    NestedChain(Lattice fine, Lattice mid, Lattice coarse);

    // s_fine Z^n ⊇ s_mid Z^n ⊇ s_coarse Z^n
    static NestedChain scaled_integer(std::size_t n, double fine, double mid, double coarse);

    const Lattice &fine() const noexcept { return fine_; }
    const Lattice &mid() const noexcept { return mid_; }
    const Lattice &coarse() const noexcept { return coarse_; }
    std::size_t dimension() const noexcept { return fine_.dimension(); }

private:
    Lattice fine_;
    Lattice mid_;
    Lattice coarse_;
};

struct CodebookEntry
{
    RealVector point;
    std::size_t index = 0;
};

// Fine lattice points inside the Voronoi cell of `shaping`, ordered
// lexicographically. Size is |det G_shaping| / |det G_fine|.
std::vector<CodebookEntry> enumerate_codebook(const Lattice &fine, const Lattice &shaping);

// (P1|gh1|^2 + P2|gh2|^2) / (P1|gh1|^2 + P2|gh2|^2 + sigma^2)
double mmse_alpha(double p1_gain, double p2_gain, double sigma2);

struct CofExchange
{
    RealVector w1, w2;
    RealVector u1, u2;
    RealVector relay_signal; // sum of shaped codewords plus noise
    double alpha = 1.0;
    RealVector t_expected;
    RealVector t_decoded;
};

// One compute-and-forward exchange. `noise` may be empty (noiseless).
CofExchange cof_roundtrip(const NestedChain &chain,
                          std::span<const double> w1, std::span<const double> w2,
                          std::span<const double> u1, std::span<const double> u2,
                          double p1_gain, double p2_gain, double sigma2,
                          std::span<const double> noise);

// Transmit block of a user: (gh)^{-1} [(w + u) mod shaping]. The real vector
// of even length is read as interleaved (re, im) pairs; throws DomainError for gh == 0.
RealVector transmit_block(const Lattice &shaping, std::span<const double> w, std::span<const double> u,
                          Complex effective_gain);

// g (h1 x1 + h2 x2) + noise, with gh_i the effective scalar gains, on
// interleaved complex blocks.
RealVector relay_combine(std::span<const double> x1, Complex gh1,
                         std::span<const double> x2, Complex gh2,
                         std::span<const double> noise);

} // namespace twrc
