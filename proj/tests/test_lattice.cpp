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

#include "doctest.h"

#include "twrc/error.hpp"
#include "twrc/lattice.hpp"
#include "twrc/random.hpp"

#include <cmath>
#include <numbers>

using namespace twrc;

namespace
{

Lattice hexagonal(double scale = 1.0)
{
    RealMatrix g(2, 2);
    g(0, 0) = scale;
    g(0, 1) = 0.5 * scale;
    g(1, 0) = 0.0;
    g(1, 1) = std::sqrt(3.0) / 2.0 * scale;
    return Lattice(g);
}

// Brute-force nearest point: scan integer coordinates in [-r, r]^2 around the
// rounded coordinates and keep the closest, ties to the lexicographically
// smaller point.
RealVector brute_nearest_2d(const Lattice &lat, std::span<const double> p, int r = 6)
{
    const RealVector c = lat.coordinates(p);
    RealVector best;
    double best_d = 1e300;
    for (int a = -r; a <= r; ++a)
        for (int b = -r; b <= r; ++b)
        {
            const std::int64_t z[2] = {std::llround(c[0]) + a, std::llround(c[1]) + b};
            const RealVector q = lat.point(z);
            const double d = (q[0] - p[0]) * (q[0] - p[0]) + (q[1] - p[1]) * (q[1] - p[1]);
            if (d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && q < best))
            {
                best_d = std::min(d, best_d);
                best = q;
            }
        }
    return best;
}

// Brute-force Voronoi membership for s*Z: 0 must be the nearest multiple of s
// and win ties only against larger multiples.
bool brute_in_voronoi_1d(double s, double x)
{
    const double d0 = std::abs(x);
    for (int k = -10; k <= 10; ++k)
    {
        if (k == 0)
            continue;
        const double d = std::abs(x - k * s);
        if (d < d0 || (d == d0 && k < 0))
            return false;
    }
    return true;
}

double brute_quantize_1d(double s, double x)
{
    double best = 0.0;
    double best_d = 1e300;
    for (int k = -64; k <= 64; ++k)
    {
        const double d = std::abs(x - k * s);
        if (d < best_d)
        {
            best_d = d;
            best = k * s;
        }
    }
    return best;
}

} // namespace

TEST_CASE("quantize examples")
{
    const Lattice z2 = Lattice::scaled_integer(2, 1.0);
    const double p[2] = {0.4, -1.6};
    const RealVector q = quantize(z2, p);
    CHECK(q[0] == 0.0);
    CHECK(q[1] == -2.0);

    const double zero[2] = {0.0, 0.0};
    CHECK(quantize(hexagonal(), zero) == RealVector{0.0, 0.0});

    const Lattice four = Lattice::scaled_integer(1, 4.0);
    const double one[1] = {1.0};
    CHECK(quantize(four, one)[0] == 0.0);
}

TEST_CASE("quantize ties resolve to the smaller lattice point")
{
    const Lattice four = Lattice::scaled_integer(1, 4.0);
    const double plus[1] = {2.0};
    const double minus[1] = {-2.0};
    CHECK(quantize(four, plus)[0] == 0.0);
    CHECK(quantize(four, minus)[0] == -4.0);
    CHECK(in_voronoi(four, plus));
    CHECK_FALSE(in_voronoi(four, minus));
}

TEST_CASE("quantize matches brute force on a skewed 2-D lattice")
{
    const Lattice hex = hexagonal(1.3);
    Rng rng(99);
    for (int rep = 0; rep < 2000; ++rep)
    {
        const double p[2] = {8.0 * (rng.uniform() - 0.5), 8.0 * (rng.uniform() - 0.5)};
        const RealVector q = quantize(hex, p);
        const RealVector b = brute_nearest_2d(hex, p);
        CHECK(std::abs(q[0] - b[0]) < 1e-12);
        CHECK(std::abs(q[1] - b[1]) < 1e-12);
    }
}

TEST_CASE("mod_lattice examples")
{
    const Lattice z = Lattice::scaled_integer(1, 1.0);
    const double a[1] = {2.7};
    const double b[1] = {-0.3};
    const double c[1] = {5.0};
    CHECK(mod_lattice(z, a)[0] == doctest::Approx(-0.3).epsilon(1e-14));
    CHECK(mod_lattice(z, b)[0] == doctest::Approx(-0.3).epsilon(1e-14));
    CHECK(mod_lattice(z, c)[0] == 0.0);
}

TEST_CASE("mod_lattice properties on random points")
{
    Rng rng(2024);
    for (const Lattice &lat : {hexagonal(), Lattice::scaled_integer(2, 0.75)})
        for (int rep = 0; rep < 10000; ++rep)
        {
            const double p[2] = {20.0 * (rng.uniform() - 0.5), 20.0 * (rng.uniform() - 0.5)};
            const RealVector m = mod_lattice(lat, p);
            const RealVector mm = mod_lattice(lat, m);
            CHECK(std::abs(mm[0] - m[0]) < 1e-12);
            CHECK(std::abs(mm[1] - m[1]) < 1e-12);

            const RealVector q = quantize(lat, p);
            CHECK(q[0] + m[0] == doctest::Approx(p[0]).epsilon(1e-15));
            CHECK(q[1] + m[1] == doctest::Approx(p[1]).epsilon(1e-15));
            CHECK(lat.contains(q));
            CHECK(in_voronoi(lat, m));

            const std::int64_t z[2] = {static_cast<std::int64_t>(rng.next() % 21) - 10,
                                       static_cast<std::int64_t>(rng.next() % 21) - 10};
            const RealVector lam = lat.point(z);
            const double shifted[2] = {p[0] + lam[0], p[1] + lam[1]};
            const RealVector ms = mod_lattice(lat, shifted);
            CHECK(std::abs(ms[0] - m[0]) < 1e-9);
            CHECK(std::abs(ms[1] - m[1]) < 1e-9);
        }
}

TEST_CASE("second moment")
{
    const auto within = [](const MomentEstimate &e, double truth)
    { return std::abs(e.value - truth) <= 3.0 * e.std_error; };

    const auto z = second_moment(Lattice::scaled_integer(1, 1.0), 100000, 1);
    CHECK(within(z, 1.0 / 12.0));
    const auto z4 = second_moment(Lattice::scaled_integer(1, 4.0), 100000, 2);
    CHECK(within(z4, 16.0 / 12.0));
    const auto z2 = second_moment(Lattice::scaled_integer(2, 1.0), 100000, 3);
    CHECK(within(z2, 1.0 / 12.0));

    // Hexagonal lattice with unit minimum distance: G = 5/(36 sqrt 3), V = sqrt(3)/2.
    const auto hex = second_moment(hexagonal(), 100000, 4);
    CHECK(within(hex, 5.0 / 72.0));

    // sigma^2(s L) = s^2 sigma^2(L), same seed so the sample paths coincide.
    const auto h1 = second_moment(hexagonal(), 20000, 9);
    const auto h3 = second_moment(hexagonal(3.0), 20000, 9);
    CHECK(h3.value == doctest::Approx(9.0 * h1.value).epsilon(1e-9));

    CHECK_THROWS_AS(second_moment(hexagonal(), 999, 1), Error);
}

TEST_CASE("enumerate_codebook")
{
    SUBCASE("Z over 4Z")
    {
        const auto cb = enumerate_codebook(Lattice::scaled_integer(1, 1.0), Lattice::scaled_integer(1, 4.0));
        // brute-force oracle over integers in [-3, 3]
        std::vector<double> expected;
        for (int k = -3; k <= 3; ++k)
            if (brute_in_voronoi_1d(4.0, k))
                expected.push_back(k);
        REQUIRE(expected == std::vector<double>{-1.0, 0.0, 1.0, 2.0});
        REQUIRE(cb.size() == 4);
        for (std::size_t i = 0; i < 4; ++i)
        {
            CHECK(cb[i].point[0] == expected[i]);
            CHECK(cb[i].index == i);
        }
    }
    SUBCASE("degenerate nesting")
    {
        const auto cb = enumerate_codebook(Lattice::scaled_integer(1, 2.0), Lattice::scaled_integer(1, 2.0));
        REQUIRE(cb.size() == 1);
        CHECK(cb[0].point[0] == 0.0);
    }
    SUBCASE("Z^2 over 2Z^2")
    {
        const auto cb = enumerate_codebook(Lattice::scaled_integer(2, 1.0), Lattice::scaled_integer(2, 2.0));
        REQUIRE(cb.size() == 4);
        const std::vector<RealVector> expected{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(cb[i].point == expected[i]);
    }
    SUBCASE("size equals the volume ratio for hexagonal sublattices")
    {
        for (int s : {2, 3, 4})
        {
            const auto cb = enumerate_codebook(hexagonal(), hexagonal(s));
            CHECK(cb.size() == static_cast<std::size_t>(s * s));
            for (const auto &e : cb)
                CHECK(in_voronoi(hexagonal(s), e.point));
        }
    }
    SUBCASE("nesting violated")
    {
        CHECK_THROWS_AS(enumerate_codebook(Lattice::scaled_integer(1, 3.0), Lattice::scaled_integer(1, 4.0)), Error);
    }
}

TEST_CASE("nested chain validation")
{
    CHECK_NOTHROW(NestedChain::scaled_integer(1, 1.0, 4.0, 8.0));
    try
    {
        NestedChain::scaled_integer(1, 1.0, 3.0, 4.0);
        FAIL("expected a nesting violation");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::NestingViolation);
    }
    CHECK_THROWS_AS(Lattice(RealMatrix(2, 2)), Error);
}

TEST_CASE("mmse_alpha")
{
    CHECK(mmse_alpha(1.0, 1.0, 2.0) == doctest::Approx(0.5));
    CHECK(mmse_alpha(3.0, 0.0, 0.0) == 1.0);
    CHECK(mmse_alpha(3.0, 1.0, 1.0) == doctest::Approx(0.8));
    CHECK_THROWS_AS(mmse_alpha(0.0, 0.0, 0.0), Error);
    CHECK_THROWS_AS(mmse_alpha(-1.0, 1.0, 1.0), Error);
}

TEST_CASE("compute-and-forward round trip")
{
    const NestedChain chain = NestedChain::scaled_integer(1, 1.0, 4.0, 8.0);
    const double none[1] = {0.0};

    SUBCASE("hand-evaluated example")
    {
        // t = (3 + 1 - Q_4Z(1)) mod 8Z = 4 mod 8Z = 4 (tie at 4 goes to 0)
        const double w1[1] = {3.0};
        const double w2[1] = {1.0};
        const auto ex = cof_roundtrip(chain, w1, w2, none, none, 1.0, 1.0, 0.0, {});
        CHECK(ex.alpha == 1.0);
        CHECK(ex.t_expected[0] == 4.0);
        CHECK(ex.t_decoded[0] == 4.0);
    }
    SUBCASE("zero codewords")
    {
        const auto ex = cof_roundtrip(chain, none, none, none, none, 1.0, 1.0, 0.0, {});
        CHECK(ex.t_expected[0] == 0.0);
        CHECK(ex.t_decoded[0] == 0.0);
    }
    SUBCASE("exhaustive over all codeword pairs, with and without dither")
    {
        const auto l1 = enumerate_codebook(chain.fine(), chain.coarse());
        const auto l2 = enumerate_codebook(chain.fine(), chain.mid());
        REQUIRE(l1.size() * l2.size() == 32);
        const std::vector<std::pair<double, double>> dithers{{0.0, 0.0}, {0.0, 0.5}, {0.25, -1.75}, {3.5, 1.5}};
        for (const auto &[d1, d2] : dithers)
            for (const auto &a : l1)
                for (const auto &b : l2)
                {
                    const double u1[1] = {d1};
                    const double u2[1] = {d2};
                    const auto ex = cof_roundtrip(chain, a.point, b.point, u1, u2, 2.0, 1.0, 0.0, {});
                    CHECK(std::abs(ex.t_decoded[0] - ex.t_expected[0]) < 1e-9);
                    // independent evaluation of the target with brute-force quantizers
                    const double target = a.point[0] + b.point[0] - brute_quantize_1d(4.0, b.point[0] + d2);
                    const double t = target - brute_quantize_1d(8.0, target);
                    CHECK(std::abs(ex.t_expected[0] - t) < 1e-12);
                    CHECK(in_voronoi(chain.coarse(), ex.t_decoded));
                }
    }
    SUBCASE("dimension and codebook checks")
    {
        const double two[2] = {0.0, 0.0};
        CHECK_THROWS_AS(cof_roundtrip(chain, two, none, none, none, 1.0, 1.0, 0.0, {}), Error);
        const double outside[1] = {3.0}; // not in the 4Z-shaped codebook of user 2
        CHECK_THROWS_AS(cof_roundtrip(chain, none, outside, none, none, 1.0, 1.0, 0.0, {}), Error);
    }
}

TEST_CASE("transmit scaling cancels at the relay")
{
    const NestedChain chain = NestedChain::scaled_integer(4, 1.0, 4.0, 8.0);
    const double w1[4] = {3.0, -2.0, 4.0, 0.0};
    const double w2[4] = {1.0, 2.0, -1.0, 0.0};
    const double u1[4] = {0.3, -0.2, 0.1, 0.7};
    const double u2[4] = {-0.4, 0.9, 0.25, -0.5};
    const Complex gh1(0.7, -1.1);
    const Complex gh2(-0.2, 0.4);

    const RealVector x1 = transmit_block(chain.coarse(), w1, u1, gh1);
    const RealVector x2 = transmit_block(chain.mid(), w2, u2, gh2);
    const RealVector y = relay_combine(x1, gh1, x2, gh2, {});
    const auto ex = cof_roundtrip(chain, w1, w2, u1, u2, 1.0, 1.0, 0.0, {});
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(y[i] == doctest::Approx(ex.relay_signal[i]).epsilon(1e-12));

    CHECK_THROWS_AS(transmit_block(chain.coarse(), w1, u1, Complex(0.0, 0.0)), Error);
}
