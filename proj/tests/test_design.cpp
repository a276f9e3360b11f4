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
#include "test_util.hpp"

#include "twrc/design.hpp"
#include "twrc/error.hpp"

#include <cmath>
#include <numbers>

using namespace twrc;
using namespace twrc::testing;

namespace
{

const double kSqrtHalf = std::sqrt(0.5);

SystemParams unit_params(std::size_t n, double rate = 0.5)
{
    return SystemParams::make(n, 1.0, 0.0, 1.0, rate, rate);
}

ChannelRealization scalar_channel(Complex h1 = 1.0, Complex h2 = 1.0)
{
    return ChannelRealization{ComplexVector{h1}, ComplexVector{h2}, 0};
}

ChannelRealization orthogonal_channel()
{
    return ChannelRealization{ComplexVector{1.0, 0.0}, ComplexVector{0.0, 1.0}, 0};
}

ComplexVector uniform(std::size_t n)
{
    return ComplexVector(std::vector<Complex>(n, 1.0 / std::sqrt(static_cast<double>(n))));
}

ChannelRealization random_channel(Rng &rng, std::size_t n)
{
    return ChannelRealization{random_vector(rng, n), random_vector(rng, n), 0};
}

// Typical operating point of the experiments: sigma^2 = 0.01, P_c = 10, theta = 16.
SystemParams experiment_params(std::size_t n)
{
    return SystemParams::make(n, 1.0, 10.0, 0.01, 2.0, 2.0);
}

} // namespace

TEST_CASE("system parameter validation")
{
    CHECK_NOTHROW(unit_params(2).validate());
    SystemParams p = unit_params(2);
    p.eta = 0.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = unit_params(2);
    p.sigma2_a = 0.5;
    CHECK_THROWS_AS(p.validate(), Error);
    p.sigma2_p = 0.5;
    CHECK_NOTHROW(p.validate());
    p = unit_params(2);
    p.rate_targets[1] = 0.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = unit_params(2);
    p.circuit_power = -1.0;
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("rate thresholds")
{
    auto t = rate_thresholds(SystemParams::make(4, 1.0, 0.0, 1.0, 2.0, 2.0));
    CHECK(t.uplink[0] == 16.0);
    CHECK(t.uplink[1] == 16.0);
    CHECK(t.downlink[0] == 16.0);
    CHECK(t.downlink[1] == 16.0);

    t = rate_thresholds(unit_params(1));
    CHECK(t.uplink[0] == doctest::Approx(2.0).epsilon(1e-15));

    t = rate_thresholds(SystemParams::make(4, 1.0, 0.0, 1.0, 1.0, 2.0));
    CHECK(t.uplink[0] == 4.0);
    CHECK(t.uplink[1] == 16.0);
    CHECK(t.downlink[0] == 16.0);
    CHECK(t.downlink[1] == 4.0);
}

TEST_CASE("constraint right-hand sides")
{
    const ComplexVector g{1.0};
    auto a = constraint_rhs(unit_params(1), g, scalar_channel());
    CHECK(a[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(a[1] == doctest::Approx(3.0).epsilon(1e-14));

    a = constraint_rhs(unit_params(1), g, scalar_channel(kSqrtHalf, kSqrtHalf));
    CHECK(a[0] == doctest::Approx(5.0).epsilon(1e-14));

    // 1 * 4 / (0.5 * 1) + 1 * (4 - 1) + 2 * 1 / 0.5
    const double expected = 4.0 / 0.5 + 3.0 + 2.0 / 0.5;
    a = constraint_rhs(SystemParams::make(1, 0.5, 1.0, 1.0, 1.0, 1.0), g, scalar_channel());
    CHECK(expected == 15.0);
    CHECK(a[0] == doctest::Approx(expected).epsilon(1e-14));
    CHECK(a[1] == doctest::Approx(expected).epsilon(1e-14));

    CHECK_THROWS_AS(constraint_rhs(unit_params(1), g, scalar_channel(0.0, 1.0)), Error);
    try
    {
        constraint_rhs(unit_params(1), g, scalar_channel(1.0, 0.0));
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::DegenerateChannel);
    }
}

TEST_CASE("required relay power")
{
    const ComplexVector one{1.0};
    CHECK(required_power(one, one, scalar_channel(), unit_params(1)) == doctest::Approx(3.0).epsilon(1e-14));

    const auto ortho = orthogonal_channel();
    CHECK(required_power(uniform(2), uniform(2), ortho, unit_params(2)) == doctest::Approx(10.0).epsilon(1e-14));

    Rng rng(41);
    const auto ch = random_channel(rng, 4);
    const auto f = random_unit_vector(rng, 4);
    const auto g = random_unit_vector(rng, 4);
    SystemParams p = unit_params(4, 2.0);
    const double base = required_power(f, g, ch, p);
    p = SystemParams::make(4, 1.0, 0.0, 2.0, 2.0, 2.0);
    CHECK(required_power(f, g, ch, p) == doctest::Approx(2.0 * base).epsilon(1e-14));

    CHECK_THROWS_AS(required_power(ComplexVector{1.0, 0.0}, uniform(2), ortho, unit_params(2)), Error);
}

TEST_CASE("required power is invariant to global phases")
{
    Rng rng(43);
    const auto p = experiment_params(4);
    for (int rep = 0; rep < 50; ++rep)
    {
        const auto ch = random_channel(rng, 4);
        const auto f = random_unit_vector(rng, 4);
        const auto g = random_unit_vector(rng, 4);
        const double base = required_power(f, g, ch, p);
        const Complex a = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
        const Complex b = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
        CHECK(required_power(f * a, g * b, ch, p) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("rank_one_extract")
{
    Rng rng(47);
    const auto v = random_unit_vector(rng, 3);
    auto r = rank_one_extract(HermitianMatrix::outer(v) * 5.0);
    CHECK(r.scale == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(std::abs(std::abs(inner(r.v, v)) - 1.0) < 1e-12);
    CHECK(r.rank_ratio < 1e-12);

    r = rank_one_extract(HermitianMatrix::diagonal({4.0, 1.0}));
    CHECK(r.scale == doctest::Approx(4.0));
    CHECK(std::abs(r.v[0] - 1.0) < 1e-14);
    CHECK(r.rank_ratio == doctest::Approx(0.25));

    r = rank_one_extract(HermitianMatrix::identity(2));
    CHECK(r.rank_ratio == doctest::Approx(1.0));

    r = rank_one_extract(HermitianMatrix::diagonal({7.0}));
    CHECK(r.rank_ratio == 0.0);
}

TEST_CASE("reduce_rank keeps the preserved traces")
{
    Rng rng(53);
    for (int rep = 0; rep < 30; ++rep)
    {
        const std::size_t n = 3 + rep % 4;
        const HermitianMatrix m = random_psd(rng, n, 3);
        const std::vector<HermitianMatrix> keep{HermitianMatrix::outer(random_vector(rng, n)),
                                                HermitianMatrix::outer(random_vector(rng, n)),
                                                HermitianMatrix::identity(n)};
        const HermitianMatrix r = reduce_rank(m, keep);
        const auto ev = eig_hermitian(r).values;
        CHECK(ev.back() >= -1e-9 * ev.front());
        CHECK(ev[1] <= 1e-8 * ev.front());
        for (const auto &k : keep)
            CHECK(trace_inner(k, r) == doctest::Approx(trace_inner(k, m)).epsilon(1e-9));
    }
}

TEST_CASE("beamformer sub-problem")
{
    SUBCASE("scalar case")
    {
        const auto ch = scalar_channel(2.0, Complex(0.0, 0.5));
        const auto a = constraint_rhs(unit_params(1), ComplexVector{1.0}, ch);
        const auto r = solve_beamformer(ComplexVector{1.0}, ch, unit_params(1));
        const double expected = std::max(a[0] / 4.0, a[1] / 0.25);
        CHECK(r.p_r == doctest::Approx(expected).epsilon(1e-7));
        CHECK(r.F(0, 0).real() == doctest::Approx(expected).epsilon(1e-7));
        CHECK(std::abs(r.f[0]) == doctest::Approx(1.0));
    }
    SUBCASE("orthogonal channels")
    {
        const auto r = solve_beamformer(uniform(2), orthogonal_channel(), unit_params(2));
        // grid over |f_1|^2 of max(5 / |f_1|^2, 5 / (1 - |f_1|^2))
        double grid = 1e300;
        for (int k = 1; k < 1000; ++k)
        {
            const double x = k / 1000.0;
            grid = std::min(grid, std::max(5.0 / x, 5.0 / (1.0 - x)));
        }
        CHECK(grid == doctest::Approx(10.0).epsilon(1e-9));
        CHECK(r.p_r == doctest::Approx(10.0).epsilon(1e-7));
        CHECK(std::abs(r.f[0]) == doctest::Approx(kSqrtHalf).epsilon(1e-6));
        CHECK(std::abs(r.f[1]) == doctest::Approx(kSqrtHalf).epsilon(1e-6));
    }
    SUBCASE("single active constraint is matched beamforming")
    {
        Rng rng(59);
        const auto ch = random_channel(rng, 4);
        const auto r = solve_beamformer_rhs({0.0, 3.0}, ch);
        const ComplexVector matched = ch.h2.conj().normalized();
        CHECK(std::abs(std::abs(inner(matched, r.f)) - 1.0) < 1e-7);
        CHECK(r.p_r == doctest::Approx(3.0 / ch.h2.norm_squared()).epsilon(1e-7));
    }
    SUBCASE("no active constraint")
    {
        CHECK_THROWS_AS(solve_beamformer_rhs({0.0, 0.0}, orthogonal_channel()), Error);
    }
}

TEST_CASE("beamformer optimality and rank one on random channels")
{
    Rng rng(61);
    const auto p = experiment_params(4);
    for (int rep = 0; rep < 20; ++rep)
    {
        const auto ch = random_channel(rng, 4);
        const auto g = random_unit_vector(rng, 4);
        const auto a = constraint_rhs(p, g, ch);
        const auto r = solve_beamformer(g, ch, p);
        CHECK(r.rank_ratio <= 1e-6);
        CHECK_FALSE(r.fallback);
        CHECK(std::abs(r.f.norm() - 1.0) < 1e-10);
        CHECK(r.p_r == doctest::Approx(r.F.trace()).epsilon(1e-6));
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(r.p_r * effective_gain(ch.user(i), r.f) >= a[i] * (1.0 - 1e-7));
        for (int probe = 0; probe < 100; ++probe)
        {
            const auto f = random_unit_vector(rng, 4);
            CHECK(r.p_r <= required_power(f, g, ch, p) + 1e-6);
        }
    }
}

TEST_CASE("combiner sub-problem")
{
    SUBCASE("scalar case")
    {
        const CombinerCoefficients c{{2.0, 3.0}, {1.0, 0.5}};
        const auto r = solve_combiner_coeffs(c, scalar_channel());
        CHECK(r.p_r == doctest::Approx(3.5));
        CHECK(std::abs(r.g[0]) == doctest::Approx(1.0));
    }
    SUBCASE("orthogonal channels")
    {
        const auto c = combiner_coefficients(uniform(2), orthogonal_channel(), unit_params(2));
        CHECK(c.rho[0] == doctest::Approx(4.0));
        CHECK(c.mu[0] == doctest::Approx(2.0));
        double sweep = 1e300;
        for (int k = 1; k < 1000; ++k)
        {
            const double x = k / 1000.0;
            sweep = std::min(sweep, std::max(4.0 / x + 2.0, 4.0 / (1.0 - x) + 2.0));
        }
        CHECK(sweep == doctest::Approx(10.0).epsilon(1e-9));
        const auto r = solve_combiner(uniform(2), orthogonal_channel(), unit_params(2));
        CHECK(r.p_r == doctest::Approx(10.0).epsilon(1e-7));
        CHECK(r.G(0, 0).real() == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(r.G(1, 1).real() == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(r.G.trace() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("single user is matched filtering")
    {
        Rng rng(67);
        const auto ch = random_channel(rng, 4);
        const CombinerCoefficients c{{2.0, 0.0}, {0.7, 0.0}};
        const auto r = solve_combiner_coeffs(c, ch);
        CHECK(effective_gain(r.g, ch.h1) == doctest::Approx(ch.h1.norm_squared()).epsilon(1e-7));
        CHECK(r.p_r == doctest::Approx(2.0 / ch.h1.norm_squared() + 0.7).epsilon(1e-7));
    }
}

TEST_CASE("combiner optimality on random channels")
{
    Rng rng(71);
    const auto p = experiment_params(4);
    for (int rep = 0; rep < 20; ++rep)
    {
        const auto ch = random_channel(rng, 4);
        const auto f = random_unit_vector(rng, 4);
        const auto c = combiner_coefficients(f, ch, p);
        const auto r = solve_combiner(f, ch, p);
        CHECK(std::abs(r.g.norm() - 1.0) < 1e-10);
        CHECK(r.rank_ratio <= 1e-6);
        CHECK(r.p_r == doctest::Approx(required_power(f, r.g, ch, p)).epsilon(1e-12));
        for (int probe = 0; probe < 100; ++probe)
        {
            const auto g = random_unit_vector(rng, 4);
            double v = 0.0;
            for (std::size_t i = 0; i < 2; ++i)
                v = std::max(v, c.rho[i] / effective_gain(g, ch.user(i)) + c.mu[i]);
            CHECK(r.p_r <= v + 1e-6);
        }
    }
}

TEST_CASE("splitting ratio recovery")
{
    const ComplexVector one{1.0};
    const auto ch = scalar_channel();
    const auto p = unit_params(1);

    auto iv = beta_interval(0, 3.0, one, one, ch, p);
    CHECK(iv.lower == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(iv.upper == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    auto beta = recover_beta(3.0, one, one, ch, p);
    CHECK(beta[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(beta[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    iv = beta_interval(1, 6.0, one, one, ch, p);
    CHECK(iv.lower == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(iv.upper == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    beta = recover_beta(6.0, one, one, ch, p);
    CHECK(beta[0] == doctest::Approx(5.0 / 12.0).epsilon(1e-14));

    CHECK_THROWS_AS(recover_beta(2.9, one, one, ch, p), Error);
    const auto heavy = SystemParams::make(1, 1.0, 5.0, 1.0, 0.5, 0.5);
    try
    {
        recover_beta(6.0, one, one, ch, heavy);
        FAIL("expected an infeasible error");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::Infeasible);
    }
}

TEST_CASE("beta is the interval midpoint on random feasible points")
{
    Rng rng(73);
    const auto p = experiment_params(4);
    for (int rep = 0; rep < 100; ++rep)
    {
        const auto ch = random_channel(rng, 4);
        const auto f = random_unit_vector(rng, 4);
        const auto g = random_unit_vector(rng, 4);
        const double need = required_power(f, g, ch, p);
        const double pr = need * (1.0 + 2.0 * rng.uniform());
        const auto beta = recover_beta(pr, f, g, ch, p);
        for (std::size_t i = 0; i < 2; ++i)
        {
            const auto iv = beta_interval(i, pr, f, g, ch, p);
            CHECK(std::abs(beta[i] - 0.5 * (iv.lower + iv.upper)) <= 1e-9);
            CHECK(beta[i] >= 0.0);
            CHECK(beta[i] <= 1.0);
        }
        // binding user's interval collapses at the minimum power
        double width = 1e300;
        for (std::size_t i = 0; i < 2; ++i)
        {
            const auto iv = beta_interval(i, need, f, g, ch, p);
            width = std::min(width, std::abs(iv.upper - iv.lower));
        }
        CHECK(width <= 1e-9);
    }
}

TEST_CASE("rate verification")
{
    SUBCASE("downlink rate closed form")
    {
        TransceiverDesign d;
        d.f = ComplexVector{1.0};
        d.g = ComplexVector{1.0};
        d.p_r = 15.0;
        d.beta = {1.0, 1.0};
        d.p_uplink = {1.0, 1.0};
        const auto r = verify_rates(d, scalar_channel(), unit_params(1));
        CHECK(r.downlink_rate[0] == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(r.downlink_rate_exact[0] == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(r.gamma[0] == doctest::Approx(0.5));
        CHECK(r.gamma[1] == doctest::Approx(0.5));
        CHECK(r.alpha == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("exact splitter noise form")
    {
        SystemParams p = unit_params(1);
        p.sigma2_a = 0.25;
        p.sigma2_p = 0.75;
        TransceiverDesign d;
        d.f = ComplexVector{1.0};
        d.g = ComplexVector{1.0};
        d.p_r = 15.0;
        d.beta = {0.5, 1.0};
        d.p_uplink = {1.0, 1.0};
        const auto r = verify_rates(d, scalar_channel(), p);
        CHECK(r.downlink_rate_exact[0] == doctest::Approx(0.5 * std::log2(1.0 + 7.5 / 0.875)).epsilon(1e-14));
        CHECK(r.downlink_rate[0] == doctest::Approx(0.5 * std::log2(8.5)).epsilon(1e-14));
    }
    SUBCASE("completed designs meet the targets and margins grow with power")
    {
        Rng rng(79);
        const auto p = experiment_params(4);
        for (int rep = 0; rep < 50; ++rep)
        {
            const auto ch = random_channel(rng, 4);
            const auto f = random_unit_vector(rng, 4);
            const auto g = random_unit_vector(rng, 4);
            const double need = required_power(f, g, ch, p);
            double previous = -1e300;
            for (double scale : {1.0, 1.5, 2.0, 4.0})
            {
                const auto d = complete_design(f, g, need * scale, ch, p);
                const auto r = verify_rates(d, ch, p);
                CHECK(r.min_margin() >= -1e-6);
                CHECK(r.uplink_margin[0] > 0.0);
                CHECK(r.uplink_margin[1] > 0.0);
                CHECK(d.gamma[0] + d.gamma[1] == doctest::Approx(1.0));
                CHECK(r.min_margin() >= previous - 1e-12);
                previous = r.min_margin();
                for (std::size_t i = 0; i < 2; ++i)
                {
                    const double dl = effective_gain(ch.user(i), f);
                    CHECK(d.p_uplink[i] ==
                          doctest::Approx(p.eta * (1.0 - d.beta[i]) * d.p_r * dl - 2.0 * p.circuit_power));
                }
            }
        }
    }
}
