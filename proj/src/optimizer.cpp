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

#include "twrc/optimizer.hpp"
#include "twrc/error.hpp"

#include <cmath>

namespace twrc
{

namespace
{

SdpTolerances tightened(const SdpTolerances &tol)
{
    SdpTolerances t = tol;
    t.feasibility *= 0.1;
    t.gap *= 0.1;
    t.max_iterations *= 2;
    return t;
}

// Runs `solve` and, on a solver failure, once more with tighter tolerances.
template <class Solve>
auto with_retry(Solve &&solve, const SdpTolerances &tol, int &retries, std::vector<std::string> &diagnostics)
{
    try
    {
        return solve(tol);
    }
    catch (const Error &e)
    {
        if (e.code() != ErrorCode::SolverFailure)
            throw;
        ++retries;
        diagnostics.push_back(std::string("retrying with tightened tolerances after: ") + e.what());
        return solve(tightened(tol));
    }
}

ComplexVector phase_aligned(const ChannelRealization &channel, BaselineVariant variant, double sign)
{
    const std::size_t n = channel.antennas();
    if (n == 0 || channel.h2.size() != n)
        throw Error(ErrorCode::InvalidArgument, "channel vectors must be non-empty and of equal length");
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    ComplexVector v(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        if (variant == BaselineVariant::Unphased)
            v[k] = amp;
        else
            v[k] = std::polar(amp, sign * std::arg(channel.h1[k] + channel.h2[k]));
    }
    return v;
}

void check_dimensions(const ChannelRealization &channel, const SystemParams &params)
{
    params.validate();
    if (channel.antennas() != params.antennas || channel.h2.size() != params.antennas)
        throw Error(ErrorCode::InvalidArgument, "channel length does not match the antenna count");
}

} // namespace

const char *scheme_name(SchemeId scheme) noexcept
{
    switch (scheme)
    {
    case SchemeId::JointTransceiverPS:
        return "joint-transceiver-ps";
    case SchemeId::BfPsEgcReceiver:
        return "bf-ps-egc";
    case SchemeId::ReceiverPsEqualGainBf:
        return "rx-ps-egbf";
    case SchemeId::PsOnly:
        return "ps-only";
    }
    return "unknown";
}

std::optional<SchemeId> parse_scheme(const std::string &text)
{
    for (int k = 1; k <= 4; ++k)
    {
        const auto s = static_cast<SchemeId>(k);
        if (text == std::to_string(k) || text == scheme_name(s))
            return s;
    }
    return std::nullopt;
}

ComplexVector egc_combiner(const ChannelRealization &channel, BaselineVariant variant)
{
    return phase_aligned(channel, variant, -1.0);
}

ComplexVector equal_gain_beamformer(const ChannelRealization &channel, BaselineVariant variant)
{
    // arg(conj(z)) = -arg(z)
    return phase_aligned(channel, variant, -1.0);
}

AlternationTrace alternate(const ChannelRealization &channel, const SystemParams &params,
                           const AlternationOptions &opts)
{
    check_dimensions(channel, params);
    if (opts.max_iter < 1)
        throw Error(ErrorCode::InvalidArgument, "max_iter must be at least 1");
    if (!(opts.rel_tol >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "rel_tol must be non-negative");

    AlternationTrace trace;
    auto beamformer = [&](const ComplexVector &g)
    {
        auto r = with_retry([&](const SdpTolerances &t) { return solve_beamformer(g, channel, params, t); },
                            opts.sdp, trace.retries, trace.diagnostics);
        if (!r.diagnostic.empty())
            trace.diagnostics.push_back(r.diagnostic);
        return r;
    };
    auto combiner = [&](const ComplexVector &f, const ComplexVector *incumbent)
    {
        auto r = with_retry([&](const SdpTolerances &t)
                            { return solve_combiner(f, channel, params, t, incumbent); },
                            opts.sdp, trace.retries, trace.diagnostics);
        if (!r.diagnostic.empty())
            trace.diagnostics.push_back(r.diagnostic);
        return r;
    };

    const std::size_t n = channel.antennas();
    ComplexVector f;
    ComplexVector g;
    bool have_f = false;
    double p = 0.0;
    double previous = 0.0;
    switch (opts.start)
    {
    case StartPoint::UniformCombiner:
        g = ComplexVector(std::vector<Complex>(n, 1.0 / std::sqrt(static_cast<double>(n))));
        break;
    case StartPoint::EgcCombiner:
        g = egc_combiner(channel, opts.baseline);
        break;
    case StartPoint::EqualGainBeamformer:
        f = equal_gain_beamformer(channel, opts.baseline);
        g = combiner(f, nullptr).g;
        p = required_power(f, g, channel, params);
        previous = p;
        have_f = true;
        break;
    }

    for (int k = 0; k < opts.max_iter; ++k)
    {
        const auto bf = beamformer(g);
        const double p_bf = required_power(bf.f, g, channel, params);
        if (!have_f || p_bf <= p)
        {
            f = bf.f;
            p = p_bf;
        }
        if (!have_f)
            previous = p;
        have_f = true;
        AlternationStep step;
        step.after_beamformer = p;

        const auto cb = combiner(f, &g);
        const double p_cb = required_power(f, cb.g, channel, params);
        if (p_cb <= p)
        {
            g = cb.g;
            p = p_cb;
        }
        step.after_combiner = p;
        trace.iterations.push_back(step);

        if (std::abs(previous - p) <= opts.rel_tol * previous)
        {
            trace.converged = true;
            break;
        }
        previous = p;
    }

    trace.final = complete_design(f, g, p, channel, params);
    return trace;
}

SchemeResult run_scheme(SchemeId scheme, const ChannelRealization &channel, const SystemParams &params,
                        const SchemeOptions &opts)
{
    check_dimensions(channel, params);
    SchemeResult out;
    const SdpTolerances &tol = opts.alternation.sdp;
    switch (scheme)
    {
    case SchemeId::JointTransceiverPS:
    {
        std::vector<StartPoint> starts{opts.alternation.start};
        if (opts.multi_start)
            for (StartPoint s : {StartPoint::EgcCombiner, StartPoint::EqualGainBeamformer})
                if (s != opts.alternation.start)
                    starts.push_back(s);
        bool first = true;
        for (StartPoint s : starts)
        {
            AlternationOptions a = opts.alternation;
            a.start = s;
            a.baseline = opts.baseline;
            AlternationTrace t = alternate(channel, params, a);
            out.iterations += static_cast<int>(t.iterations.size());
            out.retries += t.retries;
            out.diagnostics.insert(out.diagnostics.end(), t.diagnostics.begin(), t.diagnostics.end());
            if (first)
                out.converged = t.converged;
            if (first || t.final.p_r < out.design.p_r)
            {
                out.design = t.final;
                out.converged = t.converged;
            }
            first = false;
        }
        return out;
    }
    case SchemeId::BfPsEgcReceiver:
    {
        const ComplexVector g = egc_combiner(channel, opts.baseline);
        const auto bf = with_retry([&](const SdpTolerances &t) { return solve_beamformer(g, channel, params, t); },
                                   tol, out.retries, out.diagnostics);
        if (!bf.diagnostic.empty())
            out.diagnostics.push_back(bf.diagnostic);
        out.design = complete_design(bf.f, g, required_power(bf.f, g, channel, params), channel, params);
        break;
    }
    case SchemeId::ReceiverPsEqualGainBf:
    {
        const ComplexVector f = equal_gain_beamformer(channel, opts.baseline);
        const auto cb = with_retry([&](const SdpTolerances &t) { return solve_combiner(f, channel, params, t); },
                                   tol, out.retries, out.diagnostics);
        if (!cb.diagnostic.empty())
            out.diagnostics.push_back(cb.diagnostic);
        out.design = complete_design(f, cb.g, required_power(f, cb.g, channel, params), channel, params);
        break;
    }
    case SchemeId::PsOnly:
    {
        const ComplexVector f = equal_gain_beamformer(channel, opts.baseline);
        const ComplexVector g = egc_combiner(channel, opts.baseline);
        out.design = complete_design(f, g, required_power(f, g, channel, params), channel, params);
        break;
    }
    default:
        throw Error(ErrorCode::InvalidArgument, "unknown scheme");
    }
    out.iterations = 1;
    return out;
}

} // namespace twrc
