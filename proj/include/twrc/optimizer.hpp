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

// Alternating transceiver optimization and the fixed-vector baselines.

#pragma once

#include "twrc/design.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twrc
{

enum class SchemeId
{
    JointTransceiverPS = 1,    // alternate f and g
    BfPsEgcReceiver = 2,       // g fixed to equal-gain combining, f optimized
    ReceiverPsEqualGainBf = 3, // f fixed to equal-gain beamforming, g optimized
    PsOnly = 4                 // both fixed
};

const char *scheme_name(SchemeId scheme) noexcept;

// Accepts 1..4 or the scheme_name spellings.
std::optional<SchemeId> parse_scheme(const std::string &text);

enum class BaselineVariant
{
    Phased,  // unit-modulus weights aligned to the sum channel phase
    Unphased // (1, ..., 1) / sqrt(N)
};

// g_n = exp(-j arg(h1_n + h2_n)) / sqrt(N)
ComplexVector egc_combiner(const ChannelRealization &channel, BaselineVariant variant = BaselineVariant::Phased);

// f_n = exp(+j arg(conj(h1_n + h2_n))) / sqrt(N)
ComplexVector equal_gain_beamformer(const ChannelRealization &channel,
                                    BaselineVariant variant = BaselineVariant::Phased);

enum class StartPoint
{
    UniformCombiner,     // g = (1, ..., 1) / sqrt(N), beamformer step first
    EgcCombiner,         // g = egc_combiner, beamformer step first
    EqualGainBeamformer  // f = equal_gain_beamformer, combiner step first
};

struct AlternationOptions
{
    int max_iter = 50;
    double rel_tol = 1e-5;
    SdpTolerances sdp{};
    StartPoint start = StartPoint::UniformCombiner;
    BaselineVariant baseline = BaselineVariant::Phased; // for the EGC and equal-gain starts
};

struct AlternationStep
{
    double after_beamformer = 0.0;
    double after_combiner = 0.0;
};

struct AlternationTrace
{
    std::vector<AlternationStep> iterations;
    bool converged = false;
    TransceiverDesign final;
    int retries = 0;
    std::vector<std::string> diagnostics;
};

AlternationTrace alternate(const ChannelRealization &channel, const SystemParams &params,
                           const AlternationOptions &opts = {});

struct SchemeOptions
{
    AlternationOptions alternation{};
    BaselineVariant baseline = BaselineVariant::Phased;
    // Scheme 1 also restarts from the scheme 2 and scheme 3 operating points
    // and keeps the best of the three runs.
    bool multi_start = true;
};

struct SchemeResult
{
    TransceiverDesign design;
    int iterations = 0; // alternation iterations (scheme 1), otherwise 1
    bool converged = true;
    int retries = 0;
    std::vector<std::string> diagnostics;
};

SchemeResult run_scheme(SchemeId scheme, const ChannelRealization &channel, const SystemParams &params,
                        const SchemeOptions &opts = {});

} // namespace twrc
