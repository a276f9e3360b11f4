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

// Experiment configuration, unit conventions and channel generation.
//
// Units: SNR is 1 / sigma^2 at unit channel gain, so sigma^2 = 10^(-snr_db/10);
// the circuit power in "dBm" is dB over the same unit reference, so
// P_c = 10^(pc_dbm/10). Reported relay powers are 10 log10(P_r).

#pragma once

#include "twrc/channel.hpp"
#include "twrc/design.hpp"
#include "twrc/optimizer.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace twrc
{

enum class AxisKind
{
    None,
    Snr,
    CircuitPower
};

struct SweepAxis
{
    AxisKind kind = AxisKind::None;
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    // start + k * step for k = 0, 1, ... while not past stop. A None axis has
    // no points; the sweep then runs the single configured operating point.
    std::vector<double> points() const;

    friend bool operator==(const SweepAxis &, const SweepAxis &) = default;
};

// "none", "snr:START:STOP:STEP" or "pc:START:STOP:STEP"
SweepAxis parse_axis(std::string_view text);
std::string render_axis(const SweepAxis &axis);

struct ScenarioConfig
{
    std::size_t antennas = 4;
    double eta = 1.0;
    double snr_db = 20.0;
    double pc_dbm = 10.0;
    double rate1 = 2.0;
    double rate2 = 2.0;
    std::size_t trials = 100;
    std::uint64_t master_seed = 1;
    std::vector<SchemeId> schemes{SchemeId::JointTransceiverPS, SchemeId::BfPsEgcReceiver,
                                  SchemeId::ReceiverPsEqualGainBf, SchemeId::PsOnly};
    SweepAxis axis{};
    BaselineVariant baseline = BaselineVariant::Phased;
    bool multi_start = true;
    int max_iter = 50;
    double rel_tol = 1e-5;
    unsigned threads = 0; // 0: one per hardware thread

    // Throws InvalidArgument.
    void validate() const;

    friend bool operator==(const ScenarioConfig &, const ScenarioConfig &) = default;
};

// Applies one key=value setting. Throws InvalidArgument on an unknown key or a
// malformed value.
void apply_setting(ScenarioConfig &cfg, std::string_view key, std::string_view value);

// Lines of key=value; blank lines and '#' comments are ignored. Settings are
// applied on top of `base`.
ScenarioConfig parse_config(std::string_view text, ScenarioConfig base = {});

// Every key, one per line, in a form parse_config reads back exactly.
std::string render_config(const ScenarioConfig &cfg);

// Throws IoError when the file cannot be read.
ScenarioConfig load_config_file(const std::string &path, ScenarioConfig base = {});

// Schemes as a comma list of numbers or names.
std::vector<SchemeId> parse_scheme_list(std::string_view text);

// i.i.d. CN(0, 1) entries for h1 then h2, deterministic in `seed`.
ChannelRealization gen_channel(std::uint64_t seed, std::size_t antennas);

// Seed of trial `index`; independent of the axis point and the scheme.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

double db_to_linear(double db) noexcept;
double linear_to_db(double linear) noexcept;

SystemParams units_from_config(const ScenarioConfig &cfg);

// Same with the SNR and circuit power overridden (sweep axis points).
SystemParams units_at(const ScenarioConfig &cfg, double snr_db, double pc_dbm);

SchemeOptions scheme_options(const ScenarioConfig &cfg);

} // namespace twrc
