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

// Monte Carlo sweeps, the exhaustive N = 2 oracle, the lattice round-trip demo
// and CSV output.

#pragma once

#include "twrc/scenario.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace twrc
{

struct TrialRecord
{
    SchemeId scheme = SchemeId::JointTransceiverPS;
    double snr_db = 0.0;
    double pc_dbm = 0.0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double p_r_db = 0.0; // NaN on failure
    int iterations = 0;
    std::array<double, 2> beta{};
    // R_{1,r}, R_{2,r}, R_{r,1}, R_{r,2} minus their targets
    std::array<double, 4> margins{};
    std::string status = "ok";
    bool converged = true;
    std::string diagnostic;

    bool ok() const noexcept { return status == "ok"; }
};

struct SummaryRow
{
    SchemeId scheme = SchemeId::JointTransceiverPS;
    double snr_db = 0.0;
    double pc_dbm = 0.0;
    double mean_p_r_db = 0.0;
    double std_error_db = 0.0;
    std::size_t trials = 0; // successful trials
    std::size_t failures = 0;
};

struct SweepResult
{
    std::vector<TrialRecord> records; // axis point, then scheme, then trial
    std::vector<SummaryRow> summary;  // axis point, then scheme
    std::size_t failures = 0;

    double failure_fraction() const noexcept;
};

// Solves one scheme on a given channel; the operating point and trial index
// fields are left for the caller. Solver errors are caught and reported in
// the record status.
TrialRecord solve_trial(SchemeId scheme, const ChannelRealization &channel, const SystemParams &params,
                        const SchemeOptions &opts = {});

// Solves one scheme on channel `trial` at the given operating point. Solver
// errors are caught and reported in the record status.
TrialRecord run_trial(const ScenarioConfig &cfg, SchemeId scheme, double snr_db, double pc_dbm,
                      std::size_t trial);

// Called after each finished (axis point, trial) unit with (done, total).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

// Deterministic for a fixed configuration regardless of the thread count.
SweepResult run_sweep(const ScenarioConfig &cfg, const ProgressFn &progress = {});

std::vector<SummaryRow> summarize(const ScenarioConfig &cfg, const std::vector<TrialRecord> &records);

// fig2: SNR 0..30 step 5 at P_c = 10; fig3: P_c -20..20 step 5 at SNR 20.
// Throws InvalidArgument for other names.
ScenarioConfig preset(std::string_view name);

// 9 significant digits; "nan" for NaN.
std::string format_sig9(double x);

std::string records_csv(const std::vector<TrialRecord> &records);
std::string summary_csv(const std::vector<SummaryRow> &rows);

// Throws IoError.
void write_text_file(const std::string &path, const std::string &content);

// Minimum of required_power over unit f, g on the grid
//   (cos t, sin t e^{j phi}),  t = k (pi/2) / res for k = 0..res,  phi = 2 pi k / res for k < res.
// Requires N = 2 and res >= 32. A user with a zero channel is left out of the
// maximum (single-constraint case).
double oracle_grid(const ChannelRealization &channel, const SystemParams &params, int resolution);

struct OracleComparison
{
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double alternation_p_r = 0.0;
    double oracle_p_r = 0.0;
    double diff_db = 0.0; // alternation minus oracle
};

// Scheme 1 against oracle_grid on `count` seeded N = 2 channels at the
// configured operating point.
std::vector<OracleComparison> oracle_check(const ScenarioConfig &cfg, std::size_t count, int resolution);

struct LatticeDemoConfig
{
    std::size_t dimension = 1;
    double fine = 1.0;
    double mid = 4.0;
    double coarse = 8.0;
    bool dithered = false;
    std::uint64_t seed = 1;
    std::size_t max_pairs = 4096; // exhaustive below this, sampled above
};

struct LatticeDemoResult
{
    std::size_t pairs = 0;
    std::size_t matches = 0;
    bool exhaustive = true;
};

// Noiseless compute-and-forward round trips on a scaled-integer chain; one
// text line per pair goes to `sink`.
LatticeDemoResult lattice_demo(const LatticeDemoConfig &cfg, const std::function<void(const std::string &)> &sink);

} // namespace twrc
