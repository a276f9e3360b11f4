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
#include "twrc/harness.hpp"

#include <cmath>
#include <sstream>

using namespace twrc;

namespace
{

std::vector<std::string> lines_of(const std::string &text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

ScenarioConfig small_sweep()
{
    ScenarioConfig cfg;
    cfg.trials = 4;
    cfg.axis = parse_axis("snr:10:20:10");
    cfg.master_seed = 77;
    return cfg;
}

} // namespace

TEST_CASE("nine significant digits")
{
    CHECK(format_sig9(1.0) == "1");
    CHECK(format_sig9(-0.0) == "0");
    CHECK(format_sig9(10.0 * std::log10(3.0)) == "4.77121255");
    CHECK(format_sig9(-0.000123456789123) == "-0.000123456789");
    CHECK(format_sig9(std::nan("")) == "nan");
}

TEST_CASE("scheme 4 on the scalar analytic scenario")
{
    const ChannelRealization ch{ComplexVector{1.0}, ComplexVector{1.0}, 0};
    const auto params = SystemParams::make(1, 1.0, 0.0, 1.0, 0.5, 0.5);
    TrialRecord rec = solve_trial(SchemeId::PsOnly, ch, params);
    CHECK(rec.ok());
    CHECK(rec.p_r_db == doctest::Approx(10.0 * std::log10(3.0)).epsilon(1e-12));
    CHECK(rec.beta[0] == doctest::Approx(1.0 / 3.0));
    const auto csv = lines_of(records_csv({rec}));
    REQUIRE(csv.size() == 2);
    CHECK(csv[0] ==
          "scheme,snr_db,pc_dbm,trial,seed,p_r_db,iterations,beta1,beta2,margin_1r,margin_2r,margin_r1,margin_r2,status");
    CHECK(csv[1].rfind("4,0,0,0,0,4.77121255,1,0.333333333,0.333333333,", 0) == 0);
    CHECK(csv[1].substr(csv[1].size() - 3) == ",ok");
}

TEST_CASE("sweep records, summary and determinism")
{
    ScenarioConfig cfg = small_sweep();
    cfg.threads = 1;
    const auto serial = run_sweep(cfg);
    REQUIRE(serial.records.size() == 2 * 4 * 4);
    REQUIRE(serial.summary.size() == 2 * 4);
    CHECK(serial.failures == 0);

    cfg.threads = 3;
    const auto parallel = run_sweep(cfg);
    CHECK(records_csv(serial.records) == records_csv(parallel.records));
    CHECK(summary_csv(serial.summary) == summary_csv(parallel.summary));

    for (const auto &r : serial.records)
    {
        CHECK(r.ok());
        for (double m : r.margins)
            CHECK(m >= -1e-6);
    }
    for (std::size_t pt = 0; pt < 2; ++pt)
    {
        const auto *row = &serial.summary[pt * 4];
        CHECK(row[0].trials == 4);
        CHECK(row[0].failures == 0);
        CHECK(row[0].mean_p_r_db <= row[1].mean_p_r_db + 1e-9);
        CHECK(row[0].mean_p_r_db <= row[2].mean_p_r_db + 1e-9);
        CHECK(std::max(row[1].mean_p_r_db, row[2].mean_p_r_db) <= row[3].mean_p_r_db + 1e-9);
        CHECK(row[0].std_error_db > 0.0);
    }
    const auto head = lines_of(summary_csv(serial.summary)).front();
    CHECK(head == "scheme,snr_db,pc_dbm,mean_p_r_db,std_error_db,trials,failures");

    // the same channels are used at every axis point and for every scheme
    CHECK(serial.records[0].seed == serial.records[4].seed);
    CHECK(serial.records[0].seed == serial.records[16].seed);

    ScenarioConfig bad = small_sweep();
    bad.schemes.clear();
    CHECK_THROWS_AS(run_sweep(bad), Error);
}

TEST_CASE("presets")
{
    const auto f2 = preset("fig2");
    CHECK(f2.axis.kind == AxisKind::Snr);
    CHECK(f2.axis.points().size() == 7);
    CHECK(f2.pc_dbm == 10.0);
    CHECK(f2.antennas == 4);
    CHECK(f2.trials == 100);
    CHECK(f2.rate1 == 2.0);
    const auto f3 = preset("fig3");
    CHECK(f3.axis.kind == AxisKind::CircuitPower);
    CHECK(f3.axis.points().front() == -20.0);
    CHECK(f3.axis.points().back() == 20.0);
    CHECK(f3.snr_db == 20.0);
    CHECK_THROWS_AS(preset("fig4"), Error);
}

TEST_CASE("file output errors")
{
    try
    {
        write_text_file("/nonexistent/dir/out.csv", "x");
        FAIL("expected an I/O error");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::IoError);
    }
}

TEST_CASE("oracle grid")
{
    const auto unit = SystemParams::make(2, 1.0, 0.0, 1.0, 0.5, 0.5);
    SUBCASE("orthogonal symmetric channels")
    {
        const ChannelRealization ch{ComplexVector{1.0, 0.0}, ComplexVector{0.0, 1.0}, 0};
        CHECK(oracle_grid(ch, unit, 64) == doctest::Approx(10.0).epsilon(1e-9));
    }
    SUBCASE("single user is matched filtering")
    {
        const ChannelRealization ch{ComplexVector{2.0, 0.0}, ComplexVector{0.0, 0.0}, 0};
        // a = 2 / 4 + 1 with |h|^2 = 4, divided by |h|^2 again
        CHECK(oracle_grid(ch, unit, 32) == doctest::Approx((2.0 / 4.0 + 1.0) / 4.0).epsilon(1e-12));
    }
    SUBCASE("refinement never increases the minimum")
    {
        const auto ch = gen_channel(5, 2);
        const auto p = SystemParams::make(2, 1.0, 10.0, 0.01, 2.0, 2.0);
        const double coarse = oracle_grid(ch, p, 32);
        const double fine = oracle_grid(ch, p, 64);
        CHECK(fine <= coarse);
        CHECK(fine >= run_scheme(SchemeId::JointTransceiverPS, ch, p).design.p_r * (1.0 - 0.05));
    }
    SUBCASE("contract checks")
    {
        CHECK_THROWS_AS(oracle_grid(gen_channel(1, 3), unit, 64), Error);
        CHECK_THROWS_AS(oracle_grid(gen_channel(1, 2), unit, 16), Error);
    }
}

TEST_CASE("oracle check report")
{
    ScenarioConfig cfg;
    const auto rows = oracle_check(cfg, 2, 32);
    REQUIRE(rows.size() == 2);
    for (const auto &r : rows)
    {
        CHECK(r.diff_db <= 0.2);
        CHECK(r.diff_db >= -0.05);
        CHECK(r.seed == trial_seed(cfg.master_seed, r.trial));
    }
}

TEST_CASE("lattice demo")
{
    std::vector<std::string> lines;
    auto sink = [&](const std::string &s) { lines.push_back(s); };
    auto r = lattice_demo(LatticeDemoConfig{}, sink);
    CHECK(r.pairs == 32);
    CHECK(r.matches == 32);
    CHECK(r.exhaustive);
    REQUIRE(lines.size() == 33);
    CHECK(lines.back() == "summary pairs=32 matches=32 exhaustive=true");
    // w1 = -3 is the first codeword of the coarse shaping region (-4, 4]
    CHECK(lines.front().find("w1=(-3) w2=(-1)") != std::string::npos);
    bool saw_zero = false;
    for (const auto &l : lines)
        if (l.find("w1=(0) w2=(0)") != std::string::npos)
        {
            saw_zero = true;
            CHECK(l.find("t_expected=(0) t_decoded=(0) match=true") != std::string::npos);
        }
    CHECK(saw_zero);

    LatticeDemoConfig dithered;
    dithered.dithered = true;
    r = lattice_demo(dithered, {});
    CHECK(r.matches == r.pairs);

    LatticeDemoConfig sampled;
    sampled.dimension = 2;
    sampled.max_pairs = 100;
    sampled.dithered = true;
    r = lattice_demo(sampled, {});
    CHECK_FALSE(r.exhaustive);
    CHECK(r.pairs == 100);
    CHECK(r.matches == 100);

    LatticeDemoConfig broken;
    broken.mid = 3.0;
    try
    {
        lattice_demo(broken, {});
        FAIL("expected a nesting violation");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::NestingViolation);
    }
}
