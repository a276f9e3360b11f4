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

// Command-line front end. Talks to the library through the C interface only.
//
//   twrc solve        [config flags] [--trial K]
//   twrc sweep        [config flags] [--preset fig2|fig3] [--axis SPEC] [--records F] [--summary F]
//   twrc oracle-check [config flags] [--count M] [--resolution R]
//   twrc lattice-demo [--dimension n] [--fine a] [--mid b] [--coarse c] [--dithered] [--seed s]
//
// Exit status: 0 ok, 1 usage, 2 excess failures, 3 I/O.

#include "twrc/twrc.h"

#include "CLI11.hpp"

#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailures = 2;
constexpr int kExitIo = 3;

constexpr double kFailureBudget = 0.02;
constexpr double kOracleAbove = 0.2;
constexpr double kOracleBelow = 0.05;

using ConfigPtr = std::unique_ptr<twrc_config, decltype(&twrc_config_destroy)>;
using SweepPtr = std::unique_ptr<twrc_sweep, decltype(&twrc_sweep_destroy)>;

void print_line(const char *line, void *)
{
    std::printf("%s\n", line);
}

void print_progress(size_t done, size_t total, void *)
{
    std::fprintf(stderr, "\rprogress %zu/%zu", done, total);
    if (done == total)
        std::fprintf(stderr, "\n");
}

int exit_for(twrc_status status)
{
    switch (status)
    {
    case TWRC_OK: return kExitOk;
    case TWRC_IO_ERROR: return kExitIo;
    case TWRC_INVALID_ARGUMENT:
    case TWRC_USAGE: return kExitUsage;
    default: return kExitFailures;
    }
}

int report(twrc_status status)
{
    if (status != TWRC_OK)
        std::fprintf(stderr, "twrc: %s: %s\n", twrc_status_name(status), twrc_last_error());
    return exit_for(status);
}

// Scenario options shared by solve, sweep and oracle-check. Values are kept
// as text and handed to the library's own key parser after the config file.
struct ScenarioFlags
{
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> values;
    std::vector<std::string> overrides;

    void attach(CLI::App &cmd)
    {
        cmd.add_option("-c,--config", config_path, "key=value configuration file");
        cmd.add_option("--set", overrides, "extra key=value override (repeatable)");
        static const std::pair<const char *, const char *> keys[] = {
            {"antennas", "number of relay antennas N"},
            {"eta", "energy conversion efficiency"},
            {"snr_db", "SNR in dB (noise variance 10^(-snr/10))"},
            {"pc_dbm", "circuit power in normalized dB"},
            {"rate1", "rate target of user 1"},
            {"rate2", "rate target of user 2"},
            {"trials", "channel realizations per point"},
            {"seed", "master seed"},
            {"schemes", "comma list of scheme ids or names"},
            {"baseline", "phased or unphased equal-gain baselines"},
            {"multi_start", "restart scheme 1 from the baseline points (true/false)"},
            {"max_iter", "alternation iteration cap"},
            {"rel_tol", "alternation relative tolerance"},
            {"threads", "worker threads, 0 for all cores"},
        };
        values.reserve(std::size(keys));
        for (const auto &[key, help] : keys)
        {
            values.emplace_back(key, std::string{});
            std::string flag = "--" + std::string(key);
            for (auto &ch : flag)
                if (ch == '_')
                    ch = '-';
            cmd.add_option(flag, values.back().second, help);
        }
    }

    // Config file first, then the flags that were actually given.
    twrc_status apply(twrc_config *cfg, const CLI::App &cmd) const
    {
        if (!config_path.empty())
            if (const auto s = twrc_config_load(cfg, config_path.c_str()); s != TWRC_OK)
                return s;
        for (const auto &[key, value] : values)
        {
            std::string flag = "--" + key;
            for (auto &ch : flag)
                if (ch == '_')
                    ch = '-';
            if (cmd.count(flag) == 0)
                continue;
            if (const auto s = twrc_config_set(cfg, key.c_str(), value.c_str()); s != TWRC_OK)
                return s;
        }
        for (const auto &kv : overrides)
        {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
            {
                std::fprintf(stderr, "twrc: --set expects key=value, got '%s'\n", kv.c_str());
                return TWRC_USAGE;
            }
            const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
            if (const auto s = twrc_config_set(cfg, key.c_str(), value.c_str()); s != TWRC_OK)
                return s;
        }
        return twrc_config_validate(cfg);
    }
};

ConfigPtr make_config(const std::string &preset, twrc_status &status)
{
    twrc_config *raw = nullptr;
    status = preset.empty() ? twrc_config_create(&raw) : twrc_config_preset(preset.c_str(), &raw);
    return ConfigPtr(raw, &twrc_config_destroy);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Relay power minimization for two-way relaying with power-splitting energy harvesting"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(twrc_version()));

    // solve
    auto *solve = app.add_subcommand("solve", "solve every configured scheme on one seeded channel");
    ScenarioFlags solve_flags;
    solve_flags.attach(*solve);
    std::uint64_t solve_trial = 0;
    solve->add_option("--trial", solve_trial, "channel index under the master seed");

    // sweep
    auto *sweep = app.add_subcommand("sweep", "Monte Carlo sweep with records and summary CSV output");
    ScenarioFlags sweep_flags;
    sweep_flags.attach(*sweep);
    std::string preset, axis, records_path = "records.csv", summary_path = "summary.csv";
    bool progress = false, print_config = false;
    sweep->add_option("--preset", preset, "fig2 (SNR axis) or fig3 (circuit power axis)")
        ->check(CLI::IsMember({"fig2", "fig3"}));
    sweep->add_option("--axis", axis, "none or snr|pc:START:STOP:STEP");
    sweep->add_option("--records", records_path, "per-trial CSV output path");
    sweep->add_option("--summary", summary_path, "per-point summary CSV output path");
    sweep->add_flag("--progress", progress, "report progress on stderr");
    sweep->add_flag("--print-config", print_config, "print the effective configuration first");

    // oracle-check
    auto *oracle = app.add_subcommand("oracle-check", "compare scheme 1 with the exhaustive N = 2 grid");
    ScenarioFlags oracle_flags;
    oracle_flags.attach(*oracle);
    std::size_t oracle_count = 20;
    int oracle_resolution = 64;
    oracle->add_option("--count", oracle_count, "number of seeded channels")->check(CLI::PositiveNumber);
    oracle->add_option("--resolution", oracle_resolution, "grid points per axis (>= 32)");

    // lattice-demo
    auto *lattice = app.add_subcommand("lattice-demo", "noiseless compute-and-forward round trips");
    twrc_lattice_demo_params demo{};
    twrc_lattice_demo_defaults(&demo);
    bool dithered = false;
    lattice->add_option("--dimension", demo.dimension, "lattice dimension");
    lattice->add_option("--fine", demo.fine, "fine lattice scale");
    lattice->add_option("--mid", demo.mid, "shaping scale of user 2");
    lattice->add_option("--coarse", demo.coarse, "shaping scale of user 1");
    lattice->add_flag("--dithered", dithered, "draw uniform dithers");
    lattice->add_option("--seed", demo.seed, "dither seed");
    lattice->add_option("--max-pairs", demo.max_pairs, "exhaustive below this count, sampled above");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    twrc_status status = TWRC_OK;

    if (*solve)
    {
        auto cfg = make_config({}, status);
        if (status == TWRC_OK)
            status = solve_flags.apply(cfg.get(), *solve);
        if (status != TWRC_OK)
            return report(status);
        std::size_t failures = 0;
        status = twrc_solve(cfg.get(), solve_trial, &print_line, nullptr, &failures);
        if (status != TWRC_OK)
            return report(status);
        return failures == 0 ? kExitOk : kExitFailures;
    }

    if (*sweep)
    {
        auto cfg = make_config(preset, status);
        if (status == TWRC_OK)
            status = sweep_flags.apply(cfg.get(), *sweep);
        if (status == TWRC_OK && !axis.empty())
            status = twrc_config_set(cfg.get(), "axis", axis.c_str());
        if (status != TWRC_OK)
            return report(status);
        if (print_config)
            twrc_config_render(cfg.get(), &print_line, nullptr);

        twrc_sweep *raw = nullptr;
        status = twrc_sweep_run(cfg.get(), progress ? &print_progress : nullptr, nullptr, &raw);
        SweepPtr result(raw, &twrc_sweep_destroy);
        if (status != TWRC_OK)
            return report(status);
        if ((status = twrc_sweep_write_records(result.get(), records_path.c_str())) != TWRC_OK)
            return report(status);
        if ((status = twrc_sweep_write_summary(result.get(), summary_path.c_str())) != TWRC_OK)
            return report(status);
        twrc_sweep_summary_lines(result.get(), &print_line, nullptr);

        const double fraction = twrc_sweep_failure_fraction(result.get());
        std::printf("records=%zu failures=%zu failure_fraction=%.9g\n", twrc_sweep_record_count(result.get()),
                    twrc_sweep_failure_count(result.get()), fraction);
        if (fraction > kFailureBudget)
        {
            std::fprintf(stderr, "twrc: failure fraction %.9g exceeds %.9g\n", fraction, kFailureBudget);
            return kExitFailures;
        }
        return kExitOk;
    }

    if (*oracle)
    {
        auto cfg = make_config({}, status);
        if (status == TWRC_OK)
            status = oracle_flags.apply(cfg.get(), *oracle);
        if (status != TWRC_OK)
            return report(status);
        struct Band
        {
            std::size_t outside = 0;
        } band;
        auto sink = [](const char *line, void *user) {
            std::printf("%s\n", line);
            const std::string text(line);
            const auto pos = text.find("diff_db=");
            if (text.rfind("trial=", 0) == 0 && pos != std::string::npos)
            {
                const double d = std::stod(text.substr(pos + 8));
                if (d > kOracleAbove || d < -kOracleBelow)
                    ++static_cast<Band *>(user)->outside;
            }
        };
        double worst = 0.0;
        status = twrc_oracle_check(cfg.get(), oracle_count, oracle_resolution, sink, &band, &worst);
        if (status != TWRC_OK)
            return report(status);
        std::printf("outside_band=%zu\n", band.outside);
        return band.outside == 0 ? kExitOk : kExitFailures;
    }

    if (*lattice)
    {
        demo.dithered = dithered ? 1 : 0;
        std::size_t pairs = 0, matches = 0;
        status = twrc_lattice_demo(&demo, &print_line, nullptr, &pairs, &matches);
        if (status != TWRC_OK)
            return report(status);
        return pairs == matches ? kExitOk : kExitFailures;
    }

    return kExitUsage;
}
