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

#include "twrc/twrc.h"

#include "twrc/error.hpp"
#include "twrc/harness.hpp"

#include <cmath>
#include <new>
#include <sstream>
#include <string>

struct twrc_config
{
    twrc::ScenarioConfig cfg;
};

struct twrc_sweep
{
    twrc::SweepResult result;
};

namespace
{

thread_local std::string last_error;

twrc_status to_status(twrc::ErrorCode code) noexcept
{
    switch (code)
    {
    case twrc::ErrorCode::InvalidArgument: return TWRC_INVALID_ARGUMENT;
    case twrc::ErrorCode::DomainError: return TWRC_DOMAIN_ERROR;
    case twrc::ErrorCode::DegenerateChannel: return TWRC_DEGENERATE_CHANNEL;
    case twrc::ErrorCode::Infeasible: return TWRC_INFEASIBLE;
    case twrc::ErrorCode::SolverFailure: return TWRC_SOLVER_FAILURE;
    case twrc::ErrorCode::NestingViolation: return TWRC_NESTING_VIOLATION;
    case twrc::ErrorCode::BracketError: return TWRC_BRACKET_ERROR;
    case twrc::ErrorCode::IoError: return TWRC_IO_ERROR;
    case twrc::ErrorCode::Usage: return TWRC_USAGE;
    }
    return TWRC_INTERNAL;
}

template <class Body>
twrc_status guarded(Body &&body) noexcept
{
    try
    {
        last_error.clear();
        body();
        return TWRC_OK;
    }
    catch (const twrc::Error &e)
    {
        last_error = e.what();
        return to_status(e.code());
    }
    catch (const std::bad_alloc &)
    {
        last_error = "out of memory";
        return TWRC_INTERNAL;
    }
    catch (const std::exception &e)
    {
        last_error = e.what();
        return TWRC_INTERNAL;
    }
    catch (...)
    {
        last_error = "unknown exception";
        return TWRC_INTERNAL;
    }
}

void require(bool ok, const char *what)
{
    if (!ok)
        throw twrc::Error(twrc::ErrorCode::InvalidArgument, what);
}

void emit_lines(const std::string &text, twrc_line_fn sink, void *user)
{
    if (!sink)
        return;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        sink(line.c_str(), user);
}

std::string render_vector(const twrc::ComplexVector &v)
{
    std::string out = "[";
    for (std::size_t k = 0; k < v.size(); ++k)
    {
        if (k)
            out += ' ';
        out += '(' + twrc::format_sig9(v[k].real()) + ',' + twrc::format_sig9(v[k].imag()) + ')';
    }
    return out + ']';
}

std::string render_pair(const std::array<double, 2> &p)
{
    return twrc::format_sig9(p[0]) + ',' + twrc::format_sig9(p[1]);
}

void solve_channel(const twrc::ScenarioConfig &cfg, std::uint64_t trial, twrc_line_fn sink, void *user,
                   std::size_t &failures)
{
    using twrc::format_sig9;
    cfg.validate();
    const std::uint64_t seed = twrc::trial_seed(cfg.master_seed, trial);
    const auto channel = twrc::gen_channel(seed, cfg.antennas);
    const auto params = twrc::units_from_config(cfg);
    const auto opts = twrc::scheme_options(cfg);

    std::ostringstream out;
    out << "channel trial=" << trial << " seed=" << seed << " antennas=" << cfg.antennas
        << " snr_db=" << format_sig9(cfg.snr_db) << " pc_dbm=" << format_sig9(cfg.pc_dbm) << '\n'
        << "  h1=" << render_vector(channel.h1) << '\n'
        << "  h2=" << render_vector(channel.h2) << '\n';
    failures = 0;
    for (const auto scheme : cfg.schemes)
    {
        out << "scheme=" << twrc::scheme_name(scheme);
        try
        {
            const auto r = twrc::run_scheme(scheme, channel, params, opts);
            const auto rates = twrc::verify_rates(r.design, channel, params);
            out << " p_r=" << format_sig9(r.design.p_r) << " p_r_db=" << format_sig9(twrc::linear_to_db(r.design.p_r))
                << " iterations=" << r.iterations << " converged=" << (r.converged ? "true" : "false") << '\n'
                << "  f=" << render_vector(r.design.f) << '\n'
                << "  g=" << render_vector(r.design.g) << '\n'
                << "  beta=" << render_pair(r.design.beta) << " p_uplink=" << render_pair(r.design.p_uplink)
                << " gamma=" << render_pair(r.design.gamma) << '\n'
                << "  margin_1r=" << format_sig9(rates.uplink_margin[0])
                << " margin_2r=" << format_sig9(rates.uplink_margin[1])
                << " margin_r1=" << format_sig9(rates.downlink_margin[0])
                << " margin_r2=" << format_sig9(rates.downlink_margin[1]) << '\n';
            for (const auto &d : r.diagnostics)
                out << "  note: " << d << '\n';
        }
        catch (const twrc::Error &e)
        {
            ++failures;
            out << " status=" << twrc::error_code_name(e.code()) << " message=" << e.what() << '\n';
        }
    }
    emit_lines(out.str(), sink, user);
}

} // namespace

extern "C" {

const char *twrc_version(void)
{
    return "1.0.0";
}

const char *twrc_status_name(twrc_status status)
{
    switch (status)
    {
    case TWRC_OK: return "ok";
    case TWRC_INVALID_ARGUMENT: return "invalid-argument";
    case TWRC_DOMAIN_ERROR: return "domain-error";
    case TWRC_DEGENERATE_CHANNEL: return "degenerate-channel";
    case TWRC_INFEASIBLE: return "infeasible";
    case TWRC_SOLVER_FAILURE: return "solver-failure";
    case TWRC_NESTING_VIOLATION: return "nesting-violation";
    case TWRC_BRACKET_ERROR: return "bracket-error";
    case TWRC_IO_ERROR: return "io-error";
    case TWRC_USAGE: return "usage";
    case TWRC_INTERNAL: return "internal";
    }
    return "unknown";
}

const char *twrc_last_error(void)
{
    return last_error.c_str();
}

twrc_status twrc_config_create(twrc_config **out)
{
    return guarded([&] {
        require(out != nullptr, "null output handle");
        *out = new twrc_config{};
    });
}

twrc_status twrc_config_preset(const char *name, twrc_config **out)
{
    return guarded([&] {
        require(name != nullptr && out != nullptr, "null argument");
        *out = new twrc_config{twrc::preset(name)};
    });
}

void twrc_config_destroy(twrc_config *cfg)
{
    delete cfg;
}

twrc_status twrc_config_load(twrc_config *cfg, const char *path)
{
    return guarded([&] {
        require(cfg != nullptr && path != nullptr, "null argument");
        cfg->cfg = twrc::load_config_file(path, cfg->cfg);
    });
}

twrc_status twrc_config_set(twrc_config *cfg, const char *key, const char *value)
{
    return guarded([&] {
        require(cfg != nullptr && key != nullptr && value != nullptr, "null argument");
        twrc::apply_setting(cfg->cfg, key, value);
    });
}

twrc_status twrc_config_validate(const twrc_config *cfg)
{
    return guarded([&] {
        require(cfg != nullptr, "null config");
        cfg->cfg.validate();
    });
}

twrc_status twrc_config_render(const twrc_config *cfg, twrc_line_fn sink, void *user)
{
    return guarded([&] {
        require(cfg != nullptr, "null config");
        emit_lines(twrc::render_config(cfg->cfg), sink, user);
    });
}

twrc_status twrc_solve(const twrc_config *cfg, uint64_t trial, twrc_line_fn sink, void *user, size_t *failures)
{
    return guarded([&] {
        require(cfg != nullptr, "null config");
        std::size_t count = 0;
        solve_channel(cfg->cfg, trial, sink, user, count);
        if (failures)
            *failures = count;
    });
}

twrc_status twrc_sweep_run(const twrc_config *cfg, twrc_progress_fn progress, void *user, twrc_sweep **out)
{
    return guarded([&] {
        require(cfg != nullptr && out != nullptr, "null argument");
        twrc::ProgressFn fn;
        if (progress)
            fn = [progress, user](std::size_t done, std::size_t total) { progress(done, total, user); };
        *out = new twrc_sweep{twrc::run_sweep(cfg->cfg, fn)};
    });
}

void twrc_sweep_destroy(twrc_sweep *sweep)
{
    delete sweep;
}

size_t twrc_sweep_record_count(const twrc_sweep *sweep)
{
    return sweep ? sweep->result.records.size() : 0;
}

size_t twrc_sweep_failure_count(const twrc_sweep *sweep)
{
    return sweep ? sweep->result.failures : 0;
}

double twrc_sweep_failure_fraction(const twrc_sweep *sweep)
{
    return sweep ? sweep->result.failure_fraction() : 0.0;
}

twrc_status twrc_sweep_write_records(const twrc_sweep *sweep, const char *path)
{
    return guarded([&] {
        require(sweep != nullptr && path != nullptr, "null argument");
        twrc::write_text_file(path, twrc::records_csv(sweep->result.records));
    });
}

twrc_status twrc_sweep_write_summary(const twrc_sweep *sweep, const char *path)
{
    return guarded([&] {
        require(sweep != nullptr && path != nullptr, "null argument");
        twrc::write_text_file(path, twrc::summary_csv(sweep->result.summary));
    });
}

twrc_status twrc_sweep_summary_lines(const twrc_sweep *sweep, twrc_line_fn sink, void *user)
{
    return guarded([&] {
        require(sweep != nullptr, "null sweep");
        emit_lines(twrc::summary_csv(sweep->result.summary), sink, user);
    });
}

twrc_status twrc_oracle_check(const twrc_config *cfg, size_t count, int resolution, twrc_line_fn sink, void *user,
                              double *max_abs_diff_db)
{
    return guarded([&] {
        require(cfg != nullptr, "null config");
        auto c = cfg->cfg;
        c.antennas = 2;
        const auto rows = twrc::oracle_check(c, count, resolution);
        double worst = 0.0;
        std::ostringstream out;
        for (const auto &r : rows)
        {
            worst = std::max(worst, std::abs(r.diff_db));
            out << "trial=" << r.trial << " seed=" << r.seed
                << " alternation_p_r_db=" << twrc::format_sig9(twrc::linear_to_db(r.alternation_p_r))
                << " oracle_p_r_db=" << twrc::format_sig9(twrc::linear_to_db(r.oracle_p_r))
                << " diff_db=" << twrc::format_sig9(r.diff_db) << '\n';
        }
        out << "summary channels=" << rows.size() << " resolution=" << resolution
            << " max_abs_diff_db=" << twrc::format_sig9(worst) << '\n';
        emit_lines(out.str(), sink, user);
        if (max_abs_diff_db)
            *max_abs_diff_db = worst;
    });
}

void twrc_lattice_demo_defaults(twrc_lattice_demo_params *params)
{
    if (!params)
        return;
    const twrc::LatticeDemoConfig d;
    params->dimension = d.dimension;
    params->fine = d.fine;
    params->mid = d.mid;
    params->coarse = d.coarse;
    params->dithered = d.dithered ? 1 : 0;
    params->seed = d.seed;
    params->max_pairs = d.max_pairs;
}

twrc_status twrc_lattice_demo(const twrc_lattice_demo_params *params, twrc_line_fn sink, void *user, size_t *pairs,
                              size_t *matches)
{
    return guarded([&] {
        require(params != nullptr, "null parameters");
        twrc::LatticeDemoConfig c;
        c.dimension = params->dimension;
        c.fine = params->fine;
        c.mid = params->mid;
        c.coarse = params->coarse;
        c.dithered = params->dithered != 0;
        c.seed = params->seed;
        c.max_pairs = params->max_pairs;
        std::function<void(const std::string &)> fn;
        if (sink)
            fn = [sink, user](const std::string &line) { sink(line.c_str(), user); };
        const auto r = twrc::lattice_demo(c, fn);
        if (pairs)
            *pairs = r.pairs;
        if (matches)
            *matches = r.matches;
    });
}

} // extern "C"
