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

#include "twrc/harness.hpp"
#include "twrc/error.hpp"
#include "twrc/lattice.hpp"
#include "twrc/random.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace twrc
{

namespace
{

constexpr double kMarginSlack = 1e-6;

struct OperatingPoint
{
    double snr_db;
    double pc_dbm;
};

std::vector<OperatingPoint> operating_points(const ScenarioConfig &cfg)
{
    std::vector<OperatingPoint> out;
    if (cfg.axis.kind == AxisKind::None)
    {
        out.push_back({cfg.snr_db, cfg.pc_dbm});
        return out;
    }
    for (double x : cfg.axis.points())
    {
        if (cfg.axis.kind == AxisKind::Snr)
            out.push_back({x, cfg.pc_dbm});
        else
            out.push_back({cfg.snr_db, x});
    }
    return out;
}

std::string format_point(std::span<const double> v)
{
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k)
        s += (k ? "," : "") + format_sig9(v[k]);
    return s + ")";
}

ComplexVector grid_vector(double t, double phi)
{
    return ComplexVector{std::cos(t), std::sin(t) * std::polar(1.0, phi)};
}

} // namespace

double SweepResult::failure_fraction() const noexcept
{
    return records.empty() ? 0.0 : static_cast<double>(failures) / static_cast<double>(records.size());
}

std::string format_sig9(double x)
{
    if (std::isnan(x))
        return "nan";
    if (x == 0.0)
        x = 0.0; // drops the sign of negative zero
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

TrialRecord solve_trial(SchemeId scheme, const ChannelRealization &channel, const SystemParams &params,
                        const SchemeOptions &opts)
{
    TrialRecord rec;
    rec.scheme = scheme;
    rec.seed = channel.seed;
    rec.p_r_db = std::numeric_limits<double>::quiet_NaN();
    rec.beta = {rec.p_r_db, rec.p_r_db};
    rec.margins = {rec.p_r_db, rec.p_r_db, rec.p_r_db, rec.p_r_db};
    try
    {
        const SchemeResult res = run_scheme(scheme, channel, params, opts);
        const RateReport rates = verify_rates(res.design, channel, params);
        rec.p_r_db = linear_to_db(res.design.p_r);
        rec.iterations = res.iterations;
        rec.beta = res.design.beta;
        rec.margins = {rates.uplink_margin[0], rates.uplink_margin[1], rates.downlink_margin[0],
                       rates.downlink_margin[1]};
        rec.converged = res.converged;
        for (const auto &d : res.diagnostics)
            rec.diagnostic += (rec.diagnostic.empty() ? "" : "; ") + d;
        if (rates.min_margin() < -kMarginSlack)
        {
            rec.status = "rate-violation";
            rec.diagnostic += (rec.diagnostic.empty() ? "" : "; ") + std::string("rate margin below tolerance");
        }
    }
    catch (const Error &e)
    {
        rec.status = error_code_name(e.code());
        rec.diagnostic = e.what();
    }
    return rec;
}

TrialRecord run_trial(const ScenarioConfig &cfg, SchemeId scheme, double snr_db, double pc_dbm,
                      std::size_t trial)
{
    const SystemParams params = units_at(cfg, snr_db, pc_dbm);
    const ChannelRealization channel = gen_channel(trial_seed(cfg.master_seed, trial), cfg.antennas);
    TrialRecord rec = solve_trial(scheme, channel, params, scheme_options(cfg));
    rec.snr_db = snr_db;
    rec.pc_dbm = pc_dbm;
    rec.trial = trial;
    return rec;
}

SweepResult run_sweep(const ScenarioConfig &cfg, const ProgressFn &progress)
{
    cfg.validate();
    const auto points = operating_points(cfg);
    const std::size_t n_schemes = cfg.schemes.size();
    const std::size_t units = points.size() * cfg.trials;

    SweepResult result;
    result.records.resize(points.size() * n_schemes * cfg.trials);

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    auto worker = [&]()
    {
        for (std::size_t u = next++; u < units; u = next++)
        {
            const std::size_t p = u / cfg.trials;
            const std::size_t t = u % cfg.trials;
            for (std::size_t s = 0; s < n_schemes; ++s)
                result.records[(p * n_schemes + s) * cfg.trials + t] =
                    run_trial(cfg, cfg.schemes[s], points[p].snr_db, points[p].pc_dbm, t);
            const std::size_t finished = ++done;
            if (progress)
            {
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress(finished, units);
            }
        }
    };

    unsigned threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, units));
    if (threads <= 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < threads; ++k)
            pool.emplace_back(worker);
        for (auto &th : pool)
            th.join();
    }

    for (const auto &r : result.records)
        if (!r.ok())
            ++result.failures;
    result.summary = summarize(cfg, result.records);
    return result;
}

std::vector<SummaryRow> summarize(const ScenarioConfig &cfg, const std::vector<TrialRecord> &records)
{
    const auto points = operating_points(cfg);
    std::vector<SummaryRow> rows;
    for (const auto &pt : points)
        for (SchemeId scheme : cfg.schemes)
        {
            SummaryRow row;
            row.scheme = scheme;
            row.snr_db = pt.snr_db;
            row.pc_dbm = pt.pc_dbm;
            double sum = 0.0;
            std::vector<double> values;
            for (const auto &r : records)
            {
                if (r.scheme != scheme || r.snr_db != pt.snr_db || r.pc_dbm != pt.pc_dbm)
                    continue;
                if (!r.ok())
                {
                    ++row.failures;
                    continue;
                }
                values.push_back(r.p_r_db);
                sum += r.p_r_db;
            }
            row.trials = values.size();
            if (!values.empty())
            {
                row.mean_p_r_db = sum / static_cast<double>(values.size());
                if (values.size() > 1)
                {
                    double ss = 0.0;
                    for (double v : values)
                        ss += (v - row.mean_p_r_db) * (v - row.mean_p_r_db);
                    const double n = static_cast<double>(values.size());
                    row.std_error_db = std::sqrt(ss / (n - 1.0) / n);
                }
            }
            else
            {
                row.mean_p_r_db = std::numeric_limits<double>::quiet_NaN();
                row.std_error_db = std::numeric_limits<double>::quiet_NaN();
            }
            rows.push_back(row);
        }
    return rows;
}

ScenarioConfig preset(std::string_view name)
{
    ScenarioConfig cfg;
    if (name == "fig2")
    {
        cfg.pc_dbm = 10.0;
        cfg.axis = SweepAxis{AxisKind::Snr, 0.0, 30.0, 5.0};
    }
    else if (name == "fig3")
    {
        cfg.snr_db = 20.0;
        cfg.axis = SweepAxis{AxisKind::CircuitPower, -20.0, 20.0, 5.0};
    }
    else
        throw Error(ErrorCode::InvalidArgument, "unknown preset '" + std::string(name) + "'");
    return cfg;
}

std::string records_csv(const std::vector<TrialRecord> &records)
{
    std::ostringstream out;
    out << "scheme,snr_db,pc_dbm,trial,seed,p_r_db,iterations,beta1,beta2,margin_1r,margin_2r,margin_r1,margin_r2,"
           "status\n";
    for (const auto &r : records)
    {
        out << static_cast<int>(r.scheme) << ',' << format_sig9(r.snr_db) << ',' << format_sig9(r.pc_dbm) << ','
            << r.trial << ',' << r.seed << ',' << format_sig9(r.p_r_db) << ',' << r.iterations << ','
            << format_sig9(r.beta[0]) << ',' << format_sig9(r.beta[1]);
        for (double m : r.margins)
            out << ',' << format_sig9(m);
        out << ',' << r.status << '\n';
    }
    return out.str();
}

std::string summary_csv(const std::vector<SummaryRow> &rows)
{
    std::ostringstream out;
    out << "scheme,snr_db,pc_dbm,mean_p_r_db,std_error_db,trials,failures\n";
    for (const auto &r : rows)
        out << static_cast<int>(r.scheme) << ',' << format_sig9(r.snr_db) << ',' << format_sig9(r.pc_dbm) << ','
            << format_sig9(r.mean_p_r_db) << ',' << format_sig9(r.std_error_db) << ',' << r.trials << ','
            << r.failures << '\n';
    return out.str();
}

void write_text_file(const std::string &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out)
        throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

double oracle_grid(const ChannelRealization &channel, const SystemParams &params, int resolution)
{
    params.validate();
    if (channel.antennas() != 2 || channel.h2.size() != 2)
        throw Error(ErrorCode::InvalidArgument, "oracle_grid supports N = 2 only");
    if (resolution < 32)
        throw Error(ErrorCode::InvalidArgument, "oracle_grid resolution must be at least 32");

    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < 2; ++i)
        if (channel.user(i).norm_squared() > 0.0)
            active.push_back(i);
    if (active.empty())
        throw Error(ErrorCode::DegenerateChannel, "both channels are zero");

    const auto th = rate_thresholds(params);
    const double fixed = 2.0 * params.circuit_power / params.eta;
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<ComplexVector> grid;
    for (int k = 0; k <= resolution; ++k)
        for (int m = 0; m < resolution; ++m)
            grid.push_back(grid_vector(k * (0.5 * std::numbers::pi) / resolution,
                                       2.0 * std::numbers::pi * m / resolution));

    // per grid vector: a_i as a combiner, 1 / |h_i^T f|^2 as a beamformer
    std::vector<std::array<double, 2>> rhs(grid.size(), {0.0, 0.0});
    std::vector<std::array<double, 2>> inv_gain(grid.size(), {0.0, 0.0});
    for (std::size_t k = 0; k < grid.size(); ++k)
        for (std::size_t i : active)
        {
            const double ul = effective_gain(grid[k], channel.user(i));
            rhs[k][i] = ul > 0.0 ? params.sigma2 * th.uplink[i] / (params.eta * ul) +
                                       params.sigma2 * (th.downlink[i] - 1.0) + fixed
                                 : inf;
            const double dl = effective_gain(channel.user(i), grid[k]);
            inv_gain[k][i] = dl > 0.0 ? 1.0 / dl : inf;
        }

    double best = inf;
    for (std::size_t gk = 0; gk < grid.size(); ++gk)
    {
        const auto &a = rhs[gk];
        for (std::size_t fk = 0; fk < grid.size(); ++fk)
        {
            double p = 0.0;
            for (std::size_t i : active)
                p = std::max(p, a[i] * inv_gain[fk][i]);
            best = std::min(best, p);
        }
    }
    return best;
}

std::vector<OracleComparison> oracle_check(const ScenarioConfig &cfg, std::size_t count, int resolution)
{
    ScenarioConfig two = cfg;
    two.antennas = 2;
    const SystemParams params = units_from_config(two);
    const SchemeOptions opts = scheme_options(two);
    std::vector<OracleComparison> out;
    for (std::size_t k = 0; k < count; ++k)
    {
        OracleComparison c;
        c.trial = k;
        c.seed = trial_seed(cfg.master_seed, k);
        const ChannelRealization ch = gen_channel(c.seed, 2);
        c.alternation_p_r = run_scheme(SchemeId::JointTransceiverPS, ch, params, opts).design.p_r;
        c.oracle_p_r = oracle_grid(ch, params, resolution);
        c.diff_db = linear_to_db(c.alternation_p_r) - linear_to_db(c.oracle_p_r);
        out.push_back(c);
    }
    return out;
}

LatticeDemoResult lattice_demo(const LatticeDemoConfig &cfg, const std::function<void(const std::string &)> &sink)
{
    const NestedChain chain = NestedChain::scaled_integer(cfg.dimension, cfg.fine, cfg.mid, cfg.coarse);
    const auto book1 = enumerate_codebook(chain.fine(), chain.coarse());
    const auto book2 = enumerate_codebook(chain.fine(), chain.mid());
    const std::size_t total = book1.size() * book2.size();
    const std::size_t n = cfg.dimension;

    LatticeDemoResult res;
    res.exhaustive = total <= cfg.max_pairs;
    const std::size_t pairs = res.exhaustive ? total : cfg.max_pairs;
    Rng rng(cfg.seed);

    auto dither = [&](const Lattice &shaping, double scale)
    {
        RealVector u(n, 0.0);
        if (!cfg.dithered)
            return u;
        for (auto &x : u)
            x = (rng.uniform() - 0.5) * scale;
        return mod_lattice(shaping, u);
    };

    for (std::size_t k = 0; k < pairs; ++k)
    {
        std::size_t i1 = 0;
        std::size_t i2 = 0;
        if (res.exhaustive)
        {
            i1 = k / book2.size();
            i2 = k % book2.size();
        }
        else
        {
            i1 = static_cast<std::size_t>(rng.next() % book1.size());
            i2 = static_cast<std::size_t>(rng.next() % book2.size());
        }
        const RealVector u1 = dither(chain.coarse(), cfg.coarse);
        const RealVector u2 = dither(chain.mid(), cfg.mid);
        const CofExchange ex =
            cof_roundtrip(chain, book1[i1].point, book2[i2].point, u1, u2, 1.0, 1.0, 0.0, std::span<const double>{});
        double err = 0.0;
        for (std::size_t d = 0; d < n; ++d)
            err = std::max(err, std::abs(ex.t_expected[d] - ex.t_decoded[d]));
        const bool match = err <= 1e-9;
        ++res.pairs;
        if (match)
            ++res.matches;
        if (sink)
            sink("pair=" + std::to_string(k) + " w1=" + format_point(ex.w1) + " w2=" + format_point(ex.w2) +
                 " u1=" + format_point(ex.u1) + " u2=" + format_point(ex.u2) + " alpha=" + format_sig9(ex.alpha) +
                 " t_expected=" + format_point(ex.t_expected) + " t_decoded=" + format_point(ex.t_decoded) +
                 " match=" + (match ? "true" : "false"));
    }
    if (sink)
        sink("summary pairs=" + std::to_string(res.pairs) + " matches=" + std::to_string(res.matches) +
             " exhaustive=" + (res.exhaustive ? "true" : "false"));
    return res;
}

} // namespace twrc
