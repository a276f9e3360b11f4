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

#include "twrc/scenario.hpp"
#include "twrc/error.hpp"
#include "twrc/random.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace twrc
{

namespace
{

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value)
{
    throw Error(ErrorCode::InvalidArgument,
                "malformed value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

double parse_double(std::string_view key, std::string_view value)
{
    value = trim(value);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(x))
        bad_value(key, value);
    return x;
}

template <class Int>
Int parse_integer(std::string_view key, std::string_view value)
{
    value = trim(value);
    Int x = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc() || ptr != value.data() + value.size())
        bad_value(key, value);
    return x;
}

bool parse_bool(std::string_view key, std::string_view value)
{
    value = trim(value);
    if (value == "true" || value == "1" || value == "yes")
        return true;
    if (value == "false" || value == "0" || value == "no")
        return false;
    bad_value(key, value);
}

std::string format_double(double x)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

} // namespace

std::vector<double> SweepAxis::points() const
{
    std::vector<double> out;
    if (kind == AxisKind::None)
        return out;
    const double slack = 1e-9 * std::abs(step);
    for (std::size_t k = 0;; ++k)
    {
        const double x = start + static_cast<double>(k) * step;
        if ((step > 0.0 && x > stop + slack) || (step < 0.0 && x < stop - slack))
            break;
        out.push_back(x);
    }
    return out;
}

SweepAxis parse_axis(std::string_view text)
{
    text = trim(text);
    if (text == "none" || text.empty())
        return {};
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true)
    {
        const auto colon = text.find(':', pos);
        parts.push_back(text.substr(pos, colon == std::string_view::npos ? std::string_view::npos : colon - pos));
        if (colon == std::string_view::npos)
            break;
        pos = colon + 1;
    }
    if (parts.size() != 4)
        bad_value("axis", text);
    SweepAxis axis;
    if (parts[0] == "snr")
        axis.kind = AxisKind::Snr;
    else if (parts[0] == "pc")
        axis.kind = AxisKind::CircuitPower;
    else
        bad_value("axis", text);
    axis.start = parse_double("axis", parts[1]);
    axis.stop = parse_double("axis", parts[2]);
    axis.step = parse_double("axis", parts[3]);
    if (axis.step == 0.0 || (axis.stop - axis.start) * axis.step < 0.0)
        bad_value("axis", text);
    if (axis.points().size() > 1000)
        throw Error(ErrorCode::InvalidArgument, "axis has more than 1000 points");
    return axis;
}

std::string render_axis(const SweepAxis &axis)
{
    if (axis.kind == AxisKind::None)
        return "none";
    return std::string(axis.kind == AxisKind::Snr ? "snr" : "pc") + ":" + format_double(axis.start) + ":" +
           format_double(axis.stop) + ":" + format_double(axis.step);
}

std::vector<SchemeId> parse_scheme_list(std::string_view text)
{
    std::vector<SchemeId> out;
    text = trim(text);
    if (text.empty())
        return out;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        const auto comma = text.find(',', pos);
        const auto item = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        const auto s = parse_scheme(std::string(item));
        if (!s)
            bad_value("schemes", text);
        out.push_back(*s);
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

void ScenarioConfig::validate() const
{
    if (antennas < 1 || antennas > 16)
        throw Error(ErrorCode::InvalidArgument, "antennas must lie in [1, 16]");
    if (trials < 1)
        throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
    if (!std::isfinite(snr_db) || !std::isfinite(pc_dbm))
        throw Error(ErrorCode::InvalidArgument, "snr_db and pc_dbm must be finite");
    if (!(eta > 0.0 && eta <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "eta must lie in (0, 1]");
    if (!(rate1 > 0.0) || !(rate2 > 0.0))
        throw Error(ErrorCode::InvalidArgument, "rate targets must be positive");
    if (schemes.empty())
        throw Error(ErrorCode::InvalidArgument, "scheme list is empty");
    if (max_iter < 1 || !(rel_tol >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "max_iter must be positive and rel_tol non-negative");
    if (axis.kind != AxisKind::None && axis.points().empty())
        throw Error(ErrorCode::InvalidArgument, "sweep axis has no points");
}

void apply_setting(ScenarioConfig &cfg, std::string_view key, std::string_view value)
{
    key = trim(key);
    value = trim(value);
    if (key == "antennas")
        cfg.antennas = parse_integer<std::size_t>(key, value);
    else if (key == "eta")
        cfg.eta = parse_double(key, value);
    else if (key == "snr_db")
        cfg.snr_db = parse_double(key, value);
    else if (key == "pc_dbm")
        cfg.pc_dbm = parse_double(key, value);
    else if (key == "rate1")
        cfg.rate1 = parse_double(key, value);
    else if (key == "rate2")
        cfg.rate2 = parse_double(key, value);
    else if (key == "trials")
        cfg.trials = parse_integer<std::size_t>(key, value);
    else if (key == "master_seed" || key == "seed")
        cfg.master_seed = parse_integer<std::uint64_t>(key, value);
    else if (key == "schemes")
        cfg.schemes = parse_scheme_list(value);
    else if (key == "axis")
        cfg.axis = parse_axis(value);
    else if (key == "baseline")
    {
        if (value == "phased")
            cfg.baseline = BaselineVariant::Phased;
        else if (value == "unphased")
            cfg.baseline = BaselineVariant::Unphased;
        else
            bad_value(key, value);
    }
    else if (key == "multi_start")
        cfg.multi_start = parse_bool(key, value);
    else if (key == "max_iter")
        cfg.max_iter = parse_integer<int>(key, value);
    else if (key == "rel_tol")
        cfg.rel_tol = parse_double(key, value);
    else if (key == "threads")
        cfg.threads = parse_integer<unsigned>(key, value);
    else
        throw Error(ErrorCode::InvalidArgument, "unknown configuration key '" + std::string(key) + "'");
}

ScenarioConfig parse_config(std::string_view text, ScenarioConfig base)
{
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size())
    {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line_no) + ": expected key=value");
        apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    }
    return base;
}

std::string render_config(const ScenarioConfig &cfg)
{
    std::ostringstream out;
    out << "antennas=" << cfg.antennas << "\n";
    out << "eta=" << format_double(cfg.eta) << "\n";
    out << "snr_db=" << format_double(cfg.snr_db) << "\n";
    out << "pc_dbm=" << format_double(cfg.pc_dbm) << "\n";
    out << "rate1=" << format_double(cfg.rate1) << "\n";
    out << "rate2=" << format_double(cfg.rate2) << "\n";
    out << "trials=" << cfg.trials << "\n";
    out << "master_seed=" << cfg.master_seed << "\n";
    out << "schemes=";
    for (std::size_t k = 0; k < cfg.schemes.size(); ++k)
        out << (k ? "," : "") << static_cast<int>(cfg.schemes[k]);
    out << "\n";
    out << "axis=" << render_axis(cfg.axis) << "\n";
    out << "baseline=" << (cfg.baseline == BaselineVariant::Phased ? "phased" : "unphased") << "\n";
    out << "multi_start=" << (cfg.multi_start ? "true" : "false") << "\n";
    out << "max_iter=" << cfg.max_iter << "\n";
    out << "rel_tol=" << format_double(cfg.rel_tol) << "\n";
    out << "threads=" << cfg.threads << "\n";
    return out.str();
}

ScenarioConfig load_config_file(const std::string &path, ScenarioConfig base)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open configuration file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw Error(ErrorCode::IoError, "cannot read configuration file '" + path + "'");
    return parse_config(buf.str(), std::move(base));
}

ChannelRealization gen_channel(std::uint64_t seed, std::size_t antennas)
{
    if (antennas < 1)
        throw Error(ErrorCode::InvalidArgument, "antenna count must be at least 1");
    Rng rng(seed);
    const double s = std::sqrt(0.5);
    ChannelRealization ch{ComplexVector(antennas), ComplexVector(antennas), seed};
    for (auto &z : ch.h1)
    {
        const double re = rng.normal();
        z = Complex(re, rng.normal()) * s;
    }
    for (auto &z : ch.h2)
    {
        const double re = rng.normal();
        z = Complex(re, rng.normal()) * s;
    }
    return ch;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) noexcept
{
    return mix64(mix64(master_seed) ^ (index + 0x9e3779b97f4a7c15ULL));
}

double db_to_linear(double db) noexcept
{
    return std::pow(10.0, db / 10.0);
}

double linear_to_db(double linear) noexcept
{
    return 10.0 * std::log10(linear);
}

SystemParams units_at(const ScenarioConfig &cfg, double snr_db, double pc_dbm)
{
    cfg.validate();
    if (!std::isfinite(snr_db) || !std::isfinite(pc_dbm))
        throw Error(ErrorCode::InvalidArgument, "snr_db and pc_dbm must be finite");
    return SystemParams::make(cfg.antennas, cfg.eta, db_to_linear(pc_dbm), db_to_linear(-snr_db), cfg.rate1,
                              cfg.rate2);
}

SystemParams units_from_config(const ScenarioConfig &cfg)
{
    return units_at(cfg, cfg.snr_db, cfg.pc_dbm);
}

SchemeOptions scheme_options(const ScenarioConfig &cfg)
{
    SchemeOptions o;
    o.alternation.max_iter = cfg.max_iter;
    o.alternation.rel_tol = cfg.rel_tol;
    o.alternation.baseline = cfg.baseline;
    o.baseline = cfg.baseline;
    o.multi_start = cfg.multi_start;
    return o;
}

} // namespace twrc
