// SPDX-License-Identifier: Apache-2.0
//
// rsmcast - rate-splitting max-min fair multigroup multicast beamforming
// Copyright (C) 2026 The rsmcast Authors
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

#include "rsmcast/experiment.hpp"

#include "rsmcast/random.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rsmcast::experiment
{

using nlohmann::json;

SystemConfig SystemTemplate::at_snr_db(double snr_db) const
{
    const double P = noise_power * std::pow(10.0, snr_db / 10.0);
    return SystemConfig::from_group_sizes(n_tx, group_sizes, noise_power, P);
}

void ExperimentConfig::check() const
{
    if (system.n_tx == 0)
        throw ContractViolation("system.n_tx must be positive");
    if (system.group_sizes.empty())
        throw ContractViolation("system.group_sizes must list at least one group");
    for (auto g : system.group_sizes)
        if (g == 0)
            throw ContractViolation("system.group_sizes entries must be positive");
    if (!(system.noise_power > 0.0))
        throw ContractViolation("system.noise_power must be positive");
    if (snr_grid_db.empty())
        throw ContractViolation("snr_grid_db must be non-empty");
    for (std::size_t i = 1; i < snr_grid_db.size(); ++i)
        if (!(snr_grid_db[i] > snr_grid_db[i - 1]))
            throw ContractViolation("snr_grid_db must be strictly ascending");
    if (n_realizations < 1)
        throw ContractViolation("n_realizations must be at least 1");
    if (strategies.empty())
        throw ContractViolation("strategies must be non-empty");
    if (starts < 1)
        throw ContractViolation("starts must be at least 1");
    ao.check();
}

// ---------------------------------------------------------------------------
// config I/O

namespace
{

void reject_unknown(const json &j, std::initializer_list<std::string_view> known, std::string_view where)
{
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ContractViolation("unknown key '" + it.key() + "' in " + std::string(where));
}

} // namespace

json to_json(const ExperimentConfig &ec)
{
    json strategies = json::array();
    for (auto s : ec.strategies)
        strategies.push_back(std::string(to_string(s)));
    return json{
        {"system", {{"n_tx", ec.system.n_tx}, {"group_sizes", ec.system.group_sizes}, {"noise_power", ec.system.noise_power}}},
        {"snr_grid_db", ec.snr_grid_db},
        {"n_realizations", ec.n_realizations},
        {"strategies", strategies},
        {"ao",
         {{"epsilon", ec.ao.epsilon},
          {"max_iters", ec.ao.max_iters},
          {"init_scheme", std::string(ao::to_string(ec.ao.init_scheme))},
          {"seed", ec.ao.seed},
          {"wmse_form", std::string(wmmse::to_string(ec.ao.wmse_form))}}},
        {"master_seed", ec.master_seed},
        {"output_path", ec.output_path.generic_string()},
        {"starts", ec.starts},
        {"record_wall_time", ec.record_wall_time},
    };
}

ExperimentConfig config_from_json(const json &j)
{
    if (!j.is_object())
        throw ContractViolation("config must be a JSON object");
    reject_unknown(j,
                   {"system", "snr_grid_db", "n_realizations", "strategies", "ao", "master_seed", "output_path",
                    "starts", "record_wall_time"},
                   "config");
    ExperimentConfig ec;
    try
    {
        if (j.contains("system"))
        {
            const auto &s = j.at("system");
            reject_unknown(s, {"n_tx", "group_sizes", "noise_power"}, "system");
            if (s.contains("n_tx"))
                ec.system.n_tx = s.at("n_tx").get<std::size_t>();
            if (s.contains("group_sizes"))
                ec.system.group_sizes = s.at("group_sizes").get<std::vector<std::size_t>>();
            if (s.contains("noise_power"))
                ec.system.noise_power = s.at("noise_power").get<double>();
        }
        if (j.contains("snr_grid_db"))
            ec.snr_grid_db = j.at("snr_grid_db").get<std::vector<double>>();
        if (j.contains("n_realizations"))
            ec.n_realizations = j.at("n_realizations").get<int>();
        if (j.contains("strategies"))
        {
            ec.strategies.clear();
            for (const auto &s : j.at("strategies"))
                ec.strategies.push_back(parse_strategy(s.get<std::string>()));
        }
        if (j.contains("ao"))
        {
            const auto &a = j.at("ao");
            // mode is set per strategy by the sweep; accepted for symmetry with AoConfig
            reject_unknown(a, {"epsilon", "max_iters", "init_scheme", "mode", "seed", "wmse_form"}, "ao");
            if (a.contains("epsilon"))
                ec.ao.epsilon = a.at("epsilon").get<double>();
            if (a.contains("max_iters"))
                ec.ao.max_iters = a.at("max_iters").get<int>();
            if (a.contains("init_scheme"))
                ec.ao.init_scheme = ao::parse_init_scheme(a.at("init_scheme").get<std::string>());
            if (a.contains("mode"))
                ec.ao.mode = parse_strategy(a.at("mode").get<std::string>());
            if (a.contains("seed"))
                ec.ao.seed = a.at("seed").get<std::uint64_t>();
            if (a.contains("wmse_form"))
                ec.ao.wmse_form = wmmse::parse_wmse_form(a.at("wmse_form").get<std::string>());
        }
        if (j.contains("master_seed"))
            ec.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("output_path"))
            ec.output_path = j.at("output_path").get<std::string>();
        if (j.contains("starts"))
            ec.starts = j.at("starts").get<int>();
        if (j.contains("record_wall_time"))
            ec.record_wall_time = j.at("record_wall_time").get<bool>();
    }
    catch (const json::exception &e)
    {
        throw ContractViolation(std::string("malformed config: ") + e.what());
    }
    ec.check();
    return ec;
}

ExperimentConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file " + path.string());
    json j;
    try
    {
        in >> j;
    }
    catch (const json::exception &e)
    {
        throw ContractViolation("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

// ---------------------------------------------------------------------------
// channels and sweep

ChannelSet generate_channels(std::size_t n_tx, std::size_t n_users, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    ChannelSet ch;
    ch.vectors.reserve(n_users);
    for (std::size_t k = 0; k < n_users; ++k)
        ch.vectors.push_back(complex_gaussian(rng, static_cast<Eigen::Index>(n_tx)));
    return ch;
}

std::uint64_t realization_seed(std::uint64_t master_seed, int realization)
{
    return derive_seed(master_seed, static_cast<std::uint64_t>(realization));
}

void SweepResult::compute_means()
{
    means.clear();
    for (const auto &r : rows)
    {
        auto it = std::find_if(means.begin(), means.end(),
                               [&](const MeanRate &m) { return m.snr_db == r.snr_db && m.strategy == r.strategy; });
        if (it == means.end())
        {
            means.push_back(MeanRate{r.snr_db, r.strategy, 0.0, 0});
            it = std::prev(means.end());
        }
        it->mean_mmf_rate += r.mmf_rate;
        ++it->count;
    }
    for (auto &m : means)
        m.mean_mmf_rate /= static_cast<double>(m.count);
}

double SweepResult::mean(double snr_db, Strategy s) const
{
    for (const auto &m : means)
        if (m.snr_db == snr_db && m.strategy == s)
            return m.mean_mmf_rate;
    throw std::out_of_range("no mean for requested (snr, strategy)");
}

SweepResult run_sweep(const ExperimentConfig &ec, int jobs, const ProgressFn &progress)
{
    ec.check();
    const std::size_t n_snr = ec.snr_grid_db.size();
    const auto n_real = static_cast<std::size_t>(ec.n_realizations);
    const std::size_t n_strat = ec.strategies.size();
    const std::size_t total = n_snr * n_real * n_strat;
    std::size_t K = 0;
    for (auto g : ec.system.group_sizes)
        K += g;

    std::vector<ChannelSet> channels;
    channels.reserve(n_real);
    for (std::size_t r = 0; r < n_real; ++r)
        channels.push_back(generate_channels(ec.system.n_tx, K, realization_seed(ec.master_seed, static_cast<int>(r))));

    SweepResult out;
    out.rows.resize(total);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex err_mu;
    std::exception_ptr failure;

    auto worker = [&]() {
        for (;;)
        {
            const std::size_t cell = next.fetch_add(1);
            if (cell >= total)
                return;
            const std::size_t si = cell / (n_real * n_strat);
            const std::size_t ri = (cell / n_strat) % n_real;
            const std::size_t ki = cell % n_strat;
            try
            {
                SweepRow row;
                row.snr_db = ec.snr_grid_db[si];
                row.realization = static_cast<int>(ri);
                row.strategy = ec.strategies[ki];

                const auto cfg = ec.system.at_snr_db(row.snr_db);
                ao::AoConfig run = ec.ao;
                run.mode = row.strategy;
                run.seed = derive_seed(ec.ao.seed ^ realization_seed(ec.master_seed, row.realization),
                                       static_cast<std::uint64_t>(row.strategy));

                const auto t0 = std::chrono::steady_clock::now();
                try
                {
                    const auto res = ao::solve_multistart(cfg, channels[ri], run, ec.starts);
                    row.mmf_rate = res.solution.mmf_rate;
                    row.iterations = res.iterations;
                    row.converged = res.converged;
                }
                catch (const ao::AoAbort &e)
                {
                    row.mmf_rate = e.last_good().solution.mmf_rate;
                    row.iterations = e.iteration();
                    row.converged = false;
                }
                const auto t1 = std::chrono::steady_clock::now();
                if (ec.record_wall_time)
                    row.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
                out.rows[cell] = row;
            }
            catch (...)
            {
                std::lock_guard lock(err_mu);
                if (!failure)
                    failure = std::current_exception();
                next.store(total);
            }
            const std::size_t d = ++done;
            if (progress)
            {
                std::lock_guard lock(err_mu);
                progress(d, total);
            }
        }
    };

    const int n_workers = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
    if (n_workers == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < n_workers; ++w)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);
    out.compute_means();
    return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace
{

std::string format_snr(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, end);
    if (s.find_first_of(".eEn") == std::string::npos)
        s += ".0";
    return s;
}

std::string format_rate(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    for (;;)
    {
        const auto next = line.find(sep, pos);
        out.push_back(line.substr(pos, next - pos));
        if (next == std::string_view::npos)
            return out;
        pos = next + 1;
    }
}

template <class T>
T parse_number(std::string_view field, std::size_t line_no, std::string_view column)
{
    T value{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw std::runtime_error("line " + std::to_string(line_no) + ": bad " + std::string(column) + " '" +
                                 std::string(field) + "'");
    return value;
}

} // namespace

std::string to_csv(const SweepResult &sr)
{
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto &r : sr.rows)
    {
        out += format_snr(r.snr_db);
        out += ',';
        out += std::to_string(r.realization);
        out += ',';
        out += to_string(r.strategy);
        out += ',';
        out += format_rate(r.mmf_rate);
        out += ',';
        out += std::to_string(r.iterations);
        out += ',';
        out += r.converged ? "true" : "false";
        out += ',';
        out += std::to_string(r.wall_time_ms);
        out += '\n';
    }
    return out;
}

SweepResult parse_csv(std::string_view text)
{
    SweepResult sr;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t pos = 0;
    while (pos < text.size())
    {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (!header_seen)
        {
            if (line != kCsvHeader)
                throw std::runtime_error("unexpected CSV header '" + std::string(line) + "'");
            header_seen = true;
            continue;
        }
        if (line.empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != 7)
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected 7 fields");
        SweepRow r;
        r.snr_db = parse_number<double>(f[0], line_no, "snr_db");
        r.realization = parse_number<int>(f[1], line_no, "realization");
        r.strategy = parse_strategy(f[2]);
        r.mmf_rate = parse_number<double>(f[3], line_no, "mmf_rate_bits");
        r.iterations = parse_number<int>(f[4], line_no, "iterations");
        if (f[5] == "true")
            r.converged = true;
        else if (f[5] == "false")
            r.converged = false;
        else
            throw std::runtime_error("line " + std::to_string(line_no) + ": converged must be true/false");
        r.wall_time_ms = parse_number<std::int64_t>(f[6], line_no, "wall_time_ms");
        sr.rows.push_back(r);
    }
    if (!header_seen)
        throw std::runtime_error("empty CSV (missing header)");
    sr.compute_means();
    return sr;
}

std::filesystem::path meta_path_for(const std::filesystem::path &csv_path)
{
    auto p = csv_path;
    p.replace_filename(csv_path.stem().string() + ".meta.json");
    return p;
}

void persist(const SweepResult &sr, const ExperimentConfig &ec, const std::filesystem::path &csv_path)
{
    std::error_code fs_err;
    if (csv_path.has_parent_path())
        std::filesystem::create_directories(csv_path.parent_path(), fs_err);

    {
        std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + csv_path.string());
        out << to_csv(sr);
        if (!out)
            throw std::runtime_error("write failed for " + csv_path.string());
    }

    json meta{
        {"artifact", std::string(kArtifactName)},
        {"version", std::string(kArtifactVersion)},
        {"config", to_json(ec)},
        {"csv", csv_path.filename().generic_string()},
        {"rows", sr.rows.size()},
        {"channel_model", "i.i.d. CN(0,1) entries"},
        {"channel_reuse", "one channel draw per realization, shared by every SNR point and strategy"},
        {"seed_derivation", "splitmix64(master_seed, realization)"},
        {"power_from_snr", "P = noise_power * 10^(snr_db/10)"},
    };
    const auto meta_path = meta_path_for(csv_path);
    std::ofstream out(meta_path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + meta_path.string());
    out << meta.dump(2) << '\n';
    if (!out)
        throw std::runtime_error("write failed for " + meta_path.string());
}

} // namespace rsmcast::experiment
