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

// Command-line front end:
//   rsmcast run --config cfg.json [--out DIR] [--seed N] [--strategies rs,nors,ss] [--jobs N]
//   rsmcast dof --config cfg.json [--jobs N]
//   rsmcast validate [--seed N]

#include "rsmcast/ao_solver.hpp"
#include "rsmcast/dof.hpp"
#include "rsmcast/experiment.hpp"
#include "rsmcast/subproblem.hpp"
#include "rsmcast/wmmse.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <string>

namespace
{

using namespace rsmcast;

constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct RunOptions
{
    std::string config;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string strategies;
    int jobs = 1;
    bool quiet = false;
};

experiment::ExperimentConfig load(const RunOptions &opt)
{
    auto ec = experiment::load_config(opt.config);
    if (opt.seed)
        ec.master_seed = *opt.seed;
    if (!opt.strategies.empty())
        ec.strategies = parse_strategy_list(opt.strategies);
    if (!opt.out_dir.empty())
        ec.output_path = std::filesystem::path(opt.out_dir) / ec.output_path.filename();
    return ec;
}

experiment::ProgressFn progress_printer(bool quiet)
{
    if (quiet)
        return {};
    return [](std::size_t done, std::size_t total) {
        if (done == total || done % 25 == 0)
            std::fprintf(stderr, "\r%zu/%zu cells", done, total);
        if (done == total)
            std::fprintf(stderr, "\n");
    };
}

int cmd_run(const RunOptions &opt)
{
    const auto ec = load(opt);
    const auto sr = experiment::run_sweep(ec, opt.jobs, progress_printer(opt.quiet));
    try
    {
        experiment::persist(sr, ec, ec.output_path);
    }
    catch (const std::runtime_error &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    std::printf("wrote %zu rows to %s\n", sr.rows.size(), ec.output_path.string().c_str());
    for (const auto &m : sr.means)
        std::printf("  snr %6.2f dB  %-4s  mean MMF rate %.4f bits\n", m.snr_db,
                    std::string(to_string(m.strategy)).c_str(), m.mean_mmf_rate);
    return 0;
}

int cmd_dof(const RunOptions &opt)
{
    const auto ec = load(opt);
    const auto cfg = ec.system.at_snr_db(ec.snr_grid_db.front());
    const auto sr = experiment::run_sweep(ec, opt.jobs, progress_printer(opt.quiet));

    nlohmann::json reports = nlohmann::json::array();
    for (auto s : ec.strategies)
    {
        std::vector<std::pair<double, double>> curve;
        for (double snr : ec.snr_grid_db)
            curve.emplace_back(std::pow(10.0, snr / 10.0), sr.mean(snr, s));
        dof::DofReport rep;
        rep.strategy = s;
        rep.n_min = dof::n_min(cfg);
        rep.overloaded = dof::is_overloaded(cfg);
        rep.predicted_dof = dof::predicted_dof(cfg, s);
        rep.empirical_slope = dof::empirical_dof(curve);
        reports.push_back({{"strategy", std::string(to_string(s))},
                           {"n_min", rep.n_min},
                           {"overloaded", rep.overloaded},
                           {"empirical_slope", rep.empirical_slope},
                           {"predicted_dof", rep.predicted_dof}});
    }
    std::cout << reports.dump(2) << '\n';
    return 0;
}

/// Invariant checks on small random instances.
int cmd_validate(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    bool all_ok = true;
    auto report = [&](const char *name, bool ok, double value) {
        std::printf("%s  %-40s  %.3g\n", ok ? "PASS" : "FAIL", name, value);
        all_ok = all_ok && ok;
    };

    // rate / WMMSE identity
    double worst_gap = 0.0;
    for (int t = 0; t < 200; ++t)
    {
        const std::size_t N = 1 + rng() % 4;
        const std::size_t M = 1 + rng() % 3;
        const auto cfg = SystemConfig::equal_groups(N, M, 1 + rng() % 2, 1.0, 10.0);
        const auto ch = experiment::generate_channels(N, cfg.n_users(), rng());
        ao::AoConfig ao;
        ao.init_scheme = ao::InitScheme::random_gaussian;
        ao.seed = rng();
        worst_gap = std::max(worst_gap, wmmse::rate_wmmse_gap(cfg, ch, ao::initialize(cfg, ch, ao)));
    }
    report("rate-WMMSE identity (max gap)", worst_gap <= 1e-9, worst_gap);

    // AO monotonicity and mode dominance
    double worst_drop = 0.0;
    double worst_dominance = 0.0;
    for (int t = 0; t < 6; ++t)
    {
        const auto cfg = SystemConfig::equal_groups(2, 2, 2, 1.0, std::pow(10.0, 1.0 + t % 3));
        const auto ch = experiment::generate_channels(2, 4, rng());
        double rs = 0.0, best_other = 0.0;
        for (auto mode : {Strategy::RS, Strategy::NoRS, Strategy::SS})
        {
            ao::AoConfig ao;
            ao.mode = mode;
            ao.seed = seed + static_cast<std::uint64_t>(t);
            const auto res = ao::solve_multistart(cfg, ch, ao, 3);
            for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
                worst_drop = std::max(worst_drop, res.objective_trace[i - 1] - res.objective_trace[i]);
            if (mode == Strategy::RS)
                rs = res.solution.mmf_rate;
            else
                best_other = std::max(best_other, res.solution.mmf_rate);
        }
        worst_dominance = std::max(worst_dominance, best_other - rs);
    }
    report("AO objective monotone (worst drop)", worst_drop <= 1e-6, worst_drop);
    report("RS >= max(NoRS, SS) - 5e-3 (worst)", worst_dominance <= 5e-3, worst_dominance);

    // N_min
    const bool nmin_ok = dof::n_min(SystemConfig::equal_groups(2, 2, 2)) == 3 &&
                         dof::n_min(SystemConfig::equal_groups(4, 3, 3)) == 7 &&
                         dof::n_min(SystemConfig::equal_groups(1, 1, 3)) == 1;
    report("N_min = 1 + K - G", nmin_ok, 0.0);

    return all_ok ? 0 : kExitValidation;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Rate-splitting max-min fair multigroup multicast beamforming simulator"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto *run = app.add_subcommand("run", "Monte-Carlo SNR sweep; writes CSV plus a .meta.json sidecar");
    run->add_option("--config", run_opt.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", run_opt.out_dir, "Output directory (overrides the config's directory)");
    run->add_option("--seed", run_opt.seed, "Master seed override");
    run->add_option("--strategies", run_opt.strategies, "Comma separated subset of rs,nors,ss");
    run->add_option("--jobs", run_opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
    run->add_flag("--quiet", run_opt.quiet, "No progress output");

    RunOptions dof_opt;
    auto *dof_cmd = app.add_subcommand("dof", "Empirical DoF report per strategy (JSON on stdout)");
    dof_cmd->add_option("--config", dof_opt.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    dof_cmd->add_option("--seed", dof_opt.seed, "Master seed override");
    dof_cmd->add_option("--strategies", dof_opt.strategies, "Comma separated subset of rs,nors,ss");
    dof_cmd->add_option("--jobs", dof_opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
    dof_cmd->add_flag("--quiet", dof_opt.quiet, "No progress output");

    std::uint64_t validate_seed = 7;
    auto *validate = app.add_subcommand("validate", "Run invariant checks on small random instances");
    validate->add_option("--seed", validate_seed, "Seed for the random instances");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run)
            return cmd_run(run_opt);
        if (*dof_cmd)
            return cmd_dof(dof_opt);
        if (*validate)
            return cmd_validate(validate_seed);
    }
    catch (const ContractViolation &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const AssumptionViolation &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const std::runtime_error &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return 0;
}
