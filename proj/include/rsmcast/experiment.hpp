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

#ifndef RSMCAST_EXPERIMENT_HPP
#define RSMCAST_EXPERIMENT_HPP

#include "rsmcast/ao_solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace rsmcast::experiment
{

inline constexpr std::string_view kArtifactName = "rsmcast";
inline constexpr std::string_view kArtifactVersion = "0.1.0";
inline constexpr std::string_view kCsvHeader =
    "snr_db,realization,strategy,mmf_rate_bits,iterations,converged,wall_time_ms";

/// Layout shared by every realization; the power budget comes from the SNR.
struct SystemTemplate
{
    std::size_t n_tx = 2;
    std::vector<std::size_t> group_sizes{2, 2};
    double noise_power = 1.0;

    SystemConfig at_snr_db(double snr_db) const;
};

struct ExperimentConfig
{
    SystemTemplate system;
    std::vector<double> snr_grid_db{0, 5, 10, 15, 20, 25, 30, 35, 40};
    int n_realizations = 100;
    std::vector<Strategy> strategies{Strategy::RS, Strategy::NoRS, Strategy::SS};
    ao::AoConfig ao;
    std::uint64_t master_seed = 1;
    std::filesystem::path output_path = "sweep.csv";
    int starts = 3;                // multi-start AO, best of `starts`
    bool record_wall_time = false; // off keeps the CSV a pure function of the config

    void check() const;
};

// JSON mirror of ExperimentConfig; keys are the field names above.
nlohmann::json to_json(const ExperimentConfig &ec);
ExperimentConfig config_from_json(const nlohmann::json &j);
ExperimentConfig load_config(const std::filesystem::path &path);

struct SweepRow
{
    double snr_db = 0.0;
    int realization = 0;
    Strategy strategy = Strategy::RS;
    double mmf_rate = 0.0; // bits/channel use
    int iterations = 0;
    bool converged = false;
    std::int64_t wall_time_ms = 0;

    bool operator==(const SweepRow &) const = default;
};

struct MeanRate
{
    double snr_db = 0.0;
    Strategy strategy = Strategy::RS;
    double mean_mmf_rate = 0.0;
    int count = 0;
};

struct SweepResult
{
    std::vector<SweepRow> rows;
    std::vector<MeanRate> means; // per (snr, strategy), in first-appearance order

    void compute_means();
    // Throws std::out_of_range if the pair is absent.
    double mean(double snr_db, Strategy s) const;
};

/// K i.i.d. CN(0, 1) channel vectors of length n_tx from a seeded stream.
ChannelSet generate_channels(std::size_t n_tx, std::size_t n_users, std::uint64_t seed);

std::uint64_t realization_seed(std::uint64_t master_seed, int realization);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Monte-Carlo sweep. One channel draw per realization, shared by every SNR
/// point and strategy. Cells run on `jobs` worker threads; rows come back in
/// (snr, realization, strategy) order independent of scheduling.
SweepResult run_sweep(const ExperimentConfig &ec, int jobs = 1, const ProgressFn &progress = {});

std::string to_csv(const SweepResult &sr);
/// Parses CSV produced by to_csv. Throws std::runtime_error on schema errors.
SweepResult parse_csv(std::string_view text);

/// `<dir>/<stem>.meta.json` next to a CSV path.
std::filesystem::path meta_path_for(const std::filesystem::path &csv_path);

/// Writes the CSV and its meta sidecar. Throws std::runtime_error on I/O failure.
void persist(const SweepResult &sr, const ExperimentConfig &ec, const std::filesystem::path &csv_path);

} // namespace rsmcast::experiment

#endif
