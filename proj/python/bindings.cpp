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

#include "rsmcast/ao_solver.hpp"
#include "rsmcast/dof.hpp"
#include "rsmcast/experiment.hpp"
#include "rsmcast/wmmse.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace rsmcast;

namespace
{

// rows of H are the users' channel vectors h_k^T
ChannelSet channels_from(const Eigen::MatrixXcd &H)
{
    ChannelSet ch;
    for (Eigen::Index k = 0; k < H.rows(); ++k)
        ch.vectors.push_back(H.row(k).transpose());
    return ch;
}

py::dict solve(const Eigen::MatrixXcd &H, std::vector<std::vector<std::size_t>> groups, double power,
               double noise_power, const std::string &strategy, int starts, std::uint64_t seed, double epsilon,
               int max_iters, const std::string &wmse_form)
{
    SystemConfig cfg(static_cast<std::size_t>(H.cols()), std::move(groups), noise_power, power);
    ao::AoConfig ao;
    ao.mode = parse_strategy(strategy);
    ao.seed = seed;
    ao.epsilon = epsilon;
    ao.max_iters = max_iters;
    ao.wmse_form = wmmse::parse_wmse_form(wmse_form);
    ao::AoResult r;
    {
        py::gil_scoped_release release;
        r = ao::solve_multistart(cfg, channels_from(H), ao, starts);
    }
    py::dict d;
    d["mmf_rate"] = r.solution.mmf_rate;
    d["iterations"] = r.iterations;
    d["converged"] = r.converged;
    d["objective_trace"] = r.objective_trace;
    d["common_precoder"] = r.solution.precoders.common;
    d["designated_precoders"] = r.solution.precoders.designated;
    d["common_alloc"] = r.solution.common_alloc;
    d["group_rates"] = r.solution.breakdown.group_rates;
    d["start_index"] = r.start_index;
    return d;
}

std::string run_sweep_json(const std::string &config_json)
{
    const auto ec = experiment::config_from_json(nlohmann::json::parse(config_json));
    experiment::SweepResult sr;
    {
        py::gil_scoped_release release;
        sr = experiment::run_sweep(ec);
    }
    return experiment::to_csv(sr);
}

py::list parse_csv(const std::string &text)
{
    const auto sr = experiment::parse_csv(text);
    py::list rows;
    for (const auto &r : sr.rows)
    {
        py::dict d;
        d["snr_db"] = r.snr_db;
        d["realization"] = r.realization;
        d["strategy"] = std::string(to_string(r.strategy));
        d["mmf_rate_bits"] = r.mmf_rate;
        d["iterations"] = r.iterations;
        d["converged"] = r.converged;
        d["wall_time_ms"] = r.wall_time_ms;
        rows.append(d);
    }
    return rows;
}

} // namespace

PYBIND11_MODULE(_rsmcast, m)
{
    m.doc() = "Rate-splitting max-min fair multigroup multicast beamforming";
    m.attr("__version__") = std::string(experiment::kArtifactVersion);
    m.attr("CSV_HEADER") = std::string(experiment::kCsvHeader);

    py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
    py::register_exception<AssumptionViolation>(m, "AssumptionViolation", PyExc_ValueError);

    m.def("solve", &solve, py::arg("channels"), py::arg("groups"), py::arg("power"), py::arg("noise_power") = 1.0,
          py::arg("strategy") = "RS", py::arg("starts") = 1, py::arg("seed") = 0, py::arg("epsilon") = 1e-4,
          py::arg("max_iters") = 200, py::arg("wmse_form") = "natural",
          "Max-min fair precoder design by WMMSE alternating optimization. `channels` is K x N complex.");

    m.def(
        "rates",
        [](const Eigen::MatrixXcd &H, std::vector<std::vector<std::size_t>> groups, const CVector &common,
           std::vector<CVector> designated, double noise_power) {
            SystemConfig cfg(static_cast<std::size_t>(H.cols()), std::move(groups), noise_power, 1.0);
            const auto br = rates(cfg, channels_from(H), PrecoderSet{common, std::move(designated)});
            py::dict d;
            d["user_rates"] = br.user_rates;
            d["common_user_rates"] = br.common_user_rates;
            d["common_rate"] = br.common_rate;
            d["group_rates"] = br.group_rates;
            d["mmf"] = mmf_objective(br);
            return d;
        },
        py::arg("channels"), py::arg("groups"), py::arg("common"), py::arg("designated"),
        py::arg("noise_power") = 1.0);

    m.def(
        "n_min",
        [](std::size_t n_tx, std::size_t n_groups, std::size_t group_size) {
            return dof::n_min(SystemConfig::equal_groups(n_tx, n_groups, group_size));
        },
        py::arg("n_tx"), py::arg("n_groups"), py::arg("group_size"));

    m.def(
        "empirical_dof",
        [](const std::vector<std::pair<double, double>> &curve) { return dof::empirical_dof(curve); },
        py::arg("curve"), "Slope of rate against log2(P) from (P, rate) pairs.");

    m.def(
        "generate_channels",
        [](std::size_t n_tx, std::size_t n_users, std::uint64_t seed) {
            const auto ch = experiment::generate_channels(n_tx, n_users, seed);
            Eigen::MatrixXcd H(static_cast<Eigen::Index>(n_users), static_cast<Eigen::Index>(n_tx));
            for (std::size_t k = 0; k < n_users; ++k)
                H.row(static_cast<Eigen::Index>(k)) = ch[k].transpose();
            return H;
        },
        py::arg("n_tx"), py::arg("n_users"), py::arg("seed"));

    m.def("run_sweep", &run_sweep_json, py::arg("config_json"), "Runs a sweep from a JSON config; returns CSV text.");
    m.def("parse_csv", &parse_csv, py::arg("text"));
}
