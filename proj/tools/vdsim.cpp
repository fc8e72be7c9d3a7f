// Copyright 2026 The vdsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vd/records.hpp"
#include "vd/runner.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::optional<std::string> out_dir;
    std::optional<std::string> channel;
    std::optional<int> n_instances;
    std::optional<int> n_vertices;
    std::optional<double> edge_prob;
    std::optional<double> eps_min, eps_max;
    std::optional<int> eps_points;
    std::optional<double> eta;
    std::optional<double> variance_threshold;
    std::optional<int> check_qubits;
    std::optional<int> check_trials;
    std::optional<std::string> records;
};

void add_common_flags(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--config", opts.config_path, "key = value config file");
    cmd->add_option("--seed", opts.seed, "master seed");
    cmd->add_option("--jobs", opts.jobs, "worker threads (instance-level parallelism)");
    cmd->add_option("--out", opts.out_dir, "output directory");
}

void add_sweep_flags(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--channel", opts.channel, "dephasing | depolarizing | both");
    cmd->add_option("--instances", opts.n_instances, "number of random graphs");
    cmd->add_option("--vertices", opts.n_vertices, "vertices per graph");
    cmd->add_option("--edge-prob", opts.edge_prob, "edge probability");
    cmd->add_option("--eps-min", opts.eps_min, "smallest error probability");
    cmd->add_option("--eps-max", opts.eps_max, "largest error probability");
    cmd->add_option("--eps-points", opts.eps_points, "number of grid points");
    cmd->add_option("--variance-threshold", opts.variance_threshold,
                    "target estimator variance for min_samples");
}

/// Config file first, then explicit CLI flags on top.
vd::ExperimentConfig assemble(vd::ExperimentKind kind, const CliOptions& opts) {
    vd::ExperimentConfig config;
    config.experiment = kind;
    if (kind == vd::ExperimentKind::ThermalSweep) config.eps_max = 0.25;
    if (!opts.config_path.empty()) vd::load_config_file(opts.config_path, config);
    config.experiment = kind;  // the subcommand wins over a config-file value
    if (opts.seed) config.master_seed = *opts.seed;
    if (opts.jobs) config.jobs = *opts.jobs;
    if (opts.out_dir) config.output_dir = *opts.out_dir;
    if (opts.channel) config.channel = *opts.channel;
    if (opts.n_instances) config.n_instances = *opts.n_instances;
    if (opts.n_vertices) config.n_vertices = *opts.n_vertices;
    if (opts.edge_prob) config.edge_prob = *opts.edge_prob;
    if (opts.eps_min) config.eps_min = *opts.eps_min;
    if (opts.eps_max) config.eps_max = *opts.eps_max;
    if (opts.eps_points) config.eps_points = *opts.eps_points;
    if (opts.eta) config.eta = *opts.eta;
    if (opts.variance_threshold) config.variance_threshold = *opts.variance_threshold;
    if (opts.check_qubits) config.check_qubits = *opts.check_qubits;
    if (opts.check_trials) config.check_trials = *opts.check_trials;
    if (opts.records) config.records_path = *opts.records;
    return config;
}

int run_summarize(const std::string& records_path, const std::string& out_dir) {
    const auto records = vd::read_records_csv(records_path);
    const auto rows = vd::summarize(records);
    std::filesystem::create_directories(out_dir);
    vd::write_aggregate_csv(out_dir + "/aggregate.csv", rows);
    for (const auto& row : rows) {
        if (row.error_reduction)
            std::cout << vd::to_string(row.channel) << " eps=" << vd::format_double(row.eps)
                      << " error_reduction=" << vd::format_double(*row.error_reduction) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"virtual distillation reproduction harness"};
    app.require_subcommand(1);

    CliOptions opts;

    CLI::App* qaoa = app.add_subcommand("qaoa-sweep", "QAOA MaxCut noise sweep");
    add_common_flags(qaoa, opts);
    add_sweep_flags(qaoa, opts);

    CLI::App* thermal = app.add_subcommand("thermal-sweep", "thermal-mixture noise sweep");
    add_common_flags(thermal, opts);
    add_sweep_flags(thermal, opts);
    thermal->add_option("--eta", opts.eta, "inverse-temperature constant");

    CLI::App* drift = app.add_subcommand("drift", "coherent-mismatch curves from a QAOA sweep");
    add_common_flags(drift, opts);
    drift->add_option("--records", opts.records, "records.csv of a finished qaoa-sweep");
    drift->add_option("--vertices", opts.n_vertices, "vertices per graph");
    drift->add_option("--edge-prob", opts.edge_prob, "edge probability");

    CLI::App* check = app.add_subcommand("vd-check", "circuit vs closed-form oracle check");
    add_common_flags(check, opts);
    check->add_option("--n-qubits", opts.check_qubits, "copy register size N");
    check->add_option("--trials", opts.check_trials, "random states per check");

    CLI::App* summ = app.add_subcommand("summarize", "aggregate a records.csv");
    std::string summarize_records;
    std::string summarize_out = "out";
    summ->add_option("--records", summarize_records, "records.csv path")->required();
    summ->add_option("--out", summarize_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (summ->parsed()) return run_summarize(summarize_records, summarize_out);
        vd::ExperimentKind kind = vd::ExperimentKind::QaoaSweep;
        if (thermal->parsed()) kind = vd::ExperimentKind::ThermalSweep;
        if (drift->parsed()) kind = vd::ExperimentKind::Drift;
        if (check->parsed()) kind = vd::ExperimentKind::VdCheck;
        return vd::run(assemble(kind, opts));
    } catch (const vd::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const vd::resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
