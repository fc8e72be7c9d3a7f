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

#include "vd/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "vd/distillation.hpp"
#include "vd/experiments.hpp"
#include "vd/qaoa_maxcut.hpp"
#include "vd/rng.hpp"

namespace vd {

namespace {

namespace fs = std::filesystem;

// Stream tags for derive_seed so graph sampling and Monte Carlo sampling of
// the same instance never share a generator.
constexpr std::uint64_t kGraphStream = 0x47524150'48000000ULL;

/// Run `task(i)` for i in [0, count) on `jobs` worker threads; exceptions are
/// captured and the first one rethrown after all workers join.
template <class Task>
void parallel_for(int count, int jobs, Task&& task) {
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
#ifdef _OPENMP
            // Workers already saturate the cores; keep the dense kernels from
            // spawning a second level of threads.
            omp_set_num_threads(1);
#endif
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& worker : workers) worker.join();
    if (error) std::rethrow_exception(error);
}

int effective_jobs(const ExperimentConfig& config) {
    int jobs = config.jobs;
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs <= 0) jobs = 1;
    // Memory guard: a concurrent N = 6 distillation worker holds up to ~1 GiB
    // of register state, so concurrency is capped rather than unbounded.
    return std::min(jobs, 8);
}

std::vector<MaxCutInstance> sample_instances(const ExperimentConfig& config) {
    std::vector<MaxCutInstance> instances;
    instances.reserve(config.n_instances);
    for (int k = 0; k < config.n_instances; ++k)
        instances.push_back(erdos_renyi(config.n_vertices, config.edge_prob,
                                        config.instance_seed(k)));
    return instances;
}

void write_graphs(const fs::path& dir, const std::vector<MaxCutInstance>& instances) {
    fs::create_directories(dir);
    for (std::size_t k = 0; k < instances.size(); ++k)
        write_edgelist((dir / ("instance_" + std::to_string(k) + ".edgelist")).string(),
                       instances[k]);
}

void persist(const ExperimentConfig& config, const std::vector<SweepRecord>& records,
             bool with_graphs, const std::vector<MaxCutInstance>& instances) {
    const fs::path out(config.output_dir);
    fs::create_directories(out);
    write_records_csv((out / "records.csv").string(), records);
    write_aggregate_csv((out / "aggregate.csv").string(), summarize(records));
    std::ofstream manifest(out / "manifest.txt");
    write_manifest(manifest, config);
    if (with_graphs) write_graphs(out / "graphs", instances);
}

int run_sweep_experiment(const ExperimentConfig& config) {
    const std::vector<MaxCutInstance> instances = sample_instances(config);
    const std::vector<ChannelKind> channels = config.channels();
    const std::vector<double> grid = config.eps_grid();

    struct TaskKey {
        int instance;
        ChannelKind channel;
    };
    std::vector<TaskKey> tasks;
    for (int k = 0; k < config.n_instances; ++k)
        for (ChannelKind c : channels) tasks.push_back({k, c});

    // One result slot per task keeps the merged record order independent of
    // worker scheduling.
    std::vector<std::vector<SweepRecord>> results(tasks.size());
    parallel_for(static_cast<int>(tasks.size()), effective_jobs(config), [&](int t) {
        const TaskKey& key = tasks[static_cast<std::size_t>(t)];
        SweepOptions opts;
        opts.instance_id = key.instance;
        opts.seed = config.instance_seed(key.instance);
        opts.variance_threshold = config.variance_threshold;
        const MaxCutInstance& inst = instances[key.instance];
        results[static_cast<std::size_t>(t)] =
            config.experiment == ExperimentKind::QaoaSweep
                ? noise_sweep(inst, key.channel, grid, opts)
                : thermal_sweep(inst, key.channel, grid, config.eta, opts);
    });

    std::vector<SweepRecord> records;
    for (const auto& part : results) records.insert(records.end(), part.begin(), part.end());
    persist(config, records, true, instances);
    return 0;
}

int run_drift(const ExperimentConfig& config) {
    if (config.records_path.empty())
        throw config_error("drift: --records pointing at a finished qaoa-sweep is required");
    const std::vector<SweepRecord> records = read_records_csv(config.records_path);

    // Regenerate the graphs from the seeds persisted with the records.
    int max_id = -1;
    for (const auto& r : records) max_id = std::max(max_id, r.instance_id);
    std::vector<MaxCutInstance> instances;
    instances.reserve(max_id + 1);
    for (int k = 0; k <= max_id; ++k) {
        const auto it = std::find_if(records.begin(), records.end(),
                                     [k](const SweepRecord& r) { return r.instance_id == k; });
        if (it == records.end()) throw config_error("drift: records are missing an instance id");
        instances.push_back(erdos_renyi(config.n_vertices, config.edge_prob, it->seed));
    }

    const std::vector<DriftPoint> points = drift_sweep(instances, records);
    const fs::path out(config.output_dir);
    fs::create_directories(out);
    std::ofstream csv(out / "drift.csv");
    csv << "channel,eps,mean_coherent_mismatch,instances\n";
    for (const auto& p : points)
        csv << to_string(p.channel) << ',' << format_double(p.eps) << ','
            << format_double(p.mean_mismatch) << ',' << p.instances << "\n";
    std::ofstream manifest(out / "manifest.txt");
    write_manifest(manifest, config);
    return 0;
}

int run_vd_check(const ExperimentConfig& config) {
    const int n = config.check_qubits;
    if (2 * n + 1 > limits::max_vd_register)
        throw resource_error("vd-check: register 2N+1 exceeds the supported size");
    Rng rng(derive_seed(config.master_seed, 0xDEC0DEULL));
    double worst = 0.0;
    for (int trial = 0; trial < config.check_trials; ++trial) {
        const DensityMatrix rho = random_density_matrix(n, rng);
        const PauliObservable obs = PauliObservable::single(random_pauli_word(n, rng));
        for (const double eps : {0.0, 0.05, 0.1}) {
            for (const ChannelKind kind : {ChannelKind::Dephasing, ChannelKind::Depolarizing}) {
                const NoiseModel model = NoiseModel::make(kind, eps);
                const double circuit = simulate_vd(rho, obs, model).mitigated;
                const double closed_form = noisy_mitigated_analytic(rho, obs, model);
                worst = std::max(worst, std::abs(circuit - closed_form));
            }
        }
    }
    std::cout << "vd-check: " << config.check_trials << " trials at N = " << n
              << ", max |circuit - closed form| = " << format_double(worst) << "\n";
    return worst <= 1e-10 ? 0 : 1;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::QaoaSweep: return "qaoa_sweep";
        case ExperimentKind::ThermalSweep: return "thermal_sweep";
        case ExperimentKind::Drift: return "drift";
        case ExperimentKind::VdCheck: return "vd_check";
    }
    return "unknown";
}

void ExperimentConfig::validate() const {
    if (n_instances < 1) throw config_error("n_instances must be >= 1");
    if (n_vertices < 2) throw config_error("n_vertices must be >= 2");
    if (edge_prob < 0.0 || edge_prob > 1.0) throw config_error("edge_prob must lie in [0, 1]");
    if (channel != "both" && channel != "dephasing" && channel != "depolarizing")
        throw config_error("channel must be dephasing, depolarizing or both");
    if (eps_points < 2) throw config_error("eps_points must be >= 2");
    if (!(eps_min >= 0.0) || !(eps_max > eps_min)) throw config_error("eps grid must ascend");
    const double eps_cap = channel == "depolarizing" ? 0.75 : 0.5;
    if (eps_max > eps_cap)
        throw config_error("eps_max exceeds the channel's complete-positivity bound");
    if (!(eta >= 0.0)) throw config_error("eta must be >= 0");
    if (!(variance_threshold > 0.0)) throw config_error("variance_threshold must be positive");
    // check_qubits against the register limit is enforced where the register
    // is built, surfacing as a resource error (exit 3) rather than exit 2.
    if (experiment == ExperimentKind::VdCheck && check_qubits < 1)
        throw config_error("check_qubits must be >= 1");
}

std::vector<double> ExperimentConfig::eps_grid() const {
    std::vector<double> grid(eps_points);
    for (int k = 0; k < eps_points; ++k)
        grid[k] = eps_min + (eps_max - eps_min) * k / (eps_points - 1);
    grid.front() = eps_min;
    grid.back() = eps_max;
    return grid;
}

std::vector<ChannelKind> ExperimentConfig::channels() const {
    if (channel == "dephasing") return {ChannelKind::Dephasing};
    if (channel == "depolarizing") return {ChannelKind::Depolarizing};
    return {ChannelKind::Dephasing, ChannelKind::Depolarizing};
}

std::uint64_t ExperimentConfig::instance_seed(int instance_id) const {
    return derive_seed(master_seed, kGraphStream + static_cast<std::uint64_t>(instance_id));
}

void load_config_file(const std::string& path, ExperimentConfig& config) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw config_error(path + ":" + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "experiment") {
                if (value == "qaoa_sweep") config.experiment = ExperimentKind::QaoaSweep;
                else if (value == "thermal_sweep") config.experiment = ExperimentKind::ThermalSweep;
                else if (value == "drift") config.experiment = ExperimentKind::Drift;
                else if (value == "vd_check") config.experiment = ExperimentKind::VdCheck;
                else throw config_error("unknown experiment '" + value + "'");
            } else if (key == "n_instances") config.n_instances = std::stoi(value);
            else if (key == "n_vertices") config.n_vertices = std::stoi(value);
            else if (key == "edge_prob") config.edge_prob = std::stod(value);
            else if (key == "channel") config.channel = value;
            else if (key == "eps_min") config.eps_min = std::stod(value);
            else if (key == "eps_max") config.eps_max = std::stod(value);
            else if (key == "eps_points") config.eps_points = std::stoi(value);
            else if (key == "eta") config.eta = std::stod(value);
            else if (key == "variance_threshold") config.variance_threshold = std::stod(value);
            else if (key == "master_seed") config.master_seed = std::stoull(value);
            else if (key == "output_dir") config.output_dir = value;
            else if (key == "jobs") config.jobs = std::stoi(value);
            else if (key == "check_qubits") config.check_qubits = std::stoi(value);
            else if (key == "check_trials") config.check_trials = std::stoi(value);
            else if (key == "records") config.records_path = value;
            else throw config_error("unknown config key '" + key + "'");
        } catch (const config_error&) {
            throw;
        } catch (const std::exception&) {
            throw config_error(path + ":" + std::to_string(lineno) + ": invalid value for " + key);
        }
    }
}

void write_manifest(std::ostream& out, const ExperimentConfig& config) {
    out << "# vdsim manifest (re-runnable via --config)\n";
    out << "# version = " << kVdsimVersion << ", records schema = " << kRecordsSchemaVersion
        << "\n";
    out << "experiment = " << to_string(config.experiment) << "\n";
    out << "n_instances = " << config.n_instances << "\n";
    out << "n_vertices = " << config.n_vertices << "\n";
    out << "edge_prob = " << format_double(config.edge_prob) << "\n";
    out << "channel = " << config.channel << "\n";
    out << "eps_min = " << format_double(config.eps_min) << "\n";
    out << "eps_max = " << format_double(config.eps_max) << "\n";
    out << "eps_points = " << config.eps_points << "\n";
    out << "eta = " << format_double(config.eta) << "\n";
    out << "variance_threshold = " << format_double(config.variance_threshold) << "\n";
    out << "master_seed = " << config.master_seed << "\n";
    out << "output_dir = " << config.output_dir << "\n";
    out << "jobs = " << config.jobs << "\n";
    if (config.experiment == ExperimentKind::VdCheck) {
        out << "check_qubits = " << config.check_qubits << "\n";
        out << "check_trials = " << config.check_trials << "\n";
    }
    if (!config.records_path.empty()) out << "records = " << config.records_path << "\n";
    out << "# instance seeds:";
    for (int k = 0; k < config.n_instances; ++k) out << ' ' << config.instance_seed(k);
    out << "\n";
}

int run(const ExperimentConfig& config) {
    try {
        config.validate();
        switch (config.experiment) {
            case ExperimentKind::QaoaSweep:
            case ExperimentKind::ThermalSweep:
                return run_sweep_experiment(config);
            case ExperimentKind::Drift:
                return run_drift(config);
            case ExperimentKind::VdCheck:
                return run_vd_check(config);
        }
        return 0;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace vd
