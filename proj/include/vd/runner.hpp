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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vd/records.hpp"

namespace vd {

inline constexpr const char* kVdsimVersion = "0.1.0";

enum class ExperimentKind { QaoaSweep, ThermalSweep, Drift, VdCheck };

std::string to_string(ExperimentKind kind);

/// Everything a reproduction run needs. Defaults follow the published
/// experiment shape: 30 ER(6, 0.5) instances, 21 error probabilities on
/// [0, 0.1] (thermal runs use [0, 0.25]), eta = 0.1 and a 1e-3 variance
/// threshold.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::QaoaSweep;
    int n_instances = 30;
    int n_vertices = 6;
    double edge_prob = 0.5;
    std::string channel = "both";  // dephasing | depolarizing | both
    double eps_min = 0.0;
    double eps_max = 0.1;
    int eps_points = 21;
    double eta = 0.1;
    double variance_threshold = 1e-3;
    std::uint64_t master_seed = 1;
    std::string output_dir = "out";
    int jobs = 0;  // 0 = number of hardware threads (capped by the memory guard)

    // vd-check settings
    int check_qubits = 3;
    int check_trials = 50;

    // drift input
    std::string records_path;

    void validate() const;
    std::vector<double> eps_grid() const;
    std::vector<ChannelKind> channels() const;
    /// Per-instance seed derived from the master seed.
    std::uint64_t instance_seed(int instance_id) const;
};

/// Flat key = value config file ('#' starts a comment). Unknown keys are
/// rejected. The emitted manifest uses the same format, so a manifest can be
/// passed back through --config to reproduce a run.
void load_config_file(const std::string& path, ExperimentConfig& config);
void write_manifest(std::ostream& out, const ExperimentConfig& config);

/// Execute the configured experiment and persist records.csv, aggregate.csv,
/// manifest.txt and the generated graphs (where applicable) under
/// config.output_dir. Returns a process exit status: 0 success, 2 config
/// error, 3 resource limit.
int run(const ExperimentConfig& config);

}  // namespace vd
