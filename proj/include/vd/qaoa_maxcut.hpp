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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vd/noise.hpp"
#include "vd/quantum_core.hpp"
#include "vd/records.hpp"

namespace vd {

/// A MaxCut problem: graph, diagonal Hamiltonian and brute-forced optimum.
struct MaxCutInstance {
    int n_vertices = 0;
    std::vector<std::pair<int, int>> edges;  ///< u < v, sorted lexicographically
    PauliObservable hamiltonian;             ///< -(1/2) sum (1 - Z_i Z_j)
    long long c_max = 0;                     ///< maximum cut value
    std::vector<std::uint64_t> ground_bitstrings;  ///< all optimal bitstrings, ascending

    MaxCutInstance() : hamiltonian(1) {}
};

/// -(1/2) sum_{(i,j) in E} (1 - Z_i Z_j); diagonal entry at bitstring b is
/// -cut(b).
PauliObservable maxcut_hamiltonian(int n_vertices, const std::vector<std::pair<int, int>>& edges);

/// Normalize/validate an edge list and brute-force the optimum.
MaxCutInstance make_instance(int n_vertices, std::vector<std::pair<int, int>> edges);

/// G(n, p): every unordered pair drawn independently. Edgeless samples are
/// rejected and redrawn; a degenerate edge probability that cannot produce an
/// edge is a contract error.
MaxCutInstance erdos_renyi(int n_vertices, double edge_prob, std::uint64_t seed);

/// Edge-list interchange: header "n_vertices m_edges", then one "u v" line
/// per edge.
void write_edgelist(const std::string& path, const MaxCutInstance& instance);
MaxCutInstance read_edgelist(const std::string& path);

/// Depth-p QAOA angles (p = 1 throughout the experiments).
struct QaoaParams {
    std::vector<double> alpha;  ///< cost angles, [0, pi] in the grid search
    std::vector<double> beta;   ///< mixer angles, [0, pi/2] in the grid search

    static QaoaParams p1(double alpha, double beta) { return {{alpha}, {beta}}; }
    int depth() const;
};

/// p = 1 circuit of Fig.-2 shape: (|+><+|)^N, then per edge ZZ(alpha) =
/// exp(-i alpha Z_j Z_k / 2) followed by the model channel at eps_two_qubit on
/// both touched qubits, then per qubit X(beta) = exp(-i beta X_j) followed by
/// a depolarizing channel at eps_single_qubit. The mixer channel is
/// depolarizing even in dephasing runs (Z errors do not commute with the
/// mixer, which unbiases the noise).
DensityMatrix qaoa_state(const MaxCutInstance& instance, const QaoaParams& params,
                         const std::optional<NoiseModel>& model);

/// Noiseless statevector of the same circuit (cheap grid-scan path).
PureState qaoa_statevector(const MaxCutInstance& instance, const QaoaParams& params);

/// C(alpha, beta) = Tr(H rho(alpha, beta)).
double cost(const MaxCutInstance& instance, const QaoaParams& params,
            const std::optional<NoiseModel>& model);

/// C_mitigated: the simulated distillation circuit applied to the QAOA output,
/// same noise model in both circuits.
double mitigated_cost(const MaxCutInstance& instance, const QaoaParams& params,
                      const NoiseModel& model);

enum class Objective { Cost, MitigatedCost };

struct OptimizeResult {
    QaoaParams params;
    double value = 0.0;
    bool polish_ok = true;  ///< polish converged and did not regress
    int evaluations = 0;
};

struct OptimizeOptions {
    int grid_alpha = 100;  ///< inclusive endpoints over [0, pi]
    int grid_beta = 100;   ///< inclusive endpoints over [0, pi/2]
    double polish_tol = 1e-8;
    int polish_max_evals = 500;
    double polish_step = 0.025;
    /// During optimization the mitigated objective is evaluated through the
    /// closed-form channel-adjoint route, which the acceptance suite pins to
    /// the simulated circuit at 1e-10 (far below polish_tol). Set to true to
    /// drive the polish through the circuit simulation itself.
    bool circuit_objective = false;
};

/// Grid scan plus derivative-free polish; a warm `initial` skips the grid.
OptimizeResult optimize(const MaxCutInstance& instance, const std::optional<NoiseModel>& model,
                        Objective objective, const std::optional<QaoaParams>& initial,
                        const OptimizeOptions& options = {});

struct SweepOptions {
    int instance_id = 0;
    std::uint64_t seed = 0;
    double variance_threshold = 1e-3;
};

/// Full per-instance noise sweep: optimize at eps = 0 once, then warm-start
/// the unmitigated and mitigated chains level by level. One record per eps.
std::vector<SweepRecord> noise_sweep(const MaxCutInstance& instance, ChannelKind kind,
                                     const std::vector<double>& eps_grid,
                                     const SweepOptions& options);

}  // namespace vd
