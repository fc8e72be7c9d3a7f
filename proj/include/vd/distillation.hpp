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
#include <vector>

#include "vd/noise.hpp"
#include "vd/quantum_core.hpp"

namespace vd {

/// Outcome of one simulated M=2 distillation circuit: the auxiliary-qubit
/// expectation kernels and their ratio.
struct VdCircuitResult {
    double numerator = 0.0;    ///< <X_aux O^(2)> on the circuit output
    double denominator = 0.0;  ///< <X_aux> on the circuit output
    double mitigated = 0.0;    ///< numerator / denominator
    std::optional<DensityMatrix> final_state;  ///< full (2N+1)-qubit state, on request
};

/// Tr(O rho^M) / Tr(rho^M) through the spectral decomposition.
double mitigated_expectation_power(const DensityMatrix& rho, const PauliObservable& obs, int power);

/// Tr(O^(2) S^(2) rho (x) rho) / Tr(S^(2) rho (x) rho) by explicit two-copy
/// operator construction. Agrees with the M=2 power route to 1e-10.
double mitigated_expectation_swap(const DensityMatrix& rho, const PauliObservable& obs);

/// Closed form for the noisy circuit: Tr(LambdaBar(O) rho^2) / Tr(rho^2),
/// i.e. the channel adjoint applied to the observable, then the M=2 power
/// formula. The circuit noise strength is model.eps_two_qubit.
double noisy_mitigated_analytic(const DensityMatrix& rho, const PauliObservable& obs,
                                const NoiseModel& model);

/// Explicit Schroedinger simulation of the noisy circuit: start from
/// |+><+| (x) rho (x) rho, then for each qubit i apply CSWAP_i (control =
/// auxiliary, targets = qubit i of each copy) followed by the single-qubit
/// channel on all three participating qubits. Returns the full (2N+1)-qubit
/// output state.
DensityMatrix build_vd_circuit_state(const DensityMatrix& rho, const NoiseModel& model);

/// Numerator/denominator/mitigated value of the simulated circuit. The
/// default path tracks only the auxiliary-coherence block and the two
/// aux-diagonal block diagonals of the register (the parts the measurement
/// reads), which quarters memory and time at N = 6; `keep_final_state`
/// switches to the full-state builder and attaches the output state. Both
/// paths apply the same gate/channel sequence and agree to machine precision.
VdCircuitResult simulate_vd(const DensityMatrix& rho, const PauliObservable& obs,
                            const NoiseModel& model, bool keep_final_state = false);

/// Order in which CSWAPs are applied (ascending by default; exposed so tests
/// can verify the documented order independence).
VdCircuitResult simulate_vd_with_order(const DensityMatrix& rho, const PauliObservable& obs,
                                       const NoiseModel& model,
                                       const std::vector<int>& cswap_order);

/// First and second moments of the circuit's measured observables, for the
/// sampling-variance layer. Requires a diagonal observable. x is the
/// auxiliary X-basis outcome and o = (O(b1) + O(b2)) / 2 the symmetrized
/// computational-basis readout of the two copies.
struct VdMoments {
    double numerator = 0.0;    ///< E[x o]
    double denominator = 0.0;  ///< E[x]
    double obs_first = 0.0;    ///< E[o]
    double obs_second = 0.0;   ///< E[o^2]
};
VdMoments vd_measurement_moments(const DensityMatrix& rho, const PauliObservable& obs,
                                 const NoiseModel& model);

/// Exact joint distribution of (x, b1, b2): the auxiliary X-basis outcome and
/// the two copies' computational-basis outcomes of the circuit output.
/// Requires a diagonal observable context (N <= 4).
class JointOutcomeDistribution {
  public:
    JointOutcomeDistribution(int copy_qubits, std::vector<double> probs);

    int copy_qubits() const { return copy_qubits_; }
    /// x_index 0 means outcome +1, 1 means outcome -1.
    double probability(int x_index, std::uint64_t b1, std::uint64_t b2) const;
    const std::vector<double>& table() const { return probs_; }
    std::size_t size() const { return probs_.size(); }
    /// Decode a flat table index into (x in {+1,-1}, b1, b2).
    void decode(std::size_t index, int& x_value, std::uint64_t& b1, std::uint64_t& b2) const;

  private:
    int copy_qubits_;
    std::vector<double> probs_;  // layout: (x_index << 2N) | (b1 << N) | b2
};

JointOutcomeDistribution joint_outcome_distribution(const DensityMatrix& rho,
                                                    const PauliObservable& obs,
                                                    const NoiseModel& model);

}  // namespace vd
