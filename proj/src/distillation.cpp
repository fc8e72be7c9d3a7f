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

#include "vd/distillation.hpp"

#include <cmath>
#include <numeric>

#include <unsupported/Eigen/KroneckerProduct>

namespace vd {

namespace {

using cd = std::complex<double>;

constexpr double kPurityFloor = 1e-14;
constexpr double kDenominatorFloor = 1e-12;

void check_obs_matches(const DensityMatrix& rho, const PauliObservable& obs, const char* what) {
    if (obs.n_qubits() != rho.n_qubits())
        throw contract_error(std::string(what) + ": observable/state qubit count mismatch");
}

void check_register(const DensityMatrix& rho, const char* what) {
    if (2 * rho.n_qubits() + 1 > limits::max_vd_register)
        throw resource_error(std::string(what) + ": register 2N+1 = " +
                             std::to_string(2 * rho.n_qubits() + 1) + " exceeds the " +
                             std::to_string(limits::max_vd_register) + "-qubit limit");
}

std::vector<int> ascending_order(int n) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 1);
    return order;
}

// Aux-block view of the (2N+1)-qubit register state. After every gate in the
// circuit the four auxiliary blocks evolve independently:
//   - CSWAP_i maps rho10 -> SWAP_i rho10 and permutes diag(rho11),
//   - channels on copy qubits act identically inside each block,
//   - channels on the auxiliary qubit scale rho10 by the Pauli-X attenuation
//     and (for depolarizing) mix the two diagonal blocks elementwise.
// The measurement reads only rho10 (X_aux terms) and the two block diagonals
// (copy readout moments), so the other content of rho00/rho11 is never needed.
struct AuxBlocks {
    int copy_qubits = 0;
    RowMatrix coherence;    // <1| rho |0> block on 2N qubits
    Eigen::VectorXd diag0;  // diag(<0| rho |0>)
    Eigen::VectorXd diag1;  // diag(<1| rho |1>)
};

void apply_copy_channel_to_diag(Eigen::VectorXd& diag, int n_qubits, int qubit, ChannelKind kind,
                                double eps) {
    if (kind == ChannelKind::Dephasing) return;  // Z noise never moves populations
    const std::int64_t d = diag.size();
    const std::int64_t mask = kernels::qubit_mask(n_qubits, qubit);
    const double keep = 1.0 - 2.0 * eps / 3.0;
    const double mix = 2.0 * eps / 3.0;
    for (std::int64_t b = 0; b < d; ++b) {
        if ((b & mask) != 0) continue;
        const double a0 = diag[b];
        const double a1 = diag[b | mask];
        diag[b] = keep * a0 + mix * a1;
        diag[b | mask] = keep * a1 + mix * a0;
    }
}

void apply_copy_channel(AuxBlocks& blocks, int qubit, ChannelKind kind, double eps) {
    const int n2 = 2 * blocks.copy_qubits;
    if (kind == ChannelKind::Depolarizing)
        kernels::depolarize(blocks.coherence, n2, qubit, eps);
    else
        kernels::dephase(blocks.coherence, n2, qubit, eps);
    apply_copy_channel_to_diag(blocks.diag0, n2, qubit, kind, eps);
    apply_copy_channel_to_diag(blocks.diag1, n2, qubit, kind, eps);
}

void apply_aux_channel(AuxBlocks& blocks, ChannelKind kind, double eps) {
    // Off-diagonal aux blocks scale by the channel's Pauli-X factor.
    const double x_factor =
        kind == ChannelKind::Depolarizing ? 1.0 - 4.0 * eps / 3.0 : 1.0 - 2.0 * eps;
    blocks.coherence *= x_factor;
    if (kind == ChannelKind::Depolarizing) {
        const double keep = 1.0 - 2.0 * eps / 3.0;
        const double mix = 2.0 * eps / 3.0;
        const Eigen::VectorXd d0 = blocks.diag0;
        blocks.diag0 = keep * d0 + mix * blocks.diag1;
        blocks.diag1 = keep * blocks.diag1 + mix * d0;
    }
}

AuxBlocks run_circuit_blocks(const DensityMatrix& rho, const NoiseModel& model,
                             const std::vector<int>& order) {
    const int n = rho.n_qubits();
    const double eps = model.eps_two_qubit;

    AuxBlocks blocks;
    blocks.copy_qubits = n;
    blocks.coherence = 0.5 * Eigen::kroneckerProduct(rho.matrix(), rho.matrix());
    blocks.diag0 = blocks.coherence.diagonal().real();  // = diag(rho (x) rho) / 2
    blocks.diag1 = blocks.diag0;

    for (int i : order) {
        if (i < 1 || i > n) throw contract_error("simulate_vd: CSWAP index out of range");
        // CSWAP_i: left-multiply SWAP on the coherence block, conjugate rho11.
        kernels::swap_rows(blocks.coherence, 2 * n, i - 1, n + i - 1);
        const std::int64_t ma = kernels::qubit_mask(2 * n, i - 1);
        const std::int64_t mb = kernels::qubit_mask(2 * n, n + i - 1);
        for (std::int64_t b = 0; b < blocks.diag1.size(); ++b)
            if ((b & ma) == 0 && (b & mb) != 0)
                std::swap(blocks.diag1[b], blocks.diag1[b ^ ma ^ mb]);
        // One channel instance on each of the three qubits the gate touched.
        apply_aux_channel(blocks, model.kind, eps);
        apply_copy_channel(blocks, i - 1, model.kind, eps);
        apply_copy_channel(blocks, n + i - 1, model.kind, eps);
    }
    return blocks;
}

// Tr(O^(2) B) for a block B on 2N qubits, O given on N qubits.
cd symmetrized_block_trace(const PauliObservable& obs, const RowMatrix& block) {
    const int n = obs.n_qubits();
    const std::string id(n, 'I');
    cd sum = 0.0;
    for (const auto& t : obs.terms()) {
        sum += 0.5 * t.coefficient * pauli_trace(t.word + id, block);
        sum += 0.5 * t.coefficient * pauli_trace(id + t.word, block);
    }
    return sum;
}

VdCircuitResult result_from_blocks(const AuxBlocks& blocks, const PauliObservable& obs) {
    VdCircuitResult res;
    // <X_aux (.)> picks up rho01 + rho10 = 2 Re rho10 for Hermitian readouts.
    res.denominator = 2.0 * blocks.coherence.trace().real();
    res.numerator = 2.0 * symmetrized_block_trace(obs, blocks.coherence).real();
    if (std::abs(res.denominator) <= kDenominatorFloor)
        throw degenerate_error("simulate_vd: denominator vanished");
    res.mitigated = res.numerator / res.denominator;
    return res;
}

}  // namespace

double mitigated_expectation_power(const DensityMatrix& rho, const PauliObservable& obs,
                                   int power) {
    check_obs_matches(rho, obs, "mitigated_expectation_power");
    if (power < 1) throw contract_error("mitigated_expectation_power: power must be >= 1");
    const Matrix rho_m = matrix_power(rho, power);
    const double den = rho_m.trace().real();
    if (den <= kPurityFloor)
        throw degenerate_error("mitigated_expectation_power: Tr(rho^M) vanished");
    cd num = 0.0;
    for (const auto& t : obs.terms()) num += t.coefficient * pauli_trace(t.word, rho_m);
    return num.real() / den;
}

double mitigated_expectation_swap(const DensityMatrix& rho, const PauliObservable& obs) {
    check_obs_matches(rho, obs, "mitigated_expectation_swap");
    const int n = rho.n_qubits();
    if (2 * n > limits::max_tensor_qubits)
        throw resource_error("mitigated_expectation_swap: two-copy register too large");
    const Matrix s = cyclic_shift_m2(n);
    const Matrix o2 = symmetrized_observable_m2(obs);
    const Matrix two_copies = tensor_product(rho.matrix(), rho.matrix());
    const Matrix shifted = s * two_copies;
    const double den = shifted.trace().real();
    if (den <= kPurityFloor) throw degenerate_error("mitigated_expectation_swap: purity vanished");
    // Tr(O2 * shifted) without a second matrix product.
    const double num = o2.transpose().cwiseProduct(shifted).sum().real();
    return num / den;
}

double noisy_mitigated_analytic(const DensityMatrix& rho, const PauliObservable& obs,
                                const NoiseModel& model) {
    check_obs_matches(rho, obs, "noisy_mitigated_analytic");
    if (rho.purity() <= kPurityFloor)
        throw degenerate_error("noisy_mitigated_analytic: purity vanished");
    const PauliObservable attenuated =
        channel_adjoint_on_observable(obs, model, model.eps_two_qubit);
    return mitigated_expectation_power(rho, attenuated, 2);
}

DensityMatrix build_vd_circuit_state(const DensityMatrix& rho, const NoiseModel& model) {
    check_register(rho, "build_vd_circuit_state");
    const int n = rho.n_qubits();
    const int total = 2 * n + 1;
    const double eps = model.eps_two_qubit;

    Matrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    Matrix state =
        Eigen::kroneckerProduct(plus, Matrix(Eigen::kroneckerProduct(rho.matrix(), rho.matrix())));

    for (int i = 1; i <= n; ++i) {
        kernels::conjugate_cswap(state, n, i);
        for (int q : {0, i, n + i}) {
            if (model.kind == ChannelKind::Depolarizing)
                kernels::depolarize(state, total, q, eps);
            else
                kernels::dephase(state, total, q, eps);
        }
    }
    return DensityMatrix::unchecked(total, std::move(state));
}

VdCircuitResult simulate_vd(const DensityMatrix& rho, const PauliObservable& obs,
                            const NoiseModel& model, bool keep_final_state) {
    check_obs_matches(rho, obs, "simulate_vd");
    check_register(rho, "simulate_vd");
    if (!keep_final_state) {
        const AuxBlocks blocks = run_circuit_blocks(rho, model, ascending_order(rho.n_qubits()));
        return result_from_blocks(blocks, obs);
    }
    const int n = rho.n_qubits();
    DensityMatrix out = build_vd_circuit_state(rho, model);
    const std::string id(n, 'I');
    VdCircuitResult res;
    res.denominator = pauli_trace("X" + id + id, out.matrix()).real();
    cd num = 0.0;
    for (const auto& t : obs.terms()) {
        num += 0.5 * t.coefficient * pauli_trace("X" + t.word + id, out.matrix());
        num += 0.5 * t.coefficient * pauli_trace("X" + id + t.word, out.matrix());
    }
    res.numerator = num.real();
    if (std::abs(res.denominator) <= kDenominatorFloor)
        throw degenerate_error("simulate_vd: denominator vanished");
    res.mitigated = res.numerator / res.denominator;
    res.final_state = std::move(out);
    return res;
}

VdCircuitResult simulate_vd_with_order(const DensityMatrix& rho, const PauliObservable& obs,
                                       const NoiseModel& model,
                                       const std::vector<int>& cswap_order) {
    check_obs_matches(rho, obs, "simulate_vd");
    check_register(rho, "simulate_vd");
    if (static_cast<int>(cswap_order.size()) != rho.n_qubits())
        throw contract_error("simulate_vd: CSWAP order must list every qubit once");
    const AuxBlocks blocks = run_circuit_blocks(rho, model, cswap_order);
    return result_from_blocks(blocks, obs);
}

VdMoments vd_measurement_moments(const DensityMatrix& rho, const PauliObservable& obs,
                                 const NoiseModel& model) {
    check_obs_matches(rho, obs, "vd_measurement_moments");
    check_register(rho, "vd_measurement_moments");
    if (!obs.is_diagonal())
        throw contract_error("vd_measurement_moments: unsupported observable (must be diagonal)");

    const AuxBlocks blocks = run_circuit_blocks(rho, model, ascending_order(rho.n_qubits()));
    const VdCircuitResult core = result_from_blocks(blocks, obs);

    const Eigen::VectorXd h = obs.diagonal();
    const std::int64_t dn = h.size();
    VdMoments m;
    m.numerator = core.numerator;
    m.denominator = core.denominator;
    for (std::int64_t b1 = 0; b1 < dn; ++b1)
        for (std::int64_t b2 = 0; b2 < dn; ++b2) {
            const double o = 0.5 * (h[b1] + h[b2]);
            const double p = blocks.diag0[(b1 << rho.n_qubits()) | b2] +
                             blocks.diag1[(b1 << rho.n_qubits()) | b2];
            m.obs_first += o * p;
            m.obs_second += o * o * p;
        }
    return m;
}

JointOutcomeDistribution::JointOutcomeDistribution(int copy_qubits, std::vector<double> probs)
    : copy_qubits_(copy_qubits), probs_(std::move(probs)) {
    const std::size_t expected = std::size_t(2) << (2 * copy_qubits);
    if (probs_.size() != expected)
        throw contract_error("JointOutcomeDistribution: table size mismatch");
}

double JointOutcomeDistribution::probability(int x_index, std::uint64_t b1,
                                             std::uint64_t b2) const {
    const int n = copy_qubits_;
    return probs_.at((std::size_t(x_index) << (2 * n)) | (b1 << n) | b2);
}

void JointOutcomeDistribution::decode(std::size_t index, int& x_value, std::uint64_t& b1,
                                      std::uint64_t& b2) const {
    const int n = copy_qubits_;
    const std::uint64_t mask = (std::uint64_t(1) << n) - 1;
    x_value = (index >> (2 * n)) ? -1 : +1;
    b1 = (index >> n) & mask;
    b2 = index & mask;
}

JointOutcomeDistribution joint_outcome_distribution(const DensityMatrix& rho,
                                                    const PauliObservable& obs,
                                                    const NoiseModel& model) {
    check_obs_matches(rho, obs, "joint_outcome_distribution");
    if (!obs.is_diagonal())
        throw contract_error("joint_outcome_distribution: unsupported observable (must be diagonal)");
    const int n = rho.n_qubits();
    if (n > 4) throw resource_error("joint_outcome_distribution: N <= 4 required");

    const AuxBlocks blocks = run_circuit_blocks(rho, model, ascending_order(n));
    const std::int64_t d2 = std::int64_t(1) << (2 * n);
    std::vector<double> probs(2 * d2, 0.0);
    double sum = 0.0;
    for (std::int64_t b = 0; b < d2; ++b) {
        // <x,b|rho|x,b> = (diag0 + diag1 + 2 x Re rho10) / 2 at basis index b.
        const double base = 0.5 * (blocks.diag0[b] + blocks.diag1[b]);
        const double cross = blocks.coherence(b, b).real();
        for (int xi = 0; xi < 2; ++xi) {
            double p = base + (xi == 0 ? cross : -cross);
            if (p < 0.0) {
                if (p < -1e-10) throw degenerate_error("joint_outcome_distribution: negative probability");
                p = 0.0;
            }
            probs[(std::size_t(xi) << (2 * n)) | b] = p;
            sum += p;
        }
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw degenerate_error("joint_outcome_distribution: probabilities do not sum to one");
    return JointOutcomeDistribution(n, std::move(probs));
}

}  // namespace vd
