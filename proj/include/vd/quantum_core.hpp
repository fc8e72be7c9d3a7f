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

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vd/errors.hpp"
#include "vd/pauli.hpp"
#include "vd/rng.hpp"

namespace vd {

namespace tol {
inline constexpr double hermiticity = 1e-12;
inline constexpr double trace = 1e-10;
inline constexpr double psd = -1e-10;
inline constexpr double state_norm = 1e-12;
/// Eigenvalues closer than this are treated as one degenerate block.
inline constexpr double degeneracy_gap = 1e-9;
}  // namespace tol

/// Normalized pure state on N qubits; qubit 0 is the leftmost (most
/// significant) tensor factor.
class PureState {
  public:
    static PureState from_amplitudes(int n_qubits, Vector amplitudes);
    static PureState basis_state(int n_qubits, std::uint64_t index);
    /// |+>^N, the uniform superposition.
    static PureState uniform_plus(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    Eigen::Index dim() const { return amplitudes_.size(); }
    const Vector& amplitudes() const { return amplitudes_; }

  private:
    PureState(int n_qubits, Vector amplitudes)
        : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {}
    int n_qubits_ = 0;
    Vector amplitudes_;
};

/// Dense Hermitian, PSD, unit-trace density operator.
class DensityMatrix {
  public:
    /// Full validation: Hermiticity, unit trace and positive semidefiniteness
    /// (the PSD check eigendecomposes, O(d^3)).
    static DensityMatrix from_matrix(int n_qubits, Matrix m);

    /// Hermiticity and trace are still checked (O(d^2)); the PSD check is
    /// skipped. For outputs of maps that preserve positivity by construction
    /// (channels, unitaries, convex mixtures).
    static DensityMatrix unchecked(int n_qubits, Matrix m);

    static DensityMatrix pure(const PureState& psi);
    static DensityMatrix maximally_mixed(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    Eigen::Index dim() const { return matrix_.rows(); }
    const Matrix& matrix() const { return matrix_; }

    /// Tr(rho^2) as the squared Frobenius norm; O(d^2).
    double purity() const { return matrix_.squaredNorm(); }

  private:
    DensityMatrix(int n_qubits, Matrix m) : n_qubits_(n_qubits), matrix_(std::move(m)) {}
    int n_qubits_ = 0;
    Matrix matrix_;
};

/// Eigensystem of a density matrix, eigenvalues sorted descending.
/// Column k of `eigenvectors` belongs to eigenvalue k. Within degenerate
/// blocks the vectors are canonicalized: the largest-magnitude component of
/// each vector is made real positive and vectors are ordered by that
/// component's index, so repeated runs produce identical output.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Matrix eigenvectors;

    PureState dominant_eigenvector(int n_qubits) const;
    /// Gap lambda_1 - lambda_2 (0 for single-dimensional spectra).
    double dominant_gap() const;
};

/// Kronecker product; qubit 0 of the result is the leftmost factor of `a`.
/// Throws resource_error when the product exceeds limits::max_tensor_qubits.
Matrix tensor_product(const Matrix& a, const Matrix& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

/// Tr(O rho). The imaginary residue must stay below 1e-10 (Hermitian inputs).
double expectation(const DensityMatrix& rho, const PauliObservable& obs);

/// rho^M through the spectral decomposition; negative eigenvalues are clamped
/// to zero before powering.
Matrix matrix_power(const DensityMatrix& rho, int power);

SpectralDecomposition spectral_decompose(const DensityMatrix& rho);

/// The M=2 cyclic shift S^(2) on 2N qubits: S (|a> (x) |b>) = |b> (x) |a>.
/// Equals the tensor product of the N per-qubit SWAPs.
Matrix cyclic_shift_m2(int n_qubits);

/// (O (x) I + I (x) O) / 2 on 2N qubits; commutes with the cyclic shift.
Matrix symmetrized_observable_m2(const PauliObservable& obs);

/// |<a|b>|^2, global-phase invariant.
double fidelity(const PureState& a, const PureState& b);

/// Embed a single-qubit operator into an n-qubit register (dense).
Matrix embed_one_qubit(const Eigen::Matrix2cd& op, int qubit, int n_qubits);

/// Random full-rank density matrix from the Ginibre ensemble.
DensityMatrix random_density_matrix(int n_qubits, Rng& rng);
PureState random_pure_state(int n_qubits, Rng& rng);
/// Uniformly random Pauli word; `require_non_identity` rejects the all-I word.
std::string random_pauli_word(int n_qubits, Rng& rng, bool require_non_identity = true);

// ---------------------------------------------------------------------------
// Dense register kernels. All act on raw matrices in place, O(d^2) per call,
// with qubit 0 as the leftmost (most significant) factor. Shared by the noise
// channels, the distillation circuit and the QAOA circuit.

namespace kernels {

inline std::int64_t qubit_mask(int n_qubits, int qubit) {
    return std::int64_t(1) << (n_qubits - 1 - qubit);
}

/// m -> P m P for a single-qubit Pauli P in {X, Y, Z}.
void conjugate_pauli(Matrix& m, int n_qubits, int qubit, char pauli);

/// m -> (1-eps) m + eps/3 (XmX + YmY + ZmZ) on one qubit, fused into a single
/// pass. Works on any operator block, not just states.
template <class Mat>
void depolarize(Mat& m, int n_qubits, int qubit, double eps);

/// m -> (1-eps) m + eps ZmZ on one qubit (off-diagonal entries scale by 1-2eps).
template <class Mat>
void dephase(Mat& m, int n_qubits, int qubit, double eps);

/// m -> U m U^dagger for a single-qubit unitary U.
void conjugate_single_qubit_unitary(Matrix& m, int n_qubits, int qubit,
                                    const Eigen::Matrix2cd& u);

/// m -> D m D^dagger for a diagonal unitary given by its phases.
void conjugate_diagonal_unitary(Matrix& m, const Vector& phases);

/// m -> SWAP_{qa,qb} m SWAP_{qa,qb} (index permutation, in place).
void conjugate_swap(Matrix& m, int n_qubits, int qa, int qb);

/// m -> SWAP_{qa,qb} * m (left multiplication only; row permutation).
template <class Mat>
void swap_rows(Mat& m, int n_qubits, int qa, int qb);

/// m -> CSWAP m CSWAP on a (2N+1)-qubit register: control = qubit 0, targets
/// = qubit `target_index` of each of the two N-qubit copies (1-based).
void conjugate_cswap(Matrix& m, int copy_qubits, int target_index);

}  // namespace kernels

}  // namespace vd
