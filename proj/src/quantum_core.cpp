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

#include "vd/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <unsupported/Eigen/KroneckerProduct>

namespace vd {

namespace {

using cd = std::complex<double>;

int qubits_of_dim(Eigen::Index d, const char* what) {
    if (d < 1 || (d & (d - 1)) != 0)
        throw contract_error(std::string(what) + ": dimension is not a power of two");
    int n = 0;
    while ((Eigen::Index(1) << n) < d) ++n;
    return n;
}

void check_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) throw contract_error(std::string(what) + ": operator is not square");
}

void check_hermitian_trace(const Matrix& m, const char* what) {
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol::hermiticity)
        throw contract_error(std::string(what) + ": not Hermitian (residual " + std::to_string(herm) + ")");
    const cd tr = m.trace();
    if (std::abs(tr - cd(1.0, 0.0)) > tol::trace)
        throw contract_error(std::string(what) + ": trace differs from one");
}

}  // namespace

// --------------------------------------------------------------------------- PureState

PureState PureState::from_amplitudes(int n_qubits, Vector amplitudes) {
    if (n_qubits < 1) throw contract_error("PureState: need at least one qubit");
    if (amplitudes.size() != (Eigen::Index(1) << n_qubits))
        throw contract_error("PureState: amplitude count does not match qubit count");
    if (std::abs(amplitudes.norm() - 1.0) > tol::state_norm)
        throw contract_error("PureState: amplitudes are not normalized");
    return PureState(n_qubits, std::move(amplitudes));
}

PureState PureState::basis_state(int n_qubits, std::uint64_t index) {
    const Eigen::Index d = Eigen::Index(1) << n_qubits;
    if (static_cast<Eigen::Index>(index) >= d) throw contract_error("basis_state: index out of range");
    Vector v = Vector::Zero(d);
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return PureState(n_qubits, std::move(v));
}

PureState PureState::uniform_plus(int n_qubits) {
    const Eigen::Index d = Eigen::Index(1) << n_qubits;
    Vector v = Vector::Constant(d, cd(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
    return PureState(n_qubits, std::move(v));
}

// --------------------------------------------------------------------------- DensityMatrix

DensityMatrix DensityMatrix::from_matrix(int n_qubits, Matrix m) {
    check_square(m, "DensityMatrix");
    if (m.rows() != (Eigen::Index(1) << n_qubits))
        throw contract_error("DensityMatrix: dimension does not match qubit count");
    check_hermitian_trace(m, "DensityMatrix");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < tol::psd)
        throw contract_error("DensityMatrix: not positive semidefinite (min eigenvalue " +
                             std::to_string(es.eigenvalues().minCoeff()) + ")");
    return DensityMatrix(n_qubits, std::move(m));
}

DensityMatrix DensityMatrix::unchecked(int n_qubits, Matrix m) {
    check_square(m, "DensityMatrix");
    if (m.rows() != (Eigen::Index(1) << n_qubits))
        throw contract_error("DensityMatrix: dimension does not match qubit count");
    check_hermitian_trace(m, "DensityMatrix");
    return DensityMatrix(n_qubits, std::move(m));
}

DensityMatrix DensityMatrix::pure(const PureState& psi) {
    Matrix m = psi.amplitudes() * psi.amplitudes().adjoint();
    return DensityMatrix(psi.n_qubits(), std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
    const Eigen::Index d = Eigen::Index(1) << n_qubits;
    return DensityMatrix(n_qubits, Matrix::Identity(d, d) / static_cast<double>(d));
}

// --------------------------------------------------------------------------- operators

Matrix tensor_product(const Matrix& a, const Matrix& b) {
    check_square(a, "tensor_product");
    check_square(b, "tensor_product");
    const int na = qubits_of_dim(a.rows(), "tensor_product");
    const int nb = qubits_of_dim(b.rows(), "tensor_product");
    if (na + nb > limits::max_tensor_qubits)
        throw resource_error("tensor_product: " + std::to_string(na + nb) + " qubits exceed the " +
                             std::to_string(limits::max_tensor_qubits) + "-qubit limit");
    return Eigen::kroneckerProduct(a, b);
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix::unchecked(a.n_qubits() + b.n_qubits(),
                                    tensor_product(a.matrix(), b.matrix()));
}

double expectation(const DensityMatrix& rho, const PauliObservable& obs) {
    if (obs.n_qubits() != rho.n_qubits())
        throw contract_error("expectation: observable acts on " + std::to_string(obs.n_qubits()) +
                             " qubits, state has " + std::to_string(rho.n_qubits()));
    cd sum = 0.0;
    for (const auto& t : obs.terms()) sum += t.coefficient * pauli_trace(t.word, rho.matrix());
    if (std::abs(sum.imag()) > 1e-10)
        throw contract_error("expectation: imaginary residue exceeds tolerance");
    return sum.real();
}

SpectralDecomposition spectral_decompose(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
    if (es.info() != Eigen::Success) throw degenerate_error("spectral_decompose: solver failed");

    const Eigen::Index d = rho.dim();
    SpectralDecomposition sd;
    sd.eigenvalues.resize(d);
    sd.eigenvectors.resize(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        sd.eigenvalues[k] = es.eigenvalues()[d - 1 - k];
        sd.eigenvectors.col(k) = es.eigenvectors().col(d - 1 - k);
    }

    // Numerical noise below zero is clamped; renormalize only on real drift.
    sd.eigenvalues = sd.eigenvalues.cwiseMax(0.0);
    const double sum = sd.eigenvalues.sum();
    if (sum > 0.0 && std::abs(sum - 1.0) > tol::trace) sd.eigenvalues /= sum;

    // Canonical phase: the largest-magnitude component (first on ties) of each
    // vector is made real positive.
    std::vector<Eigen::Index> anchor(d);
    for (Eigen::Index k = 0; k < d; ++k) {
        auto col = sd.eigenvectors.col(k);
        Eigen::Index best = 0;
        double best_mag = std::abs(col[0]);
        for (Eigen::Index i = 1; i < d; ++i) {
            const double mag = std::abs(col[i]);
            if (mag > best_mag) {
                best_mag = mag;
                best = i;
            }
        }
        anchor[k] = best;
        if (best_mag > 0.0) col *= std::conj(col[best]) / best_mag;
    }

    // Within a degenerate block the solver's ordering is arbitrary; order by
    // anchor index for determinism.
    Eigen::Index block_start = 0;
    while (block_start < d) {
        Eigen::Index block_end = block_start + 1;
        while (block_end < d &&
               sd.eigenvalues[block_end - 1] - sd.eigenvalues[block_end] <= tol::degeneracy_gap)
            ++block_end;
        if (block_end - block_start > 1) {
            std::vector<Eigen::Index> order(block_end - block_start);
            std::iota(order.begin(), order.end(), block_start);
            std::stable_sort(order.begin(), order.end(),
                             [&](Eigen::Index a, Eigen::Index b) { return anchor[a] < anchor[b]; });
            Matrix perm(d, block_end - block_start);
            for (Eigen::Index k = 0; k < block_end - block_start; ++k)
                perm.col(k) = sd.eigenvectors.col(order[k]);
            sd.eigenvectors.middleCols(block_start, block_end - block_start) = perm;
            std::vector<Eigen::Index> new_anchor(block_end - block_start);
            for (Eigen::Index k = 0; k < block_end - block_start; ++k)
                new_anchor[k] = anchor[order[k]];
            for (Eigen::Index k = 0; k < block_end - block_start; ++k)
                anchor[block_start + k] = new_anchor[k];
        }
        block_start = block_end;
    }
    return sd;
}

PureState SpectralDecomposition::dominant_eigenvector(int n_qubits) const {
    return PureState::from_amplitudes(n_qubits, eigenvectors.col(0));
}

double SpectralDecomposition::dominant_gap() const {
    return eigenvalues.size() > 1 ? eigenvalues[0] - eigenvalues[1] : 0.0;
}

Matrix matrix_power(const DensityMatrix& rho, int power) {
    if (power < 1) throw contract_error("matrix_power: power must be >= 1");
    const SpectralDecomposition sd = spectral_decompose(rho);
    Eigen::VectorXd lam = sd.eigenvalues;
    for (Eigen::Index k = 0; k < lam.size(); ++k) lam[k] = std::pow(lam[k], power);
    return sd.eigenvectors * lam.asDiagonal() * sd.eigenvectors.adjoint();
}

Matrix cyclic_shift_m2(int n_qubits) {
    if (n_qubits < 1) throw contract_error("cyclic_shift_m2: need at least one qubit");
    if (2 * n_qubits > limits::max_tensor_qubits)
        throw resource_error("cyclic_shift_m2: register too large");
    const std::int64_t dn = std::int64_t(1) << n_qubits;
    const std::int64_t d = dn * dn;
    Matrix s = Matrix::Zero(d, d);
    for (std::int64_t i = 0; i < d; ++i) {
        const std::int64_t b1 = i >> n_qubits;
        const std::int64_t b2 = i & (dn - 1);
        s((b2 << n_qubits) | b1, i) = 1.0;
    }
    return s;
}

Matrix symmetrized_observable_m2(const PauliObservable& obs) {
    const int n = obs.n_qubits();
    if (2 * n > limits::max_tensor_qubits)
        throw resource_error("symmetrized_observable_m2: register too large");
    const std::string id(n, 'I');
    PauliObservable ext(2 * n);
    for (const auto& t : obs.terms()) {
        ext.add_term(0.5 * t.coefficient, t.word + id);
        ext.add_term(0.5 * t.coefficient, id + t.word);
    }
    return ext.to_matrix();
}

double fidelity(const PureState& a, const PureState& b) {
    if (a.dim() != b.dim()) throw contract_error("fidelity: dimension mismatch");
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

Matrix embed_one_qubit(const Eigen::Matrix2cd& op, int qubit, int n_qubits) {
    if (qubit < 0 || qubit >= n_qubits) throw contract_error("embed_one_qubit: qubit out of range");
    Matrix out = Matrix::Identity(1, 1);
    for (int q = 0; q < n_qubits; ++q) {
        const Matrix factor = (q == qubit) ? Matrix(op) : Matrix(Matrix::Identity(2, 2));
        out = Matrix(Eigen::kroneckerProduct(out, factor));
    }
    return out;
}

// --------------------------------------------------------------------------- sampling

DensityMatrix random_density_matrix(int n_qubits, Rng& rng) {
    const Eigen::Index d = Eigen::Index(1) << n_qubits;
    Matrix a(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) a(i, j) = cd(rng.normal(), rng.normal());
    Matrix rho = a * a.adjoint();
    rho = 0.5 * (rho + rho.adjoint().eval());
    rho /= rho.trace().real();
    return DensityMatrix::from_matrix(n_qubits, std::move(rho));
}

PureState random_pure_state(int n_qubits, Rng& rng) {
    const Eigen::Index d = Eigen::Index(1) << n_qubits;
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = cd(rng.normal(), rng.normal());
    v /= v.norm();
    return PureState::from_amplitudes(n_qubits, std::move(v));
}

std::string random_pauli_word(int n_qubits, Rng& rng, bool require_non_identity) {
    static const char letters[4] = {'I', 'X', 'Y', 'Z'};
    std::string word(n_qubits, 'I');
    do {
        for (int q = 0; q < n_qubits; ++q) word[q] = letters[rng.uniform_int(4)];
    } while (require_non_identity && word == std::string(n_qubits, 'I'));
    return word;
}

// --------------------------------------------------------------------------- kernels

namespace kernels {

template <class Mat>
void depolarize(Mat& m, int n_qubits, int qubit, double eps) {
    const std::int64_t d = m.rows();
    const std::int64_t mask = qubit_mask(n_qubits, qubit);
    const double keep = 1.0 - 2.0 * eps / 3.0;
    const double mix = 2.0 * eps / 3.0;
    const double off = 1.0 - 4.0 * eps / 3.0;
    constexpr bool row_major = Mat::IsRowMajor;
    // Single fused pass over (1-eps) m + eps/3 (XmX + YmY + ZmZ):
    // entries with equal qubit bits pair with their double-flip partner,
    // entries with differing bits scale by (1 - 4 eps / 3).
#pragma omp parallel for schedule(static) if (d >= 512)
    for (std::int64_t o = 0; o < d; ++o) {
        for (std::int64_t in = 0; in < d; ++in) {
            const std::int64_t i = row_major ? o : in;
            const std::int64_t j = row_major ? in : o;
            const bool bi = (i & mask) != 0;
            const bool bj = (j & mask) != 0;
            if (bi != bj) {
                m(i, j) *= off;
            } else if (!bi) {
                const cd a = m(i, j);
                const cd b = m(i | mask, j | mask);
                m(i, j) = keep * a + mix * b;
                m(i | mask, j | mask) = keep * b + mix * a;
            }
        }
    }
}

template <class Mat>
void dephase(Mat& m, int n_qubits, int qubit, double eps) {
    const std::int64_t d = m.rows();
    const std::int64_t mask = qubit_mask(n_qubits, qubit);
    const double off = 1.0 - 2.0 * eps;
    constexpr bool row_major = Mat::IsRowMajor;
#pragma omp parallel for schedule(static) if (d >= 512)
    for (std::int64_t o = 0; o < d; ++o) {
        for (std::int64_t in = 0; in < d; ++in) {
            const std::int64_t i = row_major ? o : in;
            const std::int64_t j = row_major ? in : o;
            if (((i ^ j) & mask) != 0) m(i, j) *= off;
        }
    }
}

template void depolarize<Matrix>(Matrix&, int, int, double);
template void depolarize<RowMatrix>(RowMatrix&, int, int, double);
template void dephase<Matrix>(Matrix&, int, int, double);
template void dephase<RowMatrix>(RowMatrix&, int, int, double);

void conjugate_single_qubit_unitary(Matrix& m, int n_qubits, int qubit,
                                    const Eigen::Matrix2cd& u) {
    const std::int64_t d = m.rows();
    const std::int64_t mask = qubit_mask(n_qubits, qubit);
    const cd u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    // Left-multiply U.
    for (std::int64_t j = 0; j < d; ++j)
        for (std::int64_t i = 0; i < d; ++i) {
            if ((i & mask) != 0) continue;
            const cd a = m(i, j);
            const cd b = m(i | mask, j);
            m(i, j) = u00 * a + u01 * b;
            m(i | mask, j) = u10 * a + u11 * b;
        }
    // Right-multiply U^dagger.
    for (std::int64_t j = 0; j < d; ++j) {
        if ((j & mask) != 0) continue;
        for (std::int64_t i = 0; i < d; ++i) {
            const cd a = m(i, j);
            const cd b = m(i, j | mask);
            m(i, j) = a * std::conj(u00) + b * std::conj(u01);
            m(i, j | mask) = a * std::conj(u10) + b * std::conj(u11);
        }
    }
}

void conjugate_diagonal_unitary(Matrix& m, const Vector& phases) {
    const std::int64_t d = m.rows();
    if (phases.size() != d) throw contract_error("conjugate_diagonal_unitary: size mismatch");
    for (std::int64_t j = 0; j < d; ++j)
        for (std::int64_t i = 0; i < d; ++i) m(i, j) *= phases[i] * std::conj(phases[j]);
}

namespace {

// In-place rho -> P rho P for an involutive index permutation P. Each entry
// pair is swapped exactly once by the member with the smaller linear index.
template <class Sigma>
void conjugate_index_permutation(Matrix& m, const Sigma& sigma) {
    const std::int64_t d = m.rows();
#pragma omp parallel for schedule(static) if (d >= 512)
    for (std::int64_t j = 0; j < d; ++j) {
        const std::int64_t sj = sigma(j);
        for (std::int64_t i = 0; i < d; ++i) {
            const std::int64_t si = sigma(i);
            if (sj > j || (sj == j && si > i)) std::swap(m(i, j), m(si, sj));
        }
    }
}

}  // namespace

void conjugate_swap(Matrix& m, int n_qubits, int qa, int qb) {
    const std::int64_t ma = qubit_mask(n_qubits, qa);
    const std::int64_t mb = qubit_mask(n_qubits, qb);
    conjugate_index_permutation(m, [ma, mb](std::int64_t x) {
        const bool ba = (x & ma) != 0;
        const bool bb = (x & mb) != 0;
        return ba == bb ? x : x ^ ma ^ mb;
    });
}

template <class Mat>
void swap_rows(Mat& m, int n_qubits, int qa, int qb) {
    const std::int64_t d = m.rows();
    const std::int64_t ma = qubit_mask(n_qubits, qa);
    const std::int64_t mb = qubit_mask(n_qubits, qb);
#pragma omp parallel for schedule(static) if (d >= 512)
    for (std::int64_t r = 0; r < d; ++r) {
        if ((r & ma) == 0 && (r & mb) != 0) m.row(r).swap(m.row(r ^ ma ^ mb));
    }
}

template void swap_rows<Matrix>(Matrix&, int, int, int);
template void swap_rows<RowMatrix>(RowMatrix&, int, int, int);

void conjugate_cswap(Matrix& m, int copy_qubits, int target_index) {
    const int n = 2 * copy_qubits + 1;
    if (target_index < 1 || target_index > copy_qubits)
        throw contract_error("conjugate_cswap: target index out of range");
    const std::int64_t aux = qubit_mask(n, 0);
    const std::int64_t m1 = qubit_mask(n, target_index);
    const std::int64_t m2 = qubit_mask(n, copy_qubits + target_index);
    conjugate_index_permutation(m, [aux, m1, m2](std::int64_t x) {
        if ((x & aux) == 0) return x;
        const bool b1 = (x & m1) != 0;
        const bool b2 = (x & m2) != 0;
        return b1 == b2 ? x : x ^ m1 ^ m2;
    });
}

}  // namespace kernels

}  // namespace vd
