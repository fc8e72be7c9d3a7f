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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vd/errors.hpp"

namespace vd {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// One weighted Pauli string. `word` has one letter per qubit out of
/// {I, X, Y, Z}; index 0 is the leftmost (most significant) tensor factor.
struct PauliTerm {
    double coefficient = 0.0;
    std::string word;

    /// Number of non-identity letters (the weight k).
    int weight() const;
    /// Number of X or Y letters (the weight k').
    int xy_weight() const;
};

/// A Hermitian observable as a real-weighted sum of N-qubit Pauli strings.
class PauliObservable {
  public:
    explicit PauliObservable(int n_qubits);

    static PauliObservable identity(int n_qubits);
    /// Single Pauli string, e.g. single("XZI") or single("ZZ", -0.5).
    static PauliObservable single(std::string word, double coefficient = 1.0);
    static PauliObservable from_terms(int n_qubits, std::vector<PauliTerm> terms);

    void add_term(double coefficient, std::string word);

    int n_qubits() const { return n_qubits_; }
    const std::vector<PauliTerm>& terms() const { return terms_; }

    /// True when every letter is I or Z (operator diagonal in the
    /// computational basis).
    bool is_diagonal() const;

    /// Diagonal entries, length 2^N. Only valid for diagonal observables.
    Eigen::VectorXd diagonal() const;

    /// Dense 2^N x 2^N matrix representation.
    Matrix to_matrix() const;

    /// O^2 expanded back into Pauli terms via the Pauli product algebra.
    /// Cross terms with imaginary phases cancel pairwise for Hermitian O.
    PauliObservable squared() const;

    /// Combine duplicate words and drop coefficients below `drop_tol`.
    PauliObservable simplified(double drop_tol = 0.0) const;

  private:
    int n_qubits_;
    std::vector<PauliTerm> terms_;
};

/// Tr(P * m) for a single Pauli word against a dense matrix. O(2^N); the
/// Pauli matrix is never materialized.
std::complex<double> pauli_trace(const std::string& word, const Matrix& m);

/// Same, for row-major storage (used by the distillation fast path).
using RowMatrix =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
std::complex<double> pauli_trace(const std::string& word, const RowMatrix& m);

}  // namespace vd
