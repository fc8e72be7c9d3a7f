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

#include "vd/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>

namespace vd {

namespace {

using cd = std::complex<double>;

bool valid_letter(char c) { return c == 'I' || c == 'X' || c == 'Y' || c == 'Z'; }

void check_word(const std::string& word, int n_qubits) {
    if (static_cast<int>(word.size()) != n_qubits)
        throw contract_error("Pauli word length " + std::to_string(word.size()) +
                             " does not match qubit count " + std::to_string(n_qubits));
    for (char c : word)
        if (!valid_letter(c)) throw contract_error(std::string("invalid Pauli letter '") + c + "'");
}

// Masks of the word: x bit set where the letter flips the qubit (X or Y),
// z bit set where it carries a sign (Z or Y). Bit (n-1-q) belongs to qubit q.
struct WordMasks {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    int y_count = 0;
};

WordMasks masks_of(const std::string& word) {
    WordMasks m;
    const int n = static_cast<int>(word.size());
    for (int q = 0; q < n; ++q) {
        const std::uint64_t bit = 1ULL << (n - 1 - q);
        switch (word[q]) {
            case 'X': m.x |= bit; break;
            case 'Y': m.x |= bit; m.z |= bit; ++m.y_count; break;
            case 'Z': m.z |= bit; break;
            default: break;
        }
    }
    return m;
}

// Entry P[row, row ^ x]. Per letter: X gives 1, Z gives (-1)^bit, and
// Y[b, 1-b] = (b ? +i : -i) = (-i) * (-1)^bit. Folding the Y signs into the
// z-mask parity leaves a global (-i)^y_count.
cd row_phase(const WordMasks& m, std::uint64_t row) {
    static const cd minus_i(0.0, -1.0);
    const int zpar = std::popcount(m.z & row) & 1;
    cd phase = zpar ? cd(-1.0, 0.0) : cd(1.0, 0.0);
    for (int k = 0; k < m.y_count; ++k) phase *= minus_i;
    return phase;
}

template <class Mat>
cd pauli_trace_impl(const std::string& word, const Mat& m) {
    const auto masks = masks_of(word);
    const std::int64_t d = m.rows();
    if (m.cols() != d || (std::int64_t(1) << word.size()) != d)
        throw contract_error("pauli_trace: word/matrix dimension mismatch");
    cd sum = 0.0;
    for (std::int64_t i = 0; i < d; ++i) {
        const std::int64_t j = i ^ static_cast<std::int64_t>(masks.x);
        sum += row_phase(masks, static_cast<std::uint64_t>(i)) * m(j, i);
    }
    return sum;
}

// Single-letter product: a*b = phase * letter.
struct LetterProduct {
    cd phase;
    char letter;
};

LetterProduct letter_product(char a, char b) {
    if (a == 'I') return {1.0, b};
    if (b == 'I') return {1.0, a};
    if (a == b) return {1.0, 'I'};
    static const cd i(0.0, 1.0);
    // Cyclic: XY = iZ, YZ = iX, ZX = iY; reversed order flips the sign.
    if (a == 'X' && b == 'Y') return {i, 'Z'};
    if (a == 'Y' && b == 'X') return {-i, 'Z'};
    if (a == 'Y' && b == 'Z') return {i, 'X'};
    if (a == 'Z' && b == 'Y') return {-i, 'X'};
    if (a == 'Z' && b == 'X') return {i, 'Y'};
    return {-i, 'Y'};  // a == 'X' && b == 'Z'
}

}  // namespace

int PauliTerm::weight() const {
    return static_cast<int>(std::count_if(word.begin(), word.end(), [](char c) { return c != 'I'; }));
}

int PauliTerm::xy_weight() const {
    return static_cast<int>(
        std::count_if(word.begin(), word.end(), [](char c) { return c == 'X' || c == 'Y'; }));
}

PauliObservable::PauliObservable(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1) throw contract_error("observable needs at least one qubit");
}

PauliObservable PauliObservable::identity(int n_qubits) {
    PauliObservable o(n_qubits);
    o.add_term(1.0, std::string(n_qubits, 'I'));
    return o;
}

PauliObservable PauliObservable::single(std::string word, double coefficient) {
    PauliObservable o(static_cast<int>(word.size()));
    o.add_term(coefficient, std::move(word));
    return o;
}

PauliObservable PauliObservable::from_terms(int n_qubits, std::vector<PauliTerm> terms) {
    PauliObservable o(n_qubits);
    for (auto& t : terms) o.add_term(t.coefficient, std::move(t.word));
    return o;
}

void PauliObservable::add_term(double coefficient, std::string word) {
    check_word(word, n_qubits_);
    terms_.push_back(PauliTerm{coefficient, std::move(word)});
}

bool PauliObservable::is_diagonal() const {
    for (const auto& t : terms_)
        if (t.xy_weight() > 0) return false;
    return true;
}

Eigen::VectorXd PauliObservable::diagonal() const {
    if (!is_diagonal()) throw contract_error("observable is not diagonal in the computational basis");
    const std::int64_t d = std::int64_t(1) << n_qubits_;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(d);
    for (const auto& t : terms_) {
        const auto m = masks_of(t.word);
        for (std::int64_t b = 0; b < d; ++b) {
            const int sign = (std::popcount(m.z & static_cast<std::uint64_t>(b)) & 1) ? -1 : 1;
            diag[b] += sign * t.coefficient;
        }
    }
    return diag;
}

Matrix PauliObservable::to_matrix() const {
    const std::int64_t d = std::int64_t(1) << n_qubits_;
    Matrix out = Matrix::Zero(d, d);
    for (const auto& t : terms_) {
        const auto m = masks_of(t.word);
        for (std::int64_t i = 0; i < d; ++i) {
            const std::int64_t j = i ^ static_cast<std::int64_t>(m.x);
            out(i, j) += t.coefficient * row_phase(m, static_cast<std::uint64_t>(i));
        }
    }
    return out;
}

PauliObservable PauliObservable::squared() const {
    std::map<std::string, cd> acc;
    for (const auto& a : terms_) {
        for (const auto& b : terms_) {
            cd phase = a.coefficient * b.coefficient;
            std::string word(n_qubits_, 'I');
            for (int q = 0; q < n_qubits_; ++q) {
                const auto p = letter_product(a.word[q], b.word[q]);
                phase *= p.phase;
                word[q] = p.letter;
            }
            acc[word] += phase;
        }
    }
    PauliObservable out(n_qubits_);
    for (const auto& [word, c] : acc) {
        if (std::abs(c.imag()) > 1e-12 * (1.0 + std::abs(c.real())))
            throw contract_error("squared(): non-Hermitian residue, observable coefficients must be real");
        if (c.real() != 0.0) out.add_term(c.real(), word);
    }
    if (out.terms_.empty()) out.add_term(0.0, std::string(n_qubits_, 'I'));
    return out;
}

PauliObservable PauliObservable::simplified(double drop_tol) const {
    std::map<std::string, double> acc;
    for (const auto& t : terms_) acc[t.word] += t.coefficient;
    PauliObservable out(n_qubits_);
    for (const auto& [word, c] : acc)
        if (std::abs(c) > drop_tol) out.add_term(c, word);
    if (out.terms_.empty()) out.add_term(0.0, std::string(n_qubits_, 'I'));
    return out;
}

std::complex<double> pauli_trace(const std::string& word, const Matrix& m) {
    return pauli_trace_impl(word, m);
}

std::complex<double> pauli_trace(const std::string& word, const RowMatrix& m) {
    return pauli_trace_impl(word, m);
}

}  // namespace vd
