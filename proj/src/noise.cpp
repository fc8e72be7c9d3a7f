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

#include "vd/noise.hpp"

#include <cmath>

namespace vd {

namespace {

void check_eps(double eps, ChannelKind kind, const char* what) {
    if (!(eps >= 0.0) || eps > max_eps(kind))
        throw contract_error(std::string(what) + ": error probability " + std::to_string(eps) +
                             " outside [0, " + std::to_string(max_eps(kind)) + "]");
}

void check_qubit(const DensityMatrix& rho, int qubit, const char* what) {
    if (qubit < 0 || qubit >= rho.n_qubits())
        throw contract_error(std::string(what) + ": qubit index out of range");
}

}  // namespace

std::string to_string(ChannelKind kind) {
    return kind == ChannelKind::Depolarizing ? "depolarizing" : "dephasing";
}

ChannelKind channel_kind_from_string(const std::string& name) {
    if (name == "depolarizing") return ChannelKind::Depolarizing;
    if (name == "dephasing") return ChannelKind::Dephasing;
    throw contract_error("unknown channel kind '" + name + "'");
}

NoiseModel NoiseModel::make(ChannelKind kind, double eps, std::optional<double> eps_single) {
    check_eps(eps, kind, "NoiseModel");
    const double eps1 = eps_single.value_or(eps / 10.0);
    if (!(eps1 >= 0.0) || eps1 > eps + 1e-15)
        throw contract_error("NoiseModel: single-qubit rate must lie in [0, eps_two_qubit]");
    return NoiseModel{kind, eps, eps1};
}

NoiseModel NoiseModel::depolarizing(double eps, std::optional<double> eps_single) {
    return make(ChannelKind::Depolarizing, eps, eps_single);
}

NoiseModel NoiseModel::dephasing(double eps, std::optional<double> eps_single) {
    return make(ChannelKind::Dephasing, eps, eps_single);
}

DensityMatrix apply_depolarizing(const DensityMatrix& rho, int qubit, double eps) {
    check_eps(eps, ChannelKind::Depolarizing, "apply_depolarizing");
    check_qubit(rho, qubit, "apply_depolarizing");
    Matrix m = rho.matrix();
    kernels::depolarize(m, rho.n_qubits(), qubit, eps);
    return DensityMatrix::unchecked(rho.n_qubits(), std::move(m));
}

DensityMatrix apply_dephasing(const DensityMatrix& rho, int qubit, double eps) {
    check_eps(eps, ChannelKind::Dephasing, "apply_dephasing");
    check_qubit(rho, qubit, "apply_dephasing");
    Matrix m = rho.matrix();
    kernels::dephase(m, rho.n_qubits(), qubit, eps);
    return DensityMatrix::unchecked(rho.n_qubits(), std::move(m));
}

DensityMatrix apply_channel(const DensityMatrix& rho, int qubit, ChannelKind kind, double eps) {
    return kind == ChannelKind::Depolarizing ? apply_depolarizing(rho, qubit, eps)
                                             : apply_dephasing(rho, qubit, eps);
}

ScaledPauli adjoint_on_pauli(char letter, const NoiseModel& model, double eps) {
    check_eps(eps, model.kind, "adjoint_on_pauli");
    if (letter == 'I') return {1.0, 'I'};
    if (letter != 'X' && letter != 'Y' && letter != 'Z')
        throw contract_error(std::string("adjoint_on_pauli: invalid letter '") + letter + "'");
    if (model.kind == ChannelKind::Depolarizing) return {1.0 - 4.0 * eps / 3.0, letter};
    // Pure dephasing commutes with Z and attenuates X and Y.
    return {letter == 'Z' ? 1.0 : 1.0 - 2.0 * eps, letter};
}

double attenuation_factor(const PauliTerm& term, const NoiseModel& model, double eps) {
    check_eps(eps, model.kind, "attenuation_factor");
    if (model.kind == ChannelKind::Depolarizing)
        return std::pow(1.0 - 4.0 * eps / 3.0, term.weight());
    return std::pow(1.0 - 2.0 * eps, term.xy_weight());
}

PauliObservable channel_adjoint_on_observable(const PauliObservable& obs, const NoiseModel& model,
                                              double eps) {
    PauliObservable out(obs.n_qubits());
    for (const auto& t : obs.terms())
        out.add_term(t.coefficient * attenuation_factor(t, model, eps), t.word);
    return out;
}

}  // namespace vd
