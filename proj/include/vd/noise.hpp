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

#include <optional>
#include <string>

#include "vd/quantum_core.hpp"

namespace vd {

enum class ChannelKind { Depolarizing, Dephasing };

std::string to_string(ChannelKind kind);
ChannelKind channel_kind_from_string(const std::string& name);

/// Largest error probability for which the channel stays completely positive.
inline constexpr double max_eps(ChannelKind kind) {
    return kind == ChannelKind::Depolarizing ? 0.75 : 0.5;
}

/// Single-qubit Pauli error model. Two-qubit gates are followed by the channel
/// at `eps_two_qubit` on every qubit they touch; single-qubit gates use
/// `eps_single_qubit` (a tenth of the two-qubit rate unless overridden).
struct NoiseModel {
    ChannelKind kind = ChannelKind::Depolarizing;
    double eps_two_qubit = 0.0;
    double eps_single_qubit = 0.0;

    static NoiseModel depolarizing(double eps, std::optional<double> eps_single = std::nullopt);
    static NoiseModel dephasing(double eps, std::optional<double> eps_single = std::nullopt);
    static NoiseModel make(ChannelKind kind, double eps,
                           std::optional<double> eps_single = std::nullopt);
};

/// (1-eps) rho + eps/3 (X rho X + Y rho Y + Z rho Z) on one qubit.
DensityMatrix apply_depolarizing(const DensityMatrix& rho, int qubit, double eps);

/// (1-eps) rho + eps Z rho Z on one qubit; the diagonal is untouched.
DensityMatrix apply_dephasing(const DensityMatrix& rho, int qubit, double eps);

/// Apply the model's channel kind at probability eps.
DensityMatrix apply_channel(const DensityMatrix& rho, int qubit, ChannelKind kind, double eps);

/// Both channels are self-adjoint and map Pauli operators to scaled copies of
/// themselves: Lambda(P) = factor * P.
struct ScaledPauli {
    double factor;
    char letter;
};
ScaledPauli adjoint_on_pauli(char letter, const NoiseModel& model, double eps);

/// Attenuation of one Pauli string under N parallel single-qubit channels:
/// (1 - 4 eps / 3)^k for depolarizing, (1 - 2 eps)^k' for dephasing, where k
/// counts non-identity letters and k' counts X/Y letters.
double attenuation_factor(const PauliTerm& term, const NoiseModel& model, double eps);

/// The adjoint of the N-fold tensor channel applied to an observable: every
/// term's coefficient is multiplied by its attenuation factor.
PauliObservable channel_adjoint_on_observable(const PauliObservable& obs, const NoiseModel& model,
                                              double eps);

}  // namespace vd
