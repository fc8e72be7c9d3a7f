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

#include <vector>

#include "vd/qaoa_maxcut.hpp"
#include "vd/records.hpp"

namespace vd {

/// Thermal-mixture construction parameters; the ground-state admixture is
/// fixed at one half.
struct ThermalMixSpec {
    double eta = 0.1;
    double mix_weight = 0.5;
};

/// exp(-eta H) / Z(eta); diagonal, so computed entrywise on the spectrum.
DensityMatrix thermal_state(const MaxCutInstance& instance, double eta);

/// (|psi_GS><psi_GS| + rho_thermal) / 2 with the lexicographically smallest
/// optimal bitstring as ground state.
DensityMatrix mixed_input(const MaxCutInstance& instance, double eta);

/// The thermal experiment: for each eps, the unmitigated ratio of the fixed
/// input state (eps-independent baseline) against the simulated distillation
/// circuit's mitigated ratio, plus the sample counts of both estimators.
std::vector<SweepRecord> thermal_sweep(const MaxCutInstance& instance, ChannelKind kind,
                                       const std::vector<double>& eps_grid, double eta,
                                       const SweepOptions& options);

/// c = 1 - |<psi_dom|psi_ideal>|^2 for the canonicalized dominant eigenvector.
/// A near-degenerate top of the spectrum (gap below 1e-9) marks the value
/// unreliable instead of failing.
struct MismatchResult {
    double value = 0.0;
    bool reliable = true;
};
MismatchResult coherent_mismatch(const DensityMatrix& rho_noisy, const PureState& ideal);

/// Mean coherent mismatch per (channel, eps), recomputed from a finished QAOA
/// sweep's recorded optima (the angles optimal for the mitigated objective).
struct DriftPoint {
    ChannelKind channel = ChannelKind::Depolarizing;
    double eps = 0.0;
    double mean_mismatch = 0.0;
    int instances = 0;
};
std::vector<DriftPoint> drift_sweep(const std::vector<MaxCutInstance>& instances,
                                    const std::vector<SweepRecord>& qaoa_records);

}  // namespace vd
