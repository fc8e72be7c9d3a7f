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

#include "vd/distillation.hpp"
#include "vd/noise.hpp"
#include "vd/quantum_core.hpp"

namespace vd {

/// Sample statistics of the ratio estimator theta = xbar / ybar.
struct EstimatorStats {
    double mean = 0.0;        ///< pooled xbar / ybar over all batches
    double variance = 0.0;    ///< empirical variance of the per-batch ratios
    long long samples = 0;    ///< R, samples per batch
    int batches = 0;
    int unstable_batches = 0;  ///< batches whose ybar was nonpositive
};

/// Taylor-expanded variance of the ratio estimator for the noiseless circuit,
/// evaluated exactly from rho and O and scaled by 1/R.
double variance_mitigated_noiseless(const DensityMatrix& rho, const PauliObservable& obs,
                                    long long samples);

/// Same under dephasing circuit noise: the noiseless expression scaled by
/// (1-2eps)^{-2N} with O replaced by the channel-attenuated observable.
/// Requires a dephasing model.
double variance_mitigated_dephasing(const DensityMatrix& rho, const PauliObservable& obs,
                                    const NoiseModel& model, long long samples);

/// Channel-agnostic variance of the ratio estimator, evaluated from the exact
/// first and second moments of the simulated circuit's measured observables
/// (no closed form exists for depolarizing circuit noise; this route is
/// validated against the dephasing formula and against Monte Carlo sampling).
/// Requires a diagonal observable.
double variance_mitigated_from_moments(const DensityMatrix& rho, const PauliObservable& obs,
                                       const NoiseModel& model, long long samples);

/// Same Taylor expression from moments that were already computed (avoids a
/// second circuit run when the caller needs both the value and the variance).
double variance_from_vd_moments(const VdMoments& moments, long long samples);

/// Unmitigated baseline: Var = [Tr(rho H^2) - Tr(rho H)^2] / (2R). The 1/2
/// accounts for the distillation circuit consuming two state copies per shot.
double variance_unmitigated(const DensityMatrix& rho, const PauliObservable& hamiltonian,
                            long long samples);

/// Smallest R with variance_at_R1 / R <= threshold (at least 1).
long long min_samples(double variance_at_r1, double threshold = 1e-3);

/// Draws `batches` independent batches of R samples (x, b1, b2) from the
/// simulated circuit's joint outcome distribution and forms the ratio
/// estimator. Batches with nonpositive ybar are counted as unstable; their
/// value still enters the statistics.
EstimatorStats monte_carlo_estimator(const DensityMatrix& rho, const PauliObservable& obs,
                                     const NoiseModel& model, long long samples,
                                     std::uint64_t seed, int batches = 100);

}  // namespace vd
