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

#include "vd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "vd/distillation.hpp"
#include "vd/estimators.hpp"

namespace vd {

DensityMatrix thermal_state(const MaxCutInstance& instance, double eta) {
    if (!std::isfinite(eta) || eta < 0.0) throw contract_error("thermal_state: eta must be >= 0");
    const Eigen::VectorXd diag_h = instance.hamiltonian.diagonal();
    const Eigen::Index d = diag_h.size();
    Eigen::VectorXd weights(d);
    for (Eigen::Index b = 0; b < d; ++b) weights[b] = std::exp(-eta * diag_h[b]);
    weights /= weights.sum();
    Matrix rho = Matrix::Zero(d, d);
    rho.diagonal() = weights.cast<std::complex<double>>();
    return DensityMatrix::unchecked(instance.n_vertices, std::move(rho));
}

DensityMatrix mixed_input(const MaxCutInstance& instance, double eta) {
    const DensityMatrix thermal = thermal_state(instance, eta);
    const std::uint64_t ground = instance.ground_bitstrings.front();
    Matrix rho = 0.5 * thermal.matrix();
    rho(static_cast<Eigen::Index>(ground), static_cast<Eigen::Index>(ground)) += 0.5;
    return DensityMatrix::unchecked(instance.n_vertices, std::move(rho));
}

MismatchResult coherent_mismatch(const DensityMatrix& rho_noisy, const PureState& ideal) {
    if (rho_noisy.dim() != ideal.dim()) throw contract_error("coherent_mismatch: dimension mismatch");
    const SpectralDecomposition sd = spectral_decompose(rho_noisy);
    MismatchResult res;
    res.value = 1.0 - fidelity(sd.dominant_eigenvector(rho_noisy.n_qubits()), ideal);
    res.value = std::clamp(res.value, 0.0, 1.0);
    res.reliable = sd.dominant_gap() >= tol::degeneracy_gap;
    return res;
}

std::vector<SweepRecord> thermal_sweep(const MaxCutInstance& instance, ChannelKind kind,
                                       const std::vector<double>& eps_grid, double eta,
                                       const SweepOptions& options) {
    if (eps_grid.empty() || !std::is_sorted(eps_grid.begin(), eps_grid.end()))
        throw contract_error("thermal_sweep: eps grid must be ascending");
    if (instance.c_max < 1)
        throw contract_error("thermal_sweep: instance has no cut to approximate");

    const PauliObservable& h = instance.hamiltonian;
    const double neg_cmax = -static_cast<double>(instance.c_max);
    const DensityMatrix rho = mixed_input(instance, eta);
    const PureState ground =
        PureState::basis_state(instance.n_vertices, instance.ground_bitstrings.front());

    // The input state is fixed, so the unmitigated baseline and the mismatch
    // diagnostic do not depend on the circuit noise level.
    const double cost_unmit = expectation(rho, h);
    const long long samples_unmit =
        min_samples(variance_unmitigated(rho, h, 1), options.variance_threshold);
    const MismatchResult mism = coherent_mismatch(rho, ground);
    const double ratio_ideal = mitigated_expectation_power(rho, h, 2) / neg_cmax;

    std::vector<SweepRecord> records;
    records.reserve(eps_grid.size());
    for (const double eps : eps_grid) {
        const NoiseModel model = NoiseModel::make(kind, eps);
        SweepRecord rec;
        rec.instance_id = options.instance_id;
        rec.seed = options.seed;
        rec.channel = kind;
        rec.eps = eps;
        rec.cost_unmitigated = cost_unmit;
        rec.ratio_unmitigated = cost_unmit / neg_cmax;
        rec.ratio_ideal = ratio_ideal;
        rec.coherent_mismatch = mism.value;
        rec.mismatch_reliable = mism.reliable;
        rec.min_samples_unmitigated = samples_unmit;
        rec.alpha_opt = std::numeric_limits<double>::quiet_NaN();
        rec.beta_opt = std::numeric_limits<double>::quiet_NaN();

        if (kind == ChannelKind::Dephasing) {
            rec.cost_mitigated = simulate_vd(rho, h, model).mitigated;
            rec.min_samples_mitigated = min_samples(
                variance_mitigated_dephasing(rho, h, model, 1), options.variance_threshold);
        } else {
            const VdMoments moments = vd_measurement_moments(rho, h, model);
            rec.cost_mitigated = moments.numerator / moments.denominator;
            rec.min_samples_mitigated =
                min_samples(variance_from_vd_moments(moments, 1), options.variance_threshold);
        }
        rec.ratio_mitigated = rec.cost_mitigated / neg_cmax;
        records.push_back(rec);
    }
    return records;
}

std::vector<DriftPoint> drift_sweep(const std::vector<MaxCutInstance>& instances,
                                    const std::vector<SweepRecord>& qaoa_records) {
    if (instances.empty() || qaoa_records.empty())
        throw contract_error("drift_sweep: needs instances and a finished QAOA sweep");

    std::map<std::pair<int, double>, std::pair<double, int>> acc;
    for (const auto& rec : qaoa_records) {
        if (rec.instance_id < 0 || rec.instance_id >= static_cast<int>(instances.size()))
            throw contract_error("drift_sweep: record references an unknown instance");
        const MaxCutInstance& inst = instances[rec.instance_id];
        const QaoaParams params = QaoaParams::p1(rec.alpha_opt, rec.beta_opt);
        const PureState ideal = qaoa_statevector(inst, params);
        const std::optional<NoiseModel> model =
            rec.eps == 0.0 ? std::nullopt
                           : std::optional<NoiseModel>(NoiseModel::make(rec.channel, rec.eps));
        const DensityMatrix noisy = qaoa_state(inst, params, model);
        const MismatchResult mism = coherent_mismatch(noisy, ideal);
        auto& bucket = acc[{static_cast<int>(rec.channel), rec.eps}];
        bucket.first += mism.value;
        bucket.second += 1;
    }

    std::vector<DriftPoint> points;
    points.reserve(acc.size());
    for (const auto& [key, sum_count] : acc) {
        DriftPoint p;
        p.channel = static_cast<ChannelKind>(key.first);
        p.eps = key.second;
        p.mean_mismatch = sum_count.first / sum_count.second;
        p.instances = sum_count.second;
        points.push_back(p);
    }
    return points;
}

}  // namespace vd
