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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "testutil.hpp"
#include "vd/distillation.hpp"
#include "vd/experiments.hpp"

using namespace vd;
using vdtest::max_abs;
using cd = std::complex<double>;

namespace {

MaxCutInstance single_edge() { return make_instance(2, {{0, 1}}); }

std::vector<double> linspace(double lo, double hi, int points) {
    std::vector<double> grid(points);
    for (int k = 0; k < points; ++k) grid[k] = lo + (hi - lo) * k / (points - 1);
    return grid;
}

}  // namespace

TEST_CASE("thermal state construction") {
    const MaxCutInstance edge = single_edge();

    // eta = 0: the maximally mixed state.
    CHECK(max_abs(thermal_state(edge, 0.0).matrix() -
                  DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);

    // eta = 0.1 on a single edge: weights proportional to (1, e^0.1, e^0.1, 1).
    const DensityMatrix t = thermal_state(edge, 0.1);
    const double z = 2.0 + 2.0 * std::exp(0.1);
    CHECK(t.matrix()(0, 0).real() == doctest::Approx(1.0 / z).epsilon(1e-14));
    CHECK(t.matrix()(1, 1).real() == doctest::Approx(std::exp(0.1) / z).epsilon(1e-14));
    CHECK(t.matrix()(2, 2).real() == doctest::Approx(std::exp(0.1) / z).epsilon(1e-14));
    CHECK(t.matrix()(3, 3).real() == doctest::Approx(1.0 / z).epsilon(1e-14));

    // Large eta: a uniform mixture of the two optimal bitstrings.
    const DensityMatrix frozen = thermal_state(edge, 200.0);
    CHECK(frozen.matrix()(1, 1).real() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(frozen.matrix()(2, 2).real() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(frozen.matrix()(0, 0).real() == doctest::Approx(0.0));

    // [rho_thermal, H] = 0: both are diagonal.
    const Matrix h = edge.hamiltonian.to_matrix();
    CHECK(max_abs(t.matrix() * h - h * t.matrix()) < 1e-12);

    CHECK_THROWS_AS((void)thermal_state(edge, -0.5), contract_error);
}

TEST_CASE("mixed input state") {
    const MaxCutInstance inst = erdos_renyi(6, 0.5, 11);
    const DensityMatrix rho = mixed_input(inst, 0.1);
    CHECK(rho.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_NOTHROW((void)DensityMatrix::from_matrix(6, rho.matrix()));
    CHECK(rho.purity() < 1.0);

    // The ground-state component dominates the spectrum with weight >= 1/2.
    const SpectralDecomposition sd = spectral_decompose(rho);
    CHECK(sd.eigenvalues[0] >= 0.5);
    const PureState ground = PureState::basis_state(6, inst.ground_bitstrings.front());
    CHECK(fidelity(sd.dominant_eigenvector(6), ground) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("coherent mismatch basics") {
    Rng rng(5);
    const PureState psi = random_pure_state(2, rng);
    const MismatchResult same = coherent_mismatch(DensityMatrix::pure(psi), psi);
    CHECK(same.value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(same.reliable);

    // Dominant eigenvector orthogonal to the ideal state.
    Matrix two = Matrix::Zero(2, 2);
    two(0, 0) = 0.9;
    two(1, 1) = 0.1;
    const MismatchResult ortho = coherent_mismatch(DensityMatrix::from_matrix(1, two),
                                                   PureState::basis_state(1, 1));
    CHECK(ortho.value == doctest::Approx(1.0));
    CHECK(ortho.reliable);

    // A degenerate top of the spectrum flags the result as unreliable.
    const MismatchResult flat =
        coherent_mismatch(DensityMatrix::maximally_mixed(1), PureState::basis_state(1, 0));
    CHECK_FALSE(flat.reliable);
}

TEST_CASE("thermal sweep: immunity, monotonicity, sample counts") {
    const MaxCutInstance inst = erdos_renyi(4, 0.6, 17);
    const std::vector<double> grid = linspace(0.0, 0.25, 11);
    SweepOptions opts;
    opts.instance_id = 0;
    opts.seed = 17;

    const auto deph = thermal_sweep(inst, ChannelKind::Dephasing, grid, 0.1, opts);
    const auto dep = thermal_sweep(inst, ChannelKind::Depolarizing, grid, 0.1, opts);
    REQUIRE(deph.size() == grid.size());
    REQUIRE(dep.size() == grid.size());

    // Dephasing leaves the diagonal Hamiltonian's mitigated ratio flat.
    for (const auto& rec : deph)
        CHECK(std::abs(rec.ratio_mitigated - deph.front().ratio_mitigated) < 1e-10);

    // Depolarizing decreases strictly in eps.
    for (std::size_t k = 1; k < dep.size(); ++k)
        CHECK(dep[k].ratio_mitigated < dep[k - 1].ratio_mitigated);

    // The unmitigated baseline never moves (fixed input state).
    for (const auto& rec : dep)
        CHECK(rec.ratio_unmitigated == dep.front().ratio_unmitigated);

    // Distillation helps at eps = 0 for the eta = 0.1 mixture.
    CHECK(deph.front().ratio_mitigated > deph.front().ratio_unmitigated);

    // Impure input: mitigated and unmitigated sample counts differ at eps = 0.
    CHECK(deph.front().min_samples_mitigated != deph.front().min_samples_unmitigated);

    // Mechanism: the dephasing adjoint fixes the MaxCut Hamiltonian exactly.
    const NoiseModel model = NoiseModel::dephasing(0.2);
    const PauliObservable fixed =
        channel_adjoint_on_observable(inst.hamiltonian, model, model.eps_two_qubit);
    for (std::size_t k = 0; k < fixed.terms().size(); ++k)
        CHECK(fixed.terms()[k].coefficient == inst.hamiltonian.terms()[k].coefficient);
}

TEST_CASE("thermal sweep records carry no angles") {
    const MaxCutInstance inst = erdos_renyi(3, 0.9, 19);
    SweepOptions opts;
    const auto records = thermal_sweep(inst, ChannelKind::Dephasing, {0.0, 0.1}, 0.1, opts);
    CHECK(std::isnan(records.front().alpha_opt));
    CHECK(std::isnan(records.front().beta_opt));
    CHECK_THROWS_AS(
        (void)thermal_sweep(inst, ChannelKind::Dephasing, {0.1, 0.0}, 0.1, opts),
        contract_error);
}

TEST_CASE("drift sweep reuses recorded optima") {
    std::vector<MaxCutInstance> instances;
    instances.push_back(erdos_renyi(4, 0.6, 23));
    instances.push_back(erdos_renyi(4, 0.6, 29));

    const std::vector<double> grid = linspace(0.0, 0.1, 3);
    std::vector<SweepRecord> records;
    for (int k = 0; k < 2; ++k) {
        SweepOptions opts;
        opts.instance_id = k;
        opts.seed = k == 0 ? 23 : 29;
        for (ChannelKind kind : {ChannelKind::Dephasing, ChannelKind::Depolarizing}) {
            const auto part = noise_sweep(instances[k], kind, grid, opts);
            records.insert(records.end(), part.begin(), part.end());
        }
    }

    const std::vector<DriftPoint> points = drift_sweep(instances, records);
    REQUIRE(points.size() == 6);  // 2 channels x 3 eps

    double dep_at[3] = {0, 0, 0}, deph_at[3] = {0, 0, 0};
    for (const auto& p : points) {
        const int idx = static_cast<int>(std::round(p.eps / 0.05));
        CHECK(p.instances == 2);
        if (p.channel == ChannelKind::Depolarizing) dep_at[idx] = p.mean_mismatch;
        else deph_at[idx] = p.mean_mismatch;
        if (p.eps == 0.0) CHECK(p.mean_mismatch == doctest::Approx(0.0).epsilon(1e-9));
    }
    // Dephasing drifts the dominant eigenvector no more than depolarizing.
    for (int k = 0; k < 3; ++k) CHECK(deph_at[k] <= dep_at[k] + 1e-9);

    // The recomputed means agree with the per-record mismatch values.
    for (const auto& p : points) {
        double mean = 0.0;
        int count = 0;
        for (const auto& r : records)
            if (r.channel == p.channel && r.eps == p.eps) {
                mean += r.coherent_mismatch;
                ++count;
            }
        mean /= count;
        CHECK(p.mean_mismatch == doctest::Approx(mean).epsilon(1e-9));
    }

    CHECK_THROWS_AS((void)drift_sweep({}, records), contract_error);
}
