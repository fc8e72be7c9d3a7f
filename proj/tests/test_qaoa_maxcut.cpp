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

#include <cstdio>
#include <filesystem>

#include "testutil.hpp"
#include "vd/distillation.hpp"
#include "vd/qaoa_maxcut.hpp"

using namespace vd;
using vdtest::max_abs;
using cd = std::complex<double>;

namespace {

int brute_force_cut(const MaxCutInstance& inst, std::uint64_t bits) {
    int cut = 0;
    for (const auto& [u, v] : inst.edges) {
        const int bu = static_cast<int>((bits >> (inst.n_vertices - 1 - u)) & 1);
        const int bv = static_cast<int>((bits >> (inst.n_vertices - 1 - v)) & 1);
        cut += bu != bv;
    }
    return cut;
}

MaxCutInstance single_edge() { return make_instance(2, {{0, 1}}); }

}  // namespace

TEST_CASE("erdos_renyi sampling") {
    const MaxCutInstance k4 = erdos_renyi(4, 1.0, 7);
    CHECK(k4.edges.size() == 6);
    CHECK(k4.c_max == 4);  // brute force over 16 bitstrings below
    int best = 0;
    for (std::uint64_t b = 0; b < 16; ++b) best = std::max(best, brute_force_cut(k4, b));
    CHECK(best == 4);

    CHECK_THROWS_AS((void)erdos_renyi(4, 0.0, 7), contract_error);
    CHECK_THROWS_AS((void)erdos_renyi(4, 1.5, 7), contract_error);
    CHECK_THROWS_AS((void)erdos_renyi(1, 0.5, 7), contract_error);

    const MaxCutInstance a = erdos_renyi(6, 0.5, 42);
    const MaxCutInstance b = erdos_renyi(6, 0.5, 42);
    CHECK(a.edges == b.edges);
    const MaxCutInstance c = erdos_renyi(6, 0.5, 43);
    CHECK(a.edges != c.edges);  // different stream
}

TEST_CASE("brute-forced optimum and the Z2 symmetry of ground states") {
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const MaxCutInstance inst = erdos_renyi(5, 0.5, 100 + trial);
        int best = 0;
        for (std::uint64_t b = 0; b < 32; ++b) best = std::max(best, brute_force_cut(inst, b));
        CHECK(inst.c_max == best);
        CHECK_FALSE(inst.ground_bitstrings.empty());
        const std::uint64_t flip_mask = (1ULL << inst.n_vertices) - 1;
        for (const std::uint64_t g : inst.ground_bitstrings) {
            CHECK(brute_force_cut(inst, g) == best);
            CHECK(std::find(inst.ground_bitstrings.begin(), inst.ground_bitstrings.end(),
                            g ^ flip_mask) != inst.ground_bitstrings.end());
        }
    }
}

TEST_CASE("maxcut hamiltonian diagonal") {
    const MaxCutInstance edge = single_edge();
    const Eigen::VectorXd d = edge.hamiltonian.diagonal();
    CHECK(d[0] == doctest::Approx(0.0));
    CHECK(d[1] == doctest::Approx(-1.0));
    CHECK(d[2] == doctest::Approx(-1.0));
    CHECK(d[3] == doctest::Approx(0.0));
    CHECK(edge.ground_bitstrings == std::vector<std::uint64_t>{1, 2});

    const MaxCutInstance tri = make_instance(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(tri.c_max == 2);
    CHECK(tri.hamiltonian.diagonal().minCoeff() == doctest::Approx(-2.0));

    // Empty edge set: the zero operator.
    const PauliObservable zero_h = maxcut_hamiltonian(3, {});
    CHECK(zero_h.diagonal().cwiseAbs().maxCoeff() == 0.0);

    // Every diagonal entry is -cut(b) on a random instance.
    const MaxCutInstance inst = erdos_renyi(5, 0.6, 77);
    const Eigen::VectorXd diag = inst.hamiltonian.diagonal();
    for (std::uint64_t b = 0; b < 32; ++b)
        CHECK(diag[b] == doctest::Approx(-brute_force_cut(inst, b)));

    CHECK_THROWS_AS((void)make_instance(3, {{0, 0}}), contract_error);
    CHECK_THROWS_AS((void)make_instance(3, {{0, 1}, {1, 0}}), contract_error);
    CHECK_THROWS_AS((void)make_instance(3, {{0, 3}}), contract_error);
}

TEST_CASE("qaoa state at zero angles and purity") {
    const MaxCutInstance inst = erdos_renyi(4, 0.7, 5);
    const QaoaParams zero = QaoaParams::p1(0.0, 0.0);

    const DensityMatrix rho = qaoa_state(inst, zero, std::nullopt);
    const DensityMatrix plus = DensityMatrix::pure(PureState::uniform_plus(4));
    CHECK(max_abs(rho.matrix() - plus.matrix()) < 1e-14);
    CHECK(cost(inst, zero, std::nullopt) ==
          doctest::Approx(-0.5 * static_cast<double>(inst.edges.size())).epsilon(1e-12));

    const QaoaParams angles = QaoaParams::p1(0.8, 0.3);
    CHECK(qaoa_state(inst, angles, std::nullopt).purity() == doctest::Approx(1.0).epsilon(1e-10));

    // Noisy states stay valid density matrices.
    const NoiseModel model = NoiseModel::depolarizing(0.1);
    const DensityMatrix noisy = qaoa_state(inst, angles, model);
    CHECK_NOTHROW((void)DensityMatrix::from_matrix(4, noisy.matrix()));
    CHECK(noisy.purity() < 1.0);

    CHECK_THROWS_AS((void)qaoa_state(inst, QaoaParams{{0.1, 0.2}, {0.1, 0.2}}, std::nullopt),
                    contract_error);
}

TEST_CASE("statevector path equals the density path") {
    const MaxCutInstance inst = erdos_renyi(4, 0.6, 9);
    Rng rng(13);
    for (int trial = 0; trial < 5; ++trial) {
        const QaoaParams p = QaoaParams::p1(rng.uniform() * M_PI, rng.uniform() * M_PI / 2);
        const DensityMatrix via_density = qaoa_state(inst, p, std::nullopt);
        const DensityMatrix via_vector = DensityMatrix::pure(qaoa_statevector(inst, p));
        CHECK(max_abs(via_density.matrix() - via_vector.matrix()) < 1e-12);
        CHECK(cost(inst, p, std::nullopt) ==
              doctest::Approx(expectation(via_density, inst.hamiltonian)).epsilon(1e-12));
    }
}

TEST_CASE("single-edge cost against a hand-built two-qubit simulation") {
    const MaxCutInstance edge = single_edge();
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const double alpha = trial == 0 ? M_PI / 2 : rng.uniform() * M_PI;
        const double beta = trial == 0 ? M_PI / 8 : rng.uniform() * M_PI / 2;

        // Independent oracle: dense 4x4 gates on the statevector.
        Vector psi = Vector::Constant(4, cd(0.5, 0.0));
        Matrix zz = Matrix::Zero(4, 4);
        const double z[4] = {1.0, -1.0, -1.0, 1.0};
        for (int b = 0; b < 4; ++b) zz(b, b) = std::exp(cd(0.0, -0.5 * alpha * z[b]));
        psi = zz * psi;
        Matrix u(2, 2);
        u << std::cos(beta), cd(0, -std::sin(beta)), cd(0, -std::sin(beta)), std::cos(beta);
        psi = tensor_product(u, u) * psi;
        double oracle = 0.0;
        const double diag_h[4] = {0.0, -1.0, -1.0, 0.0};
        for (int b = 0; b < 4; ++b) oracle += diag_h[b] * std::norm(psi[b]);

        CHECK(cost(edge, QaoaParams::p1(alpha, beta), std::nullopt) ==
              doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("cost bounds and the maximally mixed reference") {
    Rng rng(19);
    const MaxCutInstance inst = erdos_renyi(4, 0.5, 23);
    for (int trial = 0; trial < 5; ++trial) {
        const QaoaParams p = QaoaParams::p1(rng.uniform() * M_PI, rng.uniform() * M_PI / 2);
        for (const auto& model :
             {std::optional<NoiseModel>{}, std::optional<NoiseModel>{NoiseModel::dephasing(0.1)}}) {
            const double c = cost(inst, p, model);
            CHECK(c <= 1e-12);
            CHECK(c >= -static_cast<double>(inst.c_max) - 1e-12);
        }
    }
    CHECK(expectation(DensityMatrix::maximally_mixed(4), inst.hamiltonian) ==
          doctest::Approx(-0.5 * static_cast<double>(inst.edges.size())).epsilon(1e-12));
}

TEST_CASE("mitigated cost routes") {
    const MaxCutInstance inst = erdos_renyi(4, 0.6, 31);
    const QaoaParams p = QaoaParams::p1(0.7, 0.35);

    // eps = 0: mitigation of a pure state returns the plain cost.
    const NoiseModel off = NoiseModel::depolarizing(0.0);
    CHECK(mitigated_cost(inst, p, off) ==
          doctest::Approx(cost(inst, p, std::nullopt)).epsilon(1e-10));

    // Dephasing: H_MaxCut is diagonal, so the mitigated value equals the
    // noiseless M = 2 formula on the noisy state exactly.
    const NoiseModel deph = NoiseModel::dephasing(0.1);
    const DensityMatrix rho_deph = qaoa_state(inst, p, deph);
    CHECK(mitigated_cost(inst, p, deph) ==
          doctest::Approx(mitigated_expectation_power(rho_deph, inst.hamiltonian, 2))
              .epsilon(1e-10));

    // Depolarizing attenuation only shrinks the non-identity contributions:
    // relative to the constant term the mitigated value moves toward it.
    const NoiseModel dep = NoiseModel::depolarizing(0.1);
    const DensityMatrix rho_dep = qaoa_state(inst, p, dep);
    const double constant = -0.5 * static_cast<double>(inst.edges.size());
    CHECK(std::abs(mitigated_cost(inst, p, dep) - constant) <=
          std::abs(mitigated_expectation_power(rho_dep, inst.hamiltonian, 2) - constant) + 1e-12);

    // At the noisy optimum the magnitudes themselves are ordered too.
    const OptimizeResult opt = optimize(inst, dep, Objective::MitigatedCost,
                                        QaoaParams::p1(0.7, 0.35));
    const DensityMatrix rho_opt = qaoa_state(inst, opt.params, dep);
    CHECK(std::abs(mitigated_cost(inst, opt.params, dep)) <=
          std::abs(mitigated_expectation_power(rho_opt, inst.hamiltonian, 2)) + 1e-12);
}

TEST_CASE("optimize solves the single edge exactly") {
    const MaxCutInstance edge = single_edge();
    const OptimizeResult res = optimize(edge, std::nullopt, Objective::Cost, std::nullopt);
    CHECK(res.value == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(res.polish_ok);
    // The optimum sits at sin(alpha) sin(4 beta) = -1.
    const double landscape =
        std::sin(res.params.alpha[0]) * std::sin(4.0 * res.params.beta[0]);
    CHECK(landscape == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("polish never regresses below the grid optimum") {
    const MaxCutInstance inst = erdos_renyi(4, 0.5, 37);
    OptimizeOptions opts;
    opts.grid_alpha = 40;
    opts.grid_beta = 40;
    const OptimizeResult polished = optimize(inst, std::nullopt, Objective::Cost, std::nullopt, opts);

    // Re-scan the same grid without polish.
    double grid_best = 0.0;
    for (int i = 0; i < opts.grid_alpha; ++i)
        for (int j = 0; j < opts.grid_beta; ++j) {
            const double c = cost(inst,
                                  QaoaParams::p1(M_PI * i / (opts.grid_alpha - 1),
                                                 0.5 * M_PI * j / (opts.grid_beta - 1)),
                                  std::nullopt);
            grid_best = std::min(grid_best, c);
        }
    CHECK(polished.value <= grid_best + 1e-12);
}

TEST_CASE("warm start reaches the cold-start objective") {
    // eps step 0.005 from the noiseless optimum, five random instances.
    for (int k = 0; k < 5; ++k) {
        const MaxCutInstance inst = erdos_renyi(4, 0.5, 500 + k);
        const NoiseModel model = NoiseModel::dephasing(0.005);
        const OptimizeResult cold0 = optimize(inst, std::nullopt, Objective::Cost, std::nullopt);
        const OptimizeResult warm = optimize(inst, model, Objective::Cost, cold0.params);
        const OptimizeResult cold = optimize(inst, model, Objective::Cost, std::nullopt);
        CHECK(warm.value <= cold.value + 1e-8);
    }
    // Same for the mitigated objective on two instances.
    for (int k = 0; k < 2; ++k) {
        const MaxCutInstance inst = erdos_renyi(4, 0.5, 900 + k);
        const NoiseModel model = NoiseModel::depolarizing(0.005);
        const OptimizeResult cold0 = optimize(inst, std::nullopt, Objective::Cost, std::nullopt);
        const OptimizeResult warm = optimize(inst, model, Objective::MitigatedCost, cold0.params);
        const OptimizeResult cold = optimize(inst, model, Objective::MitigatedCost, std::nullopt);
        CHECK(warm.value <= cold.value + 1e-8);
    }
}

TEST_CASE("analytic polish objective agrees with the circuit objective") {
    const MaxCutInstance inst = erdos_renyi(3, 0.7, 61);
    const NoiseModel model = NoiseModel::depolarizing(0.05);
    const OptimizeResult cold0 = optimize(inst, std::nullopt, Objective::Cost, std::nullopt);

    OptimizeOptions circuit_opts;
    circuit_opts.circuit_objective = true;
    const OptimizeResult via_formula =
        optimize(inst, model, Objective::MitigatedCost, cold0.params);
    const OptimizeResult via_circuit =
        optimize(inst, model, Objective::MitigatedCost, cold0.params, circuit_opts);
    CHECK(via_formula.value == doctest::Approx(via_circuit.value).epsilon(1e-8));
    CHECK(std::abs(via_formula.params.alpha[0] - via_circuit.params.alpha[0]) < 1e-4);
    CHECK(std::abs(via_formula.params.beta[0] - via_circuit.params.beta[0]) < 1e-4);
}

TEST_CASE("Z2 symmetry of the noiseless circuit") {
    const MaxCutInstance inst = erdos_renyi(4, 0.6, 71);
    const QaoaParams p = QaoaParams::p1(0.9, 0.4);
    const DensityMatrix rho = qaoa_state(inst, p, std::nullopt);
    const Matrix flip = vdtest::dense_pauli("XXXX");
    CHECK(max_abs(Matrix(flip * rho.matrix() * flip) - rho.matrix()) < 1e-12);
}

TEST_CASE("mixer channel placement is observable") {
    // Removing the depolarizing channel after the X rotations must change the
    // noisy cost; the dephasing ZZ channels alone are not equivalent.
    const MaxCutInstance inst = erdos_renyi(4, 0.6, 73);
    const QaoaParams p = QaoaParams::p1(0.8, 0.3);
    const NoiseModel with_mixer_noise = NoiseModel::dephasing(0.1);
    const NoiseModel without_mixer_noise = NoiseModel::dephasing(0.1, 0.0);
    const double a = cost(inst, p, with_mixer_noise);
    const double b = cost(inst, p, without_mixer_noise);
    CHECK(std::abs(a - b) > 1e-6);
}

TEST_CASE("edge application order sensitivity is bounded") {
    const MaxCutInstance inst = erdos_renyi(4, 0.8, 79);
    REQUIRE(inst.edges.size() >= 3);
    MaxCutInstance reversed = inst;
    std::reverse(reversed.edges.begin(), reversed.edges.end());

    const QaoaParams p = QaoaParams::p1(0.7, 0.35);
    // Noiseless: the diagonal ZZ gates commute, the order cannot matter.
    CHECK(std::abs(cost(inst, p, std::nullopt) - cost(reversed, p, std::nullopt)) < 1e-12);

    // With noise the order still cannot matter here: every gate before the
    // mixer is diagonal, and a Pauli channel commutes with diagonal unitaries
    // exactly (the X and Y Kraus branches combine into a dephasing-type map).
    const NoiseModel model = NoiseModel::depolarizing(0.1);
    const double diff = std::abs(cost(inst, p, model) - cost(reversed, p, model));
    MESSAGE("edge-order sensitivity at N=4, eps=0.1: ", diff);
    CHECK(diff < 1e-12);
}

TEST_CASE("noise_sweep record structure on a small instance") {
    const MaxCutInstance inst = erdos_renyi(4, 0.6, 83);
    std::vector<double> grid(21);
    for (int k = 0; k < 21; ++k) grid[k] = 0.1 * k / 20.0;

    SweepOptions opts;
    opts.instance_id = 3;
    opts.seed = 83;
    const std::vector<SweepRecord> records =
        noise_sweep(inst, ChannelKind::Depolarizing, grid, opts);
    REQUIRE(records.size() == 21);

    const SweepRecord& first = records.front();
    CHECK(first.eps == 0.0);
    CHECK(first.cost_mitigated == doctest::Approx(first.cost_unmitigated));
    CHECK(first.ratio_ideal == doctest::Approx(first.ratio_unmitigated));
    CHECK(first.ratio_ideal - first.ratio_mitigated == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(first.coherent_mismatch == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(first.instance_id == 3);

    double prev_alpha = records[0].alpha_opt, prev_beta = records[0].beta_opt;
    const double grid_spacing = M_PI / 99.0;
    for (const auto& rec : records) {
        CHECK(rec.ratio_unmitigated >= -1e-9);
        CHECK(rec.ratio_unmitigated <= 1.0 + 1e-9);
        CHECK(rec.ratio_mitigated >= -1e-9);
        CHECK(rec.ratio_mitigated <= 1.0 + 1e-9);
        CHECK(rec.min_samples_unmitigated >= 1);
        CHECK(rec.min_samples_mitigated >= 1);
        // Warm-start validity: the optimum drifts by less than one grid step
        // between adjacent noise levels.
        CHECK(std::abs(rec.alpha_opt - prev_alpha) <= grid_spacing);
        CHECK(std::abs(rec.beta_opt - prev_beta) <= grid_spacing);
        prev_alpha = rec.alpha_opt;
        prev_beta = rec.beta_opt;
    }

    CHECK_THROWS_AS((void)noise_sweep(inst, ChannelKind::Depolarizing, {0.05, 0.1}, opts),
                    contract_error);
}

TEST_CASE("edge list round trip") {
    const MaxCutInstance inst = erdos_renyi(5, 0.5, 89);
    const std::string path = (std::filesystem::temp_directory_path() / "vdsim_graph.edgelist").string();
    write_edgelist(path, inst);
    const MaxCutInstance loaded = read_edgelist(path);
    CHECK(loaded.n_vertices == inst.n_vertices);
    CHECK(loaded.edges == inst.edges);
    CHECK(loaded.c_max == inst.c_max);
    std::remove(path.c_str());
    CHECK_THROWS_AS((void)read_edgelist("/nonexistent/file.edgelist"), config_error);
}
