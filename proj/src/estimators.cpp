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

#include "vd/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "vd/rng.hpp"

namespace vd {

namespace {

using cd = std::complex<double>;

constexpr double kPurityFloor = 1e-14;

double real_expectation(const PauliObservable& obs, const Matrix& m) {
    cd sum = 0.0;
    for (const auto& t : obs.terms()) sum += t.coefficient * pauli_trace(t.word, m);
    return sum.real();
}

// The four-term Taylor variance of xbar/ybar at R = 1, common to the
// noiseless and dephasing expressions:
//   s = Tr(O_sq rho), a = Tr(O rho), b = Tr(O rho^2), T = Tr(rho^2).
double ratio_variance_shape(double s, double a, double b, double t) {
    const double t2 = t * t;
    return s / (2.0 * t2) + a * a / (2.0 * t2) + b * b / (t2 * t2) - 2.0 * b * a / (t2 * t);
}

void check_samples(long long samples, const char* what) {
    if (samples < 1) throw contract_error(std::string(what) + ": sample count must be >= 1");
}

}  // namespace

double variance_mitigated_noiseless(const DensityMatrix& rho, const PauliObservable& obs,
                                    long long samples) {
    check_samples(samples, "variance_mitigated_noiseless");
    const double t = rho.purity();
    if (t <= kPurityFloor) throw degenerate_error("variance_mitigated_noiseless: purity vanished");
    const Matrix rho2 = rho.matrix() * rho.matrix();
    const double s = real_expectation(obs.squared(), rho.matrix());
    const double a = real_expectation(obs, rho.matrix());
    const double b = real_expectation(obs, rho2);
    return ratio_variance_shape(s, a, b, t) / static_cast<double>(samples);
}

double variance_mitigated_dephasing(const DensityMatrix& rho, const PauliObservable& obs,
                                    const NoiseModel& model, long long samples) {
    check_samples(samples, "variance_mitigated_dephasing");
    if (model.kind != ChannelKind::Dephasing)
        throw contract_error("variance_mitigated_dephasing: model must be a dephasing channel");
    const double t = rho.purity();
    if (t <= kPurityFloor) throw degenerate_error("variance_mitigated_dephasing: purity vanished");
    const double eps = model.eps_two_qubit;
    const Matrix rho2 = rho.matrix() * rho.matrix();
    // O -> LambdaBar(O); note the first term attenuates O^2, not LambdaBar(O)^2.
    const PauliObservable att = channel_adjoint_on_observable(obs, model, eps);
    const PauliObservable att_sq = channel_adjoint_on_observable(obs.squared(), model, eps);
    const double s = real_expectation(att_sq, rho.matrix());
    const double a = real_expectation(att, rho.matrix());
    const double b = real_expectation(att, rho2);
    const double scale = std::pow(1.0 - 2.0 * eps, -2 * rho.n_qubits());
    return scale * ratio_variance_shape(s, a, b, t) / static_cast<double>(samples);
}

double variance_mitigated_from_moments(const DensityMatrix& rho, const PauliObservable& obs,
                                       const NoiseModel& model, long long samples) {
    return variance_from_vd_moments(vd_measurement_moments(rho, obs, model), samples);
}

double variance_from_vd_moments(const VdMoments& m, long long samples) {
    check_samples(samples, "variance_from_vd_moments");
    // Taylor expansion of Var(xbar/ybar) around the means, with the moments of
    // the measured pair (x o, x) taken from the circuit output state:
    //   Var(xo) = E[o^2] - E[xo]^2,  Var(x) = 1 - E[x]^2,
    //   Cov(xo, x) = E[o] - E[xo] E[x]   (x^2 = 1).
    const double nu = m.numerator;
    const double de = m.denominator;
    const double var_xo = m.obs_second - nu * nu;
    const double var_x = 1.0 - de * de;
    const double cov = m.obs_first - nu * de;
    const double de2 = de * de;
    const double var =
        var_xo / de2 + nu * nu * var_x / (de2 * de2) - 2.0 * nu * cov / (de2 * de);
    return var / static_cast<double>(samples);
}

double variance_unmitigated(const DensityMatrix& rho, const PauliObservable& hamiltonian,
                            long long samples) {
    check_samples(samples, "variance_unmitigated");
    const double h2 = real_expectation(hamiltonian.squared(), rho.matrix());
    const double h1 = real_expectation(hamiltonian, rho.matrix());
    return (h2 - h1 * h1) / (2.0 * static_cast<double>(samples));
}

long long min_samples(double variance_at_r1, double threshold) {
    if (!(threshold > 0.0)) throw contract_error("min_samples: threshold must be positive");
    if (variance_at_r1 < 0.0) {
        // Exact cancellations can leave rounding residue barely below zero.
        if (variance_at_r1 < -1e-9)
            throw contract_error("min_samples: negative variance " +
                                 std::to_string(variance_at_r1));
        variance_at_r1 = 0.0;
    }
    // The relative nudge keeps exact quotients (0.05 / 1e-3 = 50) from being
    // rounded up by one through the division.
    const double ratio = variance_at_r1 / threshold * (1.0 - 1e-12);
    return std::max<long long>(1, static_cast<long long>(std::ceil(ratio)));
}

EstimatorStats monte_carlo_estimator(const DensityMatrix& rho, const PauliObservable& obs,
                                     const NoiseModel& model, long long samples,
                                     std::uint64_t seed, int batches) {
    if (samples < 100) throw contract_error("monte_carlo_estimator: needs at least 100 samples");
    if (batches < 2) throw contract_error("monte_carlo_estimator: needs at least 2 batches");

    const JointOutcomeDistribution dist = joint_outcome_distribution(rho, obs, model);
    const Eigen::VectorXd h = obs.diagonal();

    // Per-outcome readout values and cumulative table for inverse sampling.
    const std::size_t size = dist.size();
    std::vector<double> cumulative(size);
    std::vector<double> value_xo(size);
    std::vector<int> value_x(size);
    double acc = 0.0;
    for (std::size_t idx = 0; idx < size; ++idx) {
        int x;
        std::uint64_t b1, b2;
        dist.decode(idx, x, b1, b2);
        acc += dist.table()[idx];
        cumulative[idx] = acc;
        value_x[idx] = x;
        value_xo[idx] = x * 0.5 * (h[static_cast<Eigen::Index>(b1)] + h[static_cast<Eigen::Index>(b2)]);
    }
    cumulative.back() = 1.0;  // absorb rounding residue

    Rng rng(seed);
    EstimatorStats stats;
    stats.samples = samples;
    stats.batches = batches;

    std::vector<double> ratios(batches);
    double pooled_x = 0.0;
    double pooled_y = 0.0;
    for (int b = 0; b < batches; ++b) {
        double sum_xo = 0.0;
        double sum_x = 0.0;
        for (long long r = 0; r < samples; ++r) {
            const double u = rng.uniform();
            const std::size_t idx = static_cast<std::size_t>(
                std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
            sum_xo += value_xo[idx];
            sum_x += value_x[idx];
        }
        pooled_x += sum_xo;
        pooled_y += sum_x;
        if (sum_x <= 0.0) ++stats.unstable_batches;
        ratios[b] = sum_xo / sum_x;
    }
    stats.mean = pooled_x / pooled_y;

    double mean_ratio = 0.0;
    for (double r : ratios) mean_ratio += r;
    mean_ratio /= batches;
    double var = 0.0;
    for (double r : ratios) var += (r - mean_ratio) * (r - mean_ratio);
    stats.variance = var / (batches - 1);
    return stats;
}

}  // namespace vd
