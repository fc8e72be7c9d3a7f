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

#include "vd/qaoa_maxcut.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "vd/distillation.hpp"
#include "vd/estimators.hpp"
#include "vd/experiments.hpp"
#include "vd/rng.hpp"

namespace vd {

namespace {

using cd = std::complex<double>;

constexpr int kMaxResampleAttempts = 1000;

int cut_value(const std::vector<std::pair<int, int>>& edges, int n, std::uint64_t bits) {
    int cut = 0;
    for (const auto& [u, v] : edges) {
        const int bu = static_cast<int>((bits >> (n - 1 - u)) & 1);
        const int bv = static_cast<int>((bits >> (n - 1 - v)) & 1);
        cut += bu != bv;
    }
    return cut;
}

Eigen::Matrix2cd mixer_unitary(double beta) {
    Eigen::Matrix2cd u;
    const cd c(std::cos(beta), 0.0);
    const cd s(0.0, -std::sin(beta));
    u << c, s, s, c;
    return u;
}

// Phases of exp(-i alpha Z_u Z_v / 2) over the computational basis.
Vector zz_phases(int n, int u, int v, double alpha) {
    const Eigen::Index d = Eigen::Index(1) << n;
    Vector phases(d);
    for (Eigen::Index b = 0; b < d; ++b) {
        const int zu = ((b >> (n - 1 - u)) & 1) ? -1 : 1;
        const int zv = ((b >> (n - 1 - v)) & 1) ? -1 : 1;
        phases[b] = std::exp(cd(0.0, -0.5 * alpha * zu * zv));
    }
    return phases;
}

void check_p1(const QaoaParams& params) {
    if (params.depth() != 1) throw contract_error("qaoa: only p = 1 is supported");
    if (!std::isfinite(params.alpha[0]) || !std::isfinite(params.beta[0]))
        throw contract_error("qaoa: angles must be finite");
}

// --------------------------------------------------------------------- Nelder-Mead

struct Simplex2Result {
    std::array<double, 2> x;
    double value;
    bool converged;
    int evaluations;
};

Simplex2Result nelder_mead_2d(const std::function<double(double, double)>& f,
                              std::array<double, 2> start, double step, double tol,
                              int max_evals) {
    using Point = std::array<double, 2>;
    struct Vertex {
        Point x;
        double fx;
    };
    int evals = 0;
    auto eval = [&](const Point& p) {
        ++evals;
        return f(p[0], p[1]);
    };

    std::array<Vertex, 3> s;
    s[0] = {start, eval(start)};
    s[1] = {{start[0] + step, start[1]}, 0.0};
    s[1].fx = eval(s[1].x);
    s[2] = {{start[0], start[1] + step}, 0.0};
    s[2].fx = eval(s[2].x);

    const auto by_value = [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; };
    bool converged = false;
    while (evals < max_evals) {
        std::sort(s.begin(), s.end(), by_value);
        const double size = std::max(
            std::max(std::abs(s[1].x[0] - s[0].x[0]), std::abs(s[1].x[1] - s[0].x[1])),
            std::max(std::abs(s[2].x[0] - s[0].x[0]), std::abs(s[2].x[1] - s[0].x[1])));
        if (size < tol && s[2].fx - s[0].fx < tol) {
            converged = true;
            break;
        }
        const Point centroid{(s[0].x[0] + s[1].x[0]) / 2.0, (s[0].x[1] + s[1].x[1]) / 2.0};
        const auto blend = [&](double coeff) {
            return Point{centroid[0] + coeff * (s[2].x[0] - centroid[0]),
                         centroid[1] + coeff * (s[2].x[1] - centroid[1])};
        };
        const Point xr = blend(-1.0);
        const double fr = eval(xr);
        if (fr < s[0].fx) {
            const Point xe = blend(-2.0);
            const double fe = eval(xe);
            s[2] = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr < s[1].fx) {
            s[2] = {xr, fr};
        } else {
            const Point xc = fr < s[2].fx ? blend(-0.5) : blend(0.5);
            const double fc = eval(xc);
            if (fc < std::min(fr, s[2].fx)) {
                s[2] = {xc, fc};
            } else {
                // Shrink toward the best vertex.
                for (int k = 1; k < 3; ++k) {
                    s[k].x = {0.5 * (s[k].x[0] + s[0].x[0]), 0.5 * (s[k].x[1] + s[0].x[1])};
                    s[k].fx = eval(s[k].x);
                }
            }
        }
    }
    std::sort(s.begin(), s.end(), by_value);
    return {s[0].x, s[0].fx, converged, evals};
}

}  // namespace

int QaoaParams::depth() const {
    if (alpha.size() != beta.size())
        throw contract_error("QaoaParams: alpha/beta lengths differ");
    return static_cast<int>(alpha.size());
}

PauliObservable maxcut_hamiltonian(int n_vertices, const std::vector<std::pair<int, int>>& edges) {
    PauliObservable h(n_vertices);
    h.add_term(-0.5 * static_cast<double>(edges.size()), std::string(n_vertices, 'I'));
    for (const auto& [u, v] : edges) {
        std::string word(n_vertices, 'I');
        word[u] = 'Z';
        word[v] = 'Z';
        h.add_term(0.5, word);
    }
    return h;
}

MaxCutInstance make_instance(int n_vertices, std::vector<std::pair<int, int>> edges) {
    if (n_vertices < 2) throw contract_error("make_instance: need at least two vertices");
    if (n_vertices > 20) throw resource_error("make_instance: brute force capped at 20 vertices");
    std::set<std::pair<int, int>> seen;
    for (auto& e : edges) {
        if (e.first == e.second) throw contract_error("make_instance: self-loop");
        if (e.first > e.second) std::swap(e.first, e.second);
        if (e.first < 0 || e.second >= n_vertices)
            throw contract_error("make_instance: vertex out of range");
        if (!seen.insert(e).second) throw contract_error("make_instance: duplicate edge");
    }
    std::sort(edges.begin(), edges.end());

    MaxCutInstance inst;
    inst.n_vertices = n_vertices;
    inst.edges = std::move(edges);
    inst.hamiltonian = maxcut_hamiltonian(n_vertices, inst.edges);

    const std::uint64_t count = std::uint64_t(1) << n_vertices;
    int best = 0;
    for (std::uint64_t b = 0; b < count; ++b)
        best = std::max(best, cut_value(inst.edges, n_vertices, b));
    inst.c_max = best;
    for (std::uint64_t b = 0; b < count; ++b)
        if (cut_value(inst.edges, n_vertices, b) == best) inst.ground_bitstrings.push_back(b);
    return inst;
}

MaxCutInstance erdos_renyi(int n_vertices, double edge_prob, std::uint64_t seed) {
    if (n_vertices < 2) throw contract_error("erdos_renyi: need at least two vertices");
    if (edge_prob < 0.0 || edge_prob > 1.0)
        throw contract_error("erdos_renyi: edge probability outside [0, 1]");
    Rng rng(seed);
    for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < n_vertices; ++u)
            for (int v = u + 1; v < n_vertices; ++v)
                if (rng.uniform() < edge_prob) edges.emplace_back(u, v);
        if (!edges.empty()) return make_instance(n_vertices, std::move(edges));
    }
    throw contract_error("erdos_renyi: could not sample a graph with edges (edge_prob too small)");
}

void write_edgelist(const std::string& path, const MaxCutInstance& instance) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write " + path);
    out << instance.n_vertices << ' ' << instance.edges.size() << "\n";
    for (const auto& [u, v] : instance.edges) out << u << ' ' << v << "\n";
}

MaxCutInstance read_edgelist(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read " + path);
    int n = 0;
    std::size_t m = 0;
    if (!(in >> n >> m)) throw config_error(path + ": malformed edge-list header");
    std::vector<std::pair<int, int>> edges(m);
    for (auto& [u, v] : edges)
        if (!(in >> u >> v)) throw config_error(path + ": truncated edge list");
    return make_instance(n, std::move(edges));
}

DensityMatrix qaoa_state(const MaxCutInstance& instance, const QaoaParams& params,
                         const std::optional<NoiseModel>& model) {
    check_p1(params);
    const int n = instance.n_vertices;
    const Eigen::Index d = Eigen::Index(1) << n;
    const double alpha = params.alpha[0];
    const double beta = params.beta[0];

    Matrix rho = Matrix::Constant(d, d, cd(1.0 / static_cast<double>(d), 0.0));
    for (const auto& [u, v] : instance.edges) {
        kernels::conjugate_diagonal_unitary(rho, zz_phases(n, u, v, alpha));
        if (model) {
            for (int q : {u, v}) {
                if (model->kind == ChannelKind::Depolarizing)
                    kernels::depolarize(rho, n, q, model->eps_two_qubit);
                else
                    kernels::dephase(rho, n, q, model->eps_two_qubit);
            }
        }
    }
    const Eigen::Matrix2cd mixer = mixer_unitary(beta);
    for (int q = 0; q < n; ++q) {
        kernels::conjugate_single_qubit_unitary(rho, n, q, mixer);
        // Single-qubit gates depolarize regardless of the two-qubit channel.
        if (model) kernels::depolarize(rho, n, q, model->eps_single_qubit);
    }
    return DensityMatrix::unchecked(n, std::move(rho));
}

PureState qaoa_statevector(const MaxCutInstance& instance, const QaoaParams& params) {
    check_p1(params);
    const int n = instance.n_vertices;
    const Eigen::Index d = Eigen::Index(1) << n;
    const double alpha = params.alpha[0];
    const double beta = params.beta[0];

    Vector psi = Vector::Constant(d, cd(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
    for (const auto& [u, v] : instance.edges) psi.array() *= zz_phases(n, u, v, alpha).array();
    const Eigen::Matrix2cd u = mixer_unitary(beta);
    for (int q = 0; q < n; ++q) {
        const Eigen::Index mask = Eigen::Index(1) << (n - 1 - q);
        for (Eigen::Index b = 0; b < d; ++b) {
            if ((b & mask) != 0) continue;
            const cd a0 = psi[b];
            const cd a1 = psi[b | mask];
            psi[b] = u(0, 0) * a0 + u(0, 1) * a1;
            psi[b | mask] = u(1, 0) * a0 + u(1, 1) * a1;
        }
    }
    return PureState::from_amplitudes(n, std::move(psi));
}

double cost(const MaxCutInstance& instance, const QaoaParams& params,
            const std::optional<NoiseModel>& model) {
    if (!model) {
        const PureState psi = qaoa_statevector(instance, params);
        const Eigen::VectorXd diag = instance.hamiltonian.diagonal();
        double value = 0.0;
        for (Eigen::Index b = 0; b < diag.size(); ++b)
            value += diag[b] * std::norm(psi.amplitudes()[b]);
        return value;
    }
    return expectation(qaoa_state(instance, params, model), instance.hamiltonian);
}

double mitigated_cost(const MaxCutInstance& instance, const QaoaParams& params,
                      const NoiseModel& model) {
    const DensityMatrix rho = qaoa_state(instance, params, model);
    return simulate_vd(rho, instance.hamiltonian, model).mitigated;
}

OptimizeResult optimize(const MaxCutInstance& instance, const std::optional<NoiseModel>& model,
                        Objective objective, const std::optional<QaoaParams>& initial,
                        const OptimizeOptions& options) {
    int evals = 0;
    const auto evaluate = [&](double alpha, double beta) {
        ++evals;
        const QaoaParams p = QaoaParams::p1(alpha, beta);
        if (!model) return cost(instance, p, std::nullopt);
        if (objective == Objective::Cost) return cost(instance, p, model);
        if (options.circuit_objective) return mitigated_cost(instance, p, *model);
        return noisy_mitigated_analytic(qaoa_state(instance, p, *model), instance.hamiltonian,
                                        *model);
    };

    std::array<double, 2> start{0.0, 0.0};
    double start_value;
    if (initial) {
        check_p1(*initial);
        start = {initial->alpha[0], initial->beta[0]};
        start_value = evaluate(start[0], start[1]);
    } else {
        start_value = std::numeric_limits<double>::infinity();
        for (int i = 0; i < options.grid_alpha; ++i) {
            const double alpha = M_PI * i / (options.grid_alpha - 1);
            for (int j = 0; j < options.grid_beta; ++j) {
                const double beta = 0.5 * M_PI * j / (options.grid_beta - 1);
                const double value = evaluate(alpha, beta);
                if (value < start_value) {
                    start_value = value;
                    start = {alpha, beta};
                }
            }
        }
    }

    const Simplex2Result polish = nelder_mead_2d(
        [&](double a, double b) { return evaluate(a, b); }, start, options.polish_step,
        options.polish_tol, options.polish_max_evals);

    OptimizeResult result;
    if (polish.value <= start_value) {
        result.params = QaoaParams::p1(polish.x[0], polish.x[1]);
        result.value = polish.value;
        result.polish_ok = polish.converged;
    } else {
        // Fall back to the pre-polish optimum.
        result.params = QaoaParams::p1(start[0], start[1]);
        result.value = start_value;
        result.polish_ok = false;
    }
    result.evaluations = evals;
    return result;
}

std::vector<SweepRecord> noise_sweep(const MaxCutInstance& instance, ChannelKind kind,
                                     const std::vector<double>& eps_grid,
                                     const SweepOptions& options) {
    if (eps_grid.empty() || eps_grid.front() != 0.0 ||
        !std::is_sorted(eps_grid.begin(), eps_grid.end()))
        throw contract_error("noise_sweep: eps grid must be ascending and start at 0");
    if (instance.c_max < 1) throw contract_error("noise_sweep: instance has no cut to approximate");

    const PauliObservable& h = instance.hamiltonian;
    const double neg_cmax = -static_cast<double>(instance.c_max);

    const OptimizeResult cold = optimize(instance, std::nullopt, Objective::Cost, std::nullopt);
    const double ratio_ideal = cold.value / neg_cmax;

    std::vector<SweepRecord> records;
    records.reserve(eps_grid.size());
    QaoaParams warm_unmit = cold.params;
    QaoaParams warm_mit = cold.params;

    for (const double eps : eps_grid) {
        SweepRecord rec;
        rec.instance_id = options.instance_id;
        rec.seed = options.seed;
        rec.channel = kind;
        rec.eps = eps;
        rec.ratio_ideal = ratio_ideal;

        if (eps == 0.0) {
            const DensityMatrix rho0 = qaoa_state(instance, cold.params, std::nullopt);
            rec.cost_unmitigated = cold.value;
            rec.cost_mitigated = cold.value;
            rec.min_samples_unmitigated =
                min_samples(variance_unmitigated(rho0, h, 1), options.variance_threshold);
            rec.min_samples_mitigated =
                min_samples(variance_mitigated_noiseless(rho0, h, 1), options.variance_threshold);
            const auto mism = coherent_mismatch(rho0, qaoa_statevector(instance, cold.params));
            rec.coherent_mismatch = mism.value;
            rec.mismatch_reliable = mism.reliable;
            rec.alpha_opt = cold.params.alpha[0];
            rec.beta_opt = cold.params.beta[0];
        } else {
            const NoiseModel model = NoiseModel::make(kind, eps);
            const OptimizeResult res_u =
                optimize(instance, model, Objective::Cost, warm_unmit);
            warm_unmit = res_u.params;
            const OptimizeResult res_m =
                optimize(instance, model, Objective::MitigatedCost, warm_mit);
            warm_mit = res_m.params;

            const DensityMatrix rho_u = qaoa_state(instance, warm_unmit, model);
            rec.cost_unmitigated = expectation(rho_u, h);
            rec.min_samples_unmitigated =
                min_samples(variance_unmitigated(rho_u, h, 1), options.variance_threshold);

            const DensityMatrix rho_m = qaoa_state(instance, warm_mit, model);
            if (kind == ChannelKind::Dephasing) {
                rec.cost_mitigated = simulate_vd(rho_m, h, model).mitigated;
                rec.min_samples_mitigated = min_samples(
                    variance_mitigated_dephasing(rho_m, h, model, 1), options.variance_threshold);
            } else {
                // One circuit run yields the mitigated value and the moments
                // the variance estimate needs.
                const VdMoments moments = vd_measurement_moments(rho_m, h, model);
                rec.cost_mitigated = moments.numerator / moments.denominator;
                rec.min_samples_mitigated = min_samples(
                    variance_from_vd_moments(moments, 1), options.variance_threshold);
            }
            const auto mism = coherent_mismatch(rho_m, qaoa_statevector(instance, warm_mit));
            rec.coherent_mismatch = mism.value;
            rec.mismatch_reliable = mism.reliable;
            rec.alpha_opt = warm_mit.alpha[0];
            rec.beta_opt = warm_mit.beta[0];
        }
        rec.ratio_unmitigated = rec.cost_unmitigated / neg_cmax;
        rec.ratio_mitigated = rec.cost_mitigated / neg_cmax;
        records.push_back(rec);
    }
    return records;
}

}  // namespace vd
