#include "tpmvc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace tpmvc {

namespace {

double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

enum Coupling { kIndicatorSplit = 0, kTransitionSplit = 1, kIndicatorTensor = 2, kTransitionTensor = 3 };

}  // namespace

void ProblemConfig::validate() const {
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
        throw std::invalid_argument("lambda1 and lambda2 must be positive");
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("p must lie in (0, 1]");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (!(mu_init > 0.0) || !(mu_max >= mu_init))
        throw std::invalid_argument("penalty range must satisfy 0 < mu_init <= mu_max");
    if (!(eta >= 1.0)) throw std::invalid_argument("eta must be >= 1");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
}

SolverState init_state(const std::vector<AnchorGraph>& graphs, Eigen::Index clusters,
                       const ProblemConfig& cfg) {
    cfg.validate();
    if (graphs.empty()) throw std::invalid_argument("init_state: no anchor graphs");
    const Eigen::Index n = graphs[0].rows();
    const Eigen::Index m = graphs[0].cols();
    for (const auto& g : graphs)
        if (g.rows() != n || g.cols() != m)
            throw std::invalid_argument("init_state: anchor graphs disagree on shape");
    if (clusters < 1) throw std::invalid_argument("init_state: need at least one cluster");
    if (m < clusters)
        throw std::invalid_argument("init_state: fewer anchors than clusters");

    const int views = static_cast<int>(graphs.size());
    SolverState s;
    s.sample_indicator.assign(static_cast<std::size_t>(views), Eigen::MatrixXd::Zero(n, clusters));
    s.indicator_nonneg = s.sample_indicator;
    s.dual_indicator = s.sample_indicator;
    s.transition_simplex.assign(static_cast<std::size_t>(views), Eigen::MatrixXd::Zero(m, clusters));
    s.dual_transition = s.transition_simplex;

    // Seeded positive rows, normalized to probability distributions. A flat
    // 1/c start would make every graph-propagated column identical and the
    // first Procrustes target rank one.
    std::mt19937_64 rng(cfg.seed);
    s.anchor_transition.reserve(static_cast<std::size_t>(views));
    for (int v = 0; v < views; ++v) {
        Eigen::MatrixXd h(m, clusters);
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < clusters; ++j) h(i, j) = uniform_unit(rng);
            h.row(i) /= h.row(i).sum();
        }
        s.anchor_transition.push_back(std::move(h));
    }

    s.indicator_lowrank = Tensor3(n, views, clusters);
    s.dual_indicator_tensor = Tensor3(n, views, clusters);
    s.transition_lowrank = Tensor3(m, views, clusters);
    s.dual_transition_tensor = Tensor3(m, views, clusters);

    s.view_weights = Eigen::VectorXd::Constant(views, 1.0 / static_cast<double>(views));
    s.penalty.fill(cfg.mu_init);
    return s;
}

void update_indicator(SolverState& state, const std::vector<AnchorGraph>& graphs) {
    const double mu1 = state.penalty[kIndicatorSplit];
    const double mu3 = state.penalty[kIndicatorTensor];
    for (int v = 0; v < state.views(); ++v) {
        const auto u = static_cast<std::size_t>(v);
        Eigen::MatrixXd target =
            (2.0 / state.view_weights(v)) * (graphs[u].weights * state.anchor_transition[u]);
        target += mu1 * state.indicator_nonneg[u] - state.dual_indicator[u];
        target += mu3 * state.indicator_lowrank.lateral(v) - state.dual_indicator_tensor.lateral(v);

        Eigen::JacobiSVD<Eigen::MatrixXd> svd(target, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        if (sv.size() > 0 && sv(sv.size() - 1) <= 1e-12 * std::max(sv(0), 1e-300))
            state.rank_deficient_basis = true;
        state.sample_indicator[u] = svd.matrixU() * svd.matrixV().transpose();
    }
}

void update_transition(SolverState& state, const std::vector<AnchorGraph>& graphs) {
    const double mu2 = state.penalty[kTransitionSplit];
    const double mu4 = state.penalty[kTransitionTensor];
    const double ridge = 0.5 * (mu2 + mu4);
    if (!(ridge > 0.0)) throw std::runtime_error("update_transition: singular system");
    for (int v = 0; v < state.views(); ++v) {
        const auto u = static_cast<std::size_t>(v);
        const auto& s = graphs[u].weights;
        const double inv_alpha = 1.0 / state.view_weights(v);

        Eigen::MatrixXd gram = Eigen::MatrixXd(Eigen::SparseMatrix<double>(s.transpose() * s));
        gram *= inv_alpha;
        gram.diagonal().array() += ridge;

        Eigen::MatrixXd rhs = inv_alpha * (s.transpose() * state.sample_indicator[u]);
        rhs += 0.5 * (mu2 * state.transition_simplex[u] - state.dual_transition[u]);
        rhs += 0.5 * (mu4 * state.transition_lowrank.lateral(v) -
                      state.dual_transition_tensor.lateral(v));

        Eigen::LDLT<Eigen::MatrixXd> chol(gram);
        Eigen::MatrixXd h = chol.solve(rhs);
        h += chol.solve(rhs - gram * h);  // one refinement pass
        state.anchor_transition[u] = std::move(h);
    }
}

void update_nonneg_split(SolverState& state) {
    const double mu1 = state.penalty[kIndicatorSplit];
    for (int v = 0; v < state.views(); ++v) {
        const auto u = static_cast<std::size_t>(v);
        state.indicator_nonneg[u] =
            (state.sample_indicator[u] + state.dual_indicator[u] / mu1).cwiseMax(0.0);
    }
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
    const Eigen::Index n = v.size();
    if (n == 0) throw std::invalid_argument("project_simplex: empty vector");
    std::vector<double> sorted(v.data(), v.data() + n);
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double running = 0.0, gamma = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        running += sorted[static_cast<std::size_t>(j)];
        const double candidate = (1.0 - running) / static_cast<double>(j + 1);
        if (sorted[static_cast<std::size_t>(j)] + candidate > 0.0) gamma = candidate;
    }
    return (v.array() + gamma).cwiseMax(0.0);
}

void update_simplex_split(SolverState& state) {
    const double mu2 = state.penalty[kTransitionSplit];
    for (int v = 0; v < state.views(); ++v) {
        const auto u = static_cast<std::size_t>(v);
        const Eigen::MatrixXd target =
            state.anchor_transition[u] + state.dual_transition[u] / mu2;
        for (Eigen::Index i = 0; i < target.rows(); ++i)
            state.transition_simplex[u].row(i) =
                project_simplex(target.row(i).transpose()).transpose();
    }
}

void update_indicator_lowrank(SolverState& state, const ProblemConfig& cfg) {
    const double mu3 = state.penalty[kIndicatorTensor];
    const Tensor3 target =
        state.indicator_tensor() + state.dual_indicator_tensor * (1.0 / mu3);
    state.indicator_lowrank = schatten_prox(target, cfg.lambda1 / mu3, cfg.p);
}

void update_transition_lowrank(SolverState& state, const ProblemConfig& cfg) {
    const double mu4 = state.penalty[kTransitionTensor];
    const Tensor3 target =
        state.transition_tensor() + state.dual_transition_tensor * (1.0 / mu4);
    state.transition_lowrank = schatten_prox(target, cfg.lambda2 / mu4, cfg.p);
}

void update_view_weights(SolverState& state, const std::vector<AnchorGraph>& graphs) {
    const int views = state.views();
    Eigen::VectorXd fit(views);
    for (int v = 0; v < views; ++v) {
        const auto u = static_cast<std::size_t>(v);
        fit(v) = (graphs[u].weights * state.anchor_transition[u] - state.sample_indicator[u])
                     .squaredNorm();
    }
    if (fit.maxCoeff() <= 1e-24) {
        state.view_weights.setConstant(1.0 / static_cast<double>(views));
        return;
    }
    const Eigen::VectorXd roots = fit.cwiseSqrt();
    state.view_weights = roots / roots.sum();
}

void update_duals(SolverState& state) {
    for (int v = 0; v < state.views(); ++v) {
        const auto u = static_cast<std::size_t>(v);
        state.dual_indicator[u] +=
            state.penalty[kIndicatorSplit] * (state.sample_indicator[u] - state.indicator_nonneg[u]);
        state.dual_transition[u] += state.penalty[kTransitionSplit] *
                                    (state.anchor_transition[u] - state.transition_simplex[u]);
    }
    state.dual_indicator_tensor +=
        (state.indicator_tensor() - state.indicator_lowrank) * state.penalty[kIndicatorTensor];
    state.dual_transition_tensor +=
        (state.transition_tensor() - state.transition_lowrank) * state.penalty[kTransitionTensor];
}

void update_penalties(SolverState& state, const ProblemConfig& cfg) {
    for (auto& mu : state.penalty) mu = std::min(mu * cfg.eta, cfg.mu_max);
}

std::array<double, 4> residuals(const SolverState& state) {
    std::array<double, 4> r{0.0, 0.0, 0.0, 0.0};
    for (int v = 0; v < state.views(); ++v) {
        const auto u = static_cast<std::size_t>(v);
        r[0] = std::max(r[0], (state.sample_indicator[u] - state.indicator_nonneg[u])
                                  .cwiseAbs()
                                  .maxCoeff());
        r[1] = std::max(r[1], (state.anchor_transition[u] - state.transition_simplex[u])
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    r[2] = max_abs(state.indicator_tensor() - state.indicator_lowrank);
    r[3] = max_abs(state.transition_tensor() - state.transition_lowrank);
    return r;
}

double objective_value(const SolverState& state, const std::vector<AnchorGraph>& graphs,
                       const ProblemConfig& cfg) {
    double fit = 0.0;
    for (int v = 0; v < state.views(); ++v) {
        const auto u = static_cast<std::size_t>(v);
        fit += (graphs[u].weights * state.anchor_transition[u] - state.sample_indicator[u])
                   .squaredNorm() /
               state.view_weights(v);
    }
    return fit + cfg.lambda1 * schatten_p_norm_pow(state.indicator_tensor(), cfg.p) +
           cfg.lambda2 * schatten_p_norm_pow(state.transition_tensor(), cfg.p);
}

ClusteringResult fuse_and_label(const SolverState& state) {
    ClusteringResult result;
    const Eigen::Index n = state.samples(), c = state.clusters();

    double weight_sum = 0.0;
    result.fused_indicator = Eigen::MatrixXd::Zero(n, c);
    for (int v = 0; v < state.views(); ++v) {
        const double w = 1.0 / state.view_weights(v);
        result.fused_indicator += w * state.sample_indicator[static_cast<std::size_t>(v)];
        weight_sum += w;
    }
    result.fused_indicator /= weight_sum;

    result.labels.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index j = 1; j < c; ++j)
            if (result.fused_indicator(i, j) > result.fused_indicator(i, best)) best = j;
        result.labels[static_cast<std::size_t>(i)] = static_cast<int>(best) + 1;
    }

    for (int v = 0; v < state.views(); ++v) {
        const auto& h = state.anchor_transition[static_cast<std::size_t>(v)];
        std::vector<int> anchor_labels(static_cast<std::size_t>(h.rows()));
        for (Eigen::Index i = 0; i < h.rows(); ++i) {
            Eigen::Index best = 0;
            for (Eigen::Index j = 1; j < c; ++j)
                if (h(i, j) > h(i, best)) best = j;
            anchor_labels[static_cast<std::size_t>(i)] = static_cast<int>(best) + 1;
        }
        result.anchor_labels.push_back(std::move(anchor_labels));
    }
    return result;
}

void step(SolverState& state, const std::vector<AnchorGraph>& graphs, const ProblemConfig& cfg) {
    update_indicator(state, graphs);
    update_transition(state, graphs);
    update_nonneg_split(state);
    update_simplex_split(state);
    update_indicator_lowrank(state, cfg);
    update_transition_lowrank(state, cfg);
    update_view_weights(state, graphs);
    update_duals(state);
    update_penalties(state, cfg);
    ++state.iteration;
}

ClusteringResult run(const std::vector<AnchorGraph>& graphs, Eigen::Index clusters,
                     const ProblemConfig& cfg) {
    SolverState state = init_state(graphs, clusters, cfg);
    std::vector<IterationTrace> trace;
    trace.reserve(static_cast<std::size_t>(cfg.max_iter));
    bool converged = false;

    for (int it = 1; it <= cfg.max_iter; ++it) {
        step(state, graphs, cfg);
        IterationTrace entry;
        entry.iteration = it;
        entry.residual = residuals(state);
        entry.objective = objective_value(state, graphs, cfg);
        entry.view_weights = state.view_weights;
        trace.push_back(std::move(entry));
        const auto& r = trace.back().residual;
        if (*std::max_element(r.begin(), r.end()) < cfg.tol) {
            converged = true;
            break;
        }
    }

    ClusteringResult result = fuse_and_label(state);
    result.trace = std::move(trace);
    result.converged = converged;
    result.iterations = state.iteration;
    return result;
}

}  // namespace tpmvc
