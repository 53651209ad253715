#pragma once

#include "tpmvc/graph.hpp"
#include "tpmvc/tensor.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

namespace tpmvc {

struct ProblemConfig {
    double lambda1 = 100.0;  // weight of the sample-indicator tensor penalty
    double lambda2 = 100.0;  // weight of the anchor-transition tensor penalty
    double p = 0.8;          // Schatten exponent, in (0, 1]
    double mu_init = 1e-3;
    double mu_max = 1e9;
    double eta = 1.1;        // penalty growth factor
    double tol = 1e-6;       // threshold on the max consensus residual
    int max_iter = 200;
    std::uint64_t seed = 0;

    void validate() const;
};

/// All iterates of the alternating solver. Per-view matrices are indexed by
/// view; the two low-rank tensors stack the per-view matrices as lateral
/// slices (n x V x c and m x V x c).
struct SolverState {
    // per-view primal blocks
    std::vector<Eigen::MatrixXd> sample_indicator;   // n x c, orthonormal columns
    std::vector<Eigen::MatrixXd> anchor_transition;  // m x c
    std::vector<Eigen::MatrixXd> indicator_nonneg;   // n x c, >= 0 split of sample_indicator
    std::vector<Eigen::MatrixXd> transition_simplex; // m x c, row-stochastic split

    // multipliers for the two matrix splits
    std::vector<Eigen::MatrixXd> dual_indicator;
    std::vector<Eigen::MatrixXd> dual_transition;

    // tensor splits and their multipliers
    Tensor3 indicator_lowrank;       // n x V x c
    Tensor3 transition_lowrank;      // m x V x c
    Tensor3 dual_indicator_tensor;
    Tensor3 dual_transition_tensor;

    Eigen::VectorXd view_weights;    // simplex weights, one per view
    std::array<double, 4> penalty{}; // mu for the four consensus couplings

    int iteration = 0;
    bool rank_deficient_basis = false;  // set when a Procrustes target loses rank

    Eigen::Index samples() const { return sample_indicator.empty() ? 0 : sample_indicator[0].rows(); }
    Eigen::Index anchors() const { return anchor_transition.empty() ? 0 : anchor_transition[0].rows(); }
    Eigen::Index clusters() const { return sample_indicator.empty() ? 0 : sample_indicator[0].cols(); }
    int views() const { return static_cast<int>(sample_indicator.size()); }

    Tensor3 indicator_tensor() const { return stack_lateral_slices(sample_indicator); }
    Tensor3 transition_tensor() const { return stack_lateral_slices(anchor_transition); }
};

struct IterationTrace {
    int iteration = 0;
    std::array<double, 4> residual{};  // indicator split, transition split, two tensor splits
    double objective = 0.0;
    Eigen::VectorXd view_weights;
};

struct ClusteringResult {
    Eigen::MatrixXd fused_indicator;             // n x c weighted view average
    std::vector<int> labels;                     // per sample, in 1..c
    std::vector<std::vector<int>> anchor_labels; // per view, per anchor, in 1..c
    std::vector<IterationTrace> trace;
    bool converged = false;
    int iterations = 0;
};

/// Zero-initialize splits and multipliers, uniform view weights, and a seeded
/// random row-stochastic anchor transition per view. The sample indicator is
/// allocated but meaningless until the first update.
SolverState init_state(const std::vector<AnchorGraph>& graphs, Eigen::Index clusters,
                       const ProblemConfig& cfg);

/// Orthogonal-Procrustes update of each view's sample indicator: the closest
/// orthonormal-column matrix to the weighted combination of the graph-propagated
/// transitions, the non-negative split, and the low-rank tensor slice.
void update_indicator(SolverState& state, const std::vector<AnchorGraph>& graphs);

/// Ridge-regularized least-squares update of each view's anchor transition,
/// solved as an SPD system with one step of iterative refinement.
void update_transition(SolverState& state, const std::vector<AnchorGraph>& graphs);

/// Elementwise clamp of the indicator-plus-scaled-dual at zero.
void update_nonneg_split(SolverState& state);

/// Euclidean projection onto the probability simplex {q >= 0, sum q = 1}
/// via the sort-based pivot rule.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v);

/// Row-wise simplex projection of the transition-plus-scaled-dual.
void update_simplex_split(SolverState& state);

/// Schatten-p proximal step on the stacked sample indicators.
void update_indicator_lowrank(SolverState& state, const ProblemConfig& cfg);

/// Schatten-p proximal step on the stacked anchor transitions.
void update_transition_lowrank(SolverState& state, const ProblemConfig& cfg);

/// Closed-form simplex weights: sqrt of each view's fit residual, normalized.
/// Uniform when every residual is negligible.
void update_view_weights(SolverState& state, const std::vector<AnchorGraph>& graphs);

/// Gradient-ascent step on all four multipliers.
void update_duals(SolverState& state);

/// Geometric growth of the four penalties, capped at mu_max.
void update_penalties(SolverState& state, const ProblemConfig& cfg);

/// The four max-abs consensus gaps: indicator vs nonneg split, transition vs
/// simplex split, and the two tensor splits.
std::array<double, 4> residuals(const SolverState& state);

/// Weighted fit residual plus the two Schatten-p tensor penalties.
double objective_value(const SolverState& state, const std::vector<AnchorGraph>& graphs,
                       const ProblemConfig& cfg);

/// Inverse-weight average of the per-view indicators; hard labels by row
/// argmax (ties to the lowest cluster), anchor labels by per-view argmax.
ClusteringResult fuse_and_label(const SolverState& state);

/// One full pass over the update sequence, in order.
void step(SolverState& state, const std::vector<AnchorGraph>& graphs, const ProblemConfig& cfg);

/// Iterate until the max residual drops below cfg.tol or max_iter is reached.
/// A non-converged run is a valid result with converged = false.
ClusteringResult run(const std::vector<AnchorGraph>& graphs, Eigen::Index clusters,
                     const ProblemConfig& cfg);

}  // namespace tpmvc
