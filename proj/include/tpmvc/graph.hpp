#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <string>
#include <vector>

namespace tpmvc {

/// Anchors selected for one dataset: per-view coordinate blocks of the same
/// m rows.
struct AnchorSet {
    Eigen::Index count = 0;                     // m
    std::vector<Eigen::MatrixXd> coordinates;   // one m x d_v block per view
    std::string source = "kmeans";
};

/// Row-stochastic sample-to-anchor transition matrix: n x m, every entry
/// non-negative, every row sums to 1, at most k nonzeros per row.
struct AnchorGraph {
    Eigen::SparseMatrix<double, Eigen::RowMajor> weights;

    Eigen::Index rows() const { return weights.rows(); }
    Eigen::Index cols() const { return weights.cols(); }
};

/// Squared Euclidean distances between the rows of two matrices with equal
/// feature dimension. Entries are clamped at 0 against rounding.
Eigen::MatrixXd pairwise_sqdist(const Eigen::MatrixXd& points, const Eigen::MatrixXd& anchors);

/// Pick m anchors by seeded k-means (k-means++ init, 50 Lloyd iterations cap)
/// on the horizontally concatenated views; the per-view anchor coordinates
/// are the corresponding column blocks of the centroids. Deterministic for a
/// fixed seed.
AnchorSet select_anchors(const std::vector<Eigen::MatrixXd>& views, Eigen::Index m,
                         std::uint64_t seed);

/// Closed-form k-NN simplex weights per row: with d_(1) <= ... <= d_(k+1) the
/// smallest squared distances of row i,
///   S_ij = (d_(k+1) - d_ij) / (k d_(k+1) - sum_{l<=k} d_(l))
/// on the k nearest anchors, zero elsewhere. Falls back to uniform 1/k over
/// the k nearest when the denominator vanishes (k+1 equidistant anchors).
AnchorGraph knn_simplex_graph(const Eigen::MatrixXd& sqdist, int k);

/// Per-feature min-max rescaling to [0, 1]; constant features map to 0.
Eigen::MatrixXd normalize_minmax(const Eigen::MatrixXd& features);

}  // namespace tpmvc
