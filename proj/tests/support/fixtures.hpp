#pragma once

#include "tpmvc/graph.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace tpmvc::testing {

inline AnchorGraph graph_from_dense(const Eigen::MatrixXd& m) {
    AnchorGraph g;
    g.weights = m.sparseView();
    g.weights.makeCompressed();
    return g;
}

inline AnchorGraph uniform_graph(Eigen::Index n, Eigen::Index m) {
    return graph_from_dense(
        Eigen::MatrixXd::Constant(n, m, 1.0 / static_cast<double>(m)));
}

/// The pipeline's graph-construction steps, for tests that drive the solver
/// directly: min-max normalize, k-means anchors, k-NN simplex weights.
inline std::vector<AnchorGraph> build_graphs(const std::vector<Eigen::MatrixXd>& views,
                                             Eigen::Index m, int k, std::uint64_t seed) {
    std::vector<Eigen::MatrixXd> scaled;
    scaled.reserve(views.size());
    for (const auto& v : views) scaled.push_back(normalize_minmax(v));
    const AnchorSet anchors = select_anchors(scaled, m, seed);
    std::vector<AnchorGraph> graphs;
    graphs.reserve(views.size());
    for (std::size_t v = 0; v < scaled.size(); ++v)
        graphs.push_back(knn_simplex_graph(pairwise_sqdist(scaled[v], anchors.coordinates[v]), k));
    return graphs;
}

}  // namespace tpmvc::testing
