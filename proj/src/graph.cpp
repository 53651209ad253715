#include "tpmvc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace tpmvc {

namespace {

// Uniform double in (0, 1], built from the raw 53-bit draw so the mapping is
// identical across standard libraries.
double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

Eigen::VectorXd row_sq_norms(const Eigen::MatrixXd& m) {
    return m.rowwise().squaredNorm();
}

// Lloyd's algorithm with k-means++ seeding. Ties and empty clusters resolve
// deterministically: nearest center with the lowest index wins, an emptied
// cluster keeps its previous centroid.
Eigen::MatrixXd kmeans_centroids(const Eigen::MatrixXd& data, Eigen::Index k,
                                 std::uint64_t seed, int max_iter) {
    const Eigen::Index n = data.rows(), d = data.cols();
    std::mt19937_64 rng(seed);

    std::vector<Eigen::Index> chosen;
    chosen.reserve(static_cast<std::size_t>(k));
    std::vector<char> is_center(static_cast<std::size_t>(n), 0);

    const Eigen::Index first = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(n));
    chosen.push_back(first);
    is_center[static_cast<std::size_t>(first)] = 1;

    Eigen::VectorXd d2 =
        (data.rowwise() - data.row(first)).rowwise().squaredNorm();
    while (static_cast<Eigen::Index>(chosen.size()) < k) {
        const double total = d2.sum();
        Eigen::Index pick = -1;
        if (total > 0.0) {
            double u = uniform_unit(rng) * total;
            for (Eigen::Index i = 0; i < n; ++i) {
                u -= d2(i);
                if (u <= 0.0) { pick = i; break; }
            }
            if (pick < 0) pick = n - 1;
        }
        if (pick < 0 || is_center[static_cast<std::size_t>(pick)]) {
            // All remaining mass sits on duplicates of chosen centers; take
            // the first point that is not one yet.
            pick = -1;
            for (Eigen::Index i = 0; i < n; ++i)
                if (!is_center[static_cast<std::size_t>(i)]) { pick = i; break; }
            if (pick < 0) pick = 0;
        }
        chosen.push_back(pick);
        is_center[static_cast<std::size_t>(pick)] = 1;
        d2 = d2.cwiseMin((data.rowwise() - data.row(pick)).rowwise().squaredNorm());
    }

    Eigen::MatrixXd centroids(k, d);
    for (Eigen::Index j = 0; j < k; ++j) centroids.row(j) = data.row(chosen[static_cast<std::size_t>(j)]);

    std::vector<Eigen::Index> assign(static_cast<std::size_t>(n), -1);
    for (int it = 0; it < max_iter; ++it) {
        bool changed = false;
        Eigen::MatrixXd dist = pairwise_sqdist(data, centroids);
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::Index best = 0;
            double bestd = dist(i, 0);
            for (Eigen::Index j = 1; j < k; ++j)
                if (dist(i, j) < bestd) { bestd = dist(i, j); best = j; }
            if (assign[static_cast<std::size_t>(i)] != best) {
                assign[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }
        if (!changed) break;
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, d);
        Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(assign[static_cast<std::size_t>(i)]) += data.row(i);
            counts(assign[static_cast<std::size_t>(i)]) += 1.0;
        }
        for (Eigen::Index j = 0; j < k; ++j)
            if (counts(j) > 0.0) centroids.row(j) = sums.row(j) / counts(j);
    }
    return centroids;
}

}  // namespace

Eigen::MatrixXd pairwise_sqdist(const Eigen::MatrixXd& points, const Eigen::MatrixXd& anchors) {
    if (points.cols() != anchors.cols())
        throw std::invalid_argument("pairwise_sqdist: feature dimension mismatch");
    Eigen::MatrixXd d = (-2.0 * points * anchors.transpose());
    d.colwise() += row_sq_norms(points);
    d.rowwise() += row_sq_norms(anchors).transpose();
    return d.cwiseMax(0.0);
}

AnchorSet select_anchors(const std::vector<Eigen::MatrixXd>& views, Eigen::Index m,
                         std::uint64_t seed) {
    if (views.empty()) throw std::invalid_argument("select_anchors: no views");
    const Eigen::Index n = views[0].rows();
    if (m < 1 || m > n)
        throw std::invalid_argument("select_anchors: anchor count must satisfy 1 <= m <= n");

    Eigen::Index total_dim = 0;
    for (const auto& v : views) {
        if (v.rows() != n)
            throw std::invalid_argument("select_anchors: views disagree on sample count");
        total_dim += v.cols();
    }
    Eigen::MatrixXd stacked(n, total_dim);
    Eigen::Index offset = 0;
    for (const auto& v : views) {
        stacked.middleCols(offset, v.cols()) = v;
        offset += v.cols();
    }

    const Eigen::MatrixXd centroids = kmeans_centroids(stacked, m, seed, 50);

    AnchorSet anchors;
    anchors.count = m;
    anchors.source = "kmeans";
    offset = 0;
    for (const auto& v : views) {
        anchors.coordinates.push_back(centroids.middleCols(offset, v.cols()));
        offset += v.cols();
    }
    return anchors;
}

AnchorGraph knn_simplex_graph(const Eigen::MatrixXd& sqdist, int k) {
    const Eigen::Index n = sqdist.rows(), m = sqdist.cols();
    if (k < 1 || k >= m)
        throw std::invalid_argument("knn_simplex_graph: need 1 <= k < anchor count");

    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));

    for (Eigen::Index i = 0; i < n; ++i) {
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        // k+1 smallest distances, ties by anchor index
        std::partial_sort(order.begin(), order.begin() + k + 1, order.end(),
                          [&](Eigen::Index a, Eigen::Index b) {
                              return sqdist(i, a) != sqdist(i, b) ? sqdist(i, a) < sqdist(i, b)
                                                                  : a < b;
                          });
        const double cut = sqdist(i, order[static_cast<std::size_t>(k)]);
        double near_sum = 0.0;
        for (int l = 0; l < k; ++l) near_sum += sqdist(i, order[static_cast<std::size_t>(l)]);
        const double denom = static_cast<double>(k) * cut - near_sum;
        if (denom <= 1e-12) {
            const double w = 1.0 / static_cast<double>(k);
            for (int l = 0; l < k; ++l)
                entries.emplace_back(i, order[static_cast<std::size_t>(l)], w);
        } else {
            for (int l = 0; l < k; ++l) {
                const double w = (cut - sqdist(i, order[static_cast<std::size_t>(l)])) / denom;
                if (w > 0.0) entries.emplace_back(i, order[static_cast<std::size_t>(l)], w);
            }
        }
    }

    AnchorGraph graph;
    graph.weights.resize(n, m);
    graph.weights.setFromTriplets(entries.begin(), entries.end());
    graph.weights.makeCompressed();
    return graph;
}

Eigen::MatrixXd normalize_minmax(const Eigen::MatrixXd& features) {
    Eigen::MatrixXd out = features;
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
        const double lo = out.col(j).minCoeff(), hi = out.col(j).maxCoeff();
        if (hi > lo)
            out.col(j) = (out.col(j).array() - lo) / (hi - lo);
        else
            out.col(j).setZero();
    }
    return out;
}

}  // namespace tpmvc
