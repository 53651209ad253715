#pragma once

#include <Eigen/Dense>

#include <vector>

namespace tpmvc {

/// Cross-tabulation of two labelings: counts(i, j) = samples with predicted
/// cluster i and true class j, after relabeling ids to contiguous ranges.
struct ContingencyTable {
    Eigen::MatrixXi counts;  // predicted clusters x true classes

    long total() const { return counts.size() == 0 ? 0 : counts.sum(); }
};

ContingencyTable contingency(const std::vector<int>& pred, const std::vector<int>& truth);

/// Optimal one-to-one matching of predicted clusters to true classes.
struct Assignment {
    std::vector<int> map;  // per predicted cluster: matched true class, -1 if unmatched
    long matched = 0;      // total count on the matched cells
};

/// Maximize the matched count over injective cluster-to-class assignments
/// (rectangular tables are zero-padded). Among optima, returns the
/// lexicographically smallest mapping.
Assignment hungarian_match(const ContingencyTable& table);

/// Fraction of samples on the optimal matching.
double acc(const std::vector<int>& pred, const std::vector<int>& truth);

/// Mutual information over the geometric mean of the entropies, natural log.
/// Two trivial single-cluster partitions score 1; a trivial partition against
/// a non-trivial one scores 0.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

/// Fraction of samples in their cluster's majority class.
double purity(const std::vector<int>& pred, const std::vector<int>& truth);

}  // namespace tpmvc
