#include "tpmvc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

namespace tpmvc {

namespace {

// Map arbitrary integer ids to 0..K-1, ascending by original value.
std::vector<int> relabel(const std::vector<int>& labels, int& k_out) {
    std::map<int, int> ids;
    for (int v : labels) ids.emplace(v, 0);
    int next = 0;
    for (auto& [value, id] : ids) id = next++;
    k_out = next;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) out[i] = ids[labels[i]];
    return out;
}

// Jonker-Volgenant shortest augmenting path, square cost matrix, minimizing.
// Returns row -> column.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
    const int dim = static_cast<int>(cost.rows());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(dim) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(dim) + 1, 0.0);
    std::vector<int> col_row(static_cast<std::size_t>(dim) + 1, 0);  // column -> assigned row
    std::vector<int> way(static_cast<std::size_t>(dim) + 1, 0);

    for (int i = 1; i <= dim; ++i) {
        col_row[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(dim) + 1, inf);
        std::vector<char> used(static_cast<std::size_t>(dim) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = col_row[static_cast<std::size_t>(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= dim; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= dim; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(col_row[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (col_row[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            col_row[static_cast<std::size_t>(j0)] = col_row[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_col(static_cast<std::size_t>(dim), -1);
    for (int j = 1; j <= dim; ++j)
        if (col_row[static_cast<std::size_t>(j)] > 0)
            row_col[static_cast<std::size_t>(col_row[static_cast<std::size_t>(j)]) - 1] = j - 1;
    return row_col;
}

// Maximum total count over injective row -> column assignments of a
// rectangular table (zero-padded to square).
long max_assignment_score(const Eigen::MatrixXi& counts) {
    const int rows = static_cast<int>(counts.rows());
    const int cols = static_cast<int>(counts.cols());
    if (rows == 0 || cols == 0) return 0;
    const int dim = std::max(rows, cols);
    Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) cost(i, j) = -static_cast<double>(counts(i, j));
    const std::vector<int> assign = min_cost_assignment(cost);
    long score = 0;
    for (int i = 0; i < rows; ++i)
        if (assign[static_cast<std::size_t>(i)] < cols)
            score += counts(i, assign[static_cast<std::size_t>(i)]);
    return score;
}

}  // namespace

ContingencyTable contingency(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.empty() || truth.empty())
        throw std::invalid_argument("contingency: empty labeling");
    if (pred.size() != truth.size())
        throw std::invalid_argument("contingency: labelings differ in length");
    int kp = 0, kt = 0;
    const std::vector<int> p = relabel(pred, kp);
    const std::vector<int> t = relabel(truth, kt);
    ContingencyTable table;
    table.counts = Eigen::MatrixXi::Zero(kp, kt);
    for (std::size_t i = 0; i < p.size(); ++i) ++table.counts(p[i], t[i]);
    return table;
}

Assignment hungarian_match(const ContingencyTable& table) {
    const int kp = static_cast<int>(table.counts.rows());
    const int kt = static_cast<int>(table.counts.cols());
    if (kp == 0 || kt == 0) throw std::invalid_argument("hungarian_match: empty table");

    Assignment result;
    result.matched = max_assignment_score(table.counts);
    result.map.assign(static_cast<std::size_t>(kp), -1);

    // Fix rows in order, preferring the smallest class that still reaches the
    // optimum; unmatched only when no class does.
    std::vector<char> used(static_cast<std::size_t>(kt), 0);
    long prefix = 0;
    for (int i = 0; i < kp; ++i) {
        const int rows_left = kp - i - 1;
        for (int j = 0; j < kt; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            Eigen::MatrixXi sub(rows_left, kt - 1 - static_cast<int>(std::count(
                                                        used.begin(), used.end(), 1)));
            int cc = 0;
            for (int j2 = 0; j2 < kt; ++j2) {
                if (used[static_cast<std::size_t>(j2)] || j2 == j) continue;
                for (int i2 = 0; i2 < rows_left; ++i2) sub(i2, cc) = table.counts(i + 1 + i2, j2);
                ++cc;
            }
            const long rest = (rows_left == 0 || cc == 0)
                                  ? 0
                                  : max_assignment_score(sub.leftCols(cc));
            if (prefix + table.counts(i, j) + rest == result.matched) {
                result.map[static_cast<std::size_t>(i)] = j;
                used[static_cast<std::size_t>(j)] = 1;
                prefix += table.counts(i, j);
                break;
            }
        }
    }
    return result;
}

double acc(const std::vector<int>& pred, const std::vector<int>& truth) {
    const ContingencyTable table = contingency(pred, truth);
    return static_cast<double>(hungarian_match(table).matched) /
           static_cast<double>(table.total());
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
    const ContingencyTable table = contingency(pred, truth);
    const double n = static_cast<double>(table.total());
    const Eigen::VectorXd row_sum = table.counts.rowwise().sum().cast<double>();
    const Eigen::VectorXd col_sum = table.counts.colwise().sum().transpose().cast<double>();

    double h_pred = 0.0, h_truth = 0.0, mutual = 0.0;
    for (Eigen::Index i = 0; i < row_sum.size(); ++i)
        if (row_sum(i) > 0.0) h_pred -= row_sum(i) / n * std::log(row_sum(i) / n);
    for (Eigen::Index j = 0; j < col_sum.size(); ++j)
        if (col_sum(j) > 0.0) h_truth -= col_sum(j) / n * std::log(col_sum(j) / n);
    for (Eigen::Index i = 0; i < table.counts.rows(); ++i)
        for (Eigen::Index j = 0; j < table.counts.cols(); ++j) {
            const double nij = table.counts(i, j);
            if (nij > 0.0) mutual += nij / n * std::log(n * nij / (row_sum(i) * col_sum(j)));
        }

    if (h_pred <= 0.0 && h_truth <= 0.0) return 1.0;  // both trivial partitions agree
    if (h_pred <= 0.0 || h_truth <= 0.0) return 0.0;
    return std::clamp(mutual / std::sqrt(h_pred * h_truth), 0.0, 1.0);
}

double purity(const std::vector<int>& pred, const std::vector<int>& truth) {
    const ContingencyTable table = contingency(pred, truth);
    long majority = 0;
    for (Eigen::Index i = 0; i < table.counts.rows(); ++i)
        majority += table.counts.row(i).maxCoeff();
    return static_cast<double>(majority) / static_cast<double>(table.total());
}

}  // namespace tpmvc
