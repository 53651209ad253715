#pragma once

// Brute-force reference implementations used only by tests. Nothing here may
// share code with the modules it checks.

#include <Eigen/Dense>

#include <string>

namespace tpmvc::oracle {

struct OracleReport {
    std::string case_id;
    double reference = 0.0;
    double candidate = 0.0;
    double deviation = 0.0;
};

inline OracleReport report_case(std::string case_id, double reference, double candidate) {
    return {std::move(case_id), reference, candidate, std::abs(reference - candidate)};
}

/// Grid search over delta in {0, step, ..., sigma + 3 tau} for the minimizer
/// of 1/2 (delta - sigma)^2 + tau delta^p, refined by golden section around
/// the grid winner to 1e-8, with the zero boundary compared explicitly.
double brute_gst(double sigma, double tau, double p, double grid_step);

/// Exact simplex projection by support-set enumeration, dimension <= 8.
Eigen::VectorXd brute_simplex(const Eigen::VectorXd& v);

/// Best matched count over every injective row->column assignment of a
/// contingency table, by permutation enumeration (padded square side <= 7).
long brute_assignment(const Eigen::MatrixXi& counts);

/// Direct O(L^2) summation of the unnormalized forward DFT of one fiber.
Eigen::VectorXcd brute_dft_fiber(const Eigen::VectorXd& fiber);

/// Direct summation of the 1/L-scaled inverse DFT of one fiber.
Eigen::VectorXcd brute_idft_fiber(const Eigen::VectorXcd& fiber);

}  // namespace tpmvc::oracle
