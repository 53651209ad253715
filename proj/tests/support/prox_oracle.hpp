#pragma once

// Reference p=1 tensor prox used by both the unit and acceptance suites:
// direct-summation DFT, per-slice singular soft-thresholding at tau * depth,
// direct-summation inverse. Shares nothing with schatten_prox internals.

#include "tpmvc/tensor.hpp"

#include "oracle.hpp"

#include <Eigen/Dense>

namespace tpmvc::testing {

inline Tensor3 prox_p1_reference(const Tensor3& z, double tau) {
    const Eigen::Index n3 = z.depth;
    ComplexTensor3 spectrum(z.rows, z.cols, n3);
    for (Eigen::Index i = 0; i < z.rows; ++i)
        for (Eigen::Index j = 0; j < z.cols; ++j) {
            Eigen::VectorXd fiber(n3);
            for (Eigen::Index k = 0; k < n3; ++k) fiber(k) = z.frontal(k)(i, j);
            const Eigen::VectorXcd f = oracle::brute_dft_fiber(fiber);
            for (Eigen::Index k = 0; k < n3; ++k) spectrum.frontal(k)(i, j) = f(k);
        }
    const double threshold = tau * static_cast<double>(n3);
    for (Eigen::Index k = 0; k < n3; ++k) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(spectrum.frontal(k),
                                               Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::VectorXd sv = svd.singularValues();
        for (Eigen::Index j = 0; j < sv.size(); ++j) sv(j) = std::max(sv(j) - threshold, 0.0);
        spectrum.frontal(k) = svd.matrixU() * sv.asDiagonal() * svd.matrixV().adjoint();
    }
    Tensor3 out(z.rows, z.cols, n3);
    for (Eigen::Index i = 0; i < z.rows; ++i)
        for (Eigen::Index j = 0; j < z.cols; ++j) {
            Eigen::VectorXcd fiber(n3);
            for (Eigen::Index k = 0; k < n3; ++k) fiber(k) = spectrum.frontal(k)(i, j);
            const Eigen::VectorXcd s = oracle::brute_idft_fiber(fiber);
            for (Eigen::Index k = 0; k < n3; ++k) out.frontal(k)(i, j) = s(k).real();
        }
    return out;
}

}  // namespace tpmvc::testing
