#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

namespace tpmvc {

/// Thrown by idft_dim3 when the inverse transform is not real, i.e. the
/// input tensor violates conjugate symmetry along the third dimension.
struct ConjugateSymmetryViolation : std::runtime_error {
    explicit ConjugateSymmetryViolation(double residue)
        : std::runtime_error("inverse DFT has imaginary residue " + std::to_string(residue) +
                             " above tolerance 1e-8"),
          imag_residue(residue) {}
    double imag_residue;
};

/// Dense real third-order tensor stored as a stack of frontal slices.
/// Slice k is an n1 x n2 matrix; a lateral slice j is the n1 x n3 matrix
/// with entries (i, k) -> slice[k](i, j).
struct Tensor3 {
    Tensor3() = default;
    Tensor3(Eigen::Index n1, Eigen::Index n2, Eigen::Index n3)
        : rows(n1), cols(n2), depth(n3), slice(static_cast<std::size_t>(n3)) {
        if (n1 <= 0 || n2 <= 0 || n3 <= 0)
            throw std::invalid_argument("Tensor3: dimensions must be positive");
        for (auto& s : slice) s = Eigen::MatrixXd::Zero(n1, n2);
    }

    Eigen::Index rows = 0;   // n1
    Eigen::Index cols = 0;   // n2
    Eigen::Index depth = 0;  // n3, number of frontal slices
    std::vector<Eigen::MatrixXd> slice;

    Eigen::MatrixXd& frontal(Eigen::Index k) { return slice[static_cast<std::size_t>(k)]; }
    const Eigen::MatrixXd& frontal(Eigen::Index k) const {
        return slice[static_cast<std::size_t>(k)];
    }

    Eigen::MatrixXd lateral(Eigen::Index j) const;
    void set_lateral(Eigen::Index j, const Eigen::MatrixXd& m);

    Tensor3& operator+=(const Tensor3& other);
    Tensor3& operator-=(const Tensor3& other);
    Tensor3& operator*=(double s);
};

Tensor3 operator+(Tensor3 a, const Tensor3& b);
Tensor3 operator-(Tensor3 a, const Tensor3& b);
Tensor3 operator*(Tensor3 a, double s);

/// Complex counterpart of Tensor3, produced by dft_dim3.
struct ComplexTensor3 {
    ComplexTensor3() = default;
    ComplexTensor3(Eigen::Index n1, Eigen::Index n2, Eigen::Index n3)
        : rows(n1), cols(n2), depth(n3), slice(static_cast<std::size_t>(n3)) {
        if (n1 <= 0 || n2 <= 0 || n3 <= 0)
            throw std::invalid_argument("ComplexTensor3: dimensions must be positive");
        for (auto& s : slice) s = Eigen::MatrixXcd::Zero(n1, n2);
    }

    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    Eigen::Index depth = 0;
    std::vector<Eigen::MatrixXcd> slice;

    Eigen::MatrixXcd& frontal(Eigen::Index k) { return slice[static_cast<std::size_t>(k)]; }
    const Eigen::MatrixXcd& frontal(Eigen::Index k) const {
        return slice[static_cast<std::size_t>(k)];
    }
};

/// Stack per-view n x c matrices as lateral slices of an n x V x c tensor.
Tensor3 stack_lateral_slices(const std::vector<Eigen::MatrixXd>& mats);

/// Largest absolute entry; 0 for an empty tensor.
double max_abs(const Tensor3& t);

/// Unnormalized forward DFT along the third dimension, fiber by fiber.
ComplexTensor3 dft_dim3(const Tensor3& t);

/// Inverse DFT along the third dimension (scaled by 1/n3). The result must be
/// real: throws ConjugateSymmetryViolation if max |imag| of the inverse
/// exceeds 1e-8; smaller residue is discarded.
Tensor3 idft_dim3(const ComplexTensor3& t);

/// Tensor Schatten p-norm, 0 < p <= 1: the singular values of every
/// DFT-domain frontal slice, summed as (sum sigma^p)^(1/p).
double schatten_p_norm(const Tensor3& t, double p);

/// p-th power of schatten_p_norm, i.e. the plain sum of sigma^p. This is the
/// quantity that appears in regularized objectives.
double schatten_p_norm_pow(const Tensor3& t, double p);

/// Generalized soft-thresholding: global minimizer over delta >= 0 of
///   1/2 (delta - sigma)^2 + tau * delta^p.
/// For p = 1 this is max(sigma - tau, 0); for p < 1 the below-threshold
/// cutoff is closed-form and the surviving root is found by fixed-point
/// iteration (tolerance 1e-12, cap 100).
double gst_scalar(double sigma, double tau, double p);

/// Proximal operator of tau * ||.||_Sp^p at z:
///   argmin_x 1/2 ||x - z||_F^2 + tau ||x||_Sp^p.
/// Works per DFT-domain frontal slice via SVD and gst_scalar; the slice
/// subproblems carry the effective threshold tau * n3, matching the
/// unnormalized forward DFT convention of dft_dim3.
Tensor3 schatten_prox(const Tensor3& z, double tau, double p);

}  // namespace tpmvc
