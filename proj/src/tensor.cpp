#include "tpmvc/tensor.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>

namespace tpmvc {

namespace {

void check_same_dims(const Tensor3& a, const Tensor3& b) {
    if (a.rows != b.rows || a.cols != b.cols || a.depth != b.depth)
        throw std::invalid_argument("Tensor3: dimension mismatch");
}

void check_p(double p) {
    if (!(p > 0.0) || p > 1.0)
        throw std::invalid_argument("p must lie in (0, 1]");
}

}  // namespace

Eigen::MatrixXd Tensor3::lateral(Eigen::Index j) const {
    Eigen::MatrixXd out(rows, depth);
    for (Eigen::Index k = 0; k < depth; ++k) out.col(k) = frontal(k).col(j);
    return out;
}

void Tensor3::set_lateral(Eigen::Index j, const Eigen::MatrixXd& m) {
    if (m.rows() != rows || m.cols() != depth)
        throw std::invalid_argument("Tensor3::set_lateral: slice shape mismatch");
    for (Eigen::Index k = 0; k < depth; ++k) frontal(k).col(j) = m.col(k);
}

Tensor3& Tensor3::operator+=(const Tensor3& other) {
    check_same_dims(*this, other);
    for (Eigen::Index k = 0; k < depth; ++k) frontal(k) += other.frontal(k);
    return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& other) {
    check_same_dims(*this, other);
    for (Eigen::Index k = 0; k < depth; ++k) frontal(k) -= other.frontal(k);
    return *this;
}

Tensor3& Tensor3::operator*=(double s) {
    for (Eigen::Index k = 0; k < depth; ++k) frontal(k) *= s;
    return *this;
}

Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
Tensor3 operator*(Tensor3 a, double s) { return a *= s; }

Tensor3 stack_lateral_slices(const std::vector<Eigen::MatrixXd>& mats) {
    if (mats.empty()) throw std::invalid_argument("stack_lateral_slices: no slices");
    const Eigen::Index n = mats[0].rows(), c = mats[0].cols();
    const Eigen::Index v = static_cast<Eigen::Index>(mats.size());
    Tensor3 t(n, v, c);
    for (Eigen::Index j = 0; j < v; ++j) t.set_lateral(j, mats[static_cast<std::size_t>(j)]);
    return t;
}

double max_abs(const Tensor3& t) {
    double m = 0.0;
    for (const auto& s : t.slice) m = std::max(m, s.cwiseAbs().maxCoeff());
    return m;
}

ComplexTensor3 dft_dim3(const Tensor3& t) {
    ComplexTensor3 out(t.rows, t.cols, t.depth);
    const Eigen::Index n3 = t.depth;
    if (n3 == 1) {  // length-1 DFT is the identity
        out.frontal(0) = t.frontal(0).cast<std::complex<double>>();
        return out;
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> fiber(static_cast<std::size_t>(n3)), spectrum;
    for (Eigen::Index i = 0; i < t.rows; ++i) {
        for (Eigen::Index j = 0; j < t.cols; ++j) {
            for (Eigen::Index k = 0; k < n3; ++k)
                fiber[static_cast<std::size_t>(k)] = t.frontal(k)(i, j);
            fft.fwd(spectrum, fiber);
            for (Eigen::Index k = 0; k < n3; ++k)
                out.frontal(k)(i, j) = spectrum[static_cast<std::size_t>(k)];
        }
    }
    return out;
}

Tensor3 idft_dim3(const ComplexTensor3& t) {
    constexpr double kImagTol = 1e-8;
    Tensor3 out(t.rows, t.cols, t.depth);
    const Eigen::Index n3 = t.depth;
    double residue = 0.0;
    if (n3 == 1) {
        residue = t.frontal(0).imag().cwiseAbs().maxCoeff();
        if (residue > kImagTol) throw ConjugateSymmetryViolation(residue);
        out.frontal(0) = t.frontal(0).real();
        return out;
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> fiber(static_cast<std::size_t>(n3)), signal;
    for (Eigen::Index i = 0; i < t.rows; ++i) {
        for (Eigen::Index j = 0; j < t.cols; ++j) {
            for (Eigen::Index k = 0; k < n3; ++k)
                fiber[static_cast<std::size_t>(k)] = t.frontal(k)(i, j);
            fft.inv(signal, fiber);  // scaled by 1/n3
            for (Eigen::Index k = 0; k < n3; ++k) {
                const auto& z = signal[static_cast<std::size_t>(k)];
                residue = std::max(residue, std::abs(z.imag()));
                out.frontal(k)(i, j) = z.real();
            }
        }
    }
    if (residue > kImagTol) throw ConjugateSymmetryViolation(residue);
    return out;
}

double schatten_p_norm_pow(const Tensor3& t, double p) {
    check_p(p);
    const ComplexTensor3 spectrum = dft_dim3(t);
    double acc = 0.0;
    for (const auto& s : spectrum.slice) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s);
        const auto& sv = svd.singularValues();
        for (Eigen::Index j = 0; j < sv.size(); ++j)
            if (sv(j) > 0.0) acc += std::pow(sv(j), p);
    }
    return acc;
}

double schatten_p_norm(const Tensor3& t, double p) {
    return std::pow(schatten_p_norm_pow(t, p), 1.0 / p);
}

double gst_scalar(double sigma, double tau, double p) {
    check_p(p);
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    if (sigma < 0.0) throw std::invalid_argument("sigma must be non-negative");
    if (p == 1.0) return std::max(sigma - tau, 0.0);

    // Below this value of sigma the zero solution wins.
    const double base = 2.0 * tau * (1.0 - p);
    const double cutoff =
        std::pow(base, 1.0 / (2.0 - p)) + tau * p * std::pow(base, (p - 1.0) / (2.0 - p));
    if (sigma <= cutoff) return 0.0;

    double delta = sigma;
    for (int it = 0; it < 100; ++it) {
        const double next = sigma - tau * p * std::pow(delta, p - 1.0);
        if (std::abs(next - delta) < 1e-12) return next;
        delta = next;
    }
    return delta;
}

Tensor3 schatten_prox(const Tensor3& z, double tau, double p) {
    check_p(p);
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    ComplexTensor3 spectrum = dft_dim3(z);
    const Eigen::Index n3 = z.depth;
    const double threshold = tau * static_cast<double>(n3);

    for (Eigen::Index k = 0; k < n3; ++k) {
        const Eigen::Index partner = (n3 - k) % n3;
        if (partner < k) {
            // Conjugate-symmetric partner already thresholded; mirror it so
            // the inverse transform is exactly real.
            spectrum.frontal(k) = spectrum.frontal(partner).conjugate();
            continue;
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(spectrum.frontal(k),
                                               Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::VectorXd sv = svd.singularValues();
        for (Eigen::Index j = 0; j < sv.size(); ++j) sv(j) = gst_scalar(sv(j), threshold, p);
        spectrum.frontal(k) =
            svd.matrixU() * sv.asDiagonal() * svd.matrixV().adjoint();
    }
    return idft_dim3(spectrum);
}

}  // namespace tpmvc
