#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

namespace switchlab {

using cd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using RMat4 = Eigen::Matrix4d;
using Vec2c = Eigen::Vector2cd;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;

namespace tol {
inline constexpr double hermitian = 1e-10;
inline constexpr double trace_one = 1e-10;
inline constexpr double psd_state = 1e-10;
inline constexpr double psd_choi = 1e-9;
inline constexpr double completeness = 1e-10;
inline constexpr double ppt = 1e-9;
inline constexpr double kraus_cutoff = 1e-12;
}  // namespace tol

/// Pauli basis, sigma_0 = I.
inline const Mat2& pauli(int mu) {
    static const std::array<Mat2, 4> sigma = [] {
        std::array<Mat2, 4> s;
        s[0] << 1, 0, 0, 1;
        s[1] << 0, 1, 1, 0;
        s[2] << 0, cd(0, -1), cd(0, 1), 0;
        s[3] << 1, 0, 0, -1;
        return s;
    }();
    return sigma[mu];
}

inline Mat2 ket0_proj() { return (Mat2() << 1, 0, 0, 0).finished(); }
inline Mat2 ket1_proj() { return (Mat2() << 0, 0, 0, 1).finished(); }

inline Vec2c plus_ket() { return Vec2c(1, 1) / std::sqrt(2.0); }
inline Vec2c minus_ket() { return Vec2c(1, -1) / std::sqrt(2.0); }

inline Mat2 projector(const Vec2c& v) { return v * v.adjoint(); }

/// Kronecker product, first factor = system, second = control.
inline Mat4 kron2(const Mat2& a, const Mat2& b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

/// Trace out the second (control) factor.
inline Mat2 ptrace_second(const Mat4& m) {
    Mat2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
    return out;
}

/// Trace out the first (system) factor.
inline Mat2 ptrace_first(const Mat4& m) {
    Mat2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out(i, j) = m(i, j) + m(2 + i, 2 + j);
    return out;
}

/// Partial transpose on the second factor.
inline Mat4 partial_transpose_second(const Mat4& m) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = m.block<2, 2>(2 * i, 2 * j).transpose();
    return out;
}

inline double hermiticity_defect(const Eigen::MatrixXcd& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Smallest eigenvalue of a (numerically) Hermitian matrix.
inline double min_eigenvalue(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline double min_eigenvalue4(const Mat4& m) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline bool is_psd(const Eigen::MatrixXcd& m, double tolerance) {
    return min_eigenvalue(m) >= -tolerance;
}

template <typename A, typename B>
double max_abs_diff(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace switchlab
