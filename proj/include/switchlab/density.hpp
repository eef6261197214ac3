#pragma once

#include <Eigen/Dense>

#include "switchlab/errors.hpp"
#include "switchlab/linalg.hpp"

namespace switchlab {

/// Hermitian, unit-trace, PSD matrix of dimension 2 (qubit) or 4 (qubit pair
/// or system+control). Immutable after construction; every factory validates.
class DensityMatrix {
public:
    static DensityMatrix qubit(const Mat2& m) { return DensityMatrix(m); }
    static DensityMatrix two_qubit(const Mat4& m) { return DensityMatrix(m); }

    static DensityMatrix from_bloch(const Vec3& a) {
        const double n = a.norm();
        if (n > 1.0 + 1e-12) throw BlochOutOfBall(n);
        Mat2 m = 0.5 * pauli(0);
        for (int k = 0; k < 3; ++k) m += 0.5 * a[k] * pauli(k + 1);
        return DensityMatrix(m);
    }

    static DensityMatrix maximally_mixed() { return from_bloch(Vec3::Zero()); }

    static DensityMatrix pure(const Vec2c& v) {
        Vec2c u = v.normalized();
        return DensityMatrix(Mat2(u * u.adjoint()));
    }

    static DensityMatrix plus_state() { return pure(plus_ket()); }

    /// |Phi+><Phi+| with |Phi+> = (|00> + |11>)/sqrt(2).
    static DensityMatrix bell_phi_plus() {
        Eigen::Vector4cd v;
        v << 1, 0, 0, 1;
        v /= std::sqrt(2.0);
        return DensityMatrix(Mat4(v * v.adjoint()));
    }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXcd& mat() const { return m_; }

    Mat2 m2() const {
        if (dim() != 2) throw DimensionMismatch("expected a 2x2 state");
        return m_;
    }
    Mat4 m4() const {
        if (dim() != 4) throw DimensionMismatch("expected a 4x4 state");
        return m_;
    }

    Vec3 bloch() const {
        Mat2 m = m2();
        Vec3 a;
        for (int k = 0; k < 3; ++k) a[k] = (pauli(k + 1) * m).trace().real();
        return a;
    }

private:
    template <typename M>
    explicit DensityMatrix(const M& m) : m_(m) {
        if (hermiticity_defect(m_) > tol::hermitian)
            throw InvalidState("density matrix is not Hermitian");
        if (std::abs(m_.trace().real() - 1.0) > tol::trace_one ||
            std::abs(m_.trace().imag()) > tol::trace_one)
            throw InvalidState("density matrix trace differs from 1");
        if (min_eigenvalue(m_) < -tol::psd_state)
            throw InvalidState("density matrix has a negative eigenvalue");
    }

    Eigen::MatrixXcd m_;
};

inline DensityMatrix bloch_to_density(const Vec3& a) { return DensityMatrix::from_bloch(a); }
inline Vec3 density_to_bloch(const DensityMatrix& rho) { return rho.bloch(); }

}  // namespace switchlab
