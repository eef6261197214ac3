#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "switchlab/density.hpp"
#include "switchlab/errors.hpp"
#include "switchlab/linalg.hpp"

namespace switchlab {

// ---------------------------------------------------------------------------
// Pauli channels: rho -> sum_u p_u sigma_u rho sigma_u.
// Equivalent affine picture: T = diag(1, l1, l2, l3).
// ---------------------------------------------------------------------------

inline Vec3 probs_to_lambdas(const Vec4& p) {
    return Vec3(p[0] + p[1] - p[2] - p[3],
                p[0] - p[1] + p[2] - p[3],
                p[0] - p[1] - p[2] + p[3]);
}

/// Inverse of probs_to_lambdas. Throws NotCompletelyPositive when the lambda
/// triple falls outside the tetrahedron with vertices (1,1,1), (1,-1,-1),
/// (-1,1,-1), (-1,-1,1).
inline Vec4 lambdas_to_probs(const Vec3& l) {
    Vec4 p((1 + l[0] + l[1] + l[2]) / 4, (1 + l[0] - l[1] - l[2]) / 4,
           (1 - l[0] + l[1] - l[2]) / 4, (1 - l[0] - l[1] + l[2]) / 4);
    for (int u = 0; u < 4; ++u) {
        if (p[u] < -1e-12) throw NotCompletelyPositive(p[u]);
        if (p[u] < 0) p[u] = 0;
    }
    return p / p.sum();
}

class PauliChannel {
public:
    explicit PauliChannel(const Vec4& p) : p_(p) {
        double s = 0;
        for (int u = 0; u < 4; ++u) {
            if (p_[u] < -1e-12) throw NotCompletelyPositive(p_[u]);
            if (p_[u] < 0) p_[u] = 0;
            s += p_[u];
        }
        if (std::abs(s - 1.0) > 1e-12) throw InvalidState("Pauli weights do not sum to 1");
        p_ /= s;
    }

    static PauliChannel from_lambdas(const Vec3& l) { return PauliChannel(lambdas_to_probs(l)); }
    static PauliChannel identity() { return PauliChannel(Vec4(1, 0, 0, 0)); }

    const Vec4& probs() const { return p_; }
    Vec3 lambdas() const { return probs_to_lambdas(p_); }

    Mat2 apply(const Mat2& rho) const {
        Mat2 out = Mat2::Zero();
        for (int u = 0; u < 4; ++u)
            if (p_[u] > 0) out += p_[u] * pauli(u) * rho * pauli(u);
        return out;
    }

private:
    Vec4 p_;
};

// ---------------------------------------------------------------------------
// Affine (T-matrix) picture: v = (1, a) -> T v, row 0 fixed to (1,0,0,0).
// ---------------------------------------------------------------------------

class TMatrix {
public:
    explicit TMatrix(const RMat4& m) : m_(m) {
        RMat4 ref = m_;
        ref.row(0) << 1, 0, 0, 0;
        if ((m_.row(0) - ref.row(0)).cwiseAbs().maxCoeff() > 1e-10)
            throw InvalidState("T-matrix row 0 must be (1,0,0,0)");
        m_ = ref;  // snap, so the trace-preservation row is exact
    }

    static TMatrix diagonal(const Vec3& l) {
        RMat4 m = RMat4::Zero();
        m(0, 0) = 1;
        for (int k = 0; k < 3; ++k) m(k + 1, k + 1) = l[k];
        return TMatrix(m);
    }

    /// Three-parameter non-unital family diag-block (k1, k1, k3) with a z
    /// translation t.
    static TMatrix non_unital(double k1, double k3, double t) {
        RMat4 m = RMat4::Zero();
        m(0, 0) = 1;
        m(1, 1) = k1;
        m(2, 2) = k1;
        m(3, 3) = k3;
        m(3, 0) = t;
        return TMatrix(m);
    }

    const RMat4& m() const { return m_; }
    Vec3 translation() const { return Vec3(m_(1, 0), m_(2, 0), m_(3, 0)); }
    Vec3 diag_lambdas() const { return Vec3(m_(1, 1), m_(2, 2), m_(3, 3)); }
    bool is_unital(double tolerance = 1e-12) const {
        return translation().cwiseAbs().maxCoeff() <= tolerance;
    }

    DensityMatrix apply(const DensityMatrix& rho) const {
        Vec3 a = rho.bloch();
        Eigen::Vector4d v(1, a[0], a[1], a[2]);
        Eigen::Vector4d w = m_ * v;
        return DensityMatrix::from_bloch(Vec3(w[1], w[2], w[3]) / w[0]);
    }

private:
    RMat4 m_;
};

// ---------------------------------------------------------------------------
// Kraus-level machinery shared by channels and trace-decreasing CP maps.
// ---------------------------------------------------------------------------

inline double completeness_defect(const std::vector<Mat2>& kraus) {
    Mat2 s = Mat2::Zero();
    for (const auto& k : kraus) s += k.adjoint() * k;
    return (s - Mat2::Identity()).cwiseAbs().maxCoeff();
}

inline Mat2 apply_kraus(const std::vector<Mat2>& kraus, const Mat2& rho) {
    Mat2 out = Mat2::Zero();
    for (const auto& k : kraus) out += k * rho * k.adjoint();
    return out;
}

/// Pauli transfer matrix R(nu, mu) = 1/2 Tr[sigma_nu M(sigma_mu)].
inline RMat4 transfer_from_kraus(const std::vector<Mat2>& kraus) {
    RMat4 r;
    for (int mu = 0; mu < 4; ++mu) {
        Mat2 out = apply_kraus(kraus, pauli(mu));
        for (int nu = 0; nu < 4; ++nu) r(nu, mu) = 0.5 * (pauli(nu) * out).trace().real();
    }
    return r;
}

/// Choi state (M ox id)(|Phi+><Phi+|), trace-1 convention for channels.
inline Mat4 choi_from_kraus(const std::vector<Mat2>& kraus) {
    Mat4 c = Mat4::Zero();
    for (const auto& k : kraus) {
        Eigen::Vector4cd v;
        for (int r = 0; r < 2; ++r)
            for (int i = 0; i < 2; ++i) v[2 * r + i] = k(r, i);
        c += 0.5 * v * v.adjoint();
    }
    return c;
}

inline Mat4 choi_from_transfer(const RMat4& r) {
    Mat4 c = Mat4::Zero();
    for (int nu = 0; nu < 4; ++nu)
        for (int mu = 0; mu < 4; ++mu)
            c += 0.25 * r(nu, mu) * kron2(pauli(nu), pauli(mu).transpose());
    return c;
}

/// Fix the global phase so the largest-magnitude entry is real positive.
inline Mat2 canonical_phase(const Mat2& k) {
    int bi = 0, bj = 0;
    double best = -1;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (std::abs(k(i, j)) > best) {
                best = std::abs(k(i, j));
                bi = i;
                bj = j;
            }
    if (best <= 0) return k;
    cd phase = k(bi, bj) / best;
    return k * std::conj(phase);
}

/// Minimal Kraus set from a Choi state via eigendecomposition. Eigenvalues
/// below the cutoff are dropped; throws NotCompletelyPositive for eigenvalues
/// below -tol::psd_choi.
inline std::vector<Mat2> kraus_from_choi(const Mat4& choi) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(choi);
    if (es.eigenvalues().minCoeff() < -tol::psd_choi)
        throw NotCompletelyPositive(es.eigenvalues().minCoeff());
    std::vector<Mat2> kraus;
    for (int n = 0; n < 4; ++n) {
        double lam = es.eigenvalues()[n];
        if (lam <= tol::kraus_cutoff) continue;
        Eigen::Vector4cd v = es.eigenvectors().col(n);
        Mat2 k;
        for (int r = 0; r < 2; ++r)
            for (int i = 0; i < 2; ++i) k(r, i) = std::sqrt(2.0 * lam) * v[2 * r + i];
        kraus.push_back(canonical_phase(k));
    }
    return kraus;
}

inline std::vector<Mat2> kraus_from_tmatrix(const TMatrix& t) {
    return kraus_from_choi(choi_from_transfer(t.m()));
}

// ---------------------------------------------------------------------------
// CPMap: completely positive, possibly trace-decreasing (a switch branch).
// ---------------------------------------------------------------------------

class CPMap {
public:
    CPMap() = default;
    explicit CPMap(std::vector<Mat2> kraus) : kraus_(std::move(kraus)) { prune(); }

    static CPMap zero() { return CPMap(); }

    bool is_zero() const { return kraus_.empty(); }
    const std::vector<Mat2>& kraus() const { return kraus_; }

    Mat2 apply(const Mat2& rho) const { return apply_kraus(kraus_, rho); }
    Mat4 choi() const { return choi_from_kraus(kraus_); }
    RMat4 transfer() const { return transfer_from_kraus(kraus_); }
    double completeness() const { return completeness_defect(kraus_); }

    /// Adjoint in the trace inner product: Tr[M(rho) A] = Tr[rho M*(A)].
    CPMap dual() const {
        std::vector<Mat2> adj;
        adj.reserve(kraus_.size());
        for (const auto& k : kraus_) adj.push_back(k.adjoint());
        return CPMap(std::move(adj));
    }

private:
    void prune() {
        std::vector<Mat2> kept;
        for (const auto& k : kraus_)
            if (k.cwiseAbs().maxCoeff() > 1e-14) kept.push_back(k);
        kraus_ = std::move(kept);
    }

    std::vector<Mat2> kraus_;
};

// ---------------------------------------------------------------------------
// Channel: CPTP qubit map stored as Kraus operators with cached T-matrix and
// Choi forms.
// ---------------------------------------------------------------------------

class Channel {
public:
    static Channel from_kraus(std::vector<Mat2> kraus) {
        double defect = completeness_defect(kraus);
        if (defect > tol::completeness)
            throw InvalidState("Kraus set is not trace preserving (defect " +
                               std::to_string(defect) + ")");
        return Channel(std::move(kraus));
    }

    static Channel identity() { return from_kraus({Mat2::Identity()}); }

    static Channel unitary(const Mat2& u) {
        if ((u * u.adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff() > 1e-10)
            throw InvalidState("matrix is not unitary");
        return from_kraus({u});
    }

    static Channel pauli(const PauliChannel& pc) {
        std::vector<Mat2> kraus;
        for (int u = 0; u < 4; ++u)
            if (pc.probs()[u] > 0)
                kraus.push_back(std::sqrt(pc.probs()[u]) * switchlab::pauli(u));
        Channel ch(std::move(kraus));
        ch.pauli_ = pc;
        return ch;
    }

    static Channel from_lambdas(const Vec3& l) { return pauli(PauliChannel::from_lambdas(l)); }

    /// t rho + (1-t) I/2 with -1/3 <= t <= 1.
    static Channel depolarizing(double t) {
        if (t < -1.0 / 3.0 - 1e-12 || t > 1.0 + 1e-12) throw InvalidNoiseParameter(t);
        double p = 3.0 * (1.0 - t) / 4.0;
        p = std::min(1.0, std::max(0.0, p));
        return pauli(PauliChannel(Vec4(1 - p, p / 3, p / 3, p / 3)));
    }

    static Channel from_tmatrix(const TMatrix& t) {
        return from_kraus(switchlab::kraus_from_tmatrix(t));
    }

    const std::vector<Mat2>& kraus() const { return map_.kraus(); }
    const CPMap& map() const { return map_; }
    const TMatrix& tmatrix() const { return t_; }
    const Mat4& choi() const { return choi_; }

    /// Set when the channel was built as an explicit Pauli mixture.
    const std::optional<PauliChannel>& pauli_form() const { return pauli_; }

    Mat2 apply(const Mat2& rho) const { return map_.apply(rho); }
    DensityMatrix apply(const DensityMatrix& rho) const {
        if (rho.dim() != 2) throw DimensionMismatch("channel acts on 2x2 states");
        return DensityMatrix::qubit(map_.apply(rho.m2()));
    }

    CPMap dual() const { return map_.dual(); }

private:
    explicit Channel(std::vector<Mat2> kraus)
        : map_(std::move(kraus)), t_(transfer_from_kraus(map_.kraus())), choi_(map_.choi()) {}

    CPMap map_;
    TMatrix t_;
    Mat4 choi_;
    std::optional<PauliChannel> pauli_;
};

/// outer . inner; the Kraus set is the pairwise product set.
inline Channel compose(const Channel& outer, const Channel& inner) {
    std::vector<Mat2> kraus;
    kraus.reserve(outer.kraus().size() * inner.kraus().size());
    for (const auto& a : outer.kraus())
        for (const auto& b : inner.kraus()) kraus.push_back(a * b);
    return Channel::from_kraus(std::move(kraus));
}

}  // namespace switchlab
