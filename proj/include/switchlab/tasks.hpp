#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "switchlab/channel.hpp"
#include "switchlab/density.hpp"
#include "switchlab/switch_engine.hpp"

namespace switchlab {

// ---------------------------------------------------------------------------
// (2,2) random access code. Alice encodes a 2-bit string in a qubit, the
// channel acts, Bob measures M1 or M2 depending on which bit is queried.
// Strings and queries are uniform.
// ---------------------------------------------------------------------------

struct QracStrategy {
    std::array<Mat2, 4> encodings;            // index x1*2 + x2
    std::array<std::array<Mat2, 2>, 2> povms;  // povms[query][outcome]

    void validate() const {
        for (const auto& povm : povms) {
            if ((povm[0] + povm[1] - Mat2::Identity()).cwiseAbs().maxCoeff() > tol::completeness)
                throw InvalidState("POVM does not sum to identity");
            for (const auto& e : povm)
                if (min_eigenvalue(e) < -tol::psd_state)
                    throw InvalidState("POVM element is not PSD");
        }
    }

    /// Encodings on the xy equator, n = ((-1)^x1, (-1)^x2, 0)/sqrt(2), read
    /// out with sigma_x / sigma_y eigenprojectors. Optimal for the noiseless
    /// (2,2) game.
    static QracStrategy equatorial() {
        QracStrategy s;
        for (int x1 = 0; x1 < 2; ++x1)
            for (int x2 = 0; x2 < 2; ++x2) {
                Vec3 n(((x1 == 0) ? 1.0 : -1.0) / std::sqrt(2.0),
                       ((x2 == 0) ? 1.0 : -1.0) / std::sqrt(2.0), 0.0);
                s.encodings[x1 * 2 + x2] = DensityMatrix::from_bloch(n).m2();
            }
        for (int axis = 0; axis < 2; ++axis)
            for (int outcome = 0; outcome < 2; ++outcome)
                s.povms[axis][outcome] =
                    0.5 * (Mat2::Identity() + (outcome == 0 ? 1.0 : -1.0) * pauli(axis + 1));
        return s;
    }
};

/// Average success probability 1/8 sum_x Tr[ch(E(x)) (M1(x1) + M2(x2))].
inline double qrac_success(const QracStrategy& strategy, const Channel& ch) {
    double total = 0.0;
    for (int x1 = 0; x1 < 2; ++x1)
        for (int x2 = 0; x2 < 2; ++x2) {
            Mat2 out = ch.apply(strategy.encodings[x1 * 2 + x2]);
            total += std::real((out * (strategy.povms[0][x1] + strategy.povms[1][x2])).trace());
        }
    return total / 8.0;
}

/// Best classical (2,d) average success probability.
inline double qrac_classical_bound(int d) {
    if (d < 2) throw Error("qrac bounds require d >= 2");
    return 0.5 * (1.0 + 1.0 / d);
}

/// Best quantum (2,d) average success probability.
inline double qrac_quantum_bound(int d) {
    if (d < 2) throw Error("qrac bounds require d >= 2");
    return 0.5 * (1.0 + 1.0 / std::sqrt(double(d)));
}

// ---------------------------------------------------------------------------
// Two-setting steering witness F = |<sx ox sx> + <sz ox sz>| / sqrt(2).
// F > 1 certifies steerability of the shared state.
// ---------------------------------------------------------------------------

inline double steering_F(const Mat4& rho) {
    double xx = (rho * kron2(pauli(1), pauli(1))).trace().real();
    double zz = (rho * kron2(pauli(3), pauli(3))).trace().real();
    return std::abs(xx + zz) / std::sqrt(2.0);
}

inline double steering_F(const DensityMatrix& rho) { return steering_F(rho.m4()); }

/// (ch ox id) applied to a two-qubit state; the channel acts on subsystem A.
inline DensityMatrix steered_state(const Channel& ch, const DensityMatrix& rho_ab) {
    if (rho_ab.dim() != 4) throw DimensionMismatch("steered_state expects a 4x4 state");
    Mat4 out = Mat4::Zero();
    for (const auto& k : ch.kraus()) {
        Mat4 kk = kron2(k, Mat2::Identity());
        out += kk * rho_ab.m4() * kk.adjoint();
    }
    return DensityMatrix::two_qubit(out);
}

// ---------------------------------------------------------------------------
// The xy-mixing Pauli family phi(l3): weights ((1-l3)/4, (1+l3)/4, (1+l3)/4,
// (1-l3)/4), affine form diag(1, 0, 0, -l3). Entanglement breaking for every
// l3 in [-1, 1]; the switch plus standard correction turns it into
// diag(1, (1+l3)^2/4, (1+l3)^2/4, l3^2).
// ---------------------------------------------------------------------------

inline PauliChannel phi_family(double l3) {
    if (l3 < -1.0 - 1e-12 || l3 > 1.0 + 1e-12) throw Error("phi family requires |l3| <= 1");
    return PauliChannel(
        Vec4((1 - l3) / 4, (1 + l3) / 4, (1 + l3) / 4, (1 - l3) / 4));
}

inline Channel phi_switched_effective(double l3) {
    return switched_channel(Channel::pauli(phi_family(l3)).map(),
                            ControlledOp::standard_correction(), DensityMatrix::plus_state());
}

// ---------------------------------------------------------------------------
// Coherence-breaking channel E with affine entries T30 = t, T33 = lambda, and
// its behaviour under the switch followed by a controlled unitary
// U(theta, phi1, phi2) on the |-> outcome (omega = |+><+|).
// ---------------------------------------------------------------------------

/// Kraus operators in the sigma_z eigenbasis; CP requires |lambda| + |t| <= 1.
inline std::vector<Mat2> coherence_breaking_kraus(double lambda, double t) {
    std::array<double, 4> w = {0.5 * (1 - lambda - t), 0.5 * (1 + lambda - t),
                               0.5 * (1 - lambda + t), 0.5 * (1 + lambda + t)};
    for (double v : w)
        if (v < -1e-12) throw NotCompletelyPositive(v);
    std::vector<Mat2> ks(4, Mat2::Zero());
    ks[0](1, 0) = std::sqrt(std::max(0.0, w[0]));
    ks[1](1, 1) = std::sqrt(std::max(0.0, w[1]));
    ks[2](0, 1) = std::sqrt(std::max(0.0, w[2]));
    ks[3](0, 0) = std::sqrt(std::max(0.0, w[3]));
    return ks;
}

inline Channel coherence_breaking_channel(double lambda, double t) {
    return Channel::from_kraus(coherence_breaking_kraus(lambda, t));
}

inline Mat2 controlled_unitary_u(double theta, double phi1, double phi2) {
    Mat2 u;
    u(0, 0) = std::polar(std::cos(theta), phi1);
    u(0, 1) = std::polar(std::sin(theta), phi2);
    u(1, 0) = -std::polar(std::sin(theta), -phi2);
    u(1, 1) = std::polar(std::cos(theta), -phi1);
    return u;
}

/// Switch + controlled unitary + trace-out, computed from the operators.
inline TMatrix coherence_effective_channel(double lambda, double t, double theta, double phi1,
                                           double phi2) {
    Channel base = coherence_breaking_channel(lambda, t);
    Channel eff = switched_channel(base.map(),
                                   ControlledOp::plus_minus_unitary(
                                       controlled_unitary_u(theta, phi1, phi2)),
                                   DensityMatrix::plus_state());
    return eff.tmatrix();
}

/// Switch + plain trace-out (no controlled correction).
inline TMatrix coherence_plain_trace_out(double lambda, double t) {
    Channel base = coherence_breaking_channel(lambda, t);
    Channel eff = switched_channel(base.map(), ControlledOp::trace_out(),
                                   DensityMatrix::plus_state());
    return eff.tmatrix();
}

/// Closed-form affine entries of the switched channel, derived from
/// Gamma_eff = C+ + U C- U^dag with omega = |+><+|. Matches the operator
/// route to machine precision (see the coherence tests).
struct CoherenceEffectiveForm {
    double lambda = 0, t = 0, theta = 0, phi1 = 0, phi2 = 0;
    double t1 = 0, eta1 = 0, eta2 = 0, eta3 = 0;
    cd t2, gamma1, gamma2, gamma3;

    static CoherenceEffectiveForm closed_form(double lambda, double t, double theta, double phi1,
                                              double phi2) {
        CoherenceEffectiveForm f;
        f.lambda = lambda;
        f.t = t;
        f.theta = theta;
        f.phi1 = phi1;
        f.phi2 = phi2;
        const double x = ((1 - lambda) * (1 - lambda) - t * t) / 8.0;
        const double c2 = std::cos(2 * theta), s2 = std::sin(2 * theta);
        const double cc = std::cos(theta) * std::cos(theta);
        const double ss = std::sin(theta) * std::sin(theta);
        const cd e1p = std::polar(1.0, -2 * phi1);
        const cd e2p = std::polar(1.0, -2 * phi2);
        const cd esum = std::polar(1.0, -(phi1 + phi2));
        f.gamma1 = x * (1.0 - e1p * cc + e2p * ss);
        f.gamma2 = x * (1.0 - e1p * cc - e2p * ss);
        f.gamma3 = ((1 + 2 * lambda - 3 * lambda * lambda + t * t) / 8.0) * esum * s2;
        f.t2 = -(t * (1 + lambda) / 4.0) * esum * s2;
        f.t1 = t * (1 + lambda) * (3 + c2) / 4.0;
        f.eta1 = -x * s2 * std::cos(phi1 - phi2);
        f.eta2 = x * s2 * std::sin(phi1 - phi2);
        f.eta3 = lambda * lambda * (1 + c2) / 2.0 +
                 ((1 + lambda) * (1 + lambda) + t * t) * (1 - c2) / 8.0;
        return f;
    }

    RMat4 assemble() const {
        RMat4 m = RMat4::Zero();
        m(0, 0) = 1;
        m(1, 0) = t2.real();
        m(1, 1) = gamma1.real();
        m(1, 2) = -gamma2.imag();
        m(1, 3) = gamma3.real();
        m(2, 0) = t2.imag();
        m(2, 1) = gamma1.imag();
        m(2, 2) = gamma2.real();
        m(2, 3) = gamma3.imag();
        m(3, 0) = t1;
        m(3, 1) = eta1;
        m(3, 2) = -eta2;
        m(3, 3) = eta3;
        return m;
    }
};

// ---------------------------------------------------------------------------
// Threshold finding: bisection on a monotone curve.
// ---------------------------------------------------------------------------

inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double target, double tolerance = 1e-9) {
    double flo = f(lo) - target;
    double fhi = f(hi) - target;
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if (flo * fhi > 0) throw Error("bisection endpoints do not bracket the target");
    while (hi - lo > tolerance) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid) - target;
        if (fm == 0) return mid;
        if (flo * fm < 0)
            hi = mid;
        else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace switchlab
