#pragma once

#include <optional>
#include <vector>

#include "switchlab/channel.hpp"
#include "switchlab/density.hpp"

namespace switchlab {

// ---------------------------------------------------------------------------
// Quantum switch over two uses of the same channel, with a 2-level control.
// The joint output splits into an anticommutator branch tagged by the control
// state omega and a commutator branch tagged by sigma_z omega sigma_z:
//
//   S(rho) = C+(rho) ox omega + C-(rho) ox sz omega sz
//   C+ Kraus: {1/2 {A_x, A_y}},  C- Kraus: {1/2 [A_x, A_y]}  (ordered pairs)
// ---------------------------------------------------------------------------

/// Joint Kraus operators on system ox control:
/// S_xy = 1/2 {A_x,A_y} ox I + 1/2 [A_x,A_y] ox sigma_z.
inline std::vector<Mat4> switch_kraus(const std::vector<Mat2>& kraus) {
    std::vector<Mat4> out;
    out.reserve(kraus.size() * kraus.size());
    for (const auto& ax : kraus)
        for (const auto& ay : kraus) {
            Mat2 anti = 0.5 * (ax * ay + ay * ax);
            Mat2 comm = 0.5 * (ax * ay - ay * ax);
            out.push_back(kron2(anti, Mat2::Identity()) + kron2(comm, pauli(3)));
        }
    return out;
}

struct BranchMaps {
    CPMap plus;
    CPMap minus;
};

inline BranchMaps switch_branches(const CPMap& ch) {
    std::vector<Mat2> plus, minus;
    const auto& ks = ch.kraus();
    plus.reserve(ks.size() * ks.size());
    for (const auto& ax : ks)
        for (const auto& ay : ks) {
            plus.push_back(0.5 * (ax * ay + ay * ax));
            minus.push_back(0.5 * (ax * ay - ay * ax));
        }
    return {CPMap(std::move(plus)), CPMap(std::move(minus))};
}

struct SwitchResult {
    DensityMatrix joint;       // 4x4, system ox control
    CPMap branch_plus;
    CPMap branch_minus;
    DensityMatrix control_in;  // omega
};

inline SwitchResult run_switch(const CPMap& ch, const DensityMatrix& rho,
                               const DensityMatrix& omega) {
    if (rho.dim() != 2 || omega.dim() != 2)
        throw DimensionMismatch("switch inputs must be 2x2 states");
    BranchMaps b = switch_branches(ch);
    Mat2 w = omega.m2();
    Mat2 szwsz = pauli(3) * w * pauli(3);
    Mat4 joint = kron2(b.plus.apply(rho.m2()), w) + kron2(b.minus.apply(rho.m2()), szwsz);
    return {DensityMatrix::two_qubit(joint), std::move(b.plus), std::move(b.minus), omega};
}

// ---------------------------------------------------------------------------
// Closed form for Pauli channels: C+ = q Cbar+, C- = (1-q) Cbar-, where the
// normalized branches are again Pauli channels and
//   q = 1 - 2 (p1 p2 + p2 p3 + p3 p1).
// ---------------------------------------------------------------------------

struct PauliBranches {
    double q = 1.0;
    PauliChannel c_plus = PauliChannel::identity();
    std::optional<PauliChannel> c_minus;  // nullopt encodes the zero branch
    bool degenerate = false;              // q within 1e-12 of 0 or 1
};

/// Unnormalized branch weights (sum to q and 1-q respectively).
inline void pauli_branch_weights(const Vec4& p, Vec4& plus, Vec4& minus) {
    plus = Vec4(p.squaredNorm(), 2 * p[0] * p[1], 2 * p[0] * p[2], 2 * p[0] * p[3]);
    minus = Vec4(0.0, 2 * p[2] * p[3], 2 * p[1] * p[3], 2 * p[1] * p[2]);
}

inline PauliBranches pauli_branches(const PauliChannel& pc) {
    const Vec4& p = pc.probs();
    PauliBranches out;
    out.q = 1.0 - 2.0 * (p[1] * p[2] + p[2] * p[3] + p[3] * p[1]);
    Vec4 wp, wm;
    pauli_branch_weights(p, wp, wm);
    out.degenerate = std::min(out.q, 1.0 - out.q) < 1e-12;
    out.c_plus = PauliChannel(Vec4(wp / wp.sum()));
    if (1.0 - out.q >= 1e-12) out.c_minus = PauliChannel(Vec4(wm / wm.sum()));
    return out;
}

// ---------------------------------------------------------------------------
// Measurement-based controlled operations. Measuring the control in the
// orthonormal basis (|a>, |a_perp>) and applying lambda1 or lambda2 to the
// system gives, after tracing out the control,
//
//   eff(rho) = <a|w|a>        lambda1(C+(rho)) + <a|w~|a>      lambda1(C-(rho))
//            + <a_|w|a_>      lambda2(C+(rho)) + <a_|w~|a_>    lambda2(C-(rho))
//
// with w~ = sigma_z w sigma_z.
// ---------------------------------------------------------------------------

struct ControlledOp {
    Vec2c basis_a;
    Vec2c basis_a_perp;
    Channel lambda1;
    Channel lambda2;

    ControlledOp(const Vec2c& a, const Vec2c& a_perp, Channel l1, Channel l2)
        : basis_a(a.normalized()),
          basis_a_perp(a_perp.normalized()),
          lambda1(std::move(l1)),
          lambda2(std::move(l2)) {
        if (std::abs(basis_a.dot(basis_a_perp)) > 1e-12)
            throw InvalidState("controlled-op basis is not orthogonal");
    }

    /// Do nothing in either branch: plain trace-out of the control.
    static ControlledOp trace_out() {
        return ControlledOp(plus_ket(), minus_ket(), Channel::identity(), Channel::identity());
    }

    /// I ox |+><+| + U ox |-><-|.
    static ControlledOp plus_minus_unitary(const Mat2& u) {
        return ControlledOp(plus_ket(), minus_ket(), Channel::identity(), Channel::unitary(u));
    }

    /// The standard correction I ox |+><+| + sigma_z ox |-><-|.
    static ControlledOp standard_correction() { return plus_minus_unitary(pauli(3)); }
};

/// Effective channel on the system for given branch CP maps and control state.
inline Channel effective_channel(const ControlledOp& op, const CPMap& plus, const CPMap& minus,
                                 const DensityMatrix& omega) {
    Mat2 w = omega.m2();
    Mat2 wt = pauli(3) * w * pauli(3);
    const Vec2c& a = op.basis_a;
    const Vec2c& ap = op.basis_a_perp;
    double weights[4] = {std::real(a.dot(w * a)), std::real(a.dot(wt * a)),
                         std::real(ap.dot(w * ap)), std::real(ap.dot(wt * ap))};
    const CPMap* branches[4] = {&plus, &minus, &plus, &minus};
    const Channel* corrections[4] = {&op.lambda1, &op.lambda1, &op.lambda2, &op.lambda2};

    std::vector<Mat2> kraus;
    for (int term = 0; term < 4; ++term) {
        double wgt = weights[term];
        if (wgt <= 0) continue;
        double root = std::sqrt(wgt);
        for (const auto& l : corrections[term]->kraus())
            for (const auto& c : branches[term]->kraus()) kraus.push_back(root * (l * c));
    }
    return Channel::from_kraus(std::move(kraus));
}

inline Channel apply_controlled(const ControlledOp& op, const SwitchResult& sr) {
    return effective_channel(op, sr.branch_plus, sr.branch_minus, sr.control_in);
}

/// Switch a channel and apply the controlled correction in one step.
inline Channel switched_channel(const CPMap& ch, const ControlledOp& op,
                                const DensityMatrix& omega) {
    BranchMaps b = switch_branches(ch);
    return effective_channel(op, b.plus, b.minus, omega);
}

/// Depolarizing noise of strength noise_t acts on the control register after
/// the switch and before the controlled correction.
inline Channel noisy_control_effective(const CPMap& ch, double noise_t, const ControlledOp& op,
                                       const DensityMatrix& omega) {
    if (noise_t < -1.0 / 3.0 - 1e-12 || noise_t > 1.0 + 1e-12)
        throw InvalidNoiseParameter(noise_t);
    BranchMaps b = switch_branches(ch);
    Mat2 w = omega.m2();
    Mat2 wt = pauli(3) * w * pauli(3);
    auto depolarize = [noise_t](const Mat2& m) -> Mat2 {
        return noise_t * m + (1.0 - noise_t) * 0.5 * m.trace() * Mat2::Identity();
    };
    Mat2 nw = depolarize(w);
    Mat2 nwt = depolarize(wt);
    const Vec2c& a = op.basis_a;
    const Vec2c& ap = op.basis_a_perp;
    double weights[4] = {std::real(a.dot(nw * a)), std::real(a.dot(nwt * a)),
                         std::real(ap.dot(nw * ap)), std::real(ap.dot(nwt * ap))};
    const CPMap* branches[4] = {&b.plus, &b.minus, &b.plus, &b.minus};
    const Channel* corrections[4] = {&op.lambda1, &op.lambda1, &op.lambda2, &op.lambda2};
    std::vector<Mat2> kraus;
    for (int term = 0; term < 4; ++term) {
        if (weights[term] <= 0) continue;
        double root = std::sqrt(weights[term]);
        for (const auto& l : corrections[term]->kraus())
            for (const auto& c : branches[term]->kraus()) kraus.push_back(root * (l * c));
    }
    return Channel::from_kraus(std::move(kraus));
}

}  // namespace switchlab
