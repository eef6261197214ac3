#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>

#include "switchlab/channel.hpp"
#include "switchlab/switch_engine.hpp"

namespace switchlab {

// ---------------------------------------------------------------------------
// Entanglement breaking. For qubit maps the Choi state lives on 2x2, where
// PPT is exactly separability, so the verdict is the sign of the smallest
// partial-transpose eigenvalue. Scale invariant, so trace-decreasing branch
// maps are classified the same way. The zero map counts as breaking.
// ---------------------------------------------------------------------------

inline bool choi_is_ppt(const Mat4& choi) {
    return min_eigenvalue4(partial_transpose_second(choi)) >= -tol::ppt;
}

inline bool is_entanglement_breaking(const CPMap& map) {
    if (map.is_zero()) return true;
    Mat4 choi = map.choi();
    if (min_eigenvalue4(choi) < -tol::psd_choi)
        throw NotCompletelyPositive(min_eigenvalue4(choi));
    return choi_is_ppt(choi);
}

inline bool is_entanglement_breaking(const Channel& ch) { return choi_is_ppt(ch.choi()); }

/// sum_i |lambda_i| - 1. Nonpositive (within tolerance) means the Pauli
/// channel sits inside the entanglement-breaking octahedron.
inline double pauli_ebc_margin(const Vec3& lambdas) {
    return lambdas.cwiseAbs().sum() - 1.0;
}

/// Closed-octahedron convention: the boundary counts as breaking.
inline bool pauli_is_ebc(const Vec3& lambdas) { return pauli_ebc_margin(lambdas) <= tol::ppt; }

// ---------------------------------------------------------------------------
// Incompatibility breaking (depolarizing thresholds).
// ---------------------------------------------------------------------------

/// A depolarizing channel with parameter t <= (n+d)/(n(1+d)) breaks the
/// incompatibility of every set of n observables.
inline double depolarizing_ibc_threshold(int n, int d) {
    if (n < 2 || d < 2) throw Error("thresholds require n >= 2 and d >= 2");
    return static_cast<double>(n + d) / (static_cast<double>(n) * (1 + d));
}

/// Bound below which the depolarizing channel is n-IBC for every n.
inline double depolarizing_ibc_all_n_bound(int d) {
    if (d < 2) throw Error("thresholds require d >= 2");
    return (3.0 * d - 1.0) * std::pow(double(d) - 1.0, d - 1) /
           (std::pow(double(d), d) * (d + 1.0));
}

// ---------------------------------------------------------------------------
// Coherence breaking: output diagonal in the reference (sigma_z) basis for
// every input. In the affine picture only the (0,0), (3,0) and (3,3) entries
// may be nonzero.
// ---------------------------------------------------------------------------

inline bool transfer_is_coherence_breaking(const RMat4& r, double tolerance = 1e-10) {
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if ((i == 0 && j == 0) || (i == 3 && j == 0) || (i == 3 && j == 3)) continue;
            if (std::abs(r(i, j)) > tolerance) return false;
        }
    return true;
}

inline bool is_coherence_breaking(const TMatrix& t) {
    return transfer_is_coherence_breaking(t.m());
}

inline bool is_coherence_breaking(const CPMap& map) {
    if (map.is_zero()) return true;
    return transfer_is_coherence_breaking(map.transfer());
}

// ---------------------------------------------------------------------------
// Switch usefulness. "Useless" is a pluggable predicate on CP maps (default:
// entanglement breaking); a channel is completely useless when it is useless
// as-is and neither switch branch escapes the predicate.
// ---------------------------------------------------------------------------

struct SwitchUsefulness {
    bool useless_plain = false;
    bool useful_under_plus = false;
    bool useful_under_minus = false;
    bool completely_useless = false;
};

using UselessPredicate = std::function<bool(const CPMap&)>;

inline UselessPredicate entanglement_breaking_predicate() {
    return [](const CPMap& m) { return is_entanglement_breaking(m); };
}

inline UselessPredicate coherence_breaking_predicate() {
    return [](const CPMap& m) { return is_coherence_breaking(m); };
}

inline SwitchUsefulness switch_usefulness(const Channel& ch, const UselessPredicate& useless) {
    SwitchUsefulness out;
    out.useless_plain = useless(ch.map());
    BranchMaps b = switch_branches(ch.map());
    out.useful_under_plus = !b.plus.is_zero() && !useless(b.plus);
    out.useful_under_minus = !b.minus.is_zero() && !useless(b.minus);
    out.completely_useless =
        out.useless_plain && !out.useful_under_plus && !out.useful_under_minus;
    return out;
}

inline SwitchUsefulness switch_usefulness(const Channel& ch) {
    return switch_usefulness(ch, entanglement_breaking_predicate());
}

/// Closed-form fast path for Pauli channels with the entanglement-breaking
/// predicate; agrees with the brute-force route (see the switch tests).
inline SwitchUsefulness pauli_switch_usefulness(const PauliChannel& pc) {
    SwitchUsefulness out;
    out.useless_plain = pauli_is_ebc(pc.lambdas());
    PauliBranches b = pauli_branches(pc);
    out.useful_under_plus = !pauli_is_ebc(b.c_plus.lambdas());
    out.useful_under_minus = b.c_minus.has_value() && !pauli_is_ebc(b.c_minus->lambdas());
    out.completely_useless =
        out.useless_plain && !out.useful_under_plus && !out.useful_under_minus;
    return out;
}

// ---------------------------------------------------------------------------
// Aggregate classification record.
// ---------------------------------------------------------------------------

enum class IbcVerdict { breaking, not_breaking, unknown };

struct ChannelClassification {
    bool is_ebc = false;
    std::optional<double> pauli_octahedron_margin;  // Pauli channels only
    std::map<int, IbcVerdict> ibc_flags;
    bool is_coherence_breaking = false;
};

inline std::optional<double> detect_depolarizing_parameter(const RMat4& r) {
    RMat4 ref = RMat4::Zero();
    ref(0, 0) = 1;
    double t = (r(1, 1) + r(2, 2) + r(3, 3)) / 3.0;
    for (int k = 1; k < 4; ++k) ref(k, k) = t;
    if ((r - ref).cwiseAbs().maxCoeff() > 1e-10) return std::nullopt;
    return t;
}

}  // namespace switchlab
