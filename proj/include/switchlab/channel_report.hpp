#pragma once

#include "switchlab/classify.hpp"
#include "switchlab/tasks.hpp"

namespace switchlab {

// Aggregate classification for a channel. Incompatibility flags are
// witness-based: "breaking" only from the depolarizing thresholds (or from
// entanglement breaking, which implies it), "not-breaking" only from a task
// witness, otherwise "unknown".

inline bool is_pauli_diagonal(const RMat4& r, double tolerance = 1e-10) {
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j && std::abs(r(i, j)) > tolerance) return false;
    return true;
}

inline ChannelClassification classify_channel(const Channel& ch,
                                              std::initializer_list<int> ns = {2, 3}) {
    ChannelClassification out;
    out.is_ebc = is_entanglement_breaking(ch);
    const RMat4& r = ch.tmatrix().m();
    if (is_pauli_diagonal(r)) out.pauli_octahedron_margin = pauli_ebc_margin(ch.tmatrix().diag_lambdas());
    out.is_coherence_breaking = is_coherence_breaking(ch.tmatrix());

    std::optional<double> dep = detect_depolarizing_parameter(r);
    bool witnessed_not_2ibc = false;
    if (!out.is_ebc) {
        double qrac = qrac_success(QracStrategy::equatorial(), ch);
        if (qrac > qrac_classical_bound(2) + 1e-12) witnessed_not_2ibc = true;
        if (!witnessed_not_2ibc) {
            double f = steering_F(steered_state(ch, DensityMatrix::bell_phi_plus()));
            if (f > 1.0 + 1e-12) witnessed_not_2ibc = true;
        }
    }
    for (int n : ns) {
        IbcVerdict v = IbcVerdict::unknown;
        if (out.is_ebc)
            v = IbcVerdict::breaking;  // EB channels break every incompatibility
        else if (dep && *dep <= depolarizing_ibc_threshold(n, 2) + 1e-12)
            v = IbcVerdict::breaking;
        else if (witnessed_not_2ibc)
            v = IbcVerdict::not_breaking;  // not 2-IBC, hence not n-IBC for n >= 2
        out.ibc_flags[n] = v;
    }
    return out;
}

}  // namespace switchlab
