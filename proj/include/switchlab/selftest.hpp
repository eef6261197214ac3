#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "switchlab/scan.hpp"
#include "switchlab/tasks.hpp"

namespace switchlab {

// ---------------------------------------------------------------------------
// Acceptance suite: every check below pins its tolerance in code. Two checks
// (6 and 10) assert literature-quoted constants that direct construction
// contradicts; they are kept as stated and report the computed value next to
// the reference so the discrepancy is visible, not hidden.
// ---------------------------------------------------------------------------

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double ms = 0;
};

struct SelfTestOptions {
    std::uint64_t seed = 0x5eedba5eull;
    int threads = 1;
};

namespace selftest_detail {

inline std::uint64_t stream(int criterion, std::uint64_t i) {
    return (static_cast<std::uint64_t>(criterion) << 40) + i;
}

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

inline CPMap pauli_weight_map(const Vec4& w) {
    std::vector<Mat2> kraus;
    for (int u = 0; u < 4; ++u)
        if (w[u] > 0) kraus.push_back(std::sqrt(w[u]) * pauli(u));
    return CPMap(std::move(kraus));
}

inline Channel random_general_channel(CounterRng& rng) {
    Vec4 p = random_simplex_point(rng);
    return compose(Channel::unitary(random_unitary(rng)), Channel::pauli(PauliChannel(p)));
}

template <typename Fn>
CriterionResult timed(int id, const std::string& name, Fn&& fn) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    auto start = std::chrono::steady_clock::now();
    fn(r);
    r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
               .count();
    return r;
}

// 1. Closed-form Pauli branches vs direct switch construction.
inline CriterionResult criterion_branch_oracle(const SelfTestOptions& opt) {
    return timed(1, "pauli switch branches: closed form matches direct construction",
                 [&](CriterionResult& r) {
        constexpr int kChannels = 1000;
        constexpr int kStates = 100;
        std::vector<Mat2> states;
        states.reserve(kStates);
        for (int j = 0; j < kStates; ++j) {
            CounterRng rng(opt.seed, stream(1, 500000 + j));
            states.push_back(random_mixed_state(rng));
        }
        double worst = 0;
        for (int i = 0; i < kChannels; ++i) {
            CounterRng rng(opt.seed, stream(1, i));
            Vec4 p = random_simplex_point(rng);
            Channel ch = Channel::pauli(PauliChannel(p));
            BranchMaps direct = switch_branches(ch.map());
            Vec4 wp, wm;
            pauli_branch_weights(p, wp, wm);
            CPMap closed_plus = pauli_weight_map(wp);
            CPMap closed_minus = pauli_weight_map(wm);
            worst = std::max(worst, max_abs_diff(direct.plus.choi(), closed_plus.choi()));
            worst = std::max(worst, max_abs_diff(direct.minus.choi(), closed_minus.choi()));
            for (const auto& s : states) {
                worst = std::max(worst,
                                 max_abs_diff(direct.plus.apply(s), closed_plus.apply(s)));
                worst = std::max(worst,
                                 max_abs_diff(direct.minus.apply(s), closed_minus.apply(s)));
            }
        }
        r.passed = worst <= 1e-9;
        r.detail = "max deviation " + fmt(worst) + " over 1000 channels x 100 states (tol 1e-9)";
    });
}

// 2. lambda = (0,0,-1) with the standard correction gives the identity.
inline CriterionResult criterion_perfect_transfer(const SelfTestOptions&) {
    return timed(2, "perfect-transfer channel: switch + correction restores identity",
                 [&](CriterionResult& r) {
        Channel perfect = Channel::from_lambdas(Vec3(0, 0, -1));
        Channel eff = switched_channel(perfect.map(), ControlledOp::standard_correction(),
                                       DensityMatrix::plus_state());
        double dev = (eff.tmatrix().m() - RMat4::Identity()).cwiseAbs().maxCoeff();
        r.passed = dev <= 1e-12;
        r.detail = "effective T-matrix deviation from identity " + fmt(dev) + " (tol 1e-12)";
    });
}

// 3. lambda = (0,0,1): q = 1, plus branch equals the channel, minus vanishes.
inline CriterionResult criterion_degenerate_branch(const SelfTestOptions&) {
    return timed(3, "half-dephasing channel: plus branch is the channel, minus vanishes",
                 [&](CriterionResult& r) {
        PauliChannel pc = PauliChannel::from_lambdas(Vec3(0, 0, 1));
        PauliBranches b = pauli_branches(pc);
        double dq = std::abs(b.q - 1.0);
        double dplus = (b.c_plus.probs() - pc.probs()).cwiseAbs().maxCoeff();
        BranchMaps direct = switch_branches(Channel::pauli(pc).map());
        double dminus = direct.minus.choi().cwiseAbs().maxCoeff();
        bool zero_ok = !b.c_minus.has_value() && b.degenerate;
        r.passed = dq <= 1e-12 && dplus <= 1e-12 && dminus <= 1e-12 && zero_ok;
        r.detail = "|q-1| = " + fmt(dq) + ", plus-branch deviation " + fmt(dplus) +
                   ", minus-branch Choi norm " + fmt(dminus) + " (tol 1e-12)";
    });
}

// 4. Switched xy-family: diag(1, s, s, l3^2) with s = (1+l3)^2/4, EB iff l3 <= 1/3.
inline CriterionResult criterion_switched_family_tmatrix(const SelfTestOptions&) {
    return timed(4, "switched xy-family: effective T-matrix and EB boundary at 1/3",
                 [&](CriterionResult& r) {
        double worst = 0;
        bool flags_ok = true;
        for (double l3 : {0.2, 0.5, 0.9}) {
            Channel eff = phi_switched_effective(l3);
            double s = (1 + l3) * (1 + l3) / 4;
            RMat4 ref = RMat4::Zero();
            ref(0, 0) = 1;
            ref(1, 1) = s;
            ref(2, 2) = s;
            ref(3, 3) = l3 * l3;
            worst = std::max(worst, max_abs_diff(eff.tmatrix().m(), ref));
            bool expect_non_eb = l3 > 1.0 / 3.0;
            double margin = pauli_ebc_margin(Vec3(s, s, l3 * l3));
            bool margin_says_non_eb = margin > 1e-9;
            bool ppt_says_non_eb = !is_entanglement_breaking(eff);
            if (margin_says_non_eb != expect_non_eb || ppt_says_non_eb != expect_non_eb)
                flags_ok = false;
        }
        r.passed = worst <= 1e-10 && flags_ok;
        r.detail = "max T-matrix deviation " + fmt(worst) + " (tol 1e-10); EB flags " +
                   (flags_ok ? "correct" : "WRONG") + " at l3 in {0.2, 0.5, 0.9}";
    });
}

// 5. Measured qrac curve matches the closed form; threshold at 2^(3/4)-1.
inline CriterionResult criterion_qrac(const SelfTestOptions&) {
    return timed(5, "qrac success curve and classical-bound threshold",
                 [&](CriterionResult& r) {
        QracStrategy strategy = QracStrategy::equatorial();
        const double inv = 1.0 / (4.0 * std::sqrt(2.0));
        double worst = 0;
        for (int i = 0; i <= 1000; ++i) {
            double l3 = i / 1000.0;
            double measured = qrac_success(strategy, phi_switched_effective(l3));
            double reference = 0.5 * (1 + (1 + l3) * (1 + l3) * inv);
            worst = std::max(worst, std::abs(measured - reference));
        }
        double root = bisect(
            [&](double l3) { return qrac_success(strategy, phi_switched_effective(l3)); }, 0.0,
            1.0, 0.75, 1e-12);
        double expect = std::pow(2.0, 0.75) - 1.0;
        double root_err = std::abs(root - expect);
        r.passed = worst <= 1e-10 && root_err <= 1e-9;
        r.detail = "max curve deviation " + fmt(worst) + " (tol 1e-10); root " + fmt(root) +
                   " vs 2^(3/4)-1 = " + fmt(expect) + ", |err| = " + fmt(root_err) +
                   " (tol 1e-9)";
    });
}

// 6. Steering curve against the quoted closed form and the 0.8123 threshold.
// The quoted form drops a 1/sqrt(2) on its separable term; the measured
// functional is (1 + 2 l3 + 5 l3^2) / (4 sqrt(2)). Both values are reported.
inline CriterionResult criterion_steering(const SelfTestOptions&) {
    return timed(6, "steering curve matches quoted closed form; threshold near 0.8123",
                 [&](CriterionResult& r) {
        auto quoted = [](double l3) {
            return std::sqrt(2.0) * (1 + l3) * (1 + l3) / 4 + (3 * l3 * l3 - 2 * l3 - 1) / 4;
        };
        DensityMatrix bell = DensityMatrix::bell_phi_plus();
        double worst = 0, worst_at = 0;
        for (int i = 0; i <= 1000; ++i) {
            double l3 = i / 1000.0;
            double measured = steering_F(steered_state(phi_switched_effective(l3), bell));
            double dev = std::abs(measured - quoted(l3));
            if (dev > worst) {
                worst = dev;
                worst_at = l3;
            }
        }
        bool curve_ok = worst <= 1e-10;
        double root_quoted = bisect(quoted, 0.5, 1.0, 1.0, 1e-12);
        bool root_ok = std::abs(root_quoted - 0.8123) <= 5e-4;
        double root_measured = bisect(
            [&](double l3) {
                return steering_F(steered_state(phi_switched_effective(l3), bell));
            },
            0.5, 1.0, 1.0, 1e-12);
        r.passed = curve_ok && root_ok;
        r.detail = "max |measured - quoted| = " + fmt(worst) + " at l3 = " + fmt(worst_at) +
                   " (tol 1e-10" + std::string(curve_ok ? ", ok" : ", FAIL") +
                   "); quoted-form root " + fmt(root_quoted) + " vs 0.8123 (tol 5e-4" +
                   (root_ok ? ", ok" : ", FAIL") + "); note: measured-curve root " +
                   fmt(root_measured);
    });
}

// 7. PPT verdict vs octahedron criterion over tetrahedron samples.
inline CriterionResult criterion_ppt_octahedron(const SelfTestOptions& opt) {
    return timed(7, "PPT verdict equals octahedron criterion on tetrahedron samples",
                 [&](CriterionResult& r) {
        constexpr int kSamples = 100000;
        int disagreements = 0, skipped = 0;
        for (int i = 0; i < kSamples; ++i) {
            CounterRng rng(opt.seed, stream(7, i));
            Vec4 p = random_simplex_point(rng);
            Vec3 l = probs_to_lambdas(p);
            double margin = pauli_ebc_margin(l);
            if (std::abs(margin) < 1e-7) {
                ++skipped;
                continue;
            }
            CPMap map = pauli_weight_map(p);
            bool ppt = choi_is_ppt(map.choi());
            if (ppt != (margin < 0)) ++disagreements;
        }
        r.passed = disagreements == 0;
        r.detail = std::to_string(disagreements) + " disagreements over " +
                   std::to_string(kSamples) + " samples (" + std::to_string(skipped) +
                   " within the 1e-7 boundary band skipped)";
    });
}

// 8. Channels with two EB branches stay EB under random controlled operations.
inline CriterionResult criterion_controlled_ops(const SelfTestOptions& opt) {
    return timed(8, "EB branch pairs stay EB under every sampled controlled operation",
                 [&](CriterionResult& r) {
        constexpr int kChannels = 100;
        constexpr int kOps = 500;
        int collected = 0, violations = 0;
        std::uint64_t attempt = 0;
        while (collected < kChannels && attempt < 100000) {
            CounterRng rng(opt.seed, stream(8, attempt++));
            Vec4 p = random_simplex_point(rng);
            BranchMaps b = switch_branches(Channel::pauli(PauliChannel(p)).map());
            bool plus_eb = b.plus.is_zero() || choi_is_ppt(b.plus.choi());
            bool minus_eb = b.minus.is_zero() || choi_is_ppt(b.minus.choi());
            if (!plus_eb || !minus_eb) continue;
            ++collected;
            for (int k = 0; k < kOps; ++k) {
                CounterRng oprng(opt.seed, stream(8, 0x1000000ull + attempt * 1024 + k));
                Mat2 basis = random_unitary(oprng);
                ControlledOp op(basis.col(0), basis.col(1), random_general_channel(oprng),
                                random_general_channel(oprng));
                DensityMatrix omega = DensityMatrix::qubit(random_mixed_state(oprng));
                Channel eff = effective_channel(op, b.plus, b.minus, omega);
                if (!choi_is_ppt(eff.choi())) ++violations;
            }
        }
        r.passed = collected == kChannels && violations == 0;
        r.detail = std::to_string(violations) + " PPT violations over " +
                   std::to_string(collected) + " channels x " + std::to_string(kOps) +
                   " controlled operations";
    });
}

// 9. Depolarizing noise on the control of the perfect-transfer switch.
inline CriterionResult criterion_noisy_switch(const SelfTestOptions&) {
    return timed(9, "depolarized control: effective channel follows the noise closed form",
                 [&](CriterionResult& r) {
        Channel perfect = Channel::from_lambdas(Vec3(0, 0, -1));
        double worst = 0;
        for (double t : {-1.0 / 3.0, 0.0, 0.5, 1.0}) {
            Channel eff = noisy_control_effective(perfect.map(), t,
                                                  ControlledOp::standard_correction(),
                                                  DensityMatrix::plus_state());
            RMat4 ref = RMat4::Zero();
            ref(0, 0) = 1;
            ref(1, 1) = t;
            ref(2, 2) = t;
            ref(3, 3) = 1;
            worst = std::max(worst, max_abs_diff(eff.tmatrix().m(), ref));
        }
        r.passed = worst <= 1e-10;
        r.detail = "max deviation from (1+t)/2 rho + (1-t)/2 z-flip form " + fmt(worst) +
                   " (tol 1e-10)";
    });
}

// 10. Switched coherence-breaking channel at theta = 0, phi1 = pi/2 against
// the quoted entries; the quoted T30 = t(1+lambda)/2 conflicts with both the
// plain trace-out form and the construction, which give t(1+lambda).
inline CriterionResult criterion_coherence(const SelfTestOptions&) {
    return timed(10, "switched coherence-breaking channel matches quoted closed form",
                 [&](CriterionResult& r) {
        const double pi = 3.14159265358979323846;
        double worst_t33 = 0, worst_gamma = 0, worst_cross = 0, worst_t30_quoted = 0,
               worst_t30_construction = 0, worst_plain = 0;
        for (int i = -10; i <= 10; ++i)
            for (int j = -10; j <= 10; ++j) {
                if (std::abs(i) + std::abs(j) > 10) continue;
                double lam = i / 10.0, t = j / 10.0;
                RMat4 m = coherence_effective_channel(lam, t, 0.0, pi / 2, 0.0).m();
                worst_t33 = std::max(worst_t33, std::abs(m(3, 3) - lam * lam));
                double gref = (1 - 2 * lam + lam * lam - t * t) / 4;
                worst_gamma = std::max({worst_gamma, std::abs(m(1, 1) - gref),
                                        std::abs(m(2, 2) - gref)});
                for (auto [a, b] : {std::pair{1, 3}, {2, 3}, {3, 1}, {3, 2}, {1, 0}, {2, 0},
                                    {1, 2}, {2, 1}})
                    worst_cross = std::max(worst_cross, std::abs(m(a, b)));
                worst_t30_quoted =
                    std::max(worst_t30_quoted, std::abs(m(3, 0) - t * (1 + lam) / 2));
                worst_t30_construction =
                    std::max(worst_t30_construction, std::abs(m(3, 0) - t * (1 + lam)));

                RMat4 plain = coherence_plain_trace_out(lam, t).m();
                RMat4 pref = RMat4::Zero();
                pref(0, 0) = 1;
                pref(3, 0) = t * (1 + lam);
                pref(3, 3) = lam * lam;
                worst_plain = std::max(worst_plain, max_abs_diff(plain, pref));
            }
        bool others_ok = worst_t33 <= 1e-9 && worst_gamma <= 1e-9 && worst_cross <= 1e-9 &&
                         worst_plain <= 1e-9;
        bool t30_ok = worst_t30_quoted <= 1e-9;
        r.passed = others_ok && t30_ok;
        r.detail = "T33/gamma/cross/plain deviations " + fmt(worst_t33) + "/" +
                   fmt(worst_gamma) + "/" + fmt(worst_cross) + "/" + fmt(worst_plain) +
                   " (tol 1e-9, ok); |T30 - t(1+lambda)/2| max " + fmt(worst_t30_quoted) +
                   (t30_ok ? " (ok)" : " (FAIL)") + "; note: |T30 - t(1+lambda)| max " +
                   fmt(worst_t30_construction);
    });
}

// 11. Census statistics and the concatenation conjecture search.
inline CriterionResult criterion_census(const SelfTestOptions& opt) {
    return timed(11, "census statistics: distances, venn occupancy, conjecture search",
                 [&](CriterionResult& r) {
        constexpr std::uint64_t kPairs = 1000000;
        CensusResult census = concat_census(opt.seed, kPairs, Family::pauli, opt.threads);
        bool have_stats = census.dist_plus.has_value() && census.dist_minus.has_value();
        double mean_plus = have_stats ? census.dist_plus->mean : 0;
        double mean_minus = have_stats ? census.dist_minus->mean : 0;
        bool plus_ok = have_stats && mean_plus >= 1.18 && mean_plus <= 1.38;
        bool minus_ok = have_stats && mean_minus >= 1.11 && mean_minus <= 1.31;
        bool venn_ok = census.venn.plus_only > 0 && census.venn.minus_only > 0 &&
                       census.venn.both > 0 && census.venn.neither > 0;
        ConjectureResult cj = conjecture_search(opt.seed + 1, kPairs, opt.threads);
        bool conjecture_ok = !cj.counterexample.has_value();
        r.passed = plus_ok && minus_ok && venn_ok && conjecture_ok;
        std::ostringstream os;
        os.precision(6);
        os << "mean distance plus " << mean_plus << " (want [1.18,1.38]), minus " << mean_minus
           << " (want [1.11,1.31]); venn " << census.venn.plus_only << "/"
           << census.venn.minus_only << "/" << census.venn.both << "/" << census.venn.neither
           << " over " << census.venn.gated << " gated pairs; conjecture: "
           << cj.pairs_checked << " pairs, ";
        if (cj.counterexample) {
            const auto& c = *cj.counterexample;
            os << "COUNTEREXAMPLE a=(" << c.params_a.transpose() << ") b=("
               << c.params_b.transpose() << ")";
        } else {
            os << "no counterexample";
        }
        r.detail = os.str();
    });
}

// 12. Useful minus-branch images satisfy sum(lambda) = -1.
inline CriterionResult criterion_minus_plane(const SelfTestOptions& opt) {
    return timed(12, "minus-branch useful images lie on the sum(lambda) = -1 plane",
                 [&](CriterionResult& r) {
        constexpr std::uint64_t kSamples = 200000;
        auto data = octahedron_mapping_dataset(opt.seed, kSamples, Branch::minus);
        std::uint64_t useful = 0, off_plane = 0;
        double worst = 0;
        for (const auto& rec : data) {
            if (!rec.useful) continue;
            ++useful;
            double dev = std::abs(rec.lambda_out.sum() + 1.0);
            worst = std::max(worst, dev);
            if (dev > 1e-9) ++off_plane;
        }
        r.passed = useful > 0 && off_plane == 0;
        r.detail = std::to_string(useful) + " useful images, " + std::to_string(off_plane) +
                   " off the plane, max |sum + 1| = " + fmt(worst) + " (tol 1e-9)";
    });
}

}  // namespace selftest_detail

inline std::vector<CriterionResult> run_acceptance_suite(const SelfTestOptions& opt) {
    using namespace selftest_detail;
    std::vector<CriterionResult> out;
    out.push_back(criterion_branch_oracle(opt));
    out.push_back(criterion_perfect_transfer(opt));
    out.push_back(criterion_degenerate_branch(opt));
    out.push_back(criterion_switched_family_tmatrix(opt));
    out.push_back(criterion_qrac(opt));
    out.push_back(criterion_steering(opt));
    out.push_back(criterion_ppt_octahedron(opt));
    out.push_back(criterion_controlled_ops(opt));
    out.push_back(criterion_noisy_switch(opt));
    out.push_back(criterion_coherence(opt));
    out.push_back(criterion_census(opt));
    out.push_back(criterion_minus_plane(opt));
    return out;
}

inline int print_acceptance_report(const std::vector<CriterionResult>& results,
                                   std::ostream& os) {
    int failures = 0;
    for (const auto& r : results) {
        if (!r.passed) ++failures;
        char head[64];
        std::snprintf(head, sizeof(head), "[%s] %2d ", r.passed ? "PASS" : "FAIL", r.id);
        os << head << r.name << " (" << static_cast<long long>(r.ms) << " ms)\n       "
           << r.detail << "\n";
    }
    os << (results.size() - failures) << "/" << results.size() << " criteria passed\n";
    return failures;
}

}  // namespace switchlab
