#include "switchlab/classify.hpp"

#include <gtest/gtest.h>

#include "switchlab/channel_report.hpp"
#include "switchlab/rng.hpp"
#include "switchlab/tasks.hpp"

using namespace switchlab;

namespace {

Channel random_pauli_channel(CounterRng& rng) {
    return Channel::pauli(PauliChannel(random_simplex_point(rng)));
}

Channel random_pauli_ebc(CounterRng& rng) {
    for (;;) {
        Vec3 l(rng.next_symmetric(), rng.next_symmetric(), rng.next_symmetric());
        if (l.cwiseAbs().sum() <= 1.0) return Channel::from_lambdas(l);
    }
}

}  // namespace

TEST(EntanglementBreaking, KnownChannels) {
    EXPECT_FALSE(is_entanglement_breaking(Channel::identity()));
    EXPECT_TRUE(is_entanglement_breaking(Channel::depolarizing(0.3)));
    EXPECT_FALSE(is_entanglement_breaking(Channel::depolarizing(0.4)));
    EXPECT_TRUE(is_entanglement_breaking(CPMap::zero()));
}

TEST(EntanglementBreaking, XYFamilyIsAlwaysBreaking) {
    for (double l3 : {-1.0, -0.5, 0.0, 0.5, 1.0})
        EXPECT_TRUE(is_entanglement_breaking(Channel::pauli(phi_family(l3)))) << l3;
}

TEST(OctahedronMargin, KnownValues) {
    EXPECT_NEAR(pauli_ebc_margin(Vec3(0, 0, 0)), -1.0, 1e-15);
    EXPECT_NEAR(pauli_ebc_margin(Vec3(1, 1, 1)), 2.0, 1e-15);
}

TEST(OctahedronMargin, AgreesWithPptAwayFromBoundary) {
    CounterRng rng(61);
    int checked = 0;
    for (int i = 0; i < 5000; ++i) {
        Vec4 p = random_simplex_point(rng);
        Vec3 l = probs_to_lambdas(p);
        double margin = pauli_ebc_margin(l);
        if (std::abs(margin) < 1e-7) continue;
        ++checked;
        bool ppt = is_entanglement_breaking(Channel::pauli(PauliChannel(p)));
        EXPECT_EQ(ppt, margin < 0) << "lambda " << l.transpose();
    }
    EXPECT_GT(checked, 4900);
}

TEST(IbcThresholds, DepolarizingFormulas) {
    EXPECT_NEAR(depolarizing_ibc_threshold(2, 2), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(depolarizing_ibc_threshold(3, 2), 5.0 / 9.0, 1e-15);
    EXPECT_NEAR(depolarizing_ibc_all_n_bound(2), 5.0 / 12.0, 1e-15);
    EXPECT_THROW(depolarizing_ibc_threshold(1, 2), Error);
}

TEST(CoherenceBreaking, FormAndCounterexamples) {
    RMat4 cb = RMat4::Zero();
    cb(0, 0) = 1;
    cb(3, 0) = 0.1;
    cb(3, 3) = 0.5;
    EXPECT_TRUE(is_coherence_breaking(TMatrix(cb)));
    EXPECT_FALSE(is_coherence_breaking(Channel::identity().tmatrix()));
    EXPECT_TRUE(is_coherence_breaking(coherence_plain_trace_out(0.5, 0.1)));
}

TEST(SwitchUsefulness, PerfectChannelUsefulInBothBranches) {
    SwitchUsefulness u = switch_usefulness(Channel::from_lambdas(Vec3(0, 0, -1)));
    EXPECT_TRUE(u.useless_plain);
    EXPECT_TRUE(u.useful_under_plus);
    EXPECT_TRUE(u.useful_under_minus);
    EXPECT_FALSE(u.completely_useless);
}

TEST(SwitchUsefulness, HalfDephasingIsCompletelyUseless) {
    SwitchUsefulness u = switch_usefulness(Channel::from_lambdas(Vec3(0, 0, 1)));
    EXPECT_TRUE(u.useless_plain);
    EXPECT_FALSE(u.useful_under_plus);
    EXPECT_FALSE(u.useful_under_minus);
    EXPECT_TRUE(u.completely_useless);
}

TEST(SwitchUsefulness, FullDepolarizationIsCompletelyUseless) {
    EXPECT_TRUE(switch_usefulness(Channel::from_lambdas(Vec3(0, 0, 0))).completely_useless);
}

TEST(SwitchUsefulness, FastPathMatchesGeneralPath) {
    CounterRng rng(62);
    for (int i = 0; i < 300; ++i) {
        Vec4 p = random_simplex_point(rng);
        SwitchUsefulness general = switch_usefulness(Channel::pauli(PauliChannel(p)));
        SwitchUsefulness fast = pauli_switch_usefulness(PauliChannel(p));
        EXPECT_EQ(general.useless_plain, fast.useless_plain);
        EXPECT_EQ(general.useful_under_plus, fast.useful_under_plus);
        EXPECT_EQ(general.useful_under_minus, fast.useful_under_minus);
        EXPECT_EQ(general.completely_useless, fast.completely_useless);
    }
}

TEST(SwitchUsefulness, CoherencePredicate) {
    // half dephasing keeps only diagonals, so it is coherence breaking and its
    // plus branch (itself) stays so
    SwitchUsefulness u = switch_usefulness(Channel::from_lambdas(Vec3(0, 0, 1)),
                                           coherence_breaking_predicate());
    EXPECT_TRUE(u.useless_plain);
    EXPECT_TRUE(u.completely_useless);
    EXPECT_FALSE(
        switch_usefulness(Channel::identity(), coherence_breaking_predicate()).useless_plain);
}

TEST(EbClosure, CompositionWithAnyChannelStaysBreaking) {
    CounterRng rng(63);
    for (int i = 0; i < 1000; ++i) {
        Channel eb = random_pauli_ebc(rng);
        Channel any = compose(Channel::unitary(random_unitary(rng)),
                              random_pauli_channel(rng));
        EXPECT_TRUE(is_entanglement_breaking(compose(any, eb)));
        EXPECT_TRUE(is_entanglement_breaking(compose(eb, any)));
    }
}

TEST(EbConvexity, MixturesOfBreakingChannelsStayBreaking) {
    CounterRng rng(64);
    for (int i = 0; i < 100; ++i) {
        Channel a = random_pauli_ebc(rng);
        Channel b = random_pauli_ebc(rng);
        double w = rng.next_unit();
        std::vector<Mat2> kraus;
        for (const auto& k : a.kraus()) kraus.push_back(std::sqrt(w) * k);
        for (const auto& k : b.kraus()) kraus.push_back(std::sqrt(1 - w) * k);
        EXPECT_TRUE(is_entanglement_breaking(Channel::from_kraus(kraus)));
    }
}

TEST(ClassifyChannel, DepolarizingInsideThreshold) {
    ChannelClassification c = classify_channel(Channel::depolarizing(0.5));
    EXPECT_FALSE(c.is_ebc);
    ASSERT_TRUE(c.pauli_octahedron_margin.has_value());
    EXPECT_NEAR(*c.pauli_octahedron_margin, 0.5, 1e-12);
    EXPECT_EQ(c.ibc_flags.at(2), IbcVerdict::breaking);   // 0.5 <= 2/3
    EXPECT_EQ(c.ibc_flags.at(3), IbcVerdict::breaking);   // 0.5 <= 5/9
    EXPECT_FALSE(c.is_coherence_breaking);
}

TEST(ClassifyChannel, DepolarizingAboveThresholdIsWitnessed) {
    ChannelClassification c = classify_channel(Channel::depolarizing(0.8));
    EXPECT_EQ(c.ibc_flags.at(2), IbcVerdict::not_breaking);  // qrac witness fires
}

TEST(ClassifyChannel, EntanglementBreakingImpliesIncompatibilityBreaking) {
    ChannelClassification c = classify_channel(Channel::pauli(phi_family(0.9)));
    EXPECT_TRUE(c.is_ebc);
    EXPECT_EQ(c.ibc_flags.at(2), IbcVerdict::breaking);
    EXPECT_EQ(c.ibc_flags.at(3), IbcVerdict::breaking);
}

TEST(ClassifyChannel, UnknownWhenNoWitnessApplies) {
    // diag(0.8, 0.2, 0.2): not EB, not depolarizing, no task witness fires
    ChannelClassification c = classify_channel(Channel::from_lambdas(Vec3(0.8, 0.2, 0.2)));
    EXPECT_FALSE(c.is_ebc);
    EXPECT_EQ(c.ibc_flags.at(2), IbcVerdict::unknown);
}

TEST(ClassifyChannel, IdentityIsWitnessedNotBreaking) {
    ChannelClassification c = classify_channel(Channel::identity());
    EXPECT_FALSE(c.is_ebc);
    EXPECT_EQ(c.ibc_flags.at(2), IbcVerdict::not_breaking);
}
