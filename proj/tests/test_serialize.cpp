#include "switchlab/serialize.hpp"

#include <gtest/gtest.h>

#include "switchlab/rng.hpp"

using namespace switchlab;

TEST(ChannelJson, PauliKindRoundTrip) {
    Channel ch = Channel::pauli(PauliChannel(Vec4(0.1, 0.2, 0.3, 0.4)));
    json j = to_json(ch);
    EXPECT_EQ(j.at("kind"), "pauli");
    Channel back = channel_from_json(j);
    EXPECT_NEAR(max_abs_diff(back.tmatrix().m(), ch.tmatrix().m()), 0.0, 1e-12);
}

TEST(ChannelJson, TmatrixKindRoundTrip) {
    TMatrix t = TMatrix::non_unital(0.4, 0.3, 0.2);
    json j = to_json(t);
    EXPECT_EQ(j.at("kind"), "tmatrix");
    Channel back = channel_from_json(j);
    EXPECT_NEAR(max_abs_diff(back.tmatrix().m(), t.m()), 0.0, 1e-9);
}

TEST(ChannelJson, KrausKindRoundTrip) {
    CounterRng rng(101);
    Channel ch = compose(Channel::unitary(random_unitary(rng)),
                         Channel::pauli(PauliChannel(random_simplex_point(rng))));
    json j = kraus_to_json(ch.kraus());
    Channel back = channel_from_json(j);
    EXPECT_NEAR(max_abs_diff(back.tmatrix().m(), ch.tmatrix().m()), 0.0, 1e-12);
}

// One property instead of a case matrix: the serialized form always
// reproduces the channel action.
TEST(ChannelJson, RoundTripPreservesActionAcrossKinds) {
    CounterRng rng(102);
    for (int i = 0; i < 50; ++i) {
        Channel ch = compose(Channel::unitary(random_unitary(rng)),
                             Channel::pauli(PauliChannel(random_simplex_point(rng))));
        json forms[2] = {kraus_to_json(ch.kraus()), to_json(ch.tmatrix())};
        for (const auto& j : forms) {
            Channel back = channel_from_json(j);
            Mat2 rho = random_mixed_state(rng);
            EXPECT_NEAR(max_abs_diff(back.apply(rho), ch.apply(rho)), 0.0, 1e-9);
        }
    }
}

TEST(ChannelJson, RejectsMalformedInput) {
    EXPECT_THROW(channel_from_json(json{{"kind", "pauli"}, {"p", {0.5, 0.5}}}), Error);
    EXPECT_THROW(channel_from_json(json{{"kind", "sparkle"}}), Error);
    EXPECT_THROW(channel_from_json(json{{"kind", "pauli"}, {"p", {2.0, -1.0, 0.0, 0.0}}}),
                 NotCompletelyPositive);
}

TEST(Manifest, JsonRoundTrip) {
    RunManifest m;
    m.command = "scan census";
    m.config = json{{"pairs", 1000}};
    m.seed = 42;
    m.wall_time_ms = 17;
    RunManifest back = RunManifest::from_json(m.to_json());
    EXPECT_EQ(back.command, m.command);
    EXPECT_EQ(back.seed, m.seed);
    EXPECT_EQ(back.config.at("pairs"), 1000);
    EXPECT_EQ(back.tool_version, kToolVersion);
}

TEST(Manifest, CsvDocumentStructure) {
    RunManifest m;
    m.command = "qrac";
    m.seed = 7;
    std::string doc = csv_document(m, "x,y", {"1,2", "3,4"});
    EXPECT_EQ(csv_payload(doc), "x,y\n1,2\n3,4\n");
    RunManifest parsed = csv_manifest(doc);
    EXPECT_EQ(parsed.command, "qrac");
    EXPECT_EQ(parsed.seed, 7u);
    EXPECT_THROW(csv_manifest("x,y\n1,2\n"), Error);
}

TEST(Formatting, TwelveSignificantDigits) {
    EXPECT_EQ(format_double(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(format_double(2.0), "2");
    EXPECT_EQ(format_double(-0.1), "-0.1");
}

TEST(ClassificationJson, FieldsPresent) {
    ChannelClassification c;
    c.is_ebc = true;
    c.pauli_octahedron_margin = -0.25;
    c.ibc_flags[2] = IbcVerdict::breaking;
    c.ibc_flags[3] = IbcVerdict::unknown;
    json j = to_json(c);
    EXPECT_TRUE(j.at("is_ebc").get<bool>());
    EXPECT_EQ(j.at("ibc_flags").at("2"), "breaking");
    EXPECT_EQ(j.at("ibc_flags").at("3"), "unknown");
    EXPECT_NEAR(j.at("pauli_octahedron_margin").get<double>(), -0.25, 1e-15);
}
