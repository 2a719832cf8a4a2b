#include <gtest/gtest.h>

#include <cmath>

#include "coldwallet/complexity.hpp"
#include "test_util.hpp"

using namespace coldwallet;
using cwtest::AllowSampleDestination;
using cwtest::MakePair;
using cwtest::SampleTx;

namespace {

OpTally T(int e, int s, int ec, int inv) { return OpTally{e, s, ec, inv}; }

}  // namespace

// Expected per-party totals.
TEST(Complexity, TotalsMatchExpectedTable) {
  using M = Method;
  using P = Party;
  EXPECT_EQ(FindComplexityRow(M::kSingleParty, Scheme::kEcdsa, P::kGateway).Total(), T(0, 2, 2, 1));
  EXPECT_EQ(FindComplexityRow(M::kSingleParty, Scheme::kEcdsa, P::kCore).Total(), T(0, 2, 1, 1));
  EXPECT_EQ(FindComplexityRow(M::kSingleParty, Scheme::kSchnorr, P::kGateway).Total(), T(0, 0, 2, 0));
  EXPECT_EQ(FindComplexityRow(M::kSingleParty, Scheme::kSchnorr, P::kCore).Total(), T(0, 1, 1, 0));
  EXPECT_EQ(FindComplexityRow(M::kTwoParty, Scheme::kEcdsa, P::kGateway).Total(), T(3, 6, 4, 2));
  EXPECT_EQ(FindComplexityRow(M::kTwoParty, Scheme::kEcdsa, P::kCore).Total(), T(3, 6, 2, 1));
  EXPECT_EQ(FindComplexityRow(M::kTwoParty, Scheme::kSchnorr, P::kGateway).Total(), T(0, 1, 3, 0));
  EXPECT_EQ(FindComplexityRow(M::kTwoParty, Scheme::kSchnorr, P::kCore).Total(), T(0, 1, 1, 0));
  EXPECT_EQ(ComplexityTable().size(), 8u);
  EXPECT_EQ(T(3, 6, 4, 2).ToString(), "3E_m+6M_s+4M_ec+2I_m");
}

TEST(Complexity, StepBreakdown) {
  const auto& gw = FindComplexityRow(Method::kTwoParty, Scheme::kEcdsa, Party::kGateway);
  ASSERT_EQ(gw.steps.size(), 2u);
  EXPECT_EQ(gw.steps[0].ops, T(2, 1, 1, 0));
  EXPECT_FALSE(gw.steps[0].plus_verify);
  EXPECT_EQ(gw.steps[1].ops + VerifyCost(Scheme::kEcdsa), T(1, 5, 3, 2));
  EXPECT_TRUE(gw.steps[1].plus_verify);
  EXPECT_EQ(gw.AtKeygen(), T(2, 0, 0, 0));
  EXPECT_EQ(gw.PerSession(), T(1, 6, 4, 2));

  const auto& sg = FindComplexityRow(Method::kTwoParty, Scheme::kSchnorr, Party::kGateway);
  ASSERT_EQ(sg.steps.size(), 2u);
  EXPECT_EQ(sg.steps[0].ops, T(0, 0, 1, 0));
  EXPECT_EQ(sg.steps[1].ops, T(0, 1, 0, 0));
  EXPECT_TRUE(sg.steps[1].plus_verify);
  EXPECT_EQ(VerifyCost(Scheme::kSchnorr), T(0, 0, 2, 0));
  EXPECT_FALSE(RenderComplexityTable().empty());
}

TEST(Complexity, MeasuredCountsMatchTable) {
  SeededRng rng(1);
  for (Scheme scheme : {Scheme::kEcdsa, Scheme::kSchnorr}) {
    auto pair = MakePair(scheme, rng);
    PartyCounts counts = CountSessionOps(pair.initiator, pair.core, SampleTx(), AllowSampleDestination(), rng);
    const auto& gw = FindComplexityRow(Method::kTwoParty, scheme, Party::kGateway);
    const auto& core = FindComplexityRow(Method::kTwoParty, scheme, Party::kCore);
    EXPECT_TRUE(MatchesMeasured(gw.AtKeygen(), counts.gateway_keygen)) << SchemeName(scheme);
    EXPECT_TRUE(MatchesMeasured(gw.PerSession(), counts.gateway)) << SchemeName(scheme);
    EXPECT_TRUE(MatchesMeasured(core.Total(), counts.core)) << SchemeName(scheme);
  }
  SeededRng rng2(2);
  auto pair = MakePair(Scheme::kEcdsa, rng2);
  PartyCounts c = CountSessionOps(pair.initiator, pair.core, SampleTx(), AllowSampleDestination(), rng2);
  EXPECT_EQ(c.gateway, (OpCounts{1, 4, 2}));
  EXPECT_EQ(c.core, (OpCounts{3, 2, 1}));
  EXPECT_EQ(c.gateway_keygen, (OpCounts{2, 0, 0}));
}

TEST(Complexity, MatchesMeasuredIgnoresOnlyScalarMuls) {
  EXPECT_TRUE(MatchesMeasured(T(1, 99, 2, 3), OpCounts{1, 2, 3}));
  EXPECT_FALSE(MatchesMeasured(T(1, 0, 2, 3), OpCounts{1, 2, 4}));
  EXPECT_FALSE(MatchesMeasured(T(1, 0, 2, 3), OpCounts{0, 2, 3}));
}

TEST(Sizes, EcdsaStepsTrackTheory) {
  SeededRng rng(3);
  auto pair = MakePair(Scheme::kEcdsa, rng);
  auto rows = MeasureSessionSizes(pair.initiator, pair.core, SampleTx(), AllowSampleDestination(), rng);
  ASSERT_EQ(rows.size(), 2u);
  const double q_bits = 256, n_bits = 1024;
  EXPECT_DOUBLE_EQ(rows[0].theory_bytes, (q_bits + 2 * n_bits + n_bits) / 8);
  EXPECT_DOUBLE_EQ(rows[1].theory_bytes, (q_bits + 2 * n_bits) / 8);
  for (const auto& row : rows) {
    EXPECT_LE(std::fabs(static_cast<double>(row.extra_payload) - row.theory_bytes),
              0.10 * row.theory_bytes);
    EXPECT_LE(row.framing, 64u);
    EXPECT_EQ(row.envelope_bytes, row.tx_bytes + row.extra_payload + row.framing);
    EXPECT_LE(row.envelope_packed, row.envelope_bytes);
    EXPECT_LE(row.extra_packed, row.extra_payload);
  }
  EXPECT_EQ(rows[0].tx_bytes, 40u + 32u);
  EXPECT_EQ(rows[1].tx_bytes, 0u);
  // Implementation row read literally (256 B + 512 B + 256 B) and as bits
  // for the curve point (32 B + 512 B + 256 B) at a 2048-bit modulus.
  EXPECT_EQ(rows[0].impl_row_as_bytes, 1024u);
  EXPECT_EQ(rows[0].impl_row_as_bits, 800u);
  EXPECT_EQ(rows[1].impl_row_as_bytes, 768u);
  EXPECT_EQ(rows[1].impl_row_as_bits, 544u);
  EXPECT_FALSE(RenderSizeTable(rows).empty());
}

TEST(Sizes, SchnorrStepsTrackTheory) {
  SeededRng rng(4);
  auto pair = MakePair(Scheme::kSchnorr, rng);
  auto rows = MeasureSessionSizes(pair.initiator, pair.core, SampleTx(), AllowSampleDestination(), rng);
  ASSERT_EQ(rows.size(), 2u);
  // |l| = 253 bits.
  EXPECT_DOUBLE_EQ(rows[1].theory_bytes, 2 * 253 / 8.0);
  EXPECT_DOUBLE_EQ(rows[0].theory_bytes, 253 / 8.0);
  EXPECT_EQ(rows[1].extra_payload, 64u);
  EXPECT_EQ(rows[1].envelope_bytes, 102u);
  EXPECT_LE(std::fabs(static_cast<double>(rows[1].extra_payload) - rows[1].theory_bytes),
            0.10 * rows[1].theory_bytes);
  EXPECT_LE(rows[1].framing, 64u);
  EXPECT_EQ(rows[0].extra_payload, 32u);
  EXPECT_EQ(rows[0].tx_bytes, 40u);
}
