// Copyright 2026 The ghzshare Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

#include "ghzshare/keyshare.hpp"
#include "ghzshare/measurement.hpp"
#include "oracle.hpp"

using namespace ghzshare;

namespace {

std::vector<RoundRecord> honest_rounds(std::size_t n, std::uint64_t count, std::uint64_t seed) {
    const RandomStream master(seed);
    std::vector<RoundRecord> out;
    for (std::uint64_t i = 0; i < count; ++i) {
        RandomStream rng = master.derive(i);
        out.push_back(run_round(n, NoAttack{}, rng, i));
    }
    return out;
}

RoundRecord fake_record(int alice, int partners, bool sifted = true) {
    RoundRecord r;
    r.sifted = sifted;
    r.true_alice_bit = alice;
    if (sifted) r.inferred_alice_bit = partners;
    return r;
}

}  // namespace

TEST(ValidCombo, Examples) {
    using B = Basis;
    EXPECT_TRUE(valid_combo(std::vector{B::X, B::X, B::X}));
    EXPECT_FALSE(valid_combo(std::vector{B::X, B::X, B::Y}));
    EXPECT_TRUE(valid_combo(std::vector{B::X, B::X, B::Y, B::Y}));
    EXPECT_FALSE(valid_combo(std::vector{B::X, B::Y, B::Y, B::Y}));
    EXPECT_THROW(valid_combo(std::vector{B::X, B::X}), std::invalid_argument);
}

TEST(ValidCombo, ExhaustiveEvenYRule) {
    for (std::size_t n : {3u, 4u}) {
        std::size_t valid = 0;
        for (const auto& t : all_basis_tuples(n)) {
            EXPECT_EQ(valid_combo(t), count_y(t) % 2 == 0);
            valid += valid_combo(t);
        }
        EXPECT_EQ(valid, n == 3 ? 4u : 8u);
    }
}

TEST(InferAliceBit, Examples) {
    using B = Basis;
    using O = Outcome;
    EXPECT_EQ(infer_alice_bit(std::vector{B::X, B::X, B::X}, std::vector{O::Plus, O::Plus}), 0);
    // Alice +x, Bob +y leaves Charlie in |0> - i|1>, i.e. -y
    EXPECT_EQ(infer_alice_bit(std::vector{B::X, B::Y, B::Y}, std::vector{O::Plus, O::Minus}), 0);
    EXPECT_EQ(infer_alice_bit(std::vector{B::X, B::X, B::X, B::X}, std::vector{O::Minus, O::Minus, O::Minus}), 1);
    EXPECT_THROW(infer_alice_bit(std::vector{B::X, B::X, B::Y}, std::vector{O::Plus, O::Plus}), ContractViolation);
    EXPECT_THROW(infer_alice_bit(std::vector{B::X, B::X, B::X}, std::vector{O::Plus}), std::invalid_argument);
}

TEST(InferAliceBit, ParityTableEntries) {
    // Table rows Bob, columns Alice: Charlie's state up to normalization.
    // Alice -y, Bob +x -> |0> + i|1> = +y ; Alice +y, Bob -y -> |0> + |1> = +x
    using B = Basis;
    using O = Outcome;
    // Alice y, Bob x, Charlie y, outcomes Bob +, Charlie + -> Alice -y
    EXPECT_EQ(infer_alice_bit(std::vector{B::Y, B::X, B::Y}, std::vector{O::Plus, O::Plus}), 1);
    // Alice y, Bob y, Charlie x, outcomes Bob -, Charlie + -> Alice +y
    EXPECT_EQ(infer_alice_bit(std::vector{B::Y, B::Y, B::X}, std::vector{O::Minus, O::Plus}), 0);
}

// Every nonzero-probability outcome tuple of every valid combo: the partners'
// inference equals Alice's outcome.
TEST(InferAliceBit, ExactOnEveryReachableOutcome) {
    std::size_t combos = 0;
    for (std::size_t n : {3u, 4u}) {
        const auto state = ghz(static_cast<int>(n));
        for (const auto& bases : valid_basis_tuples(n)) {
            ++combos;
            std::vector<MeasurementSpec> specs;
            for (std::size_t q = 0; q < n; ++q) specs.push_back({q, bases[q]});
            for (const auto& [t, p] : outcome_distribution(state, specs)) {
                EXPECT_NEAR(p, oracle::joint_probability(state, bases, t), 1e-13);
                if (p < 1e-12) continue;
                const std::vector<Outcome> partners(t.begin() + 1, t.end());
                EXPECT_EQ(infer_alice_bit(bases, partners), bit_of(t[0])) << combo_string(bases);
            }
        }
    }
    EXPECT_EQ(combos, 12u);
}

TEST(RunRound, HonestRecordsAreConsistent) {
    for (std::size_t n : {3u, 4u}) {
        for (const auto& r : honest_rounds(n, 2000, 7 + n)) {
            ASSERT_EQ(r.bases.size(), n);
            ASSERT_EQ(r.outcomes.size(), n);
            EXPECT_EQ(r.sifted, count_y(r.bases) % 2 == 0);
            EXPECT_EQ(r.inferred_alice_bit.has_value(), r.sifted);
            if (r.sifted) {
                EXPECT_EQ(*r.inferred_alice_bit, r.true_alice_bit);
            }
            EXPECT_EQ(r.true_alice_bit, bit_of(r.outcomes[0]));
            EXPECT_TRUE(announcement_order_respected(r));
            EXPECT_FALSE(r.attack.has_value());
        }
    }
}

TEST(RunRound, AnnouncementLogShape) {
    const auto r = honest_rounds(4, 1, 3).front();
    ASSERT_EQ(r.announcement_log.size(), 4u);
    EXPECT_EQ(r.announcement_log[0].sender, PartyId::Bob);
    EXPECT_EQ(r.announcement_log[1].sender, PartyId::Charlie);
    EXPECT_EQ(r.announcement_log[2].sender, PartyId::Diana);
    const auto& last = r.announcement_log[3];
    EXPECT_EQ(last.sender, PartyId::Alice);
    EXPECT_EQ(last.receivers, (std::vector{PartyId::Bob, PartyId::Charlie, PartyId::Diana}));
    EXPECT_EQ(last.payload, "bases:" + combo_string(r.bases));
    for (const auto& a : r.announcement_log) {
        EXPECT_EQ(a.payload.find('+'), std::string::npos);  // no outcomes leak
    }
}

TEST(RunRound, SiftRateIsOneHalf) {
    for (std::size_t n : {3u, 4u}) {
        const auto rounds = honest_rounds(n, 10000, 42);
        std::size_t sifted = 0;
        for (const auto& r : rounds) sifted += r.sifted;
        const double rate = static_cast<double>(sifted) / rounds.size();
        EXPECT_NEAR(rate, 0.5, 0.02) << n;
    }
}

TEST(RunRound, RejectsBadPartyCountsAndAttackMismatch) {
    RandomStream rng(1);
    EXPECT_THROW(run_round(5, NoAttack{}, rng), std::invalid_argument);
    EXPECT_THROW(run_round(4, InterceptResend{}, rng), std::invalid_argument);
    EXPECT_THROW(run_round(4, EntangledAncilla{with_ancilla(ghz(3), std::vector<Amplitude>{1.0})}, rng),
                 std::invalid_argument);
    EXPECT_THROW(run_round(3, InterceptResend{true}, rng), ContractViolation);
}

TEST(RunRound, SameStreamSameRecord) {
    RandomStream a(77);
    RandomStream b(77);
    const auto r1 = run_round(3, NoAttack{}, a, 0);
    const auto r2 = run_round(3, NoAttack{}, b, 0);
    EXPECT_EQ(r1.bases, r2.bases);
    EXPECT_EQ(r1.outcomes, r2.outcomes);
}

TEST(SiftAndExtract, EdgeCases) {
    EXPECT_TRUE(sift_and_extract({}).alice.empty());
    const std::vector<RoundRecord> unsifted = {fake_record(0, 0, false), fake_record(1, 0, false)};
    const auto none = sift_and_extract(unsifted);
    EXPECT_TRUE(none.alice.empty());
    EXPECT_TRUE(none.partners.empty());
    const auto honest = honest_rounds(3, 500, 9);
    const auto bits = sift_and_extract(honest);
    EXPECT_EQ(bits.alice, bits.partners);
    EXPECT_EQ(bits.alice.size(), static_cast<std::size_t>(std::count_if(
                                     honest.begin(), honest.end(), [](const auto& r) { return r.sifted; })));
    const std::vector<RoundRecord> mixed = {fake_record(1, 1), fake_record(0, 1, false), fake_record(0, 1)};
    EXPECT_EQ(sift_and_extract(mixed).alice, "10");
    EXPECT_EQ(sift_and_extract(mixed).partners, "11");
}

TEST(EstimateError, HonestRunAccepts) {
    const auto rounds = honest_rounds(3, 4000, 5);
    for (double f : {0.1, 0.5, 0.9}) {
        RandomStream rng(1);
        const auto km = estimate_error(rounds, ErrorPolicy{f, 0.05, 100}, rng);
        ASSERT_TRUE(km.qber_estimate.has_value());
        EXPECT_EQ(*km.qber_estimate, 0.0);
        EXPECT_EQ(km.verdict, Verdict::Accept);
        EXPECT_EQ(km.alice_key, km.partners_key);
    }
}

TEST(EstimateError, RevealAllConsumesKey) {
    const auto rounds = honest_rounds(3, 300, 5);
    RandomStream rng(1);
    const auto km = estimate_error(rounds, ErrorPolicy{1.0, 0.05, 100}, rng);
    EXPECT_TRUE(km.alice_key.empty());
    EXPECT_TRUE(km.partners_key.empty());
    EXPECT_EQ(km.revealed_indices.size(), km.sample_size);
}

TEST(EstimateError, CeilingConventionForRevealedCount) {
    std::vector<RoundRecord> rounds;
    for (int i = 0; i < 10; ++i) rounds.push_back(fake_record(i % 2, i % 2));
    for (double f : {0.05, 0.1, 0.25, 0.3, 0.5, 0.7, 0.99}) {
        RandomStream rng(3);
        const auto km = estimate_error(rounds, ErrorPolicy{f, 0.05, 1}, rng);
        const auto k = static_cast<std::size_t>(std::ceil(f * 10 - 1e-9));
        EXPECT_EQ(km.sample_size, k) << f;
        EXPECT_EQ(km.alice_key.size(), 10 - k);
        EXPECT_EQ(km.alice_key.size(), km.partners_key.size());
        for (auto idx : km.revealed_indices) EXPECT_LT(idx, 10u);
    }
}

TEST(EstimateError, AbortRuleAndInsufficientData) {
    std::vector<RoundRecord> rounds;
    for (int i = 0; i < 400; ++i) rounds.push_back(fake_record(0, i % 4 == 0 ? 1 : 0));
    RandomStream rng(8);
    auto km = estimate_error(rounds, ErrorPolicy{0.5, 0.05, 100}, rng);
    EXPECT_EQ(km.verdict, Verdict::Abort);
    EXPECT_EQ(km.reason, VerdictReason::ErrorRateExceeded);
    // same errors but the sample is below min_sample -> accept
    RandomStream rng2(8);
    km = estimate_error(rounds, ErrorPolicy{0.1, 0.05, 100}, rng2);
    EXPECT_EQ(km.sample_size, 40u);
    EXPECT_EQ(km.verdict, Verdict::Accept);

    RandomStream rng3(8);
    const std::vector<RoundRecord> empty = {fake_record(0, 0, false)};
    km = estimate_error(empty, ErrorPolicy{}, rng3);
    EXPECT_FALSE(km.qber_estimate.has_value());
    EXPECT_EQ(km.verdict, Verdict::Abort);
    EXPECT_EQ(km.reason, VerdictReason::InsufficientData);

    EXPECT_THROW(estimate_error(rounds, ErrorPolicy{0.0, 0.05, 100}, rng3), std::invalid_argument);
    EXPECT_THROW(estimate_error(rounds, ErrorPolicy{1.5, 0.05, 100}, rng3), std::invalid_argument);
}

TEST(ResourceAccounting, Examples) {
    auto r = resource_accounting(100, 2);
    EXPECT_EQ(r.ghz_triplets, 200u);
    EXPECT_EQ(r.hybrid_entangled_pairs, 400u);
    EXPECT_EQ(r.hybrid_bb84_particles, 400u);
    EXPECT_EQ(r.particles_sent_total, 400u);
    EXPECT_EQ(r.classical_bits_ghz, 100u);
    EXPECT_EQ(r.classical_bits_hybrid, 200u);
    r = resource_accounting(0, 3);
    EXPECT_EQ(r.ghz_triplets + r.hybrid_entangled_pairs + r.classical_bits_ghz + r.classical_bits_hybrid, 0u);
    r = resource_accounting(10, 5);
    EXPECT_EQ(r.classical_bits_hybrid, 50u);
    EXPECT_EQ(r.classical_bits_ghz, 10u);
    EXPECT_THROW(resource_accounting(10, 1), std::invalid_argument);
}
