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

#ifndef GHZSHARE_KEYSHARE_HPP
#define GHZSHARE_KEYSHARE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ghzshare/attacks.hpp"
#include "ghzshare/errors.hpp"
#include "ghzshare/measurement.hpp"
#include "ghzshare/parity_rules.hpp"
#include "ghzshare/random_stream.hpp"
#include "ghzshare/state_vector.hpp"

namespace ghzshare {

/// What the adversary did in a round; reporting only.
struct AttackTrace {
    std::string adversary = "Bob";  ///< "Bob" (dishonest partner) or "Eve" (outsider)
    std::optional<Basis> guess;
    std::optional<bool> guess_matched;
    std::optional<Basis> measured_basis;  ///< Bob's actual single-qubit basis when it differs from the announced one
    std::optional<std::size_t> joint_outcome;
};

struct RoundRecord {
    std::uint64_t round_index = 0;
    std::size_t parties = 3;
    std::vector<Basis> bases;  ///< announced, in party order
    std::vector<Outcome> outcomes;
    std::vector<Announcement> announcement_log;
    bool sifted = false;
    std::optional<int> inferred_alice_bit;
    int true_alice_bit = 0;
    std::optional<AttackTrace> attack;
};

struct RoundOptions {
    AnnouncementOrder order = AnnouncementOrder::Standard;
};

namespace detail {

inline std::vector<PartyId> partners(std::size_t n) {
    std::vector<PartyId> p;
    for (std::size_t i = 1; i < n; ++i) p.push_back(party_from_index(i));
    return p;
}

inline std::string bases_payload(std::span<const Basis> bases) { return "bases:" + combo_string(bases); }

inline void log_announcements(RoundRecord& r, AnnouncementOrder order) {
    const auto others = partners(r.parties);
    auto basis_msg = [&](PartyId p) {
        r.announcement_log.push_back(
            {p, {PartyId::Alice}, std::string("basis:") + basis_char(r.bases[qubit_of(p)])});
    };
    if (order == AnnouncementOrder::Standard) {
        for (auto p : others) basis_msg(p);
    } else {
        for (auto p : others) {
            if (p != PartyId::Bob) basis_msg(p);
        }
        std::string leak = "bases:Alice=";
        leak += basis_char(r.bases[0]);
        for (auto p : others) {
            if (p == PartyId::Bob) continue;
            leak += ',';
            leak += party_name(p);
            leak += '=';
            leak += basis_char(r.bases[qubit_of(p)]);
        }
        r.announcement_log.push_back({PartyId::Alice, {PartyId::Bob}, std::move(leak)});
        basis_msg(PartyId::Bob);
    }
    r.announcement_log.push_back({PartyId::Alice, others, bases_payload(r.bases)});
}

}  // namespace detail

/// True iff no message from Alice precedes any partner's basis announcement.
inline bool announcement_order_respected(const RoundRecord& r) {
    std::size_t last_partner = 0;
    bool any_partner = false;
    for (std::size_t i = 0; i < r.announcement_log.size(); ++i) {
        if (r.announcement_log[i].sender != PartyId::Alice) {
            last_partner = i;
            any_partner = true;
        }
    }
    for (std::size_t i = 0; i < r.announcement_log.size(); ++i) {
        if (r.announcement_log[i].sender == PartyId::Alice && any_partner && i < last_partner) return false;
    }
    return true;
}

/**
 * Simulates one key-sharing round among n = 3 or 4 parties.
 *
 * Draw order from rng is fixed: every party's basis (party order), Alice's
 * measurement, then the adversary (if any), then the partners' measurements.
 */
inline RoundRecord run_round(std::size_t n, const AttackModel& attack, RandomStream& rng,
                             std::uint64_t round_index = 0, RoundOptions options = {}) {
    check_party_count(n);
    const bool intercept = std::holds_alternative<InterceptResend>(attack);
    const bool ancilla = std::holds_alternative<EntangledAncilla>(attack);
    if ((intercept || ancilla) && n != 3) throw std::invalid_argument("this attack is defined for three parties only");
    if (intercept && std::get<InterceptResend>(attack).lying && options.order != AnnouncementOrder::BobLast) {
        throw ContractViolation("adaptive lying is unavailable under the standard announcement order");
    }

    RoundRecord r;
    r.round_index = round_index;
    r.parties = n;
    r.bases.resize(n);
    r.outcomes.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.bases[i] = rng.coin() ? Basis::Y : Basis::X;
    std::vector<Basis> measured = r.bases;

    StateVector state = ancilla ? std::get<EntangledAncilla>(attack).joint_state : ghz(static_cast<int>(n));
    if (ancilla) validate_ancilla_state(state);

    auto [alice_outcome, after_alice] = measure_qubit(state, 0, r.bases[0], rng);
    r.outcomes[0] = alice_outcome;
    state = std::move(after_alice);

    if (intercept) {
        AttackTrace trace;
        const Basis guess = rng.coin() ? Basis::Y : Basis::X;
        auto hit = intercept_resend_round(state, guess, rng);
        state = std::move(hit.state);
        trace.guess = guess;
        trace.guess_matched = guess == r.bases[0];
        trace.joint_outcome = hit.joint_index;
        measured[1] = guess;
        r.bases[1] = guess;
        if (std::get<InterceptResend>(attack).lying) {
            r.bases[1] = adaptive_lying_announcement(options.order, r.bases[0], r.bases[2], guess);
            if (r.bases[1] != guess) trace.measured_basis = guess;
        }
        r.attack = trace;
    } else if (ancilla) {
        AttackTrace trace;
        trace.adversary = "Eve";
        r.attack = trace;
    }

    for (std::size_t q = 1; q < n; ++q) {
        auto [o, next] = measure_qubit(state, q, measured[q], rng);
        r.outcomes[q] = o;
        state = std::move(next);
    }

    detail::log_announcements(r, options.order);
    r.true_alice_bit = bit_of(r.outcomes[0]);
    r.sifted = valid_combo(r.bases);
    if (r.sifted) {
        r.inferred_alice_bit =
            infer_alice_bit(r.bases, std::span<const Outcome>(r.outcomes).subspan(1));
    }
    return r;
}

struct SiftedBits {
    std::string alice;
    std::string partners;
};

/// Alice's and the partners' bits from sifted rounds, in round order.
inline SiftedBits sift_and_extract(std::span<const RoundRecord> records) {
    SiftedBits out;
    for (const auto& r : records) {
        if (!r.sifted || !r.inferred_alice_bit) continue;
        out.alice += static_cast<char>('0' + r.true_alice_bit);
        out.partners += static_cast<char>('0' + *r.inferred_alice_bit);
    }
    return out;
}

enum class Verdict { Accept, Abort };
enum class VerdictReason { Ok, ErrorRateExceeded, InsufficientData };

struct ErrorPolicy {
    double reveal_fraction = 0.5;
    double threshold = 0.05;
    std::size_t min_sample = 100;
};

struct KeyMaterial {
    std::string alice_key;
    std::string partners_key;
    std::set<std::size_t> revealed_indices;  ///< positions in the sifted bit sequence
    std::size_t sample_size = 0;
    std::size_t sample_mismatches = 0;
    std::optional<double> qber_estimate;  ///< empty when nothing was sifted
    Verdict verdict = Verdict::Abort;
    VerdictReason reason = VerdictReason::InsufficientData;
};

/// Number of bits revealed for a fraction f of count sifted bits: ceil(f * count).
inline std::size_t reveal_count(double fraction, std::size_t count) {
    const double raw = std::ceil(fraction * static_cast<double>(count) - 1e-9);
    return std::min(count, static_cast<std::size_t>(std::max(0.0, raw)));
}

/**
 * Public comparison of a random subset of the sifted bits.
 *
 * Abort iff the sample holds at least min_sample bits and its mismatch rate
 * exceeds the threshold. Nothing sifted is an abort with InsufficientData.
 */
inline KeyMaterial estimate_error(std::span<const RoundRecord> records, const ErrorPolicy& policy,
                                  RandomStream& rng) {
    if (!(policy.reveal_fraction > 0.0 && policy.reveal_fraction <= 1.0)) {
        throw std::invalid_argument("reveal fraction must be in (0, 1]");
    }
    const SiftedBits bits = sift_and_extract(records);
    const std::size_t count = bits.alice.size();
    KeyMaterial km;
    if (count == 0) return km;

    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t k = reveal_count(policy.reveal_fraction, count);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(count - i));
        std::swap(order[i], order[j]);
    }
    km.revealed_indices.insert(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    for (auto idx : km.revealed_indices) km.sample_mismatches += bits.alice[idx] != bits.partners[idx] ? 1 : 0;
    km.sample_size = k;
    km.qber_estimate = k == 0 ? 0.0 : static_cast<double>(km.sample_mismatches) / static_cast<double>(k);
    for (std::size_t i = 0; i < count; ++i) {
        if (km.revealed_indices.count(i)) continue;
        km.alice_key += bits.alice[i];
        km.partners_key += bits.partners[i];
    }
    const bool abort = k >= policy.min_sample && *km.qber_estimate > policy.threshold;
    km.verdict = abort ? Verdict::Abort : Verdict::Accept;
    km.reason = abort ? VerdictReason::ErrorRateExceeded : VerdictReason::Ok;
    return km;
}

struct ResourceReport {
    std::uint64_t key_bits = 0;
    std::uint64_t parts = 0;
    std::uint64_t ghz_triplets = 0;
    std::uint64_t hybrid_entangled_pairs = 0;
    std::uint64_t hybrid_bb84_particles = 0;
    std::uint64_t particles_sent_total = 0;
    std::uint64_t classical_bits_ghz = 0;
    std::uint64_t classical_bits_hybrid = 0;
};

/// Average cost of an N-bit shared key split M ways, GHZ scheme vs. QKD plus
/// classical secret splitting.
inline ResourceReport resource_accounting(std::uint64_t key_bits, std::uint64_t parts) {
    if (parts < 2) throw std::invalid_argument("a secret must be split into at least 2 parts");
    ResourceReport r;
    r.key_bits = key_bits;
    r.parts = parts;
    r.ghz_triplets = 2 * key_bits;
    r.hybrid_entangled_pairs = 4 * key_bits;
    r.hybrid_bb84_particles = 4 * key_bits;
    r.particles_sent_total = 4 * key_bits;
    r.classical_bits_ghz = key_bits;
    r.classical_bits_hybrid = parts * key_bits;
    return r;
}

}  // namespace ghzshare

#endif  // GHZSHARE_KEYSHARE_HPP
