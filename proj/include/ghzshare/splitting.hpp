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

#ifndef GHZSHARE_SPLITTING_HPP
#define GHZSHARE_SPLITTING_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ghzshare/density_matrix.hpp"
#include "ghzshare/errors.hpp"
#include "ghzshare/measurement.hpp"
#include "ghzshare/parity_rules.hpp"
#include "ghzshare/random_stream.hpp"
#include "ghzshare/state_vector.hpp"

namespace ghzshare {

// Register layout: Alice's input qubit A, her GHZ particle a, Bob's b, Charlie's c.
inline constexpr std::size_t kInputQubit = 0;
inline constexpr std::size_t kAliceGhzQubit = 1;
inline constexpr std::size_t kBobQubit = 2;
inline constexpr std::size_t kCharlieQubit = 3;

inline std::size_t split_qubit_of(PartyId p) {
    if (p == PartyId::Bob) return kBobQubit;
    if (p == PartyId::Charlie) return kCharlieQubit;
    throw std::invalid_argument("only Bob or Charlie hold a GHZ particle in qubit splitting");
}

inline PartyId other_receiver(PartyId p) { return p == PartyId::Bob ? PartyId::Charlie : PartyId::Bob; }

/// alpha|0> + beta|1>
struct InputQubit {
    Amplitude alpha{1.0};
    Amplitude beta{0.0};

    InputQubit() = default;
    InputQubit(Amplitude a, Amplitude b) : alpha(a), beta(b) {
        if (std::abs(std::norm(a) + std::norm(b) - 1.0) > kAlgebraTol) {
            throw std::invalid_argument("input qubit is not normalized");
        }
    }

    static InputQubit random(RandomStream& rng) {
        const auto s = random_state(1, rng);
        return {s[0], s[1]};
    }

    [[nodiscard]] StateVector state() const { return StateVector::single(alpha, beta); }
};

inline const char* bell_name(BellOutcome b) {
    switch (b) {
        case BellOutcome::PsiPlus: return "Psi+";
        case BellOutcome::PsiMinus: return "Psi-";
        case BellOutcome::PhiPlus: return "Phi+";
        case BellOutcome::PhiMinus: return "Phi-";
    }
    return "?";
}

using PauliWord = std::vector<Pauli>;

/// Receiver's correction for (Alice's Bell outcome, helper's x outcome);
/// recovers the input up to an overall sign.
inline PauliWord correction_for(BellOutcome bell, Outcome helper) {
    const bool plus = helper == Outcome::Plus;
    switch (bell) {
        case BellOutcome::PsiPlus: return plus ? PauliWord{Pauli::I} : PauliWord{Pauli::SigmaZ};
        case BellOutcome::PsiMinus: return plus ? PauliWord{Pauli::SigmaZ} : PauliWord{Pauli::I};
        case BellOutcome::PhiPlus: return plus ? PauliWord{Pauli::SigmaX} : PauliWord{Pauli::SigmaX, Pauli::SigmaZ};
        case BellOutcome::PhiMinus: return plus ? PauliWord{Pauli::SigmaX, Pauli::SigmaZ} : PauliWord{Pauli::SigmaX};
    }
    throw InternalError("bad Bell outcome");
}

inline std::string pauli_word_string(const PauliWord& w) {
    std::string s;
    for (auto p : w) s += p == Pauli::I ? "I" : p == Pauli::SigmaX ? "X" : "Z";
    return s;
}

/// Pins any of the random choices; unset fields are sampled.
struct SplitOptions {
    std::optional<PartyId> receiver;
    std::optional<BellOutcome> force_bell;
    std::optional<Outcome> force_helper;
};

struct SplitTranscript {
    InputQubit input;
    BellOutcome bell_outcome = BellOutcome::PsiPlus;
    PartyId receiver = PartyId::Charlie;
    PartyId helper = PartyId::Bob;
    Outcome helper_outcome = Outcome::Plus;
    PauliWord correction;
    StateVector output_state = StateVector::single(1.0, 0.0);
    double fidelity = 0.0;
    double branch_probability = 0.0;  ///< P(bell, helper); 1/8 on every branch
    std::vector<Announcement> messages;
};

namespace detail {

inline StateVector split_register(const InputQubit& in) { return tensor(in.state(), ghz(3)); }

inline std::pair<BellOutcome, StateVector> bell_step(const StateVector& s, const std::optional<BellOutcome>& force,
                                                     RandomStream& rng, double& prob) {
    const auto family = bell_family(kInputQubit, kAliceGhzQubit);
    if (force) {
        auto [p, next] = project_family(s, family, static_cast<std::size_t>(*force));
        prob *= p;
        return {*force, std::move(next)};
    }
    const auto probs = family_probabilities(s, family);
    auto [idx, next] = measure_family(s, family, rng);
    prob *= probs[idx];
    return {kBellOutcomes[idx], std::move(next)};
}

inline std::pair<Outcome, StateVector> x_step(const StateVector& s, std::size_t qubit,
                                              const std::optional<Outcome>& force, RandomStream& rng, double& prob) {
    if (force) {
        auto [p, next] = project_qubit(s, qubit, Basis::X, *force);
        prob *= p;
        return {*force, std::move(next)};
    }
    const double p_plus = plus_probability(s, qubit, Basis::X);
    auto [o, next] = measure_qubit(s, qubit, Basis::X, rng);
    prob *= o == Outcome::Plus ? p_plus : 1.0 - p_plus;
    return {o, std::move(next)};
}

}  // namespace detail

/**
 * Splits one qubit between Bob and Charlie.
 *
 * Alice Bell-measures (A, a) and picks the receiver at random; the other
 * party (the helper) measures x. The receiver applies correction_for() once
 * it holds both Alice's two bits and the helper's bit. Alice sends her bits
 * only after both partners confirm they hold a particle.
 * Draw order: receiver choice, Bell outcome, helper outcome.
 */
inline SplitTranscript split_qubit(const InputQubit& input, RandomStream& rng, const SplitOptions& options = {}) {
    SplitTranscript t;
    t.input = input;
    t.receiver = options.receiver.value_or(rng.coin() ? PartyId::Bob : PartyId::Charlie);
    split_qubit_of(t.receiver);
    t.helper = other_receiver(t.receiver);

    double prob = 1.0;
    auto [bell, after_bell] = detail::bell_step(detail::split_register(input), options.force_bell, rng, prob);
    t.bell_outcome = bell;
    auto [helper_outcome, after_helper] =
        detail::x_step(after_bell, split_qubit_of(t.helper), options.force_helper, rng, prob);
    t.helper_outcome = helper_outcome;
    t.branch_probability = prob;

    t.messages.push_back({PartyId::Alice, {t.helper}, "measure:X"});
    t.messages.push_back({PartyId::Bob, {PartyId::Alice}, "received"});
    t.messages.push_back({PartyId::Charlie, {PartyId::Alice}, "received"});
    t.messages.push_back({PartyId::Alice, {t.receiver}, std::string("bell:") + bell_name(bell)});
    t.messages.push_back({t.helper, {t.receiver}, std::string("x:") + outcome_char(helper_outcome)});

    t.correction = correction_for(bell, helper_outcome);
    const std::size_t rq = split_qubit_of(t.receiver);
    const StateVector corrected = apply_pauli_word(after_helper, rq, t.correction);
    t.output_state = extract_qubit(corrected, rq);
    t.fidelity = reduced_density(corrected, {rq}).fidelity_with(input.state());
    return t;
}

/// Transcript ordering rule: Alice's Bell bits follow both receipt confirmations.
inline bool split_message_order_respected(const SplitTranscript& t) {
    bool bob = false;
    bool charlie = false;
    for (const auto& m : t.messages) {
        if (m.payload == "received") {
            bob = bob || m.sender == PartyId::Bob;
            charlie = charlie || m.sender == PartyId::Charlie;
        }
        if (m.sender == PartyId::Alice && m.payload.rfind("bell:", 0) == 0 && !(bob && charlie)) return false;
    }
    return true;
}

enum class AuditStage { AfterBellUnannounced, AfterHelperMeasurementUnannounced, AfterAliceAnnouncement };

struct AuditResult {
    DensityMatrix bob;
    DensityMatrix charlie;
};

/**
 * Each partner's single-particle density matrix at a protocol stage,
 * averaged over every branch the partner has not been told about.
 *
 * Knowledge comes from received messages only: the helper's own x outcome
 * is averaged like any other branch, so its audit reflects what it knows
 * about Alice's qubit rather than the collapsed local record. The
 * transcript supplies receiver and (for the last stage) the Bell outcome
 * the receiver was told.
 */
inline AuditResult intermediate_knowledge_audit(AuditStage stage, const SplitTranscript& transcript) {
    const StateVector reg = detail::split_register(transcript.input);
    const auto family = bell_family(kInputQubit, kAliceGhzQubit);
    const std::size_t hq = split_qubit_of(transcript.helper);
    const std::size_t rq = split_qubit_of(transcript.receiver);

    using Parts = std::vector<std::pair<double, DensityMatrix>>;
    Parts helper_parts;
    Parts receiver_parts;
    const auto bell_probs = family_probabilities(reg, family);
    for (std::size_t i = 0; i < kBellOutcomes.size(); ++i) {
        if (bell_probs[i] <= 0.0) continue;
        const StateVector after_bell = project_family(reg, family, i).second;
        if (stage == AuditStage::AfterBellUnannounced) {
            helper_parts.emplace_back(bell_probs[i], reduced_density(after_bell, {hq}));
            receiver_parts.emplace_back(bell_probs[i], reduced_density(after_bell, {rq}));
            continue;
        }
        const bool told = stage == AuditStage::AfterAliceAnnouncement;
        const bool this_bell = kBellOutcomes[i] == transcript.bell_outcome;
        for (auto h : {Outcome::Plus, Outcome::Minus}) {
            const double ph = h == Outcome::Plus ? plus_probability(after_bell, hq, Basis::X)
                                                 : 1.0 - plus_probability(after_bell, hq, Basis::X);
            if (ph <= 0.0) continue;
            const StateVector branch = project_qubit(after_bell, hq, Basis::X, h).second;
            helper_parts.emplace_back(bell_probs[i] * ph, reduced_density(branch, {hq}));
            if (!told) {
                receiver_parts.emplace_back(bell_probs[i] * ph, reduced_density(branch, {rq}));
            } else if (this_bell) {
                receiver_parts.emplace_back(ph, reduced_density(branch, {rq}));
            }
        }
    }
    auto mix = [](Parts& parts) {
        double total = 0.0;
        for (const auto& part : parts) total += part.first;
        for (auto& part : parts) part.first /= total;
        return DensityMatrix::mixture(parts);
    };
    DensityMatrix helper_rho = mix(helper_parts);
    DensityMatrix receiver_rho = mix(receiver_parts);
    if (transcript.receiver == PartyId::Bob) return {std::move(receiver_rho), std::move(helper_rho)};
    return {std::move(helper_rho), std::move(receiver_rho)};
}

/// Replacement particle Charlie sends Bob. Chosen without knowing Alice's Bell outcome.
using SubstituteStrategy = std::function<InputQubit(RandomStream&)>;

inline InputQubit fixed_zero_substitute(RandomStream&) { return InputQubit(1.0, 0.0); }

struct CheatConfig {
    std::size_t runs = 1000;
    double test_fraction = 0.2;
    SubstituteStrategy substitute = fixed_zero_substitute;
};

struct CheatRun {
    InputQubit input;
    PartyId receiver = PartyId::Bob;
    bool test_round = false;
    BellOutcome bell_outcome = BellOutcome::PsiPlus;
    Outcome charlie_x_outcome = Outcome::Plus;
    double fidelity = 0.0;
    double branch_probability = 0.0;
    bool detected = false;
};

/**
 * One run with a dishonest Charlie holding both b and c.
 *
 * Charlie measures b in x himself (playing Bob's helper role) and forwards
 * a substitute particle to Bob. If Alice then picks Bob as receiver, Bob
 * corrects the substitute with Charlie's reported bit. On a test round Alice
 * checks the received state against her input, which flags a mismatch with
 * probability 1 - fidelity.
 * Draw order: input, test flag, substitute, receiver, Charlie's x, Bell outcome, detection.
 */
inline CheatRun charlie_cheat_run(const InputQubit& input, bool test_round, const SubstituteStrategy& substitute,
                                  RandomStream& rng, const SplitOptions& options = {}) {
    CheatRun run;
    run.input = input;
    run.test_round = test_round;
    const InputQubit fake = substitute(rng);
    run.receiver = options.receiver.value_or(rng.coin() ? PartyId::Bob : PartyId::Charlie);
    split_qubit_of(run.receiver);

    constexpr std::size_t kBobSubstitute = 4;
    StateVector s = tensor(detail::split_register(input), fake.state());
    double prob = 1.0;
    auto [x_out, after_x] = detail::x_step(s, kBobQubit, options.force_helper, rng, prob);
    auto [bell, after_bell] = detail::bell_step(after_x, options.force_bell, rng, prob);
    run.charlie_x_outcome = x_out;
    run.bell_outcome = bell;
    run.branch_probability = prob;

    const std::size_t target = run.receiver == PartyId::Bob ? kBobSubstitute : kCharlieQubit;
    const StateVector corrected = apply_pauli_word(after_bell, target, correction_for(bell, x_out));
    run.fidelity = reduced_density(corrected, {target}).fidelity_with(input.state());
    if (test_round) {
        const double miss = 1.0 - run.fidelity;
        run.detected = miss > kOrthoTol && rng.bernoulli(miss);
    }
    return run;
}

struct CheatReport {
    std::size_t runs = 0;
    std::size_t test_runs = 0;
    std::size_t bob_chosen = 0;
    std::size_t charlie_chosen = 0;
    std::size_t bob_chosen_tests = 0;
    std::size_t charlie_chosen_tests = 0;
    std::size_t detections_bob_chosen = 0;
    std::size_t detections_charlie_chosen = 0;
    double detection_rate_when_bob_chosen = 0.0;      ///< sampled, over Bob-chosen test rounds
    double expected_detection_when_bob_chosen = 0.0;  ///< mean 1 - fidelity over the same rounds
    double detection_rate_when_charlie_chosen = 0.0;
    double mean_fidelity_bob_chosen = 0.0;
    double mean_fidelity_charlie_chosen = 0.0;
    std::vector<CheatRun> transcript;
};

/// Run i draws from rng.derive(i).
inline CheatReport charlie_cheat_experiment(const CheatConfig& config, const RandomStream& rng) {
    if (!(config.test_fraction >= 0.0 && config.test_fraction <= 1.0)) {
        throw std::invalid_argument("test fraction must be in [0, 1]");
    }
    CheatReport rep;
    rep.runs = config.runs;
    double fid_bob = 0.0;
    double fid_charlie = 0.0;
    double miss_bob = 0.0;
    for (std::size_t i = 0; i < config.runs; ++i) {
        RandomStream run_rng = rng.derive(i);
        const InputQubit input = InputQubit::random(run_rng);
        const bool test = run_rng.bernoulli(config.test_fraction);
        CheatRun run = charlie_cheat_run(input, test, config.substitute, run_rng);
        rep.test_runs += test ? 1 : 0;
        if (run.receiver == PartyId::Bob) {
            ++rep.bob_chosen;
            fid_bob += run.fidelity;
            if (test) {
                ++rep.bob_chosen_tests;
                miss_bob += 1.0 - run.fidelity;
                rep.detections_bob_chosen += run.detected ? 1 : 0;
            }
        } else {
            ++rep.charlie_chosen;
            fid_charlie += run.fidelity;
            if (test) {
                ++rep.charlie_chosen_tests;
                rep.detections_charlie_chosen += run.detected ? 1 : 0;
            }
        }
        rep.transcript.push_back(run);
    }
    auto ratio = [](double num, std::size_t den) { return den == 0 ? 0.0 : num / static_cast<double>(den); };
    rep.detection_rate_when_bob_chosen = ratio(static_cast<double>(rep.detections_bob_chosen), rep.bob_chosen_tests);
    rep.expected_detection_when_bob_chosen = ratio(miss_bob, rep.bob_chosen_tests);
    rep.detection_rate_when_charlie_chosen =
        ratio(static_cast<double>(rep.detections_charlie_chosen), rep.charlie_chosen_tests);
    rep.mean_fidelity_bob_chosen = ratio(fid_bob, rep.bob_chosen);
    rep.mean_fidelity_charlie_chosen = ratio(fid_charlie, rep.charlie_chosen);
    return rep;
}

}  // namespace ghzshare

#endif  // GHZSHARE_SPLITTING_HPP
