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

#ifndef GHZSHARE_HARNESS_HPP
#define GHZSHARE_HARNESS_HPP

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ghzshare/attacks.hpp"
#include "ghzshare/keyshare.hpp"
#include "ghzshare/random_stream.hpp"
#include "ghzshare/serialization.hpp"
#include "ghzshare/splitting.hpp"

namespace ghzshare {

enum class Protocol { KeyShare3, KeyShare4, Split };
enum class OutputFormat { Json, Csv };

struct ExperimentConfig {
    Protocol protocol = Protocol::KeyShare3;
    std::uint64_t rounds = 1000;
    AttackModel attack = NoAttack{};
    std::string attack_label = "none";
    AnnouncementOrder order = AnnouncementOrder::Standard;
    std::uint64_t seed = 0;
    ErrorPolicy policy;
    OutputFormat format = OutputFormat::Json;
    std::size_t parallelism = 1;
    // Qubit splitting only.
    bool charlie_cheats = false;
    double test_fraction = 0.2;
};

inline void validate(const ExperimentConfig& c) {
    if (c.rounds < 1) throw std::invalid_argument("rounds must be at least 1");
    if (!(c.policy.reveal_fraction > 0.0 && c.policy.reveal_fraction <= 1.0)) {
        throw std::invalid_argument("reveal fraction must be in (0, 1]");
    }
    if (!(c.test_fraction >= 0.0 && c.test_fraction <= 1.0)) throw std::invalid_argument("test fraction must be in [0, 1]");
    if (c.protocol == Protocol::KeyShare4 && !std::holds_alternative<NoAttack>(c.attack)) {
        throw std::invalid_argument("attacks are defined for three parties only");
    }
    if (const auto* ir = std::get_if<InterceptResend>(&c.attack); ir && ir->lying && c.order != AnnouncementOrder::BobLast) {
        throw std::invalid_argument("intercept-resend-lying needs the bob-last announcement order");
    }
}

/// The flag wins; otherwise GHZSHARE_SEED; otherwise 0.
inline std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const char* env_value) {
    if (flag) return *flag;
    if (env_value && *env_value) {
        char* end = nullptr;
        const auto v = std::strtoull(env_value, &end, 0);
        if (end && *end == '\0') return v;
        throw std::invalid_argument("GHZSHARE_SEED is not an integer");
    }
    return 0;
}

// Stream index reserved for the public error-estimation sample.
inline constexpr std::uint64_t kEstimationStream = ~std::uint64_t{0};

struct ComboStats {
    std::string combo;
    std::uint64_t rounds = 0;
    std::uint64_t sifted = 0;
    std::uint64_t errors = 0;
};

struct SplitSummary {
    std::uint64_t runs = 0;
    std::array<std::uint64_t, 4> bell_counts{};
    double mean_fidelity = 0.0;
    double min_fidelity = 1.0;
    std::optional<CheatReport> cheat;
};

struct SummaryReport {
    std::string protocol;
    std::string attack;
    std::uint64_t seed = 0;
    std::uint64_t rounds = 0;
    std::uint64_t sifted = 0;
    double sift_rate = 0.0;
    std::uint64_t errors = 0;
    double qber = 0.0;  ///< over every sifted round, from exact counts
    std::optional<double> qber_estimate;
    std::size_t sample_size = 0;
    double discard_rate = 0.0;
    bool discard_flag = false;
    Verdict verdict = Verdict::Accept;
    VerdictReason reason = VerdictReason::Ok;
    std::size_t key_length = 0;
    std::vector<ComboStats> per_combo;
    // Intercept-resend breakdown by whether Bob's guess matched Alice's basis.
    std::uint64_t matched_sifted = 0;
    std::uint64_t matched_errors = 0;
    std::uint64_t mismatched_sifted = 0;
    std::uint64_t mismatched_errors = 0;
    std::optional<SplitSummary> split;
    double wall_time_s = 0.0;
};

inline const char* protocol_name(Protocol p) {
    switch (p) {
        case Protocol::KeyShare3: return "keyshare3";
        case Protocol::KeyShare4: return "keyshare4";
        case Protocol::Split: return "split";
    }
    return "?";
}

inline std::size_t party_count(Protocol p) { return p == Protocol::KeyShare4 ? 4 : 3; }

inline bool discard_flag_for(double discard_rate, std::uint64_t rounds) { return rounds >= 500 && discard_rate > 0.6; }

namespace detail {

/// Runs fn(i) for i in [0, count) on a small pool; results land by index.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::uint64_t count, std::size_t workers, Fn fn) {
    std::vector<std::optional<T>> slots(count);
    if (workers <= 1 || count < 2) {
        for (std::uint64_t i = 0; i < count; ++i) slots[i] = fn(i);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::exception_ptr failure;
        std::atomic<bool> failed{false};
        std::vector<std::thread> pool;
        const std::size_t n = std::min<std::uint64_t>(workers, count);
        for (std::size_t w = 0; w < n; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::uint64_t i = next.fetch_add(1);
                    if (i >= count || failed.load()) return;
                    try {
                        slots[i] = fn(i);
                    } catch (...) {
                        if (!failed.exchange(true)) failure = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }
    std::vector<T> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace detail

/// Every key-sharing round of an experiment; round i draws from seed.derive(i).
inline std::vector<RoundRecord> run_keyshare_rounds(const ExperimentConfig& config) {
    validate(config);
    const RandomStream master(config.seed);
    const std::size_t n = party_count(config.protocol);
    return detail::parallel_map<RoundRecord>(config.rounds, config.parallelism, [&](std::uint64_t i) {
        RandomStream rng = master.derive(i);
        return run_round(n, config.attack, rng, i, RoundOptions{config.order});
    });
}

inline SummaryReport summarize_keyshare(const ExperimentConfig& config, const std::vector<RoundRecord>& records,
                                        const KeyMaterial& key) {
    SummaryReport s;
    s.protocol = protocol_name(config.protocol);
    s.attack = config.attack_label;
    s.seed = config.seed;
    s.rounds = records.size();
    std::map<std::string, ComboStats> combos;
    for (const auto& t : all_basis_tuples(party_count(config.protocol))) combos[combo_string(t)].combo = combo_string(t);
    for (const auto& r : records) {
        auto& c = combos[combo_string(r.bases)];
        ++c.rounds;
        if (!r.sifted) continue;
        ++s.sifted;
        ++c.sifted;
        const bool err = *r.inferred_alice_bit != r.true_alice_bit;
        s.errors += err ? 1 : 0;
        c.errors += err ? 1 : 0;
        if (r.attack && r.attack->guess_matched) {
            if (*r.attack->guess_matched) {
                ++s.matched_sifted;
                s.matched_errors += err ? 1 : 0;
            } else {
                ++s.mismatched_sifted;
                s.mismatched_errors += err ? 1 : 0;
            }
        }
    }
    for (auto& [name, c] : combos) s.per_combo.push_back(c);
    s.sift_rate = s.rounds ? static_cast<double>(s.sifted) / static_cast<double>(s.rounds) : 0.0;
    s.discard_rate = 1.0 - s.sift_rate;
    s.discard_flag = discard_flag_for(s.discard_rate, s.rounds);
    s.qber = s.sifted ? static_cast<double>(s.errors) / static_cast<double>(s.sifted) : 0.0;
    s.qber_estimate = key.qber_estimate;
    s.sample_size = key.sample_size;
    s.verdict = key.verdict;
    s.reason = key.reason;
    s.key_length = key.alice_key.size();
    return s;
}

inline Json summary_json(const SummaryReport& s, bool include_wall_time) {
    Json j;
    j["protocol"] = s.protocol;
    j["attack"] = s.attack;
    j["seed"] = s.seed;
    j["rounds"] = s.rounds;
    if (!s.split) {
        j["sifted"] = s.sifted;
        j["sift_rate"] = round12(s.sift_rate);
        j["errors"] = s.errors;
        j["qber"] = round12(s.qber);
        j["qber_estimate"] = s.qber_estimate ? Json(round12(*s.qber_estimate)) : Json(nullptr);
        j["sample_size"] = s.sample_size;
        j["discard_rate"] = round12(s.discard_rate);
        j["discard_flag"] = s.discard_flag;
        j["key_length"] = s.key_length;
        Json combos = Json::array();
        for (const auto& c : s.per_combo) {
            combos.push_back(Json{{"bases", c.combo}, {"rounds", c.rounds}, {"sifted", c.sifted}, {"errors", c.errors}});
        }
        j["per_combo"] = combos;
        if (s.matched_sifted + s.mismatched_sifted > 0) {
            j["guess_breakdown"] = Json{{"matched_sifted", s.matched_sifted},
                                        {"matched_errors", s.matched_errors},
                                        {"mismatched_sifted", s.mismatched_sifted},
                                        {"mismatched_errors", s.mismatched_errors}};
        }
    } else {
        const auto& sp = *s.split;
        Json bell;
        for (std::size_t i = 0; i < kBellOutcomes.size(); ++i) bell[bell_name(kBellOutcomes[i])] = sp.bell_counts[i];
        j["bell_counts"] = bell;
        j["mean_fidelity"] = round12(sp.mean_fidelity);
        j["min_fidelity"] = round12(sp.min_fidelity);
        if (sp.cheat) {
            const auto& c = *sp.cheat;
            j["cheat"] = Json{{"strategy", "charlie-substitutes-zero"},
                              {"test_runs", c.test_runs},
                              {"bob_chosen", c.bob_chosen},
                              {"charlie_chosen", c.charlie_chosen},
                              {"bob_chosen_tests", c.bob_chosen_tests},
                              {"charlie_chosen_tests", c.charlie_chosen_tests},
                              {"detections_bob_chosen", c.detections_bob_chosen},
                              {"detections_charlie_chosen", c.detections_charlie_chosen},
                              {"detection_rate_when_bob_chosen", round12(c.detection_rate_when_bob_chosen)},
                              {"expected_detection_when_bob_chosen", round12(c.expected_detection_when_bob_chosen)},
                              {"detection_rate_when_charlie_chosen", round12(c.detection_rate_when_charlie_chosen)},
                              {"mean_fidelity_bob_chosen", round12(c.mean_fidelity_bob_chosen)},
                              {"mean_fidelity_charlie_chosen", round12(c.mean_fidelity_charlie_chosen)}};
        }
    }
    j["verdict"] = verdict_name(s.verdict);
    j["reason"] = reason_name(s.reason);
    if (include_wall_time) j["wall_time_s"] = s.wall_time_s;
    return j;
}

namespace detail {

inline SummaryReport run_split(const ExperimentConfig& config, std::ostream* out) {
    const RandomStream master(config.seed);
    SummaryReport s;
    s.protocol = protocol_name(config.protocol);
    s.attack = config.charlie_cheats ? "charlie" : "none";
    s.seed = config.seed;
    s.rounds = config.rounds;
    SplitSummary sp;
    sp.runs = config.rounds;
    const bool json = config.format == OutputFormat::Json;
    if (config.charlie_cheats) {
        CheatConfig cc;
        cc.runs = config.rounds;
        cc.test_fraction = config.test_fraction;
        CheatReport rep = charlie_cheat_experiment(cc, master);
        if (out && !json) *out << kCheatCsvHeader << '\n';
        double fsum = 0.0;
        for (std::size_t i = 0; i < rep.transcript.size(); ++i) {
            const auto& r = rep.transcript[i];
            ++sp.bell_counts[static_cast<std::size_t>(r.bell_outcome)];
            fsum += r.fidelity;
            sp.min_fidelity = std::min(sp.min_fidelity, r.fidelity);
            if (out) *out << (json ? to_json(r, i).dump() : to_csv_row(r, i)) << '\n';
        }
        sp.mean_fidelity = fsum / static_cast<double>(config.rounds);
        const bool detected = rep.detections_bob_chosen + rep.detections_charlie_chosen > 0;
        s.verdict = detected ? Verdict::Abort : Verdict::Accept;
        s.reason = detected ? VerdictReason::ErrorRateExceeded : VerdictReason::Ok;
        rep.transcript.clear();
        sp.cheat = std::move(rep);
    } else {
        auto runs = parallel_map<SplitTranscript>(config.rounds, config.parallelism, [&](std::uint64_t i) {
            RandomStream rng = master.derive(i);
            const InputQubit input = InputQubit::random(rng);
            return split_qubit(input, rng);
        });
        if (out && !json) *out << kSplitCsvHeader << '\n';
        double fsum = 0.0;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            ++sp.bell_counts[static_cast<std::size_t>(runs[i].bell_outcome)];
            fsum += runs[i].fidelity;
            sp.min_fidelity = std::min(sp.min_fidelity, runs[i].fidelity);
            if (out) *out << (json ? to_json(runs[i], i).dump() : to_csv_row(runs[i], i)) << '\n';
        }
        sp.mean_fidelity = fsum / static_cast<double>(config.rounds);
    }
    s.split = std::move(sp);
    return s;
}

}  // namespace detail

/**
 * Runs a whole experiment and streams its transcript.
 *
 * JSON output is one record per line followed by a {"summary": ...} line;
 * CSV output is a header plus one row per record. Wall time is reported in
 * the returned summary only, so identical configs give identical bytes.
 */
inline SummaryReport run_experiment(const ExperimentConfig& config, std::ostream* out) {
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    const bool json = config.format == OutputFormat::Json;
    SummaryReport summary;
    if (config.protocol == Protocol::Split) {
        summary = detail::run_split(config, out);
    } else {
        const auto records = run_keyshare_rounds(config);
        RandomStream est = RandomStream(config.seed).derive(kEstimationStream);
        const KeyMaterial key = estimate_error(records, config.policy, est);
        summary = summarize_keyshare(config, records, key);
        if (out) {
            if (!json) *out << kRoundCsvHeader << '\n';
            for (const auto& r : records) *out << (json ? to_json(r).dump() : to_csv_row(r)) << '\n';
        }
    }
    if (out && json) *out << Json{{"summary", summary_json(summary, false)}}.dump() << '\n';
    if (out) out->flush();
    if (out && !*out) throw std::runtime_error("failed writing transcript");
    summary.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return summary;
}

}  // namespace ghzshare

#endif  // GHZSHARE_HARNESS_HPP
