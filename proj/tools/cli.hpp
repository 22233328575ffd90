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

#ifndef GHZSHARE_TOOLS_CLI_HPP
#define GHZSHARE_TOOLS_CLI_HPP

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ghzshare/ghzshare.hpp"

namespace ghzshare::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAbort = 2;

/// Parses an --attack value into an attack model.
inline AttackModel parse_attack(const std::string& spec) {
    if (spec == "none") return NoAttack{};
    if (spec == "intercept-resend") return InterceptResend{false};
    if (spec == "intercept-resend-lying") return InterceptResend{true};
    if (spec.rfind("ancilla:", 0) == 0) return EntangledAncilla{load_state_file(spec.substr(8))};
    throw std::invalid_argument("unknown attack: " + spec);
}

inline int write_run(const ExperimentConfig& config, const std::string& out_path, std::ostream& out,
                     std::ostream& err) {
    SummaryReport summary;
    if (out_path.empty()) {
        summary = run_experiment(config, &out);
        err << summary_json(summary, true).dump(2) << '\n';
    } else {
        std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot open output file: " + out_path);
        summary = run_experiment(config, &file);
        out << summary_json(summary, true).dump(2) << '\n';
    }
    return summary.verdict == Verdict::Accept ? kExitOk : kExitAbort;
}

/**
 * Entry point shared by the ghzshare binary and the tests.
 *
 * Transcripts go to --out when given, else to out (and the summary to err).
 */
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"GHZ-state quantum secret sharing simulator", "ghzshare"};
    app.require_subcommand(1);

    auto* simulate = app.add_subcommand("simulate", "Run a protocol experiment");
    simulate->require_subcommand(1);

    auto* keyshare = simulate->add_subcommand("keyshare", "Classical key sharing among 3 or 4 parties");
    std::size_t parties = 3;
    std::uint64_t rounds = 1000;
    std::string attack = "none";
    std::optional<std::uint64_t> seed;
    double reveal_fraction = 0.5;
    double threshold = 0.05;
    std::size_t min_sample = 100;
    std::string format = "json";
    std::string out_path;
    std::string order = "standard";
    std::size_t parallelism = 1;
    keyshare->add_option("--parties", parties, "Number of parties")->check(CLI::IsMember({3, 4}));
    keyshare->add_option("--rounds", rounds, "Rounds to simulate")->check(CLI::PositiveNumber);
    keyshare->add_option("--attack", attack,
                         "none | intercept-resend | intercept-resend-lying | ancilla:<statefile>");
    keyshare->add_option("--seed", seed, "Master seed (falls back to GHZSHARE_SEED)");
    keyshare->add_option("--reveal-fraction", reveal_fraction, "Fraction of sifted bits compared publicly");
    keyshare->add_option("--threshold", threshold, "Abort when the sampled error rate exceeds this");
    keyshare->add_option("--min-sample", min_sample, "Smallest sample that may trigger an abort");
    keyshare->add_option("--format", format, "Transcript format")->check(CLI::IsMember({"json", "csv"}));
    keyshare->add_option("--out", out_path, "Transcript path");
    keyshare->add_option("--announcement-order", order, "standard | bob-last")
        ->check(CLI::IsMember({"standard", "bob-last"}));
    keyshare->add_option("--parallelism", parallelism, "Worker threads")->check(CLI::PositiveNumber);

    auto* split = simulate->add_subcommand("split", "Split one qubit between Bob and Charlie");
    std::uint64_t runs = 1000;
    std::string cheat = "none";
    double test_fraction = 0.2;
    split->add_option("--runs", runs, "Runs to simulate")->check(CLI::PositiveNumber);
    split->add_option("--cheat", cheat, "none | charlie")->check(CLI::IsMember({"none", "charlie"}));
    split->add_option("--seed", seed, "Master seed (falls back to GHZSHARE_SEED)");
    split->add_option("--test-fraction", test_fraction, "Fraction of runs Alice checks against her input");
    split->add_option("--format", format, "Transcript format")->check(CLI::IsMember({"json", "csv"}));
    split->add_option("--out", out_path, "Transcript path");
    split->add_option("--parallelism", parallelism, "Worker threads")->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "Numerical checks");
    verify->require_subcommand(1);
    auto* theorem = verify->add_subcommand("ancilla-theorem", "No-error implies GHZ x ancilla product form");
    std::size_t ancilla_dim = 1;
    theorem->add_option("--ancilla-dim", ancilla_dim, "Ancilla dimension d")->required()->check(CLI::Range(1, 8));

    auto* resources = app.add_subcommand("resources", "Resource comparison for an N-bit key in M parts");
    std::uint64_t key_bits = 0;
    std::uint64_t parts = 2;
    resources->add_option("--key-bits", key_bits, "Key length N")->required();
    resources->add_option("--parts", parts, "Number of parts M")->required()->check(CLI::Range(2, 1 << 20));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitError;
    }

    try {
        if (*keyshare || *split) {
            ExperimentConfig config;
            config.seed = resolve_seed(seed, std::getenv("GHZSHARE_SEED"));
            config.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
            config.parallelism = parallelism;
            if (*keyshare) {
                config.protocol = parties == 4 ? Protocol::KeyShare4 : Protocol::KeyShare3;
                config.rounds = rounds;
                config.attack = parse_attack(attack);
                config.attack_label = attack;
                config.order = order == "bob-last" ? AnnouncementOrder::BobLast : AnnouncementOrder::Standard;
                config.policy = ErrorPolicy{reveal_fraction, threshold, min_sample};
            } else {
                config.protocol = Protocol::Split;
                config.rounds = runs;
                config.charlie_cheats = cheat == "charlie";
                config.test_fraction = test_fraction;
            }
            return write_run(config, out_path, out, err);
        }
        if (*theorem) {
            const auto report = verify_no_error_theorem(ancilla_dim);
            out << to_json(report).dump(2) << '\n';
            return report.is_product_form && report.kernel_dim == ancilla_dim ? kExitOk : kExitError;
        }
        if (*resources) {
            out << to_json(resource_accounting(key_bits, parts)).dump(2) << '\n';
            return kExitOk;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    err << app.help();
    return kExitError;
}

}  // namespace ghzshare::cli

#endif  // GHZSHARE_TOOLS_CLI_HPP
