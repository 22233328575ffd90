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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "ghzshare/harness.hpp"
#include "ghzshare/serialization.hpp"

using namespace ghzshare;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ghzshare");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string data_path(const std::string& name) {
    const char* dir = std::getenv("GHZSHARE_TEST_DATA");
    return (fs::path(dir ? dir : "data") / name).string();
}

std::string transcript(const ExperimentConfig& c) {
    std::ostringstream os;
    run_experiment(c, &os);
    return os.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) v.push_back(l);
    return v;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("ghzshare_test_" + std::to_string(::getpid()))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    [[nodiscard]] fs::path file(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

}  // namespace

TEST(Seed, FlagThenEnvironmentThenZero) {
    EXPECT_EQ(resolve_seed(7, "9"), 7u);
    EXPECT_EQ(resolve_seed(std::nullopt, "9"), 9u);
    EXPECT_EQ(resolve_seed(std::nullopt, nullptr), 0u);
    EXPECT_EQ(resolve_seed(std::nullopt, ""), 0u);
    EXPECT_THROW(resolve_seed(std::nullopt, "nine"), std::invalid_argument);
}

TEST(StateFile, ParsesFixtureIntoGhzTimesAncilla) {
    const auto s = load_state_file(data_path("ancilla_ghz_d2.txt"));
    EXPECT_EQ(s.ancilla_dim(), 2u);
    EXPECT_TRUE(equal_up_to_phase(s, with_ancilla(ghz(3), std::vector<Amplitude>{0.6, 0.8}), 1e-12));
    for (const auto& c : ancilla_attack_error_rates(s).per_combo) EXPECT_LT(c.error_probability, 1e-12);
}

TEST(StateFile, RoundTripsAndRejectsBadInput) {
    RandomStream rng(3);
    const auto s = random_state(3, rng, 3);
    std::istringstream in(format_state_text(s));
    const auto back = parse_state_text(in);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(back[i], s[i]);

    auto bad = [](const std::string& text) {
        std::istringstream is(text);
        return parse_state_text(is);
    };
    EXPECT_THROW(bad("1 0\n0 0\n"), std::invalid_argument);                         // not 8*d lines
    EXPECT_THROW(bad("1 0 5\n0 0\n0 0\n0 0\n0 0\n0 0\n0 0\n0 0\n"), std::invalid_argument);  // extra column
    EXPECT_THROW(bad("2 0\n0 0\n0 0\n0 0\n0 0\n0 0\n0 0\n0 0\n"), std::invalid_argument);    // norm 4
    EXPECT_THROW(load_state_file("/nonexistent/state.txt"), std::runtime_error);
}

TEST(Experiment, HonestKeyShareMatchesExpectation) {
    ExperimentConfig c;
    c.rounds = 10000;
    c.seed = 42;
    const auto s = run_experiment(c, nullptr);
    EXPECT_GE(s.sift_rate, 0.48);
    EXPECT_LE(s.sift_rate, 0.52);
    EXPECT_EQ(s.errors, 0u);
    EXPECT_EQ(s.verdict, Verdict::Accept);
    EXPECT_EQ(s.key_length + s.sample_size, s.sifted);
}

TEST(Experiment, InterceptResendAborts) {
    ExperimentConfig c;
    c.rounds = 10000;
    c.seed = 42;
    c.attack = InterceptResend{};
    const auto s = run_experiment(c, nullptr);
    EXPECT_GE(s.qber, 0.23);
    EXPECT_LE(s.qber, 0.27);
    EXPECT_EQ(s.verdict, Verdict::Abort);
    EXPECT_EQ(s.matched_errors, 0u);
}

TEST(Experiment, LyingNeedsBobLastOrder) {
    ExperimentConfig c;
    c.attack = InterceptResend{true};
    EXPECT_THROW(validate(c), std::invalid_argument);
    c.order = AnnouncementOrder::BobLast;
    c.rounds = 2000;
    const auto s = run_experiment(c, nullptr);
    EXPECT_EQ(s.errors, 0u);
    EXPECT_TRUE(s.discard_flag);
}

TEST(Experiment, TranscriptsIndependentOfParallelism) {
    for (auto protocol : {Protocol::KeyShare3, Protocol::KeyShare4, Protocol::Split}) {
        ExperimentConfig c;
        c.protocol = protocol;
        c.rounds = 500;
        c.seed = 11;
        const auto serial = transcript(c);
        c.parallelism = 4;
        EXPECT_EQ(transcript(c), serial);
        c.format = OutputFormat::Csv;
        const auto csv4 = transcript(c);
        c.parallelism = 1;
        EXPECT_EQ(transcript(c), csv4);
    }
}

TEST(Experiment, JsonAndCsvCarryTheSameValues) {
    ExperimentConfig c;
    c.rounds = 300;
    c.seed = 5;
    c.attack = InterceptResend{};
    c.attack_label = "intercept-resend";
    const auto jl = lines_of(transcript(c));
    c.format = OutputFormat::Csv;
    const auto cl = lines_of(transcript(c));
    ASSERT_EQ(jl.size(), c.rounds + 1);  // plus summary
    ASSERT_EQ(cl.size(), c.rounds + 1);  // plus header
    EXPECT_EQ(cl[0], kRoundCsvHeader);
    EXPECT_TRUE(Json::parse(jl.back()).contains("summary"));
    EXPECT_FALSE(Json::parse(jl.back())["summary"].contains("wall_time_s"));
    for (std::size_t i = 0; i < c.rounds; ++i) {
        const auto j = Json::parse(jl[i]);
        const auto f = parse_csv_line(cl[i + 1]);
        ASSERT_EQ(f.size(), 12u);
        EXPECT_EQ(f[0], std::to_string(j["round_index"].get<std::uint64_t>()));
        EXPECT_EQ(f[1], std::to_string(j["parties"].get<std::size_t>()));
        EXPECT_EQ(f[2], j["qubit_order"].get<std::string>());
        std::string bases, outcomes;
        for (const auto& b : j["bases"]) bases += b.get<std::string>();
        for (const auto& o : j["outcomes"]) outcomes += o.get<std::string>();
        EXPECT_EQ(f[3], bases);
        EXPECT_EQ(f[4], outcomes);
        EXPECT_EQ(f[5], j["sifted"].get<bool>() ? "true" : "false");
        EXPECT_EQ(f[6], j["inferred_alice_bit"].is_null() ? "" : std::to_string(j["inferred_alice_bit"].get<int>()));
        EXPECT_EQ(f[7], std::to_string(j["true_alice_bit"].get<int>()));
        EXPECT_EQ(f[8], j["attack"]["adversary"].get<std::string>());
        EXPECT_EQ(f[9], j["attack"]["guess"].get<std::string>());
        EXPECT_EQ(f[10], j["attack"]["guess_matched"].get<bool>() ? "true" : "false");
        EXPECT_EQ(f[11].empty(), j["announcement_log"].empty());
    }
}

TEST(Experiment, SplitTranscriptsAgreeAcrossFormats) {
    ExperimentConfig c;
    c.protocol = Protocol::Split;
    c.rounds = 200;
    c.seed = 8;
    const auto jl = lines_of(transcript(c));
    c.format = OutputFormat::Csv;
    const auto cl = lines_of(transcript(c));
    ASSERT_EQ(cl[0], kSplitCsvHeader);
    for (std::size_t i = 0; i < c.rounds; ++i) {
        const auto j = Json::parse(jl[i]);
        const auto f = parse_csv_line(cl[i + 1]);
        EXPECT_EQ(f[1], j["receiver"].get<std::string>());
        EXPECT_EQ(f[3], j["bell_outcome"].get<std::string>());
        EXPECT_EQ(f[4], j["helper_outcome"].get<std::string>());
        EXPECT_EQ(f[5], j["correction"].get<std::string>());
        EXPECT_NEAR(std::stod(f[6]), j["fidelity"].get<double>(), 1e-11);
    }
}

TEST(Experiment, WorkerFailurePropagates) {
    EXPECT_THROW(detail::parallel_map<int>(100, 4,
                                           [](std::uint64_t i) -> int {
                                               if (i == 37) throw std::runtime_error("boom");
                                               return static_cast<int>(i);
                                           }),
                 std::runtime_error);
    const auto v = detail::parallel_map<std::uint64_t>(1000, 8, [](std::uint64_t i) { return i * i; });
    for (std::uint64_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], i * i);
}

TEST(Cli, ResourcesExample) {
    const auto r = run_cli({"resources", "--key-bits", "100", "--parts", "3"});
    ASSERT_EQ(r.code, 0);
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j["classical_bits_ghz"], 100);
    EXPECT_EQ(j["classical_bits_hybrid"], 300);
}

TEST(Cli, VerifyExample) {
    const auto r = run_cli({"verify", "ancilla-theorem", "--ancilla-dim", "2"});
    ASSERT_EQ(r.code, 0);
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j["kernel_dim"], 2);
    EXPECT_EQ(j["is_product_form"], true);
    EXPECT_EQ(run_cli({"verify", "ancilla-theorem", "--ancilla-dim", "9"}).code, 1);
}

TEST(Cli, FourPartyHonestRun) {
    TempDir tmp;
    const auto path = tmp.file("k4.jsonl").string();
    const auto r = run_cli({"simulate", "keyshare", "--parties", "4", "--rounds", "1000", "--attack", "none", "--seed",
                            "1", "--out", path});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto summary = Json::parse(r.out);
    EXPECT_EQ(summary["qber"], 0.0);
    EXPECT_EQ(summary["verdict"], "Accept");
    EXPECT_TRUE(summary.contains("wall_time_s"));
    EXPECT_EQ(lines_of(slurp(path)).size(), 1001u);
}

TEST(Cli, InterceptResendExitsWithAbort) {
    const auto r = run_cli({"simulate", "keyshare", "--rounds", "2000", "--attack", "intercept-resend", "--seed", "3"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(Json::parse(r.err)["verdict"], "Abort");
}

TEST(Cli, AncillaFixtures) {
    const auto clean = run_cli({"simulate", "keyshare", "--rounds", "1000", "--attack",
                                "ancilla:" + data_path("ancilla_ghz_d2.txt")});
    EXPECT_EQ(clean.code, 0) << clean.err;
    const auto flipped = run_cli({"simulate", "keyshare", "--rounds", "1000", "--attack",
                                  "ancilla:" + data_path("ancilla_flipped_d1.txt")});
    EXPECT_EQ(flipped.code, 2);
    EXPECT_EQ(run_cli({"simulate", "keyshare", "--attack", "ancilla:/no/such/file"}).code, 1);
}

TEST(Cli, UsageErrors) {
    const auto unknown = run_cli({"simulate", "keyshare", "--bogus"});
    EXPECT_EQ(unknown.code, 1);
    EXPECT_NE(unknown.err.find("Usage"), std::string::npos);
    EXPECT_EQ(run_cli({}).code, 1);
    EXPECT_EQ(run_cli({"simulate", "keyshare", "--parties", "5"}).code, 1);
    EXPECT_EQ(run_cli({"simulate", "keyshare", "--attack", "intercept-resend-lying"}).code, 1);
    EXPECT_EQ(run_cli({"simulate", "keyshare", "--rounds", "4000", "--attack", "intercept-resend-lying",
                       "--announcement-order", "bob-last"})
                  .code,
              0);
    EXPECT_EQ(run_cli({"simulate", "keyshare", "--out", "/no/such/dir/x.jsonl"}).code, 1);
}

TEST(Cli, SeedFallsBackToEnvironment) {
    TempDir tmp;
    ::setenv("GHZSHARE_SEED", "17", 1);
    const auto a = run_cli({"simulate", "split", "--runs", "50", "--out", tmp.file("a").string()});
    ::unsetenv("GHZSHARE_SEED");
    const auto b = run_cli({"simulate", "split", "--runs", "50", "--seed", "17", "--out", tmp.file("b").string()});
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(Json::parse(a.out)["seed"], 17);
    EXPECT_EQ(slurp(tmp.file("a")), slurp(tmp.file("b")));
}

TEST(Cli, CharlieCheatIsDetected) {
    const auto r = run_cli({"simulate", "split", "--runs", "500", "--cheat", "charlie", "--seed", "2"});
    EXPECT_EQ(r.code, 2);
    const auto summary = Json::parse(r.err);
    EXPECT_GT(summary["cheat"]["detections_bob_chosen"].get<int>(), 0);
    EXPECT_EQ(summary["cheat"]["detections_charlie_chosen"], 0);
}
