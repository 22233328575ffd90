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

#ifndef GHZSHARE_SERIALIZATION_HPP
#define GHZSHARE_SERIALIZATION_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "ghzshare/attacks.hpp"
#include "ghzshare/keyshare.hpp"
#include "ghzshare/splitting.hpp"
#include "ghzshare/state_vector.hpp"

namespace ghzshare {

using Json = nlohmann::ordered_json;

/// Rounds to 12 significant digits so reports print stably.
inline double round12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

inline std::string basis_str(Basis b) { return std::string(1, basis_char(b)); }
inline std::string outcome_str(Outcome o) { return std::string(1, outcome_char(o)); }

inline const char* verdict_name(Verdict v) { return v == Verdict::Accept ? "Accept" : "Abort"; }

inline const char* reason_name(VerdictReason r) {
    switch (r) {
        case VerdictReason::Ok: return "ok";
        case VerdictReason::ErrorRateExceeded: return "error-rate-exceeded";
        case VerdictReason::InsufficientData: return "insufficient-data";
    }
    return "?";
}

inline std::string qubit_order_label(std::size_t parties) {
    std::string s;
    for (std::size_t i = 0; i < parties; ++i) {
        if (i) s += ',';
        s += party_name(party_from_index(i));
    }
    return s;
}

inline Json to_json(const Announcement& a) {
    Json receivers = Json::array();
    for (auto p : a.receivers) receivers.push_back(party_name(p));
    return Json{{"sender", party_name(a.sender)}, {"receivers", receivers}, {"payload", a.payload}};
}

inline Json to_json(const RoundRecord& r) {
    Json j;
    j["round_index"] = r.round_index;
    j["parties"] = r.parties;
    j["qubit_order"] = qubit_order_label(r.parties);
    Json bases = Json::array();
    Json outcomes = Json::array();
    for (auto b : r.bases) bases.push_back(basis_str(b));
    for (auto o : r.outcomes) outcomes.push_back(outcome_str(o));
    j["bases"] = bases;
    j["outcomes"] = outcomes;
    Json log = Json::array();
    for (const auto& a : r.announcement_log) log.push_back(to_json(a));
    j["announcement_log"] = log;
    j["sifted"] = r.sifted;
    j["inferred_alice_bit"] = r.inferred_alice_bit ? Json(*r.inferred_alice_bit) : Json(nullptr);
    j["true_alice_bit"] = r.true_alice_bit;
    if (r.attack) {
        Json a;
        a["adversary"] = r.attack->adversary;
        if (r.attack->guess) a["guess"] = basis_str(*r.attack->guess);
        if (r.attack->guess_matched) a["guess_matched"] = *r.attack->guess_matched;
        if (r.attack->measured_basis) a["measured_basis"] = basis_str(*r.attack->measured_basis);
        if (r.attack->joint_outcome) a["joint_outcome"] = *r.attack->joint_outcome;
        j["attack"] = a;
    } else {
        j["attack"] = nullptr;
    }
    return j;
}

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string announcements_field(const std::vector<Announcement>& log) {
    std::string s;
    for (const auto& a : log) {
        if (!s.empty()) s += ';';
        s += party_name(a.sender);
        s += '>';
        for (std::size_t i = 0; i < a.receivers.size(); ++i) {
            if (i) s += '+';
            s += party_name(a.receivers[i]);
        }
        s += ':';
        s += a.payload;
    }
    return s;
}

inline const char* kRoundCsvHeader =
    "round_index,parties,qubit_order,bases,outcomes,sifted,inferred_alice_bit,true_alice_bit,adversary,guess,"
    "guess_matched,announcement_log";

/// Bases and outcomes are packed strings ("XYY", "+-+") in party order.
inline std::string to_csv_row(const RoundRecord& r) {
    std::string bases;
    std::string outcomes;
    for (auto b : r.bases) bases += basis_char(b);
    for (auto o : r.outcomes) outcomes += outcome_char(o);
    std::ostringstream os;
    os << r.round_index << ',' << r.parties << ',' << csv_escape(qubit_order_label(r.parties)) << ',' << bases << ','
       << outcomes << ',' << (r.sifted ? "true" : "false") << ','
       << (r.inferred_alice_bit ? std::to_string(*r.inferred_alice_bit) : "") << ',' << r.true_alice_bit << ','
       << (r.attack ? r.attack->adversary : "") << ','
       << (r.attack && r.attack->guess ? basis_str(*r.attack->guess) : "") << ','
       << (r.attack && r.attack->guess_matched ? (*r.attack->guess_matched ? "true" : "false") : "") << ','
       << csv_escape(announcements_field(r.announcement_log));
    return os.str();
}

/// Splits one CSV line, honouring double-quoted fields.
inline std::vector<std::string> parse_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

inline Json amplitude_json(Amplitude a) { return Json::array({round12(a.real()), round12(a.imag())}); }

inline Json to_json(const InputQubit& q) {
    return Json{{"alpha", amplitude_json(q.alpha)}, {"beta", amplitude_json(q.beta)}};
}

inline Json to_json(const SplitTranscript& t, std::uint64_t run_index) {
    Json j;
    j["run_index"] = run_index;
    j["qubit_order"] = "A=Alice input,a=Alice,b=Bob,c=Charlie";
    j["input"] = to_json(t.input);
    j["bell_outcome"] = bell_name(t.bell_outcome);
    j["receiver"] = party_name(t.receiver);
    j["helper"] = party_name(t.helper);
    j["helper_outcome"] = outcome_str(t.helper_outcome);
    j["correction"] = pauli_word_string(t.correction);
    j["output_state"] = Json{{"alpha", amplitude_json(t.output_state[0])}, {"beta", amplitude_json(t.output_state[1])}};
    j["fidelity"] = round12(t.fidelity);
    Json log = Json::array();
    for (const auto& m : t.messages) log.push_back(to_json(m));
    j["messages"] = log;
    return j;
}

inline Json to_json(const CheatRun& r, std::uint64_t run_index) {
    Json j;
    j["run_index"] = run_index;
    j["input"] = to_json(r.input);
    j["receiver"] = party_name(r.receiver);
    j["test_round"] = r.test_round;
    j["bell_outcome"] = bell_name(r.bell_outcome);
    j["charlie_x_outcome"] = outcome_str(r.charlie_x_outcome);
    j["fidelity"] = round12(r.fidelity);
    j["detected"] = r.detected;
    return j;
}

inline const char* kSplitCsvHeader = "run_index,receiver,helper,bell_outcome,helper_outcome,correction,fidelity";

inline std::string to_csv_row(const SplitTranscript& t, std::uint64_t run_index) {
    char fid[40];
    std::snprintf(fid, sizeof fid, "%.12g", t.fidelity);
    std::ostringstream os;
    os << run_index << ',' << party_name(t.receiver) << ',' << party_name(t.helper) << ',' << bell_name(t.bell_outcome)
       << ',' << outcome_char(t.helper_outcome) << ',' << pauli_word_string(t.correction) << ',' << fid;
    return os.str();
}

inline const char* kCheatCsvHeader = "run_index,receiver,test_round,bell_outcome,charlie_x_outcome,fidelity,detected";

inline std::string to_csv_row(const CheatRun& r, std::uint64_t run_index) {
    char fid[40];
    std::snprintf(fid, sizeof fid, "%.12g", r.fidelity);
    std::ostringstream os;
    os << run_index << ',' << party_name(r.receiver) << ',' << (r.test_round ? "true" : "false") << ','
       << bell_name(r.bell_outcome) << ',' << outcome_char(r.charlie_x_outcome) << ',' << fid << ','
       << (r.detected ? "true" : "false");
    return os.str();
}

inline Json to_json(const NoErrorTheoremReport& r) {
    return Json{{"ancilla_dim", r.ancilla_dim},
                {"kernel_dim", r.kernel_dim},
                {"is_product_form", r.is_product_form},
                {"max_residual", r.max_residual}};
}

inline Json to_json(const ResourceReport& r) {
    return Json{{"key_bits", r.key_bits},
                {"parts", r.parts},
                {"ghz_triplets", r.ghz_triplets},
                {"hybrid_entangled_pairs", r.hybrid_entangled_pairs},
                {"hybrid_bb84_particles", r.hybrid_bb84_particles},
                {"particles_sent_total", r.particles_sent_total},
                {"classical_bits_ghz", r.classical_bits_ghz},
                {"classical_bits_hybrid", r.classical_bits_hybrid}};
}

/**
 * Ancilla attack state file: one amplitude per line as "re im".
 *
 * Line k holds the amplitude of index k = label * d + ancilla_index, label
 * being the three-qubit basis label with Alice most significant. The line
 * count must be 8 * d for 1 <= d <= 8. Blank lines and lines starting with
 * '#' are ignored. Norms within 1e-6 of one are rescaled to exactly one.
 */
inline StateVector parse_state_text(std::istream& in) {
    std::vector<Amplitude> amps;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        double re = 0.0;
        double im = 0.0;
        std::string rest;
        if (!(ls >> re >> im) || (ls >> rest)) {
            throw std::invalid_argument("state file line " + std::to_string(lineno) + ": expected 're im'");
        }
        amps.emplace_back(re, im);
    }
    if (amps.empty() || amps.size() % 8 != 0 || amps.size() / 8 > 8) {
        throw std::invalid_argument("state file must hold 8*d amplitudes with 1 <= d <= 8");
    }
    double norm = 0.0;
    for (const auto& a : amps) norm += std::norm(a);
    if (std::abs(norm - 1.0) > 1e-6) throw std::invalid_argument("state file amplitudes are not normalized");
    const std::size_t d = amps.size() / 8;
    return StateVector::normalized(3, std::move(amps), d);
}

inline StateVector load_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open state file: " + path);
    return parse_state_text(in);
}

inline std::string format_state_text(const StateVector& s) {
    std::string out = "# " + std::to_string(s.n_qubits()) + " qubits, ancilla dimension " +
                      std::to_string(s.ancilla_dim()) + "; index = label * d + ancilla\n";
    char buf[80];
    for (const auto& a : s.amps()) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", a.real(), a.imag());
        out += buf;
    }
    return out;
}

}  // namespace ghzshare

#endif  // GHZSHARE_SERIALIZATION_HPP
