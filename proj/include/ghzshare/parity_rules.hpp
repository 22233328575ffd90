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

#ifndef GHZSHARE_PARITY_RULES_HPP
#define GHZSHARE_PARITY_RULES_HPP

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghzshare/errors.hpp"
#include "ghzshare/state_vector.hpp"

namespace ghzshare {

/// Party roles; the enum value is also the party's qubit index.
enum class PartyId { Alice = 0, Bob = 1, Charlie = 2, Diana = 3 };

inline const char* party_name(PartyId p) {
    switch (p) {
        case PartyId::Alice: return "Alice";
        case PartyId::Bob: return "Bob";
        case PartyId::Charlie: return "Charlie";
        case PartyId::Diana: return "Diana";
    }
    return "?";
}

/// One authenticated-but-public classical message.
struct Announcement {
    PartyId sender;
    std::vector<PartyId> receivers;
    std::string payload;
};

inline PartyId party_from_index(std::size_t i) {
    if (i > 3) throw std::out_of_range("party index out of range");
    return static_cast<PartyId>(i);
}

inline std::size_t qubit_of(PartyId p) { return static_cast<std::size_t>(p); }

inline void check_party_count(std::size_t n) {
    if (n != 3 && n != 4) throw std::invalid_argument("key sharing is defined for 3 or 4 parties");
}

inline std::size_t count_y(std::span<const Basis> bases) {
    return static_cast<std::size_t>(std::count(bases.begin(), bases.end(), Basis::Y));
}

/// A basis assignment carries a usable correlation iff it has an even number of Y.
inline bool valid_combo(std::span<const Basis> bases) {
    check_party_count(bases.size());
    return count_y(bases) % 2 == 0;
}

/**
 * Alice's outcome bit as reconstructed by all partners together.
 *
 * On a GHZ state the product of all outcome signs is (-1)^(#Y/2) for every
 * valid assignment, so Alice's sign is that factor times the partners'
 * signs. bases[0] is Alice's basis; partner_outcomes are in party order.
 */
inline int infer_alice_bit(std::span<const Basis> bases, std::span<const Outcome> partner_outcomes) {
    if (!valid_combo(bases)) throw ContractViolation("infer_alice_bit: basis combination is not valid");
    if (partner_outcomes.size() + 1 != bases.size()) {
        throw std::invalid_argument("infer_alice_bit: need one outcome per partner");
    }
    int sign = (count_y(bases) / 2) % 2 == 0 ? 1 : -1;
    for (auto o : partner_outcomes) sign *= sign_of(o);
    return bit_of(outcome_from_sign(sign));
}

/// All basis tuples of length n, first party most significant, X before Y.
inline std::vector<std::vector<Basis>> all_basis_tuples(std::size_t n) {
    std::vector<std::vector<Basis>> out;
    for (std::size_t label = 0; label < (std::size_t{1} << n); ++label) {
        std::vector<Basis> t(n);
        for (std::size_t j = 0; j < n; ++j) t[j] = ((label >> (n - 1 - j)) & 1U) ? Basis::Y : Basis::X;
        out.push_back(std::move(t));
    }
    return out;
}

inline std::vector<std::vector<Basis>> valid_basis_tuples(std::size_t n) {
    auto all = all_basis_tuples(n);
    std::erase_if(all, [](const auto& t) { return !valid_combo(t); });
    return all;
}

inline std::string combo_string(std::span<const Basis> bases) {
    std::string s;
    for (auto b : bases) s += basis_char(b);
    return s;
}

}  // namespace ghzshare

#endif  // GHZSHARE_PARITY_RULES_HPP
