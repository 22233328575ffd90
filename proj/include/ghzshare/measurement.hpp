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

#ifndef GHZSHARE_MEASUREMENT_HPP
#define GHZSHARE_MEASUREMENT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ghzshare/density_matrix.hpp"
#include "ghzshare/errors.hpp"
#include "ghzshare/random_stream.hpp"
#include "ghzshare/state_vector.hpp"

namespace ghzshare {

namespace detail {

// Index layout of a qubit subset: offsets[s] is the index shift that writes
// subset label s (first subset qubit most significant); bases are the indices
// whose subset bits are all zero.
struct SubsetLayout {
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> bases;
};

inline SubsetLayout subset_layout(const StateVector& s, std::span<const std::size_t> subset) {
    std::vector<bool> seen(s.n_qubits(), false);
    for (auto q : subset) {
        s.check_qubit(q);
        if (seen[q]) throw std::invalid_argument("duplicate qubit in subset");
        seen[q] = true;
    }
    const std::size_t k = subset.size();
    SubsetLayout layout;
    layout.offsets.resize(std::size_t{1} << k);
    for (std::size_t label = 0; label < layout.offsets.size(); ++label) {
        std::size_t off = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if ((label >> (k - 1 - j)) & 1U) off += s.stride(subset[j]);
        }
        layout.offsets[label] = off;
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        bool zero = true;
        for (auto q : subset) zero = zero && s.bit(i, q) == 0;
        if (zero) layout.bases.push_back(i);
    }
    return layout;
}

// Samples an index from a (possibly slightly unnormalized) distribution,
// never returning a zero-probability entry.
inline std::size_t sample_index(std::span<const double> probs, RandomStream& rng) {
    double total = 0.0;
    for (double p : probs) total += p;
    const double u = rng.uniform() * total;
    double acc = 0.0;
    std::size_t last_nonzero = probs.size();
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        acc += probs[i];
        last_nonzero = i;
        if (u < acc) return i;
    }
    if (last_nonzero == probs.size()) throw InternalError("sample_index: empty distribution");
    return last_nonzero;
}

}  // namespace detail

/// Orthonormal basis of the Hilbert space of an ordered qubit subset.
class OrthonormalFamily {
public:
    OrthonormalFamily(std::vector<std::size_t> subset, std::vector<StateVector> vectors)
        : subset_(std::move(subset)), vectors_(std::move(vectors)) {
        const std::size_t k = subset_.size();
        if (k == 0) throw std::invalid_argument("family subset is empty");
        auto sorted = subset_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("family subset has duplicate qubits");
        }
        if (vectors_.size() != (std::size_t{1} << k)) throw std::invalid_argument("family does not span the subset space");
        for (const auto& v : vectors_) {
            if (v.n_qubits() != k || v.ancilla_dim() != 1) throw std::invalid_argument("family vector has wrong size");
        }
        for (std::size_t i = 0; i < vectors_.size(); ++i) {
            for (std::size_t j = i; j < vectors_.size(); ++j) {
                const Amplitude ip = inner_product(vectors_[i], vectors_[j]);
                if (std::abs(ip - Amplitude(i == j ? 1.0 : 0.0)) > kOrthoTol) {
                    throw std::invalid_argument("family is not orthonormal");
                }
            }
        }
    }

    [[nodiscard]] const std::vector<std::size_t>& subset() const { return subset_; }
    [[nodiscard]] const std::vector<StateVector>& vectors() const { return vectors_; }
    [[nodiscard]] std::size_t size() const { return vectors_.size(); }

private:
    std::vector<std::size_t> subset_;
    std::vector<StateVector> vectors_;
};

/// Eigenbasis of X or Y on one qubit, ordered {Plus, Minus}.
inline OrthonormalFamily single_qubit_family(std::size_t qubit, Basis basis) {
    return OrthonormalFamily({qubit}, {eigenstate(basis, Outcome::Plus), eigenstate(basis, Outcome::Minus)});
}

enum class BellOutcome { PsiPlus, PsiMinus, PhiPlus, PhiMinus };

inline constexpr std::array<BellOutcome, 4> kBellOutcomes = {BellOutcome::PsiPlus, BellOutcome::PsiMinus,
                                                             BellOutcome::PhiPlus, BellOutcome::PhiMinus};

/// Psi± = (|00> ± |11>)/sqrt2, Phi± = (|01> ± |10>)/sqrt2, in that order.
inline StateVector bell_state(BellOutcome b) {
    const double h = 1.0 / std::sqrt(2.0);
    switch (b) {
        case BellOutcome::PsiPlus: return StateVector(2, {h, 0.0, 0.0, h});
        case BellOutcome::PsiMinus: return StateVector(2, {h, 0.0, 0.0, -h});
        case BellOutcome::PhiPlus: return StateVector(2, {0.0, h, h, 0.0});
        case BellOutcome::PhiMinus: return StateVector(2, {0.0, h, -h, 0.0});
    }
    throw InternalError("bad Bell outcome");
}

inline OrthonormalFamily bell_family(std::size_t first, std::size_t second) {
    std::vector<StateVector> v;
    for (auto b : kBellOutcomes) v.push_back(bell_state(b));
    return OrthonormalFamily({first, second}, std::move(v));
}

/// Born probabilities ||<v_i|_S psi||^2 for every family member.
inline std::vector<double> family_probabilities(const StateVector& state, const OrthonormalFamily& family) {
    const auto layout = detail::subset_layout(state, family.subset());
    std::vector<double> probs(family.size(), 0.0);
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& v = family.vectors()[i];
        double p = 0.0;
        for (auto base : layout.bases) {
            Amplitude c = 0.0;
            for (std::size_t s = 0; s < layout.offsets.size(); ++s) c += std::conj(v[s]) * state[base + layout.offsets[s]];
            p += std::norm(c);
        }
        probs[i] = p;
    }
    return probs;
}

/// Renormalized projection onto family member i; returns (probability, state).
inline std::pair<double, StateVector> project_family(const StateVector& state, const OrthonormalFamily& family,
                                                     std::size_t index) {
    const auto layout = detail::subset_layout(state, family.subset());
    const auto& v = family.vectors().at(index);
    std::vector<Amplitude> out(state.size(), 0.0);
    double p = 0.0;
    for (auto base : layout.bases) {
        Amplitude c = 0.0;
        for (std::size_t s = 0; s < layout.offsets.size(); ++s) c += std::conj(v[s]) * state[base + layout.offsets[s]];
        p += std::norm(c);
        for (std::size_t s = 0; s < layout.offsets.size(); ++s) out[base + layout.offsets[s]] = v[s] * c;
    }
    if (!(p > 0.0)) throw InternalError("projection onto a zero-probability branch");
    return {p, StateVector::normalized(state.n_qubits(), std::move(out), state.ancilla_dim())};
}

/// Projective measurement in a multi-qubit orthonormal family.
inline std::pair<std::size_t, StateVector> measure_family(const StateVector& state, const OrthonormalFamily& family,
                                                          RandomStream& rng) {
    const auto probs = family_probabilities(state, family);
    const std::size_t index = detail::sample_index(probs, rng);
    return {index, project_family(state, family, index).second};
}

/// P(Plus) for a single-qubit X or Y measurement.
inline double plus_probability(const StateVector& state, std::size_t qubit, Basis basis) {
    state.check_qubit(qubit);
    const auto [e0, e1] = eigenvector(basis, Outcome::Plus);
    const std::size_t st = state.stride(qubit);
    double p = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (state.bit(i, qubit) != 0) continue;
        p += std::norm(std::conj(e0) * state[i] + std::conj(e1) * state[i + st]);
    }
    return p;
}

/// Collapse onto a given single-qubit outcome; the qubit stays in the register.
inline std::pair<double, StateVector> project_qubit(const StateVector& state, std::size_t qubit, Basis basis,
                                                    Outcome outcome) {
    state.check_qubit(qubit);
    const auto [e0, e1] = eigenvector(basis, outcome);
    const std::size_t st = state.stride(qubit);
    std::vector<Amplitude> out(state.size(), 0.0);
    double p = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (state.bit(i, qubit) != 0) continue;
        const Amplitude c = std::conj(e0) * state[i] + std::conj(e1) * state[i + st];
        p += std::norm(c);
        out[i] = e0 * c;
        out[i + st] = e1 * c;
    }
    if (!(p > 0.0)) throw InternalError("projection onto a zero-probability outcome");
    return {p, StateVector::normalized(state.n_qubits(), std::move(out), state.ancilla_dim())};
}

inline std::pair<Outcome, StateVector> measure_qubit(const StateVector& state, std::size_t qubit, Basis basis,
                                                     RandomStream& rng) {
    const double p_plus = std::clamp(plus_probability(state, qubit, basis), 0.0, 1.0);
    const std::array<double, 2> probs = {p_plus, 1.0 - p_plus};
    const Outcome o = detail::sample_index(probs, rng) == 0 ? Outcome::Plus : Outcome::Minus;
    return {o, project_qubit(state, qubit, basis, o).second};
}

enum class Pauli { I, SigmaX, SigmaZ };

/// Applies a Pauli word to one qubit, rightmost factor first.
inline StateVector apply_pauli_word(const StateVector& state, std::size_t qubit, std::span<const Pauli> word) {
    state.check_qubit(qubit);
    if (word.empty()) throw std::invalid_argument("empty Pauli word");
    std::vector<Amplitude> amps(state.amps().begin(), state.amps().end());
    const std::size_t st = state.stride(qubit);
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if (state.bit(i, qubit) != 0) continue;
            if (*it == Pauli::SigmaX) std::swap(amps[i], amps[i + st]);
            else if (*it == Pauli::SigmaZ) amps[i + st] = -amps[i + st];
        }
    }
    return StateVector(state.n_qubits(), std::move(amps), state.ancilla_dim());
}

inline StateVector apply_pauli_word(const StateVector& state, std::size_t qubit, std::initializer_list<Pauli> word) {
    return apply_pauli_word(state, qubit, std::span<const Pauli>(word.begin(), word.size()));
}

/// Partial trace over every qubit not in keep (and over the ancilla).
/// Row/column labels of the result put keep[0] most significant.
inline DensityMatrix reduced_density(const StateVector& state, std::span<const std::size_t> keep) {
    if (keep.empty()) throw std::invalid_argument("reduced_density: keep is empty");
    const auto layout = detail::subset_layout(state, keep);
    const auto dim = static_cast<Eigen::Index>(layout.offsets.size());
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (auto base : layout.bases) {
        for (Eigen::Index r = 0; r < dim; ++r) {
            const Amplitude ar = state[base + layout.offsets[static_cast<std::size_t>(r)]];
            if (ar == Amplitude(0.0)) continue;
            for (Eigen::Index c = 0; c < dim; ++c) {
                rho(r, c) += ar * std::conj(state[base + layout.offsets[static_cast<std::size_t>(c)]]);
            }
        }
    }
    // Hermitian up to rounding; symmetrize so validation is exact.
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(std::move(rho));
}

inline DensityMatrix reduced_density(const StateVector& state, std::initializer_list<std::size_t> keep) {
    return reduced_density(state, std::span<const std::size_t>(keep.begin(), keep.size()));
}

struct MeasurementSpec {
    std::size_t qubit;
    Basis basis;
};

using OutcomeTuple = std::vector<Outcome>;

/**
 * Exact joint outcome distribution of single-qubit X/Y measurements.
 *
 * Rotates each measured qubit so that |+b> maps to |0> and |-b> to |1>, then
 * marginalizes |amp|^2 over the rest. Deliberately shares no code with the
 * sampling path so tests can use it as an oracle. Zero-probability tuples are
 * included.
 */
inline std::map<OutcomeTuple, double> outcome_distribution(const StateVector& state,
                                                           std::span<const MeasurementSpec> specs) {
    std::vector<Amplitude> amps(state.amps().begin(), state.amps().end());
    std::vector<bool> seen(state.n_qubits(), false);
    for (const auto& sp : specs) {
        state.check_qubit(sp.qubit);
        if (seen[sp.qubit]) throw std::invalid_argument("outcome_distribution: repeated qubit");
        seen[sp.qubit] = true;
        // Rows are <+b| and <-b|.
        const Amplitude phase = sp.basis == Basis::X ? Amplitude(1.0, 0.0) : Amplitude(0.0, 1.0);
        const double h = 1.0 / std::sqrt(2.0);
        const std::size_t st = state.stride(sp.qubit);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if (state.bit(i, sp.qubit) != 0) continue;
            const Amplitude a0 = amps[i];
            const Amplitude a1 = amps[i + st];
            amps[i] = h * (a0 + std::conj(phase) * a1);
            amps[i + st] = h * (a0 - std::conj(phase) * a1);
        }
    }
    std::map<OutcomeTuple, double> dist;
    const std::size_t k = specs.size();
    for (std::size_t label = 0; label < (std::size_t{1} << k); ++label) {
        OutcomeTuple t(k);
        for (std::size_t j = 0; j < k; ++j) t[j] = outcome_from_bit(static_cast<int>((label >> (k - 1 - j)) & 1U));
        dist[t] = 0.0;
    }
    for (std::size_t i = 0; i < amps.size(); ++i) {
        OutcomeTuple t(k);
        for (std::size_t j = 0; j < k; ++j) t[j] = outcome_from_bit(state.bit(i, specs[j].qubit));
        dist[t] += std::norm(amps[i]);
    }
    return dist;
}

inline std::map<OutcomeTuple, double> outcome_distribution(const StateVector& state,
                                                           std::initializer_list<MeasurementSpec> specs) {
    return outcome_distribution(state, std::span<const MeasurementSpec>(specs.begin(), specs.size()));
}

/// Receiver-qubit state of a product state: the slice with the largest weight.
inline StateVector extract_qubit(const StateVector& state, std::size_t qubit) {
    state.check_qubit(qubit);
    const std::size_t st = state.stride(qubit);
    std::size_t best = 0;
    double best_w = -1.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (state.bit(i, qubit) != 0) continue;
        const double w = std::norm(state[i]) + std::norm(state[i + st]);
        if (w > best_w) {
            best_w = w;
            best = i;
        }
    }
    Amplitude a = state[best];
    Amplitude b = state[best + st];
    // Fix the global phase: first nonzero component real and positive.
    const Amplitude lead = std::abs(a) > 1e-12 ? a : b;
    const Amplitude phase = std::conj(lead) / std::abs(lead);
    return StateVector::normalized(1, {a * phase, b * phase});
}

}  // namespace ghzshare

#endif  // GHZSHARE_MEASUREMENT_HPP
