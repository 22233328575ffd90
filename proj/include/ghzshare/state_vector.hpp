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

#ifndef GHZSHARE_STATE_VECTOR_HPP
#define GHZSHARE_STATE_VECTOR_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ghzshare/random_stream.hpp"

namespace ghzshare {

using Amplitude = std::complex<double>;

inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kOrthoTol = 1e-10;

enum class Basis { X, Y };

/// Measurement sign. Key bit convention: Plus -> 0, Minus -> 1.
enum class Outcome { Plus, Minus };

constexpr int sign_of(Outcome o) { return o == Outcome::Plus ? 1 : -1; }
constexpr int bit_of(Outcome o) { return o == Outcome::Plus ? 0 : 1; }
constexpr Outcome outcome_from_sign(int s) { return s >= 0 ? Outcome::Plus : Outcome::Minus; }
constexpr Outcome outcome_from_bit(int b) { return b == 0 ? Outcome::Plus : Outcome::Minus; }
constexpr char basis_char(Basis b) { return b == Basis::X ? 'X' : 'Y'; }
constexpr char outcome_char(Outcome o) { return o == Outcome::Plus ? '+' : '-'; }

/// Components (in the |0>,|1> basis) of the eigenvector |±x> or |±y>.
inline std::pair<Amplitude, Amplitude> eigenvector(Basis basis, Outcome outcome) {
    const double h = 1.0 / std::sqrt(2.0);
    const double s = sign_of(outcome);
    if (basis == Basis::X) return {Amplitude(h, 0.0), Amplitude(s * h, 0.0)};
    return {Amplitude(h, 0.0), Amplitude(0.0, s * h)};
}

/**
 * Pure state of n qubits, optionally followed by one ancilla of dimension d.
 *
 * Amplitude index = label * d + ancilla_index, where label is the
 * computational-basis label of the qubits with qubit 0 as the most
 * significant bit. Qubit 0 is the leftmost ket symbol (Alice's particle in
 * every protocol in this library).
 */
class StateVector {
public:
    StateVector(std::size_t n_qubits, std::vector<Amplitude> amps, std::size_t ancilla_dim = 1)
        : n_qubits_(n_qubits), ancilla_dim_(ancilla_dim), amps_(std::move(amps)) {
        if (n_qubits_ == 0) throw std::invalid_argument("state needs at least one qubit");
        if (n_qubits_ > 16) throw std::invalid_argument("too many qubits");
        if (ancilla_dim_ == 0) throw std::invalid_argument("ancilla dimension must be positive");
        if (amps_.size() != (std::size_t{1} << n_qubits_) * ancilla_dim_) {
            throw std::invalid_argument("amplitude count does not match 2^n * ancilla_dim");
        }
        double norm = 0.0;
        for (const auto& a : amps_) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                throw std::invalid_argument("non-finite amplitude");
            }
            norm += std::norm(a);
        }
        if (std::abs(norm - 1.0) > kAlgebraTol) throw std::invalid_argument("state is not normalized");
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    static StateVector normalized(std::size_t n_qubits, std::vector<Amplitude> amps, std::size_t ancilla_dim = 1) {
        double norm = 0.0;
        for (const auto& a : amps) norm += std::norm(a);
        if (!(norm > 0.0) || !std::isfinite(norm)) throw std::invalid_argument("cannot normalize a zero vector");
        const double scale = 1.0 / std::sqrt(norm);
        for (auto& a : amps) a *= scale;
        return StateVector(n_qubits, std::move(amps), ancilla_dim);
    }

    static StateVector basis_state(std::size_t n_qubits, std::size_t label, std::size_t ancilla_dim = 1,
                                   std::size_t ancilla_index = 0) {
        std::vector<Amplitude> amps((std::size_t{1} << n_qubits) * ancilla_dim);
        amps.at(label * ancilla_dim + ancilla_index) = 1.0;
        return StateVector(n_qubits, std::move(amps), ancilla_dim);
    }

    static StateVector single(Amplitude alpha, Amplitude beta) { return StateVector(1, {alpha, beta}); }

    [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t ancilla_dim() const { return ancilla_dim_; }
    [[nodiscard]] std::size_t size() const { return amps_.size(); }
    [[nodiscard]] std::span<const Amplitude> amps() const { return amps_; }
    [[nodiscard]] const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

    /// Index distance between partners that differ only in qubit q.
    [[nodiscard]] std::size_t stride(std::size_t q) const {
        return ancilla_dim_ << (n_qubits_ - 1 - q);
    }
    [[nodiscard]] int bit(std::size_t index, std::size_t q) const {
        return static_cast<int>((index / stride(q)) & 1U);
    }

    void check_qubit(std::size_t q) const {
        if (q >= n_qubits_) throw std::out_of_range("qubit index out of range");
    }

private:
    std::size_t n_qubits_;
    std::size_t ancilla_dim_;
    std::vector<Amplitude> amps_;
};

/// GHZ state (|0...0> + |1...1>)/sqrt(2) on 2..6 qubits.
inline StateVector ghz(int n) {
    if (n < 2 || n > 6) throw std::invalid_argument("ghz: qubit count must be in [2, 6]");
    const auto size = std::size_t{1} << n;
    std::vector<Amplitude> amps(size);
    amps.front() = amps.back() = 1.0 / std::sqrt(2.0);
    return StateVector(static_cast<std::size_t>(n), std::move(amps));
}

inline StateVector eigenstate(Basis basis, Outcome outcome) {
    const auto [a, b] = eigenvector(basis, outcome);
    return StateVector(1, {a, b});
}

/// |a> ⊗ |b>; b's ancilla (if any) stays last, a must be qubits only.
inline StateVector tensor(const StateVector& a, const StateVector& b) {
    if (a.ancilla_dim() != 1) throw std::invalid_argument("tensor: left factor must not carry an ancilla");
    std::vector<Amplitude> amps;
    amps.reserve(a.size() * b.size());
    for (const auto& x : a.amps()) {
        for (const auto& y : b.amps()) amps.push_back(x * y);
    }
    return StateVector::normalized(a.n_qubits() + b.n_qubits(), std::move(amps), b.ancilla_dim());
}

/// Attach an ancilla in the given (normalized) state after the qubits.
inline StateVector with_ancilla(const StateVector& qubits, std::span<const Amplitude> ancilla) {
    if (qubits.ancilla_dim() != 1) throw std::invalid_argument("with_ancilla: state already has an ancilla");
    std::vector<Amplitude> amps;
    amps.reserve(qubits.size() * ancilla.size());
    for (const auto& x : qubits.amps()) {
        for (const auto& y : ancilla) amps.push_back(x * y);
    }
    return StateVector::normalized(qubits.n_qubits(), std::move(amps), ancilla.size());
}

inline Amplitude inner_product(const StateVector& u, const StateVector& v) {
    if (u.size() != v.size()) throw std::invalid_argument("inner_product: dimension mismatch");
    Amplitude acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += std::conj(u[i]) * v[i];
    return acc;
}

/// |<u|v>|^2
inline double fidelity(const StateVector& u, const StateVector& v) { return std::norm(inner_product(u, v)); }

inline bool equal_up_to_phase(const StateVector& u, const StateVector& v, double tol = kOrthoTol) {
    return u.size() == v.size() && std::abs(inner_product(u, v)) >= 1.0 - tol;
}

inline double standard_normal(RandomStream& rng) {
    double u1 = rng.uniform();
    while (u1 <= 0.0) u1 = rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Haar-random pure state.
inline StateVector random_state(std::size_t n_qubits, RandomStream& rng, std::size_t ancilla_dim = 1) {
    std::vector<Amplitude> amps((std::size_t{1} << n_qubits) * ancilla_dim);
    for (auto& a : amps) {
        const double re = standard_normal(rng);
        a = Amplitude(re, standard_normal(rng));
    }
    return StateVector::normalized(n_qubits, std::move(amps), ancilla_dim);
}

/// Renders e.g. "0.7071|000⟩ + 0.7071|111⟩"; ancilla index follows a ';'.
inline std::string to_string(const StateVector& s, double cutoff = 1e-12) {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Amplitude a = s[i];
        if (std::abs(a) <= cutoff) continue;
        const bool real = std::abs(a.imag()) <= cutoff;
        const bool imag = std::abs(a.real()) <= cutoff;
        double lead = real ? a.real() : imag ? a.imag() : 0.0;
        if (!out.empty()) {
            if ((real || imag) && lead < 0) {
                out += " - ";
                lead = -lead;
            } else {
                out += " + ";
            }
        }
        if (real) std::snprintf(buf, sizeof buf, "%.4g", lead);
        else if (imag) std::snprintf(buf, sizeof buf, "%.4gi", lead);
        else std::snprintf(buf, sizeof buf, "(%.4g%+.4gi)", a.real(), a.imag());
        out += buf;
        out += '|';
        const std::size_t label = i / s.ancilla_dim();
        for (std::size_t q = 0; q < s.n_qubits(); ++q) out += ((label >> (s.n_qubits() - 1 - q)) & 1U) ? '1' : '0';
        if (s.ancilla_dim() > 1) out += ';' + std::to_string(i % s.ancilla_dim());
        out += "⟩";
    }
    return out.empty() ? "0" : out;
}

}  // namespace ghzshare

#endif  // GHZSHARE_STATE_VECTOR_HPP
