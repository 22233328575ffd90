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

#ifndef GHZSHARE_ATTACKS_HPP
#define GHZSHARE_ATTACKS_HPP

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ghzshare/errors.hpp"
#include "ghzshare/measurement.hpp"
#include "ghzshare/parity_rules.hpp"
#include "ghzshare/random_stream.hpp"
#include "ghzshare/state_vector.hpp"

namespace ghzshare {

struct NoAttack {};

/// Dishonest Bob holds both b and c, measures them jointly and forwards c.
struct InterceptResend {
    /// Bob announces a basis that voids the round whenever his guess was
    /// wrong. Needs the weakened announcement order.
    bool lying = false;
};

/// Eve supplies the full three-qubit-plus-ancilla state the parties share.
struct EntangledAncilla {
    StateVector joint_state;
};

using AttackModel = std::variant<NoAttack, InterceptResend, EntangledAncilla>;

inline void validate_ancilla_state(const StateVector& joint) {
    if (joint.n_qubits() != 3) throw std::invalid_argument("ancilla attack state must have 3 protocol qubits");
    if (joint.ancilla_dim() > 8) throw std::invalid_argument("ancilla dimension must be at most 8");
}

/// Who sees what before Bob has to commit to a basis.
enum class AnnouncementOrder {
    Standard,  ///< every partner sends its basis to Alice before she reveals any
    BobLast,   ///< Bob learns Alice's and Charlie's bases before announcing
};

/**
 * Bob's joint measurement family on (b, c).
 *
 * Guess X uses (|00>±|11>)/sqrt2, the states (b, c) collapse to after
 * Alice's ±x outcome; guess Y uses (|00>±i|11>)/sqrt2. The remaining two
 * members complete the basis and are never reached from a GHZ state.
 */
inline OrthonormalFamily intercept_family(Basis guess, std::size_t bob_qubit = 1, std::size_t charlie_qubit = 2) {
    const double h = 1.0 / std::sqrt(2.0);
    const Amplitude ph = guess == Basis::X ? Amplitude(h, 0.0) : Amplitude(0.0, h);
    std::vector<StateVector> v;
    v.emplace_back(2, std::vector<Amplitude>{h, 0.0, 0.0, ph});
    v.emplace_back(2, std::vector<Amplitude>{h, 0.0, 0.0, -ph});
    v.emplace_back(2, std::vector<Amplitude>{0.0, h, ph, 0.0});
    v.emplace_back(2, std::vector<Amplitude>{0.0, h, -ph, 0.0});
    return OrthonormalFamily({bob_qubit, charlie_qubit}, std::move(v));
}

struct InterceptOutcome {
    std::size_t joint_index;
    StateVector state;
};

/// Bob's joint measurement of the intercepted pair after Alice has measured.
inline InterceptOutcome intercept_resend_round(const StateVector& after_alice, Basis bob_guess, RandomStream& rng) {
    if (after_alice.n_qubits() != 3) throw ContractViolation("intercept-resend is defined for three parties");
    auto [index, collapsed] = measure_family(after_alice, intercept_family(bob_guess), rng);
    return {index, std::move(collapsed)};
}

/// Basis Bob announces under the adaptive-lying strategy.
inline Basis adaptive_lying_announcement(AnnouncementOrder order, Basis alice, Basis charlie, Basis bob_guess) {
    if (order != AnnouncementOrder::BobLast) {
        throw ContractViolation("adaptive lying needs Bob to learn the other bases first");
    }
    if (bob_guess == alice) return bob_guess;
    // Make the Y count odd so the round is discarded.
    const int y = (alice == Basis::Y) + (charlie == Basis::Y);
    return y % 2 == 0 ? Basis::Y : Basis::X;
}

struct ComboErrorRate {
    std::vector<Basis> bases;
    double error_probability;
};

struct AncillaErrorReport {
    std::vector<ComboErrorRate> per_combo;  ///< XXX, XYY, YXY, YYX
    double average_qber;
};

/// Exact probability, for each valid combo, that the partners' inferred bit
/// differs from Alice's outcome on the supplied joint state.
inline AncillaErrorReport ancilla_attack_error_rates(const StateVector& joint) {
    validate_ancilla_state(joint);
    AncillaErrorReport report{};
    double sum = 0.0;
    for (const auto& combo : valid_basis_tuples(3)) {
        const std::array<MeasurementSpec, 3> specs = {
            MeasurementSpec{0, combo[0]}, MeasurementSpec{1, combo[1]}, MeasurementSpec{2, combo[2]}};
        double err = 0.0;
        for (const auto& [tuple, p] : outcome_distribution(joint, specs)) {
            const std::array<Outcome, 2> partners = {tuple[1], tuple[2]};
            if (infer_alice_bit(combo, partners) != bit_of(tuple[0])) err += p;
        }
        report.per_combo.push_back({combo, err});
        sum += err;
    }
    report.average_qber = sum / static_cast<double>(report.per_combo.size());
    return report;
}

/// The seven three-qubit states a no-error state must be orthogonal to.
/// Together with ghz(3) they form an orthonormal basis.
inline std::array<StateVector, 7> no_error_constraints() {
    const double h = 1.0 / std::sqrt(2.0);
    auto pair = [h](std::size_t a, std::size_t b, double sign) {
        std::vector<Amplitude> amps(8, 0.0);
        amps[a] = h;
        amps[b] = sign * h;
        return StateVector(3, std::move(amps));
    };
    // XXX errors give the four odd-x-parity states; XYY adds two, YXY one.
    return {pair(0b000, 0b111, -1), pair(0b100, 0b011, -1), pair(0b010, 0b101, -1), pair(0b110, 0b001, -1),
            pair(0b010, 0b101, +1), pair(0b110, 0b001, +1), pair(0b100, 0b011, +1)};
}

struct NoErrorTheoremReport {
    std::size_t ancilla_dim = 0;
    std::size_t kernel_dim = 0;
    bool is_product_form = false;
    double max_residual = 0.0;
};

inline constexpr double kSingularTol = 1e-9;

/**
 * Null space of the no-error constraints tensored with the ancilla identity.
 *
 * Every kernel vector (and a few random combinations of them) is reshaped
 * into an 8 x d coefficient grid; it is a GHZ ⊗ ancilla product iff that
 * grid has rank one and its left factor is proportional to ghz(3).
 */
inline NoErrorTheoremReport verify_no_error_theorem(std::size_t ancilla_dim) {
    if (ancilla_dim < 1 || ancilla_dim > 8) throw std::invalid_argument("ancilla dimension must be in [1, 8]");
    const auto d = static_cast<Eigen::Index>(ancilla_dim);
    const auto constraints = no_error_constraints();
    const Eigen::Index rows = static_cast<Eigen::Index>(constraints.size()) * d;
    const Eigen::Index cols = 8 * d;

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, cols);
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(constraints.size()); ++k) {
        const auto& v = constraints[static_cast<std::size_t>(k)];
        for (Eigen::Index j = 0; j < d; ++j) {
            for (Eigen::Index label = 0; label < 8; ++label) {
                m(k * d + j, label * d + j) = std::conj(v[static_cast<std::size_t>(label)]);
            }
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > kSingularTol ? 1 : 0;

    NoErrorTheoremReport report;
    report.ancilla_dim = ancilla_dim;
    report.kernel_dim = static_cast<std::size_t>(cols - rank);
    if (report.kernel_dim == 0) return report;

    const Eigen::MatrixXcd kernel = svd.matrixV().rightCols(cols - rank);
    std::vector<Eigen::VectorXcd> candidates;
    for (Eigen::Index c = 0; c < kernel.cols(); ++c) candidates.emplace_back(kernel.col(c));
    RandomStream rng(ancilla_dim);
    for (int trial = 0; trial < 4; ++trial) {
        Eigen::VectorXcd coeff(kernel.cols());
        for (Eigen::Index c = 0; c < coeff.size(); ++c) coeff(c) = Amplitude(standard_normal(rng), standard_normal(rng));
        Eigen::VectorXcd v = kernel * coeff;
        candidates.emplace_back(v / v.norm());
    }

    Eigen::VectorXcd ghz3 = Eigen::VectorXcd::Zero(8);
    ghz3(0) = ghz3(7) = 1.0 / std::sqrt(2.0);

    bool product = true;
    double worst = 0.0;
    for (const auto& u : candidates) {
        worst = std::max(worst, (m * u).norm());
        Eigen::MatrixXcd grid(8, d);
        for (Eigen::Index label = 0; label < 8; ++label) {
            for (Eigen::Index j = 0; j < d; ++j) grid(label, j) = u(label * d + j);
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> g(grid, Eigen::ComputeThinU);
        const Eigen::VectorXd& gs = g.singularValues();
        const double second = gs.size() > 1 ? gs(1) : 0.0;
        const double overlap = std::abs(ghz3.dot(g.matrixU().col(0)));
        const double miss = std::max(second, 1.0 - overlap);
        worst = std::max(worst, miss);
        product = product && second < kSingularTol && 1.0 - overlap < kOrthoTol;
    }
    report.is_product_form = product;
    report.max_residual = worst;
    return report;
}

}  // namespace ghzshare

#endif  // GHZSHARE_ATTACKS_HPP
