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

#ifndef GHZSHARE_DENSITY_MATRIX_HPP
#define GHZSHARE_DENSITY_MATRIX_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>

#include "ghzshare/state_vector.hpp"

namespace ghzshare {

/// Hermitian, unit-trace, positive semidefinite matrix. Validated on construction.
class DensityMatrix {
public:
    explicit DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
        if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
            throw std::invalid_argument("density matrix must be square and nonempty");
        }
        if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kAlgebraTol) {
            throw std::invalid_argument("density matrix is not Hermitian");
        }
        if (std::abs(entries_.trace() - Amplitude(1.0)) > kAlgebraTol) {
            throw std::invalid_argument("density matrix trace is not 1");
        }
        if (eigenvalues().minCoeff() < -1e-10) throw std::invalid_argument("density matrix is not positive");
    }

    static DensityMatrix maximally_mixed(Eigen::Index dim) {
        return DensityMatrix(Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
    }

    static DensityMatrix pure(const StateVector& s) {
        Eigen::VectorXcd v(static_cast<Eigen::Index>(s.size()));
        for (std::size_t i = 0; i < s.size(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
        return DensityMatrix(v * v.adjoint());
    }

    /// Weighted mixture; weights must sum to 1.
    static DensityMatrix mixture(std::span<const std::pair<double, DensityMatrix>> parts) {
        if (parts.empty()) throw std::invalid_argument("empty mixture");
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(parts.front().second.dim(), parts.front().second.dim());
        for (const auto& [w, rho] : parts) acc += w * rho.entries();
        return DensityMatrix(std::move(acc));
    }

    [[nodiscard]] Eigen::Index dim() const { return entries_.rows(); }
    [[nodiscard]] const Eigen::MatrixXcd& entries() const { return entries_; }
    [[nodiscard]] Amplitude operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }

    [[nodiscard]] Eigen::VectorXd eigenvalues() const {
        return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(entries_, Eigen::EigenvaluesOnly).eigenvalues();
    }

    [[nodiscard]] double max_abs_diff(const DensityMatrix& other) const {
        return (entries_ - other.entries_).cwiseAbs().maxCoeff();
    }

    [[nodiscard]] double max_off_diagonal() const {
        double m = 0.0;
        for (Eigen::Index r = 0; r < dim(); ++r) {
            for (Eigen::Index c = 0; c < dim(); ++c) {
                if (r != c) m = std::max(m, std::abs(entries_(r, c)));
            }
        }
        return m;
    }

    /// <psi|rho|psi>
    [[nodiscard]] double fidelity_with(const StateVector& psi) const {
        if (static_cast<Eigen::Index>(psi.size()) != dim()) throw std::invalid_argument("dimension mismatch");
        Amplitude acc = 0.0;
        for (Eigen::Index r = 0; r < dim(); ++r) {
            for (Eigen::Index c = 0; c < dim(); ++c) {
                acc += std::conj(psi[static_cast<std::size_t>(r)]) * entries_(r, c) * psi[static_cast<std::size_t>(c)];
            }
        }
        return std::clamp(acc.real(), 0.0, 1.0);
    }

private:
    Eigen::MatrixXcd entries_;
};

}  // namespace ghzshare

#endif  // GHZSHARE_DENSITY_MATRIX_HPP
