// Copyright 2026 The qdt Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Separability of composite operators with respect to the observable algebras
 * generated by the basis projectors {P_n} on H_A and {P_alpha} on H_B.
 *
 * Those algebras are the diagonal matrices in the event bases, so the separable
 * span sum_g C_gA (x) C_gB is exactly the set of product-basis-diagonal matrices.
 * The distance to it is the Hilbert-Schmidt norm of the off-diagonal entries.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qdt/error.hpp"
#include "qdt/events.hpp"
#include "qdt/linalg.hpp"
#include "qdt/prospect.hpp"

namespace qdt {

/// Default classification tolerance for separability.
inline constexpr double kSeparabilityTolerance = 1e-8;

/// The commutative algebra generated by the basis projectors of a space.
class ObservableAlgebra {
  public:
    explicit ObservableAlgebra(HilbertSpace space) : space_{std::move(space)} {
        for (std::size_t n = 0; n < space_.dimension(); ++n) {
            generators_.push_back(projector_of(ElementaryEvent(space_, n)));
        }
    }

    [[nodiscard]] const HilbertSpace &space() const noexcept { return space_; }
    [[nodiscard]] const std::vector<CMatrix> &generators() const noexcept { return generators_; }

    /// Whether `op` lies in the span of the generators (is diagonal).
    [[nodiscard]] bool contains(const CMatrix &op, double tol = kSeparabilityTolerance) const {
        if (!op.is_square() || op.rows() != space_.dimension()) {
            throw DimensionError("operator " + op.shape() + " does not act on this space");
        }
        double off = 0.0;
        for (std::size_t i = 0; i < op.rows(); ++i) {
            for (std::size_t j = 0; j < op.cols(); ++j) {
                if (i != j) {
                    off += std::norm(op(i, j));
                }
            }
        }
        return std::sqrt(off) <= tol;
    }

  private:
    HilbertSpace space_;
    std::vector<CMatrix> generators_;
};

struct SeparabilityReport {
    double residual;
    bool separable;
    double tolerance;
};

/// Residual = HS norm of the component of c outside span{P_n (x) P_alpha}.
[[nodiscard]] inline SeparabilityReport separability_test(const CMatrix &c, BipartiteDims dims,
                                                          double tol = kSeparabilityTolerance) {
    if (!c.is_square() || c.rows() != dims.total() || dims.a == 0 || dims.b == 0) {
        throw DimensionError("operator " + c.shape() + " does not act on a " +
                             std::to_string(dims.a) + "x" + std::to_string(dims.b) +
                             " product space");
    }
    double off = 0.0;
    for (std::size_t i = 0; i < c.rows(); ++i) {
        for (std::size_t j = 0; j < c.cols(); ++j) {
            if (i != j) {
                off += std::norm(c(i, j));
            }
        }
    }
    const double residual = std::sqrt(off);
    return {residual, residual <= tol, tol};
}

/**
 * Residual = ||rho - Tr_B rho (x) Tr_A rho||_HS. Detects exact product form only;
 * classically correlated mixtures report a nonzero residual.
 */
[[nodiscard]] inline SeparabilityReport is_product_state(const StatisticalOperator &rho,
                                                         BipartiteDims dims,
                                                         double tol = kSeparabilityTolerance) {
    const CMatrix &m = rho.matrix();
    if (m.rows() != dims.total() || dims.a == 0 || dims.b == 0) {
        throw DimensionError("statistical operator " + m.shape() + " does not act on a " +
                             std::to_string(dims.a) + "x" + std::to_string(dims.b) +
                             " product space");
    }
    const CMatrix rho_a = partial_trace(m, dims, TraceOut::B);
    const CMatrix rho_b = partial_trace(m, dims, TraceOut::A);
    const double residual = hs_norm(m - tensor_product(rho_a, rho_b));
    return {residual, residual <= tol, tol};
}

struct EntanglementGate {
    std::size_t outcome;
    bool operator_entangled;
    bool state_product;
    bool q_must_vanish; ///< !operator_entangled || state_product
    double operator_residual;
    double state_residual;
    double q_raw;        ///< attraction factor of the single prospect
    double q_normalized; ///< attraction factor after lattice normalization
};

/**
 * Interference needs both an entangled prospect operator and a non-product
 * strategic state. For every prospect of the lattice this classifies both, and
 * checks that the lattice-normalized q vanishes (within tol) whenever either
 * condition is missing. With `enforce`, a violation throws InvariantViolation.
 */
[[nodiscard]] inline std::vector<EntanglementGate>
prospect_entanglement_gate(const StatisticalOperator &rho, const ProspectLattice &lattice,
                           double tol = kSeparabilityTolerance, bool enforce = true) {
    const BipartiteDims dims = lattice.space().dims();
    const SeparabilityReport state = is_product_state(rho, dims, tol);
    const auto raw = lattice_probabilities(rho, lattice, false);
    const auto normalized = lattice_probabilities(rho, lattice, true);

    std::vector<EntanglementGate> out;
    out.reserve(lattice.size());
    for (std::size_t k = 0; k < lattice.size(); ++k) {
        const Prospect prospect = lattice.prospect(k);
        const SeparabilityReport op =
            separability_test(prospect_operator(prospect).matrix, dims, tol);
        EntanglementGate g{prospect.outcome.index(),
                           !op.separable,
                           state.separable,
                           op.separable || state.separable,
                           op.residual,
                           state.residual,
                           raw[k].q,
                           normalized[k].q};
        if (enforce && g.q_must_vanish && std::abs(g.q_normalized) > tol) {
            throw InvariantViolation("attraction factor " + std::to_string(g.q_normalized) +
                                     " of prospect '" + prospect.outcome.label() +
                                     "' should vanish");
        }
        out.push_back(g);
    }
    return out;
}

} // namespace qdt
