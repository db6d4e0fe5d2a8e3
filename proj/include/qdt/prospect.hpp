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
 * Composite prospects pi_n = A_n (x) B over H_A (x) H_B, where A_n is a basis
 * event of H_A and B an uncertain union over H_B. Each prospect carries the
 * operator |pi_n><pi_n| with |pi_n> = sum_alpha b_alpha |n alpha>, and its
 * probability splits into a utility factor f (diagonal in alpha) and an
 * attraction factor q (off-diagonal in alpha).
 *
 * Product basis index of |n alpha> is n * dim(B) + alpha.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qdt/error.hpp"
#include "qdt/events.hpp"
#include "qdt/linalg.hpp"
#include "qdt/matrix.hpp"

namespace qdt {

class CompositeSpace {
  public:
    CompositeSpace(HilbertSpace a, HilbertSpace b) : a_{std::move(a)}, b_{std::move(b)} {
        if (a_.dimension() * b_.dimension() > kMaxDimension) {
            throw DimensionError("composite space of dimension " +
                                 std::to_string(a_.dimension() * b_.dimension()) +
                                 " exceeds the maximum " + std::to_string(kMaxDimension));
        }
    }

    [[nodiscard]] const HilbertSpace &space_a() const noexcept { return a_; }
    [[nodiscard]] const HilbertSpace &space_b() const noexcept { return b_; }
    [[nodiscard]] std::size_t product_dimension() const noexcept {
        return a_.dimension() * b_.dimension();
    }
    [[nodiscard]] BipartiteDims dims() const noexcept { return {a_.dimension(), b_.dimension()}; }

    /// H_A (x) H_B with labels "a|b".
    [[nodiscard]] HilbertSpace product_space() const {
        std::vector<std::string> labels;
        labels.reserve(product_dimension());
        for (const auto &la : a_.labels()) {
            for (const auto &lb : b_.labels()) {
                labels.push_back(la + "|" + lb);
            }
        }
        return HilbertSpace(std::move(labels));
    }

    [[nodiscard]] std::size_t index(std::size_t n, std::size_t alpha) const noexcept {
        return n * b_.dimension() + alpha;
    }

    friend bool operator==(const CompositeSpace &, const CompositeSpace &) = default;

  private:
    HilbertSpace a_;
    HilbertSpace b_;
};

struct Prospect {
    ElementaryEvent outcome;
    UncertainUnion uncertainty;

    [[nodiscard]] CompositeSpace space() const {
        return CompositeSpace(outcome.space(), uncertainty.space());
    }
};

struct ProspectOperator {
    CMatrix matrix;
    Prospect source;
};

/// p = f + q.
struct ProbabilityDecomposition {
    double p;
    double f;
    double q;
};

/// Ordered prospects sharing one uncertain union, with distinct outcomes.
class ProspectLattice {
  public:
    ProspectLattice(CompositeSpace space, std::vector<std::size_t> outcomes,
                    UncertainUnion uncertainty)
        : space_{std::move(space)}, outcomes_{std::move(outcomes)},
          uncertainty_{std::move(uncertainty)} {
        if (outcomes_.size() < 2) {
            throw InputError("a prospect lattice needs at least two prospects");
        }
        if (!(uncertainty_.space() == space_.space_b())) {
            throw InputError("lattice uncertainty does not live on the second factor");
        }
        std::unordered_set<std::size_t> seen;
        for (auto n : outcomes_) {
            if (n >= space_.space_a().dimension()) {
                throw InputError("lattice outcome index " + std::to_string(n) + " out of range");
            }
            if (!seen.insert(n).second) {
                throw InputError("duplicate lattice outcome '" + space_.space_a().label(n) + "'");
            }
        }
    }

    /// One prospect per basis event of H_A, in basis order.
    static ProspectLattice exhaustive(CompositeSpace space, UncertainUnion uncertainty) {
        std::vector<std::size_t> outcomes(space.space_a().dimension());
        std::iota(outcomes.begin(), outcomes.end(), std::size_t{0});
        return ProspectLattice(std::move(space), std::move(outcomes), std::move(uncertainty));
    }

    [[nodiscard]] const CompositeSpace &space() const noexcept { return space_; }
    [[nodiscard]] const UncertainUnion &uncertainty() const noexcept { return uncertainty_; }
    [[nodiscard]] std::span<const std::size_t> outcomes() const noexcept { return outcomes_; }
    [[nodiscard]] std::size_t size() const noexcept { return outcomes_.size(); }

    [[nodiscard]] Prospect prospect(std::size_t k) const {
        return Prospect{ElementaryEvent(space_.space_a(), outcomes_.at(k)), uncertainty_};
    }

    [[nodiscard]] bool is_exhaustive() const noexcept {
        return outcomes_.size() == space_.space_a().dimension();
    }

  private:
    CompositeSpace space_;
    std::vector<std::size_t> outcomes_;
    UncertainUnion uncertainty_;
};

namespace detail {

inline void require_composite_state(const StatisticalOperator &rho, const CompositeSpace &space) {
    if (rho.matrix().rows() != space.product_dimension() ||
        !(rho.space() == space.product_space())) {
        throw InputError("statistical operator does not live on the composite space");
    }
}

} // namespace detail

/// |pi_n> as a column vector in the product basis.
[[nodiscard]] inline CMatrix prospect_state(const Prospect &prospect) {
    const auto space = prospect.space();
    const auto b = prospect.uncertainty.amplitudes();
    CMatrix psi(space.product_dimension(), 1);
    for (std::size_t alpha = 0; alpha < b.size(); ++alpha) {
        psi(space.index(prospect.outcome.index(), alpha), 0) = b[alpha];
    }
    return psi;
}

[[nodiscard]] inline ProspectOperator prospect_operator(const Prospect &prospect) {
    const CMatrix psi = prospect_state(prospect);
    return {psi * psi.adjoint(), prospect};
}

/**
 * ||sum_n P(pi_n) - 1_AB||_HS for a lattice covering all of H_A. With one shared
 * uncertain union the sum is 1_A (x) |B><B|, so this vanishes only for dim(B) = 1.
 */
[[nodiscard]] inline double povm_deviation(const ProspectLattice &lattice) {
    if (!lattice.is_exhaustive()) {
        throw InputError("resolution of unity needs one prospect per basis event of H_A");
    }
    const std::size_t d = lattice.space().product_dimension();
    CMatrix sum(d, d);
    for (std::size_t k = 0; k < lattice.size(); ++k) {
        sum += prospect_operator(lattice.prospect(k)).matrix;
    }
    return hs_norm(sum - CMatrix::identity(d));
}

/// Tr rho (P_n (x) P_alpha).
[[nodiscard]] inline double joint_probability(const StatisticalOperator &rho,
                                              const ElementaryEvent &a,
                                              const ElementaryEvent &b) {
    const CompositeSpace space(a.space(), b.space());
    detail::require_composite_state(rho, space);
    const CMatrix op = tensor_product(projector_of(a), projector_of(b));
    return detail::checked_real(trace(rho.matrix() * op), "joint probability");
}

struct MarginalCheck {
    double summed_joint; ///< sum_alpha p(A_n (x) B_alpha)
    double marginal;     ///< Tr rho (P_n (x) 1_B)
};

/// Both sides of p(A_n (x) U_alpha B_alpha) = sum_alpha p(A_n (x) B_alpha).
[[nodiscard]] inline MarginalCheck
marginal_additivity_check(const StatisticalOperator &rho, const ElementaryEvent &a,
                          std::span<const ElementaryEvent> bs) {
    if (bs.empty()) {
        throw InputError("marginal check needs the basis events of H_B");
    }
    const HilbertSpace &hb = bs.front().space();
    std::unordered_set<std::size_t> seen;
    for (const auto &b : bs) {
        detail::require_same_space(hb, b.space(), "events of H_B");
        seen.insert(b.index());
    }
    if (seen.size() != hb.dimension() || bs.size() != hb.dimension()) {
        throw InputError("marginal check needs each basis event of H_B exactly once");
    }
    double summed = 0.0;
    for (const auto &b : bs) {
        summed += joint_probability(rho, a, b);
    }
    const CMatrix op = tensor_product(projector_of(a), CMatrix::identity(hb.dimension()));
    const double marginal = detail::checked_real(trace(rho.matrix() * op), "marginal probability");
    return {summed, marginal};
}

/**
 * p = Tr rho P(pi_n);
 * f = sum_alpha |b_alpha|^2 p(A_n (x) B_alpha);
 * q = sum_{alpha != beta} b_alpha^* b_beta <n alpha|rho|n beta>.
 * Throws InvariantViolation if p and f + q disagree beyond tol.
 */
[[nodiscard]] inline ProbabilityDecomposition
prospect_probability(const StatisticalOperator &rho, const Prospect &prospect,
                     double tol = kDefaultTolerance) {
    const auto space = prospect.space();
    detail::require_composite_state(rho, space);
    const auto &m = rho.matrix();
    const auto b = prospect.uncertainty.amplitudes();
    const std::size_t n = prospect.outcome.index();

    const double p = detail::checked_real(trace(m * prospect_operator(prospect).matrix),
                                          "prospect probability", tol);
    double f = 0.0;
    Complex q{};
    for (std::size_t alpha = 0; alpha < b.size(); ++alpha) {
        const std::size_t ia = space.index(n, alpha);
        f += std::norm(b[alpha]) * m(ia, ia).real();
        for (std::size_t beta = 0; beta < b.size(); ++beta) {
            if (alpha != beta) {
                q += std::conj(b[alpha]) * b[beta] * m(ia, space.index(n, beta));
            }
        }
    }
    const double q_real = detail::checked_real(q, "attraction factor", tol);
    if (std::abs(p - (f + q_real)) > tol) {
        throw InvariantViolation("prospect probability " + std::to_string(p) +
                                 " differs from f + q = " + std::to_string(f + q_real));
    }
    return {p, f, q_real};
}

/**
 * Per-prospect decompositions in lattice order. With `normalize`, f is divided by
 * sum f, p by sum p, and q is recomputed as p - f, so that sum p = sum f = 1 and
 * sum q = 0. A normalized p that leaves [0, 1] by at most tol is clamped; by more
 * is an InvariantViolation.
 */
[[nodiscard]] inline std::vector<ProbabilityDecomposition>
lattice_probabilities(const StatisticalOperator &rho, const ProspectLattice &lattice,
                      bool normalize, double tol = kDefaultTolerance) {
    std::vector<ProbabilityDecomposition> out;
    out.reserve(lattice.size());
    for (std::size_t k = 0; k < lattice.size(); ++k) {
        out.push_back(prospect_probability(rho, lattice.prospect(k), tol));
    }
    if (!normalize) {
        return out;
    }

    double sum_p = 0.0;
    double sum_f = 0.0;
    for (const auto &d : out) {
        sum_p += d.p;
        sum_f += d.f;
    }
    if (!(sum_p > 0.0) || !(sum_f > 0.0)) {
        throw InputError("lattice carries zero probability under this statistical operator");
    }
    for (auto &d : out) {
        d.f /= sum_f;
        d.p /= sum_p;
        for (double *v : {&d.p, &d.f}) {
            if (*v < 0.0 || *v > 1.0) {
                if (*v < -tol || *v > 1.0 + tol) {
                    throw InvariantViolation("normalized probability " + std::to_string(*v) +
                                             " outside [0, 1]");
                }
                *v = std::clamp(*v, 0.0, 1.0);
            }
        }
        d.q = d.p - d.f;
    }
    return out;
}

/// Classical limit q -> 0: returns f.
[[nodiscard]] inline double decohere(const ProbabilityDecomposition &d) noexcept { return d.f; }

} // namespace qdt
