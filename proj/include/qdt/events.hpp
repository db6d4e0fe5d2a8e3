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
 * Operationally testable events (rank-one projectors), uncertain unions of
 * such events, and their probabilities under a strategic statistical operator.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qdt/error.hpp"
#include "qdt/linalg.hpp"
#include "qdt/matrix.hpp"

namespace qdt {

/// Basis event |index> of a space.
class ElementaryEvent {
  public:
    ElementaryEvent(HilbertSpace space, std::size_t index)
        : space_{std::move(space)}, index_{index} {
        if (index_ >= space_.dimension()) {
            throw InputError("event index " + std::to_string(index_) +
                             " outside space of dimension " + std::to_string(space_.dimension()));
        }
    }

    [[nodiscard]] const HilbertSpace &space() const noexcept { return space_; }
    [[nodiscard]] std::size_t index() const noexcept { return index_; }
    [[nodiscard]] const std::string &label() const { return space_.label(index_); }

    friend bool operator==(const ElementaryEvent &, const ElementaryEvent &) = default;

  private:
    HilbertSpace space_;
    std::size_t index_;
};

/// Trace-one, positive, Hermitian operator on a labelled space.
class StatisticalOperator {
  public:
    StatisticalOperator(CMatrix matrix, HilbertSpace space, double tol = kDefaultTolerance)
        : matrix_{std::move(matrix)}, space_{std::move(space)} {
        if (!matrix_.is_square() || matrix_.rows() != space_.dimension()) {
            throw DimensionError("statistical operator " + matrix_.shape() +
                                 " does not match space of dimension " +
                                 std::to_string(space_.dimension()));
        }
        if (!is_hermitian(matrix_, tol)) {
            throw InputError("statistical operator is not Hermitian");
        }
        if (!is_positive_semidefinite(matrix_, tol)) {
            throw InputError("statistical operator is not positive semidefinite");
        }
        const Complex tr = trace(matrix_);
        if (std::abs(tr - Complex{1}) > tol) {
            throw InputError("statistical operator trace is " + std::to_string(tr.real()) +
                             ", expected 1");
        }
    }

    /// |psi><psi| for a normalized state vector.
    static StatisticalOperator pure(std::span<const Complex> psi, HilbertSpace space,
                                    double tol = kDefaultTolerance) {
        return StatisticalOperator(CMatrix::outer(psi, psi), std::move(space), tol);
    }

    [[nodiscard]] const CMatrix &matrix() const noexcept { return matrix_; }
    [[nodiscard]] const HilbertSpace &space() const noexcept { return space_; }

  private:
    CMatrix matrix_;
    HilbertSpace space_;
};

/**
 * Uncertain union of all basis events of a space, with one complex amplitude per
 * mode (zero for modes outside the union). Amplitudes are normalized.
 */
class UncertainUnion {
  public:
    UncertainUnion(HilbertSpace space, std::vector<Complex> amplitudes,
                   double tol = kDefaultTolerance)
        : space_{std::move(space)}, amplitudes_{std::move(amplitudes)} {
        if (amplitudes_.size() != space_.dimension()) {
            throw DimensionError("uncertain union has " + std::to_string(amplitudes_.size()) +
                                 " amplitudes for a space of dimension " +
                                 std::to_string(space_.dimension()));
        }
        double weight = 0.0;
        for (const auto &a : amplitudes_) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                throw InputError("uncertain union amplitudes must be finite");
            }
            weight += std::norm(a);
        }
        if (std::abs(weight - 1.0) > tol) {
            throw InputError("uncertain union amplitudes have total weight " +
                             std::to_string(weight) + ", expected 1");
        }
    }

    /// Rescales raw amplitudes to unit weight.
    static UncertainUnion normalized(HilbertSpace space, std::vector<Complex> raw) {
        double weight = 0.0;
        for (const auto &a : raw) {
            weight += std::norm(a);
        }
        if (!(weight > 0.0) || !std::isfinite(weight)) {
            throw InputError("cannot normalize an all-zero uncertain union");
        }
        const double scale = 1.0 / std::sqrt(weight);
        for (auto &a : raw) {
            a *= scale;
        }
        return UncertainUnion(std::move(space), std::move(raw));
    }

    [[nodiscard]] const HilbertSpace &space() const noexcept { return space_; }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }

    [[nodiscard]] std::size_t mode_count() const noexcept {
        std::size_t n = 0;
        for (const auto &a : amplitudes_) {
            n += a != Complex{} ? 1 : 0;
        }
        return n;
    }

    friend bool operator==(const UncertainUnion &, const UncertainUnion &) = default;

  private:
    HilbertSpace space_;
    std::vector<Complex> amplitudes_;
};

/// p = classical_part + interference.
struct EventProbability {
    double total;
    double classical_part;
    double interference;
};

namespace detail {

inline void require_same_space(const HilbertSpace &a, const HilbertSpace &b, const char *what) {
    if (!(a == b)) {
        throw InputError(std::string("space mismatch: ") + what);
    }
}

/// Real part of an accumulated sum whose imaginary part must vanish.
inline double checked_real(Complex z, const char *what, double tol = kDefaultTolerance) {
    if (std::abs(z.imag()) > tol) {
        throw InvariantViolation(std::string(what) + " has imaginary residual " +
                                 std::to_string(z.imag()));
    }
    return z.real();
}

} // namespace detail

/// |n><n|
[[nodiscard]] inline CMatrix projector_of(const ElementaryEvent &event) {
    CMatrix p(event.space().dimension(), event.space().dimension());
    p(event.index(), event.index()) = Complex{1};
    return p;
}

/// Tr(rho P_n) = <n|rho|n>.
[[nodiscard]] inline double event_probability(const StatisticalOperator &rho,
                                              const ElementaryEvent &event) {
    detail::require_same_space(rho.space(), event.space(), "event and statistical operator");
    return detail::checked_real(trace(rho.matrix() * projector_of(event)), "event probability");
}

/// Probability of a standard union of distinct basis events (additive).
[[nodiscard]] inline double union_probability(const StatisticalOperator &rho,
                                              std::span<const ElementaryEvent> events) {
    std::unordered_set<std::size_t> seen;
    double sum = 0.0;
    for (const auto &e : events) {
        detail::require_same_space(rho.space(), e.space(), "union member and statistical operator");
        if (!seen.insert(e.index()).second) {
            throw InputError("duplicate event '" + e.label() + "' in union");
        }
        sum += event_probability(rho, e);
    }
    return sum;
}

/// |A><A| with |A> = sum_n a_n |n>. Rank one, trace one; a projector only for one mode.
[[nodiscard]] inline CMatrix uncertain_operator(const UncertainUnion &u) {
    return CMatrix::outer(u.amplitudes(), u.amplitudes());
}

/**
 * Tr(rho P_A) split into the weighted mode probabilities sum_n |a_n|^2 p(A_n)
 * and the cross-mode interference sum_{m != n} a_m^* a_n <m|rho|n>.
 */
[[nodiscard]] inline EventProbability uncertain_probability(const StatisticalOperator &rho,
                                                            const UncertainUnion &u) {
    detail::require_same_space(rho.space(), u.space(), "uncertain union and statistical operator");
    const auto &m = rho.matrix();
    const auto a = u.amplitudes();
    const double total =
        detail::checked_real(trace(m * uncertain_operator(u)), "uncertain event probability");

    double classical = 0.0;
    Complex interference{};
    for (std::size_t i = 0; i < a.size(); ++i) {
        classical += std::norm(a[i]) * m(i, i).real();
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (i != j) {
                interference += std::conj(a[i]) * a[j] * m(i, j);
            }
        }
    }
    return {total, classical, detail::checked_real(interference, "interference term")};
}

} // namespace qdt
