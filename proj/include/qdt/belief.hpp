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
 * Lotteries as composite prospects L_n (x) B, where B = {belief, disbelief} is
 * the decision maker's uncertainty about the setup, plus a few named strategic
 * states for exercising the engine.
 */

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qdt/error.hpp"
#include "qdt/events.hpp"
#include "qdt/lottery.hpp"
#include "qdt/matrix.hpp"
#include "qdt/prospect.hpp"

namespace qdt {

/// Two-mode belief/disbelief union. Defaults to equal real amplitudes.
class BeliefState {
  public:
    BeliefState() : BeliefState(Complex{1.0 / std::numbers::sqrt2}, Complex{1.0 / std::numbers::sqrt2}) {}
    BeliefState(Complex belief, Complex disbelief) : amplitudes_{belief, disbelief} {
        // Validated through UncertainUnion.
        (void)to_union();
    }

    static HilbertSpace space() { return HilbertSpace({"belief", "disbelief"}); }

    [[nodiscard]] std::span<const Complex, 2> amplitudes() const noexcept { return amplitudes_; }

    [[nodiscard]] UncertainUnion to_union() const {
        return UncertainUnion(space(), {amplitudes_[0], amplitudes_[1]});
    }

  private:
    std::array<Complex, 2> amplitudes_;
};

/// Space of lottery choices, one basis event per lottery label.
[[nodiscard]] inline HilbertSpace choice_space(std::span<const Lottery> lotteries) {
    std::vector<std::string> labels;
    labels.reserve(lotteries.size());
    for (const auto &l : lotteries) {
        labels.push_back(l.label());
    }
    return HilbertSpace(std::move(labels));
}

/// Space of an uncertainty with `modes` modes: belief/disbelief for two, B0, B1, ... otherwise.
[[nodiscard]] inline HilbertSpace uncertainty_space(std::size_t modes) {
    return modes == 2 ? BeliefState::space() : HilbertSpace::indexed(modes, "B");
}

/// Lattice {L_n (x) B : n} over all lotteries.
[[nodiscard]] inline ProspectLattice lottery_lattice(std::span<const Lottery> lotteries,
                                                     const UncertainUnion &uncertainty) {
    return ProspectLattice::exhaustive(CompositeSpace(choice_space(lotteries), uncertainty.space()),
                                       uncertainty);
}

enum class StatePreset { maximally_mixed, product, correlated };

[[nodiscard]] inline const char *to_string(StatePreset preset) {
    switch (preset) {
    case StatePreset::maximally_mixed:
        return "maximally_mixed";
    case StatePreset::product:
        return "product";
    case StatePreset::correlated:
        return "correlated";
    }
    return "unknown";
}

/**
 * Named strategic states on a composite space:
 *  - maximally_mixed: 1_AB / (dA dB);
 *  - product: rho_A (x) rho_B, each an even mix of the maximally mixed state and a
 *    pure superposition with distinct complex phases;
 *  - correlated: the pure state sum_{n,alpha} (-1)^{n alpha} |n alpha> / sqrt(dA dB),
 *    which for two qubits is maximally entangled.
 */
[[nodiscard]] inline StatisticalOperator make_state(StatePreset preset,
                                                    const CompositeSpace &space) {
    const std::size_t da = space.space_a().dimension();
    const std::size_t db = space.space_b().dimension();
    switch (preset) {
    case StatePreset::maximally_mixed: {
        const double w = 1.0 / static_cast<double>(da * db);
        return StatisticalOperator(CMatrix::identity(da * db) * Complex{w},
                                   space.product_space());
    }
    case StatePreset::product: {
        const auto factor = [](std::size_t d, double phase_step) {
            std::vector<Complex> psi(d);
            for (std::size_t k = 0; k < d; ++k) {
                psi[k] = std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                                    phase_step * static_cast<double>(k));
            }
            return CMatrix::identity(d) * Complex{0.5 / static_cast<double>(d)} +
                   CMatrix::outer(psi, psi) * Complex{0.5};
        };
        return StatisticalOperator(tensor_product(factor(da, 0.7), factor(db, 1.3)),
                                   space.product_space());
    }
    case StatePreset::correlated: {
        std::vector<Complex> psi(da * db);
        const double amp = 1.0 / std::sqrt(static_cast<double>(da * db));
        for (std::size_t n = 0; n < da; ++n) {
            for (std::size_t alpha = 0; alpha < db; ++alpha) {
                psi[space.index(n, alpha)] = (n * alpha) % 2 == 0 ? amp : -amp;
            }
        }
        return StatisticalOperator::pure(psi, space.product_space());
    }
    }
    throw InputError("unknown state preset");
}

} // namespace qdt
