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
 * Cyclic Jacobi eigensolver for small dense Hermitian matrices.
 *
 * Each step zeroes one off-diagonal pair (p, q). Writing a_pq = |a_pq| e^{i phi},
 * the unitary J = diag(1, e^{-i phi}) R, with R the real Jacobi rotation for the
 * phase-stripped 2x2 block, gives (J^+ A J)_pq = 0. Sweeps repeat until the
 * off-diagonal mass is negligible against the Frobenius norm.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "qdt/error.hpp"
#include "qdt/matrix.hpp"

namespace qdt {

template <std::floating_point T> struct HermitianEigen {
    std::vector<T> values; ///< ascending
    Matrix<T> vectors;     ///< column k pairs with values[k]
};

namespace detail {

template <std::floating_point T> T off_diagonal_mass(const Matrix<T> &a) {
    T sum{};
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j) {
                sum += std::norm(a(i, j));
            }
        }
    }
    return sum;
}

} // namespace detail

/**
 * Eigen-decomposition of the Hermitian part (A + A^+)/2 of a square matrix.
 * Throws InvariantViolation if the sweeps fail to converge.
 */
template <std::floating_point T>
[[nodiscard]] HermitianEigen<T> hermitian_eigen(const Matrix<T> &input, int max_sweeps = 100) {
    using C = std::complex<T>;
    if (!input.is_square()) {
        throw DimensionError("eigensolver needs a square matrix, got " + input.shape());
    }
    const std::size_t n = input.rows();
    Matrix<T> a = input;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const C h = (input(i, j) + std::conj(input(j, i))) / T(2);
            a(i, j) = h;
            a(j, i) = std::conj(h);
        }
        a(i, i) = C(a(i, i).real(), 0);
    }
    Matrix<T> v = Matrix<T>::identity(n);

    T total{};
    for (const auto &z : a.entries()) {
        total += std::norm(z);
    }
    const T eps = std::numeric_limits<T>::epsilon();
    const T target = eps * eps * std::max(total, std::numeric_limits<T>::min());

    bool converged = n == 1;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        if (detail::off_diagonal_mass(a) <= target) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const T mag = std::abs(a(p, q));
                if (mag == T(0)) {
                    continue;
                }
                const C phase = a(p, q) / mag; // e^{i phi}
                const T app = a(p, p).real();
                const T aqq = a(q, q).real();
                const T theta = (aqq - app) / (T(2) * mag);
                const T t = (theta >= 0 ? T(1) : T(-1)) /
                            (std::abs(theta) + std::sqrt(theta * theta + T(1)));
                const T c = T(1) / std::sqrt(t * t + T(1));
                const T s = t * c;
                const C cq = c * std::conj(phase); // J_qq
                const C sq = -s * std::conj(phase); // J_qp

                // A <- A J  (columns p, q)
                for (std::size_t k = 0; k < n; ++k) {
                    const C akp = a(k, p);
                    const C akq = a(k, q);
                    a(k, p) = c * akp + sq * akq;
                    a(k, q) = s * akp + cq * akq;
                }
                // A <- J^+ A  (rows p, q)
                for (std::size_t k = 0; k < n; ++k) {
                    const C apk = a(p, k);
                    const C aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(sq) * aqk;
                    a(q, k) = s * apk + std::conj(cq) * aqk;
                }
                a(p, q) = C{};
                a(q, p) = C{};
                a(p, p) = C(a(p, p).real(), 0);
                a(q, q) = C(a(q, q).real(), 0);

                for (std::size_t k = 0; k < n; ++k) {
                    const C vkp = v(k, p);
                    const C vkq = v(k, q);
                    v(k, p) = c * vkp + sq * vkq;
                    v(k, q) = s * vkp + cq * vkq;
                }
            }
        }
    }
    if (!converged && detail::off_diagonal_mass(a) > target) {
        throw InvariantViolation("Hermitian eigensolver did not converge");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() < a(y, y).real();
    });

    HermitianEigen<T> out{std::vector<T>(n), Matrix<T>(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) {
            out.vectors(r, k) = v(r, order[k]);
        }
    }
    return out;
}

template <std::floating_point T>
[[nodiscard]] std::vector<T> hermitian_eigenvalues(const Matrix<T> &a) {
    return hermitian_eigen(a).values;
}

} // namespace qdt
