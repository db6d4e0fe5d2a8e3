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
 * Operations on dense complex matrices: Kronecker products, (partial) traces,
 * Hilbert-Schmidt inner products and Hermitian / positivity predicates.
 */

#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <string>

#include "qdt/error.hpp"
#include "qdt/hermitian_eigen.hpp"
#include "qdt/matrix.hpp"

namespace qdt {

/// Kronecker product; block (i, j) of the result is a(i, j) * b.
template <std::floating_point T>
[[nodiscard]] Matrix<T> tensor_product(const Matrix<T> &a, const Matrix<T> &b) {
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    if (rows > kMaxDimension || cols > kMaxDimension) {
        throw DimensionError("tensor product " + a.shape() + " (x) " + b.shape() +
                             " exceeds the maximum dimension " + std::to_string(kMaxDimension));
    }
    Matrix<T> out(rows, cols);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const auto aij = a(i, j);
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

template <std::floating_point T>
[[nodiscard]] std::complex<T> trace(const Matrix<T> &a) {
    if (!a.is_square()) {
        throw DimensionError("trace of non-square matrix " + a.shape());
    }
    std::complex<T> sum{};
    for (std::size_t i = 0; i < a.rows(); ++i) {
        sum += a(i, i);
    }
    return sum;
}

/// Factor dimensions (dim A, dim B) of a bipartite space.
struct BipartiteDims {
    std::size_t a;
    std::size_t b;

    [[nodiscard]] std::size_t total() const noexcept { return a * b; }
    friend bool operator==(const BipartiteDims &, const BipartiteDims &) = default;
};

enum class TraceOut { A, B };

/// Reduced operator on the retained factor. Product basis index is i_a * dim_b + i_b.
template <std::floating_point T>
[[nodiscard]] Matrix<T> partial_trace(const Matrix<T> &a, BipartiteDims dims, TraceOut which) {
    if (dims.a == 0 || dims.b == 0 || !a.is_square() || a.rows() != dims.total()) {
        throw DimensionError("partial trace: matrix " + a.shape() + " does not match factors " +
                             std::to_string(dims.a) + "x" + std::to_string(dims.b));
    }
    if (which == TraceOut::B) {
        Matrix<T> out(dims.a, dims.a);
        for (std::size_t i = 0; i < dims.a; ++i) {
            for (std::size_t j = 0; j < dims.a; ++j) {
                for (std::size_t k = 0; k < dims.b; ++k) {
                    out(i, j) += a(i * dims.b + k, j * dims.b + k);
                }
            }
        }
        return out;
    }
    Matrix<T> out(dims.b, dims.b);
    for (std::size_t i = 0; i < dims.b; ++i) {
        for (std::size_t j = 0; j < dims.b; ++j) {
            for (std::size_t k = 0; k < dims.a; ++k) {
                out(i, j) += a(k * dims.b + i, k * dims.b + j);
            }
        }
    }
    return out;
}

/// Tr(a^+ b).
template <std::floating_point T>
[[nodiscard]] std::complex<T> hs_inner_product(const Matrix<T> &a, const Matrix<T> &b) {
    if (!a.is_square() || a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("Hilbert-Schmidt product needs equal square shapes, got " +
                             a.shape() + " and " + b.shape());
    }
    // Tr(a^+ b) = sum_ij conj(a_ij) b_ij
    std::complex<T> sum{};
    const auto ea = a.entries();
    const auto eb = b.entries();
    for (std::size_t k = 0; k < ea.size(); ++k) {
        sum += std::conj(ea[k]) * eb[k];
    }
    return sum;
}

template <std::floating_point T> [[nodiscard]] T hs_norm(const Matrix<T> &a) {
    T sum{};
    for (const auto &z : a.entries()) {
        sum += std::norm(z);
    }
    return std::sqrt(sum);
}

template <std::floating_point T>
[[nodiscard]] bool is_hermitian(const Matrix<T> &a, T tol = T(kDefaultTolerance)) {
    if (!a.is_square()) {
        throw DimensionError("Hermitian check on non-square matrix " + a.shape());
    }
    T sum{};
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            sum += std::norm(a(i, j) - std::conj(a(j, i)));
        }
    }
    return std::sqrt(sum) <= tol;
}

/// Smallest eigenvalue >= -tol. Input must be Hermitian within tol.
template <std::floating_point T>
[[nodiscard]] bool is_positive_semidefinite(const Matrix<T> &a, T tol = T(kDefaultTolerance)) {
    if (!is_hermitian(a, tol)) {
        throw InputError("positivity check needs a Hermitian matrix");
    }
    const auto values = hermitian_eigenvalues(a);
    return values.front() >= -tol;
}

} // namespace qdt
