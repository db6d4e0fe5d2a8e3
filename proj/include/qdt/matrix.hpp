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
 * Dense row-major complex matrix and labelled Hilbert space.
 *
 * All spaces in play are tiny, so nothing here tries to be fast; everything
 * tries to be exact and easy to check.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qdt/error.hpp"

namespace qdt {

/// Default tolerance for numerical predicates.
inline constexpr double kDefaultTolerance = 1e-10;

/// Largest admissible row/column count of any product space.
inline constexpr std::size_t kMaxDimension = 4096;

template <std::floating_point T> class Matrix {
  public:
    using real_type = T;
    using value_type = std::complex<T>;

    /// Zero matrix.
    Matrix(std::size_t rows, std::size_t cols) : rows_{rows}, cols_{cols} {
        check_shape(rows, cols);
        entries_.assign(rows * cols, value_type{});
    }

    Matrix(std::size_t rows, std::size_t cols, std::vector<value_type> entries)
        : rows_{rows}, cols_{cols}, entries_{std::move(entries)} {
        check_shape(rows, cols);
        if (entries_.size() != rows * cols) {
            throw DimensionError("matrix entry count " + std::to_string(entries_.size()) +
                                 " does not match shape " + std::to_string(rows) + "x" +
                                 std::to_string(cols));
        }
        for (const auto &z : entries_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                throw InputError("matrix entries must be finite");
            }
        }
    }

    /// Row-by-row literal, e.g. `Matrix<double>{{1, 2}, {3, 4}}`.
    Matrix(std::initializer_list<std::initializer_list<value_type>> rows)
        : Matrix(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size(), flatten(rows)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = value_type{1};
        }
        return m;
    }

    static Matrix diagonal(std::span<const value_type> diag) {
        Matrix m(diag.size(), diag.size());
        for (std::size_t i = 0; i < diag.size(); ++i) {
            m(i, i) = diag[i];
        }
        return m;
    }

    static Matrix column(std::span<const value_type> v) {
        return Matrix(v.size(), 1, std::vector<value_type>(v.begin(), v.end()));
    }

    /// |u><v|
    static Matrix outer(std::span<const value_type> u, std::span<const value_type> v) {
        Matrix m(u.size(), v.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            for (std::size_t j = 0; j < v.size(); ++j) {
                m(i, j) = u[i] * std::conj(v[j]);
            }
        }
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

    value_type &operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const value_type &operator()(std::size_t i, std::size_t j) const {
        return entries_[i * cols_ + j];
    }

    [[nodiscard]] std::span<const value_type> entries() const noexcept { return entries_; }

    [[nodiscard]] Matrix adjoint() const {
        Matrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                out(j, i) = std::conj((*this)(i, j));
            }
        }
        return out;
    }

    Matrix &operator+=(const Matrix &other) {
        require_same_shape(other, "addition");
        for (std::size_t k = 0; k < entries_.size(); ++k) {
            entries_[k] += other.entries_[k];
        }
        return *this;
    }

    Matrix &operator-=(const Matrix &other) {
        require_same_shape(other, "subtraction");
        for (std::size_t k = 0; k < entries_.size(); ++k) {
            entries_[k] -= other.entries_[k];
        }
        return *this;
    }

    Matrix &operator*=(value_type s) {
        for (auto &z : entries_) {
            z *= s;
        }
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
    friend Matrix operator*(Matrix a, value_type s) { return a *= s; }
    friend Matrix operator*(value_type s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix &a, const Matrix &b) {
        if (a.cols_ != b.rows_) {
            throw DimensionError("matrix product of " + a.shape() + " and " + b.shape());
        }
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const value_type aik = a(i, k);
                if (aik == value_type{}) {
                    continue;
                }
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    out(i, j) += aik * b(k, j);
                }
            }
        }
        return out;
    }

    friend bool operator==(const Matrix &, const Matrix &) = default;

    [[nodiscard]] std::string shape() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

  private:
    static void check_shape(std::size_t rows, std::size_t cols) {
        if (rows == 0 || cols == 0) {
            throw DimensionError("matrix dimensions must be positive");
        }
    }

    static std::vector<value_type>
    flatten(std::initializer_list<std::initializer_list<value_type>> rows) {
        std::vector<value_type> out;
        const std::size_t width = rows.size() == 0 ? 0 : rows.begin()->size();
        for (const auto &r : rows) {
            if (r.size() != width) {
                throw DimensionError("ragged matrix literal");
            }
            out.insert(out.end(), r.begin(), r.end());
        }
        return out;
    }

    void require_same_shape(const Matrix &other, const char *what) const {
        if (rows_ != other.rows_ || cols_ != other.cols_) {
            throw DimensionError(std::string("shape mismatch in ") + what + ": " + shape() +
                                 " vs " + other.shape());
        }
    }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<value_type> entries_;
};

using CMatrix = Matrix<double>;
using Complex = std::complex<double>;

/// A finite-dimensional space with one distinct label per basis vector.
class HilbertSpace {
  public:
    explicit HilbertSpace(std::vector<std::string> labels) : labels_{std::move(labels)} {
        if (labels_.empty()) {
            throw DimensionError("Hilbert space needs at least one basis vector");
        }
        std::unordered_set<std::string> seen;
        for (const auto &l : labels_) {
            if (!seen.insert(l).second) {
                throw InputError("duplicate basis label '" + l + "'");
            }
        }
    }

    /// Labels `prefix0, prefix1, ...`.
    static HilbertSpace indexed(std::size_t dimension, const std::string &prefix = "") {
        std::vector<std::string> labels;
        labels.reserve(dimension);
        for (std::size_t i = 0; i < dimension; ++i) {
            labels.push_back(prefix + std::to_string(i));
        }
        return HilbertSpace(std::move(labels));
    }

    [[nodiscard]] std::size_t dimension() const noexcept { return labels_.size(); }
    [[nodiscard]] const std::vector<std::string> &labels() const noexcept { return labels_; }
    [[nodiscard]] const std::string &label(std::size_t i) const { return labels_.at(i); }

    friend bool operator==(const HilbertSpace &, const HilbertSpace &) = default;

  private:
    std::vector<std::string> labels_;
};

} // namespace qdt
