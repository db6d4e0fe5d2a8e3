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

#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include "qdt/linalg.hpp"
#include "support/random.hpp"

using namespace qdt;
using qdt::testing::Rng;
using Catch::Approx;

namespace {

std::vector<double> eigen_oracle(const CMatrix &a) {
    Eigen::MatrixXcd m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            m(i, j) = a(i, j);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

CMatrix ket_bra(std::size_t dim, std::size_t i, std::size_t j) {
    CMatrix m(dim, dim);
    m(i, j) = 1.0;
    return m;
}

} // namespace

TEST_CASE("tensor product of identities and projectors", "[linalg]") {
    CHECK(tensor_product(CMatrix::identity(2), CMatrix::identity(2)) == CMatrix::identity(4));

    const CMatrix p = tensor_product(ket_bra(2, 0, 0), ket_bra(2, 1, 1));
    CHECK(p == ket_bra(4, 1, 1));

    const CMatrix a{{1.0, 2.0}, {3.0, 4.0}};
    const CMatrix k = tensor_product(a, CMatrix::identity(2));
    CHECK(k.rows() == 4);
    CHECK(k(2, 0) == Complex{3.0});
    CHECK(k(2, 1) == Complex{0.0});
    CHECK(k(3, 1) == Complex{3.0});
    CHECK(k(0, 2) == Complex{2.0});
}

TEST_CASE("tensor product matches the index definition", "[linalg]") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = testing::random_matrix(testing::random_dim(rng, 1, 3),
                                              testing::random_dim(rng, 1, 3), rng);
        const auto b = testing::random_matrix(testing::random_dim(rng, 1, 3),
                                              testing::random_dim(rng, 1, 3), rng);
        CHECK(testing::max_diff(tensor_product(a, b), testing::kron_oracle(a, b)) == 0.0);
    }
}

TEST_CASE("tensor product rejects oversized spaces", "[linalg]") {
    const CMatrix big(65, 1);
    CHECK_THROWS_AS(tensor_product(big, CMatrix(64, 1)), DimensionError);
    CHECK_NOTHROW(tensor_product(CMatrix(64, 1), CMatrix(64, 1)));
}

TEST_CASE("trace", "[linalg]") {
    CHECK(trace(CMatrix::identity(4)) == Complex{4.0});
    for (std::size_t n = 0; n < 5; ++n) {
        CHECK(trace(ket_bra(5, n, n)) == Complex{1.0});
    }
    CHECK_THROWS_AS(trace(CMatrix(2, 3)), DimensionError);

    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto h = testing::random_hermitian(3, rng);
        const auto values = eigen_oracle(h);
        const double sum = values[0] + values[1] + values[2];
        CHECK(std::abs(trace(h).real() - sum) <= 1e-12);
        CHECK(std::abs(trace(h).imag()) <= 1e-12);
    }
}

TEST_CASE("partial trace", "[linalg]") {
    Rng rng(5);
    const auto rho_a = testing::random_density(3, rng);
    const auto rho_b = testing::random_density(2, rng);
    const auto prod = tensor_product(rho_a, rho_b);
    CHECK(testing::max_diff(partial_trace(prod, {3, 2}, TraceOut::B), rho_a) <= 1e-12);
    CHECK(testing::max_diff(partial_trace(prod, {3, 2}, TraceOut::A), rho_b) <= 1e-12);

    CHECK(partial_trace(CMatrix::identity(4), {2, 2}, TraceOut::B) ==
          CMatrix::identity(2) * Complex{2.0});

    // Bell projector: 1/2 on the corners of {|00>, |11>}.
    CMatrix bell(4, 4);
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
    const auto reduced = partial_trace(bell, {2, 2}, TraceOut::B);
    CHECK(testing::max_diff(reduced, CMatrix::identity(2) * Complex{0.5}) <= 1e-15);

    CHECK_THROWS_AS(partial_trace(CMatrix::identity(4), {3, 2}, TraceOut::A), DimensionError);
}

TEST_CASE("Hilbert-Schmidt inner product", "[linalg]") {
    CHECK(hs_inner_product(ket_bra(3, 1, 1), ket_bra(3, 1, 1)) == Complex{1.0});
    CHECK(hs_inner_product(ket_bra(3, 0, 0), ket_bra(3, 2, 2)) == Complex{0.0});
    const CMatrix ones{{1.0, 1.0}, {1.0, 1.0}};
    CHECK(hs_inner_product(ones, ones) == Complex{4.0});
    CHECK(hs_norm(ones) == Approx(2.0));
    CHECK_THROWS_AS(hs_inner_product(CMatrix(2, 2), CMatrix(3, 3)), DimensionError);

    // Tr(a^+ b) against the explicit product.
    Rng rng(8);
    const auto a = testing::random_matrix(3, 3, rng);
    const auto b = testing::random_matrix(3, 3, rng);
    CHECK(std::abs(hs_inner_product(a, b) - trace(a.adjoint() * b)) <= 1e-12);
}

TEST_CASE("Hermitian predicate", "[linalg]") {
    CHECK(is_hermitian(CMatrix::identity(3), 0.0));

    const Complex i{0.0, 1.0};
    CHECK(is_hermitian(CMatrix{{0.0, i}, {-i, 0.0}}, 1e-12));
    CHECK_FALSE(is_hermitian(CMatrix{{0.0, i}, {i, 0.0}}, 1e-12));

    Rng rng(13);
    auto h = testing::random_hermitian(4, rng);
    h(1, 2) += 1e-9;
    CHECK(is_hermitian(h, 1e-8));
    CHECK_FALSE(is_hermitian(h, 1e-12));
    CHECK_THROWS_AS(is_hermitian(CMatrix(2, 3)), DimensionError);
}

TEST_CASE("positive semidefinite predicate", "[linalg]") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto psi = testing::random_amplitudes(4, 4, rng);
        CHECK(is_positive_semidefinite(CMatrix::outer(psi, psi)));
    }
    const std::vector<Complex> d{1.0, -0.1};
    CHECK_FALSE(is_positive_semidefinite(CMatrix::diagonal(d), 1e-12));

    const auto prod =
        tensor_product(testing::random_density(2, rng), testing::random_density(3, rng));
    CHECK(is_positive_semidefinite(prod));

    const Complex i{0.0, 1.0};
    CHECK_THROWS_AS(is_positive_semidefinite(CMatrix{{0.0, i}, {i, 0.0}}), InputError);
}

TEST_CASE("Jacobi eigensolver agrees with Eigen and has small residuals", "[linalg][eigen]") {
    Rng rng(19);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = testing::random_dim(rng, 1, 8);
        const auto h = testing::random_hermitian(n, rng);
        const auto ours = hermitian_eigen(h);
        const auto ref = eigen_oracle(h);
        const double scale = hs_norm(h);
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(std::abs(ours.values[k] - ref[k]) <= 1e-11 * std::max(1.0, scale));

            std::vector<Complex> v(n);
            for (std::size_t r = 0; r < n; ++r) {
                v[r] = ours.vectors(r, k);
            }
            const CMatrix av = h * CMatrix::column(v);
            double res = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                res += std::norm(av(r, 0) - ours.values[k] * v[r]);
            }
            CHECK(std::sqrt(res) <= 1e-9 * scale);
        }
        // Eigenvectors are orthonormal.
        const CMatrix gram = ours.vectors.adjoint() * ours.vectors;
        CHECK(testing::max_diff(gram, CMatrix::identity(n)) <= 1e-12);
    }
}

TEST_CASE("Kronecker eigenvalues are products of factor eigenvalues", "[linalg][eigen]") {
    Rng rng(23);
    const auto a = testing::random_density(2, rng);
    const auto b = testing::random_density(3, rng);
    const auto ea = hermitian_eigenvalues(a);
    const auto eb = hermitian_eigenvalues(b);
    std::vector<double> expected;
    for (double x : ea) {
        for (double y : eb) {
            expected.push_back(x * y);
        }
    }
    std::sort(expected.begin(), expected.end());
    const auto got = hermitian_eigenvalues(tensor_product(a, b));
    for (std::size_t k = 0; k < expected.size(); ++k) {
        CHECK(std::abs(got[k] - expected[k]) <= 1e-13);
    }
}

TEST_CASE("algebraic properties over random inputs", "[linalg][property]") {
    Rng rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = testing::random_matrix(2, 2, rng);
        const auto b = testing::random_matrix(2, 2, rng);
        const auto c = testing::random_matrix(2, 2, rng);

        // Associativity.
        CHECK(hs_norm(tensor_product(tensor_product(a, b), c) -
                      tensor_product(a, tensor_product(b, c))) <= 1e-12);
        // Trace is multiplicative.
        CHECK(std::abs(trace(tensor_product(a, b)) - trace(a) * trace(b)) <= 1e-12);
        // Partial trace of a product.
        CHECK(hs_norm(partial_trace(tensor_product(a, b), {2, 2}, TraceOut::B) - a * trace(b)) <=
              1e-12);
        // Hilbert-Schmidt self product is real and non-negative.
        const Complex self = hs_inner_product(a, a);
        CHECK(std::abs(self.imag()) <= 1e-12);
        CHECK(self.real() >= -1e-12);
        // Adjoint is an involution.
        CHECK(a.adjoint().adjoint() == a);
    }
}

TEST_CASE("matrix construction guards", "[linalg]") {
    CHECK_THROWS_AS(CMatrix(0, 2), DimensionError);
    CHECK_THROWS_AS(CMatrix(2, 2, std::vector<Complex>(3)), DimensionError);
    CHECK_THROWS_AS(CMatrix(1, 1, {Complex{std::nan(""), 0.0}}), InputError);
    CHECK_THROWS_AS(HilbertSpace({"a", "a"}), InputError);
    CHECK(HilbertSpace::indexed(3, "x").label(2) == "x2");
}
