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

#include "qdt/prospect.hpp"
#include "support/random.hpp"

using namespace qdt;
using qdt::testing::Rng;
using Catch::Approx;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

struct Fixture {
    HilbertSpace a = HilbertSpace::indexed(2, "A");
    HilbertSpace b = HilbertSpace::indexed(2, "B");
    CompositeSpace ab{a, b};

    [[nodiscard]] Prospect prospect(std::size_t n, std::vector<Complex> amps) const {
        return {ElementaryEvent(a, n), UncertainUnion(b, std::move(amps))};
    }
    [[nodiscard]] StatisticalOperator pure(const std::vector<Complex> &psi) const {
        return StatisticalOperator::pure(psi, ab.product_space());
    }
    [[nodiscard]] StatisticalOperator state(CMatrix m) const {
        return StatisticalOperator(std::move(m), ab.product_space());
    }
};

struct RandomCase {
    CompositeSpace space;
    StatisticalOperator rho;
    std::vector<Complex> amps;
};

RandomCase random_case(Rng &rng, bool product) {
    const std::size_t da = testing::random_dim(rng, 2, 4);
    const std::size_t db = testing::random_dim(rng, 1, 4);
    CompositeSpace space(HilbertSpace::indexed(da, "A"), HilbertSpace::indexed(db, "B"));
    CMatrix m = product ? tensor_product(testing::random_density(da, rng),
                                         testing::random_density(db, rng))
                        : testing::random_density(da * db, rng);
    auto amps = testing::random_amplitudes(db, testing::random_dim(rng, 1, db), rng);
    return {space, StatisticalOperator(std::move(m), space.product_space()), std::move(amps)};
}

std::vector<Complex> column_of(const CMatrix &v) {
    return {v.entries().begin(), v.entries().end()};
}

} // namespace

TEST_CASE("composite space labels and indexing", "[prospect]") {
    const Fixture fx;
    CHECK(fx.ab.product_dimension() == 4);
    CHECK(fx.ab.product_space().label(2) == "A1|B0");
    CHECK(fx.ab.index(1, 1) == 3);
    CHECK_THROWS_AS(CompositeSpace(HilbertSpace::indexed(65), HilbertSpace::indexed(64)),
                    DimensionError);
}

TEST_CASE("prospect state", "[prospect]") {
    const Fixture fx;
    CHECK(column_of(prospect_state(fx.prospect(0, {1.0, 0.0}))) ==
          std::vector<Complex>{1.0, 0.0, 0.0, 0.0});
    CHECK(column_of(prospect_state(fx.prospect(0, {0.0, 1.0}))) ==
          std::vector<Complex>{0.0, 1.0, 0.0, 0.0});
    const auto v = column_of(prospect_state(fx.prospect(1, {kInvSqrt2, kInvSqrt2})));
    CHECK(v == std::vector<Complex>{0.0, 0.0, kInvSqrt2, kInvSqrt2});
}

TEST_CASE("prospect operator", "[prospect]") {
    const Fixture fx;
    const auto single = prospect_operator(fx.prospect(1, {0.0, 1.0})).matrix;
    const auto expected = tensor_product(projector_of(ElementaryEvent(fx.a, 1)),
                                         projector_of(ElementaryEvent(fx.b, 1)));
    CHECK(single == expected);

    // Diagonal blocks weighted by |b|^2 plus cross blocks P_n (x) |alpha><beta|.
    const auto even = prospect_operator(fx.prospect(0, {kInvSqrt2, kInvSqrt2})).matrix;
    const CMatrix pn = projector_of(ElementaryEvent(fx.a, 0));
    CMatrix assembled(4, 4);
    for (std::size_t alpha = 0; alpha < 2; ++alpha) {
        for (std::size_t beta = 0; beta < 2; ++beta) {
            CMatrix ab(2, 2);
            ab(alpha, beta) = 0.5;
            assembled = assembled + tensor_product(pn, ab);
        }
    }
    CHECK(testing::max_diff(even, assembled) <= 1e-15);
    CHECK(is_hermitian(even, 0.0));
    CHECK(is_positive_semidefinite(even));
    CHECK(std::abs(trace(even) - Complex{1.0}) <= 1e-15);
}

TEST_CASE("prospect operator is a basis projector iff a single mode is present",
          "[prospect][property]") {
    Rng rng(43);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t db = testing::random_dim(rng, 1, 4);
        const std::size_t modes = testing::random_dim(rng, 1, db);
        const CompositeSpace space(HilbertSpace::indexed(2, "A"), HilbertSpace::indexed(db, "B"));
        const Prospect pr{ElementaryEvent(space.space_a(), 0),
                          UncertainUnion(space.space_b(),
                                         testing::random_amplitudes(db, modes, rng))};
        const auto p = prospect_operator(pr).matrix;
        // Always rank one and idempotent; diagonal in the product basis only for one mode.
        CHECK(testing::max_diff(p * p, p) <= 1e-12);
        double off = 0.0;
        for (std::size_t i = 0; i < p.rows(); ++i) {
            for (std::size_t j = 0; j < p.cols(); ++j) {
                off += i == j ? 0.0 : std::norm(p(i, j));
            }
        }
        CHECK((off == 0.0) == (modes == 1));
    }
}

TEST_CASE("POVM deviation", "[prospect]") {
    const Fixture fx;
    const ProspectLattice even =
        ProspectLattice::exhaustive(fx.ab, UncertainUnion(fx.b, {kInvSqrt2, kInvSqrt2}));
    CHECK(povm_deviation(even) == Approx(std::numbers::sqrt2).margin(1e-12));

    const CompositeSpace one(fx.a, HilbertSpace({"B"}));
    CHECK(povm_deviation(ProspectLattice::exhaustive(one, UncertainUnion(one.space_b(), {1.0}))) ==
          Approx(0.0).margin(1e-15));

    const CompositeSpace three(HilbertSpace::indexed(3, "A"), fx.b);
    const ProspectLattice partial(three, {0, 2}, UncertainUnion(fx.b, {1.0, 0.0}));
    CHECK_THROWS_AS(povm_deviation(partial), InputError);

    // Analytic value ||1_A (x) (|B><B| - 1_B)||_HS = sqrt(dim A * (dim B - 1)).
    Rng rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t da = testing::random_dim(rng, 2, 4);
        const std::size_t db = testing::random_dim(rng, 1, 4);
        const CompositeSpace s(HilbertSpace::indexed(da, "A"), HilbertSpace::indexed(db, "B"));
        const auto lattice = ProspectLattice::exhaustive(
            s, UncertainUnion(s.space_b(), testing::random_amplitudes(db, db, rng)));
        CHECK(std::abs(povm_deviation(lattice) - std::sqrt(double(da * (db - 1)))) <= 1e-12);
    }
}

TEST_CASE("lattice construction guards", "[prospect]") {
    const Fixture fx;
    const UncertainUnion u(fx.b, {1.0, 0.0});
    CHECK_THROWS_AS(ProspectLattice(fx.ab, {0}, u), InputError);
    CHECK_THROWS_AS(ProspectLattice(fx.ab, {1, 1}, u), InputError);
    CHECK_THROWS_AS(ProspectLattice(fx.ab, {0, 2}, u), InputError);
    CHECK_THROWS_AS(ProspectLattice(fx.ab, {0, 1}, UncertainUnion(fx.a, {1.0, 0.0})), InputError);
}

TEST_CASE("joint probability", "[prospect]") {
    const Fixture fx;
    const ElementaryEvent a0(fx.a, 0);
    const ElementaryEvent b0(fx.b, 0);
    const ElementaryEvent b1(fx.b, 1);
    CHECK(joint_probability(fx.pure({1.0, 0.0, 0.0, 0.0}), a0, b0) == 1.0);
    CHECK(joint_probability(fx.state(CMatrix::identity(4) * Complex{0.25}), a0, b1) == 0.25);
    CHECK(joint_probability(fx.pure({kInvSqrt2, 0.0, 0.0, kInvSqrt2}), a0, b1) ==
          Approx(0.0).margin(1e-15));
    CHECK_THROWS_AS(joint_probability(fx.state(CMatrix::identity(4) * Complex{0.25}), a0,
                                      ElementaryEvent(HilbertSpace::indexed(3), 0)),
                    InputError);
}

TEST_CASE("marginal additivity", "[prospect]") {
    const Fixture fx;
    const std::vector<ElementaryEvent> bs{{fx.b, 0}, {fx.b, 1}};
    const ElementaryEvent a0(fx.a, 0);

    const auto uniform =
        marginal_additivity_check(fx.state(CMatrix::identity(4) * Complex{0.25}), a0, bs);
    CHECK(uniform.summed_joint == 0.5);
    CHECK(uniform.marginal == 0.5);

    CHECK_THROWS_AS(marginal_additivity_check(fx.state(CMatrix::identity(4) * Complex{0.25}), a0,
                                              std::span(bs).first(1)),
                    InputError);

    Rng rng(53);
    for (int trial = 0; trial < 100; ++trial) {
        const auto rho_a = testing::random_density(2, rng);
        const auto rho = fx.state(tensor_product(rho_a, testing::random_density(2, rng)));
        const auto m = marginal_additivity_check(rho, a0, bs);
        CHECK(std::abs(m.summed_joint - m.marginal) <= 1e-12);
        CHECK(std::abs(m.marginal - rho_a(0, 0).real()) <= 1e-12);

        const auto generic = fx.state(testing::random_density(4, rng));
        const auto g = marginal_additivity_check(generic, ElementaryEvent(fx.a, 1), bs);
        CHECK(std::abs(g.summed_joint - g.marginal) <= 1e-12);
    }
}

TEST_CASE("prospect probability examples", "[prospect]") {
    const Fixture fx;
    const auto even = fx.prospect(0, {kInvSqrt2, kInvSqrt2});

    const auto bell = prospect_probability(fx.pure({kInvSqrt2, 0.0, 0.0, kInvSqrt2}), even);
    CHECK(bell.p == Approx(0.25).margin(1e-15));
    CHECK(bell.f == Approx(0.25).margin(1e-15));
    CHECK(bell.q == Approx(0.0).margin(1e-15));

    const auto psi = prospect_probability(fx.pure({kInvSqrt2, kInvSqrt2, 0.0, 0.0}), even);
    CHECK(psi.p == Approx(1.0).margin(1e-15));
    CHECK(psi.f == Approx(0.5).margin(1e-15));
    CHECK(psi.q == Approx(0.5).margin(1e-15));

    const std::vector<Complex> d{0.1, 0.2, 0.3, 0.4};
    CHECK(prospect_probability(fx.state(CMatrix::diagonal(d)), even).q == 0.0);

    CHECK_THROWS_AS(prospect_probability(StatisticalOperator(CMatrix::identity(2) * Complex{0.5},
                                                             HilbertSpace::indexed(2)),
                                         even),
                    InputError);
}

TEST_CASE("product states: raw interference factorizes, normalized interference vanishes",
          "[prospect]") {
    Rng rng(59);
    for (int trial = 0; trial < 200; ++trial) {
        const auto c = random_case(rng, true);
        const std::size_t da = c.space.space_a().dimension();
        const std::size_t db = c.space.space_b().dimension();
        const auto lattice = ProspectLattice::exhaustive(c.space, UncertainUnion(c.space.space_b(), c.amps));

        const CMatrix rho_a = partial_trace(c.rho.matrix(), {da, db}, TraceOut::B);
        const CMatrix rho_b = partial_trace(c.rho.matrix(), {da, db}, TraceOut::A);
        Complex cross{};
        for (std::size_t x = 0; x < db; ++x) {
            for (std::size_t y = 0; y < db; ++y) {
                if (x != y) {
                    cross += std::conj(c.amps[x]) * c.amps[y] * rho_b(x, y);
                }
            }
        }
        const auto raw = lattice_probabilities(c.rho, lattice, false);
        const auto norm = lattice_probabilities(c.rho, lattice, true);
        for (std::size_t n = 0; n < da; ++n) {
            CHECK(std::abs(raw[n].q - rho_a(n, n).real() * cross.real()) <= 1e-12);
            CHECK(std::abs(norm[n].q) <= 1e-12);
        }
    }
}

TEST_CASE("decomposition invariants over random inputs", "[prospect][property]") {
    Rng rng(61);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto c = random_case(rng, false);
        const UncertainUnion u(c.space.space_b(), c.amps);
        const std::size_t da = c.space.space_a().dimension();
        const std::size_t n = testing::random_dim(rng, 0, da - 1);
        const Prospect pr{ElementaryEvent(c.space.space_a(), n), u};
        const auto d = prospect_probability(c.rho, pr);

        CHECK(std::abs(d.p - (d.f + d.q)) <= 1e-10);
        CHECK(std::abs(d.p - testing::sandwich(column_of(prospect_state(pr)), c.rho.matrix()).real()) <=
              1e-12);

        // f equals the trace against the diagonal part of the prospect operator.
        CMatrix diag_part(c.space.product_dimension(), c.space.product_dimension());
        for (std::size_t alpha = 0; alpha < c.amps.size(); ++alpha) {
            const std::size_t i = c.space.index(n, alpha);
            diag_part(i, i) = std::norm(c.amps[alpha]);
        }
        CHECK(std::abs(d.f - trace(c.rho.matrix() * diag_part).real()) <= 1e-12);

        // Alternation and normalization on the exhaustive lattice.
        const auto lattice = ProspectLattice::exhaustive(c.space, u);
        const auto norm = lattice_probabilities(c.rho, lattice, true);
        double sp = 0.0;
        double sf = 0.0;
        double sq = 0.0;
        for (const auto &x : norm) {
            sp += x.p;
            sf += x.f;
            sq += x.q;
            CHECK(x.f >= 0.0);
            CHECK(x.f <= 1.0);
            CHECK(x.q >= -1.0);
            CHECK(x.q <= 1.0);
            CHECK(std::abs(x.p - (x.f + x.q)) <= 1e-10);
        }
        CHECK(std::abs(sp - 1.0) <= 1e-10);
        CHECK(std::abs(sf - 1.0) <= 1e-10);
        CHECK(std::abs(sq) <= 1e-10);

        // Decohered values form a distribution.
        double sd = 0.0;
        for (const auto &x : norm) {
            sd += decohere(x);
        }
        CHECK(std::abs(sd - 1.0) <= 1e-10);
    }
}

TEST_CASE("single-mode uncertainty reduces to the joint probability", "[prospect][property]") {
    Rng rng(67);
    for (int trial = 0; trial < 200; ++trial) {
        auto c = random_case(rng, false);
        const std::size_t db = c.space.space_b().dimension();
        const std::size_t alpha = testing::random_dim(rng, 0, db - 1);
        std::vector<Complex> hot(db);
        hot[alpha] = 1.0;
        const ElementaryEvent a(c.space.space_a(), 0);
        const auto d =
            prospect_probability(c.rho, Prospect{a, UncertainUnion(c.space.space_b(), hot)});
        CHECK(d.q == 0.0);
        CHECK(d.p == joint_probability(c.rho, a, ElementaryEvent(c.space.space_b(), alpha)));
    }
}

TEST_CASE("lattice normalization", "[prospect]") {
    const Fixture fx;
    const UncertainUnion even(fx.b, {kInvSqrt2, kInvSqrt2});
    const auto lattice = ProspectLattice::exhaustive(fx.ab, even);

    // Symmetric under exchange of the outcomes.
    const auto sym = fx.pure({0.5, 0.5, 0.5, 0.5});
    const auto r = lattice_probabilities(sym, lattice, true);
    CHECK(r[0].p == Approx(0.5).margin(1e-15));
    CHECK(r[1].p == Approx(0.5).margin(1e-15));

    // Zero weight on the lattice.
    const auto dead = fx.pure({1.0, 0.0, 0.0, 0.0});
    const auto off = ProspectLattice::exhaustive(fx.ab, UncertainUnion(fx.b, {0.0, 1.0}));
    CHECK_THROWS_AS(lattice_probabilities(dead, off, true), InputError);

    // Evaluation is deterministic.
    Rng rng(71);
    const auto rho = fx.state(testing::random_density(4, rng));
    const auto x = lattice_probabilities(rho, lattice, true);
    const auto y = lattice_probabilities(rho, lattice, true);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(x[k].p == y[k].p);
        CHECK(x[k].q == y[k].q);
    }
}

TEST_CASE("decohere", "[prospect]") {
    CHECK(decohere({0.75, 0.5, 0.25}) == 0.5);
    CHECK(decohere({0.3, 0.3, 0.0}) == 0.3);
}
