#include "oracles.hpp"

#include "k3lat/enumerate.hpp"
#include "k3lat/lattice.hpp"

#include <doctest.h>

using namespace k3lat;

namespace {

std::map<std::pair<long, Rational>, long> histogram(const Fqm &f) {
    std::map<std::pair<long, Rational>, long> h;
    for (const auto &x : f.elements())
        h[{static_cast<long>(f.element_order(x)), f.q(x)}]++;
    return h;
}

} // namespace

TEST_SUITE("lattice") {

TEST_CASE("constructor checks") {
    CHECK_THROWS_WITH_AS(Lattice(IntMatrix{{2, 1}, {0, 2}}), doctest::Contains("symmetry"), InputError);
    CHECK_THROWS_AS(Lattice(IntMatrix{{2, 2}, {2, 2}}), InputError);
    CHECK_THROWS_AS(Lattice(IntMatrix(2, 3)), InputError);
    CHECK(Lattice(IntMatrix{{2, 1}, {1, 3}}).is_even() == false);
}

TEST_CASE("discriminant forms") {
    const Fqm m2 = discriminant_group(lattices::rank_one(-2));
    CHECK(m2.orders() == std::vector<std::int64_t>{2});
    CHECK(m2.q_gen()[0] == Rational(3, 2));
    const Fqm k = discriminant_group(lattices::k3_hilbert_square());
    CHECK(k.order() == 2);
    CHECK(k.q_gen()[0] == Rational(3, 2));
    const Fqm d = discriminant_group(Lattice(IntMatrix{{6, 3}, {3, 6}}));
    CHECK(d.orders() == std::vector<std::int64_t>{3, 9});
    CHECK(histogram(d) == oracle::discriminant_histogram(IntMatrix{{6, 3}, {3, 6}}));
    CHECK_THROWS_AS(discriminant(Lattice(IntMatrix{{1}})), InputError);
    CHECK(discriminant_group(lattices::e8()).order() == 1);
}

TEST_CASE("discriminant order and q-values against coset enumeration") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 1 + t % 4;
        const IntMatrix g = oracle::random_even_gram(rng, n, n <= 2 ? 12 : 6, t % 2 == 0);
        if (abs(oracle::cofactor_det(g)) > (n == 4 ? 12 : n == 3 ? 30 : 200))
            continue;
        const Lattice l(g);
        const Discriminant d = discriminant(l);
        CHECK(d.form.order() == abs(oracle::cofactor_det(g)));
        CHECK(histogram(d.form) == oracle::discriminant_histogram(g));
        // lifts land in L^∨ and project back to their generators
        for (std::size_t i = 0; i < d.form.num_generators(); ++i) {
            const RatVector v = d.lift(d.form.generator(i));
            CHECK(is_integral(RatMatrix::from_rows({mat_vec(to_rational(g), v)}, n)));
            CHECK(d.project(v) == d.form.generator(i));
        }
        // the projection ignores translates by L
        for (const auto &x : d.form.elements()) {
            RatVector v = d.lift(x);
            v[0] += 1;
            CHECK(d.project(v) == x);
        }
    }
}

TEST_CASE("divisibility") {
    const Lattice u = lattices::hyperbolic_plane();
    CHECK(divisibility(u, {1, 0}) == 1);
    const Lattice l(IntMatrix{{6, 3}, {3, 6}});
    CHECK(divisibility(l, {1, 1}) == 9);
    const Lattice k = lattices::k3_hilbert_square();
    IntVector xi(k.rank());
    xi.back() = 1;
    CHECK(divisibility(k, xi) == 2);
    CHECK_THROWS_AS(divisibility(l, {0, 0}), InputError);
    std::mt19937_64 rng(32);
    for (int t = 0; t < 50; ++t) {
        const IntMatrix g = oracle::random_even_gram(rng, 3, 10, false);
        const Lattice m(g);
        std::uniform_int_distribution<long> c(-3, 3);
        IntVector v{c(rng), c(rng), c(rng)};
        if (is_zero(v))
            continue;
        const Integer dv = divisibility(m, v);
        CHECK(m.norm(v) % dv == 0);
        for (const auto &y : mat_vec(g, v))
            CHECK(y % dv == 0);
    }
}

TEST_CASE("orthogonal complements") {
    const Lattice u = lattices::hyperbolic_plane();
    const SublatticeBasis h{u, IntMatrix{{1, 1}}, true};
    const SublatticeBasis c = orthogonal_complement(h);
    CHECK(c.rank() == 1);
    CHECK(c.induced_gram() == IntMatrix{{-2}});
    const Lattice n(IntMatrix{{6, 3, 0}, {3, 6, 0}, {0, 0, 6}});
    const SublatticeBasis c3 = orthogonal_complement({n, IntMatrix{{0, 0, 1}}, true});
    CHECK(is_isometric(c3.induced(), Lattice(IntMatrix{{6, 3}, {3, 6}})).has_value());
    CHECK(orthogonal_complement({n, IntMatrix::identity(3), true}).rank() == 0);
    const SublatticeBasis p = primitive_closure(n, IntMatrix{{2, 2, 0}});
    CHECK(p.primitive);
    CHECK((p.rows.row(0) == IntVector{1, 1, 0} || p.rows.row(0) == IntVector{-1, -1, 0}));
}

TEST_CASE("invariant and coinvariant sublattices") {
    const Lattice u = lattices::hyperbolic_plane();
    const auto id = invariant_and_coinvariant(u, {Isometry::identity(2)});
    CHECK(id.invariant.rank() == 2);
    CHECK(id.coinvariant.rank() == 0);
    const auto neg = invariant_and_coinvariant(u, {Isometry::negation(2)});
    CHECK(neg.invariant.rank() == 0);
    CHECK(neg.coinvariant.rank() == 2);
    const auto sw = invariant_and_coinvariant(u, {make_isometry(u, IntMatrix{{0, 1}, {1, 0}})});
    CHECK(sw.invariant.induced_gram() == IntMatrix{{2}});
    CHECK(sw.coinvariant.induced_gram() == IntMatrix{{-2}});
    CHECK_THROWS_AS(invariant_and_coinvariant(u, {Isometry{IntMatrix{{2, 0}, {0, 1}}, {}}}), InputError);

    std::mt19937_64 rng(33);
    for (int t = 0; t < 25; ++t) {
        const IntMatrix g = oracle::random_even_gram(rng, 3 + t % 2, 6, true);
        const Lattice l(g);
        const auto auts = oracle::brute_automorphisms(g);
        std::vector<Isometry> gens;
        for (std::size_t i = 0; i < auts.size(); i += 1 + auts.size() / 3)
            gens.push_back({auts[i], std::nullopt});
        const auto pr = invariant_and_coinvariant(l, gens);
        CHECK(pr.invariant.rank() + pr.coinvariant.rank() == l.rank());
        for (std::size_t i = 0; i < pr.invariant.rank(); ++i) {
            for (std::size_t j = 0; j < pr.coinvariant.rank(); ++j)
                CHECK(l.inner(pr.invariant.rows.row(i), pr.coinvariant.rows.row(j)) == 0);
            for (const auto &f : gens)
                CHECK(mat_vec(f.matrix, pr.invariant.rows.row(i)) == pr.invariant.rows.row(i));
        }
        for (const auto *s : {&pr.invariant, &pr.coinvariant})
            if (s->rank() > 0)
                for (const auto &d : invariant_factors(s->rows))
                    CHECK(d == 1);
    }
}

TEST_CASE("standard lattices") {
    CHECK(lattices::rank_one(-2).gram() == IntMatrix{{-2}});
    CHECK(lattices::rescale(lattices::a2(), -1).gram() == IntMatrix{{-2, -1}, {-1, -2}});
    CHECK(lattices::a2(-1) == lattices::rescale(lattices::a2(), -1));
    CHECK_THROWS_AS(lattices::rank_one(0), InputError);
    CHECK_THROWS_AS(lattices::rescale(lattices::a2(), 0), InputError);
    const Lattice e8 = lattices::e8();
    CHECK(e8.det() == 1);
    CHECK(e8.is_even());
    CHECK(e8.is_positive_definite());
    CHECK(vectors_of_norm(e8, 2).size() == 240);
    const Lattice k3 = lattices::k3();
    CHECK(k3.rank() == 22);
    CHECK(k3.det() == -1); // sign (−1)^19
    CHECK(k3.signature() == Signature{3, 19});
    const Lattice k3sq = lattices::k3_hilbert_square();
    CHECK(k3sq.rank() == 23);
    CHECK(k3sq.det() == 2); // sign (−1)^20
    CHECK(k3sq.is_even());
    CHECK(k3sq.signature() == Signature{3, 20});
    CHECK(lattices::by_name("K3^[2]") == k3sq);
    CHECK(lattices::by_name("<-2>") == lattices::rank_one(-2));
    CHECK(lattices::by_name("E8(-1)") == lattices::e8(-1));
    CHECK_THROWS_AS(lattices::by_name("nonsense"), InputError);
}

TEST_CASE("golay code and leech lattice") {
    const auto code = lattices::golay_code();
    CHECK(code.size() == 4096);
    std::map<int, int> weights;
    for (const auto &w : code) {
        REQUIRE(w.size() == 24);
        int s = 0;
        for (int b : w)
            s += b;
        weights[s]++;
    }
    CHECK(weights == std::map<int, int>{{0, 1}, {8, 759}, {12, 2576}, {16, 759}, {24, 1}});
    const Lattice leech = lattices::leech();
    CHECK(leech.rank() == 24);
    CHECK(leech.det() == 1);
    CHECK(leech.is_even());
    CHECK(leech.is_positive_definite());
    CHECK(vectors_of_norm(leech, 2).empty());
}

TEST_CASE("reflections") {
    const Lattice u = lattices::hyperbolic_plane();
    const IntVector h{1, 1};
    CHECK(reflection_compose(u, h, h) == h);
    CHECK(reflection_compose(u, h, {1, -1}) == IntVector{-1, 1});
    CHECK(reflection_compose(u, h, {1, 0}) == IntVector{0, 1});
    const Isometry r = reflection(u, h);
    CHECK(is_isometry_of(u, r.matrix));
    CHECK(r.order == 2);
    CHECK_THROWS_AS(reflection_compose(u, {1, 0}, {1, 0}), InputError);
}

TEST_CASE("matrix order and powers") {
    const IntMatrix r{{0, -1}, {1, 1}};
    CHECK(matrix_order(r) == 6);
    CHECK(matrix_power(r, 6) == IntMatrix::identity(2));
    CHECK(matrix_power(r, 0) == IntMatrix::identity(2));
    CHECK_FALSE(matrix_order(IntMatrix{{1, 1}, {0, 1}}, 50).has_value());
    CHECK(trace(r) == 1);
    CHECK_THROWS_AS(make_isometry(Lattice(IntMatrix{{2, 0}, {0, 4}}), IntMatrix{{0, 1}, {1, 0}}), InputError);
}

TEST_CASE("signature is a congruence invariant") {
    std::mt19937_64 rng(34);
    for (int t = 0; t < 30; ++t) {
        const IntMatrix g = oracle::random_even_gram(rng, 2 + t % 4, 8, false);
        const IntMatrix p = oracle::random_unimodular(rng, g.rows());
        CHECK(signature(p.transpose() * g * p) == signature(g));
    }
}

}
