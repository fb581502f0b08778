#include "oracles.hpp"

#include "k3lat/classify.hpp"
#include "k3lat/dataset.hpp"
#include "k3lat/enumerate.hpp"

#include <doctest.h>

using namespace k3lat;

namespace {

bool contains_matrix(const std::vector<Isometry> &v, const IntMatrix &m) {
    for (const auto &f : v)
        if (f.matrix == m)
            return true;
    return false;
}

// Sum of the principal 2×2 minors.
Integer principal_minor_sum(const IntMatrix &f) {
    Integer s = 0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            s += f(i, i) * f(j, j) - f(i, j) * f(j, i);
    return s;
}

// R with f·tᵢ = Σⱼ R(j,i)·tⱼ for the rows tᵢ of t_basis.
RatMatrix restriction(const Lattice &n, const IntMatrix &f, const IntMatrix &t_basis) {
    const RatMatrix t = to_rational(t_basis);
    const RatMatrix g = to_rational(n.gram());
    const RatMatrix tt = t.transpose();
    return inverse(t * g * tt) * (t * g * to_rational(f) * tt);
}

using RowKey = std::tuple<Integer, Integer, long, IntMatrix, K3Flag>;

std::multiset<RowKey> keys(const std::vector<ClassificationRow> &rows) {
    std::multiset<RowKey> out;
    for (const auto &r : rows)
        out.insert({r.h_sq, r.h_div, r.m, r.t_gram, r.k3});
    return out;
}

} // namespace

TEST_SUITE("classify") {

TEST_CASE("good pairs") {
    CHECK(is_good_pair(2, -1));
    CHECK(is_good_pair(3, 0));
    CHECK(is_good_pair(4, 1));
    CHECK(is_good_pair(6, 2));
    CHECK_FALSE(is_good_pair(2, 1));
    CHECK_FALSE(is_good_pair(1, 3));
    CHECK_FALSE(is_good_pair(6, -2));
}

TEST_CASE("good isometries: examples") {
    const Lattice d6(diagonal({6, 6, 6}));
    const auto g = good_isometries(d6);
    CHECK(contains_matrix(g, diagonal({1, -1, -1})));
    CHECK(contains_matrix(g, IntMatrix{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}));
    const Lattice n(IntMatrix{{6, 3, 0}, {3, 6, 0}, {0, 0, 6}});
    const IntMatrix six{{0, -1, 0}, {1, 1, 0}, {0, 0, 1}};
    CHECK(is_isometry_of(n, six));
    CHECK(contains_matrix(good_isometries(n), six));
    CHECK_THROWS_AS(good_isometries(lattices::a2()), InputError);
    CHECK_THROWS_AS(good_isometries(Lattice(IntMatrix{{2, 0, 0}, {0, -2, 0}, {0, 0, 2}})), InputError);
}

TEST_CASE("good isometries against filtering brute-force O(N)") {
    std::mt19937_64 rng(61);
    for (int t = 0; t < 30; ++t) {
        const IntMatrix g = oracle::random_even_gram(rng, 3, 12, true);
        const Lattice n(g);
        std::vector<IntMatrix> want;
        for (const auto &f : oracle::brute_automorphisms(g)) {
            long ord = 1;
            IntMatrix p = f;
            while (p != IntMatrix::identity(3)) {
                p = p * f;
                ++ord;
            }
            if (is_good_pair(ord, trace(f)))
                want.push_back(f);
        }
        std::vector<IntMatrix> got;
        for (const auto &f : good_isometries(n)) {
            got.push_back(f.matrix);
            REQUIRE(f.order.has_value());
            const long ord = *f.order;
            CHECK(matrix_power(f.matrix, ord) == IntMatrix::identity(3));
            for (long k = 1; k < ord; ++k)
                CHECK(matrix_power(f.matrix, k) != IntMatrix::identity(3));
            // characteristic polynomial (x − 1)(x² − (tr − 1)x + 1)
            CHECK(determinant(f.matrix) == 1);
            CHECK(principal_minor_sum(f.matrix) == trace(f.matrix));
        }
        CHECK(got == want);
    }
}

TEST_CASE("polarization and transcendental lattice") {
    const Lattice n(IntMatrix{{6, 3, 0}, {3, 6, 0}, {0, 0, 6}});
    const PolarizationT p = polarization_and_transcendental(
        n, make_isometry(n, IntMatrix{{0, -1, 0}, {1, 1, 0}, {0, 0, 1}}));
    CHECK(p.h == IntVector{0, 0, 1});
    CHECK(n.norm(p.h) == 6);
    CHECK(p.t_gram == IntMatrix{{6, 3}, {3, 6}});

    const Lattice d6(diagonal({6, 6, 6}));
    const PolarizationT q = polarization_and_transcendental(d6, make_isometry(d6, diagonal({1, -1, -1})));
    CHECK(q.h == IntVector{1, 0, 0});
    CHECK(q.t_gram == IntMatrix{{6, 0}, {0, 6}});
    const PolarizationT c = polarization_and_transcendental(
        d6, make_isometry(d6, IntMatrix{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}));
    CHECK(c.h == IntVector{1, 1, 1});
    CHECK(d6.norm(c.h) == 18);
    CHECK(c.t_gram == IntMatrix{{12, 6}, {6, 12}});
    CHECK(normalize_binary_form(IntMatrix{{12, -6}, {-6, 12}}) == IntMatrix{{12, 6}, {6, 12}});

    CHECK_THROWS_AS(polarization_and_transcendental(d6, Isometry::identity(3)), InputError);
}

TEST_CASE("binary form normalization is a class invariant") {
    std::mt19937_64 rng(62);
    for (int t = 0; t < 60; ++t) {
        const IntMatrix g = oracle::random_even_gram(rng, 2, 20, true);
        const IntMatrix r = normalize_binary_form(g);
        CHECK(2 * abs(r(0, 1)) <= r(0, 0));
        CHECK(r(0, 0) <= r(1, 1));
        CHECK(r(0, 1) >= 0);
        CHECK(determinant(r) == determinant(g));
        CHECK(is_isometric(Lattice(r), Lattice(g)).has_value());
        const IntMatrix p = oracle::random_unimodular(rng, 2, 6);
        CHECK(normalize_binary_form(p.transpose() * g * p) == r);
    }
}

TEST_CASE("good isometries act on T by a rotation or by −id") {
    std::mt19937_64 rng(63);
    std::vector<Lattice> lats{Lattice(IntMatrix{{6, 3, 0}, {3, 6, 0}, {0, 0, 6}}), Lattice(diagonal({6, 6, 6})),
                              Lattice(IntMatrix{{2, 1, 0}, {1, 6, 0}, {0, 0, 22}})};
    for (const auto &l : builtin_fixtures().groups)
        for (const auto &n : l.invariant)
            lats.push_back(n);
    for (const auto &n : lats)
        for (const auto &f : good_isometries(n)) {
            const PolarizationT p = polarization_and_transcendental(n, f);
            CHECK(n.norm(p.h) > 0);
            CHECK(mat_vec(f.matrix, p.h) == p.h);
            CHECK(p.t_gram == normalize_binary_form(p.t_gram));
            const RatMatrix r = restriction(n, f.matrix, p.t_basis);
            REQUIRE(is_integral(r));
            const IntMatrix w = to_integer(r);
            if (*f.order == 2) {
                CHECK(w == -IntMatrix::identity(2));
                for (std::size_t i = 0; i < 2; ++i) {
                    IntVector neg = p.t_basis.row(i);
                    for (auto &x : neg)
                        x = -x;
                    CHECK(mat_vec(f.matrix, p.t_basis.row(i)) == neg);
                }
            } else {
                CHECK(determinant(w) == 1);
                CHECK(trace(w) == trace(f.matrix) - 1);
            }
        }
}

TEST_CASE("K3 flag") {
    // e1 has divisibility 2
    const Lattice d2(diagonal({2, 2, 2}));
    const Subgroup none2(discriminant_group(d2), {});
    CHECK(k3_birational_flag(d2, IntMatrix{{1, 0, 0}, {0, 1, 0}}, none2) == K3Flag::Excluded);
    // glue vectors e1/2 and e2/2 pair oddly with t1, t2 and t1 + t2
    const Discriminant dd = discriminant(d2);
    const Subgroup glue(dd.form, {dd.project({Rational(1, 2), 0, 0}), dd.project({0, Rational(1, 2), 0})});
    CHECK(k3_birational_flag(d2, IntMatrix{{1, 0, 0}, {0, 1, 0}}, glue) == K3Flag::Unknown);
    // every pairing of t1, t2 and t1 + t2 has gcd 1 or 3
    const Lattice a(IntMatrix{{2, 1, 0}, {1, 2, 0}, {0, 0, 2}});
    CHECK(k3_birational_flag(a, IntMatrix{{1, 0, 0}, {0, 1, 0}}, Subgroup(discriminant_group(a), {})) ==
          K3Flag::Unknown);
    // t1 and t2 have divisibility 1, t1 + t2 has divisibility 2
    const Lattice b(IntMatrix{{2, 0, 1}, {0, 2, 1}, {1, 1, 4}});
    CHECK(divisibility(b, {1, 0, 0}) == 1);
    CHECK(divisibility(b, {0, 1, 0}) == 1);
    CHECK(k3_birational_flag(b, IntMatrix{{1, 0, 0}, {0, 1, 0}}, Subgroup(discriminant_group(b), {})) ==
          K3Flag::Excluded);
    CHECK(parse_k3_flag(to_string(K3Flag::Excluded)) == K3Flag::Excluded);
    CHECK(parse_k3_flag(to_string(K3Flag::Unknown)) == K3Flag::Unknown);
    CHECK(parse_k3_flag(to_string(K3Flag::Possible)) == K3Flag::Possible);
    CHECK_THROWS_AS(parse_k3_flag("maybe"), InputError);
}

TEST_CASE("classify on fixture data") {
    const Dataset d = builtin_fixtures();
    const GroupData *g = find_group(d, "3^4:A_6");
    REQUIRE(g != nullptr);
    const auto md = coinvariant_data(*g);
    REQUIRE(md.has_value());
    const auto rows = classify(g->invariant, *md, g->name);
    bool found = false;
    for (const auto &r : rows) {
        CHECK(r.h_sq > 0);
        CHECK((r.h_div == 1 || r.h_div == 2));
        CHECK((r.m == 2 || r.m == 3 || r.m == 4 || r.m == 6));
        CHECK(r.t_gram == normalize_binary_form(r.t_gram));
        CHECK(r.mode == Mode::Permissive);
        found = found || (r.h_sq == 6 && r.h_div == 2 && r.m == 6 && r.t_gram == IntMatrix{{6, 3}, {3, 6}});
    }
    CHECK(found);
    CHECK(std::is_sorted(rows.begin(), rows.end(), row_less));

    // exact mode without obar data falls back to permissive
    ClassifyOptions exact;
    exact.mode = Mode::Exact;
    CHECK(classify(g->invariant, *md, g->name, exact) == rows);
    ClassifyOptions par;
    par.jobs = 4;
    CHECK(classify(g->invariant, *md, g->name, par) == rows);

    // invariance under a change of basis of N
    std::mt19937_64 rng(64);
    for (int t = 0; t < 3; ++t) {
        const IntMatrix p = oracle::random_unimodular(rng, 3, 6);
        const Lattice moved(p.transpose() * g->invariant[0].gram() * p);
        CHECK(keys(classify({moved}, *md, g->name)) == keys(classify({g->invariant[0]}, *md, g->name)));
    }
}

TEST_CASE("classify edge cases") {
    // a rank-3 lattice whose only automorphisms are ±id has no good isometries
    std::mt19937_64 rng(65);
    std::optional<Lattice> bare;
    for (int t = 0; t < 200 && !bare; ++t) {
        const IntMatrix g = oracle::random_even_gram(rng, 3, 12, true);
        if (automorphism_group(Lattice(g)).order == 2)
            bare = Lattice(g);
    }
    REQUIRE(bare.has_value());
    CHECK(good_isometries(*bare).empty());
    for (const auto &cand : coinvariant_candidates(*bare))
        CHECK(classify({*bare}, {cand, std::nullopt, std::nullopt, std::nullopt}, "none").empty());

    // the declared discriminant must match the Gram
    const Lattice n(IntMatrix{{6, 3, 0}, {3, 6, 0}, {0, 0, 6}});
    const CoinvariantData bad{discriminant_group(lattices::rank_one(-2)), lattices::a2(-1), std::nullopt,
                              std::nullopt};
    CHECK_THROWS_AS(classify({n}, bad, "bad"), InputError);
    CHECK_THROWS_AS(classify({lattices::a2()}, {discriminant_group(lattices::a2(-1)), {}, {}, {}}, "x"),
                    InputError);
}

TEST_CASE("group order arithmetic") {
    CHECK(max_group_order_check(29160, 6) == 174960);
    CHECK(max_group_order_check(17, 1) == 17);
    CHECK(Integer(66) * 972 == 64152);
    CHECK(Integer(66) * 972 < max_group_order_check(29160, 6));
    CHECK_THROWS_AS(max_group_order_check(10, 0), InputError);
}

TEST_CASE("coinvariant candidates") {
    const Lattice n(IntMatrix{{6, 3, 0}, {3, 6, 0}, {0, 0, 6}});
    const auto c = coinvariant_candidates(n);
    REQUIRE(!c.empty());
    const Fqm dn = discriminant_group(n);
    for (const auto &f : c) {
        CHECK(f.order() * 2 == dn.order());
        // each candidate anti-embeds into D_N with an admissible image
        bool admissible = false;
        for (const auto &g : anti_embeddings(f, dn))
            admissible = admissible || k3sq_glue_admissible(dn, image(g));
        CHECK(admissible);
    }
    CHECK(coinvariant_candidates(lattices::direct_sum(lattices::a2(), lattices::rank_one(2))).empty());
}

}
