#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "charp/scalar_io.hpp"
#include "charp/torusdyn.hpp"
#include "test_util.hpp"

using namespace charp;

namespace {

GroupSpecPtr group_2_t_t1(const FqFieldPtr& F) {
    return std::make_shared<const GroupSpec>(std::vector<RatFunc>{
        RatFunc::from_int(F, 2), RatFunc::t(F), RatFunc::from_poly(make_poly(F, 't', {1, 1}))});
}

ExponentVector ev(std::vector<long> v) {
    ExponentVector e;
    for (auto x : v) e.emplace_back(x);
    return e;
}

/// Direct application of the map in F_q(t) coordinates (field-level oracle).
std::vector<RatFunc> direct_apply(const MonomialMap& map, const std::vector<RatFunc>& x) {
    const auto& G = *map.group;
    std::vector<RatFunc> out;
    for (std::size_t i = 0; i < map.dim(); ++i) {
        RatFunc v = G.materialize(map.coeff[i]);
        for (std::size_t j = 0; j < map.dim(); ++j) {
            long long e = map.expo(i, j).get_si();
            v = v * x[j].pow(e);
        }
        out.push_back(std::move(v));
    }
    return out;
}

ZMat mat(std::vector<std::vector<long>> rows) {
    ZMat m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

/// Random signed permutation matrix: spectral radius 1, so field-level
/// iterates stay desk-size out to n = 60.
ZMat signed_permutation(std::mt19937_64& rng, std::size_t d) {
    std::vector<std::size_t> perm(d);
    for (std::size_t i = 0; i < d; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    ZMat m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, perm[i]) = (rng() & 1) ? 1 : -1;
    return m;
}

ExponentVector random_exps(std::mt19937_64& rng, std::size_t m, int lim) {
    std::uniform_int_distribution<int> d(-lim, lim);
    ExponentVector e;
    for (std::size_t i = 0; i < m; ++i) e.emplace_back(d(rng));
    return e;
}

}  // namespace

TEST_CASE("iterate_monomial: t x^2 orbit has exponents 2^{n+1} - 1") {
    auto F = make_prime_field(3);
    auto G = std::make_shared<const GroupSpec>(std::vector<RatFunc>{RatFunc::t(F)});
    MonomialMap phi = make_monomial_map(G, mat({{2}}), {ev({1})});
    TorusPoint x0 = make_torus_point(G, {ev({1})});

    TorusPoint p3 = iterate_monomial(phi, x0, 3);
    CHECK(p3.coords[0] == ev({15}));
    CHECK(materialize_point(*G, p3)[0] == RatFunc::t(F).pow(15));
    for (unsigned long long n = 0; n <= 10; ++n) {
        TorusPoint p = iterate_monomial(phi, x0, n);
        CHECK(p.coords[0][0] == Int((1L << (n + 1)) - 1));
    }
}

TEST_CASE("iterate_monomial: identity map and n = 0 leave the point alone") {
    auto F = make_prime_field(3);
    auto G = group_2_t_t1(F);
    MonomialMap id = make_monomial_map(G, mat({{1, 0}, {0, 1}}), {ev({0, 0, 0}), ev({0, 0, 0})});
    TorusPoint x = make_torus_point(G, {ev({1, 2, 0}), ev({0, 1, 1})});
    CHECK(iterate_monomial(id, x, 7).coords == x.coords);
    MonomialMap sq = make_monomial_map(G, mat({{2, 0}, {0, 2}}), {ev({1, 0, 0}), ev({0, 0, 0})});
    CHECK(iterate_monomial(sq, x, 0).coords == x.coords);
}

TEST_CASE("dominance is enforced at construction") {
    auto F = make_prime_field(3);
    auto G = group_2_t_t1(F);
    CHECK_THROWS_AS(make_monomial_map(G, mat({{1, 1}, {1, 1}}), {ev({0, 0, 0}), ev({0, 0, 0})}),
                    ValidationError);
    CHECK_THROWS_AS(make_monomial_map(G, mat({{1, 0}}), {ev({0, 0, 0})}), DimensionMismatch);
}

TEST_CASE("eval_monomial_functional") {
    auto F = make_prime_field(3);
    SUBCASE("g = x_1 on (t^3)") {
        auto G = std::make_shared<const GroupSpec>(std::vector<RatFunc>{RatFunc::t(F)});
        TorusPoint x = make_torus_point(G, {ev({3})});
        MonomialFunctional g{ev({0}), {1}};
        CHECK(eval_monomial_functional(g, x) == ev({3}));
    }
    SUBCASE("constant functional returns kappa") {
        auto G = group_2_t_t1(F);
        TorusPoint x = make_torus_point(G, {ev({1, 2, 3}), ev({0, 1, 0})});
        MonomialFunctional g{ev({1, 0, 2}), {0, 0}};
        CHECK(eval_monomial_functional(g, x) == ev({1, 0, 2}));
    }
    SUBCASE("d = 2: x_1 x_2^-1 on (t^2, t(t+1)) over <t, t+1>") {
        auto G = std::make_shared<const GroupSpec>(
            std::vector<RatFunc>{RatFunc::t(F), RatFunc::from_poly(make_poly(F, 't', {1, 1}))});
        TorusPoint x = make_torus_point(G, {ev({2, 0}), ev({1, 1})});
        MonomialFunctional g{ev({0, 0}), {1, -1}};
        CHECK(eval_monomial_functional(g, x) == ev({1, -1}));
    }
    SUBCASE("dimension mismatch") {
        auto G = group_2_t_t1(F);
        TorusPoint x = make_torus_point(G, {ev({1, 0, 0})});
        MonomialFunctional g{ev({0, 0, 0}), {1, 1}};
        CHECK_THROWS_AS(eval_monomial_functional(g, x), DimensionMismatch);
    }
}

TEST_CASE("residue_recurrences: worked example b(n) = 2^{n+1} - 1") {
    auto F = make_prime_field(3);
    auto G = std::make_shared<const GroupSpec>(std::vector<RatFunc>{RatFunc::t(F)});
    MonomialMap phi = make_monomial_map(G, mat({{2}}), {ev({1})});
    TorusPoint x0 = make_torus_point(G, {ev({1})});
    MonomialFunctional f{ev({0}), {1}};

    SUBCASE("L = 1: order-2 recurrence b(n+2) = 3b(n+1) - 2b(n), b = 1, 3, 7, ...") {
        auto rr = residue_recurrences(phi, x0, f, 1);
        REQUIRE(rr.residues.size() == 1);
        const IntRecurrence& b = rr.residues[0][0];
        CHECK(b.coeffs == std::vector<Int>{Int(-2), Int(3)});
        CHECK(b.initial == std::vector<Int>{Int(1), Int(3)});
        for (unsigned long long n = 0; n <= 20; ++n) CHECK(b.at(n) == Int((1L << (n + 1)) - 1));
    }
    SUBCASE("L = 2 refinement: residues 2^{2n+1}-1 and 2^{2n+2}-1") {
        auto rr = residue_recurrences(phi, x0, f, 2);
        REQUIRE(rr.residues.size() == 2);
        // char poly (x-4)(x-1) = x^2 - 5x + 4 for both residues
        CHECK(rr.residues[0][0].coeffs == std::vector<Int>{Int(-4), Int(5)});
        CHECK(rr.residues[1][0].coeffs == std::vector<Int>{Int(-4), Int(5)});
        for (unsigned long long n = 0; n <= 10; ++n) {
            CHECK(rr.residues[0][0].at(n) == Int((1L << (2 * n + 1)) - 1));
            CHECK(rr.residues[1][0].at(n) == Int((1L << (2 * n + 2)) - 1));
        }
    }
    SUBCASE("identity map gives the constant recurrence") {
        MonomialMap id = make_monomial_map(G, mat({{1}}), {ev({0})});
        TorusPoint t_pt = make_torus_point(G, {ev({1})});
        auto rr = residue_recurrences(id, t_pt, f, 1);
        for (unsigned long long n = 0; n <= 10; ++n) CHECK(rr.residues[0][0].at(n) == 1);
    }
}

TEST_CASE("corollary check: recurrences equal direct evaluation for seeded systems") {
    auto F = make_prime_field(3);
    auto G = group_2_t_t1(F);
    std::mt19937_64 rng(41);
    for (int sys = 0; sys < 20; ++sys) {
        std::size_t d = 1 + rng() % 3;
        ZMat expo = signed_permutation(rng, d);
        std::vector<ExponentVector> coeff, coords;
        for (std::size_t i = 0; i < d; ++i) {
            coeff.push_back(random_exps(rng, 3, 2));
            coords.push_back(random_exps(rng, 3, 2));
        }
        MonomialMap phi = make_monomial_map(G, expo, coeff);
        TorusPoint x0 = make_torus_point(G, coords);
        std::vector<long long> powers;
        for (std::size_t i = 0; i < d; ++i) powers.push_back((long long)(rng() % 5) - 2);
        MonomialFunctional f{random_exps(rng, 3, 2), powers};

        unsigned long long L = 1 + rng() % 3;
        auto rr = residue_recurrences(phi, x0, f, L);

        // field-level oracle: iterate coordinates directly in F_q(t)
        std::vector<RatFunc> pt = materialize_point(*G, x0);
        for (unsigned long long n = 0; n <= 60; ++n) {
            ExponentVector b(3, Int(0));
            for (std::size_t i = 0; i < 3; ++i) b[i] = rr.residues[n % L][i].at(n / L);
            RatFunc lhs = G->materialize(b);
            RatFunc rhs = G->materialize(f.kappa);
            for (std::size_t j = 0; j < d; ++j) rhs = rhs * pt[j].pow(f.powers[j]);
            CHECK(lhs == rhs);
            pt = direct_apply(phi, pt);
        }
    }
}

TEST_CASE("exponent/value coherence for expanding maps at small n") {
    auto F = make_prime_field(3);
    auto G = group_2_t_t1(F);
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> mdist(-3, 3);
    for (int sys = 0; sys < 15; ++sys) {
        std::size_t d = 1 + rng() % 3;
        ZMat expo(d, d);
        do {
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) expo(i, j) = mdist(rng);
        } while (zmat_det(expo) == 0);
        std::vector<ExponentVector> coeff, coords;
        for (std::size_t i = 0; i < d; ++i) {
            coeff.push_back(random_exps(rng, 3, 1));
            coords.push_back(random_exps(rng, 3, 1));
        }
        MonomialMap phi = make_monomial_map(G, expo, coeff);
        TorusPoint x0 = make_torus_point(G, coords);

        std::vector<RatFunc> pt = materialize_point(*G, x0);
        for (unsigned long long n = 0; n <= 8; ++n) {
            TorusPoint p = iterate_monomial(phi, x0, n);
            bool small = true;
            for (const auto& c : p.coords)
                for (const auto& e : c) small = small && abs(e) <= 24;
            if (!small) break;
            auto mat_pt = materialize_point(*G, p);
            for (std::size_t j = 0; j < d; ++j) CHECK(mat_pt[j] == pt[j]);
            pt = direct_apply(phi, pt);
        }
    }
}

TEST_CASE("monoid_values") {
    auto F = make_prime_field(3);
    auto G = std::make_shared<const GroupSpec>(std::vector<RatFunc>{RatFunc::t(F)});
    MonomialFunctional f{ev({0}), {1}};
    TorusPoint x0 = make_torus_point(G, {ev({1})});

    SUBCASE("one map coincides with iterate_monomial") {
        MonomialMap phi = make_monomial_map(G, mat({{2}}), {ev({1})});
        auto vals = monoid_values({phi}, x0, f, 4);
        REQUIRE(vals.size() == 5);
        for (const auto& v : vals) {
            TorusPoint p = iterate_monomial(phi, x0, v.word.size());
            CHECK(v.exps == eval_monomial_functional(f, p));
        }
    }
    SUBCASE("two commuting diagonal maps at depth 2: seven words") {
        MonomialMap a = make_monomial_map(G, mat({{2}}), {ev({1})});   // x -> t x^2
        MonomialMap b = make_monomial_map(G, mat({{3}}), {ev({0})});   // x -> x^3
        auto vals = monoid_values({a, b}, x0, f, 2);
        REQUIRE(vals.size() == 7);
        // enumerate-and-compose oracle, words in BFS order:
        // e, a, b, aa, ab, ba, bb applied outermost-first to x0 = t
        std::vector<long> expect = {1, 3, 3, 7, 7, 9, 9};
        for (std::size_t i = 0; i < vals.size(); ++i) CHECK(vals[i].exps == ev({expect[i]}));
        for (const auto& v : vals) CHECK(v.audited);
    }
    SUBCASE("depth 0 is the functional at the start point") {
        MonomialMap phi = make_monomial_map(G, mat({{2}}), {ev({1})});
        auto vals = monoid_values({phi}, x0, f, 0);
        REQUIRE(vals.size() == 1);
        CHECK(vals[0].word.empty());
        CHECK(vals[0].exps == ev({1}));
    }
    SUBCASE("semigroup consistency: depth a+b contains compositions of depths a and b") {
        MonomialMap a = make_monomial_map(G, mat({{2}}), {ev({1})});
        MonomialMap b = make_monomial_map(G, mat({{3}}), {ev({0})});
        auto all = monoid_values({a, b}, x0, f, 3);
        // every word w1 of length <= 1 composed with w2 of length <= 2 appears
        auto find_word = [&](const std::vector<std::size_t>& w) {
            for (const auto& v : all)
                if (v.word == w) return true;
            return false;
        };
        for (std::size_t l1 = 0; l1 <= 1; ++l1)
            for (std::size_t w1 = 0; w1 < (l1 ? 2u : 1u); ++w1)
                for (std::size_t l2 = 0; l2 <= 2; ++l2) {
                    std::vector<std::size_t> word;
                    if (l1) word.push_back(w1);
                    for (std::size_t i = 0; i < l2; ++i) word.push_back(i % 2);
                    CHECK(find_word(word));
                }
    }
}
