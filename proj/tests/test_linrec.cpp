#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "charp/linrec.hpp"
#include "test_util.hpp"

using namespace charp;
using charp::testutil::naive_series_coeffs;

namespace {

RationalSeries series_from(const FqFieldPtr& F, const std::string& num, const std::string& den) {
    return parse_series(F, num, den);
}

XPoly xconst(const FqFieldPtr& F, const RatFunc& c) { return XPoly::constant(RatFuncRing{F}, 'x', c); }

/// Random rational series with den(0) != 0 and denominator degree <= max_deg.
RationalSeries random_series(const FqFieldPtr& F, std::mt19937_64& rng, int max_deg, bool t_coeffs) {
    RatFuncRing R{F};
    std::uniform_int_distribution<int> ddist(0, max_deg);
    auto coeff = [&]() {
        if (!t_coeffs) return RatFunc::from_int(F, (long long)(rng() % F->q()));
        std::vector<FqElem> c(1 + rng() % 3);
        for (auto& v : c) v = (FqElem)(rng() % F->q());
        return RatFunc::from_poly(Poly(FqRing{F}, 't', std::move(c)));
    };
    while (true) {
        int nd = ddist(rng), dd = ddist(rng);
        std::vector<RatFunc> nc, dc;
        for (int i = 0; i <= nd; ++i) nc.push_back(coeff());
        for (int i = 0; i <= dd; ++i) dc.push_back(coeff());
        XPoly num(R, 'x', std::move(nc)), den(R, 'x', std::move(dc));
        if (den.is_zero() || den.coeff(0).is_zero()) continue;
        return make_series(std::move(num), std::move(den));
    }
}

RatFunc linrec_eval(const LinRecState& st, unsigned long long n) {
    // direct state stepping: a_n = w A^n v
    std::vector<RatFunc> s = st.v;
    const auto& F = st.v.front().field();
    for (unsigned long long i = 0; i < n; ++i) {
        std::vector<RatFunc> next(st.order, RatFunc(F));
        for (std::size_t r = 0; r < st.order; ++r)
            for (std::size_t c = 0; c < st.order; ++c)
                if (!st.A[r][c].is_zero()) next[r] = next[r] + st.A[r][c] * s[c];
        s = std::move(next);
    }
    RatFunc out(F);
    for (std::size_t c = 0; c < st.order; ++c) out = out + st.w[c] * s[c];
    return out;
}

}  // namespace

TEST_CASE("series construction canonicalizes and validates") {
    auto F = make_prime_field(3);
    CHECK_THROWS_AS(parse_series(F, "1", "x"), ValidationError);   // den(0) = 0
    CHECK_THROWS_AS(parse_series(F, "1", "0"), ValidationError);   // zero denominator
    auto f = parse_series(F, "x", "(1-x)^2");
    CHECK(f.den.coeff(0) == RatFunc::from_int(F, 1));
    // (2x)/(2(1-x)^2) is the same series after normalization
    auto g = parse_series(F, "2*x", "2*(1-x)^2");
    CHECK(f == g);
}

TEST_CASE("series_to_linrec worked examples") {
    auto F = make_prime_field(3);
    SUBCASE("geometric: 1/(1 - t x)") {
        auto f = series_from(F, "1", "1 - t*x");
        auto st = series_to_linrec(f);
        CHECK(st.order == 1);
        for (unsigned long long n = 0; n <= 8; ++n) CHECK(linrec_eval(st, n) == RatFunc::t(F).pow(n));
    }
    SUBCASE("x/(1-x)^2 over F_3: a_n = n mod 3, order 2") {
        auto f = series_from(F, "x", "(1-x)^2");
        auto st = series_to_linrec(f);
        CHECK(st.order == 2);
        for (unsigned long long n = 0; n <= 8; ++n)
            CHECK(linrec_eval(st, n) == RatFunc::from_int(F, (long long)(n % 3)));
    }
    SUBCASE("polynomial series (1+x)") {
        auto f = series_from(F, "1 + x", "1");
        auto st = series_to_linrec(f);
        CHECK(linrec_eval(st, 0) == RatFunc::from_int(F, 1));
        CHECK(linrec_eval(st, 1) == RatFunc::from_int(F, 1));
        for (unsigned long long n = 2; n <= 6; ++n) CHECK(linrec_eval(st, n).is_zero());
    }
    SUBCASE("matrix route matches the streaming route on random series") {
        std::mt19937_64 rng(71);
        for (int it = 0; it < 25; ++it) {
            auto f = random_series(F, rng, 4, true);
            auto st = series_to_linrec(f);
            auto pre = coefficient_prefix(f, 12);
            auto oracle = naive_series_coeffs(f.num, f.den, 12);
            for (unsigned long long n = 0; n < 12; ++n) {
                CHECK(linrec_eval(st, n) == pre[(std::size_t)n]);
                CHECK(pre[(std::size_t)n] == oracle[(std::size_t)n]);
            }
        }
    }
}

TEST_CASE("coefficient_at worked examples") {
    auto F = make_prime_field(3);
    CHECK(coefficient_at(series_from(F, "1", "1 - t*x"), 5) == RatFunc::t(F).pow(5));
    CHECK(coefficient_at(series_from(F, "x", "(1-x)^2"), 7) == RatFunc::from_int(F, 1));
    auto f = series_from(F, "2 + x", "1 + x");
    CHECK(coefficient_at(f, 0) == f.num.coeff(0) / f.den.coeff(0));
}

TEST_CASE("section worked examples") {
    auto F = make_prime_field(3);
    SUBCASE("sections of 1/(1 - t x)") {
        auto f = series_from(F, "1", "1 - t*x");
        auto s = section(f, 2, 1);
        CHECK(s == series_from(F, "t", "1 - t^2*x"));
    }
    SUBCASE("a_{3n} of x/(1-x)^2 over F_3 vanishes") {
        auto f = series_from(F, "x", "(1-x)^2");
        auto s = section(f, 3, 0);
        CHECK(s.num.is_zero());
    }
    SUBCASE("degree-1 polynomial at M=2, b=0 leaves the constant") {
        auto f = series_from(F, "1 + 2*x", "1");
        auto s = section(f, 2, 0);
        CHECK(s == series_from(F, "1", "1"));
    }
}

TEST_CASE("section consistency: coefficients match the parent stream") {
    auto F = make_prime_field(3);
    std::mt19937_64 rng(72);
    for (int it = 0; it < 20; ++it) {
        auto f = random_series(F, rng, 6, it % 2 == 0);
        unsigned long long M = 1 + rng() % 5, b = rng() % M;
        auto s = section(f, M, b);
        auto sc = coefficient_prefix(s, 61);
        auto parent = coefficient_prefix(f, (std::size_t)(M * 60 + b + 1));
        for (unsigned long long n = 0; n <= 60; ++n)
            CHECK(sc[(std::size_t)n] == parent[(std::size_t)(M * n + b)]);
    }
}

TEST_CASE("Frobenius collapse: sections at (p, k) stay within the parent order") {
    for (unsigned p : {2u, 3u, 5u}) {
        auto F = make_prime_field(p);
        std::mt19937_64 rng(100 + p);
        for (int it = 0; it < 12; ++it) {
            auto f = random_series(F, rng, 5, false);  // constants over F_p
            long long k = std::max<long long>(f.den.degree(), f.num.degree() + 1);
            for (unsigned long long b = 0; b < p; ++b) {
                auto s = section(f, p, b);
                CHECK(s.den.degree() <= std::max<long long>(k, 1));
                auto sc = coefficient_prefix(s, 40);
                auto parent = coefficient_prefix(f, (std::size_t)(p * 39 + b + 1));
                for (unsigned long long n = 0; n < 40; ++n)
                    CHECK(sc[(std::size_t)n] == parent[(std::size_t)(p * n + b)]);
            }
        }
    }
}

TEST_CASE("Frobenius collapse: n alpha^n collapses to a pure geometric section") {
    auto F = make_prime_field(3);
    RatFunc alpha = RatFunc::t(F);  // a_n = n alpha^n from alpha x / (1 - alpha x)^2
    RatFuncRing R{F};
    XPoly num = XPoly::monomial(R, 'x', alpha, 1);
    XPoly one = xconst(F, RatFunc::from_int(F, 1));
    XPoly den = (one - XPoly::monomial(R, 'x', alpha, 1)) * (one - XPoly::monomial(R, 'x', alpha, 1));
    auto f = make_series(num, den);
    for (unsigned long long k = 0; k < 3; ++k) {
        auto s = section(f, 3, k);
        // a_{3n+k} = (3n+k) alpha^{3n+k} = k alpha^k (alpha^3)^n exactly
        RatFunc c = RatFunc::from_int(F, (long long)k) * alpha.pow((long long)k);
        if (k == 0) {
            CHECK(s.num.is_zero());
        } else {
            XPoly exp_num = xconst(F, c);
            XPoly exp_den = one - XPoly::monomial(R, 'x', alpha.pow(3), 1);
            CHECK(s == make_series(exp_num, exp_den));
        }
    }
}

TEST_CASE("polya_decompose worked examples") {
    auto F = make_prime_field(3);
    SUBCASE("x/(1-x)^2 over F_3 with G = <2>: M = 3, N = 0, mu = (0,1,2)") {
        GroupSpec G({RatFunc::from_int(F, 2)});
        auto f = series_from(F, "x", "(1-x)^2");
        auto res = polya_decompose(f, G, 12, 16);
        REQUIRE(std::holds_alternative<PolyaDecomposition>(res));
        const auto& d = std::get<PolyaDecomposition>(res);
        CHECK(d.M == 3);
        CHECK(d.N == 0);
        CHECK(d.P.is_zero());
        REQUIRE(d.mu.size() == 3);
        CHECK(d.mu[0].is_zero());
        CHECK(d.mu[1] == RatFunc::from_int(F, 1));
        CHECK(d.mu[2] == RatFunc::from_int(F, 2));
        for (int b = 0; b < 3; ++b) CHECK(d.delta[(std::size_t)b] == RatFunc::from_int(F, 1));
        CHECK(d.deltas_in_G);
        CHECK(d.mus_in_G_or_zero);
        CHECK(d.p_in_G_or_zero);
        // identity x/(1-x)^2 = (x + 2x^2)/(1 - x^3), oracle: expansion to order 12
        auto lhs = naive_series_coeffs(f.num, f.den, 13);
        auto rhs_series = parse_series(F, "x + 2*x^2", "1 - x^3");
        auto rhs = naive_series_coeffs(rhs_series.num, rhs_series.den, 13);
        CHECK(lhs == rhs);
        CHECK(reconstruct_and_verify(F, d) == f);
    }
    SUBCASE("1/(1 - t x) with G = <t> is already geometric") {
        GroupSpec G({RatFunc::t(F)});
        auto f = series_from(F, "1", "1 - t*x");
        auto res = polya_decompose(f, G, 12, 16);
        REQUIRE(std::holds_alternative<PolyaDecomposition>(res));
        const auto& d = std::get<PolyaDecomposition>(res);
        CHECK(d.M == 1);
        CHECK(d.N == 0);
        CHECK(d.P.is_zero());
        CHECK(d.mu[0] == RatFunc::from_int(F, 1));
        CHECK(d.delta[0] == RatFunc::t(F));
        CHECK(d.deltas_in_G);
        CHECK(d.mus_in_G_or_zero);
    }
    SUBCASE("two multiplicatively independent ratios never decompose") {
        GroupSpec G({RatFunc::t(F), RatFunc::from_poly(make_poly(F, 't', {1, 1}))});
        auto f = parse_series(F, "1", "1 - t*x");
        auto g = parse_series(F, "1", "1 - (t+1)*x");
        auto sum = xrat_add(XRat{f.num, f.den}, XRat{g.num, g.den});
        auto fs = make_series(sum.num, sum.den);
        auto res = polya_decompose(fs, G, 12, 16);
        REQUIRE(std::holds_alternative<PolyaFailure>(res));
        const auto& fail = std::get<PolyaFailure>(res);
        CHECK(fail.kind == PolyaFailure::Kind::NotGeometric);
        CHECK(fail.witness_M == 1);
    }
    SUBCASE("zero series decomposes trivially") {
        GroupSpec G({RatFunc::t(F)});
        auto res = polya_decompose(zero_series(F), G, 4, 4);
        REQUIRE(std::holds_alternative<PolyaDecomposition>(res));
        const auto& d = std::get<PolyaDecomposition>(res);
        CHECK(d.M == 1);
        CHECK(d.mu[0].is_zero());
    }
}

TEST_CASE("reconstruct worked examples") {
    auto F = make_prime_field(3);
    SUBCASE("(M=1, N=0, P=0, mu=1, delta=t) is 1/(1-t x)") {
        auto r = reconstruct_decomposition(F, 1, 0, XPoly(RatFuncRing{F}, 'x'), {RatFunc::from_int(F, 1)},
                                           {RatFunc::t(F)});
        CHECK(r == series_from(F, "1", "1 - t*x"));
    }
    SUBCASE("all mu zero leaves P") {
        XPoly P = xconst(F, RatFunc::from_int(F, 2)) + XPoly::monomial(RatFuncRing{F}, 'x', RatFunc::t(F), 1);
        auto r = reconstruct_decomposition(F, 2, 1, P, {RatFunc(F), RatFunc(F)},
                                           {RatFunc::from_int(F, 1), RatFunc::from_int(F, 1)});
        CHECK(r.num == P);
        CHECK(r.den.degree() == 0);
    }
    SUBCASE("zero mu with delta != 1 is rejected") {
        PolyaDecomposition d(F);
        d.M = 1;
        d.N = 0;
        d.P = XPoly(RatFuncRing{F}, 'x');
        d.mu = {RatFunc(F)};
        d.delta = {RatFunc::t(F)};
        CHECK_THROWS_AS(reconstruct_and_verify(F, d), ValidationError);
    }
}

TEST_CASE("polya round-trip on seeded random decompositions") {
    auto F = make_prime_field(3);
    GroupSpec G({RatFunc::from_int(F, 2), RatFunc::t(F), RatFunc::from_poly(make_poly(F, 't', {1, 1}))});
    std::mt19937_64 rng(73);
    auto random_member = [&](bool allow_zero) {
        if (allow_zero && rng() % 4 == 0) return RatFunc(F);
        ExponentVector e{Int((long)(rng() % 3)), Int((long)(rng() % 5) - 2), Int((long)(rng() % 5) - 2)};
        return G.materialize(e);
    };
    for (int it = 0; it < 30; ++it) {
        unsigned long long M = 1 + rng() % 6, N = rng() % 4;
        std::vector<RatFunc> mu, delta;
        for (unsigned long long b = 0; b < M; ++b) {
            RatFunc m = random_member(true);
            if (m.is_zero()) {
                mu.push_back(RatFunc(F));
                delta.push_back(RatFunc::from_int(F, 1));
            } else {
                mu.push_back(m);
                delta.push_back(random_member(false));
            }
        }
        std::vector<RatFunc> pc;
        for (unsigned long long j = 0; j < M * N; ++j) pc.push_back(random_member(true));
        XPoly P(RatFuncRing{F}, 'x', pc);
        auto f = reconstruct_decomposition(F, M, N, P, mu, delta);
        auto res = polya_decompose(f, G, 16, 16);
        REQUIRE(std::holds_alternative<PolyaDecomposition>(res));
        const auto& d = std::get<PolyaDecomposition>(res);
        // identical coefficient stream on [0, 3MN + 10M]
        std::size_t upto = (std::size_t)(3 * M * N + 10 * M + 1);
        auto rebuilt = reconstruct_and_verify(F, d);
        CHECK(coefficient_prefix(rebuilt, upto) == coefficient_prefix(f, upto));
        CHECK(rebuilt == f);  // exact identity, not just a window
        CHECK(d.deltas_in_G);
        CHECK(d.mus_in_G_or_zero);
        CHECK(d.p_in_G_or_zero);
    }
}

TEST_CASE("theorem-level property: all coefficients lie in G union {0} after a certified decomposition") {
    auto F = make_prime_field(3);
    GroupSpec G({RatFunc::from_int(F, 2), RatFunc::t(F), RatFunc::from_poly(make_poly(F, 't', {1, 1}))});
    auto f = parse_series(F, "1 + t*x", "1 - t^2*x^2");
    auto res = polya_decompose(f, G, 8, 8);
    REQUIRE(std::holds_alternative<PolyaDecomposition>(res));
    const auto& d = std::get<PolyaDecomposition>(res);
    CHECK(d.deltas_in_G);
    CHECK(d.mus_in_G_or_zero);
    auto pre = coefficient_prefix(f, 501);
    for (const auto& a : pre) {
        if (a.is_zero()) continue;
        CHECK(G.membership(a).has_value());
    }
}

TEST_CASE("return_set_of_series worked examples") {
    auto F = make_prime_field(3);
    SUBCASE("geometric series over <t> is everywhere a member") {
        GroupSpec G({RatFunc::t(F)});
        auto rep = return_set_of_series(series_from(F, "1", "1 - t*x"), G, 100);
        CHECK(rep.in_G.size() == 101);
        CHECK(rep.in_G_or_zero.size() == 101);
        REQUIRE(rep.report_G.progressions.size() == 1);
        CHECK(rep.report_G.progressions[0] == Progression{0, 1});
    }
    SUBCASE("t^n + 1 is never a member of <t>") {
        GroupSpec G({RatFunc::t(F)});
        auto f = parse_series(F, "1", "1 - t*x");
        auto g = parse_series(F, "1", "1 - x");
        auto sum = xrat_add(XRat{f.num, f.den}, XRat{g.num, g.den});
        auto rep = return_set_of_series(make_series(sum.num, sum.den), G, 100);
        CHECK(rep.in_G.empty());
        CHECK(rep.in_G_or_zero.empty());  // a_n = t^n + 1 is never zero either
    }
    SUBCASE("x/(1-x)^2 over <2>: members are n not divisible by 3") {
        GroupSpec G({RatFunc::from_int(F, 2)});
        auto rep = return_set_of_series(series_from(F, "x", "(1-x)^2"), G, 99);
        for (unsigned long long n = 0; n <= 99; ++n) {
            bool expect = n % 3 != 0;
            bool got = std::find(rep.in_G.begin(), rep.in_G.end(), n) != rep.in_G.end();
            CHECK(expect == got);
        }
        CHECK(rep.in_G_or_zero.size() == 100);
        // fitted progressions: (1,3) and (2,3) for N, (0,1) for N_0
        REQUIRE(rep.report_G.progressions.size() == 2);
        CHECK(rep.report_G.progressions[0] == Progression{1, 3});
        CHECK(rep.report_G.progressions[1] == Progression{2, 3});
        CHECK(rep.report_G.residual.empty());
        REQUIRE(rep.report_G0.progressions.size() == 1);
        CHECK(rep.report_G0.progressions[0] == Progression{0, 1});
    }
}
