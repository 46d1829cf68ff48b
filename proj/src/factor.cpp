#include "charp/factor.hpp"

#include <algorithm>
#include <random>

namespace charp {

namespace {

Poly poly_powmod(const Poly& base, unsigned long long e, const Poly& m) {
    Poly r = Poly::constant(base.ring(), base.var(), base.ring().one());
    Poly b = base % m;
    while (e) {
        if (e & 1) r = (r * b) % m;
        e >>= 1;
        if (e) b = (b * b) % m;
    }
    return r;
}

// f(x) = g(x^p) -> g, using c^(q/p) to undo Frobenius on coefficients.
Poly extract_pth_root(const Poly& f) {
    const auto& F = f.ring().F;
    const unsigned p = F->p();
    unsigned long long root_pow = 1;
    for (unsigned i = 0; i + 1 < F->ext_degree(); ++i) root_pow *= p;  // q/p
    std::vector<FqElem> g;
    g.reserve(f.coeffs().size() / p + 1);
    for (std::size_t i = 0; i < f.coeffs().size(); i += p) g.push_back(F->pow(f.coeffs()[i], (long long)root_pow));
    return Poly(f.ring(), f.var(), std::move(g));
}

void squarefree_decompose(const Poly& f, unsigned outer_mult, std::vector<std::pair<Poly, unsigned>>& out) {
    const unsigned p = f.ring().F->p();
    Poly d = f.derivative();
    if (d.is_zero()) {
        Poly g = extract_pth_root(f);
        g.make_monic();
        squarefree_decompose(g, outer_mult * p, out);
        return;
    }
    Poly c = poly_gcd(f, d);
    Poly w = f / c;
    unsigned i = 1;
    while (w.degree() > 0) {
        Poly y = poly_gcd(w, c);
        Poly z = w / y;
        if (z.degree() > 0) {
            z.make_monic();
            out.emplace_back(z, i * outer_mult);
        }
        c = c / y;
        w = std::move(y);
        ++i;
    }
    if (c.degree() > 0) {
        Poly g = extract_pth_root(c);
        g.make_monic();
        squarefree_decompose(g, outer_mult * p, out);
    }
}

// Distinct-degree split of a monic squarefree polynomial.
std::vector<std::pair<Poly, unsigned>> ddf(const Poly& f) {
    const auto& F = f.ring().F;
    std::vector<std::pair<Poly, unsigned>> out;
    Poly x = Poly::monomial(f.ring(), f.var(), F->one(), 1);
    Poly h = x % f;
    Poly rest = f;
    for (unsigned d = 1; rest.degree() >= (int)(2 * d); ++d) {
        h = poly_powmod(h, F->q(), rest);
        Poly g = poly_gcd(h - x, rest);
        if (g.degree() > 0) {
            out.emplace_back(g, d);
            rest = rest / g;
            h = h % rest;
        }
    }
    if (rest.degree() > 0) out.emplace_back(rest, (unsigned)rest.degree());
    return out;
}

Poly random_poly(const FqRing& ring, char var, int max_deg, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint32_t> dist(0, ring.F->q() - 1);
    std::vector<FqElem> c((std::size_t)max_deg, 0);
    for (auto& v : c) v = dist(rng);
    return Poly(ring, var, std::move(c));
}

// Equal-degree split (Cantor–Zassenhaus) of a product of irreducibles of
// common degree d.
void edf(const Poly& f, unsigned d, std::mt19937_64& rng, std::vector<Poly>& out) {
    if ((unsigned)f.degree() == d) {
        Poly g = f;
        g.make_monic();
        out.push_back(std::move(g));
        return;
    }
    const auto& F = f.ring().F;
    const Poly one = Poly::constant(f.ring(), f.var(), F->one());
    while (true) {
        Poly r = random_poly(f.ring(), f.var(), f.degree(), rng);
        if (r.is_zero()) continue;
        Poly g(f.ring(), f.var());
        if (F->p() == 2) {
            // Trace map over F_{2^k}: sum of r^(2^i) for i < d*k.
            unsigned steps = d * F->ext_degree();
            Poly acc = r % f;
            Poly cur = acc;
            for (unsigned i = 1; i < steps; ++i) {
                cur = (cur * cur) % f;
                acc = acc + cur;
            }
            g = poly_gcd(acc, f);
        } else {
            unsigned long long e = 1;
            for (unsigned i = 0; i < d; ++i) e *= F->q();
            Poly s = poly_powmod(r, (e - 1) / 2, f);
            g = poly_gcd(s - one, f);
        }
        if (g.degree() > 0 && g.degree() < f.degree()) {
            Poly h = f / g;
            edf(g, d, rng, out);
            edf(h, d, rng, out);
            return;
        }
    }
}

}  // namespace

Factorization factor_poly(const Poly& f, std::uint64_t seed) {
    if (f.is_zero()) throw ZeroPolynomial();
    Factorization fac;
    fac.constant = f.leading();
    if (f.degree() == 0) return fac;

    Poly monic = f;
    monic.make_monic();

    std::vector<std::pair<Poly, unsigned>> sqf;
    squarefree_decompose(monic, 1, sqf);

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    for (const auto& [part, mult] : sqf) {
        for (const auto& [g, d] : ddf(part)) {
            std::vector<Poly> irr;
            edf(g, d, rng, irr);
            for (auto& h : irr) fac.factors.push_back({std::move(h), mult});
        }
    }
    std::sort(fac.factors.begin(), fac.factors.end(),
              [](const PolyFactor& a, const PolyFactor& b) { return poly_cmp(a.factor, b.factor) < 0; });
    return fac;
}

bool poly_is_irreducible(const Poly& f) {
    if (f.degree() < 1) return false;
    auto fac = factor_poly(f);
    return fac.factors.size() == 1 && fac.factors[0].mult == 1;
}

Poly factorization_product(const FqFieldPtr& F, const Factorization& fac, char var) {
    Poly r = Poly::constant(FqRing{F}, var, fac.constant);
    for (const auto& pf : fac.factors) r = r * pf.factor.pow(pf.mult);
    return r;
}

}  // namespace charp
