#pragma once

#include <random>
#include <vector>

#include "charp/multgroup.hpp"
#include "charp/ratfunc.hpp"
#include "charp/scalar_io.hpp"

namespace charp::testutil {

inline Poly random_poly(const FqFieldPtr& F, std::mt19937_64& rng, int max_deg, bool nonzero = false) {
    std::uniform_int_distribution<int> ddist(0, max_deg);
    std::uniform_int_distribution<std::uint32_t> cdist(0, F->q() - 1);
    while (true) {
        int d = ddist(rng);
        std::vector<FqElem> c((std::size_t)d + 1, 0);
        for (auto& v : c) v = cdist(rng);
        Poly p(FqRing{F}, 't', std::move(c));
        if (!nonzero || !p.is_zero()) return p;
    }
}

inline RatFunc random_ratfunc(const FqFieldPtr& F, std::mt19937_64& rng, int max_deg, bool nonzero = false) {
    while (true) {
        Poly num = random_poly(F, rng, max_deg, nonzero);
        Poly den = random_poly(F, rng, max_deg, true);
        RatFunc f(num, den);
        if (!nonzero || !f.is_zero()) return f;
    }
}

/// Exhaustive root check: a degree-2 or degree-3 polynomial over F_q is
/// irreducible iff it has no roots.
inline bool irreducible_by_root_check(const Poly& f) {
    const auto& F = f.ring().F;
    if (f.degree() < 2 || f.degree() > 3) throw std::logic_error("root check only valid for degree 2 or 3");
    for (FqElem a = 0; a < F->q(); ++a)
        if (f.eval(a) == 0) return false;
    return true;
}

/// Naive power series expansion of num/den to `count` coefficients
/// (long division; independent of the linear-algebra path).
inline std::vector<RatFunc> naive_series_coeffs(const XPoly& num, const XPoly& den, std::size_t count) {
    std::vector<RatFunc> out;
    out.reserve(count);
    RatFunc d0 = den.coeff(0);
    std::vector<RatFunc> rem;
    for (int i = 0; i <= num.degree(); ++i) rem.push_back(num.coeff((std::size_t)i));
    for (std::size_t n = 0; n < count; ++n) {
        RatFunc a = (n < rem.size() ? rem[n] : RatFunc(num.ring().F)) / d0;
        out.push_back(a);
        if (!a.is_zero()) {
            if (rem.size() < n + (std::size_t)den.degree() + 1) rem.resize(n + (std::size_t)den.degree() + 1, RatFunc(num.ring().F));
            for (int j = 0; j <= den.degree(); ++j)
                rem[n + (std::size_t)j] = rem[n + (std::size_t)j] - a * den.coeff((std::size_t)j);
        }
    }
    return out;
}

}  // namespace charp::testutil
