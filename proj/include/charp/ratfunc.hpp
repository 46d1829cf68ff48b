#pragma once

#include <optional>
#include <vector>

#include "charp/factor.hpp"
#include "charp/poly.hpp"

namespace charp {

/// An element of F_q(t) in canonical reduced form: gcd(num, den) = 1 and
/// the denominator monic.  Zero is 0/1.  This is the universal scalar of
/// the library.
class RatFunc {
   public:
    explicit RatFunc(const FqFieldPtr& F);              // zero
    RatFunc(Poly num, Poly den);                        // normalizes; throws ZeroDenominator
    static RatFunc from_poly(Poly p);
    static RatFunc constant(const FqFieldPtr& F, FqElem c);
    static RatFunc from_int(const FqFieldPtr& F, long long n);
    static RatFunc t(const FqFieldPtr& F);              // the generator of F_q(t) over F_q

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    const FqFieldPtr& field() const { return num_.ring().F; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;
    /// Nonzero constant in F_q, if this element lies in the ground field.
    std::optional<FqElem> as_constant() const;

    RatFunc operator+(const RatFunc& o) const;
    RatFunc operator-(const RatFunc& o) const;
    RatFunc operator-() const;
    RatFunc operator*(const RatFunc& o) const;
    RatFunc operator/(const RatFunc& o) const;
    RatFunc inverse() const;
    RatFunc pow(long long e) const;

    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

   private:
    Poly num_;
    Poly den_;
    void normalize();
};

/// Canonical reduced form of num/den (monic denominator).
RatFunc normalize_rat(Poly num, Poly den);

/// A place of F_q(t): either a monic irreducible polynomial or the place
/// at infinity.
struct Place {
    bool at_infinity = false;
    std::optional<Poly> pi;  // monic irreducible, present iff finite

    static Place infinity() { return Place{true, std::nullopt}; }
    static Place finite(Poly monic_irreducible) { return Place{false, std::move(monic_irreducible)}; }

    int degree() const { return at_infinity ? 1 : pi->degree(); }
    bool operator==(const Place& o) const;
};

/// Canonical place order: finite places by poly_cmp, infinity last.
int place_cmp(const Place& a, const Place& b);

/// v(f): multiplicity of pi in num minus multiplicity in den for finite
/// places, deg den - deg num at infinity.  Throws ZeroArgument on f = 0.
long long valuation(const RatFunc& f, const Place& v);

/// Weil height h(f) = max(deg num, deg den) in lowest terms.
long long weil_height(const RatFunc& f);

/// All places where f has nonzero valuation (finite support + infinity
/// when deg num != deg den), canonically sorted.
std::vector<Place> support(const RatFunc& f, std::uint64_t seed = 0);

/// F_q(t) as a coefficient ring, for polynomials in x.
struct RatFuncRing {
    using value_type = RatFunc;
    FqFieldPtr F;

    RatFunc zero() const { return RatFunc(F); }
    RatFunc one() const { return RatFunc::from_int(F, 1); }
    bool is_zero(const RatFunc& a) const { return a.is_zero(); }
    RatFunc add(const RatFunc& a, const RatFunc& b) const { return a + b; }
    RatFunc sub(const RatFunc& a, const RatFunc& b) const { return a - b; }
    RatFunc neg(const RatFunc& a) const { return -a; }
    RatFunc mul(const RatFunc& a, const RatFunc& b) const { return a * b; }
    RatFunc div(const RatFunc& a, const RatFunc& b) const { return a / b; }
    bool eq(const RatFunc& a, const RatFunc& b) const { return a == b; }
};

/// Polynomial in x with F_q(t) coefficients.
using XPoly = DPoly<RatFuncRing>;

inline XPoly make_xpoly(const FqFieldPtr& F, std::vector<RatFunc> coeffs) {
    return XPoly(RatFuncRing{F}, 'x', std::move(coeffs));
}

/// Gcd in F_q(t)[x] via the primitive pseudo-remainder sequence, which keeps
/// coefficient degrees bounded (naive Euclid blows up over function fields).
/// Result is monic in x.
XPoly xpoly_gcd(const XPoly& a, const XPoly& b);

}  // namespace charp
