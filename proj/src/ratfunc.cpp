#include "charp/ratfunc.hpp"

#include <algorithm>

namespace charp {

RatFunc::RatFunc(const FqFieldPtr& F)
    : num_(FqRing{F}, 't'), den_(Poly::constant(FqRing{F}, 't', F->one())) {}

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw ZeroDenominator();
    normalize();
}

void RatFunc::normalize() {
    if (num_.is_zero()) {
        den_ = Poly::constant(den_.ring(), den_.var(), den_.ring().one());
        return;
    }
    Poly g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = num_ / g;
        den_ = den_ / g;
    }
    FqElem lc = den_.make_monic();
    num_ = num_.scaled(den_.ring().F->inv(lc));
}

RatFunc RatFunc::from_poly(Poly p) {
    Poly one = Poly::constant(p.ring(), p.var(), p.ring().one());
    return RatFunc(std::move(p), std::move(one));
}

RatFunc RatFunc::constant(const FqFieldPtr& F, FqElem c) {
    return from_poly(Poly::constant(FqRing{F}, 't', c));
}

RatFunc RatFunc::from_int(const FqFieldPtr& F, long long n) { return constant(F, F->from_int(n)); }

RatFunc RatFunc::t(const FqFieldPtr& F) {
    return from_poly(Poly::monomial(FqRing{F}, 't', F->one(), 1));
}

bool RatFunc::is_one() const {
    return num_.is_constant() && den_.is_constant() && !num_.is_zero() && num_.coeff(0) == 1;
}

std::optional<FqElem> RatFunc::as_constant() const {
    if (num_.degree() > 0 || den_.degree() > 0 || num_.is_zero()) return std::nullopt;
    return num_.coeff(0);
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
    return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}
RatFunc RatFunc::operator-(const RatFunc& o) const {
    return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}
RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_); }
RatFunc RatFunc::operator*(const RatFunc& o) const {
    // Cross-reduce first: the factors are already reduced, so only the
    // cross gcds can cancel.
    Poly g1 = poly_gcd(num_, o.den_);
    Poly g2 = poly_gcd(o.num_, den_);
    Poly n = (g1.degree() > 0 ? num_ / g1 : num_) * (g2.degree() > 0 ? o.num_ / g2 : o.num_);
    Poly d = (g2.degree() > 0 ? den_ / g2 : den_) * (g1.degree() > 0 ? o.den_ / g1 : o.den_);
    return RatFunc(std::move(n), std::move(d));
}
RatFunc RatFunc::operator/(const RatFunc& o) const { return *this * o.inverse(); }

RatFunc RatFunc::inverse() const {
    if (is_zero()) throw ZeroArgument("inverse of zero rational function");
    return RatFunc(den_, num_);
}

RatFunc RatFunc::pow(long long e) const {
    if (e < 0) return inverse().pow(-e);
    RatFunc r = from_int(field(), 1);
    RatFunc b = *this;
    unsigned long long k = (unsigned long long)e;
    while (k) {
        if (k & 1) r = r * b;
        k >>= 1;
        if (k) b = b * b;
    }
    return r;
}

RatFunc normalize_rat(Poly num, Poly den) { return RatFunc(std::move(num), std::move(den)); }

bool Place::operator==(const Place& o) const {
    if (at_infinity != o.at_infinity) return false;
    if (at_infinity) return true;
    return *pi == *o.pi;
}

int place_cmp(const Place& a, const Place& b) {
    if (a.at_infinity && b.at_infinity) return 0;
    if (a.at_infinity) return 1;
    if (b.at_infinity) return -1;
    return poly_cmp(*a.pi, *b.pi);
}

namespace {
long long multiplicity(const Poly& f, const Poly& pi) {
    long long m = 0;
    Poly cur = f;
    while (cur.degree() >= pi.degree()) {
        auto [q, r] = cur.divmod(pi);
        if (!r.is_zero()) break;
        ++m;
        cur = std::move(q);
    }
    return m;
}
}  // namespace

long long valuation(const RatFunc& f, const Place& v) {
    if (f.is_zero()) throw ZeroArgument("valuation of zero");
    if (v.at_infinity) return (long long)f.den().degree() - f.num().degree();
    return multiplicity(f.num(), *v.pi) - multiplicity(f.den(), *v.pi);
}

long long weil_height(const RatFunc& f) {
    if (f.is_zero()) throw ZeroArgument("height of zero");
    return std::max(f.num().degree(), f.den().degree());
}

namespace {

// Primitive form of an XPoly: clear coefficient denominators, divide out the
// polynomial content; coefficients become coprime elements of F_q[t].
std::vector<Poly> primitive_parts(const XPoly& a) {
    const FqFieldPtr& F = a.ring().F;
    Poly lcm_den = Poly::constant(FqRing{F}, 't', F->one());
    for (const auto& c : a.coeffs()) {
        if (c.is_zero()) continue;
        Poly g = poly_gcd(lcm_den, c.den());
        lcm_den = (lcm_den / g) * c.den();
    }
    std::vector<Poly> nums;
    nums.reserve(a.coeffs().size());
    for (const auto& c : a.coeffs())
        nums.push_back(c.is_zero() ? Poly(FqRing{F}, 't') : c.num() * (lcm_den / c.den()));
    Poly content(FqRing{F}, 't');
    for (const auto& n : nums)
        if (!n.is_zero()) content = content.is_zero() ? n : poly_gcd(content, n);
    if (!content.is_zero() && content.degree() > 0)
        for (auto& n : nums)
            if (!n.is_zero()) n = n / content;
    return nums;
}

void poly_vec_trim(std::vector<Poly>& v) {
    while (!v.empty() && v.back().is_zero()) v.pop_back();
}

// Canonical pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b over
// F_q[t]-coefficient vectors.
std::vector<Poly> pseudo_rem(std::vector<Poly> a, const std::vector<Poly>& b) {
    const Poly& lead = b.back();
    long long scale_left = (long long)a.size() - (long long)b.size() + 1;
    while (a.size() >= b.size()) {
        Poly top = a.back();
        std::size_t shift = a.size() - b.size();
        for (auto& c : a) c = c * lead;
        --scale_left;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = a[shift + i] - top * b[i];
        poly_vec_trim(a);
        if (a.empty()) return a;
    }
    // bring the scaling up to the canonical lc^(delta+1)
    if (scale_left > 0) {
        Poly factor = lead.pow((unsigned long long)scale_left);
        for (auto& c : a) c = c * factor;
    }
    return a;
}

std::vector<Poly> primitive_part(std::vector<Poly> v) {
    Poly content(v.empty() ? FqRing{nullptr} : v.back().ring(), 't');
    for (const auto& c : v)
        if (!c.is_zero()) content = content.is_zero() ? c : poly_gcd(content, c);
    if (!content.is_zero() && content.degree() > 0)
        for (auto& c : v)
            if (!c.is_zero()) c = c / content;
    return v;
}

}  // namespace

// Subresultant pseudo-remainder sequence: coefficient degrees stay bounded
// with only exact divisions along the way, one content removal at the end.
XPoly xpoly_gcd(const XPoly& a, const XPoly& b) {
    const FqFieldPtr& F = a.ring().F;
    if (a.is_zero() || b.is_zero()) {
        XPoly r = a.is_zero() ? b : a;
        if (!r.is_zero()) r.make_monic();
        return r;
    }
    std::vector<Poly> A = primitive_parts(a), B = primitive_parts(b);
    if (A.size() < B.size()) std::swap(A, B);
    const Poly one = Poly::constant(FqRing{F}, 't', F->one());
    Poly g = one, h = one;
    std::vector<Poly> result;
    while (true) {
        long long delta = (long long)A.size() - (long long)B.size();
        std::vector<Poly> R = pseudo_rem(A, B);
        if (R.empty()) {
            result = std::move(B);
            break;
        }
        if (R.size() == 1) {  // constant remainder: coprime
            result = {one};
            break;
        }
        Poly divisor = g * h.pow((unsigned long long)delta);
        for (auto& c : R) c = c / divisor;
        A = std::move(B);
        B = std::move(R);
        g = A.back();
        if (delta > 0) {
            Poly gd = g.pow((unsigned long long)delta);
            h = delta == 1 ? gd : gd / h.pow((unsigned long long)(delta - 1));
        }
    }
    result = primitive_part(std::move(result));
    std::vector<RatFunc> coeffs;
    coeffs.reserve(result.size());
    for (auto& c : result) coeffs.push_back(RatFunc::from_poly(std::move(c)));
    XPoly gc(RatFuncRing{F}, 'x', std::move(coeffs));
    if (!gc.is_zero()) gc.make_monic();
    return gc;
}

std::vector<Place> support(const RatFunc& f, std::uint64_t seed) {
    if (f.is_zero()) throw ZeroArgument("support of zero");
    std::vector<Place> out;
    for (const auto& pf : factor_poly(f.num(), seed).factors) out.push_back(Place::finite(pf.factor));
    for (const auto& pf : factor_poly(f.den(), seed).factors) out.push_back(Place::finite(pf.factor));
    std::sort(out.begin(), out.end(), [](const Place& a, const Place& b) { return place_cmp(a, b) < 0; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (f.num().degree() != f.den().degree()) out.push_back(Place::infinity());
    return out;
}

}  // namespace charp
