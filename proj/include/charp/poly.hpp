#pragma once

#include <cassert>
#include <concepts>
#include <utility>
#include <vector>

#include "charp/fq.hpp"

namespace charp {

/// A coefficient ring context: supplies the arithmetic for DPoly values.
template <class R>
concept CoefficientField = requires(const R r, const typename R::value_type v) {
    { r.zero() } -> std::convertible_to<typename R::value_type>;
    { r.one() } -> std::convertible_to<typename R::value_type>;
    { r.is_zero(v) } -> std::convertible_to<bool>;
    { r.add(v, v) } -> std::convertible_to<typename R::value_type>;
    { r.sub(v, v) } -> std::convertible_to<typename R::value_type>;
    { r.neg(v) } -> std::convertible_to<typename R::value_type>;
    { r.mul(v, v) } -> std::convertible_to<typename R::value_type>;
    { r.div(v, v) } -> std::convertible_to<typename R::value_type>;
    { r.eq(v, v) } -> std::convertible_to<bool>;
};

/// F_q as a coefficient ring.
struct FqRing {
    using value_type = FqElem;
    FqFieldPtr F;

    FqElem zero() const { return 0; }
    FqElem one() const { return 1; }
    bool is_zero(FqElem a) const { return a == 0; }
    FqElem add(FqElem a, FqElem b) const { return F->add(a, b); }
    FqElem sub(FqElem a, FqElem b) const { return F->sub(a, b); }
    FqElem neg(FqElem a) const { return F->neg(a); }
    FqElem mul(FqElem a, FqElem b) const { return F->mul(a, b); }
    FqElem div(FqElem a, FqElem b) const { return F->div(a, b); }
    bool eq(FqElem a, FqElem b) const { return a == b; }
};

/// Dense univariate polynomial over a coefficient field, ascending
/// coefficients, trimmed so the last coefficient is nonzero.  The variable
/// tag is carried for printing and sanity checks ('t', 'x', 'u').
template <CoefficientField R>
class DPoly {
   public:
    using C = typename R::value_type;

    DPoly(R ring, char var) : ring_(std::move(ring)), var_(var) {}
    DPoly(R ring, char var, std::vector<C> coeffs) : ring_(std::move(ring)), var_(var), c_(std::move(coeffs)) {
        trim();
    }

    static DPoly constant(R ring, char var, C value) {
        DPoly p(ring, var);
        if (!p.ring_.is_zero(value)) p.c_ = {value};
        return p;
    }
    static DPoly monomial(R ring, char var, C value, std::size_t deg) {
        DPoly p(ring, var);
        if (!p.ring_.is_zero(value)) {
            p.c_.assign(deg + 1, p.ring_.zero());
            p.c_[deg] = value;
        }
        return p;
    }

    const R& ring() const { return ring_; }
    char var() const { return var_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return (int)c_.size() - 1; }  // -1 for the zero polynomial
    const std::vector<C>& coeffs() const { return c_; }

    C coeff(std::size_t i) const { return i < c_.size() ? c_[i] : ring_.zero(); }
    C leading() const {
        assert(!c_.empty());
        return c_.back();
    }
    bool is_constant() const { return c_.size() <= 1; }

    DPoly operator+(const DPoly& o) const {
        std::vector<C> r(std::max(c_.size(), o.c_.size()), ring_.zero());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = ring_.add(coeff(i), o.coeff(i));
        return DPoly(ring_, var_, std::move(r));
    }
    DPoly operator-(const DPoly& o) const {
        std::vector<C> r(std::max(c_.size(), o.c_.size()), ring_.zero());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = ring_.sub(coeff(i), o.coeff(i));
        return DPoly(ring_, var_, std::move(r));
    }
    DPoly operator-() const {
        std::vector<C> r(c_);
        for (auto& x : r) x = ring_.neg(x);
        return DPoly(ring_, var_, std::move(r));
    }
    DPoly operator*(const DPoly& o) const {
        if (is_zero() || o.is_zero()) return DPoly(ring_, var_);
        std::vector<C> r(c_.size() + o.c_.size() - 1, ring_.zero());
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (ring_.is_zero(c_[i])) continue;
            for (std::size_t j = 0; j < o.c_.size(); ++j)
                r[i + j] = ring_.add(r[i + j], ring_.mul(c_[i], o.c_[j]));
        }
        return DPoly(ring_, var_, std::move(r));
    }

    DPoly scaled(const C& s) const {
        if (ring_.is_zero(s)) return DPoly(ring_, var_);
        std::vector<C> r(c_);
        for (auto& x : r) x = ring_.mul(x, s);
        return DPoly(ring_, var_, std::move(r));
    }

    /// Multiply by var^k.
    DPoly shifted(std::size_t k) const {
        if (is_zero()) return *this;
        std::vector<C> r(c_.size() + k, ring_.zero());
        for (std::size_t i = 0; i < c_.size(); ++i) r[i + k] = c_[i];
        return DPoly(ring_, var_, std::move(r));
    }

    std::pair<DPoly, DPoly> divmod(const DPoly& d) const {
        assert(!d.is_zero());
        DPoly q(ring_, var_), r = *this;
        if (r.degree() < d.degree()) return {q, r};
        q.c_.assign(r.degree() - d.degree() + 1, ring_.zero());
        C lead_inv = ring_.div(ring_.one(), d.leading());
        while (!r.is_zero() && r.degree() >= d.degree()) {
            std::size_t shift = r.degree() - d.degree();
            C f = ring_.mul(r.leading(), lead_inv);
            q.c_[shift] = f;
            for (std::size_t i = 0; i < d.c_.size(); ++i)
                r.c_[shift + i] = ring_.sub(r.c_[shift + i], ring_.mul(f, d.c_[i]));
            r.trim();
        }
        q.trim();
        return {q, r};
    }
    DPoly operator/(const DPoly& d) const { return divmod(d).first; }
    DPoly operator%(const DPoly& d) const { return divmod(d).second; }

    /// Divide by leading coefficient; returns the former leading coefficient.
    C make_monic() {
        assert(!is_zero());
        C lc = leading();
        C inv = ring_.div(ring_.one(), lc);
        for (auto& x : c_) x = ring_.mul(x, inv);
        return lc;
    }

    C eval(const C& at) const {
        C r = ring_.zero();
        for (std::size_t i = c_.size(); i-- > 0;) r = ring_.add(ring_.mul(r, at), c_[i]);
        return r;
    }

    DPoly derivative() const {
        if (c_.size() <= 1) return DPoly(ring_, var_);
        std::vector<C> r(c_.size() - 1, ring_.zero());
        C k = ring_.zero();
        for (std::size_t i = 1; i < c_.size(); ++i) {
            k = ring_.add(k, ring_.one());  // k = i in the prime field
            r[i - 1] = ring_.mul(c_[i], k);
        }
        return DPoly(ring_, var_, std::move(r));
    }

    DPoly pow(unsigned long long e) const {
        DPoly r = constant(ring_, var_, ring_.one());
        DPoly b = *this;
        while (e) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return r;
    }

    bool operator==(const DPoly& o) const {
        if (c_.size() != o.c_.size()) return false;
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!ring_.eq(c_[i], o.c_[i])) return false;
        return true;
    }
    bool operator!=(const DPoly& o) const { return !(*this == o); }

   private:
    R ring_;
    char var_;
    std::vector<C> c_;

    void trim() {
        while (!c_.empty() && ring_.is_zero(c_.back())) c_.pop_back();
    }
};

/// Polynomial over F_q; the workhorse for F_q[t].
using Poly = DPoly<FqRing>;

inline Poly make_poly(const FqFieldPtr& F, char var, std::vector<long long> ints) {
    std::vector<FqElem> c;
    c.reserve(ints.size());
    for (auto v : ints) c.push_back(F->from_int(v));
    return Poly(FqRing{F}, var, std::move(c));
}

template <CoefficientField R>
DPoly<R> poly_gcd(DPoly<R> a, DPoly<R> b) {
    while (!b.is_zero()) {
        auto r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero()) a.make_monic();
    return a;
}

/// Canonical order on F_q[t]: by degree, then lexicographic on the
/// ascending coefficient list (element index order).  Used for
/// reproducible factor and place orderings.
inline int poly_cmp(const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        if (a.coeffs()[i] != b.coeffs()[i]) return a.coeffs()[i] < b.coeffs()[i] ? -1 : 1;
    }
    return 0;
}

}  // namespace charp
