#include "charp/fq.hpp"

#include <algorithm>
#include <numeric>

namespace charp {

namespace {

constexpr std::uint32_t kMaxQ = 1u << 20;

bool is_prime(unsigned n) {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Dense F_p[u] helpers on raw coefficient vectors, used only during field
// construction (table seeding and irreducibility checks).
using UPoly = std::vector<unsigned>;

void trim(UPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

UPoly mul_mod_p(const UPoly& a, const UPoly& b, unsigned p) {
    if (a.empty() || b.empty()) return {};
    UPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + static_cast<unsigned long long>(a[i]) * b[j]) % p;
    trim(c);
    return c;
}

UPoly mod_poly(UPoly f, const UPoly& m, unsigned p) {
    trim(f);
    const unsigned lead_inv = [&] {
        unsigned lc = m.back(), r = 1;
        // Fermat inverse; p is prime.
        for (unsigned e = p - 2; e; e >>= 1, lc = (unsigned)((unsigned long long)lc * lc % p))
            if (e & 1) r = (unsigned)((unsigned long long)r * lc % p);
        return r;
    }();
    while (f.size() >= m.size()) {
        unsigned q = (unsigned)((unsigned long long)f.back() * lead_inv % p);
        std::size_t shift = f.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i) {
            unsigned sub = (unsigned)((unsigned long long)q * m[i] % p);
            f[shift + i] = (f[shift + i] + p - sub) % p;
        }
        trim(f);
    }
    return f;
}

UPoly powmod(UPoly base, unsigned long long e, const UPoly& m, unsigned p) {
    UPoly r{1};
    base = mod_poly(std::move(base), m, p);
    while (e) {
        if (e & 1) r = mod_poly(mul_mod_p(r, base, p), m, p);
        e >>= 1;
        if (e) base = mod_poly(mul_mod_p(base, base, p), m, p);
    }
    return r;
}

UPoly gcd_poly(UPoly a, UPoly b, unsigned p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        UPoly r = mod_poly(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// x^(p^e) mod m, computed by repeated Frobenius.
UPoly x_pow_q(unsigned e, const UPoly& m, unsigned p) {
    UPoly x{0, 1};
    UPoly r = mod_poly(x, m, p);
    for (unsigned i = 0; i < e; ++i) r = powmod(r, p, m, p);
    return r;
}

bool is_irreducible(const UPoly& m, unsigned p) {
    const unsigned k = (unsigned)m.size() - 1;
    if (k == 0) return false;
    if (k == 1) return true;
    // x^(p^k) == x mod m, and x^(p^(k/l)) - x coprime to m for prime l | k.
    UPoly xq = x_pow_q(k, m, p);
    UPoly x{0, 1};
    if (mod_poly(x, m, p) != xq) return false;
    for (unsigned l = 2; l <= k; ++l) {
        if (k % l != 0 || !is_prime(l)) continue;
        UPoly sub = x_pow_q(k / l, m, p);
        // sub - x
        UPoly diff = sub;
        diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(diff);
        UPoly g = gcd_poly(m, diff, p);
        if (g.size() > 1) return false;
    }
    return true;
}

UPoly decode(std::uint32_t idx, unsigned p, unsigned k) {
    UPoly c(k, 0);
    for (unsigned i = 0; i < k; ++i) {
        c[i] = idx % p;
        idx /= p;
    }
    trim(c);
    return c;
}

std::uint32_t encode(const UPoly& c, unsigned p) {
    std::uint32_t idx = 0;
    for (std::size_t i = c.size(); i-- > 0;) idx = idx * p + c[i];
    return idx;
}

}  // namespace

FqField::FqField(FieldSpec spec) : spec_(std::move(spec)) {
    if (!is_prime(spec_.p)) throw ValidationError("p = " + std::to_string(spec_.p) + " is not prime");
    if (spec_.ext_degree < 1) throw ValidationError("ext_degree must be >= 1");

    unsigned long long q = 1;
    for (unsigned i = 0; i < spec_.ext_degree; ++i) {
        q *= spec_.p;
        if (q > kMaxQ) throw ValidationError("field too large for table-based arithmetic (q > 2^20)");
    }
    q_ = (std::uint32_t)q;

    if (spec_.ext_degree == 1) {
        if (!spec_.modulus.empty()) throw ValidationError("modulus must be absent when ext_degree = 1");
    } else {
        if (spec_.modulus.empty()) {
            // Canonical choice: smallest monic irreducible of the right degree
            // in index order.
            const unsigned k = spec_.ext_degree;
            std::uint32_t span = 1;
            for (unsigned i = 0; i < k; ++i) span *= spec_.p;
            for (std::uint32_t low = 0; low < span; ++low) {
                UPoly m = decode(low, spec_.p, k);
                m.resize(k + 1, 0);
                m[k] = 1;
                if (is_irreducible(m, spec_.p)) {
                    spec_.modulus.assign(m.begin(), m.end());
                    break;
                }
            }
        }
        if (spec_.modulus.size() != spec_.ext_degree + 1)
            throw ValidationError("modulus must have degree ext_degree");
        for (auto& c : spec_.modulus) c %= spec_.p;
        if (spec_.modulus.back() == 0) throw ValidationError("modulus must be monic of degree ext_degree");
        UPoly m(spec_.modulus.begin(), spec_.modulus.end());
        if (!is_irreducible(m, spec_.p)) throw ValidationError("modulus is not irreducible over F_p");
    }
    build_tables();
}

FqElem FqField::mul_raw(FqElem a, FqElem b) const {
    const unsigned p = spec_.p;
    if (spec_.ext_degree == 1) return (FqElem)((unsigned long long)a * b % p);
    UPoly pa = decode(a, p, spec_.ext_degree);
    UPoly pb = decode(b, p, spec_.ext_degree);
    UPoly m(spec_.modulus.begin(), spec_.modulus.end());
    return encode(mod_poly(mul_mod_p(pa, pb, p), m, p), p);
}

void FqField::build_tables() {
    const std::uint32_t n = q_ - 1;
    // Factor the unit group order once for order tests.
    std::vector<std::uint32_t> prime_divs;
    {
        std::uint32_t m = n;
        for (std::uint32_t d = 2; d * d <= m; ++d)
            if (m % d == 0) {
                prime_divs.push_back(d);
                while (m % d == 0) m /= d;
            }
        if (m > 1) prime_divs.push_back(m);
    }
    auto pow_raw = [&](FqElem a, std::uint32_t e) {
        FqElem r = 1;
        while (e) {
            if (e & 1) r = mul_raw(r, a);
            e >>= 1;
            if (e) a = mul_raw(a, a);
        }
        return r;
    };
    generator_ = 1;
    for (FqElem g = 1; g < q_; ++g) {
        bool ok = true;
        for (auto l : prime_divs)
            if (pow_raw(g, n / l) == 1) {
                ok = false;
                break;
            }
        if (ok || n == 1) {
            generator_ = g;
            break;
        }
    }
    exp_table_.assign(n, 1);
    log_table_.assign(q_, 0);
    FqElem cur = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
        exp_table_[i] = cur;
        log_table_[cur] = i;
        cur = mul_raw(cur, generator_);
    }
}

FqElem FqField::add(FqElem a, FqElem b) const {
    const unsigned p = spec_.p;
    if (spec_.ext_degree == 1) return (a + b) % p;
    FqElem r = 0, mult = 1;
    for (unsigned i = 0; i < spec_.ext_degree; ++i) {
        r += mult * ((a % p + b % p) % p);
        a /= p;
        b /= p;
        mult *= p;
    }
    return r;
}

FqElem FqField::neg(FqElem a) const {
    const unsigned p = spec_.p;
    if (spec_.ext_degree == 1) return a == 0 ? 0 : p - a;
    FqElem r = 0, mult = 1;
    for (unsigned i = 0; i < spec_.ext_degree; ++i) {
        unsigned d = a % p;
        r += mult * (d == 0 ? 0 : p - d);
        a /= p;
        mult *= p;
    }
    return r;
}

FqElem FqField::sub(FqElem a, FqElem b) const { return add(a, neg(b)); }

FqElem FqField::mul(FqElem a, FqElem b) const {
    if (a == 0 || b == 0) return 0;
    std::uint64_t e = (std::uint64_t)log_table_[a] + log_table_[b];
    return exp_table_[e % (q_ - 1)];
}

FqElem FqField::inv(FqElem a) const {
    if (a == 0) throw ZeroArgument("inverse of zero field element");
    std::uint32_t l = log_table_[a];
    return exp_table_[l == 0 ? 0 : q_ - 1 - l];
}

FqElem FqField::div(FqElem a, FqElem b) const { return mul(a, inv(b)); }

FqElem FqField::pow(FqElem a, long long e) const {
    if (a == 0) {
        if (e < 0) throw ZeroArgument("negative power of zero");
        return e == 0 ? 1 : 0;
    }
    long long n = q_ - 1;
    long long r = ((e % n) + n) % n;
    std::uint64_t l = (std::uint64_t)log_table_[a] * (std::uint64_t)r % (std::uint64_t)n;
    return exp_table_[l];
}

FqElem FqField::from_int(long long n) const {
    long long p = spec_.p;
    return (FqElem)(((n % p) + p) % p);
}

FqElem FqField::from_coeffs(const std::vector<long long>& cs) const {
    if (cs.size() > spec_.ext_degree) throw ValidationError("too many u-coefficients for this field");
    FqElem r = 0, mult = 1;
    for (std::size_t i = 0; i < spec_.ext_degree; ++i) {
        long long c = i < cs.size() ? cs[i] : 0;
        r += mult * from_int(c);
        mult *= spec_.p;
    }
    return r;
}

std::vector<unsigned> FqField::coeffs(FqElem a) const {
    std::vector<unsigned> c(spec_.ext_degree);
    for (unsigned i = 0; i < spec_.ext_degree; ++i) {
        c[i] = a % spec_.p;
        a /= spec_.p;
    }
    return c;
}

std::uint32_t FqField::dlog(FqElem a) const {
    if (a == 0) throw ZeroArgument("discrete log of zero");
    return log_table_[a];
}

std::string FqField::to_string(FqElem a) const {
    if (spec_.ext_degree == 1) return std::to_string(a);
    auto c = coeffs(a);
    std::string s;
    for (unsigned i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        if (!s.empty()) s += "+";
        if (i == 0)
            s += std::to_string(c[i]);
        else {
            if (c[i] != 1) s += std::to_string(c[i]) + "*";
            s += "u";
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s.empty() ? "0" : s;
}

FqFieldPtr make_field(FieldSpec spec) { return std::make_shared<const FqField>(std::move(spec)); }

FqFieldPtr make_prime_field(unsigned p) { return make_field(FieldSpec{p, 1, {}}); }

}  // namespace charp
