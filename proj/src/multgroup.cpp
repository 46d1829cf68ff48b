#include "charp/multgroup.hpp"

#include <algorithm>
#include <map>

namespace charp {

namespace {

long long to_ll(const Int& v) {
    if (!v.fits_slong_p()) throw ValidationError("integer too large at desk scale: " + v.get_str());
    return v.get_si();
}

// Multiplicity of pi in f (f nonzero polynomial).
long long poly_multiplicity(const Poly& f, const Poly& pi) {
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

GroupSpec::GroupSpec(std::vector<RatFunc> gens, std::uint64_t seed)
    : gens_(std::move(gens)), seed_(seed) {
    if (gens_.empty()) throw ValidationError("group needs at least one generator");
    field_ = gens_.front().field();
    for (const auto& g : gens_) {
        if (g.is_zero()) throw ZeroArgument("group generator is zero");
        if (!(*g.field() == *field_)) throw ValidationError("generators live in different fields");
    }

    // Joint finite support, then infinity if any generator sees it.
    std::vector<Place> sup;
    std::vector<Factorization> num_facs, den_facs;
    for (const auto& g : gens_) {
        num_facs.push_back(factor_poly(g.num(), seed_));
        den_facs.push_back(factor_poly(g.den(), seed_));
        for (const auto& pf : num_facs.back().factors) sup.push_back(Place::finite(pf.factor));
        for (const auto& pf : den_facs.back().factors) sup.push_back(Place::finite(pf.factor));
    }
    std::sort(sup.begin(), sup.end(), [](const Place& a, const Place& b) { return place_cmp(a, b) < 0; });
    sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
    bool has_inf = false;
    for (const auto& g : gens_)
        if (g.num().degree() != g.den().degree()) has_inf = true;
    if (has_inf) sup.push_back(Place::infinity());
    support_ = std::move(sup);

    divisor_ = ZMat(gens_.size(), support_.size());
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        for (std::size_t j = 0; j < support_.size(); ++j) {
            const Place& v = support_[j];
            if (v.at_infinity)
                divisor_(i, j) = (long)(gens_[i].den().degree() - gens_[i].num().degree());
            else
                divisor_(i, j) =
                    (long)(poly_multiplicity(gens_[i].num(), *v.pi) - poly_multiplicity(gens_[i].den(), *v.pi));
        }
        constants_.push_back(num_facs[i].constant);  // denominator is monic
        constant_dlogs_.push_back(Int(field_->dlog(num_facs[i].constant)));
    }
    hnf_ = hnf(divisor_);
    rank_ = hnf_.rank;
}

std::optional<std::vector<Int>> GroupSpec::divisor_over_support(const RatFunc& x) const {
    if (x.is_zero()) throw ZeroArgument("divisor of zero");
    // Trial-divide at the support places only, then check the residual is a
    // unit; no factorization of x is ever needed.
    std::vector<Int> d(support_.size(), Int(0));
    Poly num = x.num(), den = x.den();
    for (std::size_t j = 0; j < support_.size(); ++j) {
        const Place& v = support_[j];
        if (v.at_infinity) continue;
        long long vn = 0, vd = 0;
        while (num.degree() >= v.pi->degree()) {
            auto [q, r] = num.divmod(*v.pi);
            if (!r.is_zero()) break;
            ++vn;
            num = std::move(q);
        }
        while (den.degree() >= v.pi->degree()) {
            auto [q, r] = den.divmod(*v.pi);
            if (!r.is_zero()) break;
            ++vd;
            den = std::move(q);
        }
        d[j] = (long)(vn - vd);
    }
    if (num.degree() > 0 || den.degree() > 0) return std::nullopt;  // support escapes the group's
    long long vinf = (long long)x.den().degree() - x.num().degree();
    if (!support_.empty() && support_.back().at_infinity)
        d.back() = (long)vinf;
    else if (vinf != 0)
        return std::nullopt;
    return d;
}

RatFunc GroupSpec::materialize(const ExponentVector& e) const {
    if (e.size() != gens_.size()) throw DimensionMismatch("exponent vector length mismatch");
    RatFunc r = RatFunc::from_int(field_, 1);
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] != 0) r = r * gens_[i].pow(to_ll(e[i]));
    return r;
}

std::optional<ExponentVector> GroupSpec::membership(const RatFunc& x) const {
    if (x.is_zero()) throw ZeroArgument("membership of zero");
    auto dx = divisor_over_support(x);
    if (!dx) return std::nullopt;

    auto e0 = solve_left(divisor_, *dx);
    if (!e0) return std::nullopt;

    // Constant-part congruence over the solution coset, in dlog coordinates
    // of the cyclic group F_q* (order q-1).
    const Int order(field_->unit_order());
    FqElem cx = x.num().leading();  // denominator is monic
    Int target(field_->dlog(cx));
    Int base(0);
    for (std::size_t i = 0; i < e0->size(); ++i) base += (*e0)[i] * constant_dlogs_[i];

    ZMat kernel = left_kernel(divisor_);
    std::vector<Int> kdots(kernel.rows(), Int(0));
    for (std::size_t k = 0; k < kernel.rows(); ++k)
        for (std::size_t i = 0; i < gens_.size(); ++i) kdots[k] += kernel(k, i) * constant_dlogs_[i];

    auto ts = solve_linear_congruence(kdots, target - base, order);
    if (!ts) return std::nullopt;

    ExponentVector e = *e0;
    for (std::size_t k = 0; k < kernel.rows(); ++k)
        for (std::size_t i = 0; i < gens_.size(); ++i) e[i] += (*ts)[k] * kernel(k, i);

    if (!(materialize(e) == x)) throw ValidationError("membership certificate failed exact verification");
    return e;
}

PlaceAssignment select_places(const GroupSpec& g) {
    const std::size_t r = g.rank();
    if (r == 0) throw RankZero();
    const std::size_t s = g.support().size();
    if (r > 8 || s > 20) throw ValidationError("select_places: support too large at desk scale");

    HnfResult h = hnf(g.divisor_matrix());
    ZMat B(r, s), UB(r, g.num_gens());
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < s; ++j) B(i, j) = h.H(i, j);
        for (std::size_t j = 0; j < g.num_gens(); ++j) UB(i, j) = h.U(i, j);
    }

    // Search r-subsets of support columns for a diagonal valuation system of
    // minimal index; subsets in lexicographic order for reproducibility.
    std::vector<std::size_t> comb(r);
    for (std::size_t i = 0; i < r; ++i) comb[i] = i;
    std::optional<Int> best_index;
    std::vector<std::size_t> best_cols;
    ZMat best_Y;

    auto advance = [&]() -> bool {
        std::size_t i = r;
        while (i-- > 0) {
            if (comb[i] + (r - i) < s) {
                ++comb[i];
                for (std::size_t j = i + 1; j < r; ++j) comb[j] = comb[j - 1] + 1;
                return true;
            }
        }
        return false;
    };

    do {
        ZMat C(r, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) C(i, j) = B(i, comb[j]);
        Int det = zmat_det(C);
        if (det == 0) continue;

        // Primitive integer row y_i with y_i * C = pairing_i * e_i, from the
        // adjugate rows scaled down to content 1.
        ZMat Y(r, r);
        bool ok = true;
        for (std::size_t i = 0; i < r && ok; ++i) {
            ZMat minor(r - 1, r - 1);
            std::vector<Int> row(r);
            for (std::size_t j = 0; j < r; ++j) {
                std::size_t mi = 0;
                for (std::size_t a = 0; a < r; ++a) {
                    if (a == j) continue;
                    std::size_t mj = 0;
                    for (std::size_t b = 0; b < r; ++b) {
                        if (b == i) continue;
                        minor(mi, mj) = C(a, b);
                        ++mj;
                    }
                    ++mi;
                }
                Int cof = zmat_det(minor);
                if ((i + j) % 2 == 1) cof = -cof;
                row[j] = cof;  // adj(C)(i,j) = cofactor_{j,i}; here row i of adj
            }
            Int content(0);
            for (const auto& v : row) content = gcd(content, v);
            if (content == 0) {
                ok = false;
                break;
            }
            Int pairing = det / content;
            int sign = pairing > 0 ? -1 : 1;  // force the diagonal negative
            for (std::size_t j = 0; j < r; ++j) Y(i, j) = sign * row[j] / content;
        }
        if (!ok) continue;
        Int index = abs(zmat_det(Y));
        if (!best_index || cmp(index, *best_index) < 0) {
            best_index = index;
            best_cols = comb;
            best_Y = Y;
            if (index == 1) break;
        }
    } while (advance());

    if (!best_index) throw ValidationError("select_places: no nonsingular place subset found");

    PlaceAssignment out;
    out.index = *best_index;
    ZMat Z = best_Y * UB;  // exponents in the original generators
    for (std::size_t i = 0; i < r; ++i) {
        ExponentVector z = Z.row(i);
        RatFunc b = g.materialize(z);
        const Place& v = g.support()[best_cols[i]];
        long long pairing = valuation(b, v);
        if (pairing >= 0) throw ValidationError("select_places: internal invariant failure");
        for (std::size_t j = 0; j < r; ++j)
            if (j != i && valuation(g.materialize(Z.row(j)), v) != 0)
                throw ValidationError("select_places: internal invariant failure");
        out.basis.push_back(std::move(b));
        out.basis_exponents.push_back(std::move(z));
        out.places.push_back(v);
        out.pairings.push_back(pairing);
    }
    return out;
}

Rat height_bound_constant(const GroupSpec& g, const PlaceAssignment& a) {
    (void)g;
    if (a.basis.empty()) throw ValidationError("empty place assignment");
    long long c = 0;
    for (std::size_t i = 0; i < a.basis.size(); ++i) {
        long long v = -a.pairings[i] * a.places[i].degree();
        if (c == 0 || v < c) c = v;
    }
    return Rat(c, 1);
}

RecurrencePattern recurrence_membership_pattern(const std::vector<IntRecurrence>& b, const ZMat& lambda,
                                                unsigned long long horizon) {
    const std::size_t m = b.size();
    if (lambda.cols() != m) throw DimensionMismatch("lattice dimension does not match recurrence count");
    for (const auto& rec : b)
        if (rec.order() == 0 || rec.initial.size() != rec.order())
            throw DimensionMismatch("recurrence needs order-many initial values");

    RecurrencePattern out;
    auto idx = lattice_index(lambda);

    if (!idx) {
        // Infinite index: exact bounded scan, flagged uncertified.
        std::vector<std::vector<Int>> pref;
        for (const auto& rec : b) pref.push_back(rec.prefix(horizon + 1));
        for (unsigned long long n = 0; n <= horizon; ++n) {
            std::vector<Int> v(m);
            for (std::size_t i = 0; i < m; ++i) v[i] = pref[i][n];
            bool zero = true;
            for (const auto& c : v) zero &= (c == 0);
            bool member = lambda.rows() == 0 ? zero : in_row_lattice(lambda, v);
            if (member) out.horizon_members.push_back(n);
        }
        out.certified = false;
        return out;
    }

    if (!idx->fits_ulong_p()) throw ValidationError("lattice index too large at desk scale");
    const unsigned long long N = idx->get_ui();

    // Joint state: all recurrence windows mod N.  N Z^m is inside Lambda, so
    // membership of b(n) only depends on b(n) mod N.
    auto reduce = [&](const Int& v) -> unsigned long long {
        Int r = ((v % (long)N) + (long)N) % (long)N;
        return r.get_ui();
    };
    std::vector<std::vector<unsigned long long>> win(m);
    for (std::size_t i = 0; i < m; ++i)
        for (const auto& v : b[i].initial) win[i].push_back(reduce(v));

    std::map<std::vector<unsigned long long>, unsigned long long> seen;
    std::map<std::vector<unsigned long long>, bool> member_memo;
    std::vector<char> members;

    auto is_member = [&](const std::vector<unsigned long long>& v) {
        auto it = member_memo.find(v);
        if (it != member_memo.end()) return it->second;
        std::vector<Int> lift(m);
        for (std::size_t i = 0; i < m; ++i) lift[i] = (long)v[i];
        bool r = in_row_lattice(lambda, lift);
        member_memo.emplace(v, r);
        return r;
    };

    unsigned long long n = 0, rep_start = 0, rep_at = 0;
    while (true) {
        std::vector<unsigned long long> state;
        for (const auto& w : win) state.insert(state.end(), w.begin(), w.end());
        auto [it, inserted] = seen.emplace(std::move(state), n);
        if (!inserted) {
            rep_start = it->second;
            rep_at = n;
            break;
        }
        std::vector<unsigned long long> cur(m);
        for (std::size_t i = 0; i < m; ++i) cur[i] = win[i].front();
        members.push_back(is_member(cur) ? 1 : 0);
        // advance each window one step mod N
        for (std::size_t i = 0; i < m; ++i) {
            const auto& rec = b[i];
            unsigned long long next = 0;
            for (std::size_t j = 0; j < rec.order(); ++j) {
                unsigned long long c = reduce(rec.coeffs[j]);
                next = (next + c * win[i][j]) % N;
            }
            win[i].erase(win[i].begin());
            win[i].push_back(next);
        }
        ++n;
    }

    out.certified = true;
    out.preperiod = rep_start;
    out.period = rep_at - rep_start;
    for (unsigned long long i = 0; i < rep_start; ++i)
        if (members[i]) out.initial_members.push_back(i);
    for (unsigned long long j = 0; j < out.period; ++j)
        if (members[rep_start + j]) out.periodic_residues.push_back(j);
    for (unsigned long long i = 0; i <= horizon; ++i) {
        bool mem = i < rep_start ? members[i] : members[rep_start + (i - rep_start) % out.period];
        if (mem) out.horizon_members.push_back(i);
    }
    return out;
}

}  // namespace charp
