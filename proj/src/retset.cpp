#include "charp/retset.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace charp {

namespace {

void validate_vars(const ExprPtr& e, std::size_t dim, const char* what) {
    for (const auto& name : expr_point_vars(e)) {
        if (name == "x" && dim == 1) continue;
        bool ok = name.size() > 1 && name[0] == 'x';
        std::size_t idx = 0;
        for (std::size_t i = 1; ok && i < name.size(); ++i) {
            if (!std::isdigit((unsigned char)name[i])) ok = false;
            idx = idx * 10 + (std::size_t)(name[i] - '0');
        }
        if (!ok || idx < 1 || idx > dim)
            throw ValidationError(std::string(what) + ": variable '" + name + "' outside x1..x" +
                                  std::to_string(dim));
    }
}

long long point_height(const std::vector<RatFunc>& pt) {
    long long h = 0;
    for (const auto& c : pt)
        if (!c.is_zero()) h = std::max(h, weil_height(c));
    return h;
}

/// Laurent-monomial normal form of an expression: coefficient in F_q(t)
/// and integer exponents of x1..xd.  Fails on any additive structure.
struct Monomial {
    RatFunc coeff;
    std::vector<long long> powers;
};

std::optional<Monomial> monomialize(const ExprPtr& e, const FqFieldPtr& F, std::size_t dim) {
    switch (e->kind) {
        case Expr::Kind::Int:
            return Monomial{RatFunc::from_int(F, e->ival), std::vector<long long>(dim, 0)};
        case Expr::Kind::Var: {
            if (e->name == "t" || e->name == "u")
                return Monomial{eval_scalar(e, F), std::vector<long long>(dim, 0)};
            std::vector<long long> p(dim, 0);
            if (e->name == "x" && dim == 1) {
                p[0] = 1;
                return Monomial{RatFunc::from_int(F, 1), p};
            }
            if (e->name.size() > 1 && e->name[0] == 'x') {
                std::size_t idx = 0;
                for (std::size_t i = 1; i < e->name.size(); ++i) {
                    if (!std::isdigit((unsigned char)e->name[i])) return std::nullopt;
                    idx = idx * 10 + (std::size_t)(e->name[i] - '0');
                }
                if (idx >= 1 && idx <= dim) {
                    p[idx - 1] = 1;
                    return Monomial{RatFunc::from_int(F, 1), p};
                }
            }
            return std::nullopt;
        }
        case Expr::Kind::Mul: {
            auto a = monomialize(e->lhs, F, dim), b = monomialize(e->rhs, F, dim);
            if (!a || !b) return std::nullopt;
            for (std::size_t i = 0; i < dim; ++i) a->powers[i] += b->powers[i];
            a->coeff = a->coeff * b->coeff;
            return a;
        }
        case Expr::Kind::Div: {
            auto a = monomialize(e->lhs, F, dim), b = monomialize(e->rhs, F, dim);
            if (!a || !b || b->coeff.is_zero()) return std::nullopt;
            for (std::size_t i = 0; i < dim; ++i) a->powers[i] -= b->powers[i];
            a->coeff = a->coeff / b->coeff;
            return a;
        }
        case Expr::Kind::Neg: {
            auto a = monomialize(e->lhs, F, dim);
            if (!a) return std::nullopt;
            a->coeff = -a->coeff;
            return a;
        }
        case Expr::Kind::Pow: {
            auto a = monomialize(e->lhs, F, dim);
            if (!a) return std::nullopt;
            if (a->coeff.is_zero()) return e->ival >= 0 ? a : std::nullopt;
            for (auto& p : a->powers) p *= e->ival;
            a->coeff = a->coeff.pow(e->ival);
            return a;
        }
        case Expr::Kind::Add:
        case Expr::Kind::Sub:
            return std::nullopt;
    }
    return std::nullopt;
}

std::string exps_string(const ExponentVector& e) {
    std::string s = "G^[";
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (i) s += ",";
        s += e[i].get_str();
    }
    return s + "]";
}

}  // namespace

RationalSystem make_rational_system(const FqFieldPtr& field, std::size_t dim, std::vector<ExprPtr> phi,
                                    ExprPtr f, std::vector<RatFunc> x0) {
    if (dim < 1) throw ValidationError("system dimension must be >= 1");
    if (phi.size() != dim) throw DimensionMismatch("phi needs one coordinate map per dimension");
    if (x0.size() != dim) throw DimensionMismatch("x0 needs one coordinate per dimension");
    for (const auto& e : phi) validate_vars(e, dim, "phi");
    validate_vars(f, dim, "f");
    return RationalSystem{field, dim, std::move(phi), std::move(f), std::move(x0)};
}

RationalSystem parse_rational_system(const FqFieldPtr& field, std::size_t dim,
                                     const std::vector<std::string>& phi, const std::string& f,
                                     const std::vector<std::string>& x0) {
    std::vector<ExprPtr> phis;
    for (const auto& s : phi) phis.push_back(parse_expression(s));
    std::vector<RatFunc> pts;
    for (const auto& s : x0) pts.push_back(parse_scalar(s, field));
    return make_rational_system(field, dim, std::move(phis), parse_expression(f), std::move(pts));
}

IterateResult iterate_rational(const RationalSystem& s, unsigned long long n, long long height_budget) {
    std::vector<RatFunc> pt = s.x0;
    for (unsigned long long step = 1; step <= n; ++step) {
        if (point_height(pt) > height_budget)
            throw ValidationError("iterate_rational: height budget exceeded at step " +
                                  std::to_string(step - 1));
        std::vector<RatFunc> next;
        next.reserve(s.dim);
        for (const auto& e : s.phi) {
            auto v = eval_at_point(e, s.field, pt);
            if (!v) return IterateResult{std::nullopt, step};
            next.push_back(std::move(*v));
        }
        pt = std::move(next);
    }
    return IterateResult{std::move(pt), 0};
}

ReturnScan return_set(const RationalSystem& s, const GroupSpec& g, unsigned long long horizon,
                      long long height_budget, bool capture_records) {
    ReturnScan scan;

    // Monomial fast path: exponent-level orbit when the whole system and all
    // constants are certified over G.
    [&]() {
        std::vector<Monomial> phis;
        for (const auto& e : s.phi) {
            auto m = monomialize(e, s.field, s.dim);
            if (!m || m->coeff.is_zero()) return;
            phis.push_back(std::move(*m));
        }
        auto fm = monomialize(s.f, s.field, s.dim);
        if (!fm || fm->coeff.is_zero()) return;
        ZMat expo(s.dim, s.dim);
        for (std::size_t i = 0; i < s.dim; ++i)
            for (std::size_t j = 0; j < s.dim; ++j) expo(i, j) = (long)phis[i].powers[j];
        if (zmat_det(expo) == 0) return;
        std::vector<ExponentVector> coeff, coords;
        for (std::size_t i = 0; i < s.dim; ++i) {
            auto c = g.membership(phis[i].coeff);
            if (!c) return;
            coeff.push_back(std::move(*c));
            if (s.x0[i].is_zero()) return;
            auto x = g.membership(s.x0[i]);
            if (!x) return;
            coords.push_back(std::move(*x));
        }
        auto kappa = g.membership(fm->coeff);
        if (!kappa) return;

        scan.monomial_fast_path = true;
        MonomialFunctional f{*kappa, fm->powers};
        TorusPoint p{coords};
        // step matrices are shared across n; advance one application at a time
        for (unsigned long long n = 0;; ++n) {
            ExponentVector val = f.kappa;
            for (std::size_t j = 0; j < s.dim; ++j)
                for (std::size_t i = 0; i < val.size(); ++i)
                    val[i] += Int((long)f.powers[j]) * p.coords[j][i];
            scan.members.push_back(n);
            if (capture_records) scan.records.push_back({n, true, true, exps_string(val)});
            scan.scanned_to = n;
            if (n == horizon) break;
            // one exponent step: E -> expo E + C
            std::vector<ExponentVector> next(s.dim, ExponentVector(g.num_gens(), Int(0)));
            for (std::size_t i = 0; i < s.dim; ++i) {
                for (std::size_t j = 0; j < s.dim; ++j) {
                    const Int& a = expo(i, j);
                    if (a == 0) continue;
                    for (std::size_t l = 0; l < g.num_gens(); ++l) next[i][l] += a * p.coords[j][l];
                }
                for (std::size_t l = 0; l < g.num_gens(); ++l) next[i][l] += coeff[i][l];
            }
            p.coords = std::move(next);
        }
        scan.stop = ReturnScan::Stop::Completed;
    }();
    if (scan.monomial_fast_path) return scan;

    std::vector<RatFunc> pt = s.x0;
    for (unsigned long long n = 0;; ++n) {
        auto value = eval_at_point(s.f, s.field, pt);
        bool defined = value.has_value();
        bool member = false;
        std::optional<ExponentVector> cert;
        if (defined && !value->is_zero()) {
            cert = g.membership(*value);
            member = cert.has_value();
        }
        if (member) scan.members.push_back(n);
        if (capture_records)
            scan.records.push_back({n, defined, member, defined ? to_string(*value) : "undefined"});
        scan.scanned_to = n;
        if (n == horizon) {
            scan.stop = ReturnScan::Stop::Completed;
            break;
        }
        if (point_height(pt) > height_budget) {
            scan.stop = ReturnScan::Stop::HeightBudget;
            scan.stop_step = n;
            break;
        }
        std::vector<RatFunc> next;
        bool hit = false;
        for (const auto& e : s.phi) {
            auto v = eval_at_point(e, s.field, pt);
            if (!v) {
                hit = true;
                break;
            }
            next.push_back(std::move(*v));
        }
        if (hit) {
            scan.stop = ReturnScan::Stop::Indeterminacy;
            scan.stop_step = n + 1;
            break;
        }
        pt = std::move(next);
    }
    return scan;
}

ReturnSetReport structure_fit(const std::vector<unsigned long long>& members, unsigned long long horizon,
                              const FitParams& params) {
    for (auto m : members)
        if (m > horizon) throw ValidationError("member beyond the horizon");

    ReturnSetReport rep;
    rep.horizon = horizon;
    rep.members = members;
    std::sort(rep.members.begin(), rep.members.end());
    rep.members.erase(std::unique(rep.members.begin(), rep.members.end()), rep.members.end());

    std::vector<char> in(horizon + 1, 0), covered(horizon + 1, 0);
    for (auto m : rep.members) in[m] = 1;

    for (unsigned long long b = 1; b <= params.b_max && b <= horizon + 1; ++b) {
        for (unsigned long long a = 0; a < b; ++a) {
            std::vector<unsigned long long> cls;
            for (unsigned long long v = a; v <= horizon; v += b) cls.push_back(v);
            if (cls.empty()) continue;
            const std::size_t L = cls.size();
            // largest fully-present suffix of the class
            std::size_t first_full = L;
            while (first_full > 0 && in[cls[first_full - 1]]) --first_full;
            const std::size_t tail_len = L - first_full;
            const std::size_t need =
                std::max<std::size_t>(params.min_tail, (L * params.tail_percent + 99) / 100);
            if (tail_len < need) continue;
            bool contributes = false;
            for (std::size_t j = first_full; j < L && !contributes; ++j) contributes = !covered[cls[j]];
            if (!contributes) continue;
            rep.progressions.push_back({cls[first_full], b});
            for (std::size_t j = first_full; j < L; ++j) covered[cls[j]] = 1;
        }
    }

    for (auto m : rep.members)
        if (!covered[m]) rep.residual.push_back(m);

    if (!rep.residual.empty() && rep.residual.size() <= params.singleton_cap) {
        for (auto m : rep.residual) rep.progressions.push_back({m, 0});
        rep.residual.clear();
    }

    // Residual density: the most honest finite surrogate for the limsup is
    // the largest windows available, so take the minimum over a doubling
    // ladder from floor(sqrt(H+1)) up to H.
    if (horizon == 0 || rep.residual.empty()) {
        rep.density_estimate = rep.residual.empty() ? Rat(0, 1) : Rat(1, 1);
        rep.window_schedule = "degenerate";
    } else {
        unsigned long long w0 = (unsigned long long)std::sqrt((double)horizon);
        if (w0 < 1) w0 = 1;
        std::string sched = "min over w in {";
        bool first = true;
        std::optional<Rat> best;
        for (unsigned long long w = w0;; w *= 2) {
            if (w > horizon) w = horizon;
            Rat d = banach_density_estimate(rep.residual, horizon, w);
            if (!best || d < *best) best = d;
            sched += (first ? "" : ",") + std::to_string(w);
            first = false;
            if (w == horizon) break;
        }
        rep.density_estimate = *best;
        rep.window_schedule = sched + "}";
    }
    return rep;
}

Rat banach_density_estimate(const std::vector<unsigned long long>& members, unsigned long long horizon,
                            unsigned long long window) {
    if (window < 1 || window > horizon) throw ValidationError("window must satisfy 1 <= w <= H");
    std::vector<unsigned long long> ms = members;
    std::sort(ms.begin(), ms.end());
    for (auto m : ms)
        if (m > horizon) throw ValidationError("member beyond the horizon");
    // slide [a, a+window]; two pointers over the sorted members
    std::size_t lo = 0, hi = 0, best = 0;
    for (unsigned long long a = 0; a + window <= horizon; ++a) {
        while (lo < ms.size() && ms[lo] < a) ++lo;
        while (hi < ms.size() && ms[hi] <= a + window) ++hi;
        best = std::max(best, hi - lo);
        if (hi == ms.size() && lo == 0) break;  // window already covers everything
    }
    // |I| has window+1 integer points; the count/window ratio is capped at 1
    // so a full horizon reports density exactly 1.
    if (best > window) best = (std::size_t)window;
    return Rat((long long)best, (long long)window);
}

std::vector<long long> form_set_members(const FormSetSpec& spec, long long horizon, long long term_factor) {
    if (spec.d.size() != spec.k.size() || spec.d.empty())
        throw DimensionMismatch("form set needs matching d and k lists");
    if (horizon < 0) return {};
    const mpq_class cap = mpq_class((long)term_factor) * mpq_class((long)(horizon + 1));
    const mpq_class sum_cap = cap * (long)spec.d.size();

    std::set<mpq_class> sums{mpq_class(0)};
    for (std::size_t i = 0; i < spec.d.size(); ++i) {
        // values of d_i p^{k_i n_i} with magnitude <= cap
        std::vector<mpq_class> vals;
        mpq_class di((long)spec.d[i].num, (long)spec.d[i].den);
        di.canonicalize();
        if (di == 0 || spec.k[i] == 0) {
            vals.push_back(di);
        } else {
            mpz_class step = 1;
            for (unsigned j = 0; j < spec.k[i]; ++j) step *= spec.p;
            mpq_class v = di;
            while (abs(v) <= cap) {
                vals.push_back(v);
                v *= step;
                if (v == 0) break;
            }
            if (vals.empty()) vals.push_back(di);  // keep at least n_i = 0
        }
        std::set<mpq_class> next;
        for (const auto& s : sums)
            for (const auto& v : vals) {
                mpq_class n = s + v;
                if (abs(n) <= sum_cap) next.insert(n);
            }
        sums = std::move(next);
    }

    std::vector<long long> out;
    for (const auto& s : sums) {
        if (s.get_den() != 1) continue;
        if (s < 0 || s > mpq_class((long)horizon)) continue;
        out.push_back((long long)s.get_num().get_si());
    }
    std::sort(out.begin(), out.end());
    return out;
}

long long digit_sum(long long n, unsigned p) {
    long long s = 0;
    while (n > 0) {
        s += n % p;
        n /= p;
    }
    return s;
}

DigitReport digit_solutions(const DigitQuery& q) {
    if (q.p < 2) throw ValidationError("p must be a prime >= 2");
    DigitReport rep;
    long long next_decade = 10;
    for (long long n = 0; n <= q.horizon; ++n) {
        if (n > 0) {
            long long sq = n * n;
            long long s = digit_sum(sq, q.p);
            bool member = s <= (long long)q.r && (long long)q.r <= sq &&
                          ((long long)q.r - s) % (long long)(q.p - 1) == 0;
            if (member) rep.solutions.push_back(n);
        }
        if (n == next_decade || n == q.horizon) {
            long long upto = n;
            std::size_t count = rep.solutions.size();
            rep.running_density.emplace_back(upto, Rat((long long)count, upto > 0 ? upto : 1));
            if (n == next_decade) next_decade *= 10;
        }
    }
    return rep;
}

}  // namespace charp
