#include "charp/multdep.hpp"

#include <algorithm>
#include <functional>

#include "charp/multgroup.hpp"

namespace charp {

namespace {

using RelationCheck = std::function<bool(const std::vector<Int>&)>;

/// Content reduction must keep the vector a relation: dividing out torsion
/// order would break the constant-part congruence (the primitive part of a
/// genuine relation need not be one).  Reduce by valid prime factors only,
/// then sign-normalize.
void canonicalize_relation(std::vector<Int>& k, const RelationCheck& still_relation) {
    Int content(0);
    for (const auto& v : k) content = gcd(content, v);
    if (content > 1) {
        for (Int p(2); p * p <= content;) {
            if (content % p == 0) {
                std::vector<Int> reduced = k;
                for (auto& v : reduced) v /= p;
                if (still_relation(reduced)) {
                    k = std::move(reduced);
                    content /= p;
                    continue;
                }
                while (content % p == 0) content /= p;
            }
            ++p;
        }
        if (content > 1) {
            std::vector<Int> reduced = k;
            for (auto& v : reduced) v /= content;
            if (still_relation(reduced)) k = std::move(reduced);
        }
    }
    for (const auto& v : k) {
        if (v == 0) continue;
        if (v < 0)
            for (auto& w : k) w = -w;
        break;
    }
}

bool is_zero_vec(const std::vector<Int>& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

int cmp_vec(const std::vector<Int>& a, const std::vector<Int>& b) {
    Int linf_a(0), linf_b(0), l1_a(0), l1_b(0);
    for (const auto& v : a) {
        linf_a = std::max(linf_a, Int(abs(v)));
        l1_a += abs(v);
    }
    for (const auto& v : b) {
        linf_b = std::max(linf_b, Int(abs(v)));
        l1_b += abs(v);
    }
    if (linf_a != linf_b) return linf_a < linf_b ? -1 : 1;
    if (l1_a != l1_b) return l1_a < l1_b ? -1 : 1;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

/// Pick the canonical smallest nonzero relation from a lattice given by
/// generator rows: bounded enumeration of small combinations, compared by
/// (L_inf, L_1, lex) after sign and validity-checked content normalization.
std::optional<std::vector<Int>> smallest_relation(const ZMat& rows, std::size_t n,
                                                  const RelationCheck& still_relation) {
    if (rows.rows() == 0) return std::nullopt;
    const std::size_t kdim = std::min<std::size_t>(rows.rows(), 6);
    std::optional<std::vector<Int>> best;
    std::vector<long> c(kdim, -3);
    while (true) {
        std::vector<Int> k(n, Int(0));
        for (std::size_t i = 0; i < kdim; ++i)
            if (c[i] != 0)
                for (std::size_t j = 0; j < n; ++j) k[j] += Int(c[i]) * rows(i, j);
        if (!is_zero_vec(k)) {
            canonicalize_relation(k, still_relation);
            if (!best || cmp_vec(k, *best) < 0) best = k;
        }
        std::size_t i = 0;
        while (i < kdim && ++c[i] > 3) c[i++] = -3;
        if (i == kdim) break;
    }
    // the remaining generator rows beyond the enumeration cap still count
    for (std::size_t i = kdim; i < rows.rows(); ++i) {
        std::vector<Int> k = rows.row(i);
        if (is_zero_vec(k)) continue;
        canonicalize_relation(k, still_relation);
        if (!best || cmp_vec(k, *best) < 0) best = k;
    }
    return best;
}

/// Generator rows of {c in Z^k : sum c_i a_i == 0 mod n}.
ZMat congruence_kernel(const std::vector<Int>& a, const Int& n) {
    const std::size_t k = a.size();
    ZMat col(k + 1, 1);
    for (std::size_t i = 0; i < k; ++i) col(i, 0) = a[i];
    col(k, 0) = n;
    ZMat ker = left_kernel(col);  // rows (c, z) with sum c_i a_i + z n = 0
    ZMat out(ker.rows(), k);
    for (std::size_t i = 0; i < ker.rows(); ++i)
        for (std::size_t j = 0; j < k; ++j) out(i, j) = ker(i, j);
    return out;
}

}  // namespace

DependenceResult mult_dependence(const std::vector<RatFunc>& gs, std::uint64_t seed) {
    for (const auto& g : gs)
        if (g.is_zero()) throw ZeroArgument("multiplicative dependence of zero");
    if (gs.empty()) return {};

    GroupSpec joint(gs, seed);
    const auto& F = joint.field();
    const Int order((long)F->unit_order());

    ZMat kernel = left_kernel(joint.divisor_matrix());
    if (kernel.rows() == 0) return {};

    // constant parts along the kernel directions, in dlog coordinates
    std::vector<Int> kdots(kernel.rows(), Int(0));
    for (std::size_t i = 0; i < kernel.rows(); ++i)
        for (std::size_t j = 0; j < gs.size(); ++j)
            kdots[i] += kernel(i, j) * Int((long)F->dlog(joint.constant_parts()[j]));

    ZMat cs = congruence_kernel(kdots, order);
    ZMat rel_rows(cs.rows(), gs.size());
    for (std::size_t i = 0; i < cs.rows(); ++i)
        for (std::size_t j = 0; j < gs.size(); ++j) {
            Int acc(0);
            for (std::size_t l = 0; l < kernel.rows(); ++l) acc += cs(i, l) * kernel(l, j);
            rel_rows(i, j) = acc;
        }

    std::vector<Int> dlogs(gs.size());
    for (std::size_t j = 0; j < gs.size(); ++j) dlogs[j] = (long)F->dlog(joint.constant_parts()[j]);
    auto is_relation = [&](const std::vector<Int>& k) {
        // divisor part stays zero under scaling; only the congruence can break
        Int acc(0);
        for (std::size_t j = 0; j < k.size(); ++j) acc += k[j] * dlogs[j];
        return acc % order == 0;
    };
    auto rel = smallest_relation(rel_rows, gs.size(), is_relation);
    if (!rel) return {};

    DependenceResult out;
    out.dependent = true;
    out.relation = *rel;
    // soundness: the certificate multiplies out to exactly 1
    RatFunc prod = RatFunc::from_int(F, 1);
    for (std::size_t j = 0; j < gs.size(); ++j)
        if (out.relation[j] != 0) prod = prod * gs[j].pow(out.relation[j].get_si());
    if (!prod.is_one()) throw ValidationError("dependence relation failed exact verification");
    return out;
}

DependenceResult mult_dependence_functionals(const std::vector<MonomialFunctional>& fs, const GroupSpec& g,
                                             std::size_t dim) {
    const std::size_t n = fs.size();
    const std::size_t m = g.num_gens();
    for (const auto& f : fs)
        if (f.powers.size() != dim || f.kappa.size() != m)
            throw DimensionMismatch("functional shape mismatch");
    if (n == 0) return {};
    const auto& F = g.field();
    const Int order((long)F->unit_order());

    // Relation lattice of G itself: kernel of the divisor matrix meeting the
    // constant congruence (exponent vectors of the identity).
    ZMat gker = left_kernel(g.divisor_matrix());
    std::vector<Int> gdots(gker.rows(), Int(0));
    for (std::size_t i = 0; i < gker.rows(); ++i)
        for (std::size_t j = 0; j < m; ++j)
            gdots[i] += gker(i, j) * Int((long)F->dlog(g.constant_parts()[j]));
    ZMat gcs = congruence_kernel(gdots, order);
    ZMat rel_lat(gcs.rows(), m);  // rows: exponent vectors e with prod h^e = 1
    for (std::size_t i = 0; i < gcs.rows(); ++i)
        for (std::size_t j = 0; j < m; ++j) {
            Int acc(0);
            for (std::size_t l = 0; l < gker.rows(); ++l) acc += gcs(i, l) * gker(l, j);
            rel_lat(i, j) = acc;
        }

    // [k | y] kernel of [[powers, kappa], [0, -rel_lat]]: torus exponents
    // cancel and the kappa product lands in the relation lattice.
    ZMat sys(n + rel_lat.rows(), dim + m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < dim; ++j) sys(i, j) = (long)fs[i].powers[j];
        for (std::size_t j = 0; j < m; ++j) sys(i, dim + j) = fs[i].kappa[j];
    }
    for (std::size_t i = 0; i < rel_lat.rows(); ++i)
        for (std::size_t j = 0; j < m; ++j) sys(n + i, dim + j) = -rel_lat(i, j);

    ZMat ker = left_kernel(sys);
    // project to the k block and drop zero projections
    std::vector<std::vector<Int>> rows;
    for (std::size_t i = 0; i < ker.rows(); ++i) {
        std::vector<Int> k(n);
        for (std::size_t j = 0; j < n; ++j) k[j] = ker(i, j);
        if (!is_zero_vec(k)) rows.push_back(std::move(k));
    }
    if (rows.empty()) return {};
    ZMat rel_rows(rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) rel_rows(i, j) = rows[i][j];

    auto is_relation = [&](const std::vector<Int>& k) {
        std::vector<Int> es(dim, Int(0));
        ExponentVector ks(m, Int(0));
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t c = 0; c < dim; ++c) es[c] += k[j] * Int((long)fs[j].powers[c]);
            for (std::size_t c = 0; c < m; ++c) ks[c] += k[j] * fs[j].kappa[c];
        }
        return is_zero_vec(es) && g.materialize(ks).is_one();
    };
    auto rel = smallest_relation(rel_rows, n, is_relation);
    if (!rel || is_zero_vec(*rel)) return {};

    // verify: exponents cancel coordinatewise and the constants multiply to 1
    std::vector<Int> exp_sum(dim, Int(0));
    ExponentVector kap_sum(m, Int(0));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t c = 0; c < dim; ++c) exp_sum[c] += (*rel)[j] * Int((long)fs[j].powers[c]);
        for (std::size_t c = 0; c < m; ++c) kap_sum[c] += (*rel)[j] * fs[j].kappa[c];
    }
    if (!is_zero_vec(exp_sum) || !g.materialize(kap_sum).is_one())
        throw ValidationError("functional dependence relation failed verification");

    return {true, *rel};
}

long long dichotomy_threshold(long long d, long long e, long long r) {
    if (d < 0 || e < 0 || r < 0) throw ValidationError("threshold arguments must be nonnegative");
    Int base((long)(d + e + 1)), acc(1);
    for (long long i = 0; i < r; ++i) acc *= base;
    if (!acc.fits_slong_p()) throw ValidationError("threshold exceeds the integer range");
    return acc.get_si();
}

}  // namespace charp
