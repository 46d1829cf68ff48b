#include "charp/torusdyn.hpp"

#include <algorithm>

namespace charp {

namespace {

ZMat coords_matrix(const TorusPoint& x, std::size_t m) {
    ZMat e(x.coords.size(), m);
    for (std::size_t i = 0; i < x.coords.size(); ++i) {
        if (x.coords[i].size() != m) throw DimensionMismatch("point certificate length mismatch");
        for (std::size_t j = 0; j < m; ++j) e(i, j) = x.coords[i][j];
    }
    return e;
}

}  // namespace

MonomialMap make_monomial_map(GroupSpecPtr group, ZMat expo, std::vector<ExponentVector> coeff) {
    if (expo.rows() != expo.cols()) throw DimensionMismatch("exponent matrix must be square");
    if (coeff.size() != expo.rows()) throw DimensionMismatch("one coefficient per coordinate required");
    const std::size_t m = group->num_gens();
    for (const auto& c : coeff)
        if (c.size() != m) throw DimensionMismatch("coefficient certificate length mismatch");
    if (zmat_det(expo) == 0) throw ValidationError("monomial map is not dominant (det expo = 0)");
    return MonomialMap{std::move(group), std::move(expo), std::move(coeff)};
}

TorusPoint make_torus_point(const GroupSpecPtr& group, std::vector<ExponentVector> coords) {
    const std::size_t m = group->num_gens();
    for (const auto& c : coords)
        if (c.size() != m) throw DimensionMismatch("point certificate length mismatch");
    return TorusPoint{std::move(coords)};
}

TorusPoint iterate_monomial(const MonomialMap& map, const TorusPoint& x, unsigned long long n) {
    const std::size_t d = map.dim();
    if (x.dim() != d) throw DimensionMismatch("point dimension mismatch");
    const std::size_t m = map.group->num_gens();
    ZMat E = coords_matrix(x, m);

    // Per generator column: (E_j; 1) advances by the augmented matrix
    // [[expo, C_j], [0, 1]].
    ZMat out(d, m);
    for (std::size_t j = 0; j < m; ++j) {
        ZMat aug(d + 1, d + 1);
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) aug(a, b) = map.expo(a, b);
            aug(a, d) = map.coeff[a][j];
        }
        aug(d, d) = 1;
        ZMat p = zmat_pow(aug, n);
        for (std::size_t a = 0; a < d; ++a) {
            Int acc = p(a, d);
            for (std::size_t b = 0; b < d; ++b) acc += p(a, b) * E(b, j);
            out(a, j) = acc;
        }
    }
    TorusPoint r;
    for (std::size_t i = 0; i < d; ++i) r.coords.push_back(out.row(i));
    return r;
}

ExponentVector eval_monomial_functional(const MonomialFunctional& g, const TorusPoint& x) {
    if (g.powers.size() != x.dim()) throw DimensionMismatch("functional dimension mismatch");
    ExponentVector e = g.kappa;
    for (std::size_t j = 0; j < x.dim(); ++j) {
        if (x.coords[j].size() != e.size()) throw DimensionMismatch("certificate length mismatch");
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += Int((long)g.powers[j]) * x.coords[j][i];
    }
    return e;
}

std::vector<RatFunc> materialize_point(const GroupSpec& g, const TorusPoint& x) {
    std::vector<RatFunc> out;
    for (const auto& c : x.coords) out.push_back(g.materialize(c));
    return out;
}

ResidueRecurrence residue_recurrences(const MonomialMap& map, const TorusPoint& x0,
                                      const MonomialFunctional& f, unsigned long long L,
                                      unsigned long long verify_to) {
    if (L < 1) throw ValidationError("L must be >= 1");
    const std::size_t d = map.dim();
    const std::size_t m = map.group->num_gens();
    if (x0.dim() != d || f.powers.size() != d) throw DimensionMismatch("system dimension mismatch");

    // b_{j,i}(n) satisfies the recurrence with characteristic polynomial
    // charpoly(expo^L) * (x - 1); the affine part contributes the root 1.
    std::vector<Int> cl = zmat_charpoly(zmat_pow(map.expo, L));
    std::vector<Int> cfull(cl.size() + 1, Int(0));
    for (std::size_t i = 0; i < cl.size(); ++i) {
        cfull[i + 1] += cl[i];
        cfull[i] -= cl[i];
    }
    const std::size_t order = cfull.size() - 1;  // = d + 1, monic
    std::vector<Int> rec_coeffs(order);
    for (std::size_t i = 0; i < order; ++i) rec_coeffs[i] = -cfull[i];

    ResidueRecurrence out;
    out.L = L;
    out.residues.resize(L);
    for (unsigned long long j = 0; j < L; ++j) {
        std::vector<std::vector<Int>> init(order);  // init[n][i]
        for (std::size_t n = 0; n < order; ++n) {
            TorusPoint p = iterate_monomial(map, x0, L * n + j);
            init[n] = eval_monomial_functional(f, p);
        }
        for (std::size_t i = 0; i < m; ++i) {
            IntRecurrence r;
            r.coeffs = rec_coeffs;
            for (std::size_t n = 0; n < order; ++n) r.initial.push_back(init[n][i]);
            out.residues[j].push_back(std::move(r));
        }
    }

    // Cross-check against direct exponent iteration before returning.
    TorusPoint p = x0;
    for (unsigned long long step = 0; step <= verify_to; ++step) {
        ExponentVector direct = eval_monomial_functional(f, p);
        unsigned long long n = step / L, j = step % L;
        for (std::size_t i = 0; i < m; ++i)
            if (out.residues[j][i].at(n) != direct[i])
                throw ValidationError("residue recurrence failed direct-iteration verification");
        p = iterate_monomial(map, p, 1);
    }
    return out;
}

std::vector<MonoidValue> monoid_values(const std::vector<MonomialMap>& maps, const TorusPoint& x0,
                                       const MonomialFunctional& f, unsigned depth) {
    if (maps.empty()) throw ValidationError("monoid needs at least one map");
    const std::size_t d = maps.front().dim();
    for (const auto& m : maps)
        if (m.dim() != d || m.group != maps.front().group)
            throw DimensionMismatch("monoid maps must share dimension and group");
    if (x0.dim() != d || f.powers.size() != d) throw DimensionMismatch("system dimension mismatch");
    const GroupSpec& G = *maps.front().group;

    auto small_enough = [](const ExponentVector& e) {
        for (const auto& v : e)
            if (abs(v) > 32) return false;
        return true;
    };

    std::vector<MonoidValue> out;
    struct Node {
        std::vector<std::size_t> word;
        TorusPoint point;  // word applied to x0, leftmost letter outermost
    };
    std::vector<Node> level{{{}, x0}};
    for (unsigned len = 0;; ++len) {
        for (const auto& node : level) {
            MonoidValue v;
            v.word = node.word;
            v.exps = eval_monomial_functional(f, node.point);
            bool small = small_enough(v.exps);
            for (const auto& c : node.point.coords) small = small && small_enough(c);
            if (small) {
                // audit: materialize and evaluate the functional directly
                RatFunc direct = G.materialize(f.kappa);
                auto coords = materialize_point(G, node.point);
                for (std::size_t j = 0; j < d; ++j) direct = direct * coords[j].pow(f.powers[j]);
                if (!(direct == G.materialize(v.exps)))
                    throw ValidationError("monoid value failed materialized audit");
                v.audited = true;
            }
            out.push_back(std::move(v));
        }
        if (len == depth) break;
        std::vector<Node> next;
        for (const auto& node : level)
            for (std::size_t mi = 0; mi < maps.size(); ++mi) {
                Node nn;
                nn.word = node.word;
                nn.word.push_back(mi);
                TorusPoint p = x0;
                for (std::size_t idx = nn.word.size(); idx-- > 0;)
                    p = iterate_monomial(maps[nn.word[idx]], p, 1);
                nn.point = std::move(p);
                next.push_back(std::move(nn));
            }
        level = std::move(next);
    }
    return out;
}

}  // namespace charp
