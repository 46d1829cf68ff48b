#pragma once

#include <memory>
#include <string>
#include <vector>

#include "charp/multgroup.hpp"

namespace charp {

using GroupSpecPtr = std::shared_ptr<const GroupSpec>;

/// Monomial self-map of G_m^d:
///   (x_1..x_d) -> (c_i prod_j x_j^{expo[i][j]})_i,
/// with the coefficients c_i presented by exponent certificates over a
/// group G.  Dominance (det expo != 0) is enforced at construction.
struct MonomialMap {
    GroupSpecPtr group;
    ZMat expo;                          // d x d integer matrix
    std::vector<ExponentVector> coeff;  // d certificates of length m

    std::size_t dim() const { return expo.rows(); }
};

MonomialMap make_monomial_map(GroupSpecPtr group, ZMat expo, std::vector<ExponentVector> coeff);

/// Point of the torus with coordinates presented intrinsically by
/// exponent certificates over the same group.
struct TorusPoint {
    std::vector<ExponentVector> coords;

    std::size_t dim() const { return coords.size(); }
};

TorusPoint make_torus_point(const GroupSpecPtr& group, std::vector<ExponentVector> coords);

/// kappa * x_1^{p_1} ... x_d^{p_d} with kappa in G.
struct MonomialFunctional {
    ExponentVector kappa;
    std::vector<long long> powers;
};

/// Exponent state after n steps of the affine recurrence E -> expo E + C,
/// computed exactly over Z (square-and-multiply on the augmented matrix).
TorusPoint iterate_monomial(const MonomialMap& map, const TorusPoint& x, unsigned long long n);

/// Exponent vector of kappa * prod x_j^{powers[j]}.
ExponentVector eval_monomial_functional(const MonomialFunctional& g, const TorusPoint& x);

/// Materialize coordinates in F_q(t); exponents must be desk-size.
std::vector<RatFunc> materialize_point(const GroupSpec& g, const TorusPoint& x);

/// Integer recurrences b_{j,i}(n) with f(phi^{Ln+j}(x0)) = prod h_i^{b_{j,i}(n)}
/// for n >= 0 (monomial systems need no preperiod).  Each recurrence has
/// order d+1, from the characteristic polynomial of expo^L times (x-1).
/// Verified against direct exponent iteration before returning.
struct ResidueRecurrence {
    unsigned long long L = 1;
    unsigned long long preperiod = 0;
    std::vector<std::vector<IntRecurrence>> residues;  // [j][i], j < L, i < m
};

ResidueRecurrence residue_recurrences(const MonomialMap& map, const TorusPoint& x0,
                                      const MonomialFunctional& f, unsigned long long L = 1,
                                      unsigned long long verify_to = 60);

/// One enumerated monoid word and its functional value.
struct MonoidValue {
    std::vector<std::size_t> word;  // map indices; word (w_0..w_k) acts as phi_{w_0} o ... o phi_{w_k}
    ExponentVector exps;
    bool audited = false;           // certificate cross-checked in F_q(t) (skipped for huge exponents)
};

/// Breadth-first enumeration of all words of length <= depth over the given
/// maps, with the functional value of each composed point.
std::vector<MonoidValue> monoid_values(const std::vector<MonomialMap>& maps, const TorusPoint& x0,
                                       const MonomialFunctional& f, unsigned depth);

}  // namespace charp
