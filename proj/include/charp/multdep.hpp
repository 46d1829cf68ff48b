#pragma once

#include <vector>

#include "charp/torusdyn.hpp"

namespace charp {

/// Outcome of a multiplicative dependence test.  When dependent, the
/// relation is nonzero, content 1, sign-normalized (first nonzero entry
/// positive) and re-verified by exact multiplication.
struct DependenceResult {
    bool dependent = false;
    std::vector<Int> relation;
};

/// Does some nonzero integer vector k give prod g_i^{k_i} = 1?  Kernel of
/// the joint divisor matrix intersected with the constant-part congruence
/// mod q-1; torsion-only relations count (they are genuine dependences).
DependenceResult mult_dependence(const std::vector<RatFunc>& gs, std::uint64_t seed = 0);

/// Dependence over the monomial functionals kappa_j x^{p_j} on G_m^d with
/// kappa_j presented by certificates over G: integer kernel of the joint
/// exponent data modulo the relation lattice of G.
DependenceResult mult_dependence_functionals(const std::vector<MonomialFunctional>& fs, const GroupSpec& g,
                                             std::size_t dim);

/// (d + e + 1)^r.
long long dichotomy_threshold(long long d, long long e, long long r);

}  // namespace charp
