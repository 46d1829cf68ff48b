#pragma once

#include <cstdint>
#include <vector>

#include "charp/poly.hpp"

namespace charp {

struct PolyFactor {
    Poly factor;        // monic irreducible
    unsigned mult = 1;
};

struct Factorization {
    FqElem constant;                 // leading unit so that constant * prod factor^mult == input
    std::vector<PolyFactor> factors;  // sorted canonically (degree, then coefficient lex)
};

/// Distinct-degree + equal-degree (Cantor–Zassenhaus) factorization.
/// The equal-degree split is randomized; the seed pins the run.
/// Throws ZeroPolynomial on the zero input.
Factorization factor_poly(const Poly& f, std::uint64_t seed = 0);

bool poly_is_irreducible(const Poly& f);

/// Multiply a factorization back out (testing and verification).
Poly factorization_product(const FqFieldPtr& F, const Factorization& fac, char var);

}  // namespace charp
