#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "charp/errors.hpp"

namespace charp {

/// Description of F_q = F_p[u]/(m(u)).  For ext_degree 1 the modulus is
/// empty and q = p.
struct FieldSpec {
    unsigned p = 3;
    unsigned ext_degree = 1;
    std::vector<unsigned> modulus;  // dense ascending coeffs of m(u), monic, length ext_degree+1

    bool operator==(const FieldSpec&) const = default;
};

/// An element of F_q encoded as an index in [0, q): the integer whose
/// base-p digits are the coefficients of the element in the generator u.
using FqElem = std::uint32_t;

/// Arithmetic context for a finite field at desk scale (q capped so that
/// full exp/log tables fit comfortably).  Multiplication, inversion and
/// discrete logarithm are table lookups; addition is digitwise mod p.
/// Immutable after construction; share via FqFieldPtr.
class FqField {
   public:
    explicit FqField(FieldSpec spec);

    const FieldSpec& spec() const { return spec_; }
    unsigned p() const { return spec_.p; }
    unsigned ext_degree() const { return spec_.ext_degree; }
    std::uint32_t q() const { return q_; }

    FqElem zero() const { return 0; }
    FqElem one() const { return 1; }
    bool is_zero(FqElem a) const { return a == 0; }

    FqElem add(FqElem a, FqElem b) const;
    FqElem sub(FqElem a, FqElem b) const;
    FqElem neg(FqElem a) const;
    FqElem mul(FqElem a, FqElem b) const;
    FqElem inv(FqElem a) const;
    FqElem div(FqElem a, FqElem b) const;
    FqElem pow(FqElem a, long long e) const;

    /// Canonical residue of an arbitrary integer in the prime field.
    FqElem from_int(long long n) const;

    /// Element from ascending u-coefficients (each reduced mod p).
    FqElem from_coeffs(const std::vector<long long>& cs) const;
    std::vector<unsigned> coeffs(FqElem a) const;

    /// Smallest generator of F_q* in index order.
    FqElem generator() const { return generator_; }

    /// Discrete logarithm base generator(); dlog(1) = 0.  Requires a != 0.
    std::uint32_t dlog(FqElem a) const;

    /// Multiplicative order of F_q*, i.e. q - 1.
    std::uint32_t unit_order() const { return q_ - 1; }

    std::string to_string(FqElem a) const;

    bool operator==(const FqField& other) const { return spec_ == other.spec_; }

   private:
    FieldSpec spec_;
    std::uint32_t q_;
    FqElem generator_ = 0;
    std::vector<std::uint32_t> exp_table_;  // exp_table_[i] = g^i, size q-1
    std::vector<std::uint32_t> log_table_;  // log_table_[a] for a in [1, q)

    FqElem mul_raw(FqElem a, FqElem b) const;  // polynomial mult mod modulus, used to seed tables
    void build_tables();
};

using FqFieldPtr = std::shared_ptr<const FqField>;

/// Construct (and validate) a field context.  Checks primality of p and
/// irreducibility of the modulus; picks the canonical smallest irreducible
/// modulus when ext_degree > 1 and none is given.
FqFieldPtr make_field(FieldSpec spec);
FqFieldPtr make_prime_field(unsigned p);

}  // namespace charp
