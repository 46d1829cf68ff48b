#pragma once

#include <optional>
#include <vector>

#include "charp/lattice.hpp"
#include "charp/rat.hpp"
#include "charp/ratfunc.hpp"

namespace charp {

/// Membership certificate: exponents of a group element in the generators.
using ExponentVector = std::vector<Int>;

/// A finitely generated subgroup G of F_q(t)*, presented by explicit
/// generators.  The divisor lattice over the joint support, the constant
/// parts in F_q*, and the free rank are derived eagerly; the object is
/// immutable afterwards.
class GroupSpec {
   public:
    GroupSpec(std::vector<RatFunc> gens, std::uint64_t seed = 0);

    const FqFieldPtr& field() const { return field_; }
    const std::vector<RatFunc>& gens() const { return gens_; }
    std::size_t num_gens() const { return gens_.size(); }
    const std::vector<Place>& support() const { return support_; }
    const ZMat& divisor_matrix() const { return divisor_; }
    const std::vector<FqElem>& constant_parts() const { return constants_; }
    std::size_t rank() const { return rank_; }

    /// Exponent certificate of x in the generators, or NonMember (empty).
    /// The certificate is re-multiplied exactly before it is returned.
    std::optional<ExponentVector> membership(const RatFunc& x) const;

    /// Materialize prod gens[i]^{e[i]} (exact).
    RatFunc materialize(const ExponentVector& e) const;

    /// Divisor vector of x over this group's support; nullopt when x has a
    /// place outside the support.
    std::optional<std::vector<Int>> divisor_over_support(const RatFunc& x) const;

   private:
    FqFieldPtr field_;
    std::vector<RatFunc> gens_;
    std::uint64_t seed_;
    std::vector<Place> support_;            // canonical order, infinity last if present
    ZMat divisor_;                          // m x s valuation matrix
    std::vector<FqElem> constants_;         // unit parts of the generators
    std::vector<Int> constant_dlogs_;
    std::size_t rank_ = 0;
    HnfResult hnf_;                         // of divisor_
};

/// Output of place selection in the sense of the height-gap machinery:
/// r group elements and r distinct places with |b_i|_{v_i} > 1 and
/// |b_j|_{v_i} = 1 for j != i (valuation 0).  `index` is the index of the
/// subgroup generated by `basis` inside the free part of G; index 1 means
/// a genuine basis.  (Some divisor lattices admit no index-1 diagonal
/// system; the minimal-index one is returned then.)
struct PlaceAssignment {
    std::vector<RatFunc> basis;
    std::vector<ExponentVector> basis_exponents;  // in terms of the group generators
    std::vector<Place> places;
    std::vector<long long> pairings;              // v_{places[i]}(basis[i]) < 0
    Int index{1};
};

/// Throws RankZero when G is torsion.
PlaceAssignment select_places(const GroupSpec& g);

/// c > 0 with weil_height(prod basis[i]^{n_i}) >= c * max |n_i|,
/// derived from the diagonal valuations and place degrees.
Rat height_bound_constant(const GroupSpec& g, const PlaceAssignment& a);

/// Eventual periodicity report for {n : b(n) in Lambda}.
struct RecurrencePattern {
    bool certified = false;
    unsigned long long preperiod = 0;
    unsigned long long period = 0;
    std::vector<unsigned long long> initial_members;     // members below the preperiod
    std::vector<unsigned long long> periodic_residues;   // offsets j < period with ell + j a member
    std::vector<unsigned long long> horizon_members;     // members in [0, horizon]
};

/// When Lambda (given by generator rows) has finite index in Z^m the exact
/// eventually periodic set is certified by state repetition mod the index;
/// otherwise the horizon-bounded set is returned with certified = false.
RecurrencePattern recurrence_membership_pattern(const std::vector<IntRecurrence>& b, const ZMat& lambda,
                                                unsigned long long horizon);

}  // namespace charp
