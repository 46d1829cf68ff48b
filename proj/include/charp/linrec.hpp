#pragma once

#include <variant>
#include <vector>

#include "charp/multgroup.hpp"
#include "charp/retset.hpp"
#include "charp/scalar_io.hpp"

namespace charp {

/// A rational power series over F_q(t): num/den in x with den(0) = 1 and
/// gcd(num, den) = 1.  The Taylor coefficients a_n at 0 are uniquely
/// determined.
struct RationalSeries {
    XPoly num;
    XPoly den;

    bool operator==(const RationalSeries& o) const { return num == o.num && den == o.den; }
};

/// Canonicalizes (reduce, den(0) = 1); throws ValidationError when the
/// denominator vanishes at 0.
RationalSeries make_series(XPoly num, XPoly den);
RationalSeries parse_series(const FqFieldPtr& F, const std::string& num, const std::string& den);
RationalSeries zero_series(const FqFieldPtr& F);

/// a_0, ..., a_{count-1} by exact long division (streaming).
std::vector<RatFunc> coefficient_prefix(const RationalSeries& f, std::size_t count);

/// Matrix presentation a_n = w A^n v for all n >= 0 (companion form on the
/// first `order` coefficients).
struct LinRecState {
    std::vector<RatFunc> w;
    std::vector<std::vector<RatFunc>> A;
    std::vector<RatFunc> v;
    std::size_t order = 0;
};
LinRecState series_to_linrec(const RationalSeries& f);

/// Exact a_n; streams for small n, square-and-multiplies the companion
/// matrix beyond that.
RatFunc coefficient_at(const RationalSeries& f, unsigned long long n);

/// The rational series with coefficients a_{Mn+b}: rational reconstruction
/// from streamed section values, certified exactly before returning.
RationalSeries section(const RationalSeries& f, unsigned long long M, unsigned long long b);

/// F = P(x) + sum_b mu_b x^{b+MN} / (1 - delta_b x^M), all sections
/// eventually geometric with transient at most N; deg P < MN.  Membership
/// of delta_b, mu_b and the P coefficients in G is audited and reported.
struct PolyaDecomposition {
    explicit PolyaDecomposition(const FqFieldPtr& F) : P(RatFuncRing{F}, 'x') {}

    unsigned long long M = 1;
    unsigned long long N = 0;
    XPoly P;
    std::vector<RatFunc> mu;
    std::vector<RatFunc> delta;

    std::vector<std::optional<ExponentVector>> delta_cert;  // per b
    std::vector<std::optional<ExponentVector>> mu_cert;     // per b; nullopt for mu_b = 0
    std::vector<std::optional<ExponentVector>> p_cert;      // per coefficient of P; nullopt for 0
    bool deltas_in_G = false;
    bool mus_in_G_or_zero = false;
    bool p_in_G_or_zero = false;
};

struct PolyaFailure {
    enum class Kind { NotGeometric, BudgetExceeded } kind;
    unsigned long long witness_M = 0;
    unsigned long long witness_b = 0;
    std::string detail;
};

using PolyaResult = std::variant<PolyaDecomposition, PolyaFailure>;

/// Searches M = 1, 2, ..., M_max and returns the smallest M whose sections
/// are all certified eventually geometric with transient <= N_max.
/// NotGeometric: every M <= M_max has a section that provably never becomes
/// geometric.  BudgetExceeded: the budgets cut the search short.
PolyaResult polya_decompose(const RationalSeries& f, const GroupSpec& g, unsigned long long M_max = 64,
                            unsigned long long N_max = 16);

/// Rebuild the rational series from a decomposition (exact, canonical).
RationalSeries reconstruct_decomposition(const FqFieldPtr& F, unsigned long long M, unsigned long long N,
                                         const XPoly& P, const std::vector<RatFunc>& mu,
                                         const std::vector<RatFunc>& delta);
RationalSeries reconstruct_and_verify(const FqFieldPtr& F, const PolyaDecomposition& d);

/// N = {n <= H : a_n in G} and N_0 = {n <= H : a_n in G or a_n = 0}, each
/// fitted into progressions + residual.
struct SeriesReturnReport {
    std::vector<unsigned long long> in_G;
    std::vector<unsigned long long> in_G_or_zero;
    ReturnSetReport report_G;
    ReturnSetReport report_G0;
};
SeriesReturnReport return_set_of_series(const RationalSeries& f, const GroupSpec& g,
                                        unsigned long long horizon);

}  // namespace charp
