#pragma once

#include <string>
#include <vector>

#include "charp/rat.hpp"
#include "charp/scalar_io.hpp"
#include "charp/torusdyn.hpp"

namespace charp {

/// A rational dynamical system on the affine chart A^d: coordinate maps
/// phi_1..phi_d and observable f, as expression trees evaluated exactly at
/// points; indeterminacy is detected at evaluation time, never assumed
/// absent.
struct RationalSystem {
    FqFieldPtr field;
    std::size_t dim = 1;
    std::vector<ExprPtr> phi;
    ExprPtr f;
    std::vector<RatFunc> x0;
};

RationalSystem make_rational_system(const FqFieldPtr& field, std::size_t dim, std::vector<ExprPtr> phi,
                                    ExprPtr f, std::vector<RatFunc> x0);
RationalSystem parse_rational_system(const FqFieldPtr& field, std::size_t dim,
                                     const std::vector<std::string>& phi, const std::string& f,
                                     const std::vector<std::string>& x0);

/// phi^n(x0), or the first step at which the orbit hits an indeterminacy.
struct IterateResult {
    std::optional<std::vector<RatFunc>> point;
    unsigned long long hit_step = 0;  // meaningful when !point
};
IterateResult iterate_rational(const RationalSystem& s, unsigned long long n,
                               long long height_budget = 1000000);

/// Arithmetic progression {a + b n}; b = 0 is the singleton {a}.
struct Progression {
    unsigned long long a = 0;
    unsigned long long b = 0;
    bool operator==(const Progression&) const = default;
};

struct ReturnSetReport {
    unsigned long long horizon = 0;
    std::vector<unsigned long long> members;
    std::vector<Progression> progressions;
    std::vector<unsigned long long> residual;
    Rat density_estimate;         // windowed estimate for the residual
    std::string window_schedule;
};

struct FitParams {
    unsigned long long b_max = 24;
    unsigned tail_percent = 25;   // the final quarter of a class must be fully present
    unsigned min_tail = 2;
    std::size_t singleton_cap = 3;
};

/// Greedy deterministic progression extraction; lossless by construction
/// (progressions restricted to [0,H] plus residual reproduce the input).
ReturnSetReport structure_fit(const std::vector<unsigned long long>& members, unsigned long long horizon,
                              const FitParams& params = {});

/// Exact sliding-window estimator: max over intervals [a, a+w] in [0,H] of
/// |members in window| / w.
Rat banach_density_estimate(const std::vector<unsigned long long>& members, unsigned long long horizon,
                            unsigned long long window);

/// Scan outcome of the orbit-membership return set.
struct ReturnScan {
    enum class Stop { Completed, HeightBudget, Indeterminacy };

    std::vector<unsigned long long> members;
    unsigned long long scanned_to = 0;  // inclusive; trustworthy up to here
    Stop stop = Stop::Completed;
    unsigned long long stop_step = 0;
    bool monomial_fast_path = false;

    struct Record {
        unsigned long long n;
        bool defined;
        bool member;
        std::string value;  // canonical scalar, or an exponent certificate on the fast path
    };
    std::vector<Record> records;  // filled when capture_records
};

/// {n <= H : f(phi^n(x0)) defined, nonzero and in G}.  Fully monomial
/// systems with G-certified data ride the exponent dynamics (no coefficient
/// blow-up); everything else iterates directly under the height budget.
ReturnScan return_set(const RationalSystem& s, const GroupSpec& g, unsigned long long horizon,
                      long long height_budget = 1000000, bool capture_records = false);

/// {sum_i d_i p^{k_i n_i}} intersected with [0, H].  Term magnitudes are
/// enumerated up to term_factor * (H+1); values needing larger cancelling
/// terms are out of the enumeration's reach (reported cap in the CLI).
struct FormSetSpec {
    unsigned p = 2;
    std::vector<Rat> d;
    std::vector<unsigned> k;
};
std::vector<long long> form_set_members(const FormSetSpec& spec, long long horizon,
                                        long long term_factor = 4);

/// n <= H with n^2 a sum of exactly r powers of p, by the carry
/// characterization: s_p(n^2) <= r <= n^2 and r == s_p(n^2) mod (p-1).
struct DigitQuery {
    unsigned p = 3;
    unsigned r = 1;
    long long horizon = 100;
};
struct DigitReport {
    std::vector<long long> solutions;
    std::vector<std::pair<long long, Rat>> running_density;  // at powers of 10 up to H
};
DigitReport digit_solutions(const DigitQuery& q);

/// Base-p digit sum.
long long digit_sum(long long n, unsigned p);

}  // namespace charp
