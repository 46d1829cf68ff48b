#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "charp/errors.hpp"

namespace charp {

using Int = mpz_class;

/// Dense integer matrix, row major.
class ZMat {
   public:
    ZMat() = default;
    ZMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Int(0)) {}

    static ZMat identity(std::size_t n) {
        ZMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    ZMat operator*(const ZMat& o) const;
    ZMat operator+(const ZMat& o) const;
    std::vector<Int> row(std::size_t i) const;
    bool operator==(const ZMat& o) const = default;

   private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

ZMat zmat_pow(const ZMat& a, unsigned long long e);
Int zmat_det(const ZMat& a);

/// Characteristic polynomial det(xI - A), ascending coefficients over Z.
std::vector<Int> zmat_charpoly(const ZMat& a);

/// Row-style Hermite normal form: returns H in row echelon form with
/// positive pivots and entries above each pivot reduced, plus the
/// unimodular transform U with U*A = H.  rank = number of nonzero rows.
struct HnfResult {
    ZMat H;
    ZMat U;
    std::size_t rank = 0;
};
HnfResult hnf(const ZMat& a);

/// Basis of the left kernel {x : x*A = 0}, as rows.  May be empty.
ZMat left_kernel(const ZMat& a);

/// One integer solution of x*A = b, if any.
std::optional<std::vector<Int>> solve_left(const ZMat& a, const std::vector<Int>& b);

/// Does v lie in the row lattice of A?
bool in_row_lattice(const ZMat& a, const std::vector<Int>& v);

/// Index [Z^n : L] of the row lattice (empty if the lattice has rank < n).
std::optional<Int> lattice_index(const ZMat& a);

/// One solution of sum_i x_i a_i = r (mod n) with n >= 1, or nullopt.
std::optional<std::vector<Int>> solve_linear_congruence(const std::vector<Int>& a, const Int& r, const Int& n);

/// Integer linear recurrence in companion form:
///   s(n+k) = c[k-1] s(n+k-1) + ... + c[0] s(n), with initial terms s(0..k-1).
struct IntRecurrence {
    std::vector<Int> coeffs;    // ascending: coefficient of s(n+i) is coeffs[i]
    std::vector<Int> initial;   // s(0), ..., s(k-1)

    std::size_t order() const { return coeffs.size(); }
    Int at(unsigned long long n) const;                       // square-and-multiply
    std::vector<Int> prefix(std::size_t count) const;         // s(0..count-1)
};

}  // namespace charp
