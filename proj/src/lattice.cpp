#include "charp/lattice.hpp"

#include <algorithm>

namespace charp {

ZMat ZMat::operator*(const ZMat& o) const {
    if (cols_ != o.rows_) throw DimensionMismatch("matrix product shape mismatch");
    ZMat r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int& v = (*this)(i, k);
            if (v == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += v * o(k, j);
        }
    return r;
}

ZMat ZMat::operator+(const ZMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix sum shape mismatch");
    ZMat r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

std::vector<Int> ZMat::row(std::size_t i) const {
    return std::vector<Int>(a_.begin() + (long)(i * cols_), a_.begin() + (long)((i + 1) * cols_));
}

ZMat zmat_pow(const ZMat& a, unsigned long long e) {
    ZMat r = ZMat::identity(a.rows());
    ZMat b = a;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

namespace {

// Determinant over Z via fraction-free Gaussian elimination (Bareiss).
Int det_bareiss(ZMat m) {
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    Int prev(1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t piv = k + 1;
            while (piv < n && m(piv, k) == 0) ++piv;
            if (piv == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                m(i, j) = v;
            }
        prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

using ZxPoly = std::vector<Int>;  // ascending

ZxPoly zx_mul(const ZxPoly& a, const ZxPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZxPoly c(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

ZxPoly zx_add(ZxPoly a, const ZxPoly& b) {
    if (b.size() > a.size()) a.resize(b.size(), Int(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
}

// det over Z[x] by Laplace expansion along the first remaining column,
// fine for the small matrices this library meets.
ZxPoly zx_det(const std::vector<std::vector<ZxPoly>>& m, std::vector<std::size_t> rows) {
    if (rows.empty()) return {Int(1)};
    std::size_t col = m[0].size() - rows.size();
    ZxPoly acc;
    int sign = 1;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const ZxPoly& pivot = m[rows[k]][col];
        if (!pivot.empty()) {
            std::vector<std::size_t> rest;
            for (std::size_t j = 0; j < rows.size(); ++j)
                if (j != k) rest.push_back(rows[j]);
            ZxPoly sub = zx_det(m, rest);
            ZxPoly term = zx_mul(pivot, sub);
            if (sign < 0)
                for (auto& c : term) c = -c;
            acc = zx_add(std::move(acc), term);
        }
        sign = -sign;
    }
    while (!acc.empty() && acc.back() == 0) acc.pop_back();
    return acc;
}

}  // namespace

Int zmat_det(const ZMat& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("determinant of non-square matrix");
    return det_bareiss(a);
}

std::vector<Int> zmat_charpoly(const ZMat& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("charpoly of non-square matrix");
    const std::size_t n = a.rows();
    std::vector<std::vector<ZxPoly>> m(n, std::vector<ZxPoly>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            ZxPoly e;
            if (a(i, j) != 0) e.push_back(-a(i, j));
            if (i == j) {
                e.resize(2, Int(0));
                e[1] = 1;
            }
            m[i][j] = std::move(e);
        }
    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    ZxPoly d = zx_det(m, rows);
    d.resize(n + 1, Int(0));
    return d;
}

HnfResult hnf(const ZMat& a) {
    const std::size_t m = a.rows(), n = a.cols();
    HnfResult res;
    res.H = a;
    res.U = ZMat::identity(m);
    ZMat& H = res.H;
    ZMat& U = res.U;

    std::size_t r = 0;  // next pivot row
    for (std::size_t c = 0; c < n && r < m; ++c) {
        // Euclid on column c below row r until one nonzero entry remains.
        while (true) {
            std::size_t best = m;
            for (std::size_t i = r; i < m; ++i)
                if (H(i, c) != 0 && (best == m || cmp(abs(H(i, c)), abs(H(best, c))) < 0)) best = i;
            if (best == m) break;  // column is zero below r
            if (best != r) {
                for (std::size_t j = 0; j < n; ++j) std::swap(H(r, j), H(best, j));
                for (std::size_t j = 0; j < m; ++j) std::swap(U(r, j), U(best, j));
            }
            bool cleared = true;
            for (std::size_t i = r + 1; i < m; ++i) {
                if (H(i, c) == 0) continue;
                Int q = H(i, c) / H(r, c);  // truncated division keeps remainders small
                if (q != 0) {
                    for (std::size_t j = 0; j < n; ++j) H(i, j) -= q * H(r, j);
                    for (std::size_t j = 0; j < m; ++j) U(i, j) -= q * U(r, j);
                }
                if (H(i, c) != 0) cleared = false;
            }
            if (cleared) break;
        }
        if (H(r, c) == 0) continue;
        if (H(r, c) < 0) {
            for (std::size_t j = 0; j < n; ++j) H(r, j) = -H(r, j);
            for (std::size_t j = 0; j < m; ++j) U(r, j) = -U(r, j);
        }
        // Reduce entries above the pivot.
        for (std::size_t i = 0; i < r; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), H(i, c).get_mpz_t(), H(r, c).get_mpz_t());
            if (q != 0) {
                for (std::size_t j = 0; j < n; ++j) H(i, j) -= q * H(r, j);
                for (std::size_t j = 0; j < m; ++j) U(i, j) -= q * U(r, j);
            }
        }
        ++r;
    }
    res.rank = r;
    return res;
}

ZMat left_kernel(const ZMat& a) {
    HnfResult h = hnf(a);
    std::size_t k = a.rows() - h.rank;
    ZMat ker(k, a.rows());
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < a.rows(); ++j) ker(i, j) = h.U(h.rank + i, j);
    return ker;
}

std::optional<std::vector<Int>> solve_left(const ZMat& a, const std::vector<Int>& b) {
    if (b.size() != a.cols()) throw DimensionMismatch("solve_left shape mismatch");
    HnfResult h = hnf(a);
    std::vector<Int> target = b;
    std::vector<Int> y(h.rank, Int(0));
    for (std::size_t i = 0; i < h.rank; ++i) {
        std::size_t piv = 0;
        while (piv < a.cols() && h.H(i, piv) == 0) ++piv;
        if (piv == a.cols()) break;
        Int q, rem;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), target[piv].get_mpz_t(), h.H(i, piv).get_mpz_t());
        if (rem != 0) return std::nullopt;
        y[i] = q;
        if (q != 0)
            for (std::size_t j = 0; j < a.cols(); ++j) target[j] -= q * h.H(i, j);
    }
    for (const auto& v : target)
        if (v != 0) return std::nullopt;
    std::vector<Int> x(a.rows(), Int(0));
    for (std::size_t i = 0; i < h.rank; ++i)
        for (std::size_t j = 0; j < a.rows(); ++j) x[j] += y[i] * h.U(i, j);
    return x;
}

bool in_row_lattice(const ZMat& a, const std::vector<Int>& v) { return solve_left(a, v).has_value(); }

std::optional<Int> lattice_index(const ZMat& a) {
    HnfResult h = hnf(a);
    if (h.rank < a.cols()) return std::nullopt;
    Int idx(1);
    for (std::size_t i = 0; i < h.rank; ++i) {
        std::size_t piv = 0;
        while (piv < a.cols() && h.H(i, piv) == 0) ++piv;
        idx *= h.H(i, piv);
    }
    return idx;
}

std::optional<std::vector<Int>> solve_linear_congruence(const std::vector<Int>& a, const Int& r, const Int& n) {
    if (n <= 0) throw ValidationError("congruence modulus must be positive");
    Int rr = ((r % n) + n) % n;
    if (n == 1) return std::vector<Int>(a.size(), Int(0));
    // Accumulate gcds left to right, tracking one solution.
    std::vector<Int> x(a.size(), Int(0));
    Int g = n;
    std::vector<Int> combo;  // coefficients expressing g = sum combo[i] a[i] (mod n contribution dropped)
    for (std::size_t i = 0; i < a.size(); ++i) {
        Int ai = ((a[i] % n) + n) % n;
        Int g2, s, t;
        mpz_gcdext(g2.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), g.get_mpz_t(), ai.get_mpz_t());
        for (auto& c : combo) c *= s;
        combo.push_back(t);
        g = g2;
    }
    if (rr % g != 0) return std::nullopt;
    Int scale = rr / g;
    for (std::size_t i = 0; i < a.size(); ++i) {
        Int v = combo.size() > i ? combo[i] * scale : Int(0);
        x[i] = ((v % n) + n) % n;
    }
    return x;
}

Int IntRecurrence::at(unsigned long long n) const {
    const std::size_t k = order();
    if (k == 0) return 0;
    if (n < initial.size()) return initial[n];
    // Companion matrix power on the state (s(n), ..., s(n+k-1)).
    ZMat A(k, k);
    for (std::size_t i = 0; i + 1 < k; ++i) A(i, i + 1) = 1;
    for (std::size_t j = 0; j < k; ++j) A(k - 1, j) = coeffs[j];
    // The state (s(m), ..., s(m+k-1)) advances by A; s(n) is the last entry
    // of A^(n-k+1) applied to the initial state.
    ZMat P = zmat_pow(A, n - (k - 1));
    Int acc(0);
    for (std::size_t j = 0; j < k; ++j) acc += P(k - 1, j) * initial[j];
    return acc;
}

std::vector<Int> IntRecurrence::prefix(std::size_t count) const {
    std::vector<Int> s = initial;
    s.resize(std::max(count, s.size()));
    const std::size_t k = order();
    for (std::size_t n = initial.size(); n < count; ++n) {
        Int acc(0);
        for (std::size_t j = 0; j < k; ++j) acc += coeffs[j] * s[n - k + j];
        s[n] = acc;
    }
    s.resize(count);
    return s;
}

}  // namespace charp
