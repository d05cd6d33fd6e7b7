#pragma once

// Dense integer matrices with Hermite and Smith normal forms.
//
// Lattices are row lattices: the rows of a matrix span a Z-module. The
// Hermite form used here is lower-echelon: every row's last nonzero entry
// (its pivot) is positive, pivot columns strictly increase down the rows,
// and the entries of later rows in an earlier pivot column lie in
// [0, pivot). For a full-rank d x d lattice this is lower triangular with
// positive diagonal, and two generating sets span the same lattice iff their
// forms are equal.

#include "noether/bigint.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace noether {

using Row = std::vector<BigInt>;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : cols_(cols), d_(rows, Row(cols, 0)) {}
    Matrix(std::size_t cols, std::vector<Row> rows) : cols_(cols), d_(std::move(rows)) {
        for (const auto& r : d_)
            if (r.size() != cols_) throw std::invalid_argument("Matrix: ragged rows");
    }

    /// No rows, `cols` columns.
    static Matrix empty(std::size_t cols) { return Matrix(cols, std::vector<Row>{}); }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return d_.size(); }
    std::size_t cols() const { return cols_; }
    BigInt& operator()(std::size_t i, std::size_t j) { return d_[i][j]; }
    const BigInt& operator()(std::size_t i, std::size_t j) const { return d_[i][j]; }
    const Row& row(std::size_t i) const { return d_[i]; }
    Row& row(std::size_t i) { return d_[i]; }
    const std::vector<Row>& data() const { return d_; }
    void push_row(Row r) {
        if (r.size() != cols_) throw std::invalid_argument("Matrix: row length mismatch");
        d_.push_back(std::move(r));
    }

    friend bool operator==(const Matrix& a, const Matrix& b) { return a.cols_ == b.cols_ && a.d_ == b.d_; }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols() != b.rows()) throw std::invalid_argument("Matrix: dimension mismatch");
        Matrix r(a.rows(), b.cols());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t k = 0; k < a.cols(); ++k) {
                if (sgn(a(i, k)) == 0) continue;
                for (std::size_t j = 0; j < b.cols(); ++j)
                    mpz_addmul(r(i, j).get_mpz_t(), a(i, k).get_mpz_t(), b(k, j).get_mpz_t());
            }
        return r;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows());
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = d_[i][j];
        return t;
    }

private:
    std::size_t cols_ = 0;
    std::vector<Row> d_;
};

inline Row row_times(const Row& v, const Matrix& m) {
    if (v.size() != m.rows()) throw std::invalid_argument("row_times: dimension mismatch");
    Row r(m.cols(), 0);
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (sgn(v[k]) == 0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j)
            mpz_addmul(r[j].get_mpz_t(), v[k].get_mpz_t(), m(k, j).get_mpz_t());
    }
    return r;
}

namespace detail {

inline long pivot_col(const Row& r) {
    for (std::size_t j = r.size(); j-- > 0;)
        if (sgn(r[j]) != 0) return static_cast<long>(j);
    return -1;
}

inline void axpy(Row& dst, const BigInt& s, const Row& src) {
    for (std::size_t j = 0; j < dst.size(); ++j)
        if (sgn(src[j]) != 0) mpz_addmul(dst[j].get_mpz_t(), s.get_mpz_t(), src[j].get_mpz_t());
}

}  // namespace detail

/// Hermite form of the row lattice spanned by `gens` (see the header comment).
/// With `modulus` = D the caller asserts D*Z^cols is contained in the lattice;
/// intermediate entries are then kept reduced modulo D and the result is full rank.
inline Matrix hermite_normal_form(const Matrix& gens, const std::optional<BigInt>& modulus = std::nullopt) {
    const std::size_t d = gens.cols();
    const bool modular = modulus.has_value();
    BigInt D;
    if (modular) {
        D = babs(*modulus);
        if (sgn(D) == 0) throw std::invalid_argument("hermite_normal_form: modulus must be nonzero");
    }

    std::vector<Row> work;
    work.reserve(gens.rows());
    for (const auto& r : gens.data()) {
        Row v = r;
        if (modular)
            for (auto& x : v) x = fmod_pos(x, D);
        if (detail::pivot_col(v) >= 0) work.push_back(std::move(v));
    }

    std::vector<std::optional<Row>> pivots(d);
    BigInt g, x, y, a_g, b_g;
    for (std::size_t j = d; j-- > 0;) {
        std::optional<Row> P;
        if (modular) {
            Row e(d, 0);
            e[j] = D;
            P = std::move(e);
        }
        std::vector<Row> next;
        next.reserve(work.size());
        for (auto& r : work) {
            if (sgn(r[j]) == 0) {
                next.push_back(std::move(r));
                continue;
            }
            if (!P) {
                P = std::move(r);
                continue;
            }
            Row& p = *P;
            if (divides(p[j], r[j])) {
                const BigInt q = -divexact(r[j], p[j]);
                detail::axpy(r, q, p);
            } else {
                g = xgcd(p[j], r[j], x, y);
                a_g = divexact(p[j], g);
                b_g = divexact(r[j], g);
                Row np(d, 0);
                for (std::size_t k = 0; k <= j; ++k) {
                    np[k] = x * p[k] + y * r[k];
                    r[k] = a_g * r[k] - b_g * p[k];
                }
                p = std::move(np);
            }
            if (modular) {
                for (std::size_t k = 0; k < j; ++k) {
                    r[k] = fmod_pos(r[k], D);
                    p[k] = fmod_pos(p[k], D);
                }
            }
            if (detail::pivot_col(r) >= 0) next.push_back(std::move(r));
        }
        work = std::move(next);
        if (P) {
            if (sgn((*P)[j]) < 0)
                for (auto& v : *P) v = -v;
            pivots[j] = std::move(P);
        }
    }

    std::vector<Row> out;
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < d; ++j)
        if (pivots[j]) {
            out.push_back(std::move(*pivots[j]));
            cols.push_back(j);
        }
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t k = i; k-- > 0;) {
            const BigInt& piv = out[k][cols[k]];
            const BigInt q = fdiv(out[i][cols[k]], piv);
            if (sgn(q) != 0) detail::axpy(out[i], -q, out[k]);
        }
    }
    return Matrix(d, std::move(out));
}

/// Pivot column of each row of a Hermite form.
inline std::vector<std::size_t> hnf_pivots(const Matrix& h) {
    std::vector<std::size_t> p;
    for (const auto& r : h.data()) p.push_back(static_cast<std::size_t>(detail::pivot_col(r)));
    return p;
}

/// Integer coordinates c with c * H = v for a Hermite form H, or nullopt if v
/// is not in the row lattice.
inline std::optional<Row> lattice_coordinates(const Matrix& h, Row v) {
    if (v.size() != h.cols()) throw std::invalid_argument("lattice_coordinates: dimension mismatch");
    const auto piv = hnf_pivots(h);
    Row c(h.rows(), 0);
    for (std::size_t i = h.rows(); i-- > 0;) {
        const std::size_t pc = piv[i];
        if (sgn(v[pc]) == 0) continue;
        if (!divides(h(i, pc), v[pc])) return std::nullopt;
        c[i] = divexact(v[pc], h(i, pc));
        detail::axpy(v, -c[i], h.row(i));
    }
    for (const auto& x : v)
        if (sgn(x) != 0) return std::nullopt;
    return c;
}

/// Smith form: U * A * V = D with U, V unimodular and d_1 | d_2 | ... on the diagonal.
struct SmithForm {
    Matrix D, U, V;
    /// Diagonal entries (nonnegative), length min(rows, cols).
    std::vector<BigInt> diagonal() const {
        std::vector<BigInt> r;
        for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) r.push_back(D(i, i));
        return r;
    }
};

inline SmithForm smith_normal_form(const Matrix& A) {
    const std::size_t m = A.rows(), n = A.cols();
    SmithForm s{A, Matrix::identity(m), Matrix::identity(n)};
    Matrix& D = s.D;
    Matrix& U = s.U;
    Matrix& V = s.V;
    auto swap_rows = [&](std::size_t a, std::size_t b) {
        std::swap(D.row(a), D.row(b));
        std::swap(U.row(a), U.row(b));
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < m; ++i) std::swap(D(i, a), D(i, b));
        for (std::size_t i = 0; i < n; ++i) std::swap(V(i, a), V(i, b));
    };
    auto add_row = [&](std::size_t dst, const BigInt& q, std::size_t src) {  // row_dst += q row_src
        detail::axpy(D.row(dst), q, D.row(src));
        detail::axpy(U.row(dst), q, U.row(src));
    };
    auto add_col = [&](std::size_t dst, const BigInt& q, std::size_t src) {  // col_dst += q col_src
        for (std::size_t i = 0; i < m; ++i) mpz_addmul(D(i, dst).get_mpz_t(), q.get_mpz_t(), D(i, src).get_mpz_t());
        for (std::size_t i = 0; i < n; ++i) mpz_addmul(V(i, dst).get_mpz_t(), q.get_mpz_t(), V(i, src).get_mpz_t());
    };

    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        while (true) {
            std::size_t bi = m, bj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (sgn(D(i, j)) != 0 && (bi == m || mpz_cmpabs(D(i, j).get_mpz_t(), D(bi, bj).get_mpz_t()) < 0)) {
                        bi = i;
                        bj = j;
                    }
            if (bi == m) return s;  // remaining block is zero
            if (bi != t) swap_rows(bi, t);
            if (bj != t) swap_cols(bj, t);
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (sgn(D(i, t)) == 0) continue;
                const BigInt q = fdiv(D(i, t), D(t, t));
                add_row(i, -q, t);
                if (sgn(D(i, t)) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (sgn(D(t, j)) == 0) continue;
                const BigInt q = fdiv(D(t, j), D(t, t));
                add_col(j, -q, t);
                if (sgn(D(t, j)) != 0) clean = false;
            }
            if (!clean) continue;
            bool fixed = false;
            for (std::size_t i = t + 1; i < m && !fixed; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (!divides(D(t, t), D(i, j))) {
                        add_row(t, BigInt(1), i);
                        fixed = true;
                        break;
                    }
            if (!fixed) break;
        }
        if (sgn(D(t, t)) < 0) {
            for (auto& v : D.row(t)) v = -v;
            for (auto& v : U.row(t)) v = -v;
        }
    }
    return s;
}

/// Invariants of the finite-or-not abelian group sub1/sub2 where sub2 is a
/// sublattice of the row lattice sub1: elementary divisors > 1 in ascending
/// order, followed by one 0 per infinite cyclic factor. Empty means trivial.
inline std::vector<BigInt> quotient_invariants(const Matrix& outer, const Matrix& inner) {
    const Matrix h = hermite_normal_form(outer);
    Matrix coords = Matrix::empty(h.rows());
    for (const auto& r : inner.data()) {
        auto c = lattice_coordinates(h, r);
        if (!c) throw std::invalid_argument("quotient_invariants: inner lattice not contained in outer");
        coords.push_row(std::move(*c));
    }
    std::vector<BigInt> out;
    std::size_t rank = 0;
    if (coords.rows() > 0 && h.rows() > 0) {
        const auto snf = smith_normal_form(coords);
        for (const auto& d : snf.diagonal()) {
            if (sgn(d) == 0) continue;
            ++rank;
            if (d != 1) out.push_back(d);
        }
    }
    for (std::size_t k = rank; k < h.rows(); ++k) out.push_back(0);
    return out;
}

/// Basis (Hermite form) of { v in Z^r : v * F in rowspan(R) }.
inline Matrix lattice_preimage(const Matrix& F, const Matrix& R) {
    const std::size_t r = F.rows(), c = F.cols();
    if (R.rows() > 0 && R.cols() != c) throw std::invalid_argument("lattice_preimage: dimension mismatch");
    Matrix stack = Matrix::empty(r + c);
    for (std::size_t i = 0; i < r; ++i) {
        Row v(r + c, 0);
        v[i] = 1;
        for (std::size_t j = 0; j < c; ++j) v[r + j] = F(i, j);
        stack.push_row(std::move(v));
    }
    for (const auto& rel : R.data()) {
        Row v(r + c, 0);
        for (std::size_t j = 0; j < c; ++j) v[r + j] = rel[j];
        stack.push_row(std::move(v));
    }
    const Matrix h = hermite_normal_form(stack);
    std::vector<Row> out;
    for (const auto& row : h.data()) {
        if (detail::pivot_col(row) >= static_cast<long>(r)) break;
        out.emplace_back(row.begin(), row.begin() + static_cast<long>(r));
    }
    return Matrix(r, std::move(out));
}

/// Fraction-free determinant (Bareiss) of a square matrix.
inline BigInt determinant(Matrix a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("determinant: matrix must be square");
    if (n == 0) return 1;
    int sign = 1;
    BigInt prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (sgn(a(k, k)) == 0) {
            std::size_t p = k + 1;
            while (p < n && sgn(a(p, k)) == 0) ++p;
            if (p == n) return 0;
            std::swap(a.row(p), a.row(k));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = divexact(a(i, j) * a(k, k) - a(i, k) * a(k, j), prev);
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

}  // namespace noether
