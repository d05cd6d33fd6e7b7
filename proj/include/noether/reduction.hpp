#pragma once

// Lattice reduction and short-vector enumeration under a positive definite
// integral quadratic form. Basis rows and the form are exact; Gram-Schmidt
// data is long double and only steers the search. Leaf norms are recomputed
// exactly, so enumeration bounds are honoured exactly.

#include "noether/bigint.hpp"
#include "noether/matrix.hpp"
#include "noether/numtheory.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace noether {

/// Gram matrix of the trace form T2(a) = sum over embeddings |s(a)|^2 on the
/// power basis of Z[zeta_n]; entry (i, j) is the trace of zeta^(i-j).
inline Matrix trace_form_gram(u64 n) {
    const std::size_t d = static_cast<std::size_t>(euler_phi(n));
    Matrix g(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const i64 k = static_cast<i64>(i) - static_cast<i64>(j);
            const u64 r = n / gcd_u64(reduce_mod(k, n), n);
            g(i, j) = big(static_cast<i64>(moebius(r)) * static_cast<i64>(euler_phi(n) / euler_phi(r)));
        }
    return g;
}

/// Q(v) = v G v^T.
inline BigInt quadratic_form(const Row& v, const Matrix& g) {
    const Row w = row_times(v, g);
    BigInt s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) mpz_addmul(s.get_mpz_t(), v[i].get_mpz_t(), w[i].get_mpz_t());
    return s;
}

namespace detail {

inline long double to_ld(const BigInt& v) {
    if (fits_i64(v)) return static_cast<long double>(to_i64(v));
    return std::stold(v.get_str());
}

}  // namespace detail

/// LLL reduction of the rows of `basis` (linearly independent) with respect to
/// the form `gram`. The output spans the same lattice.
inline Matrix lll_reduce(const Matrix& basis, const Matrix& gram, long double delta = 0.99L) {
    const std::size_t k = basis.rows();
    if (k == 0) return basis;
    std::vector<Row> b = basis.data();

    // Exact inner products A(i, j) = b_i G b_j^T.
    std::vector<Row> bg(k);
    for (std::size_t i = 0; i < k; ++i) bg[i] = row_times(b[i], gram);
    std::vector<std::vector<BigInt>> A(k, std::vector<BigInt>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            BigInt s = 0;
            for (std::size_t c = 0; c < b[j].size(); ++c)
                mpz_addmul(s.get_mpz_t(), bg[i][c].get_mpz_t(), b[j][c].get_mpz_t());
            A[i][j] = s;
            A[j][i] = s;
        }

    std::vector<std::vector<long double>> mu(k, std::vector<long double>(k, 0));
    std::vector<long double> B(k, 0);
    auto gso_row = [&](std::size_t i) {
        for (std::size_t j = 0; j < i; ++j) {
            long double s = detail::to_ld(A[i][j]);
            for (std::size_t l = 0; l < j; ++l) s -= mu[j][l] * mu[i][l] * B[l];
            mu[i][j] = s / B[j];
        }
        long double s = detail::to_ld(A[i][i]);
        for (std::size_t l = 0; l < i; ++l) s -= mu[i][l] * mu[i][l] * B[l];
        B[i] = s;
        if (!(B[i] > 0)) throw std::domain_error("lll_reduce: basis is dependent or form is not definite");
    };
    // b_i -= q b_j, keeping A exact.
    auto sub_row = [&](std::size_t i, std::size_t j, const BigInt& q) {
        const BigInt aij = A[i][j];
        for (std::size_t c = 0; c < b[i].size(); ++c) mpz_submul(b[i][c].get_mpz_t(), q.get_mpz_t(), b[j][c].get_mpz_t());
        for (std::size_t l = 0; l < k; ++l) {
            if (l == i) continue;
            A[i][l] -= q * A[j][l];
            A[l][i] = A[i][l];
        }
        A[i][i] += q * q * A[j][j] - 2 * q * aij;
    };
    auto swap_rows = [&](std::size_t i, std::size_t j) {
        std::swap(b[i], b[j]);
        std::swap(A[i], A[j]);
        for (std::size_t l = 0; l < k; ++l) std::swap(A[l][i], A[l][j]);
    };

    gso_row(0);
    std::size_t pos = 1;
    std::size_t guard = 0;
    const std::size_t guard_max = 200000 + 2000 * k * k;
    while (pos < k) {
        if (++guard > guard_max) throw std::runtime_error("lll_reduce: no convergence");
        // Size reduction, repeated because mu is approximate.
        for (int pass = 0; pass < 8; ++pass) {
            gso_row(pos);
            bool changed = false;
            for (std::size_t j = pos; j-- > 0;) {
                const long double m = mu[pos][j];
                if (std::fabs(m) <= 0.51L) continue;
                const long double r = std::nearbyint(m);
                BigInt q;
                if (std::fabs(r) < 9.0e18L)
                    q = big(static_cast<i64>(r));
                else
                    mpz_set_d(q.get_mpz_t(), static_cast<double>(r));
                sub_row(pos, j, q);
                for (std::size_t l = 0; l < j; ++l) mu[pos][l] -= r * mu[j][l];
                mu[pos][j] -= r;
                changed = true;
            }
            if (!changed) break;
        }
        gso_row(pos);
        const long double m = mu[pos][pos - 1];
        if (B[pos] < (delta - m * m) * B[pos - 1]) {
            swap_rows(pos, pos - 1);
            if (pos == 1) {
                gso_row(0);
            } else {
                --pos;
            }
        } else {
            ++pos;
        }
    }
    return Matrix(basis.cols(), std::move(b));
}

/// Enumerates integer coordinate vectors x != 0 with Q(x * basis) <= bound,
/// visiting one of each pair {x, -x}. The callback receives x and the exact
/// value Q; returning false stops the enumeration. Returns false if stopped.
class ShortVectorEnumerator {
public:
    ShortVectorEnumerator(const Matrix& basis, const Matrix& gram) : basis_(basis), k_(basis.rows()) {
        A_.assign(k_, std::vector<BigInt>(k_));
        std::vector<Row> bg(k_);
        for (std::size_t i = 0; i < k_; ++i) bg[i] = row_times(basis.row(i), gram);
        small_ = true;
        for (std::size_t i = 0; i < k_; ++i)
            for (std::size_t j = 0; j < k_; ++j) {
                BigInt s = 0;
                for (std::size_t c = 0; c < basis.cols(); ++c)
                    mpz_addmul(s.get_mpz_t(), bg[i][c].get_mpz_t(), basis(j, c).get_mpz_t());
                A_[i][j] = s;
                if (bit_length(s) > 60) small_ = false;
            }
        if (small_) {
            Ai_.assign(k_, std::vector<std::int64_t>(k_));
            for (std::size_t i = 0; i < k_; ++i)
                for (std::size_t j = 0; j < k_; ++j) Ai_[i][j] = to_i64(A_[i][j]);
        }
        mu_.assign(k_, std::vector<long double>(k_, 0));
        B_.assign(k_, 0);
        for (std::size_t i = 0; i < k_; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                long double s = as_ld(A_[i][j]);
                for (std::size_t l = 0; l < j; ++l) s -= mu_[j][l] * mu_[i][l] * B_[l];
                mu_[i][j] = s / B_[j];
            }
            long double s = as_ld(A_[i][i]);
            for (std::size_t l = 0; l < i; ++l) s -= mu_[i][l] * mu_[i][l] * B_[l];
            B_[i] = s;
            if (!(B_[i] > 0)) throw std::domain_error("ShortVectorEnumerator: degenerate basis");
        }
    }

    std::size_t dimension() const { return k_; }
    const Matrix& basis() const { return basis_; }

    /// Exact Q of a coordinate vector.
    BigInt exact_value(const std::vector<std::int64_t>& x) const {
        if (small_) {
            bool ok = true;
            for (auto v : x)
                if (v > (1 << 20) || v < -(1 << 20)) ok = false;
            if (ok) {
                __int128 s = 0;
                for (std::size_t i = 0; i < k_; ++i) {
                    if (x[i] == 0) continue;
                    __int128 row = 0;
                    for (std::size_t j = 0; j < k_; ++j) row += static_cast<__int128>(Ai_[i][j]) * x[j];
                    s += row * x[i];
                }
                return from_i128(s);
            }
        }
        BigInt s = 0;
        for (std::size_t i = 0; i < k_; ++i)
            for (std::size_t j = 0; j < k_; ++j) s += A_[i][j] * big(x[i]) * big(x[j]);
        return s;
    }

    /// Lattice vector x * basis.
    Row vector_of(const std::vector<std::int64_t>& x) const {
        Row v(basis_.cols(), 0);
        for (std::size_t i = 0; i < k_; ++i) {
            if (x[i] == 0) continue;
            const BigInt c = big(x[i]);
            detail::axpy(v, c, basis_.row(i));
        }
        return v;
    }

    bool enumerate(const BigInt& bound,
                   const std::function<bool(const std::vector<std::int64_t>&, const BigInt&)>& visit) const {
        if (k_ == 0) return true;
        const long double R = as_ld(bound) + 0.5L + 1e-12L * as_ld(bound);
        std::vector<std::int64_t> x(k_, 0);
        std::vector<long double> partial(k_ + 1, 0);
        return rec(k_ - 1, true, R, x, partial, bound, visit);
    }

private:
    static long double as_ld(const BigInt& v) { return detail::to_ld(v); }
    static BigInt from_i128(__int128 v) {
        const bool neg = v < 0;
        unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
        BigInt hi = big_u(static_cast<std::uint64_t>(u >> 64));
        BigInt lo = big_u(static_cast<std::uint64_t>(u));
        BigInt r = (hi << 64) + lo;
        return neg ? BigInt(-r) : r;
    }

    bool rec(std::size_t level, bool top_zero, long double R, std::vector<std::int64_t>& x,
             std::vector<long double>& partial, const BigInt& bound,
             const std::function<bool(const std::vector<std::int64_t>&, const BigInt&)>& visit) const {
        long double c = 0;
        for (std::size_t j = level + 1; j < k_; ++j) c += mu_[j][level] * static_cast<long double>(x[j]);
        const long double rem = R - partial[level + 1];
        if (rem < 0) return true;
        const long double rad = std::sqrt(rem / B_[level]);
        const long double lo_f = std::ceil(-c - rad), hi_f = std::floor(-c + rad);
        if (hi_f < lo_f) return true;
        if (hi_f > 4.0e18L || lo_f < -4.0e18L) throw std::overflow_error("enumeration radius too large");
        std::int64_t lo = static_cast<std::int64_t>(lo_f), hi = static_cast<std::int64_t>(hi_f);
        if (top_zero && lo < 0) lo = 0;  // the first nonzero top coordinate is taken positive
        for (std::int64_t v = lo; v <= hi; ++v) {
            x[level] = v;
            const long double y = static_cast<long double>(v) + c;
            partial[level] = partial[level + 1] + y * y * B_[level];
            if (partial[level] > R) continue;
            const bool still_zero = top_zero && v == 0;
            if (level == 0) {
                if (still_zero) continue;
                const BigInt q = exact_value(x);
                if (q <= bound && !visit(x, q)) {
                    x[level] = 0;
                    return false;
                }
            } else if (!rec(level - 1, still_zero, R, x, partial, bound, visit)) {
                x[level] = 0;
                return false;
            }
        }
        x[level] = 0;
        return true;
    }

    Matrix basis_;
    std::size_t k_;
    bool small_ = false;
    std::vector<std::vector<BigInt>> A_;
    std::vector<std::vector<std::int64_t>> Ai_;
    std::vector<std::vector<long double>> mu_;
    std::vector<long double> B_;
};

}  // namespace noether
