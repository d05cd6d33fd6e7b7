#pragma once

// Exact arithmetic in Z[zeta_n] on the power basis 1, zeta, ..., zeta^{phi(n)-1}.

#include "noether/bigint.hpp"
#include "noether/numtheory.hpp"
#include "noether/poly.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace noether {

/// Shared, immutable per-conductor data: Phi_n and the reductions of zeta^k, 0 <= k < n.
struct CyclotomicRing {
    u64 n = 1;
    std::size_t phi = 1;
    IntPoly modulus;
    std::vector<std::vector<BigInt>> zeta_pow;  // zeta_pow[k] = power-basis vector of zeta^k

    static std::shared_ptr<const CyclotomicRing> get(u64 n) {
        if (n == 0) throw std::invalid_argument("conductor must be positive");
        static std::mutex mtx;
        static std::map<u64, std::shared_ptr<const CyclotomicRing>> cache;
        {
            std::lock_guard<std::mutex> lock(mtx);
            auto it = cache.find(n);
            if (it != cache.end()) return it->second;
        }
        auto ring = std::make_shared<CyclotomicRing>();
        ring->n = n;
        ring->modulus = cyclotomic_poly(n);
        ring->phi = static_cast<std::size_t>(ring->modulus.degree());
        ring->zeta_pow.reserve(n);
        for (u64 k = 0; k < n; ++k) {
            auto r = IntPoly::monomial(k).rem_monic(ring->modulus).coeffs();
            r.resize(ring->phi, 0);
            ring->zeta_pow.push_back(std::move(r));
        }
        std::lock_guard<std::mutex> lock(mtx);
        auto [it, inserted] = cache.emplace(n, ring);
        return it->second;
    }
};

/// Element of Z[zeta_n]; coefficient vector of length exactly phi(n).
class CycInt {
public:
    CycInt() : CycInt(1) {}
    explicit CycInt(u64 conductor) : ring_(CyclotomicRing::get(conductor)), c_(ring_->phi, 0) {}

    static CycInt from_int(u64 n, const BigInt& v) {
        CycInt r(n);
        r.c_[0] = v;
        return r;
    }
    static CycInt from_coeffs(u64 n, std::vector<BigInt> coeffs) {
        CycInt r(n);
        if (coeffs.size() != r.c_.size())
            throw std::invalid_argument("CycInt: coefficient vector must have length phi(n)");
        r.c_ = std::move(coeffs);
        return r;
    }
    /// Reduces an arbitrary polynomial in zeta modulo Phi_n.
    static CycInt from_poly(u64 n, const IntPoly& p) {
        CycInt r(n);
        auto red = p.rem_monic(r.ring_->modulus).coeffs();
        for (std::size_t i = 0; i < red.size(); ++i) r.c_[i] = red[i];
        return r;
    }
    static CycInt zeta(u64 n, u64 k = 1) {
        CycInt r(n);
        r.c_ = r.ring_->zeta_pow[k % n];
        return r;
    }

    u64 conductor() const { return ring_->n; }
    std::size_t degree() const { return ring_->phi; }
    const std::vector<BigInt>& coeffs() const { return c_; }
    const BigInt& operator[](std::size_t i) const { return c_[i]; }
    const CyclotomicRing& ring() const { return *ring_; }

    bool is_zero() const {
        for (const auto& a : c_)
            if (sgn(a) != 0) return false;
        return true;
    }

    IntPoly to_poly() const { return IntPoly(c_); }

    friend bool operator==(const CycInt& a, const CycInt& b) {
        return a.conductor() == b.conductor() && a.c_ == b.c_;
    }
    friend bool operator!=(const CycInt& a, const CycInt& b) { return !(a == b); }

    friend CycInt operator+(const CycInt& a, const CycInt& b) {
        check_same(a, b);
        CycInt r = a;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
        return r;
    }
    friend CycInt operator-(const CycInt& a, const CycInt& b) {
        check_same(a, b);
        CycInt r = a;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
        return r;
    }
    friend CycInt operator-(const CycInt& a) {
        CycInt r = a;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend CycInt operator*(const BigInt& s, const CycInt& a) {
        CycInt r = a;
        for (auto& x : r.c_) x *= s;
        return r;
    }
    friend CycInt operator*(const CycInt& a, const CycInt& b) {
        check_same(a, b);
        const std::size_t d = a.c_.size();
        const auto& mod = a.ring_->modulus.coeffs();
        std::vector<BigInt> prod(2 * d - 1, 0);
        for (std::size_t i = 0; i < d; ++i) {
            if (sgn(a.c_[i]) == 0) continue;
            for (std::size_t j = 0; j < d; ++j) {
                if (sgn(b.c_[j]) == 0) continue;
                mpz_addmul(prod[i + j].get_mpz_t(), a.c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
            }
        }
        for (std::size_t i = prod.size(); i-- > d;) {
            if (sgn(prod[i]) == 0) continue;
            const BigInt q = prod[i];
            for (std::size_t j = 0; j <= d; ++j)
                mpz_submul(prod[i - d + j].get_mpz_t(), q.get_mpz_t(), mod[j].get_mpz_t());
        }
        prod.resize(d);
        CycInt r(a.conductor());
        r.c_ = std::move(prod);
        return r;
    }

    CycInt& operator+=(const CycInt& b) { return *this = *this + b; }
    CycInt& operator-=(const CycInt& b) { return *this = *this - b; }
    CycInt& operator*=(const CycInt& b) { return *this = *this * b; }

    /// Readable form using z for zeta_n, lowest power first: "3 + z - 2*z^3".
    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            const BigInt& a = c_[k];
            if (sgn(a) == 0) continue;
            const BigInt mag = babs(a);
            if (first)
                os << (sgn(a) < 0 ? "-" : "");
            else
                os << (sgn(a) < 0 ? " - " : " + ");
            first = false;
            if (k == 0) {
                os << mag.get_str();
                continue;
            }
            if (mag != 1) os << mag.get_str() << "*";
            os << "z";
            if (k > 1) os << "^" << k;
        }
        return first ? "0" : os.str();
    }

private:
    static void check_same(const CycInt& a, const CycInt& b) {
        if (a.conductor() != b.conductor())
            throw std::invalid_argument("CycInt: conductor mismatch");
    }

    std::shared_ptr<const CyclotomicRing> ring_;
    std::vector<BigInt> c_;
};

/// Galois automorphism zeta -> zeta^u; requires gcd(u, n) = 1.
inline CycInt conjugate(const CycInt& a, i64 u) {
    const u64 n = a.conductor();
    const u64 ur = reduce_mod(u, n);
    if (gcd_u64(ur, n) != 1) throw std::invalid_argument("conjugate: gcd(u, n) != 1");
    const auto& zp = a.ring().zeta_pow;
    std::vector<BigInt> r(a.degree(), 0);
    for (std::size_t i = 0; i < a.degree(); ++i) {
        if (sgn(a[i]) == 0) continue;
        const auto& img = zp[static_cast<std::size_t>(mulmod(i, ur, n))];
        for (std::size_t j = 0; j < r.size(); ++j)
            if (sgn(img[j]) != 0) mpz_addmul(r[j].get_mpz_t(), a[i].get_mpz_t(), img[j].get_mpz_t());
    }
    return CycInt::from_coeffs(n, std::move(r));
}

/// N_{Q(zeta_n)/Q}(a), signed, as Res(Phi_n, a).
inline BigInt absolute_norm(const CycInt& a) {
    if (a.is_zero()) return 0;
    return resultant(a.ring().modulus, a.to_poly());
}

/// Trace of zeta_n^k: the Ramanujan sum c_n(k) = mu(n/g) phi(n) / phi(n/g), g = gcd(k, n).
inline i64 zeta_trace(u64 n, i64 k) {
    const u64 g = gcd_u64(reduce_mod(k, n), n);
    const u64 r = n / g;
    return static_cast<i64>(moebius(r)) * static_cast<i64>(euler_phi(n) / euler_phi(r));
}

/// Relative norm N_{Q(zeta_n)/Q(zeta_e)}(a), expressed on the zeta_e power basis.
inline CycInt relative_norm(const CycInt& a, u64 e) {
    const u64 n = a.conductor();
    if (e == 0 || n % e != 0) throw std::invalid_argument("relative_norm: e must divide n");
    CycInt prod = CycInt::from_int(n, 1);
    for (u64 u = 1; u <= n; ++u) {
        if (gcd_u64(u, n) != 1 || u % e != 1 % e) continue;
        prod *= conjugate(a, static_cast<i64>(u));
    }
    // Solve prod = sum_j c_j zeta_n^{j n/e} over Q; the solution must be integral.
    const std::size_t de = static_cast<std::size_t>(euler_phi(e));
    const std::size_t dn = a.degree();
    const auto& zp = a.ring().zeta_pow;
    // Augmented system, one row per power-basis coordinate of Q(zeta_n).
    std::vector<std::vector<mpq_class>> m(dn, std::vector<mpq_class>(de + 1));
    for (std::size_t j = 0; j < de; ++j) {
        const auto& col = zp[static_cast<std::size_t>((j * (n / e)) % n)];
        for (std::size_t i = 0; i < dn; ++i) m[i][j] = col[i];
    }
    for (std::size_t i = 0; i < dn; ++i) m[i][de] = prod[i];
    std::size_t row = 0;
    std::vector<std::size_t> pivcol;
    for (std::size_t col = 0; col < de && row < dn; ++col) {
        std::size_t p = row;
        while (p < dn && sgn(m[p][col]) == 0) ++p;
        if (p == dn) continue;
        std::swap(m[p], m[row]);
        for (std::size_t i = 0; i < dn; ++i) {
            if (i == row || sgn(m[i][col]) == 0) continue;
            const mpq_class f = m[i][col] / m[row][col];
            for (std::size_t k = col; k <= de; ++k) m[i][k] -= f * m[row][k];
        }
        pivcol.push_back(col);
        ++row;
    }
    if (row != de) throw std::logic_error("relative_norm: subfield basis is degenerate");
    for (std::size_t i = row; i < dn; ++i)
        if (sgn(m[i][de]) != 0) throw std::logic_error("relative_norm: result not in the subfield");
    std::vector<BigInt> out(de, 0);
    for (std::size_t r = 0; r < row; ++r) {
        mpq_class v = m[r][de] / m[r][pivcol[r]];
        v.canonicalize();
        if (v.get_den() != 1) throw std::logic_error("relative_norm: non-integral subfield coordinates");
        out[pivcol[r]] = v.get_num();
    }
    return CycInt::from_coeffs(e, std::move(out));
}

}  // namespace noether
