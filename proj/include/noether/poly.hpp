#pragma once

// Dense integer polynomials, cyclotomic polynomials and exact resultants.

#include "noether/bigint.hpp"
#include "noether/numtheory.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace noether {

/// Integer polynomial; coeffs[i] is the coefficient of X^i, trailing zeros stripped.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { normalize(); }

    static IntPoly constant(const BigInt& v) { return IntPoly(std::vector<BigInt>{v}); }
    static IntPoly monomial(std::size_t k, const BigInt& v = 1) {
        std::vector<BigInt> c(k + 1, 0);
        c[k] = v;
        return IntPoly(std::move(c));
    }

    const std::vector<BigInt>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    /// Degree; -1 for the zero polynomial.
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const BigInt& lead() const {
        if (c_.empty()) throw std::logic_error("lead() of zero polynomial");
        return c_.back();
    }
    BigInt coeff(std::size_t i) const { return i < c_.size() ? c_[i] : BigInt(0); }

    BigInt content() const {
        BigInt g = 0;
        for (const auto& a : c_) g = bgcd(g, a);
        return g;
    }

    BigInt eval(const BigInt& x) const {
        BigInt acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const IntPoly& a, const IntPoly& b) { return !(a == b); }

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
        std::vector<BigInt> r(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return IntPoly(std::move(r));
    }
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
        std::vector<BigInt> r(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
        return IntPoly(std::move(r));
    }
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<BigInt> r(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (sgn(a.c_[i]) == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return IntPoly(std::move(r));
    }
    friend IntPoly operator*(const BigInt& s, const IntPoly& a) {
        std::vector<BigInt> r = a.c_;
        for (auto& x : r) x *= s;
        return IntPoly(std::move(r));
    }

    /// Remainder modulo a monic polynomial.
    IntPoly rem_monic(const IntPoly& m) const {
        if (m.is_zero() || m.lead() != 1) throw std::invalid_argument("rem_monic: divisor must be monic");
        std::vector<BigInt> r = c_;
        const std::size_t dm = static_cast<std::size_t>(m.degree());
        for (std::size_t i = r.size(); i-- > dm;) {
            if (sgn(r[i]) == 0) continue;
            const BigInt q = r[i];
            for (std::size_t j = 0; j <= dm; ++j) r[i - dm + j] -= q * m.c_[j];
        }
        if (r.size() > dm) r.resize(dm);
        return IntPoly(std::move(r));
    }

    /// Exact quotient by a monic divisor; throws if the remainder is nonzero.
    IntPoly div_exact_monic(const IntPoly& m) const {
        if (m.is_zero() || m.lead() != 1) throw std::invalid_argument("div_exact_monic: divisor must be monic");
        if (degree() < m.degree()) {
            if (!is_zero()) throw std::domain_error("div_exact_monic: nonzero remainder");
            return {};
        }
        std::vector<BigInt> r = c_;
        const std::size_t dm = static_cast<std::size_t>(m.degree());
        std::vector<BigInt> q(r.size() - dm, 0);
        for (std::size_t i = r.size(); i-- > dm;) {
            const BigInt c = r[i];
            q[i - dm] = c;
            if (sgn(c) == 0) continue;
            for (std::size_t j = 0; j <= dm; ++j) r[i - dm + j] -= c * m.c_[j];
        }
        for (std::size_t i = 0; i < dm; ++i)
            if (sgn(r[i]) != 0) throw std::domain_error("div_exact_monic: nonzero remainder");
        return IntPoly(std::move(q));
    }

    /// Human form, highest degree first: "X^4 - X^2 + 1".
    std::string to_string(const char* var = "X") const {
        if (c_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t k = c_.size(); k-- > 0;) {
            const BigInt& a = c_[k];
            if (sgn(a) == 0) continue;
            BigInt mag = babs(a);
            if (first) {
                if (sgn(a) < 0) os << "-";
            } else {
                os << (sgn(a) < 0 ? " - " : " + ");
            }
            first = false;
            const bool unit = mag == 1;
            if (k == 0) {
                os << mag.get_str();
                continue;
            }
            if (!unit) os << mag.get_str() << "*";
            os << var;
            if (k > 1) os << "^" << k;
        }
        return os.str();
    }

private:
    void normalize() {
        while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
    }
    std::vector<BigInt> c_;
};

namespace detail {

/// Multiplies by X^d - 1 in place.
inline std::vector<BigInt> mul_xd_minus_one(const std::vector<BigInt>& p, u64 d) {
    std::vector<BigInt> r(p.size() + d, 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        r[i + d] += p[i];
        r[i] -= p[i];
    }
    return r;
}

/// Exact division by X^d - 1.
inline std::vector<BigInt> div_xd_minus_one(std::vector<BigInt> p, u64 d) {
    const std::size_t deg = p.size() - 1;
    std::vector<BigInt> q(deg - d + 1, 0);
    for (std::size_t i = deg + 1; i-- > d;) {
        const BigInt c = p[i];
        q[i - d] = c;
        p[i] -= c;
        p[i - d] += c;
    }
    for (std::size_t i = 0; i < d; ++i)
        if (sgn(p[i]) != 0) throw std::logic_error("cyclotomic construction: inexact division");
    return q;
}

}  // namespace detail

/// Phi_n, built as the Moebius product of the binomials X^d - 1, d | n.
inline IntPoly cyclotomic_poly(u64 n) {
    if (n == 0) throw std::invalid_argument("cyclotomic_poly: n must be positive");
    static std::mutex mtx;
    static std::map<u64, IntPoly> cache;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    std::vector<BigInt> p{1};
    std::vector<u64> denominators;
    for (u64 d : divisors(n)) {
        const int mu = moebius(n / d);
        if (mu == 1)
            p = detail::mul_xd_minus_one(p, d);
        else if (mu == -1)
            denominators.push_back(d);
    }
    for (u64 d : denominators) p = detail::div_xd_minus_one(std::move(p), d);
    IntPoly result(std::move(p));
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(n, result);
    return result;
}

namespace detail {

/// Pseudo-remainder prem(A, B) = lc(B)^{deg A - deg B + 1} A mod B.
inline IntPoly pseudo_rem(const IntPoly& a, const IntPoly& b) {
    std::vector<BigInt> r = a.coeffs();
    const long db = b.degree();
    long dr = a.degree();
    long e = dr - db + 1;
    const BigInt& lb = b.lead();
    const auto& bc = b.coeffs();
    while (dr >= db && dr >= 0) {
        const BigInt lr = r[static_cast<std::size_t>(dr)];
        for (auto& x : r) x *= lb;
        for (long j = 0; j <= db; ++j) r[static_cast<std::size_t>(dr - db + j)] -= lr * bc[static_cast<std::size_t>(j)];
        --e;
        r.resize(static_cast<std::size_t>(dr));
        while (!r.empty() && sgn(r.back()) == 0) r.pop_back();
        dr = static_cast<long>(r.size()) - 1;
    }
    if (e > 0) {
        const BigInt f = bpow(lb, static_cast<unsigned long>(e));
        for (auto& x : r) x *= f;
    }
    return IntPoly(std::move(r));
}

}  // namespace detail

/// Res(A, B) over Z by the subresultant pseudo-remainder sequence.
inline BigInt resultant(IntPoly A, IntPoly B) {
    if (A.is_zero() || B.is_zero()) return 0;
    if (A.degree() == 0) return bpow(A.lead(), static_cast<unsigned long>(B.degree()));
    if (B.degree() == 0) return bpow(B.lead(), static_cast<unsigned long>(A.degree()));

    const BigInt a = A.content();
    const BigInt b = B.content();
    BigInt t = bpow(a, static_cast<unsigned long>(B.degree())) * bpow(b, static_cast<unsigned long>(A.degree()));
    {
        std::vector<BigInt> ca = A.coeffs(), cb = B.coeffs();
        for (auto& x : ca) x = divexact(x, a);
        for (auto& x : cb) x = divexact(x, b);
        A = IntPoly(std::move(ca));
        B = IntPoly(std::move(cb));
    }
    int s = 1;
    if (A.degree() < B.degree()) {
        std::swap(A, B);
        if ((A.degree() & 1) && (B.degree() & 1)) s = -1;
    }
    BigInt g = 1, h = 1;
    while (true) {
        const long delta = A.degree() - B.degree();
        if ((A.degree() & 1) && (B.degree() & 1)) s = -s;
        IntPoly R = detail::pseudo_rem(A, B);
        A = std::move(B);
        if (R.is_zero()) return 0;
        const BigInt div = g * bpow(h, static_cast<unsigned long>(delta));
        std::vector<BigInt> rc = R.coeffs();
        for (auto& x : rc) x = divexact(x, div);
        B = IntPoly(std::move(rc));
        g = A.lead();
        if (delta == 0) {
            // h unchanged
        } else {
            h = divexact(bpow(g, static_cast<unsigned long>(delta)), bpow(h, static_cast<unsigned long>(delta - 1)));
        }
        if (B.degree() == 0) {
            const long da = A.degree();
            h = divexact(bpow(B.lead(), static_cast<unsigned long>(da)), bpow(h, static_cast<unsigned long>(da - 1)));
            return s * t * h;
        }
    }
}

}  // namespace noether
