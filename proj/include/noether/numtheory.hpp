#pragma once

// Elementary number theory on machine integers and BigInts: valuations,
// multiplicative orders, cyclotomic values, the m' decomposition used with
// prime-order twists, splitting of primes in cyclotomic fields, and the
// Conductors of the cyclotomic rings with class number one.

#include "noether/bigint.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace noether {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

inline u64 powmod(u64 base, u64 e, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    base %= m;
    while (e) {
        if (e & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

inline u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }

/// Deterministic Miller-Rabin for all 64-bit inputs.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    static constexpr std::array<u64, 12> small{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : small) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : small) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace detail {

inline u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

inline void factor_rec(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace detail

/// Prime factorization as ascending (prime, exponent) pairs. factorize(1) is empty.
inline std::vector<std::pair<u64, unsigned>> factorize(u64 n) {
    if (n == 0) throw std::invalid_argument("factorize(0)");
    std::vector<u64> primes;
    for (u64 p = 2; p < 1000 && p * p <= n; ++p) {
        while (n % p == 0) {
            primes.push_back(p);
            n /= p;
        }
    }
    detail::factor_rec(n, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<u64, unsigned>> out;
    for (u64 p : primes) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.emplace_back(p, 1u);
    }
    return out;
}

inline u64 euler_phi(u64 n) {
    u64 r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

inline std::vector<u64> divisors(u64 n) {
    std::vector<u64> ds{1};
    for (auto [p, e] : factorize(n)) {
        const std::size_t base = ds.size();
        u64 pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

inline int moebius(u64 n) {
    int mu = 1;
    for (auto [p, e] : factorize(n)) {
        if (e > 1) return 0;
        mu = -mu;
    }
    return mu;
}

inline u64 ipow(u64 b, unsigned e) {
    u64 r = 1;
    while (e--) r *= b;
    return r;
}

inline bool is_prime_power(u64 m, u64* prime = nullptr, unsigned* exponent = nullptr) {
    if (m < 2) return false;
    auto f = factorize(m);
    if (f.size() != 1) return false;
    if (prime) *prime = f[0].first;
    if (exponent) *exponent = f[0].second;
    return true;
}

/// Exponent of the prime p in m. Throws for m = 0.
inline unsigned ord_p(const BigInt& p, const BigInt& m) {
    if (sgn(m) == 0) throw std::invalid_argument("ord_p: m must be nonzero");
    if (p < 2) throw std::invalid_argument("ord_p: p must be prime");
    BigInt v = babs(m);
    unsigned e = 0;
    while (divides(p, v)) {
        v = divexact(v, p);
        ++e;
    }
    return e;
}

inline u64 reduce_mod(i64 t, u64 m) {
    i64 r = t % static_cast<i64>(m);
    if (r < 0) r += static_cast<i64>(m);
    return static_cast<u64>(r);
}

/// Order of t in (Z/mZ)^x, or nullopt when gcd(t, m) != 1. mult_order(t, 1) = 1.
inline std::optional<u64> mult_order(i64 t, u64 m) {
    if (m == 0) throw std::invalid_argument("mult_order: m must be positive");
    if (m == 1) return 1;
    const u64 tr = reduce_mod(t, m);
    if (gcd_u64(tr, m) != 1) return std::nullopt;
    u64 ord = euler_phi(m);
    for (auto [p, e] : factorize(ord)) {
        for (unsigned k = 0; k < e; ++k) {
            if (powmod(tr, ord / p, m) == 1)
                ord /= p;
            else
                break;
        }
    }
    return ord;
}

/// Phi_e(t) exactly, via the product of (t^d - 1)^{mu(e/d)} over d | e.
/// At a root of unity t (t = 1, or t = -1 with e = 2) the quotient form
/// degenerates and Horner evaluation of the explicit polynomial is used instead.
inline BigInt phi_eval(u64 e, const BigInt& t);

/// Residues t in [1, m) of multiplicative order exactly n modulo m, ascending.
inline std::vector<u64> order_n_residues(u64 m, u64 n) {
    std::vector<u64> out;
    if (m == 1) {
        if (n == 1) out.push_back(0);
        return out;
    }
    for (u64 t = 1; t < m; ++t) {
        auto o = mult_order(static_cast<i64>(t), m);
        if (o && *o == n) out.push_back(t);
    }
    return out;
}

/// p splits completely in Z[zeta_n] iff p does not divide n and p = 1 mod n.
inline bool splits_completely(u64 p, u64 n) {
    if (n == 0) throw std::invalid_argument("splits_completely: n must be positive");
    return n % p != 0 && p % n == 1 % n;
}

/// Z[zeta_n] is a UFD exactly for these n.
inline bool is_ufd_cyclotomic(u64 n) {
    static constexpr std::array<u64, 24> extra{24, 25, 26, 27, 28, 30, 32, 33, 34, 35, 36, 38,
                                               40, 42, 44, 45, 48, 50, 54, 60, 66, 70, 84, 90};
    if (n >= 1 && n <= 22) return true;
    return std::find(extra.begin(), extra.end(), n) != extra.end();
}

/// Class numbers h_n of Q(zeta_n). This is external reference data (the
/// standard tables) for n <= 25, plus h_n = 1 for every UFD conductor.
inline std::optional<u64> class_number(u64 n) {
    if (is_ufd_cyclotomic(n)) return 1;
    if (n == 23 || n == 46) return 3;
    return std::nullopt;
}

/// Primes p <= limit in ascending order (sieve of Eratosthenes).
inline std::vector<u64> primes_up_to(u64 limit) {
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

/// Roots of Phi_n modulo a prime p with p = 1 mod n, ascending. These are the
/// residues of multiplicative order exactly n.
inline std::vector<u64> cyclotomic_roots_mod_p(u64 n, u64 p) {
    if (!is_prime(p) || !splits_completely(p, n))
        throw std::invalid_argument("cyclotomic_roots_mod_p: need prime p = 1 mod n");
    if (n == 1) return {1 % p};
    u64 zeta = 0;
    const auto nf = factorize(n);
    for (u64 g = 2; g < p && zeta == 0; ++g) {
        u64 c = powmod(g, (p - 1) / n, p);
        bool exact = true;
        for (auto [q, e] : nf) {
            if (powmod(c, n / q, p) == 1) {
                exact = false;
                break;
            }
        }
        if (exact) zeta = c;
    }
    std::vector<u64> roots;
    for (u64 k = 1; k < n; ++k)
        if (gcd_u64(k, n) == 1) roots.push_back(powmod(zeta, k, p));
    if (n == 2) roots = {p - 1};
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// Decomposition of m attached to a twist t of prime order q modulo m.
struct MPrimeDecomposition {
    u64 m = 1;
    u64 q = 2;
    u64 m_prime = 1;   // m / gcd(m, t - 1)
    u64 m_dprime = 1;  // product of p^d || m with p != q and p not dividing t - 1
    u64 m1 = 1;
    u64 m2 = 1;
    unsigned d0 = 0;  // ord_q(m)
    bool q_divides_m_prime = false;
};

inline MPrimeDecomposition m_prime_decomposition(u64 m, i64 t, u64 q) {
    if (!is_prime(q)) throw std::invalid_argument("m_prime_decomposition: q must be prime");
    auto ord = mult_order(t, m);
    if (!ord || *ord != q)
        throw std::invalid_argument("m_prime_decomposition: t is not of order q modulo m");
    const u64 tr = reduce_mod(t, m);
    const u64 tm1 = (tr + m - 1) % m;  // t - 1 reduced mod m; divisibility by divisors of m is preserved
    MPrimeDecomposition r;
    r.m = m;
    r.q = q;
    r.m_prime = m / gcd_u64(m, tm1);
    for (auto [p, e] : factorize(m)) {
        const u64 pe = ipow(p, e);
        if (p == q)
            r.d0 = e;
        else if (tm1 % p != 0)
            r.m_dprime *= pe;
    }
    r.q_divides_m_prime = r.m_prime % q == 0;
    r.m2 = r.q_divides_m_prime ? ipow(q, r.d0) * r.m_dprime : r.m_dprime;
    r.m1 = m / r.m2;

    // The valuation dichotomy: m' = q m'' iff 1 <= ord_q(t - 1) < ord_q(m).
    // It needs q odd; for q = 2 (e.g. m = 8, t = 7) it fails and is not checked.
    if (q == 2) return r;
    unsigned vq = 0;
    if (tm1 == 0) {
        vq = r.d0;
    } else {
        for (u64 v = tm1; v % q == 0 && vq < r.d0; v /= q) ++vq;
    }
    const bool middle = vq >= 1 && vq < r.d0;
    const bool ok = middle ? (r.m_prime == q * r.m_dprime && vq + 1 == r.d0)
                           : (r.m_prime == r.m_dprime);
    if (!ok || gcd_u64(r.m1, r.m2) != 1 || tm1 % r.m1 != 0)
        throw std::logic_error("m_prime_decomposition: decomposition invariants violated");
    return r;
}

inline BigInt phi_eval(u64 e, const BigInt& t) {
    if (e == 0) throw std::invalid_argument("phi_eval: e must be positive");
    const bool root_of_unity = (t == 1) || (t == -1 && e % 2 == 0);
    if (root_of_unity) {
        // Horner on the explicit coefficients obtained by the same Moebius product.
        std::vector<BigInt> poly{1};
        std::vector<u64> denom;
        for (u64 d : divisors(e)) {
            int mu = moebius(e / d);
            if (mu == 1) {
                std::vector<BigInt> next(poly.size() + d, 0);
                for (std::size_t i = 0; i < poly.size(); ++i) {
                    next[i + d] += poly[i];
                    next[i] -= poly[i];
                }
                poly = std::move(next);
            } else if (mu == -1) {
                denom.push_back(d);
            }
        }
        for (u64 d : denom) {
            // exact long division by X^d - 1, top coefficient first
            const std::size_t deg = poly.size() - 1;
            std::vector<BigInt> quo(deg - d + 1, 0);
            std::vector<BigInt> rem = poly;
            for (std::size_t i = deg + 1; i-- > d;) {
                BigInt c = rem[i];
                quo[i - d] = c;
                rem[i] -= c;
                rem[i - d] += c;
            }
            poly = std::move(quo);
        }
        BigInt acc = 0;
        for (std::size_t i = poly.size(); i-- > 0;) acc = acc * t + poly[i];
        return acc;
    }
    BigInt num = 1, den = 1;
    for (u64 d : divisors(e)) {
        int mu = moebius(e / d);
        if (mu == 0) continue;
        BigInt term = bpow(t, static_cast<unsigned long>(d)) - 1;
        if (mu == 1)
            num *= term;
        else
            den *= term;
    }
    return divexact(num, den);
}

}  // namespace noether
