#pragma once

// Arbitrary-precision integers are GMP's mpz_class throughout the library.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace noether {

using BigInt = mpz_class;

inline BigInt big(std::int64_t v) {
    BigInt r;
    mpz_set_si(r.get_mpz_t(), static_cast<long>(v));
    return r;
}

inline BigInt big_u(std::uint64_t v) {
    BigInt r;
    mpz_set_ui(r.get_mpz_t(), static_cast<unsigned long>(v));
    return r;
}

/// Parses a decimal integer with optional leading '-'. Rejects anything else.
inline BigInt parse_bigint(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("bad integer literal: " + std::string(s));
    for (std::size_t k = i; k < s.size(); ++k)
        if (s[k] < '0' || s[k] > '9')
            throw std::invalid_argument("bad integer literal: " + std::string(s));
    BigInt r;
    std::string body(s.substr(s[0] == '+' ? 1 : 0));
    if (mpz_set_str(r.get_mpz_t(), body.c_str(), 10) != 0)
        throw std::invalid_argument("bad integer literal: " + std::string(s));
    return r;
}

inline std::string to_string(const BigInt& v) { return v.get_str(10); }

inline bool fits_i64(const BigInt& v) {
    return mpz_fits_slong_p(v.get_mpz_t()) != 0;
}

inline std::int64_t to_i64(const BigInt& v) {
    if (!fits_i64(v)) throw std::overflow_error("integer does not fit in 64 bits");
    return static_cast<std::int64_t>(mpz_get_si(v.get_mpz_t()));
}

inline int sgn(const BigInt& v) { return mpz_sgn(v.get_mpz_t()); }

inline BigInt babs(const BigInt& v) { return abs(v); }

inline BigInt bgcd(const BigInt& a, const BigInt& b) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline BigInt blcm(const BigInt& a, const BigInt& b) {
    BigInt g;
    mpz_lcm(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

/// Extended gcd: returns g >= 0 with g = x*a + y*b.
inline BigInt xgcd(const BigInt& a, const BigInt& b, BigInt& x, BigInt& y) {
    BigInt g;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

/// Floor division (rounds toward negative infinity).
inline BigInt fdiv(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

/// Nonnegative remainder in [0, |b|).
inline BigInt fmod_pos(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

/// Exact division; the caller guarantees b | a.
inline BigInt divexact(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline bool divides(const BigInt& d, const BigInt& a) {
    return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline BigInt bpow(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline std::uint64_t mod_u64(const BigInt& a, std::uint64_t m) {
    BigInt r;
    mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(m));
    return static_cast<std::uint64_t>(mpz_get_ui(r.get_mpz_t()));
}

inline std::size_t bit_length(const BigInt& v) {
    if (sgn(v) == 0) return 0;
    return mpz_sizeinbase(v.get_mpz_t(), 2);
}

inline double to_double(const BigInt& v) { return mpz_get_d(v.get_mpz_t()); }

}  // namespace noether
