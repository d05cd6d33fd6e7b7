#pragma once

// Exhaustive property grids shared by the unit tests (small parameters) and
// the acceptance binary (full parameters). Each returns a tally of checks and
// violations with the first few failures spelled out.

#include "noether/noether.hpp"
#include "oracles.hpp"

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace grids {

using namespace noether;

struct Tally {
    std::uint64_t checks = 0;
    std::uint64_t violations = 0;
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (ok) return;
        ++violations;
        if (failures.size() < 8) failures.push_back(what);
    }
    void merge(const Tally& o) {
        checks += o.checks;
        violations += o.violations;
        for (const auto& f : o.failures)
            if (failures.size() < 8) failures.push_back(f);
    }
    bool ok() const { return violations == 0 && checks > 0; }
};

inline std::string tag(std::initializer_list<std::pair<const char*, std::string>> kv) {
    std::ostringstream os;
    for (const auto& [k, v] : kv) os << k << "=" << v << " ";
    return os.str();
}

inline std::string str(u64 v) { return std::to_string(v); }

// ---------------------------------------------------------------------------

/// prod_{d | n} Phi_d = X^n - 1.
inline Tally cyclotomic_product(u64 nmax) {
    Tally t;
    for (u64 n = 1; n <= nmax; ++n) {
        IntPoly p = IntPoly::constant(1);
        for (u64 d : divisors(n)) p = p * cyclotomic_poly(d);
        t.expect(p == IntPoly::monomial(n) - IntPoly::constant(1), tag({{"n", str(n)}}));
    }
    return t;
}

/// Residues of (Z/mZ)^x grouped by order; residue 1 lifted to 1 + m so no value below is zero.
inline std::map<u64, std::vector<BigInt>> lifts_by_order(u64 m) {
    std::map<u64, std::vector<BigInt>> out;
    for (u64 t = 1; t < m; ++t)
        if (auto o = mult_order(static_cast<i64>(t), m)) out[*o].push_back(t == 1 ? big_u(1 + m) : big_u(t));
    return out;
}

inline unsigned vp(u64 p, const BigInt& v) { return ord_p(big_u(p), v); }

/// Valuations of Phi_e(t) and t^l - 1 at a prime p >= 3, t of order n mod p.
inline Tally valuations_at_prime(u64 pmax, u64 lmax, u64 emax) {
    Tally tl;
    for (u64 p : primes_up_to(pmax)) {
        if (p < 3) continue;
        for (const auto& [n, ts] : lifts_by_order(p)) {
            for (const BigInt& t : ts) {
                const std::string at = tag({{"p", str(p)}, {"n", str(n)}, {"t", t.get_str()}});
                const unsigned base = vp(p, bpow(t, n) - 1);
                tl.expect(vp(p, phi_eval(n, t)) == base && base >= 1, at + "ord Phi_n(t) = ord(t^n - 1) >= 1");
                for (u64 e = 1; e <= emax; ++e) {
                    u64 r = e;
                    while (r % p == 0) r /= p;
                    const bool form = r == n;
                    const unsigned v = vp(p, phi_eval(e, t));
                    if (form && e != n) tl.expect(v == 1, at + "e=" + str(e) + " ord Phi_{p^d n}(t) = 1");
                    if (!form) tl.expect(v == 0, at + "e=" + str(e) + " ord Phi_e(t) = 0");
                }
                for (u64 l = 1; l <= lmax; ++l) {
                    const unsigned v = vp(p, bpow(t, l) - 1);
                    if (l % n != 0)
                        tl.expect(v == 0, at + "l=" + str(l) + " ord(t^l - 1) = 0");
                    else
                        tl.expect(v == base + vp(p, big_u(l)), at + "l=" + str(l) + " ord(t^l - 1) = ord(t^n - 1) + ord(l)");
                }
            }
        }
    }
    return tl;
}

/// Valuations at p for t of order n = p^{d0} n0 modulo p^d.
inline Tally valuations_at_prime_power(const std::vector<u64>& primes, unsigned dmax) {
    Tally tl;
    for (u64 p : primes) {
        for (unsigned d = 1; d <= dmax; ++d) {
            const u64 m = ipow(p, d);
            for (const auto& [n, ts] : lifts_by_order(m)) {
                u64 n0 = n;
                unsigned d0 = 0;
                while (n0 % p == 0) n0 /= p, ++d0;
                if (d0 > d - 1) continue;
                for (const BigInt& t : ts) {
                    const std::string at =
                        tag({{"p", str(p)}, {"d", str(d)}, {"n", str(n)}, {"t", t.get_str()}});
                    const unsigned v0 = vp(p, phi_eval(n0, t));
                    if (d0 == 0)
                        tl.expect(v0 >= d, at + "ord Phi_{n0}(t) >= d");
                    else
                        tl.expect(v0 == d - d0, at + "ord Phi_{n0}(t) = d - d0");
                    if (d0 >= 1)
                        for (unsigned dp = 1; dp <= d0; ++dp)
                            tl.expect(vp(p, phi_eval(ipow(p, dp) * n0, t)) == 1,
                                      at + "d'=" + str(dp) + " ord Phi_{p^d' n0}(t) = 1");
                    for (unsigned dp = 0; dp <= d0; ++dp)
                        for (u64 np : divisors(n0))
                            if (np < n0)
                                tl.expect(vp(p, phi_eval(ipow(p, dp) * np, t)) == 0,
                                          at + "d'=" + str(dp) + " n'=" + str(np) + " ord Phi_{p^d' n'}(t) = 0");
                }
            }
        }
    }
    return tl;
}

/// ord_2(Phi_{2^d}(t)) = 1 for odd t.
inline Tally valuations_at_two(unsigned dmin, unsigned dmax, u64 tmax) {
    Tally tl;
    for (unsigned d = dmin; d <= dmax; ++d)
        for (u64 t = 1; t <= tmax; t += 2)
            tl.expect(vp(2, phi_eval(ipow(2, d), big_u(t))) == 1, tag({{"d", str(d)}, {"t", str(t)}}));
    return tl;
}

// ---------------------------------------------------------------------------

/// <J, m1 m2> = <J, m1><J, m2> = <J, m1> meet <J, m2> for random J and coprime m1, m2.
inline Tally coprime_moduli(u64 nmax, u64 mmax, unsigned trials, std::uint64_t seed) {
    Tally tl;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<u64> dn(1, nmax), dm(1, mmax);
    std::uniform_int_distribution<int> ng(1, 2);
    for (unsigned k = 0; k < trials; ++k) {
        const u64 n = dn(rng);
        u64 m1 = dm(rng), m2 = dm(rng);
        while (std::gcd(m1, m2) != 1) m2 = dm(rng);
        std::vector<CycInt> J;
        const int g = ng(rng);
        for (int i = 0; i < g; ++i) {
            CycInt a = oracle::random_element(rng, n, 3);
            if (a.is_zero()) a = CycInt::from_int(n, 1);
            J.push_back(a);
        }
        auto with = [&](u64 m) {
            auto gens = J;
            gens.push_back(CycInt::from_int(n, big_u(m)));
            return ideal_from_generators(gens, n);
        };
        const IdealHNF A = with(m1), B = with(m2), C = with(m1 * m2);
        const std::string at = tag({{"n", str(n)}, {"m1", str(m1)}, {"m2", str(m2)}, {"trial", str(k)}});
        tl.expect(ideal_mul(A, B) == C, at + "product");
        tl.expect(ideal_intersection(A, B) == C, at + "intersection");
    }
    return tl;
}

struct PowerTally {
    Tally split;    // proper of norm p exactly in the predicted cases
    Tally literal;  // <zeta_e - t, p^k> = <zeta_e - t, p>^k for every k <= d
    Tally exact;    // <zeta_e - t, p^k> = <zeta_e - t, p>^min(k, ord_p Phi_e(t))
    std::uint64_t literal_misses_with_p_dividing_n = 0;
};

/// Image ideals <zeta_e - t, p^k> for t of order n mod p^d.
inline PowerTally prime_image_powers(u64 pmax, unsigned dmax, u64 phi_e_max, std::size_t t_per_order) {
    PowerTally tl;
    for (u64 p : primes_up_to(pmax)) {
        if (p < 3) continue;
        for (unsigned d = 1; d <= dmax; ++d) {
            const u64 m = ipow(p, d);
            std::map<u64, std::vector<u64>> by_order;
            for (u64 t = 1; t < m; ++t)
                if (auto o = mult_order(static_cast<i64>(t), m)) by_order[*o].push_back(t);
            for (auto& [n, ts] : by_order) {
                u64 n0 = n;
                while (n0 % p == 0) n0 /= p;
                std::vector<u64> pick;
                for (std::size_t i = 0; i < ts.size() && pick.size() < t_per_order; ++i)
                    pick.push_back(ts[i * (ts.size() - 1) / std::max<std::size_t>(t_per_order - 1, 1)]);
                std::sort(pick.begin(), pick.end());
                pick.erase(std::unique(pick.begin(), pick.end()), pick.end());
                for (u64 e : divisors(n)) {
                    if (euler_phi(e) > phi_e_max) continue;
                    u64 np = e;
                    while (np % p == 0) np /= p;
                    const bool proper = np == n0;
                    for (u64 t : pick) {
                        const std::string at =
                            tag({{"m", str(m)}, {"n", str(n)}, {"t", str(t)}, {"e", str(e)}});
                        const IdealHNF P = image_ideal(p, static_cast<i64>(t), e);
                        if (proper)
                            tl.split.expect(P.norm() == big_u(p), at + "proper of norm p");
                        else
                            tl.split.expect(P.is_unit(), at + "unit ideal");
                        BigInt lift = big_u(t);
                        if (sgn(phi_eval(e, lift)) == 0) lift += big_u(m);
                        const unsigned v = vp(p, phi_eval(e, lift));
                        for (unsigned k = 2; k <= d; ++k) {
                            const IdealHNF Q = image_ideal(ipow(p, k), static_cast<i64>(t), e);
                            const bool lit = Q == ideal_power(P, k);
                            tl.literal.expect(lit, at + "power law k=" + str(k));
                            if (!lit && n % p == 0) ++tl.literal_misses_with_p_dividing_n;
                            tl.exact.expect(Q == ideal_power(P, std::min<unsigned>(k, v)),
                                            at + "k=" + str(k) + " exponent min(k, " + str(v) + ")");
                        }
                    }
                }
            }
        }
    }
    return tl;
}

/// <zeta_e - t, p^k> and <zeta_e - t', p^k> are Galois conjugate for t, t' of order n mod p^d.
inline Tally prime_image_conjugacy(u64 pmax, unsigned dmax, u64 phi_n_max) {
    Tally tl;
    for (u64 p : primes_up_to(pmax)) {
        if (p < 3) continue;
        for (unsigned d = 1; d <= dmax; ++d) {
            const u64 m = ipow(p, d);
            if (d >= 2 && euler_phi(m) > 2 * phi_n_max) continue;
            std::map<u64, std::vector<u64>> by_order;
            for (u64 t = 1; t < m; ++t)
                if (auto o = mult_order(static_cast<i64>(t), m)) by_order[*o].push_back(t);
            for (auto& [n, ts] : by_order) {
                if (n < 2 || euler_phi(n) > phi_n_max || ts.size() < 2) continue;
                for (u64 e : divisors(n)) {
                    if (e < 2 || (d == 1 && e != n)) continue;
                    for (unsigned k = 1; k <= d; ++k) {
                        const IdealHNF A = image_ideal(ipow(p, k), static_cast<i64>(ts[0]), e);
                        std::vector<IdealHNF> conj;
                        for (u64 u = 1; u < e; ++u)
                            if (std::gcd(u, e) == 1) conj.push_back(ideal_conjugate(A, static_cast<i64>(u)));
                        for (std::size_t i = 1; i < ts.size(); ++i) {
                            const IdealHNF B = image_ideal(ipow(p, k), static_cast<i64>(ts[i]), e);
                            bool found = false;
                            for (const auto& c : conj)
                                if (c == B) found = true;
                            tl.expect(found, tag({{"m", str(m)}, {"n", str(n)}, {"e", str(e)}, {"k", str(k)},
                                                  {"t", str(ts[0])}, {"t'", str(ts[i])}}));
                        }
                    }
                }
            }
        }
    }
    return tl;
}

// ---------------------------------------------------------------------------

struct IndexTally {
    Tally index, image, cohomology;
    std::uint64_t triples = 0;
};

/// Index, image and cohomology checks for M = <tau - t, m> over m <= mmax, n <= nmax.
inline IndexTally masuda_grid(u64 mmax, u64 nmax) {
    IndexTally r;
    for (u64 m = 1; m <= mmax; ++m) {
        for (u64 n = 1; n <= nmax; ++n) {
            for (u64 t : order_n_residues(m, n)) {
                ++r.triples;
                const i64 ti = static_cast<i64>(t);
                const std::string at = tag({{"m", str(m)}, {"t", str(t)}, {"n", str(n)}});
                r.index.expect(masuda_index(m, ti, n) == big_u(m), at + "index");
                for (u64 e : divisors(n)) r.image.expect(masuda_image_check(m, ti, n, e), at + "e=" + str(e));
                u64 p = 0;
                const bool hyp = std::gcd(m, n) == 1 || (is_prime_power(m, &p) && p != 2);
                if (hyp) r.cohomology.expect(cohomologically_trivial(masuda_quotient(m, ti, n)), at + "cohomology");
            }
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Certificate grid

/// Every (m, t) with m <= mmax and gcd(t, m) = 1, n = ord(t), plus multi-factor specs.
inline std::vector<GroupSpec> certificate_grid(u64 mmax) {
    std::vector<GroupSpec> out;
    for (u64 m = 1; m <= mmax; ++m) {
        if (m == 1) {
            for (u64 n : {1, 2, 3, 5})
                out.push_back({n, {{1, 0}}});
            continue;
        }
        for (u64 t = 1; t < m; ++t)
            if (auto o = mult_order(static_cast<i64>(t), m)) out.push_back({*o, {{m, static_cast<i64>(t)}}});
    }
    const std::vector<GroupSpec> multi{
        {3, {{7, 2}, {13, 3}}},   {3, {{7, 2}, {9, 4}}},   {3, {{9, 4}, {27, 10}}}, {2, {{3, 2}, {5, 4}}},
        {4, {{5, 2}, {13, 5}}},   {2, {{8, 7}, {16, 15}}}, {2, {{4, 3}, {8, 7}}},   {6, {{7, 3}, {13, 4}}},
        {5, {{11, 3}, {25, 6}}},  {3, {{7, 2}, {4, 3}}},   {6, {{7, 3}, {9, 2}}},   {2, {{9, 8}, {3, 2}}},
    };
    out.insert(out.end(), multi.begin(), multi.end());
    return out;
}

inline std::string spec_key(const GroupSpec& s) {
    std::string k = "n=" + std::to_string(s.n);
    for (const auto& f : s.factors) k += " m=" + std::to_string(f.m);
    return k;
}

/// Every single-bit change of a witness field (generator coefficients, norm, t2) must be rejected.
/// Returns the number of perturbations tried; failures go to the tally.
inline std::uint64_t perturbation_checks(const Certificate& c, Tally& tl) {
    std::uint64_t tried = 0;
    auto flips = [](const BigInt& v) {
        std::vector<BigInt> out;
        const BigInt a = babs(v);
        const std::size_t bits = bit_length(a) + 1;
        for (std::size_t b = 0; b < bits; ++b) {
            BigInt x;
            mpz_combit(x.get_mpz_t(), b);  // x = 2^b
            BigInt y;
            mpz_xor(y.get_mpz_t(), a.get_mpz_t(), x.get_mpz_t());
            out.push_back(sgn(v) < 0 ? BigInt(-y) : y);
        }
        if (sgn(v) != 0) out.push_back(-v);
        return out;
    };
    for (std::size_t w = 0; w < c.witnesses.size(); ++w) {
        const std::string at = spec_key(c.spec) + " witness " + std::to_string(w);
        const auto& coeffs = c.witnesses[w].generator.coeffs();
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            for (const BigInt& v : flips(coeffs[i])) {
                Certificate x = c;
                auto g = coeffs;
                g[i] = v;
                x.witnesses[w].generator = CycInt::from_coeffs(c.witnesses[w].e, std::move(g));
                ++tried;
                tl.expect(!verify_certificate(x).ok, at + " coeff " + std::to_string(i) + " -> " + v.get_str());
            }
        for (const BigInt& v : flips(c.witnesses[w].norm)) {
            Certificate x = c;
            x.witnesses[w].norm = v;
            ++tried;
            tl.expect(!verify_certificate(x).ok, at + " norm -> " + v.get_str());
        }
        for (const BigInt& v : flips(c.witnesses[w].t2)) {
            Certificate x = c;
            x.witnesses[w].t2 = v;
            ++tried;
            tl.expect(!verify_certificate(x).ok, at + " t2 -> " + v.get_str());
        }
    }
    return tried;
}

/// Fingerprint of the t-independent content of a certificate.
inline std::string verdict_profile(const Certificate& c) {
    std::string s = to_string(c.verdict);
    for (const auto& p : c.paths) s += "|" + p.path + ":" + p.result;
    s += "|unknown=" + std::to_string(c.unknown.size());
    return s;
}

}  // namespace grids
