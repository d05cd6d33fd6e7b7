#pragma once

// Ideals of Z[zeta_n] as full-rank row lattices in Hermite form, and a
// budgeted search for generators and for elements of prescribed norm.

#include "noether/bigint.hpp"
#include "noether/cyclotomic.hpp"
#include "noether/matrix.hpp"
#include "noether/numtheory.hpp"
#include "noether/reduction.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace noether {

class IdealHNF {
public:
    IdealHNF() = default;
    /// Wraps a basis already in Hermite form; use the construction functions below.
    IdealHNF(u64 n, Matrix basis) : n_(n), basis_(std::move(basis)) {
        const std::size_t d = static_cast<std::size_t>(euler_phi(n));
        if (basis_.rows() != d || basis_.cols() != d)
            throw std::invalid_argument("IdealHNF: basis must be phi(n) x phi(n)");
    }

    u64 conductor() const { return n_; }
    std::size_t degree() const { return basis_.rows(); }
    const Matrix& basis() const { return basis_; }

    /// |Z[zeta_n] / I|, the product of the diagonal.
    BigInt norm() const {
        BigInt r = 1;
        for (std::size_t i = 0; i < basis_.rows(); ++i) r *= basis_(i, i);
        return r;
    }
    /// Smallest positive rational integer in I.
    const BigInt& min_integer() const { return basis_(0, 0); }
    bool is_unit() const { return norm() == 1; }

    /// If I = <c> for a rational integer c > 0, returns c.
    std::optional<BigInt> scalar_generator() const {
        const BigInt& c = basis_(0, 0);
        for (std::size_t i = 0; i < basis_.rows(); ++i)
            for (std::size_t j = 0; j < basis_.cols(); ++j)
                if (basis_(i, j) != (i == j ? c : BigInt(0))) return std::nullopt;
        return c;
    }

    friend bool operator==(const IdealHNF& a, const IdealHNF& b) { return a.n_ == b.n_ && a.basis_ == b.basis_; }
    friend bool operator!=(const IdealHNF& a, const IdealHNF& b) { return !(a == b); }

private:
    u64 n_ = 1;
    Matrix basis_{1, {Row{1}}};
};

namespace detail {

/// Coefficients of v * zeta on the power basis.
inline Row times_zeta(const Row& v, const IntPoly& modulus) {
    const std::size_t d = v.size();
    const auto& mod = modulus.coeffs();
    Row r(d, 0);
    for (std::size_t i = 0; i + 1 < d; ++i) r[i + 1] = v[i];
    const BigInt& top = v[d - 1];
    if (sgn(top) != 0)
        for (std::size_t j = 0; j < d; ++j) mpz_submul(r[j].get_mpz_t(), top.get_mpz_t(), mod[j].get_mpz_t());
    return r;
}

inline IdealHNF ideal_from_rows(u64 n, const std::vector<Row>& rows, const BigInt& modulus) {
    const std::size_t d = static_cast<std::size_t>(euler_phi(n));
    Matrix h = hermite_normal_form(Matrix(d, rows), modulus);
    if (h.rows() != d) throw std::logic_error("ideal lattice is not of full rank");
    return IdealHNF(n, std::move(h));
}

/// Z-span of {g zeta^j : g in gens, 0 <= j < phi(n)}.
inline std::vector<Row> ideal_spanning_rows(const std::vector<CycInt>& gens) {
    std::vector<Row> rows;
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        Row v = g.coeffs();
        for (std::size_t j = 0; j < g.degree(); ++j) {
            rows.push_back(v);
            if (j + 1 < g.degree()) v = times_zeta(v, g.ring().modulus);
        }
    }
    return rows;
}

}  // namespace detail

inline IdealHNF ideal_from_generators(const std::vector<CycInt>& gens, u64 n) {
    BigInt D = 0;
    for (const auto& g : gens) {
        if (g.conductor() != n) throw std::invalid_argument("ideal_from_generators: conductor mismatch");
        if (!g.is_zero()) D = bgcd(D, absolute_norm(g));
    }
    if (sgn(D) == 0) throw std::invalid_argument("ideal_from_generators: the zero ideal is not supported");
    return detail::ideal_from_rows(n, detail::ideal_spanning_rows(gens), D);
}

/// The whole ring Z[zeta_n].
inline IdealHNF unit_ideal(u64 n) {
    return IdealHNF(n, Matrix::identity(static_cast<std::size_t>(euler_phi(n))));
}

inline BigInt ideal_norm(const IdealHNF& I) { return I.norm(); }

inline bool ideal_contains(const IdealHNF& I, const CycInt& a) {
    if (a.conductor() != I.conductor()) throw std::invalid_argument("ideal_contains: conductor mismatch");
    return lattice_coordinates(I.basis(), a.coeffs()).has_value();
}

/// Closure of the basis lattice under multiplication by zeta.
inline bool is_ideal(const IdealHNF& I) {
    const auto& mod = CyclotomicRing::get(I.conductor())->modulus;
    for (const auto& r : I.basis().data())
        if (!lattice_coordinates(I.basis(), detail::times_zeta(r, mod))) return false;
    return true;
}

inline IdealHNF ideal_mul(const IdealHNF& I, const IdealHNF& J) {
    if (I.conductor() != J.conductor()) throw std::invalid_argument("ideal_mul: conductor mismatch");
    const u64 n = I.conductor();
    std::vector<CycInt> a, b;
    for (const auto& r : I.basis().data()) a.push_back(CycInt::from_coeffs(n, r));
    for (const auto& r : J.basis().data()) b.push_back(CycInt::from_coeffs(n, r));
    std::vector<Row> rows;
    rows.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b) rows.push_back((x * y).coeffs());
    return detail::ideal_from_rows(n, rows, I.min_integer() * J.min_integer());
}

inline IdealHNF ideal_power(const IdealHNF& I, unsigned k) {
    IdealHNF r = unit_ideal(I.conductor());
    for (unsigned i = 0; i < k; ++i) r = ideal_mul(r, I);
    return r;
}

inline IdealHNF ideal_intersection(const IdealHNF& I, const IdealHNF& J) {
    if (I.conductor() != J.conductor()) throw std::invalid_argument("ideal_intersection: conductor mismatch");
    const Matrix coords = lattice_preimage(I.basis(), J.basis());
    const Matrix rows = coords * I.basis();
    return detail::ideal_from_rows(I.conductor(), rows.data(), blcm(I.min_integer(), J.min_integer()));
}

/// Image of I under zeta -> zeta^u.
inline IdealHNF ideal_conjugate(const IdealHNF& I, i64 u) {
    std::vector<Row> rows;
    for (const auto& r : I.basis().data()) rows.push_back(conjugate(CycInt::from_coeffs(I.conductor(), r), u).coeffs());
    return detail::ideal_from_rows(I.conductor(), rows, I.min_integer());
}

/// <zeta_e - t, m> in Z[zeta_e].
inline IdealHNF image_ideal(const BigInt& m, const BigInt& t, u64 e) {
    if (sgn(m) <= 0) throw std::invalid_argument("image_ideal: m must be positive");
    if (bgcd(t, m) != 1) throw std::invalid_argument("image_ideal: gcd(t, m) != 1");
    CycInt g = CycInt::zeta(e, 1) - CycInt::from_int(e, t);
    return detail::ideal_from_rows(e, detail::ideal_spanning_rows({g, CycInt::from_int(e, m)}), m);
}

inline IdealHNF image_ideal(u64 m, i64 t, u64 e) { return image_ideal(big_u(m), big(t), e); }

// ---------------------------------------------------------------------------
// Principality search

struct Budget {
    std::uint64_t box_radius = 5;
    std::uint64_t max_candidates = 10'000'000;
    double max_seconds = 60.0;
};

enum class Principality { Principal, NotPrincipal, Unknown };

inline const char* to_string(Principality p) {
    switch (p) {
        case Principality::Principal: return "PRINCIPAL";
        case Principality::NotPrincipal: return "NOT_PRINCIPAL";
        default: return "UNKNOWN";
    }
}

struct SearchStats {
    std::uint64_t candidates = 0;   // lattice points examined (one per +- pair)
    std::uint64_t shells = 0;       // completed T2 shells
    std::uint64_t exact_norms = 0;  // resultants computed after the modular filter
    BigInt last_bound = 0;          // largest completed T2 bound
    unsigned escalations = 0;
    bool time_limited = false;
};

struct PrincipalityResult {
    Principality status = Principality::Unknown;
    std::optional<CycInt> witness;
    SearchStats spent;
    Budget budget;
};

/// A generator that must exist (class number one) was not found.
class SearchFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

/// Two primes l = 1 mod n below 2^31 and the roots of Phi_n modulo each.
struct NormSieve {
    std::vector<u64> primes;
    std::vector<std::vector<u64>> roots;

    static std::shared_ptr<const NormSieve> get(u64 n) {
        static std::mutex mtx;
        static std::map<u64, std::shared_ptr<const NormSieve>> cache;
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
        auto s = std::make_shared<NormSieve>();
        const u64 top = (u64{1} << 31) - 1;
        for (u64 k = (top - 1) / n; k > 0 && s->primes.size() < 2; --k) {
            const u64 l = k * n + 1;
            if (l > n && is_prime(l)) {
                s->primes.push_back(l);
                s->roots.push_back(cyclotomic_roots_mod_p(n, l));
            }
        }
        cache.emplace(n, s);
        return s;
    }
};

inline std::optional<PrincipalityResult> scalar_case(const IdealHNF& I, const Budget& budget) {
    if (auto c = I.scalar_generator()) {
        PrincipalityResult r;
        r.status = Principality::Principal;
        r.witness = CycInt::from_int(I.conductor(), *c);
        r.budget = budget;
        return r;
    }
    return std::nullopt;
}

inline void canonical_sign(Row& v) {
    for (const auto& c : v) {
        if (sgn(c) == 0) continue;
        if (sgn(c) < 0)
            for (auto& x : v) x = -x;
        return;
    }
}

/// Shell search for an element of I whose norm has absolute value N(I).
inline PrincipalityResult lattice_generator_search(const IdealHNF& I, const Budget& budget) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

    PrincipalityResult res;
    res.budget = budget;
    const u64 n = I.conductor();
    const std::size_t d = I.degree();
    const BigInt N = I.norm();
    const Matrix G = trace_form_gram(n);
    const ShortVectorEnumerator E(lll_reduce(I.basis(), G), G);

    const auto sieve = NormSieve::get(n);
    const std::size_t np = sieve->primes.size();
    std::vector<std::vector<std::vector<u64>>> ev(np);  // ev[p][i][r]: basis row i at root r mod l_p
    std::vector<u64> plus(np), minus(np);
    for (std::size_t p = 0; p < np; ++p) {
        const u64 l = sieve->primes[p];
        const auto& roots = sieve->roots[p];
        ev[p].assign(d, std::vector<u64>(roots.size(), 0));
        for (std::size_t i = 0; i < d; ++i) {
            std::vector<u64> c(d);
            for (std::size_t j = 0; j < d; ++j) c[j] = mod_u64(E.basis()(i, j), l);
            for (std::size_t r = 0; r < roots.size(); ++r) {
                u64 acc = 0;
                for (std::size_t j = d; j-- > 0;) acc = (mulmod(acc, roots[r], l) + c[j]) % l;
                ev[p][i][r] = acc;
            }
        }
        plus[p] = mod_u64(N, l);
        minus[p] = (l - plus[p]) % l;
    }
    std::vector<u64> xm(d);
    auto passes_filter = [&](const std::vector<std::int64_t>& x) {
        for (std::size_t p = 0; p < np; ++p) {
            const u64 l = sieve->primes[p];
            for (std::size_t i = 0; i < d; ++i) xm[i] = reduce_mod(x[i], l);
            u64 prod = 1;
            for (std::size_t r = 0; r < ev[p][0].size(); ++r) {
                u64 s = 0;
                for (std::size_t i = 0; i < d; ++i)
                    if (xm[i]) s = (s + xm[i] * ev[p][i][r]) % l;
                prod = mulmod(prod, s, l);
                if (prod == 0) break;
            }
            if (prod != plus[p] && prod != minus[p]) return false;
        }
        return true;
    };

    // T2(a) >= phi * |N(a)|^(2/phi) >= phi * N(I)^(2/phi) for nonzero a in I.
    long exp2 = 0;
    const long double mant = mpz_get_d_2exp(&exp2, N.get_mpz_t());
    const long double logN = std::log(mant) + static_cast<long double>(exp2) * std::log(2.0L);
    const long double r0 = static_cast<long double>(d) * std::exp(2.0L * logN / static_cast<long double>(d));
    BigInt R;
    mpz_set_d(R.get_mpz_t(), static_cast<double>(std::floor(r0 * (1 - 1e-12L))));
    if (R < 1) R = 1;
    const long double growth = std::pow(2.0L, 2.0L / static_cast<long double>(d));
    BigInt prev = 0;

    const std::uint64_t hard_cap = 4 * budget.max_candidates + 4096;
    while (true) {
        if (res.spent.candidates >= budget.max_candidates) break;
        if (elapsed() >= budget.max_seconds) {
            res.spent.time_limited = true;
            break;
        }
        std::optional<std::pair<BigInt, Row>> best;
        bool aborted = false;
        E.enumerate(R, [&](const std::vector<std::int64_t>& x, const BigInt& q) {
            if (q <= prev) return true;
            ++res.spent.candidates;
            if ((res.spent.candidates & 4095) == 0 &&
                (res.spent.candidates > hard_cap || elapsed() > 2 * budget.max_seconds)) {
                aborted = true;
                return false;
            }
            if (best && q > best->first) return true;
            if (!passes_filter(x)) return true;
            Row v = E.vector_of(x);
            ++res.spent.exact_norms;
            if (babs(absolute_norm(CycInt::from_coeffs(n, v))) != N) return true;
            canonical_sign(v);
            if (!best || q < best->first || (q == best->first && v < best->second)) best.emplace(q, std::move(v));
            return true;
        });
        if (aborted) {
            res.spent.time_limited = true;
            break;
        }
        ++res.spent.shells;
        res.spent.last_bound = R;
        if (best) {
            res.status = Principality::Principal;
            res.witness = CycInt::from_coeffs(n, std::move(best->second));
            return res;
        }
        prev = R;
        BigInt next;
        mpz_set_d(next.get_mpz_t(), static_cast<double>(std::floor(detail::to_ld(R) * growth)));
        R = next > R ? next : BigInt(R + 1);
    }
    return res;
}

}  // namespace detail

/// Searches for a generator of I. PRINCIPAL results carry a witness a in I
/// with |N(a)| = N(I), which forces <a> = I. For conductors with class number
/// one the search escalates its budget and throws SearchFailure if it still fails.
inline PrincipalityResult find_generator(const IdealHNF& I, const Budget& budget = {}) {
    if (auto r = detail::scalar_case(I, budget)) return *r;
    PrincipalityResult res = detail::lattice_generator_search(I, budget);
    if (res.status == Principality::Principal || !is_ufd_cyclotomic(I.conductor())) return res;
    Budget b = budget;
    for (unsigned k = 1; k <= 3; ++k) {
        b.max_candidates *= 8;
        b.max_seconds *= 8;
        res = detail::lattice_generator_search(I, b);
        res.spent.escalations = k;
        res.budget = budget;
        if (res.status == Principality::Principal) return res;
    }
    throw SearchFailure("no generator found for an ideal of norm " + I.norm().get_str() + " in Z[zeta_" +
                        std::to_string(I.conductor()) + "], which has class number one");
}

namespace detail {

/// Roots of Phi_n modulo T by direct scan, ascending, at most `cap` of them.
inline std::vector<u64> scan_cyclotomic_roots(u64 n, u64 T, std::size_t cap) {
    const IntPoly phi_n = cyclotomic_poly(n);
    const auto& coeffs = phi_n.coeffs();
    std::vector<u64> c;
    for (const auto& a : coeffs) c.push_back(mod_u64(a, T));
    std::vector<u64> out;
    for (u64 t = 0; t < T && out.size() < cap; ++t) {
        u64 acc = 0;
        for (std::size_t j = c.size(); j-- > 0;) acc = (mulmod(acc, t, T) + c[j]) % T;
        if (acc == 0) out.push_back(t);
    }
    return out;
}

inline bool is_cyclotomic_root(u64 n, u64 T, u64 t) {
    const IntPoly phi_n = cyclotomic_poly(n);
    const auto& coeffs = phi_n.coeffs();
    u64 acc = 0;
    for (std::size_t j = coeffs.size(); j-- > 0;) acc = (mulmod(acc, t % T, T) + mod_u64(coeffs[j], T)) % T;
    return acc == 0;
}

/// Coefficient vectors with max |c_i| = r for r = 0, 1, ..., radius, each radius in
/// lexicographic order; returns the first element with |N| = T.
inline std::optional<CycInt> box_norm_search(u64 n, const BigInt& T, const Budget& budget, SearchStats& stats) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    const std::size_t d = static_cast<std::size_t>(euler_phi(n));
    const i64 radius = static_cast<i64>(budget.box_radius);
    for (i64 r = 1; r <= radius; ++r) {
        std::vector<i64> c(d, -r);
        while (true) {
            bool on_shell = false;
            for (auto v : c)
                if (v == r || v == -r) on_shell = true;
            if (on_shell) {
                if (stats.candidates >= budget.max_candidates) return std::nullopt;
                if ((stats.candidates & 1023) == 0 &&
                    std::chrono::duration<double>(clock::now() - start).count() >= budget.max_seconds) {
                    stats.time_limited = true;
                    return std::nullopt;
                }
                ++stats.candidates;
                std::vector<BigInt> v;
                for (auto x : c) v.push_back(big(x));
                CycInt a = CycInt::from_coeffs(n, std::move(v));
                ++stats.exact_norms;
                if (babs(absolute_norm(a)) == T) return a;
            }
            std::size_t k = d;
            while (k-- > 0) {
                if (c[k] < r) {
                    ++c[k];
                    break;
                }
                c[k] = -r;
            }
            if (k == static_cast<std::size_t>(-1)) break;
        }
        stats.last_bound = r;
    }
    return std::nullopt;
}

}  // namespace detail

/// Element of Z[zeta_n] with |N| = |target|, or nothing within the budget.
/// Degree-one ideals <zeta_n - t, |target|> are tried first (for a prime
/// target one suffices, the others are Galois conjugate); the root `hint`
/// is preferred when it is one. Without any such ideal the coefficient box
/// of budget.box_radius is scanned.
inline std::optional<CycInt> norm_equation_search(u64 n, const BigInt& target, const Budget& budget = {},
                                                  std::optional<u64> hint = std::nullopt,
                                                  SearchStats* stats_out = nullptr) {
    if (sgn(target) == 0) throw std::invalid_argument("norm_equation_search: target must be nonzero");
    SearchStats local;
    SearchStats& stats = stats_out ? *stats_out : local;
    const BigInt T = babs(target);
    if (T == 1) return CycInt::from_int(n, 1);

    std::vector<u64> roots;
    bool ideals_cover_all = false;  // every element of norm T generates a degree-one ideal
    if (mpz_fits_ulong_p(T.get_mpz_t())) {
        const u64 t_u = mpz_get_ui(T.get_mpz_t());
        const std::size_t deg = static_cast<std::size_t>(euler_phi(n));
        const bool scan_ok = t_u <= 200'000'000 / std::max<std::size_t>(deg, 1);
        if (hint && detail::is_cyclotomic_root(n, t_u, *hint)) roots.push_back(*hint % t_u);
        if (is_prime(t_u)) {
            ideals_cover_all = true;
            if (roots.empty()) {
                if (splits_completely(t_u, n))
                    roots.push_back(cyclotomic_roots_mod_p(n, t_u).front());
                else if (n % t_u == 0 && scan_ok) {
                    roots = detail::scan_cyclotomic_roots(n, t_u, 1);
                    if (roots.empty()) return std::nullopt;
                } else if (n % t_u != 0)
                    return std::nullopt;  // t_u has residue degree > 1: no element of norm t_u
            }
        } else if (scan_ok) {
            for (u64 r : detail::scan_cyclotomic_roots(n, t_u, 64))
                if (roots.empty() || r != roots.front()) roots.push_back(r);
        }
    }
    for (u64 t : roots) {
        const IdealHNF I = image_ideal(T, big_u(t), n);
        PrincipalityResult r = find_generator(I, budget);
        stats.candidates += r.spent.candidates;
        stats.shells += r.spent.shells;
        stats.exact_norms += r.spent.exact_norms;
        stats.last_bound = r.spent.last_bound;
        stats.escalations += r.spent.escalations;
        stats.time_limited = stats.time_limited || r.spent.time_limited;
        if (r.status == Principality::Principal) return r.witness;
    }
    if (ideals_cover_all && !roots.empty()) return std::nullopt;
    return detail::box_norm_search(n, T, budget, stats);
}

}  // namespace noether
