#pragma once

// Finitely generated modules over Z[C_n], presented as Z^r / R with tau acting
// on row vectors by v -> v T. Provides the ideal M = <tau - t, m> of the group
// ring, its images in Z[zeta_e], Tate cohomology of cyclic subgroups, and the
// per-divisor class vector of a twisted abelian group.

#include "noether/bigint.hpp"
#include "noether/cyclotomic.hpp"
#include "noether/ideals.hpp"
#include "noether/matrix.hpp"
#include "noether/numtheory.hpp"

#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace noether {

struct CyclicModule {
    u64 n = 1;           // order of tau
    std::size_t rank = 0;
    Matrix relations;    // rows span the relation lattice R in Z^rank
    Matrix action;       // rank x rank, v -> v * action

    /// tau^n acts trivially modulo R and R * T is contained in R.
    bool is_valid() const {
        if (action.rows() != rank || action.cols() != rank) return false;
        const Matrix h = hermite_normal_form(relations);
        auto in_R = [&](const Row& v) {
            if (h.rows() == 0) {
                for (const auto& x : v)
                    if (sgn(x) != 0) return false;
                return true;
            }
            return lattice_coordinates(h, v).has_value();
        };
        for (const auto& r : relations.data())
            if (!in_R(row_times(r, action))) return false;
        Matrix p = Matrix::identity(rank);
        for (u64 k = 0; k < n; ++k) p = p * action;
        for (std::size_t i = 0; i < rank; ++i) {
            Row v = p.row(i);
            v[i] -= 1;
            if (!in_R(v)) return false;
        }
        return true;
    }

    /// Invariants of the underlying abelian group (0 = infinite cyclic factor).
    std::vector<BigInt> group_invariants() const {
        return quotient_invariants(Matrix::identity(rank), relations);
    }
};

namespace detail {

/// Matrix of tau on Z pi = Z^n with basis 1, tau, ..., tau^(n-1): cyclic shift.
inline Matrix regular_action(u64 n) {
    Matrix T(n, n);
    for (u64 i = 0; i < n; ++i) T(i, (i + 1) % n) = 1;
    return T;
}

/// Rows spanning <tau - t, m> in Z pi as a lattice (Hermite form).
inline Matrix masuda_basis(u64 m, i64 t, u64 n) {
    std::vector<Row> rows;
    for (u64 j = 0; j < n; ++j) {
        Row a(n, 0);
        a[(j + 1) % n] += 1;
        a[j] -= big(t);
        rows.push_back(std::move(a));
        Row b(n, 0);
        b[j] = big_u(m);
        rows.push_back(std::move(b));
    }
    return hermite_normal_form(Matrix(n, std::move(rows)), big_u(m));
}

inline void check_masuda_input(u64 m, i64 t, u64 n) {
    if (m == 0 || n == 0) throw std::invalid_argument("masuda: m and n must be positive");
    if (m == 1) return;
    auto o = mult_order(t, m);
    if (!o || *o != n) throw std::invalid_argument("masuda: t is not of order n modulo m");
}

}  // namespace detail

/// M = <tau - t, m> as a free Z pi-lattice: rank n, no relations, tau written in a basis of M.
inline CyclicModule masuda_module(u64 m, i64 t, u64 n) {
    detail::check_masuda_input(m, t, n);
    const Matrix B = detail::masuda_basis(m, t, n);
    const Matrix S = detail::regular_action(n);
    CyclicModule mod;
    mod.n = n;
    mod.rank = n;
    mod.relations = Matrix::empty(n);
    mod.action = Matrix(n, n);
    for (u64 i = 0; i < n; ++i) {
        auto c = lattice_coordinates(B, row_times(B.row(i), S));
        if (!c) throw std::logic_error("masuda_module: lattice not closed under tau");
        for (u64 j = 0; j < n; ++j) mod.action(i, j) = (*c)[j];
    }
    return mod;
}

/// [Z pi : M].
inline BigInt masuda_index(u64 m, i64 t, u64 n) {
    detail::check_masuda_input(m, t, n);
    const Matrix B = detail::masuda_basis(m, t, n);
    BigInt r = 1;
    for (const auto& d : smith_normal_form(B).diagonal()) r *= d;
    return babs(r);
}

/// Z pi / M with the regular action.
inline CyclicModule masuda_quotient(u64 m, i64 t, u64 n) {
    detail::check_masuda_input(m, t, n);
    CyclicModule mod;
    mod.n = n;
    mod.rank = n;
    mod.relations = detail::masuda_basis(m, t, n);
    mod.action = detail::regular_action(n);
    return mod;
}

/// Image of M under Z pi -> Z[zeta_e], tau -> zeta_e, as an ideal.
inline IdealHNF masuda_image(u64 m, i64 t, u64 n, u64 e) {
    if (e == 0 || n % e != 0) throw std::invalid_argument("masuda_image: e must divide n");
    detail::check_masuda_input(m, t, n);
    const Matrix B = detail::masuda_basis(m, t, n);
    std::vector<Row> rows;
    for (const auto& r : B.data()) rows.push_back(CycInt::from_poly(e, IntPoly(r)).coeffs());
    return detail::ideal_from_rows(e, rows, big_u(m));
}

/// Whether the image of M in Z[zeta_e] equals <zeta_e - t, m>.
inline bool masuda_image_check(u64 m, i64 t, u64 n, u64 e) {
    return masuda_image(m, t, n, e) == image_ideal(m, t, e);
}

/// Invariants of the abelian group M / Phi_e(tau) M (0 = infinite cyclic factor).
inline std::vector<BigInt> masuda_quotient_invariants(u64 m, i64 t, u64 n, u64 e) {
    if (e == 0 || n % e != 0) throw std::invalid_argument("masuda_quotient_invariants: e must divide n");
    detail::check_masuda_input(m, t, n);
    const Matrix B = detail::masuda_basis(m, t, n);
    // Phi_e(tau) as an element of Z pi, coefficients folded modulo tau^n - 1.
    const IntPoly phi_e = cyclotomic_poly(e);
    const auto& phi = phi_e.coeffs();
    Matrix P(n, n);  // row i: tau^i * Phi_e(tau)
    for (u64 i = 0; i < n; ++i)
        for (std::size_t k = 0; k < phi.size(); ++k) P(i, (i + k) % n) += phi[k];
    const Matrix sub = B * P;  // b * Phi_e(tau) for each basis row b of M
    return quotient_invariants(B, sub);
}

// ---------------------------------------------------------------------------
// Tate cohomology

namespace detail {

inline Matrix matrix_power(const Matrix& a, u64 k) {
    Matrix r = Matrix::identity(a.rows());
    for (u64 i = 0; i < k; ++i) r = r * a;
    return r;
}

inline Matrix stack(const Matrix& a, const Matrix& b) {
    std::vector<Row> rows = a.data();
    for (const auto& r : b.data()) rows.push_back(r);
    return Matrix(a.cols(), std::move(rows));
}

}  // namespace detail

/// Tate cohomology of the subgroup of order d generated by s = tau^(n/d):
/// i = 0: fixed points modulo the image of the norm element;
/// i = 1: kernel of the norm element modulo the image of s - 1.
/// Returns elementary divisors (> 1); empty means trivial.
inline std::vector<BigInt> tate_cohomology(const CyclicModule& mod, u64 d, int i) {
    if (d == 0 || mod.n % d != 0) throw std::invalid_argument("tate_cohomology: d must divide n");
    if (i != 0 && i != 1) throw std::invalid_argument("tate_cohomology: i must be 0 or 1");
    const std::size_t r = mod.rank;
    if (r == 0 || d == 1) return {};
    const Matrix S = detail::matrix_power(mod.action, mod.n / d);
    Matrix S1 = S;
    for (std::size_t k = 0; k < r; ++k) S1(k, k) -= 1;
    Matrix Nm(r, r);
    {
        Matrix p = Matrix::identity(r);
        for (u64 k = 0; k < d; ++k) {
            for (std::size_t a = 0; a < r; ++a)
                for (std::size_t b = 0; b < r; ++b) Nm(a, b) += p(a, b);
            p = p * S;
        }
    }
    const Matrix& R = mod.relations;
    Matrix outer, inner;
    if (i == 0) {
        outer = lattice_preimage(S1, R);
        inner = detail::stack(Nm, R);
    } else {
        outer = lattice_preimage(Nm, R);
        inner = detail::stack(S1, R);
    }
    auto inv = quotient_invariants(outer, inner);
    for (const auto& x : inv)
        if (sgn(x) == 0) throw std::logic_error("tate_cohomology: infinite cohomology group");
    return inv;
}

/// Vanishing of both Tate groups for every subgroup. Requires a finite module.
inline bool cohomologically_trivial(const CyclicModule& mod) {
    for (const auto& x : mod.group_invariants())
        if (sgn(x) == 0) throw std::invalid_argument("cohomologically_trivial: module is not finite");
    for (u64 d : divisors(mod.n))
        for (int i = 0; i < 2; ++i)
            if (!tate_cohomology(mod, d, i).empty()) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Class vector

struct Twist {
    u64 m = 1;
    i64 t = 1;
};

struct ClassVectorEntry {
    u64 e = 1;
    IdealHNF ideal;
    PrincipalityResult principality;
    std::optional<bool> torsion_free;  // M / Phi_e(tau) M, single factor only
};

struct FlabbyClassVector {
    u64 n = 1;
    std::vector<u64> divisors;
    std::vector<ClassVectorEntry> entries;

    bool all_principal() const {
        for (const auto& e : entries)
            if (e.principality.status != Principality::Principal) return false;
        return true;
    }
};

/// Checks gcd(t_i, m_i) = 1, ord(t_i) | n and lcm of the orders = n (factors with m_i = 1 are ignored).
inline void validate_twists(const std::vector<Twist>& factors, u64 n) {
    if (n == 0) throw std::invalid_argument("n must be positive");
    if (factors.empty()) throw std::invalid_argument("at least one factor is required");
    u64 l = 1;
    bool all_trivial = true;
    for (const auto& f : factors) {
        if (f.m == 0) throw std::invalid_argument("m must be positive");
        if (f.m == 1) continue;
        all_trivial = false;
        auto o = mult_order(f.t, f.m);
        if (!o) throw std::invalid_argument("gcd(t, m) != 1");
        if (n % *o != 0) throw std::invalid_argument("order of t does not divide n");
        l = std::lcm(l, *o);
    }
    if (!all_trivial && l != n) throw std::invalid_argument("orders of the t_i do not generate order n");
}

/// The product ideal prod_i <zeta_e - t_i, m_i> in Z[zeta_e].
inline IdealHNF twisted_ideal(const std::vector<Twist>& factors, u64 e) {
    IdealHNF I = unit_ideal(e);
    for (const auto& f : factors) {
        if (f.m == 1) continue;
        I = ideal_mul(I, image_ideal(f.m, f.t, e));
    }
    return I;
}

inline FlabbyClassVector flabby_class_vector(const std::vector<Twist>& factors, u64 n, const Budget& budget = {}) {
    validate_twists(factors, n);
    FlabbyClassVector v;
    v.n = n;
    v.divisors = divisors(n);
    for (u64 e : v.divisors) {
        ClassVectorEntry entry;
        entry.e = e;
        entry.ideal = twisted_ideal(factors, e);
        entry.principality = find_generator(entry.ideal, budget);
        if (factors.size() == 1 && factors[0].m > 1) {
            bool tf = true;
            for (const auto& x : masuda_quotient_invariants(factors[0].m, factors[0].t, n, e))
                if (sgn(x) != 0) tf = false;
            // Torsion is expected only when gcd(m, n) > 1.
            if (!tf && std::gcd(factors[0].m, n) == 1)
                throw std::logic_error("flabby_class_vector: M / Phi_e(tau) M has torsion although gcd(m, n) = 1");
            entry.torsion_free = tf;
        }
        v.entries.push_back(std::move(entry));
    }
    return v;
}

}  // namespace noether
