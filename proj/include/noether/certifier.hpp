#pragma once

// Rationality certificates for k(G) with G = (C_{m_1} x ... x C_{m_s}) x| C_n,
// tau^-1 sigma_i tau = sigma_i^{t_i}. A certificate names the sufficient
// conditions that were checked, carries a generator for every ideal whose
// principality it relies on, and can be re-checked without any search.

#include "noether/bigint.hpp"
#include "noether/cyclotomic.hpp"
#include "noether/ideals.hpp"
#include "noether/lattice.hpp"
#include "noether/numtheory.hpp"
#include "noether/reduction.hpp"

#include "json.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace noether {

using json = nlohmann::ordered_json;

inline constexpr const char* kCertVersion = "cert-v1";

namespace path {
inline constexpr const char* Degenerate = "degenerate";
inline constexpr const char* Ufd = "T1.1-UFD";
inline constexpr const char* Coprime = "T4.3-coprime";
inline constexpr const char* OddM = "T1.6-odd-m";
inline constexpr const char* PrimePower = "L4.4-prime-power";
inline constexpr const char* PrimeQ = "T4.6-prime-q";
inline constexpr const char* PrimeM = "T4.7-prime-m";
inline constexpr const char* Multi = "EX4.9/4.10-multi";
}  // namespace path

/// Fixed evaluation order of the sufficient conditions.
inline const std::vector<std::string>& path_order() {
    static const std::vector<std::string> order{path::Degenerate, path::Ufd,    path::Coprime, path::OddM,
                                                path::PrimePower, path::PrimeQ, path::PrimeM,  path::Multi};
    return order;
}

namespace witness_kind {
inline constexpr const char* ClassVector = "class-vector";
inline constexpr const char* PrimeQ = "T4.6-prime-q";
inline constexpr const char* PrimeM = "T4.7-prime-m";
}  // namespace witness_kind

struct GroupSpec {
    u64 n = 1;
    std::vector<Twist> factors;

    bool single() const { return factors.size() == 1; }
};

inline bool operator==(const Twist& a, const Twist& b) { return a.m == b.m && a.t == b.t; }

enum class Verdict { Rational, Unknown, InvalidSpec };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Rational: return "RATIONAL";
        case Verdict::Unknown: return "UNKNOWN";
        default: return "INVALID_SPEC";
    }
}

/// Generator of prod_i <zeta_e - t_i, m_i> in Z[zeta_e].
struct Witness {
    std::string kind;
    u64 e = 1;
    std::vector<Twist> factors;
    CycInt generator;
    BigInt norm;  // signed absolute norm of the generator
    BigInt t2;    // trace form value of the generator
};

struct UnknownEntry {
    std::string kind;
    u64 e = 1;
    std::vector<Twist> factors;
    BigInt ideal_norm;
    Budget budget;
    SearchStats spent;
    std::string reason;
};

struct PathRecord {
    std::string path;
    std::string result;  // "fired", "inconclusive" or "unsupported"
    std::string note;
};

struct Certificate {
    GroupSpec spec;
    Verdict verdict = Verdict::Unknown;
    std::string path;  // first path that fired, empty otherwise
    std::vector<PathRecord> paths;
    std::vector<Witness> witnesses;
    std::vector<UnknownEntry> unknown;
    // diagnostics
    std::vector<u64> orders;  // multiplicative order of each t_i (0 if undefined)
    std::optional<MPrimeDecomposition> m_prime;
    Budget budget;
    std::string budget_source = "default";
    std::string t_source = "given";
    std::vector<std::string> notes;
};

// ---------------------------------------------------------------------------
// Spec validation and path hypotheses

/// Empty string if the spec is valid, otherwise the reason.
inline std::string spec_error(const GroupSpec& s) {
    try {
        validate_twists(s.factors, s.n);
    } catch (const std::invalid_argument& e) {
        return e.what();
    }
    return {};
}

inline bool is_degenerate(const GroupSpec& s) {
    if (s.n == 1) return true;
    return std::all_of(s.factors.begin(), s.factors.end(), [](const Twist& f) { return f.m == 1; });
}

inline bool is_odd_prime_power(u64 m) {
    u64 p = 0;
    return m > 1 && is_prime_power(m, &p) && p != 2;
}

/// Multi-factor patterns with a known argument: every m_i an odd prime power
/// with t_i of order n, or n = 2^d, m_i = 2^{d_i}, d <= d_i - 2 with t_i of order n.
inline std::string multi_factor_unsupported(const GroupSpec& s) {
    bool odd_ok = true, two_ok = true;
    u64 p2 = 0;
    unsigned d = 0;
    const bool n_two_power = s.n >= 2 && is_prime_power(s.n, &p2, &d) && p2 == 2;
    for (const auto& f : s.factors) {
        auto o = mult_order(f.t, f.m);
        const bool full = o && *o == s.n;
        if (!full || !is_odd_prime_power(f.m)) odd_ok = false;
        u64 p = 0;
        unsigned di = 0;
        if (!full || !n_two_power || !is_prime_power(f.m, &p, &di) || p != 2 || d + 2 > di) two_ok = false;
    }
    if (odd_ok || two_ok) return {};
    return "multi-factor spec outside the supported patterns (each m_i an odd prime power with t_i of order n, "
           "or n = 2^d with m_i = 2^{d_i}, d <= d_i - 2)";
}

inline bool path_applicable(const std::string& p, const GroupSpec& s) {
    if (p == path::Degenerate) return is_degenerate(s);
    if (p == path::Ufd) return is_ufd_cyclotomic(s.n);
    if (!s.single()) return p == path::Multi;
    const u64 m = s.factors[0].m;
    if (p == path::Coprime) return std::gcd(m, s.n) == 1;
    if (p == path::OddM) return m % 2 == 1;
    if (p == path::PrimePower) return is_odd_prime_power(m);
    if (p == path::PrimeQ) return s.n > 2 && is_prime(s.n);
    if (p == path::PrimeM) return is_prime(m);
    return false;
}

inline bool path_uses_class_vector(const std::string& p) {
    return p == path::Coprime || p == path::OddM || p == path::PrimePower || p == path::Multi;
}

// ---------------------------------------------------------------------------
// Certification

namespace detail {

inline std::string ideal_key(const IdealHNF& I) {
    std::string k = std::to_string(I.conductor()) + "|";
    for (const auto& r : I.basis().data())
        for (const auto& x : r) k += x.get_str() + ",";
    return k;
}

class PrincipalityCache {
public:
    explicit PrincipalityCache(Budget b) : budget_(b) {}
    const PrincipalityResult& get(const IdealHNF& I) {
        const std::string k = ideal_key(I);
        auto it = cache_.find(k);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(k, find_generator(I, budget_)).first->second;
    }

private:
    Budget budget_;
    std::map<std::string, PrincipalityResult> cache_;
};

inline Witness make_witness(std::string kind, u64 e, std::vector<Twist> factors, const CycInt& g) {
    Witness w;
    w.kind = std::move(kind);
    w.e = e;
    w.factors = std::move(factors);
    w.generator = g;
    w.norm = absolute_norm(g);
    w.t2 = quadratic_form(g.coeffs(), trace_form_gram(e));
    return w;
}

}  // namespace detail

inline Certificate certify(const GroupSpec& spec, const Budget& budget = {}) {
    Certificate c;
    c.spec = spec;
    c.budget = budget;
    for (const auto& f : spec.factors) {
        auto o = f.m >= 1 ? mult_order(f.t, f.m) : std::nullopt;
        c.orders.push_back(o ? *o : 0);
    }
    if (std::string err = spec_error(spec); !err.empty()) {
        c.verdict = Verdict::InvalidSpec;
        c.notes.push_back("invalid spec: " + err);
        return c;
    }

    detail::PrincipalityCache cache(budget);
    auto add_witness = [&](const Witness& w) {
        for (const auto& x : c.witnesses)
            if (x.kind == w.kind && x.e == w.e && x.factors == w.factors) return;
        c.witnesses.push_back(w);
    };
    auto add_unknown = [&](const std::string& kind, u64 e, const std::vector<Twist>& fs, const IdealHNF& I,
                           const PrincipalityResult& r, std::string reason) {
        for (const auto& x : c.unknown)
            if (x.kind == kind && x.e == e && x.factors == fs) return;
        c.unknown.push_back({kind, e, fs, I.norm(), r.budget, r.spent, std::move(reason)});
    };
    // Principality of one ideal; SearchFailure (class number one, nothing found) becomes a note.
    auto principal = [&](const std::string& kind, u64 e, const std::vector<Twist>& fs,
                         const IdealHNF& I) -> bool {
        try {
            const PrincipalityResult& r = cache.get(I);
            if (r.status == Principality::Principal) {
                add_witness(detail::make_witness(kind, e, fs, *r.witness));
                return true;
            }
            add_unknown(kind, e, fs, I, r, "search budget exhausted");
        } catch (const SearchFailure& err) {
            PrincipalityResult r;
            r.budget = budget;
            add_unknown(kind, e, fs, I, r, std::string("search failure: ") + err.what());
            c.notes.push_back(std::string("search failure: ") + err.what());
        }
        return false;
    };
    auto class_vector_principal = [&]() {
        bool all = true;
        for (u64 e : divisors(spec.n))
            if (!principal(witness_kind::ClassVector, e, spec.factors, twisted_ideal(spec.factors, e))) all = false;
        return all;
    };

    for (const auto& p : path_order()) {
        if (!path_applicable(p, spec)) continue;
        PathRecord rec{p, "inconclusive", {}};
        bool fired = false;
        if (p == path::Degenerate) {
            fired = true;
        } else if (p == path::Ufd) {
            fired = true;
            class_vector_principal();  // enrichment only
        } else if (p == path::Multi) {
            rec.note = multi_factor_unsupported(spec);
            if (!rec.note.empty())
                rec.result = "unsupported";
            else
                fired = class_vector_principal();
        } else if (path_uses_class_vector(p)) {
            fired = class_vector_principal();
        } else if (p == path::PrimeQ) {
            const Twist& f = spec.factors[0];
            c.m_prime = m_prime_decomposition(f.m, f.t, spec.n);
            const Twist g{c.m_prime->m_prime, f.t};
            fired = principal(witness_kind::PrimeQ, spec.n, {g}, twisted_ideal({g}, spec.n));
        } else if (p == path::PrimeM) {
            fired = principal(witness_kind::PrimeM, spec.n, spec.factors, twisted_ideal(spec.factors, spec.n));
        }
        if (fired) rec.result = "fired";
        c.paths.push_back(rec);
        if (p == path::Degenerate && fired) break;  // nothing else is meaningful for m = 1 or n = 1
    }

    for (const auto& r : c.paths)
        if (r.result == "fired") {
            c.path = r.path;
            break;
        }
    c.verdict = c.path.empty() ? Verdict::Unknown : Verdict::Rational;
    if (c.verdict == Verdict::Unknown && c.unknown.empty()) {
        bool noted = false;
        for (const auto& r : c.paths)
            if (!r.note.empty()) noted = true;
        if (!noted) c.notes.push_back("no sufficient condition applies to this spec");
    }
    return c;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline std::string s(u64 v) { return std::to_string(v); }
inline std::string s(i64 v) { return std::to_string(v); }

inline json twists_json(const std::vector<Twist>& fs) {
    json a = json::array();
    for (const auto& f : fs) a.push_back({{"m", s(f.m)}, {"t", s(f.t)}});
    return a;
}

inline json budget_json(const Budget& b) {
    return {{"box_radius", s(static_cast<u64>(b.box_radius))},
            {"max_candidates", s(static_cast<u64>(b.max_candidates))},
            {"max_seconds", json(b.max_seconds).dump()}};
}

inline json stats_json(const SearchStats& st) {
    return {{"candidates", s(static_cast<u64>(st.candidates))},
            {"shells", s(static_cast<u64>(st.shells))},
            {"exact_norms", s(static_cast<u64>(st.exact_norms))},
            {"last_bound", st.last_bound.get_str()},
            {"escalations", s(static_cast<u64>(st.escalations))},
            {"time_limited", st.time_limited}};
}

inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("certificate: missing field ") + key);
    return j.at(key);
}

inline std::string str(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_string()) throw std::invalid_argument(std::string("certificate: field ") + key + " must be a string");
    return v.get<std::string>();
}

inline BigInt integer(const json& j, const char* key) { return parse_bigint(str(j, key)); }

inline u64 to_u64(const BigInt& v) {
    if (sgn(v) < 0 || !mpz_fits_ulong_p(v.get_mpz_t())) throw std::invalid_argument("certificate: integer out of range");
    return mpz_get_ui(v.get_mpz_t());
}

inline u64 uinteger(const json& j, const char* key) { return to_u64(integer(j, key)); }

inline std::vector<Twist> twists_from(const json& a) {
    if (!a.is_array()) throw std::invalid_argument("certificate: factors must be an array");
    std::vector<Twist> out;
    for (const auto& f : a) out.push_back({uinteger(f, "m"), to_i64(integer(f, "t"))});
    return out;
}

inline Budget budget_from(const json& j) {
    Budget b;
    b.box_radius = uinteger(j, "box_radius");
    b.max_candidates = uinteger(j, "max_candidates");
    b.max_seconds = std::stod(str(j, "max_seconds"));
    return b;
}

inline SearchStats stats_from(const json& j) {
    SearchStats st;
    st.candidates = uinteger(j, "candidates");
    st.shells = uinteger(j, "shells");
    st.exact_norms = uinteger(j, "exact_norms");
    st.last_bound = integer(j, "last_bound");
    st.escalations = static_cast<unsigned>(uinteger(j, "escalations"));
    const json& tl = field(j, "time_limited");
    if (!tl.is_boolean()) throw std::invalid_argument("certificate: time_limited must be a boolean");
    st.time_limited = tl.get<bool>();
    return st;
}

inline std::vector<std::string> strings_from(const json& a) {
    if (!a.is_array()) throw std::invalid_argument("certificate: expected an array of strings");
    std::vector<std::string> out;
    for (const auto& x : a) {
        if (!x.is_string()) throw std::invalid_argument("certificate: expected an array of strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

}  // namespace detail

inline json to_json(const Certificate& c) {
    using detail::s;
    json j;
    j["version"] = kCertVersion;
    j["spec"] = {{"n", s(c.spec.n)}, {"factors", detail::twists_json(c.spec.factors)}};
    j["verdict"] = to_string(c.verdict);
    j["path"] = c.path;
    json paths = json::array();
    for (const auto& p : c.paths) paths.push_back({{"path", p.path}, {"result", p.result}, {"note", p.note}});
    j["paths"] = paths;
    json ws = json::array();
    for (const auto& w : c.witnesses) {
        json coeffs = json::array();
        for (const auto& x : w.generator.coeffs()) coeffs.push_back(x.get_str());
        ws.push_back({{"kind", w.kind},
                      {"e", s(w.e)},
                      {"factors", detail::twists_json(w.factors)},
                      {"generator", coeffs},
                      {"norm", w.norm.get_str()},
                      {"t2", w.t2.get_str()}});
    }
    j["witnesses"] = ws;
    json us = json::array();
    for (const auto& u : c.unknown)
        us.push_back({{"kind", u.kind},
                      {"e", s(u.e)},
                      {"factors", detail::twists_json(u.factors)},
                      {"ideal_norm", u.ideal_norm.get_str()},
                      {"budget", detail::budget_json(u.budget)},
                      {"spent", detail::stats_json(u.spent)},
                      {"reason", u.reason}});
    j["unknown"] = us;
    json d;
    d["assumptions"] = json::array({"zeta_m in k", "zeta_n in k"});
    d["field"] = "C";
    json orders = json::array();
    for (u64 o : c.orders) orders.push_back(s(o));
    d["orders"] = orders;
    if (c.m_prime) {
        const auto& mp = *c.m_prime;
        d["m_prime"] = {{"m", s(mp.m)},   {"q", s(mp.q)},   {"m_prime", s(mp.m_prime)},
                        {"m_dprime", s(mp.m_dprime)},       {"m1", s(mp.m1)},
                        {"m2", s(mp.m2)}, {"d0", s(static_cast<u64>(mp.d0))},
                        {"q_divides_m_prime", mp.q_divides_m_prime}};
    } else {
        d["m_prime"] = nullptr;
    }
    d["budget"] = detail::budget_json(c.budget);
    d["budget_source"] = c.budget_source;
    d["t_source"] = c.t_source;
    d["notes"] = c.notes;
    j["diagnostics"] = d;
    return j;
}

inline std::string serialize(const Certificate& c) { return to_json(c).dump(2) + "\n"; }

inline Certificate certificate_from_json(const json& j) {
    using namespace detail;
    if (str(j, "version") != kCertVersion) throw std::invalid_argument("certificate: unsupported version");
    Certificate c;
    const json& sp = field(j, "spec");
    c.spec.n = uinteger(sp, "n");
    c.spec.factors = twists_from(field(sp, "factors"));
    const std::string v = str(j, "verdict");
    if (v == "RATIONAL")
        c.verdict = Verdict::Rational;
    else if (v == "UNKNOWN")
        c.verdict = Verdict::Unknown;
    else if (v == "INVALID_SPEC")
        c.verdict = Verdict::InvalidSpec;
    else
        throw std::invalid_argument("certificate: bad verdict");
    c.path = str(j, "path");
    for (const auto& p : field(j, "paths")) c.paths.push_back({str(p, "path"), str(p, "result"), str(p, "note")});
    for (const auto& w : field(j, "witnesses")) {
        Witness x;
        x.kind = str(w, "kind");
        x.e = uinteger(w, "e");
        if (x.e == 0 || x.e > 100000) throw std::invalid_argument("certificate: witness conductor out of range");
        x.factors = twists_from(field(w, "factors"));
        std::vector<BigInt> coeffs;
        const json& g = field(w, "generator");
        if (!g.is_array()) throw std::invalid_argument("certificate: generator must be an array");
        for (const auto& a : g) {
            if (!a.is_string()) throw std::invalid_argument("certificate: generator entries must be strings");
            coeffs.push_back(parse_bigint(a.get<std::string>()));
        }
        x.generator = CycInt::from_coeffs(x.e, std::move(coeffs));
        x.norm = integer(w, "norm");
        x.t2 = integer(w, "t2");
        c.witnesses.push_back(std::move(x));
    }
    for (const auto& u : field(j, "unknown")) {
        UnknownEntry x;
        x.kind = str(u, "kind");
        x.e = uinteger(u, "e");
        x.factors = twists_from(field(u, "factors"));
        x.ideal_norm = integer(u, "ideal_norm");
        x.budget = budget_from(field(u, "budget"));
        x.spent = stats_from(field(u, "spent"));
        x.reason = str(u, "reason");
        c.unknown.push_back(std::move(x));
    }
    const json& d = field(j, "diagnostics");
    if (field(d, "assumptions") != json::array({"zeta_m in k", "zeta_n in k"}) || field(d, "field") != "C")
        throw std::invalid_argument("certificate: unexpected base-field assumptions");
    for (const auto& o : field(d, "orders")) {
        if (!o.is_string()) throw std::invalid_argument("certificate: orders must be strings");
        c.orders.push_back(to_u64(parse_bigint(o.get<std::string>())));
    }
    const json& mp = field(d, "m_prime");
    if (!mp.is_null()) {
        MPrimeDecomposition x;
        x.m = uinteger(mp, "m");
        x.q = uinteger(mp, "q");
        x.m_prime = uinteger(mp, "m_prime");
        x.m_dprime = uinteger(mp, "m_dprime");
        x.m1 = uinteger(mp, "m1");
        x.m2 = uinteger(mp, "m2");
        x.d0 = static_cast<unsigned>(uinteger(mp, "d0"));
        const json& qd = field(mp, "q_divides_m_prime");
        if (!qd.is_boolean()) throw std::invalid_argument("certificate: q_divides_m_prime must be a boolean");
        x.q_divides_m_prime = qd.get<bool>();
        c.m_prime = x;
    }
    c.budget = budget_from(field(d, "budget"));
    c.budget_source = str(d, "budget_source");
    c.t_source = str(d, "t_source");
    c.notes = strings_from(field(d, "notes"));
    return c;
}

inline Certificate parse_certificate(const std::string& text) {
    return certificate_from_json(json::parse(text));
}

// ---------------------------------------------------------------------------
// Verification

struct VerificationReport {
    bool ok = true;
    std::vector<std::string> reasons;

    void fail(std::string r) {
        ok = false;
        reasons.push_back(std::move(r));
    }
};

namespace detail {

inline bool same_decomposition(const MPrimeDecomposition& a, const MPrimeDecomposition& b) {
    return a.m == b.m && a.q == b.q && a.m_prime == b.m_prime && a.m_dprime == b.m_dprime && a.m1 == b.m1 &&
           a.m2 == b.m2 && a.d0 == b.d0 && a.q_divides_m_prime == b.q_divides_m_prime;
}

/// Exact re-check of one witness: canonical form, membership, norm and T2.
inline std::string check_witness(const Witness& w) {
    for (const auto& f : w.factors) {
        if (f.m == 0) return "factor with m = 0";
        if (bgcd(big(f.t), big_u(f.m)) != 1) return "factor with gcd(t, m) != 1";
    }
    const IdealHNF I = twisted_ideal(w.factors, w.e);
    const CycInt& g = w.generator;
    if (auto c = I.scalar_generator()) {
        if (g != CycInt::from_int(w.e, *c)) return "generator of a rational-integer ideal is not in canonical form";
    } else {
        for (const auto& x : g.coeffs())
            if (sgn(x) != 0) {
                if (sgn(x) < 0) return "generator sign is not canonical";
                break;
            }
        // Among the associates +-zeta^k g, which share T2, the search keeps the least coefficient vector.
        const CycInt z = CycInt::zeta(w.e, 1);
        CycInt a = g;
        for (u64 k = 1; k < w.e; ++k) {
            a = a * z;
            Row v = a.coeffs();
            canonical_sign(v);
            if (v < g.coeffs()) return "generator is not the canonical associate";
        }
        // Galois conjugates also share T2; one that still generates the ideal must not be smaller.
        for (u64 u = 2; u < w.e; ++u) {
            if (std::gcd(u, w.e) != 1) continue;
            CycInt b = conjugate(g, static_cast<i64>(u));
            for (u64 k = 0; k < w.e; ++k, b = b * z) {
                Row v = b.coeffs();
                canonical_sign(v);
                if (v < g.coeffs() && ideal_contains(I, CycInt::from_coeffs(w.e, v)))
                    return "a conjugate associate of the generator generates the ideal and is smaller";
            }
        }
    }
    if (!ideal_contains(I, g)) return "generator does not lie in the ideal";
    const BigInt N = absolute_norm(g);
    if (N != w.norm) return "recorded norm does not match the generator";
    if (babs(N) != I.norm()) return "generator norm differs from the ideal norm";
    if (quadratic_form(g.coeffs(), trace_form_gram(w.e)) != w.t2) return "recorded t2 does not match the generator";
    return {};
}

}  // namespace detail

/// Re-derives every claim of a certificate without searching.
inline VerificationReport verify_certificate(const Certificate& c) {
    VerificationReport rep;
    const GroupSpec& s = c.spec;
    const std::string err = spec_error(s);
    if (c.verdict == Verdict::InvalidSpec) {
        if (err.empty()) rep.fail("verdict INVALID_SPEC but the spec is valid");
        if (!c.paths.empty() || !c.witnesses.empty() || !c.path.empty()) rep.fail("invalid spec with path data");
        return rep;
    }
    if (!err.empty()) {
        rep.fail("spec is invalid: " + err);
        return rep;
    }
    if (c.orders.size() != s.factors.size()) rep.fail("order list does not match the factors");
    for (std::size_t i = 0; i < s.factors.size() && i < c.orders.size(); ++i) {
        auto o = mult_order(s.factors[i].t, s.factors[i].m);
        if (!o || *o != c.orders[i]) rep.fail("recorded order of t_" + std::to_string(i + 1) + " is wrong");
    }

    for (const auto& w : c.witnesses) {
        const std::string why = detail::check_witness(w);
        if (!why.empty()) rep.fail("witness at e=" + std::to_string(w.e) + ": " + why);
        if (w.kind == witness_kind::ClassVector) {
            if (s.n % w.e != 0) rep.fail("class-vector witness at e not dividing n");
            if (!(w.factors == s.factors)) rep.fail("class-vector witness for different factors");
        } else if (w.kind == witness_kind::PrimeQ || w.kind == witness_kind::PrimeM) {
            if (w.e != s.n) rep.fail(w.kind + " witness must live in Z[zeta_n]");
        } else {
            rep.fail("unknown witness kind " + w.kind);
        }
    }
    auto has_witness = [&](const std::string& kind, u64 e, const std::vector<Twist>& fs) {
        for (const auto& w : c.witnesses)
            if (w.kind == kind && w.e == e && w.factors == fs) return true;
        return false;
    };

    std::size_t last = 0;
    bool any_fired = false;
    std::string first_fired;
    const auto& order = path_order();
    for (const auto& r : c.paths) {
        auto it = std::find(order.begin(), order.end(), r.path);
        if (it == order.end()) {
            rep.fail("unknown path " + r.path);
            continue;
        }
        const std::size_t idx = static_cast<std::size_t>(it - order.begin()) + 1;
        if (idx <= last) rep.fail("paths are not in the fixed order");
        last = idx;
        if (!path_applicable(r.path, s)) rep.fail("path " + r.path + " does not apply to this spec");
        if (r.result == "unsupported") {
            if (r.path != path::Multi || multi_factor_unsupported(s).empty())
                rep.fail("path " + r.path + " wrongly marked unsupported");
            continue;
        }
        if (r.result == "inconclusive") continue;
        if (r.result != "fired") {
            rep.fail("bad path result " + r.result);
            continue;
        }
        if (!any_fired) first_fired = r.path;
        any_fired = true;
        if (r.path == path::Multi && !multi_factor_unsupported(s).empty())
            rep.fail("multi-factor path fired outside its supported patterns");
        if (path_uses_class_vector(r.path)) {
            for (u64 e : divisors(s.n))
                if (!has_witness(witness_kind::ClassVector, e, s.factors))
                    rep.fail("path " + r.path + " lacks a generator at e=" + std::to_string(e));
        } else if (r.path == path::PrimeQ) {
            const Twist& f = s.factors[0];
            const MPrimeDecomposition mp = m_prime_decomposition(f.m, f.t, s.n);
            if (!c.m_prime || !detail::same_decomposition(*c.m_prime, mp)) rep.fail("m' decomposition mismatch");
            if (!has_witness(witness_kind::PrimeQ, s.n, {Twist{mp.m_prime, f.t}}))
                rep.fail("path T4.6-prime-q lacks its generator");
        } else if (r.path == path::PrimeM) {
            if (!has_witness(witness_kind::PrimeM, s.n, s.factors)) rep.fail("path T4.7-prime-m lacks its generator");
        }
    }
    if (c.path != first_fired) rep.fail("cited path is not the first path that fired");
    if (any_fired != (c.verdict == Verdict::Rational)) rep.fail("verdict is inconsistent with the paths");
    if (c.verdict == Verdict::Unknown) {
        bool noted = !c.notes.empty();
        for (const auto& r : c.paths)
            if (!r.note.empty()) noted = true;
        if (c.unknown.empty() && !noted) rep.fail("UNKNOWN verdict without an unresolved entry or note");
    }
    return rep;
}

}  // namespace noether
