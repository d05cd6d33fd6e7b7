#include "noether/certifier.hpp"
#include "grids.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace noether;

namespace {

bool fired(const Certificate& c, const std::string& p) {
    for (const auto& r : c.paths)
        if (r.path == p) return r.result == "fired";
    return false;
}

const PathRecord* find_path(const Certificate& c, const std::string& p) {
    for (const auto& r : c.paths)
        if (r.path == p) return &r;
    return nullptr;
}

Budget small_budget() {
    Budget b;
    b.max_candidates = 20000;
    b.max_seconds = 20;
    return b;
}

}  // namespace

TEST(Certify, SevenThreeTwo) {
    const Certificate c = certify({3, {{7, 2}}});
    EXPECT_EQ(c.verdict, Verdict::Rational);
    EXPECT_EQ(c.path, path::Ufd);
    EXPECT_TRUE(fired(c, path::Coprime));
    EXPECT_TRUE(fired(c, path::PrimeM));
    bool e3 = false;
    for (const auto& w : c.witnesses)
        if (w.kind == witness_kind::ClassVector && w.e == 3) {
            e3 = true;
            EXPECT_EQ(babs(w.norm), 7);
        }
    EXPECT_TRUE(e3);
    EXPECT_TRUE(verify_certificate(c).ok);
}

TEST(Certify, Degenerate) {
    for (const GroupSpec& s : std::vector<GroupSpec>{{5, {{1, 0}}}, {1, {{7, 1}}}, {4, {{1, 3}, {1, 0}}}}) {
        const Certificate c = certify(s);
        EXPECT_EQ(c.verdict, Verdict::Rational);
        EXPECT_EQ(c.path, path::Degenerate);
        ASSERT_EQ(c.paths.size(), 1u);
        EXPECT_TRUE(verify_certificate(c).ok);
    }
}

TEST(Certify, NineFourThreeViaPrimeQ) {
    const Certificate c = certify({3, {{9, 4}}});
    EXPECT_EQ(c.verdict, Verdict::Rational);
    EXPECT_TRUE(fired(c, path::PrimeQ));
    EXPECT_TRUE(fired(c, path::PrimePower));
    EXPECT_FALSE(find_path(c, path::Coprime));
    ASSERT_TRUE(c.m_prime);
    EXPECT_EQ(c.m_prime->m_prime, 3u);
    const IdealHNF base = ideal_from_generators({CycInt::zeta(3) - CycInt::from_int(3, 1)}, 3);
    for (const auto& w : c.witnesses)
        if (w.e == 3) {
            EXPECT_EQ(ideal_from_generators({w.generator}, 3), base);
            EXPECT_EQ(twisted_ideal(w.factors, 3), base);
        }
    EXPECT_TRUE(verify_certificate(c).ok);
}

TEST(Certify, InvalidSpecs) {
    for (const GroupSpec& s : std::vector<GroupSpec>{{3, {{7, 3}}}, {3, {{9, 3}}}, {3, {}}, {0, {{7, 2}}},
                                                     {3, {{7, 2}, {4, 3}}}}) {
        const Certificate c = certify(s);
        EXPECT_EQ(c.verdict, Verdict::InvalidSpec);
        EXPECT_TRUE(verify_certificate(c).ok);
        Certificate lie = c;
        lie.verdict = Verdict::Rational;
        EXPECT_FALSE(verify_certificate(lie).ok);
    }
}

TEST(Certify, UnknownRecordsBudget) {
    // primes above 47 in Z[zeta_23] are not principal: nothing fires
    const u64 t = cyclotomic_roots_mod_p(23, 47).front();
    const Certificate c = certify({23, {{47, static_cast<i64>(t)}}}, small_budget());
    EXPECT_EQ(c.verdict, Verdict::Unknown);
    EXPECT_TRUE(c.path.empty());
    ASSERT_FALSE(c.unknown.empty());
    EXPECT_EQ(c.unknown[0].budget.max_candidates, 20000u);
    EXPECT_GE(c.unknown[0].spent.candidates, 20000u);
    EXPECT_EQ(c.unknown[0].ideal_norm, 47);
    EXPECT_TRUE(verify_certificate(c).ok);
    const std::string text = serialize(c);
    EXPECT_EQ(serialize(parse_certificate(text)), text);
}

TEST(Certify, EvenModulusOutsideKnownCasesIsUnknownWithNote) {
    // n = 2^d, m_i = 2^{d_i} with d > d_i - 2 is outside the supported patterns
    const Certificate c = certify({2, {{4, 3}, {8, 7}}});
    const PathRecord* f = find_path(c, path::Multi);
    ASSERT_TRUE(f);
    EXPECT_EQ(f->result, "unsupported");
    EXPECT_FALSE(f->note.empty());
    EXPECT_EQ(c.verdict, Verdict::Rational);  // UFD gate still applies for n = 2
    EXPECT_TRUE(verify_certificate(c).ok);
}

TEST(Certify, MultiFactor) {
    const Certificate c = certify({3, {{7, 2}, {13, 3}}});
    EXPECT_EQ(c.verdict, Verdict::Rational);
    EXPECT_TRUE(fired(c, path::Multi));
    EXPECT_TRUE(verify_certificate(c).ok);
    const Certificate d = certify({2, {{8, 7}, {16, 15}}});
    EXPECT_TRUE(fired(d, path::Multi));
    EXPECT_TRUE(verify_certificate(d).ok);
}

TEST(Verify, RejectsPerturbedWitness) {
    Certificate c = certify({3, {{7, 2}}});
    for (std::size_t i = 0; i < c.witnesses.size(); ++i) {
        Certificate x = c;
        auto g = x.witnesses[i].generator.coeffs();
        g[0] += 1;
        x.witnesses[i].generator = CycInt::from_coeffs(x.witnesses[i].e, g);
        EXPECT_FALSE(verify_certificate(x).ok) << i;
    }
}

TEST(Verify, RejectsWrongPathClaims) {
    // path B needs gcd(m, n) = 1
    Certificate c = certify({3, {{9, 4}}});
    ASSERT_EQ(c.verdict, Verdict::Rational);
    EXPECT_TRUE(verify_certificate(c).ok);
    Certificate x = c;
    x.paths.insert(x.paths.begin() + 1, PathRecord{path::Coprime, "fired", ""});
    const auto rep = verify_certificate(x);
    EXPECT_FALSE(rep.ok);
    EXPECT_FALSE(rep.reasons.empty());

    // claiming a fired class-vector path without its witnesses
    Certificate y = certify({3, {{7, 2}}});
    y.witnesses.clear();
    EXPECT_FALSE(verify_certificate(y).ok);

    // verdict must match the paths
    Certificate z = certify({3, {{7, 2}}});
    z.verdict = Verdict::Unknown;
    EXPECT_FALSE(verify_certificate(z).ok);

    // the cited path must be the first that fired
    Certificate w = certify({3, {{7, 2}}});
    w.path = path::PrimeM;
    EXPECT_FALSE(verify_certificate(w).ok);

    // wrong recorded order
    Certificate o = certify({3, {{7, 2}}});
    o.orders[0] = 6;
    EXPECT_FALSE(verify_certificate(o).ok);
}

TEST(Verify, RejectsAssociateAndSignChanges) {
    Certificate c = certify({3, {{7, 2}}});
    for (std::size_t i = 0; i < c.witnesses.size(); ++i) {
        if (c.witnesses[i].e != 3) continue;
        for (u64 k = 0; k < 6; ++k) {
            Certificate x = c;
            CycInt g = x.witnesses[i].generator * CycInt::zeta(3, k % 3);
            if (k >= 3) g = -g;
            if (g == c.witnesses[i].generator) continue;
            x.witnesses[i].generator = g;
            EXPECT_FALSE(verify_certificate(x).ok) << k;
        }
    }
    // a unit ideal witnessed by a unit other than 1
    Certificate u = certify({3, {{7, 2}}});
    for (auto& w : u.witnesses)
        if (w.e == 1) w.generator = CycInt::from_int(1, -1), w.norm = -1;
    EXPECT_FALSE(verify_certificate(u).ok);
}

TEST(Verify, RejectsConjugateGeneratorOfSameIdeal) {
    // over Z[zeta_8], zeta^2 + zeta^3 = zeta^2 (1 + zeta) generates the same ideal as
    // zeta^2 - zeta^3 with equal norm and T2, but only the smaller one is the witness
    Certificate c = certify({8, {{32, 3}}});
    ASSERT_TRUE(verify_certificate(c).ok);
    bool seen = false;
    for (auto& w : c.witnesses) {
        if (w.e != 8) continue;
        ASSERT_EQ(w.generator, CycInt::from_coeffs(8, {0, 0, 1, -1}));
        const CycInt other = CycInt::from_coeffs(8, {0, 0, 1, 1});
        EXPECT_TRUE(ideal_contains(twisted_ideal(w.factors, 8), other));
        EXPECT_EQ(absolute_norm(other), w.norm);
        w.generator = other;
        seen = true;
    }
    ASSERT_TRUE(seen);
    EXPECT_FALSE(verify_certificate(c).ok);
}

TEST(Json, RoundTripIsByteExact) {
    for (const GroupSpec& s : std::vector<GroupSpec>{{3, {{7, 2}}}, {3, {{9, 4}}}, {5, {{1, 0}}}, {3, {{7, 3}}},
                                                     {3, {{7, 2}, {13, 3}}}}) {
        const Certificate c = certify(s);
        const std::string text = serialize(c);
        const Certificate back = parse_certificate(text);
        EXPECT_EQ(serialize(back), text);
        EXPECT_TRUE(verify_certificate(back).ok);
        EXPECT_EQ(serialize(certify(s)), text);  // deterministic
    }
}

TEST(Json, IntegersAreDecimalStrings) {
    const json j = to_json(certify({3, {{7, 2}}}));
    EXPECT_EQ(j["version"], "cert-v1");
    EXPECT_TRUE(j["spec"]["n"].is_string());
    EXPECT_TRUE(j["witnesses"][0]["generator"][0].is_string());
    EXPECT_TRUE(j["witnesses"][0]["norm"].is_string());
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    EXPECT_EQ(keys, (std::vector<std::string>{"version", "spec", "verdict", "path", "paths", "witnesses", "unknown",
                                              "diagnostics"}));
}

TEST(Json, MalformedInputThrows) {
    const std::string good = serialize(certify({3, {{7, 2}}}));
    EXPECT_THROW(parse_certificate("{}"), std::invalid_argument);
    EXPECT_THROW(parse_certificate("not json"), std::exception);
    std::string bad = good;
    bad.replace(bad.find("cert-v1"), 7, "cert-v9");
    EXPECT_THROW(parse_certificate(bad), std::invalid_argument);
    json j = json::parse(good);
    j["witnesses"][0]["generator"] = json::array({"1", "2", "3"});
    EXPECT_THROW(certificate_from_json(j), std::invalid_argument);
    json k = json::parse(good);
    k["spec"]["n"] = 3;
    EXPECT_THROW(certificate_from_json(k), std::invalid_argument);
}

TEST(Properties, SmallGridRoundTripAndPerturbation) {
    grids::Tally rt, pert;
    for (const GroupSpec& s : grids::certificate_grid(16)) {
        const Certificate c = certify(s, small_budget());
        const Certificate back = parse_certificate(serialize(c));
        rt.expect(verify_certificate(back).ok, grids::spec_key(s));
        grids::perturbation_checks(c, pert);
    }
    EXPECT_TRUE(rt.ok()) << (rt.failures.empty() ? "" : rt.failures[0]);
    EXPECT_TRUE(pert.ok()) << (pert.failures.empty() ? "" : pert.failures[0]);
}

TEST(Properties, TIndependence) {
    for (u64 m : {7, 9, 11, 13, 19, 25, 27})
        for (u64 n : divisors(euler_phi(m))) {
            const auto ts = order_n_residues(m, n);
            if (ts.size() < 2) continue;
            const std::string ref = grids::verdict_profile(certify({n, {{m, static_cast<i64>(ts[0])}}}));
            for (std::size_t i = 1; i < ts.size(); ++i)
                EXPECT_EQ(grids::verdict_profile(certify({n, {{m, static_cast<i64>(ts[i])}}})), ref)
                    << m << " " << n << " " << ts[i];
        }
}

TEST(Properties, BudgetMonotone) {
    const u64 t = cyclotomic_roots_mod_p(29, 5801).front();
    Budget tiny;
    tiny.max_candidates = 1;
    const Certificate a = certify({29, {{5801, static_cast<i64>(t)}}}, tiny);
    const Certificate b = certify({29, {{5801, static_cast<i64>(t)}}});
    EXPECT_EQ(b.verdict, Verdict::Rational);
    EXPECT_TRUE(fired(b, path::PrimeM));
    EXPECT_TRUE(verify_certificate(b).ok);
}

TEST(Archive, StoredCertificateVerifies) {
    std::ifstream in(std::string(NOETHER_SOURCE_DIR) + "/tests/data/cert_5801_29.json");
    ASSERT_TRUE(in);
    std::stringstream buf;
    buf << in.rdbuf();
    const Certificate c = parse_certificate(buf.str());
    EXPECT_EQ(serialize(c), buf.str());
    EXPECT_EQ(c.verdict, Verdict::Rational);
    EXPECT_TRUE(fired(c, path::PrimeM));
    const auto rep = verify_certificate(c);
    EXPECT_TRUE(rep.ok) << (rep.reasons.empty() ? "" : rep.reasons[0]);
}
