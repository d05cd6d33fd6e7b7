#pragma once

// Scan of primes p <= X that split completely in Z[zeta_n] into principal
// primes, and the resulting density estimate.

#include "noether/bigint.hpp"
#include "noether/cyclotomic.hpp"
#include "noether/ideals.hpp"
#include "noether/numtheory.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace noether {

struct HuntRecord {
    u64 p = 0;
    bool split = false;
    u64 t = 0;                                     // smallest root of Phi_n mod p, split primes only
    std::optional<PrincipalityResult> principality;  // only for split primes
    std::optional<BigInt> witness_norm;
    bool search_failure = false;  // class number one, but no generator within the escalated budget

    bool principal() const { return principality && principality->status == Principality::Principal; }
};

struct HuntOptions {
    Budget budget;
    unsigned threads = 0;  // 0: hardware concurrency
};

/// Tests one prime: split status and, if split, principality of <zeta_n - t, p>.
inline HuntRecord hunt_prime(u64 n, u64 p, const Budget& budget) {
    HuntRecord rec;
    rec.p = p;
    rec.split = splits_completely(p, n);
    if (!rec.split) return rec;
    rec.t = cyclotomic_roots_mod_p(n, p).front();
    PrincipalityResult r;
    r.budget = budget;
    try {
        SearchStats st;
        auto w = norm_equation_search(n, big_u(p), budget, rec.t, &st);
        r.spent = st;
        if (w) {
            if (!ideal_contains(image_ideal(p, static_cast<i64>(rec.t), n), *w) || babs(absolute_norm(*w)) != big_u(p))
                throw std::logic_error("hunt: witness does not generate the prime above " + std::to_string(p));
            r.status = Principality::Principal;
            r.witness = std::move(w);
            rec.witness_norm = absolute_norm(*r.witness);
        }
    } catch (const SearchFailure&) {
        rec.search_failure = true;
    }
    rec.principality = std::move(r);
    return rec;
}

/// Calls `emit` for every prime p <= limit in ascending order. Primes are
/// processed by a worker pool; finished records wait in a reorder buffer.
inline void hunt(u64 n, u64 limit, const HuntOptions& opt, const std::function<void(const HuntRecord&)>& emit) {
    if (n < 2) throw std::invalid_argument("hunt: n must be at least 2");
    const std::vector<u64> primes = primes_up_to(limit);
    unsigned nt = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    nt = static_cast<unsigned>(std::min<std::size_t>(nt, std::max<std::size_t>(primes.size(), 1)));

    std::atomic<std::size_t> next{0};
    std::mutex mtx;
    std::map<std::size_t, HuntRecord> buffer;
    std::size_t emitted = 0;
    std::exception_ptr error;

    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= primes.size()) return;
            HuntRecord rec;
            try {
                rec = hunt_prime(n, primes[i], opt.budget);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mtx);
                if (!error) error = std::current_exception();
                next = primes.size();
                return;
            }
            std::lock_guard<std::mutex> lock(mtx);
            if (error) return;
            buffer.emplace(i, std::move(rec));
            for (auto it = buffer.find(emitted); it != buffer.end(); it = buffer.find(emitted)) {
                emit(it->second);
                buffer.erase(it);
                ++emitted;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < nt; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

inline std::vector<HuntRecord> hunt(u64 n, u64 limit, const HuntOptions& opt = {}) {
    std::vector<HuntRecord> out;
    hunt(n, limit, opt, [&](const HuntRecord& r) { out.push_back(r); });
    return out;
}

struct DensityReport {
    u64 n = 2;
    u64 limit = 0;
    u64 primes = 0;
    u64 split = 0;
    u64 principal = 0;
    u64 unknown = 0;
    u64 search_failures = 0;  // counted in unknown as well
    std::optional<u64> class_number;
    Budget budget;

    double empirical() const { return primes ? static_cast<double>(principal) / static_cast<double>(primes) : 0.0; }
    double lower() const { return empirical(); }
    double upper() const {
        return primes ? static_cast<double>(principal + unknown) / static_cast<double>(primes) : 0.0;
    }
    std::optional<double> expected() const {
        if (!class_number) return std::nullopt;
        return 1.0 / (static_cast<double>(euler_phi(n)) * static_cast<double>(*class_number));
    }
    double unknown_fraction() const {
        return split ? static_cast<double>(unknown) / static_cast<double>(split) : 0.0;
    }
    double resolved_fraction() const { return split ? 1.0 - unknown_fraction() : 1.0; }
};

inline DensityReport density_from_records(u64 n, u64 limit, const Budget& budget,
                                          const std::vector<HuntRecord>& records) {
    DensityReport d;
    d.n = n;
    d.limit = limit;
    d.budget = budget;
    d.class_number = class_number(n);
    for (const auto& r : records) {
        ++d.primes;
        if (!r.split) continue;
        ++d.split;
        if (r.principal())
            ++d.principal;
        else
            ++d.unknown;
        if (r.search_failure) ++d.search_failures;
    }
    return d;
}

inline DensityReport density_estimate(u64 n, u64 limit, const HuntOptions& opt = {}) {
    return density_from_records(n, limit, opt.budget, hunt(n, limit, opt));
}

// ---------------------------------------------------------------------------
// Output

namespace detail {

inline std::string fixed(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const HuntRecord& r) {
    nlohmann::ordered_json j;
    j["p"] = std::to_string(r.p);
    j["split"] = r.split;
    if (!r.split) {
        j["principality"] = nullptr;
        return j;
    }
    const auto& pr = *r.principality;
    j["t"] = std::to_string(r.t);
    j["principality"] = to_string(pr.status);
    auto w = nlohmann::ordered_json::array();
    if (pr.witness)
        for (const auto& c : pr.witness->coeffs()) w.push_back(c.get_str());
    j["witness"] = pr.witness ? w : nlohmann::ordered_json(nullptr);
    j["witness_norm"] = r.witness_norm ? nlohmann::ordered_json(r.witness_norm->get_str()) : nullptr;
    j["candidates"] = std::to_string(pr.spent.candidates);
    j["search_failure"] = r.search_failure;
    return j;
}

inline std::string table_header() {
    return "       p  split        t  status         |N(witness)|\n";
}

inline std::string table_row(const HuntRecord& r) {
    char buf[160];
    const char* status = !r.split ? "-" : r.search_failure ? "SEARCH_FAILURE" : to_string(r.principality->status);
    const std::string t = r.split ? std::to_string(r.t) : "-";
    const std::string nm = r.witness_norm ? babs(*r.witness_norm).get_str() : "-";
    std::snprintf(buf, sizeof buf, "%8llu  %5s  %7s  %-14s %s\n", static_cast<unsigned long long>(r.p),
                  r.split ? "yes" : "no", t.c_str(), status, nm.c_str());
    return buf;
}

inline nlohmann::ordered_json to_json(const DensityReport& d) {
    nlohmann::ordered_json j;
    j["n"] = std::to_string(d.n);
    j["limit"] = std::to_string(d.limit);
    j["counts"] = {{"primes", std::to_string(d.primes)},
                   {"split", std::to_string(d.split)},
                   {"principal", std::to_string(d.principal)},
                   {"unknown", std::to_string(d.unknown)},
                   {"search_failures", std::to_string(d.search_failures)}};
    j["empirical_density"] = std::to_string(d.principal) + "/" + std::to_string(d.primes);
    j["empirical_density_decimal"] = detail::fixed(d.empirical());
    j["bracket"] = {detail::fixed(d.lower()), detail::fixed(d.upper())};
    if (d.class_number) {
        j["class_number"] = std::to_string(*d.class_number);
        j["expected_density"] = "1/" + std::to_string(euler_phi(d.n) * *d.class_number);
        j["expected_density_decimal"] = detail::fixed(*d.expected());
    } else {
        j["class_number"] = nullptr;
        j["expected_density"] = nullptr;
    }
    j["unknown_fraction"] = detail::fixed(d.unknown_fraction());
    j["budget"] = {{"box_radius", std::to_string(d.budget.box_radius)},
                   {"max_candidates", std::to_string(d.budget.max_candidates)},
                   {"max_seconds", nlohmann::json(d.budget.max_seconds).dump()}};
    j["notes"] = {"one prime ideal above each split p is tested; the others are Galois conjugate",
                  "natural density by counting primes up to the limit"};
    return j;
}

}  // namespace noether
