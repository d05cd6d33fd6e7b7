#pragma once

// Command-line front end: certify, verify, hunt, density, norm-search, phi.

#include "noether/certifier.hpp"
#include "noether/hunter.hpp"
#include "noether/poly.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace noether::cli {

enum Exit : int {
    Ok = 0,
    Internal = 1,
    UnknownVerdict = 2,
    InvalidSpec = 3,
    VerifyFailed = 4,
    Usage = 64,
};

struct BudgetSetting {
    Budget budget;
    std::string source = "default";
};

/// NOETHER_BUDGET: comma-separated candidates=N, seconds=S, radius=R (a bare
/// integer means candidates).
inline BudgetSetting budget_from_env(const char* value) {
    BudgetSetting s;
    if (!value || !*value) return s;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        const std::string key = eq == std::string::npos ? "candidates" : item.substr(0, eq);
        const std::string val = eq == std::string::npos ? item : item.substr(eq + 1);
        std::size_t used = 0;
        try {
            if (key == "candidates") {
                s.budget.max_candidates = std::stoull(val, &used);
            } else if (key == "seconds") {
                s.budget.max_seconds = std::stod(val, &used);
            } else if (key == "radius") {
                s.budget.box_radius = std::stoull(val, &used);
            } else {
                throw std::invalid_argument("unknown key " + key);
            }
        } catch (const std::exception&) {
            throw CLI::ValidationError("NOETHER_BUDGET", "cannot parse '" + item + "'");
        }
        if (used != val.size()) throw CLI::ValidationError("NOETHER_BUDGET", "cannot parse '" + item + "'");
    }
    s.source = std::string("env NOETHER_BUDGET=") + value;
    return s;
}

struct BudgetFlags {
    std::optional<std::uint64_t> candidates, radius;
    std::optional<double> seconds;

    void add(CLI::App* app) {
        app->add_option("--candidates", candidates, "Candidate budget per principality query");
        app->add_option("--seconds", seconds, "Time budget per principality query")->check(CLI::PositiveNumber);
        app->add_option("--bound", radius, "Coefficient box radius for the fallback search");
    }

    BudgetSetting apply(BudgetSetting base) const {
        bool any = false;
        if (candidates) base.budget.max_candidates = *candidates, any = true;
        if (seconds) base.budget.max_seconds = *seconds, any = true;
        if (radius) base.budget.box_radius = *radius, any = true;
        if (any) base.source = base.source == "default" ? "flags" : base.source + " + flags";
        return base;
    }
};

inline Twist parse_factor(const std::string& s) {
    const auto c = s.find(':');
    if (c == std::string::npos) throw CLI::ValidationError("--factor", "expected M:T, got '" + s + "'");
    try {
        std::size_t a = 0, b = 0;
        const std::string ms = s.substr(0, c), ts = s.substr(c + 1);
        if (ms.empty() || ms[0] == '-') throw std::invalid_argument("m");
        Twist t{std::stoull(ms, &a), std::stoll(ts, &b)};
        if (a != ms.size() || b != ts.size()) throw std::invalid_argument("trailing");
        return t;
    } catch (const std::exception&) {
        throw CLI::ValidationError("--factor", "expected M:T, got '" + s + "'");
    }
}

class Output {
public:
    Output(std::ostream& fallback, const std::string& path) : fallback_(fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : fallback_; }

private:
    std::ostream& fallback_;
    std::ofstream file_;
};

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    const char* env = std::getenv("NOETHER_BUDGET");

    CLI::App app{"Rationality certificates for Noether's problem on metacyclic groups", "noether"};
    app.require_subcommand(1);

    // certify
    auto* certify_cmd = app.add_subcommand("certify", "Certify rationality of k(G) for a twisted group");
    std::optional<std::uint64_t> c_m, c_n;
    std::optional<std::int64_t> c_t;
    std::vector<std::string> c_factors;
    std::string c_out;
    BudgetFlags c_budget;
    certify_cmd->add_option("--m", c_m, "Modulus m of the single-factor group");
    certify_cmd->add_option("--n", c_n, "Order n of tau")->required();
    certify_cmd->add_option("--t", c_t, "Twist t (default: the smallest residue of order n)");
    certify_cmd->add_option("--factor", c_factors, "Factor M:T of a multi-factor group (repeatable)");
    certify_cmd->add_option("--out", c_out, "Write the certificate to this file");
    c_budget.add(certify_cmd);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Re-check a certificate without search");
    std::string v_file;
    verify_cmd->add_option("file", v_file, "Certificate file")->required();

    // hunt
    auto* hunt_cmd = app.add_subcommand("hunt", "Scan primes that split into principal primes");
    std::uint64_t h_n = 0, h_limit = 0;
    unsigned h_threads = 0;
    std::string h_format = "json", h_out;
    BudgetFlags h_budget;
    hunt_cmd->add_option("--n", h_n, "Conductor n")->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{100000}));
    hunt_cmd->add_option("--limit", h_limit, "Scan primes up to this bound")->required();
    hunt_cmd->add_option("--format", h_format, "json (one record per line) or table")
        ->check(CLI::IsMember({"json", "table"}));
    hunt_cmd->add_option("--threads", h_threads, "Worker threads (0: all cores)");
    hunt_cmd->add_option("--out", h_out, "Write output to this file");
    h_budget.add(hunt_cmd);

    // density
    auto* density_cmd = app.add_subcommand("density", "Estimate the density of principal split primes");
    std::uint64_t d_n = 0, d_limit = 0;
    unsigned d_threads = 0;
    std::string d_out;
    BudgetFlags d_budget;
    density_cmd->add_option("--n", d_n, "Conductor n")->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{100000}));
    density_cmd->add_option("--limit", d_limit, "Scan primes up to this bound")->required();
    density_cmd->add_option("--threads", d_threads, "Worker threads (0: all cores)");
    density_cmd->add_option("--out", d_out, "Write the report to this file");
    d_budget.add(density_cmd);

    // norm-search
    auto* norm_cmd = app.add_subcommand("norm-search", "Find an element of Z[zeta_n] with |N| = target");
    std::uint64_t ns_n = 0;
    std::string ns_target;
    std::optional<std::uint64_t> ns_hint;
    BudgetFlags ns_budget;
    norm_cmd->add_option("--n", ns_n, "Conductor n")->required()->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100000}));
    norm_cmd->add_option("--target", ns_target, "Target norm")->required();
    norm_cmd->add_option("--hint", ns_hint, "Preferred root t of Phi_n modulo the target");
    ns_budget.add(norm_cmd);

    // phi
    auto* phi_cmd = app.add_subcommand("phi", "Print the cyclotomic polynomial Phi_n");
    std::uint64_t p_n = 0;
    phi_cmd->add_option("--n", p_n, "Index n")->required()->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100000}));

    BudgetSetting base;
    GroupSpec spec;
    std::string t_source = "given";
    BigInt ns_target_value;
    try {
        std::vector<std::string> args;
        for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
        app.parse(args);
        base = budget_from_env(env);
        // Cross-flag validation happens before any computation.
        if (certify_cmd->parsed()) {
            if (c_m && !c_factors.empty()) throw CLI::ValidationError("certify", "--m and --factor are exclusive");
            if (!c_m && c_factors.empty()) throw CLI::ValidationError("certify", "one of --m or --factor is required");
            if (c_t && !c_m) throw CLI::ValidationError("certify", "--t needs --m");
            spec.n = *c_n;
            if (c_m) {
                i64 t = 1;
                if (c_t) {
                    t = *c_t;
                } else {
                    t_source = "default";
                    if (*c_m > 1) {
                        auto res = order_n_residues(*c_m, *c_n);
                        t = res.empty() ? 0 : static_cast<i64>(res.front());
                    }
                }
                spec.factors.push_back({*c_m, t});
            } else {
                for (const auto& f : c_factors) spec.factors.push_back(parse_factor(f));
            }
        }
        if (norm_cmd->parsed()) {
            try {
                ns_target_value = parse_bigint(ns_target);
            } catch (const std::exception&) {
                throw CLI::ValidationError("--target", "not an integer: " + ns_target);
            }
            if (sgn(ns_target_value) == 0) throw CLI::ValidationError("--target", "must be nonzero");
        }
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return Ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "noether: " << e.what() << "\n";
        if (app.get_subcommands().empty()) err << app.help();
        return Usage;
    }

    try {
        if (certify_cmd->parsed()) {
            const BudgetSetting b = c_budget.apply(base);
            Certificate cert = certify(spec, b.budget);
            cert.budget_source = b.source;
            cert.t_source = t_source;
            if (t_source == "default" && spec.factors[0].t == 0 && spec.factors[0].m > 1)
                cert.notes.push_back("no residue of order n modulo m exists");
            Output o(out, c_out);
            o.stream() << serialize(cert);
            if (cert.verdict == Verdict::InvalidSpec) return InvalidSpec;
            return cert.verdict == Verdict::Rational ? Ok : UnknownVerdict;
        }
        if (verify_cmd->parsed()) {
            std::ifstream in(v_file, std::ios::binary);
            if (!in) {
                err << "noether: cannot read " << v_file << "\n";
                return VerifyFailed;
            }
            std::stringstream buf;
            buf << in.rdbuf();
            const std::string text = buf.str();
            Certificate cert;
            try {
                cert = parse_certificate(text);
            } catch (const std::exception& e) {
                err << "REJECTED: malformed certificate: " << e.what() << "\n";
                return VerifyFailed;
            }
            VerificationReport rep = verify_certificate(cert);
            if (serialize(cert) != text) rep.fail("certificate is not in canonical serialization");
            if (!rep.ok) {
                err << "REJECTED\n";
                for (const auto& r : rep.reasons) err << "  " << r << "\n";
                return VerifyFailed;
            }
            out << "OK " << to_string(cert.verdict) << (cert.path.empty() ? "" : " " + cert.path) << "\n";
            return Ok;
        }
        if (hunt_cmd->parsed()) {
            const BudgetSetting b = h_budget.apply(base);
            Output o(out, h_out);
            std::ostream& s = o.stream();
            if (h_format == "table") s << table_header();
            hunt(h_n, h_limit, {b.budget, h_threads}, [&](const HuntRecord& r) {
                if (h_format == "table")
                    s << table_row(r);
                else
                    s << to_json(r).dump() << "\n";
            });
            return Ok;
        }
        if (density_cmd->parsed()) {
            const BudgetSetting b = d_budget.apply(base);
            DensityReport rep = density_estimate(d_n, d_limit, {b.budget, d_threads});
            auto j = to_json(rep);
            j["budget_source"] = b.source;
            Output o(out, d_out);
            o.stream() << j.dump(2) << "\n";
            return Ok;
        }
        if (norm_cmd->parsed()) {
            const BudgetSetting b = ns_budget.apply(base);
            SearchStats st;
            auto w = norm_equation_search(ns_n, ns_target_value, b.budget, ns_hint, &st);
            json j;
            j["n"] = std::to_string(ns_n);
            j["target"] = ns_target_value.get_str();
            j["found"] = w.has_value();
            if (w) {
                json g = json::array();
                for (const auto& c : w->coeffs()) g.push_back(c.get_str());
                j["generator"] = g;
                j["norm"] = absolute_norm(*w).get_str();
            }
            j["spent"] = detail::stats_json(st);
            j["budget"] = detail::budget_json(b.budget);
            j["budget_source"] = b.source;
            out << j.dump(2) << "\n";
            return w ? Ok : UnknownVerdict;
        }
        if (phi_cmd->parsed()) {
            out << cyclotomic_poly(p_n).to_string() << "\n";
            return Ok;
        }
    } catch (const std::exception& e) {
        err << "noether: internal error: " << e.what() << "\n";
        return Internal;
    }
    return Usage;
}

}  // namespace noether::cli
