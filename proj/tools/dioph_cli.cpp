// Command-line driver: exact Diophantine tuple counts over F_q, character
// sum identity checks, Weil bound audits, residual scans and the smallest-q
// search.
//
// Exit codes: 0 success, 2 usage error, 3 budget exceeded, 4 exact identity
// violated (a defect signal, never bad input).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dioph/bitops.hpp"
#include "dioph/count.hpp"
#include "dioph/decomp.hpp"
#include "dioph/field.hpp"
#include "dioph/poly.hpp"
#include "dioph/scan.hpp"

namespace {

using namespace dioph;

unsigned default_threads() {
    if (const char* env = std::getenv("DIOPH_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

Field make_field(const std::string& spec, const std::string& modulus) {
    std::optional<std::vector<std::uint32_t>> mod;
    if (!modulus.empty()) mod = parse_coeff_list(modulus);
    return Field::from_spec(spec, std::move(mod));
}

EntriesDomain parse_domain(const std::string& s) {
    if (s == "nonzero") return EntriesDomain::nonzero;
    if (s == "all") return EntriesDomain::all;
    throw UsageError("bad --domain: " + s);
}

SquareRule parse_square_rule(const std::string& s) {
    if (s == "qr_only") return SquareRule::qr_only;
    if (s == "qr_or_zero") return SquareRule::qr_or_zero;
    throw UsageError("bad --square-rule: " + s);
}

Multiplicity parse_multiplicity(const std::string& s) {
    if (s == "ordered_with_repeats") return Multiplicity::ordered_with_repeats;
    if (s == "ordered_distinct") return Multiplicity::ordered_distinct;
    if (s == "unordered_distinct") return Multiplicity::unordered_distinct;
    throw UsageError("bad --multiplicity: " + s);
}

nlohmann::json report_json(const CountReport& rep) {
    return {{"q", rep.q},
            {"p", rep.p},
            {"k", rep.k},
            {"m", rep.spec.m},
            {"r", rep.spec.r},
            {"variant", rep.spec.variant_token()},
            {"algo", rep.algo},
            {"count", rep.count},
            {"main_term", rat_to_string(rep.main_term)},
            {"residual", rat_to_string(rep.residual)},
            {"residual_norm_1", rep.residual_norm_1},
            {"residual_norm_half", rep.residual_norm_half},
            {"millis", rep.millis}};
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        f << text;
    }
}

struct CountArgs {
    std::string field = "5", modulus, domain = "nonzero",
                square_rule = "qr_only", multiplicity = "ordered_with_repeats",
                algo = "dfs", format = "text", out;
    std::uint32_t m = 2;
    Fe r = 1;
    unsigned threads = default_threads();
    std::uint64_t budget = 1000000000ull;
};

int cmd_count(const CountArgs& a) {
    Field f = make_field(a.field, a.modulus);
    CountSpec spec;
    spec.m = a.m;
    spec.r = a.r;
    spec.entries_domain = parse_domain(a.domain);
    spec.square_rule = parse_square_rule(a.square_rule);
    spec.multiplicity = parse_multiplicity(a.multiplicity);
    if (spec.r >= f.q()) throw UsageError("--r out of range for the field");

    CountReport rep;
    if (a.algo == "brute")
        rep = count_brute(f, spec, a.budget);
    else if (a.algo == "dfs")
        rep = count_dfs(f, spec, a.threads);
    else if (a.algo == "expansion")
        rep = count_expansion(f, spec, a.budget);
    else
        throw UsageError("bad --algo: " + a.algo);

    if (a.format == "json") {
        emit(a.out, report_json(rep).dump(2) + "\n");
    } else if (a.format == "csv") {
        std::ostringstream ss;
        write_rows_csv({row_from_report(rep)}, ss);
        emit(a.out, ss.str());
    } else {
        std::ostringstream ss;
        ss << "field F_" << rep.q << " (p=" << rep.p << ", k=" << rep.k << ")\n"
           << "variant " << rep.spec.variant_token() << ", m=" << rep.spec.m
           << ", r=" << rep.spec.r << ", algo=" << rep.algo << "\n"
           << "count = " << rep.count << "\n"
           << "main term = " << rat_to_string(rep.main_term) << "\n"
           << "residual = " << rat_to_string(rep.residual)
           << "  (|E|/q^(m-1) = " << rep.residual_norm_1
           << ", |E|/q^(m-1/2) = " << rep.residual_norm_half << ")\n"
           << "millis = " << rep.millis << "\n";
        emit(a.out, ss.str());
    }
    return 0;
}

struct IdentityArgs {
    std::string field = "5", modulus, eps_hex;
    std::uint32_t m = 2;
    std::optional<Fe> r;
    std::uint64_t budget = 1000000000ull;
};

int cmd_identity(const IdentityArgs& a) {
    Field f = make_field(a.field, a.modulus);
    std::vector<Fe> rs;
    if (a.r) {
        if (*a.r == 0 || *a.r >= f.q()) throw UsageError("--r out of range");
        rs = {*a.r};
    } else {
        for (Fe r = 1; r < f.q(); ++r) rs.push_back(r);
    }

    if (!a.eps_hex.empty()) {
        EpsilonMatrix eps = EpsilonMatrix::from_hex(a.m, a.eps_hex);
        if (!eps.nonzero()) throw UsageError("--eps must be nonzero");
        for (Fe r : rs) {
            STDecompositionReport rep = st_identity_check(f, a.m, r, eps, a.budget);
            std::cout << "st-identity q=" << f.q() << " m=" << a.m << " r=" << r
                      << " eps=" << eps.to_hex() << ": R = " << rep.r_direct
                      << " = " << rat_to_string(rep.r_via_st)
                      << " (square-kernel tuples " << rep.square_kernel_tuples
                      << ", max |S|,|T| " << rep.weil_max_abs << ", weil violations "
                      << rep.weil_violations << ")\n";
        }
    } else {
        for (Fe r : rs) {
            ExpansionIdentityReport rep =
                expansion_identity_check(f, a.m, r, a.budget);
            std::cout << "expansion-identity q=" << f.q() << " m=" << a.m
                      << " r=" << r << ": sum_eps R = " << rep.sum_r_all_eps
                      << " = " << rep.product_side << " (restricted "
                      << rep.restricted_side << " = 2^M * " << rep.strict_count
                      << ", zero correction " << rep.zero_correction << ")\n";
        }
    }
    return 0;
}

struct ScanArgs {
    std::uint32_t m = 4, q_min = 3, q_max = 27;
    std::string r_mode = "class", domain = "nonzero", square_rule = "qr_only",
                multiplicity = "ordered_with_repeats", format = "csv", out;
    Fe r = 1;
    unsigned threads = default_threads();
    std::uint64_t budget = 1000000000ull;
    bool timings = false;
};

int cmd_scan(const ScanArgs& a) {
    ScanOptions opt;
    opt.m = a.m;
    opt.q_min = a.q_min;
    opt.q_max = a.q_max;
    if (a.r_mode == "all")
        opt.r_mode = RMode::all;
    else if (a.r_mode == "class")
        opt.r_mode = RMode::one_per_square_class;
    else if (a.r_mode == "fixed")
        opt.r_mode = RMode::fixed;
    else
        throw UsageError("bad --r-mode: " + a.r_mode);
    opt.fixed_r = a.r;
    opt.entries_domain = parse_domain(a.domain);
    opt.square_rule = parse_square_rule(a.square_rule);
    opt.multiplicity = parse_multiplicity(a.multiplicity);
    opt.threads = a.threads;
    opt.per_row_budget = a.budget;
    opt.record_timings = a.timings;

    ScanResult res = scan_residuals(opt);
    std::ostringstream ss;
    if (a.format == "json")
        write_rows_json(res.rows, ss);
    else
        write_rows_csv(res.rows, ss);
    emit(a.out, ss.str());
    for (auto [q, r] : res.skipped)
        std::cerr << "skipped q=" << q << " r=" << r << " (budget)\n";
    if (!res.rows.empty()) {
        ResidualSummary sum = residual_summary(res.rows);
        std::cerr << "max |E|/q^(m-1) = " << sum.max_norm_1
                  << ", max |E|/q^(m-1/2) = " << sum.max_norm_half;
        if (sum.slope_defined)
            std::cerr << ", envelope slope = " << sum.envelope_slope << " ("
                      << sum.bins_used << " bins)";
        std::cerr << "\n";
    }
    return 0;
}

struct SearchArgs {
    std::uint32_t m = 2, q_max = 27;
    unsigned threads = default_threads();
};

int cmd_search(const SearchArgs& a) {
    SmallestQResult res = search_smallest_q(a.m, a.q_max, a.threads);
    for (auto [q, r] : res.failures)
        std::cout << "q=" << q << ": N_r(m,q) = 0 for witness r=" << r << "\n";
    if (res.found) {
        std::cout << "smallest q with N_r(" << a.m << ",q) > 0 for all r: q0 = "
                  << res.q0 << "\n";
        return 0;
    }
    std::cout << "not found within q <= " << a.q_max << "\n";
    return 0;
}

struct WeilArgs {
    std::string field = "9", modulus, poly;
    std::uint32_t samples = 100;
    std::uint64_t seed = 42;
};

int cmd_weil(const WeilArgs& a) {
    Field f = make_field(a.field, a.modulus);
    if (!a.poly.empty()) {
        Poly p = Poly::parse(a.poly);
        WeilReport rep = weil_check(f, p);
        std::cout << "f = " << p.to_string() << " over F_" << f.q()
                  << ": sum = " << rep.sum << ", bound = " << rep.degree_bound
                  << (rep.square_kernel
                          ? ", closure-square (Weil hypothesis excluded)"
                          : rep.holds ? ", holds" : ", VIOLATION")
                  << "\n";
        return rep.holds ? 0 : 4;
    }
    WeilSuiteResult res = weil_random_suite(f, a.samples, a.seed);
    std::cout << res.checked << "/" << res.checked << " non-square kernels hold"
              << " (" << res.squares_excluded << " closure-squares excluded, "
              << "max |sum|/bound = " << res.max_ratio << ")\n";
    if (res.violations) {
        std::cerr << res.violations << " Weil violations\n";
        return 4;
    }
    return 0;
}

struct DecomposeArgs {
    std::string field = "5", modulus, eps_hex;
    std::uint32_t m = 4;
    Fe r = 1;
    std::uint64_t budget = 1000000000ull;
};

int cmd_decompose(const DecomposeArgs& a) {
    Field f = make_field(a.field, a.modulus);
    if (a.eps_hex.empty()) throw UsageError("--eps is required");
    EpsilonMatrix eps = EpsilonMatrix::from_hex(a.m, a.eps_hex);
    if (!eps.nonzero()) throw UsageError("--eps must be nonzero");
    if (!eps.bit(1, 2)) {
        auto [perm, canon] = canonicalize_eps(eps);
        std::cout << "eps canonicalized to " << canon.to_hex() << "\n";
        eps = canon;
    }
    STDecompositionReport rep = st_identity_check(f, a.m, a.r, eps, a.budget);
    nlohmann::json j = {{"q", f.q()},
                        {"m", a.m},
                        {"r", a.r},
                        {"eps", eps.to_hex()},
                        {"r_direct", rep.r_direct},
                        {"r_via_st", rat_to_string(rep.r_via_st)},
                        {"square_kernel_tuples", rep.square_kernel_tuples},
                        {"weil_max_abs", rep.weil_max_abs},
                        {"weil_violations", rep.weil_violations},
                        {"identity_holds", rep.identity_holds}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Diophantine m-tuple counting over finite fields"};
    app.require_subcommand(1);

    CountArgs ca;
    auto* count = app.add_subcommand("count", "count m-tuples N_r(m,q)");
    count->add_option("--field", ca.field, "field spec, p or p^k")->required();
    count->add_option("--modulus", ca.modulus, "modulus coefficients c0,...,ck");
    count->add_option("--m", ca.m, "tuple length")->required();
    count->add_option("--r", ca.r, "shift r (element code)");
    count->add_option("--domain", ca.domain, "nonzero|all");
    count->add_option("--square-rule", ca.square_rule, "qr_only|qr_or_zero");
    count->add_option("--multiplicity", ca.multiplicity,
                      "ordered_with_repeats|ordered_distinct|unordered_distinct");
    count->add_option("--algo", ca.algo, "brute|dfs|expansion");
    count->add_option("--threads", ca.threads, "worker threads");
    count->add_option("--budget", ca.budget, "enumeration budget");
    count->add_option("--format", ca.format, "text|csv|json");
    count->add_option("--out", ca.out, "output path (default stdout)");

    IdentityArgs ia;
    std::int64_t ia_r = -1;
    auto* identity =
        app.add_subcommand("identity", "verify the exact character-sum identities");
    identity->add_option("--field", ia.field, "field spec")->required();
    identity->add_option("--modulus", ia.modulus, "modulus coefficients");
    identity->add_option("--m", ia.m, "tuple length")->required();
    identity->add_option("--r", ia_r, "shift r (default: all r)");
    identity->add_option("--eps", ia.eps_hex,
                         "eps hex; given: S*T check, omitted: expansion check");
    identity->add_option("--budget", ia.budget, "enumeration budget");

    ScanArgs sa;
    auto* scan = app.add_subcommand("scan", "residual scan across q");
    scan->add_option("--m", sa.m, "tuple length")->required();
    scan->add_option("--q-min", sa.q_min, "smallest q");
    scan->add_option("--q-max", sa.q_max, "largest q")->required();
    scan->add_option("--r-mode", sa.r_mode, "all|class|fixed");
    scan->add_option("--r", sa.r, "shift for --r-mode fixed");
    scan->add_option("--domain", sa.domain, "nonzero|all");
    scan->add_option("--square-rule", sa.square_rule, "qr_only|qr_or_zero");
    scan->add_option("--multiplicity", sa.multiplicity, "multiplicity variant");
    scan->add_option("--threads", sa.threads, "worker threads");
    scan->add_option("--budget", sa.budget, "per-row budget");
    scan->add_option("--format", sa.format, "csv|json");
    scan->add_option("--out", sa.out, "output path (default stdout)");
    scan->add_flag("--timings", sa.timings,
                   "record wall time per row (breaks byte-identical reruns)");

    SearchArgs ra;
    auto* search = app.add_subcommand("search", "smallest q with all N_r > 0");
    search->add_option("--m", ra.m, "tuple length")->required();
    search->add_option("--q-max", ra.q_max, "search bound")->required();
    search->add_option("--threads", ra.threads, "worker threads");

    WeilArgs wa;
    auto* weil = app.add_subcommand("weil", "Weil bound checks");
    weil->add_option("--field", wa.field, "field spec")->required();
    weil->add_option("--modulus", wa.modulus, "modulus coefficients");
    weil->add_option("--poly", wa.poly, "coefficients c0,c1,... (constant first)");
    weil->add_option("--samples", wa.samples, "random kernels to audit");
    weil->add_option("--seed", wa.seed, "RNG seed");

    DecomposeArgs da;
    auto* dec = app.add_subcommand("decompose", "S*T decomposition report");
    dec->add_option("--field", da.field, "field spec")->required();
    dec->add_option("--modulus", da.modulus, "modulus coefficients");
    dec->add_option("--m", da.m, "tuple length")->required();
    dec->add_option("--r", da.r, "shift r");
    dec->add_option("--eps", da.eps_hex, "eps hex")->required();
    dec->add_option("--budget", da.budget, "enumeration budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*count) return cmd_count(ca);
        if (*identity) {
            if (ia_r >= 0) ia.r = static_cast<dioph::Fe>(ia_r);
            return cmd_identity(ia);
        }
        if (*scan) return cmd_scan(sa);
        if (*search) return cmd_search(ra);
        if (*weil) return cmd_weil(wa);
        if (*dec) return cmd_decompose(da);
    } catch (const dioph::IdentityViolatedError& e) {
        std::cerr << "identity violated: " << e.what() << "\n";
        return 4;
    } catch (const dioph::BudgetExceededError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const dioph::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
