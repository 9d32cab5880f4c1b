#include "dioph/count.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <thread>

#include "dioph/bitops.hpp"

namespace dioph {

const char* to_string(EntriesDomain d) {
    return d == EntriesDomain::nonzero ? "nonzero" : "all";
}
const char* to_string(SquareRule s) {
    return s == SquareRule::qr_only ? "qr_only" : "qr_or_zero";
}
const char* to_string(Multiplicity m) {
    switch (m) {
        case Multiplicity::ordered_with_repeats: return "ordered_with_repeats";
        case Multiplicity::ordered_distinct: return "ordered_distinct";
        default: return "unordered_distinct";
    }
}

void CountSpec::validate() const {
    if (m < 2) throw UsageError("m must be >= 2");
    if (m > 20) throw UsageError("m must be <= 20");
    if (r == 0) throw UsageError("shift r must be nonzero");
}

std::string CountSpec::variant_token() const {
    std::string out = to_string(entries_domain);
    out += ':';
    out += to_string(square_rule);
    out += ':';
    out += to_string(multiplicity);
    return out;
}

namespace {

// The pairwise predicate on the shifted product a_i a_j + r.
inline bool passes(const Field& f, SquareRule rule, Fe shifted) {
    int c = f.chi(shifted);
    return rule == SquareRule::qr_only ? c == 1 : c >= 0;
}

std::uint64_t factorial_u64(std::uint32_t n) {
    std::uint64_t f = 1;
    for (std::uint32_t i = 2; i <= n; ++i) f *= i;
    return f;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t e, std::uint64_t limit) {
    std::uint64_t v = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
        if (v > limit / base) return limit + 1;
        v *= base;
    }
    return v;
}

}  // namespace

PairGraph build_pair_graph(const Field& f, const CountSpec& spec) {
    spec.validate();
    PairGraph g;
    g.code_base = spec.entries_domain == EntriesDomain::nonzero ? 1 : 0;
    g.n = f.q() - g.code_base;
    g.words = (g.n + 63) / 64;
    g.bits.assign(static_cast<std::size_t>(g.n) * g.words, 0);
    for (std::uint32_t u = 0; u < g.n; ++u) {
        Fe cu = g.code_of(u);
        for (std::uint32_t v = u; v < g.n; ++v) {
            Fe shifted = f.add(f.mul(cu, g.code_of(v)), spec.r);
            if (passes(f, spec.square_rule, shifted)) {
                g.bits[static_cast<std::size_t>(u) * g.words + (v >> 6)] |=
                    std::uint64_t{1} << (v & 63);
                g.bits[static_cast<std::size_t>(v) * g.words + (u >> 6)] |=
                    std::uint64_t{1} << (u & 63);
            }
        }
    }
    return g;
}

void finalize_report(CountReport& rep) {
    const std::uint32_t m = rep.spec.m;
    BigInt qm = 1;
    for (std::uint32_t i = 0; i < m; ++i) qm *= rep.q;
    BigInt den = BigInt(1) << (m * (m - 1) / 2);
    rep.main_term = BigRat(qm, den);
    rep.residual = BigRat(rep.count) - rep.main_term;
    BigRat absres = rep.residual < 0 ? -rep.residual : rep.residual;
    double ar = absres.convert_to<double>();
    double q = rep.q;
    rep.residual_norm_1 = ar / std::pow(q, m - 1);
    rep.residual_norm_half = ar / std::pow(q, m - 0.5);
}

// ---------------------------------------------------------------------------
// Brute-force oracle

namespace {

struct BruteCtx {
    const Field& f;
    const CountSpec& spec;
    std::vector<Fe> tuple;
    std::uint64_t count = 0;

    void run(std::uint32_t t, Fe min_code) {
        const Fe lo = spec.entries_domain == EntriesDomain::nonzero ? 1 : 0;
        const bool set_mode = spec.multiplicity == Multiplicity::unordered_distinct;
        Fe start = set_mode ? min_code : lo;
        for (Fe a = start; a < f.q(); ++a) {
            if (spec.multiplicity == Multiplicity::ordered_distinct) {
                bool dup = false;
                for (std::uint32_t i = 0; i < t; ++i)
                    if (tuple[i] == a) { dup = true; break; }
                if (dup) continue;
            }
            bool ok = true;
            for (std::uint32_t i = 0; i < t; ++i) {
                if (!passes(f, spec.square_rule, f.add(f.mul(tuple[i], a), spec.r))) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            tuple[t] = a;
            if (t + 1 == spec.m)
                ++count;
            else
                run(t + 1, a + 1);
        }
    }
};

}  // namespace

CountReport count_brute(const Field& f, const CountSpec& spec, std::uint64_t budget) {
    spec.validate();
    auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t domain =
        f.q() - (spec.entries_domain == EntriesDomain::nonzero ? 1 : 0);
    if (checked_pow(domain, spec.m, budget) > budget)
        throw BudgetExceededError("count_brute: q^m exceeds budget");
    BruteCtx ctx{f, spec, std::vector<Fe>(spec.m), 0};
    ctx.run(0, spec.entries_domain == EntriesDomain::nonzero ? 1 : 0);
    CountReport rep;
    rep.q = f.q();
    rep.p = f.p();
    rep.k = f.k();
    rep.spec = spec;
    rep.count = ctx.count;
    rep.algo = "brute";
    finalize_report(rep);
    rep.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
    return rep;
}

// ---------------------------------------------------------------------------
// Bitset DFS

namespace {

// popcount of buf bits at positions >= lo (buf has `words` words).
std::uint64_t popcount_from(const std::uint64_t* buf, std::uint32_t words,
                            std::uint32_t lo) {
    std::uint32_t w = lo >> 6;
    if (w >= words) return 0;
    std::uint64_t acc = std::popcount(buf[w] & (~std::uint64_t{0} << (lo & 63)));
    for (std::uint32_t i = w + 1; i < words; ++i) acc += std::popcount(buf[i]);
    return acc;
}

struct DfsCtx {
    const PairGraph& g;
    const CountSpec& spec;
    std::uint64_t m_fact;
    std::vector<std::vector<std::uint64_t>> cand;  // per level
    std::uint64_t total = 0;

    DfsCtx(const PairGraph& graph, const CountSpec& s)
        : g(graph), spec(s), m_fact(factorial_u64(s.m)) {
        cand.assign(s.m + 1, std::vector<std::uint64_t>(g.words, 0));
    }

    // Visits non-decreasing (with repeats) or increasing (distinct)
    // sequences of vertices; cand[t] is the intersection of the rows of the
    // chosen prefix, so the loop bit of v gates choosing v again.
    //
    // t elements chosen; last = last vertex; run = current run length;
    // denom = product of factorials of completed runs.
    void run(std::uint32_t t, std::uint32_t last, std::uint32_t run_len,
             std::uint64_t denom) {
        const bool repeats = spec.multiplicity == Multiplicity::ordered_with_repeats;
        const std::uint32_t lo = repeats ? last : last + 1;
        const std::uint64_t* c = cand[t].data();

        if (t + 1 == spec.m && !repeats) {
            // Closed form for the last level: every remaining candidate
            // past `last` completes a distinct tuple.
            std::uint64_t n = popcount_from(c, g.words, lo);
            total += spec.multiplicity == Multiplicity::ordered_distinct
                         ? n * m_fact
                         : n;
            return;
        }

        std::uint32_t w = lo >> 6;
        if (w >= g.words) return;
        std::uint64_t word = c[w] & (~std::uint64_t{0} << (lo & 63));
        for (;;) {
            while (word == 0) {
                if (++w >= g.words) return;
                word = c[w];
            }
            std::uint32_t v = (w << 6) + std::countr_zero(word);
            word &= word - 1;
            std::uint32_t nrun = (repeats && v == last && t > 0) ? run_len + 1 : 1;
            std::uint64_t ndenom =
                (repeats && t > 0 && v != last) ? denom * factorial_u64(run_len) : denom;
            if (t + 1 == spec.m) {
                if (repeats)
                    total += m_fact / (ndenom * factorial_u64(nrun));
                else
                    total += spec.multiplicity == Multiplicity::ordered_distinct
                                 ? m_fact
                                 : 1;
            } else {
                bitops::and_into(cand[t + 1].data(), c, g.row(v), g.words);
                run(t + 1, v, nrun, ndenom);
            }
        }
    }

    // Level-0 entry restricted to a vertex range [v_begin, v_end).
    void run_roots(std::uint32_t v_begin, std::uint32_t v_end) {
        for (std::uint32_t v = v_begin; v < v_end; ++v) {
            if (spec.m == 1) {
                ++total;
                continue;
            }
            std::copy(g.row(v), g.row(v) + g.words, cand[1].begin());
            run(1, v, 1, 1);
        }
    }
};

}  // namespace

CountReport count_dfs(const Field& f, const CountSpec& spec, unsigned threads) {
    spec.validate();
    auto t0 = std::chrono::steady_clock::now();
    PairGraph g = build_pair_graph(f, spec);

    std::uint64_t total = 0;
    if (threads <= 1 || g.n < 2 * threads) {
        DfsCtx ctx(g, spec);
        ctx.run_roots(0, g.n);
        total = ctx.total;
    } else {
        std::vector<std::uint64_t> partial(threads, 0);
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            std::uint32_t lo = static_cast<std::uint32_t>(
                static_cast<std::uint64_t>(g.n) * t / threads);
            std::uint32_t hi = static_cast<std::uint32_t>(
                static_cast<std::uint64_t>(g.n) * (t + 1) / threads);
            pool.emplace_back([&, t, lo, hi] {
                DfsCtx ctx(g, spec);
                ctx.run_roots(lo, hi);
                partial[t] = ctx.total;
            });
        }
        for (auto& th : pool) th.join();
        for (auto v : partial) total += v;  // exact integers, order-free
    }

    CountReport rep;
    rep.q = f.q();
    rep.p = f.p();
    rep.k = f.k();
    rep.spec = spec;
    rep.count = total;
    rep.algo = "dfs";
    finalize_report(rep);
    rep.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
    return rep;
}

// ---------------------------------------------------------------------------
// Character-sum expansion route

namespace {

struct ExpansionCtx {
    const Field& f;
    Fe r;
    std::uint32_t m;
    std::vector<Fe> tuple;
    std::uint64_t restricted_sum = 0;  // sum of prod (1 + chi) over kept tuples

    void run(std::uint32_t t, std::uint32_t twos) {
        for (Fe a = 1; a < f.q(); ++a) {
            std::uint32_t nt = twos;
            bool keep = true;
            for (std::uint32_t i = 0; i < t; ++i) {
                Fe shifted = f.add(f.mul(tuple[i], a), r);
                if (shifted == 0) { keep = false; break; }  // restricted sum
                int c = f.chi(shifted);
                if (c == -1) { keep = false; break; }  // factor 1 + chi = 0
                ++nt;                                   // factor 1 + chi = 2
            }
            if (!keep) continue;
            tuple[t] = a;
            if (t + 1 == m)
                restricted_sum += std::uint64_t{1} << nt;
            else
                run(t + 1, nt);
        }
    }
};

}  // namespace

CountReport count_expansion(const Field& f, const CountSpec& spec,
                            std::uint64_t budget) {
    spec.validate();
    if (!spec.is_default_variant())
        throw UnsupportedVariantError(
            "count_expansion requires the default variant "
            "(nonzero:qr_only:ordered_with_repeats)");
    if (checked_pow(f.q() - 1, spec.m, budget) > budget)
        throw BudgetExceededError("count_expansion: q^m exceeds budget");
    auto t0 = std::chrono::steady_clock::now();

    ExpansionCtx ctx{f, spec.r, spec.m, std::vector<Fe>(spec.m), 0};
    ctx.run(0, 0);
    const std::uint32_t M = spec.m * (spec.m - 1) / 2;
    if (ctx.restricted_sum & ((std::uint64_t{1} << M) - 1))
        throw IdentityViolatedError(
            "count_expansion: restricted sum not divisible by 2^M");

    CountReport rep;
    rep.q = f.q();
    rep.p = f.p();
    rep.k = f.k();
    rep.spec = spec;
    rep.count = ctx.restricted_sum >> M;
    rep.algo = "expansion";
    finalize_report(rep);
    rep.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
    return rep;
}

std::string rat_to_string(const BigRat& r) {
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

BigRat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return BigRat(BigInt(s));
    return BigRat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

}  // namespace dioph
