#include "dioph/decomp.hpp"

#include <algorithm>
#include <cmath>

namespace dioph {

EpsilonMatrix::EpsilonMatrix(std::uint32_t m, std::uint64_t bits)
    : m_(m), bits_(bits) {
    if (m < 2) throw UsageError("EpsilonMatrix: m must be >= 2");
    if (m > 11) throw UsageError("EpsilonMatrix: m must be <= 11");
    const std::uint32_t M = size();
    if (M < 64 && (bits >> M) != 0)
        throw UsageError("EpsilonMatrix: bits beyond index m(m-1)/2");
}

std::uint32_t EpsilonMatrix::flat_index(std::uint32_t i, std::uint32_t j,
                                        std::uint32_t m) {
    if (!(1 <= i && i < j && j <= m)) throw UsageError("bad pair index");
    return (i - 1) * m - i * (i - 1) / 2 + (j - i - 1);
}

void EpsilonMatrix::set(std::uint32_t i, std::uint32_t j, bool v) {
    std::uint64_t mask = std::uint64_t{1} << flat_index(i, j, m_);
    bits_ = v ? (bits_ | mask) : (bits_ & ~mask);
}

std::uint32_t EpsilonMatrix::weight() const {
    return static_cast<std::uint32_t>(__builtin_popcountll(bits_));
}

std::uint32_t EpsilonMatrix::row1_weight() const {
    std::uint64_t row1 = bits_ & ((std::uint64_t{1} << (m_ - 1)) - 1);
    return static_cast<std::uint32_t>(__builtin_popcountll(row1));
}

std::uint32_t EpsilonMatrix::lower_weight() const {
    return weight() - row1_weight();
}

std::string EpsilonMatrix::to_hex() const {
    if (bits_ == 0) return "0";
    std::string out;
    for (std::uint64_t v = bits_; v; v >>= 4) out += "0123456789abcdef"[v & 15];
    std::reverse(out.begin(), out.end());
    return out;
}

EpsilonMatrix EpsilonMatrix::from_hex(std::uint32_t m, const std::string& hex) {
    if (hex.empty() || hex.size() > 16) throw UsageError("bad eps hex: " + hex);
    std::uint64_t v = 0;
    for (char c : hex) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else throw UsageError("bad eps hex: " + hex);
        v = (v << 4) | static_cast<std::uint64_t>(d);
    }
    return EpsilonMatrix(m, v);
}

// ---------------------------------------------------------------------------

namespace {

long long ipow_ll(long long base, std::uint32_t e) {
    long long v = 1;
    for (std::uint32_t i = 0; i < e; ++i) v *= base;
    return v;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t e, std::uint64_t limit) {
    std::uint64_t v = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
        if (v > limit / base) return limit + 1;
        v *= base;
    }
    return v;
}

struct REpsCtx {
    const Field& f;
    Fe r;
    std::uint32_t m;
    const EpsilonMatrix& eps;
    std::vector<Fe> tuple;
    long long acc = 0;

    // Prunes a branch as soon as an active pair hits chi = 0.
    void run_pruned(std::uint32_t t, int sign) {
        for (Fe a = 1; a < f.q(); ++a) {
            int s = sign;
            bool dead = false;
            for (std::uint32_t i = 0; i < t; ++i) {
                if (!eps.bit(i + 1, t + 1)) continue;
                int c = f.chi(f.add(f.mul(tuple[i], a), r));
                if (c == 0) { dead = true; break; }
                s *= c;
            }
            if (dead) continue;
            tuple[t] = a;
            if (t + 1 == m)
                acc += s;
            else
                run_pruned(t + 1, s);
        }
    }

    // Full enumeration, no pruning; the independent slow route.
    void run_naive(std::uint32_t t) {
        for (Fe a = 1; a < f.q(); ++a) {
            tuple[t] = a;
            if (t + 1 == m) {
                long long term = 1;
                for (std::uint32_t i = 1; i <= m && term != 0; ++i)
                    for (std::uint32_t j = i + 1; j <= m; ++j) {
                        if (!eps.bit(i, j)) continue;
                        term *= f.chi(f.add(f.mul(tuple[i - 1], tuple[j - 1]), r));
                        if (term == 0) break;
                    }
                acc += term;
            } else {
                run_naive(t + 1);
            }
        }
    }
};

}  // namespace

REpsResult r_eps(const Field& f, std::uint32_t m, Fe r, const EpsilonMatrix& eps,
                 REpsAlgo algo, std::uint64_t budget) {
    if (m != eps.m()) throw UsageError("r_eps: eps is for a different m");
    if (r == 0) throw UsageError("r_eps: r must be nonzero");
    if (checked_pow(f.q() - 1, m, budget) > budget)
        throw BudgetExceededError("r_eps: (q-1)^m exceeds budget");
    if (!eps.nonzero())
        return {ipow_ll(f.q() - 1, m), true};
    REpsCtx ctx{f, r, m, eps, std::vector<Fe>(m), 0};
    if (algo == REpsAlgo::naive)
        ctx.run_naive(0);
    else
        ctx.run_pruned(0, 1);
    return {ctx.acc, false};
}

std::pair<std::vector<std::uint32_t>, EpsilonMatrix> canonicalize_eps(
    const EpsilonMatrix& eps) {
    if (!eps.nonzero()) throw ZeroEpsilonError("canonicalize_eps: eps = 0");
    const std::uint32_t m = eps.m();
    std::uint32_t pi = 0, pj = 0;
    for (std::uint32_t i = 1; i <= m && pi == 0; ++i)
        for (std::uint32_t j = i + 1; j <= m; ++j)
            if (eps.bit(i, j)) {
                pi = i;
                pj = j;
                break;
            }
    std::vector<std::uint32_t> perm(m, 0);  // perm[old-1] = new index
    perm[pi - 1] = 1;
    perm[pj - 1] = 2;
    std::uint32_t next = 3;
    for (std::uint32_t v = 1; v <= m; ++v)
        if (v != pi && v != pj) perm[v - 1] = next++;
    return {perm, relabel_eps(eps, perm)};
}

EpsilonMatrix relabel_eps(const EpsilonMatrix& eps,
                          const std::vector<std::uint32_t>& perm) {
    const std::uint32_t m = eps.m();
    if (perm.size() != m) throw UsageError("relabel_eps: bad permutation size");
    EpsilonMatrix out(m, 0);
    for (std::uint32_t i = 1; i <= m; ++i)
        for (std::uint32_t j = i + 1; j <= m; ++j) {
            if (!eps.bit(i, j)) continue;
            std::uint32_t ni = perm[i - 1], nj = perm[j - 1];
            out.set(std::min(ni, nj), std::max(ni, nj), true);
        }
    return out;
}

long long r_eps_vanishing_closed_form(const Field& f, std::uint32_t m, Fe r,
                                      const EpsilonMatrix& eps) {
    if (!eps.nonzero()) throw ZeroEpsilonError("closed form: eps = 0");
    if (eps.lower_weight() != 0)
        throw PreconditionViolatedError(
            "closed form requires eps supported on row 1");
    const std::uint32_t w = eps.row1_weight();
    const long long inner = -f.chi(r);  // sum over a in F_q^* of chi(a + r)
    long long v = ipow_ll(f.q() - 1, m - w);
    for (std::uint32_t i = 0; i < w; ++i) v *= inner;
    return v;
}

FactoredKernel make_f_kernel(Fe r, const EpsilonMatrix& eps,
                             const std::vector<Fe>& a_rest) {
    FactoredKernel kern;
    kern.kind = KernelKind::linear_family;
    kern.r = r;
    const std::uint32_t m = eps.m();
    for (std::uint32_t j = 2; j <= m; ++j)
        kern.factors.emplace_back(a_rest[j - 2], eps.bit(1, j));
    return kern;
}

FactoredKernel make_g_kernel(const Field& f, Fe r, const EpsilonMatrix& eps,
                             const std::vector<Fe>& a_rest) {
    FactoredKernel kern;
    kern.kind = KernelKind::quadratic_family;
    kern.r = r;
    const std::uint32_t m = eps.m();
    for (std::uint32_t i = 2; i <= m; ++i)
        for (std::uint32_t j = i + 1; j <= m; ++j)
            kern.factors.emplace_back(f.mul(a_rest[i - 2], a_rest[j - 2]),
                                      eps.bit(i, j));
    return kern;
}

namespace {

void check_a_rest(const EpsilonMatrix& eps, const std::vector<Fe>& a_rest) {
    if (a_rest.size() != eps.m() - 1)
        throw UsageError("a_rest must hold a_2..a_m");
    for (Fe a : a_rest)
        if (a == 0) throw UsageError("a_rest entries must be nonzero");
}

}  // namespace

long long s_sum(const Field& f, Fe r, const EpsilonMatrix& eps,
                const std::vector<Fe>& a_rest) {
    check_a_rest(eps, a_rest);
    if (!eps.bit(1, 2))
        throw PreconditionViolatedError("s_sum requires eps_{1,2} = 1");
    Poly F = expand_kernel(f, make_f_kernel(r, eps, a_rest));
    return char_sum_poly(f, F, SumDomain::nonzero);
}

long long t_sum(const Field& f, Fe r, const EpsilonMatrix& eps,
                const std::vector<Fe>& a_rest) {
    check_a_rest(eps, a_rest);
    if (eps.lower_weight() == 0)
        throw PreconditionViolatedError("t_sum requires a nonzero lower part");
    Poly G = expand_kernel(f, make_g_kernel(f, r, eps, a_rest));
    return char_sum_poly(f, G, SumDomain::nonzero);
}

STDecompositionReport st_identity_check(const Field& f, std::uint32_t m, Fe r,
                                        const EpsilonMatrix& eps,
                                        std::uint64_t budget) {
    if (m != eps.m()) throw UsageError("st_identity_check: eps is for a different m");
    if (!eps.bit(1, 2))
        throw PreconditionViolatedError("st_identity_check requires eps_{1,2} = 1");
    if (eps.lower_weight() == 0)
        throw PreconditionViolatedError(
            "st_identity_check requires a nonzero lower part");
    if (checked_pow(f.q() - 1, m, budget) > budget)
        throw BudgetExceededError("st_identity_check: (q-1)^m exceeds budget");

    STDecompositionReport rep;
    rep.r_direct = r_eps(f, m, r, eps, REpsAlgo::dfs_weighted, budget).value;

    long long sum_st = 0;
    std::vector<Fe> a_rest(m - 1, 1);
    for (;;) {
        FactoredKernel fk = make_f_kernel(r, eps, a_rest);
        FactoredKernel gk = make_g_kernel(f, r, eps, a_rest);
        Poly F = expand_kernel(f, fk);
        Poly G = expand_kernel(f, gk);
        long long S = char_sum_poly(f, F, SumDomain::nonzero);
        long long T = char_sum_poly(f, G, SumDomain::nonzero);
        sum_st += S * T;

        bool f_square = kernel_is_square(f, fk);
        bool g_square = kernel_is_square(f, gk);
        if (f_square || g_square) ++rep.square_kernel_tuples;
        // Weil audit on the complete sums, kernel by kernel.
        const double sq = std::sqrt(static_cast<double>(f.q()));
        if (!f_square) {
            rep.weil_max_abs = std::max(rep.weil_max_abs, std::llabs(S));
            long long full = S + f.chi(poly_eval(f, F, 0));
            if (std::llabs(full) > (F.degree() - 1) * sq + 1e-9)
                ++rep.weil_violations;
        }
        if (!g_square) {
            rep.weil_max_abs = std::max(rep.weil_max_abs, std::llabs(T));
            long long full = T + f.chi(poly_eval(f, G, 0));
            if (std::llabs(full) > (G.degree() - 1) * sq + 1e-9)
                ++rep.weil_violations;
        }

        // Odometer over (F_q^*)^{m-1}.
        std::size_t pos = 0;
        while (pos < a_rest.size() && a_rest[pos] == f.q() - 1) {
            a_rest[pos] = 1;
            ++pos;
        }
        if (pos == a_rest.size()) break;
        ++a_rest[pos];
    }

    rep.r_via_st = BigRat(BigInt(sum_st), BigInt(f.q() - 1));
    rep.identity_holds = rep.r_via_st == BigRat(rep.r_direct);
    if (!rep.identity_holds)
        throw IdentityViolatedError(
            "S*T decomposition disagrees with R(eps): implementation defect");
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

struct ProductSideCtx {
    const Field& f;
    Fe r;
    std::uint32_t m;
    std::vector<Fe> tuple;
    long long product_side = 0;
    long long restricted_side = 0;

    // twos: count of chi = +1 pairs so far; had_zero: some pair hit
    // a_i a_j + r = 0 (its factor is 1 + chi(0) = 1).
    void run(std::uint32_t t, std::uint32_t twos, bool had_zero) {
        for (Fe a = 1; a < f.q(); ++a) {
            std::uint32_t nt = twos;
            bool nz = had_zero;
            bool dead = false;
            for (std::uint32_t i = 0; i < t; ++i) {
                Fe shifted = f.add(f.mul(tuple[i], a), r);
                if (shifted == 0) {
                    nz = true;
                } else if (f.chi(shifted) == 1) {
                    ++nt;
                } else {
                    dead = true;  // factor 1 + (-1) = 0
                    break;
                }
            }
            if (dead) continue;
            tuple[t] = a;
            if (t + 1 == m) {
                long long val = 1ll << nt;
                product_side += val;
                if (!nz) restricted_side += val;
            } else {
                run(t + 1, nt, nz);
            }
        }
    }
};

}  // namespace

ExpansionIdentityReport expansion_identity_check(const Field& f, std::uint32_t m,
                                                 Fe r, std::uint64_t budget) {
    if (r == 0) throw UsageError("expansion_identity_check: r must be nonzero");
    const std::uint32_t M = m * (m - 1) / 2;
    std::uint64_t tuples = checked_pow(f.q() - 1, m, budget);
    if (tuples > budget || (std::uint64_t{1} << M) > budget / std::max<std::uint64_t>(tuples, 1))
        throw BudgetExceededError("expansion_identity_check exceeds budget");

    ExpansionIdentityReport rep;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << M); ++bits) {
        EpsilonMatrix eps(m, bits);
        rep.sum_r_all_eps += r_eps(f, m, r, eps, REpsAlgo::dfs_weighted, budget).value;
    }

    ProductSideCtx ctx{f, r, m, std::vector<Fe>(m), 0, 0};
    ctx.run(0, 0, false);
    rep.product_side = ctx.product_side;
    rep.restricted_side = ctx.restricted_side;
    rep.zero_correction = rep.product_side - rep.restricted_side;

    bool divisible = (rep.restricted_side & ((1ll << M) - 1)) == 0;
    rep.strict_count = static_cast<std::uint64_t>(rep.restricted_side) >> M;

    CountSpec spec;
    spec.m = m;
    spec.r = r;
    CountReport strict = count_expansion(f, spec, budget);
    rep.holds = divisible && rep.sum_r_all_eps == rep.product_side &&
                rep.strict_count == strict.count;
    if (!rep.holds)
        throw IdentityViolatedError(
            "expansion identity failed: implementation defect");
    return rep;
}

}  // namespace dioph
