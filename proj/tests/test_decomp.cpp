#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "dioph/decomp.hpp"
#include "dioph/scan.hpp"

using namespace dioph;

namespace {

EpsilonMatrix eps_of(std::uint32_t m,
                     std::initializer_list<std::pair<int, int>> pairs) {
    EpsilonMatrix e(m, 0);
    for (auto [i, j] : pairs) e.set(i, j, true);
    return e;
}

}  // namespace

TEST_CASE("pair index order is lexicographic row-major") {
    CHECK(EpsilonMatrix::flat_index(1, 2, 4) == 0);
    CHECK(EpsilonMatrix::flat_index(1, 3, 4) == 1);
    CHECK(EpsilonMatrix::flat_index(1, 4, 4) == 2);
    CHECK(EpsilonMatrix::flat_index(2, 3, 4) == 3);
    CHECK(EpsilonMatrix::flat_index(2, 4, 4) == 4);
    CHECK(EpsilonMatrix::flat_index(3, 4, 4) == 5);
    CHECK_THROWS_AS(EpsilonMatrix::flat_index(2, 2, 4), UsageError);

    EpsilonMatrix e = eps_of(4, {{1, 2}, {2, 3}});
    CHECK(e.packed() == (1u | (1u << 3)));
    CHECK(e.row1_weight() == 1);
    CHECK(e.lower_weight() == 1);
}

TEST_CASE("eps hex round-trip") {
    EpsilonMatrix all(4, 0x3f);
    CHECK(all.to_hex() == "3f");
    CHECK(EpsilonMatrix::from_hex(4, "3f") == all);
    CHECK(EpsilonMatrix::from_hex(4, "0").packed() == 0);
    CHECK_THROWS_AS(EpsilonMatrix::from_hex(4, "40"), UsageError);  // bit 6 > M
    CHECK_THROWS_AS(EpsilonMatrix::from_hex(4, "zz"), UsageError);
}

TEST_CASE("r_eps examples") {
    Field f5 = Field::make(5, 1);
    auto e12 = eps_of(4, {{1, 2}});
    CHECK(r_eps(f5, 4, 1, e12, REpsAlgo::naive).value == -64);
    CHECK(r_eps(f5, 4, 1, e12, REpsAlgo::dfs_weighted).value == -64);

    Field f7 = Field::make(7, 1);
    CHECK(r_eps(f7, 2, 3, eps_of(2, {{1, 2}})).value == 6);

    auto zero = EpsilonMatrix(3, 0);
    REpsResult rz = r_eps(f5, 3, 1, zero);
    CHECK(rz.trivial_zero_eps);
    CHECK(rz.value == 64);  // (q-1)^m
}

TEST_CASE("naive and pruned r_eps agree") {
    Field f = Field::make(7, 1);
    for (std::uint64_t bits = 1; bits < 8; ++bits) {
        EpsilonMatrix e(3, bits);
        for (Fe r = 1; r < 7; ++r)
            CHECK(r_eps(f, 3, r, e, REpsAlgo::naive).value ==
                  r_eps(f, 3, r, e, REpsAlgo::dfs_weighted).value);
    }
}

TEST_CASE("canonicalize_eps moves an active pair to (1,2)") {
    auto [perm, canon] = canonicalize_eps(eps_of(3, {{2, 3}}));
    CHECK(canon.bit(1, 2));
    CHECK(canon.weight() == 1);

    auto id = canonicalize_eps(eps_of(3, {{1, 2}, {2, 3}}));
    CHECK(id.first == std::vector<std::uint32_t>{1, 2, 3});
    CHECK(id.second == eps_of(3, {{1, 2}, {2, 3}}));

    Field f5 = Field::make(5, 1);
    auto e34 = eps_of(4, {{3, 4}});
    auto [p2, c2] = canonicalize_eps(e34);
    CHECK(c2.bit(1, 2));
    for (Fe r = 1; r < 5; ++r)
        CHECK(r_eps(f5, 4, r, e34).value == r_eps(f5, 4, r, c2).value);

    CHECK_THROWS_AS(canonicalize_eps(EpsilonMatrix(3, 0)), ZeroEpsilonError);
}

TEST_CASE("r_eps is invariant under variable relabeling") {
    std::mt19937_64 rng(17);
    for (auto spec : {"5", "7", "3^2"}) {
        Field f = Field::from_spec(spec);
        for (std::uint32_t m : {3u, 4u}) {
            std::uint32_t M = m * (m - 1) / 2;
            for (int trial = 0; trial < 20; ++trial) {
                EpsilonMatrix e(m, 1 + rng() % ((1u << M) - 1));
                std::vector<std::uint32_t> perm(m);
                for (std::uint32_t i = 0; i < m; ++i) perm[i] = i + 1;
                std::shuffle(perm.begin(), perm.end(), rng);
                Fe r = 1 + rng() % (f.q() - 1);
                CHECK(r_eps(f, m, r, e).value ==
                      r_eps(f, m, r, relabel_eps(e, perm)).value);
            }
        }
    }
}

TEST_CASE("vanishing-case closed form") {
    Field f5 = Field::make(5, 1);
    CHECK(r_eps_vanishing_closed_form(f5, 4, 1, eps_of(4, {{1, 2}})) == -64);
    CHECK(r_eps_vanishing_closed_form(f5, 4, 2, eps_of(4, {{1, 2}, {1, 3}})) == 16);

    // Equals r_eps everywhere the precondition holds (small sweep).
    for (auto spec : {"5", "7", "3^2"}) {
        Field f = Field::from_spec(spec);
        for (std::uint32_t m : {3u, 4u}) {
            for (std::uint64_t row1 = 1; row1 < (1u << (m - 1)); ++row1) {
                EpsilonMatrix e(m, row1);
                for (Fe r = 1; r < f.q(); ++r) {
                    long long cf = r_eps_vanishing_closed_form(f, m, r, e);
                    CHECK(cf == r_eps(f, m, r, e).value);
                    if (e.row1_weight() == 1) {
                        long long bound = 1;
                        for (std::uint32_t i = 1; i < m; ++i) bound *= f.q() - 1;
                        CHECK(std::abs(cf) == bound);  // Bound I attained
                    }
                }
            }
        }
    }

    CHECK_THROWS_AS(
        r_eps_vanishing_closed_form(f5, 4, 1, eps_of(4, {{1, 2}, {2, 3}})),
        PreconditionViolatedError);
    CHECK_THROWS_AS(r_eps_vanishing_closed_form(f5, 4, 1, EpsilonMatrix(4, 0)),
                    ZeroEpsilonError);
}

TEST_CASE("s_sum examples") {
    Field f7 = Field::make(7, 1);
    for (Fe a2 = 1; a2 < 7; ++a2)
        CHECK(s_sum(f7, 3, eps_of(2, {{1, 2}}), {a2}) == 1);  // -chi(3) = +1

    Field f5 = Field::make(5, 1);
    CHECK(s_sum(f5, 1, eps_of(3, {{1, 2}, {1, 3}}), {2, 2}) == 3);

    CHECK_THROWS_AS(s_sum(f5, 1, eps_of(3, {{1, 3}}), {2, 2}),
                    PreconditionViolatedError);
    CHECK_THROWS_AS(s_sum(f5, 1, eps_of(3, {{1, 2}}), {0, 2}), UsageError);
}

TEST_CASE("t_sum examples") {
    Field f5 = Field::make(5, 1);
    // single active pair (2,3) with product c = a_2 a_3
    CHECK(t_sum(f5, 1, eps_of(3, {{2, 3}}), {1, 1}) == -2);  // c = 1
    CHECK(t_sum(f5, 1, eps_of(3, {{2, 3}}), {1, 2}) == 0);   // c = 2

    // closure-square G over F_7: products {3, 3} from eps {(2,3),(2,4)},
    // a_2=1, a_3=a_4=3: G = (3X^2+1)^2, chi = 1 off the roots of 3X^2+1.
    Field f7 = Field::make(7, 1);
    long long t = t_sum(f7, 1, eps_of(4, {{2, 3}, {2, 4}}), {1, 3, 3});
    int roots = 0;
    for (Fe b = 1; b < 7; ++b)
        if (f7.add(f7.mul(3, f7.mul(b, b)), 1) == 0) ++roots;
    CHECK(t == 6 - roots);
    CHECK(roots == 2);

    CHECK_THROWS_AS(t_sum(f5, 1, eps_of(3, {{1, 2}}), {1, 1}),
                    PreconditionViolatedError);
}

TEST_CASE("S*T identity") {
    Field f5 = Field::make(5, 1);
    STDecompositionReport rep =
        st_identity_check(f5, 4, 1, eps_of(4, {{1, 2}, {2, 3}}));
    CHECK(rep.identity_holds);
    CHECK(rep.r_via_st == BigRat(rep.r_direct));

    Field f7 = Field::make(7, 1);
    STDecompositionReport all = st_identity_check(f7, 4, 3, EpsilonMatrix(4, 0x3f));
    CHECK(all.identity_holds);
    CHECK(all.weil_violations == 0);

    CHECK_THROWS_AS(st_identity_check(f5, 4, 1, eps_of(4, {{1, 2}, {1, 3}})),
                    PreconditionViolatedError);
    CHECK_THROWS_AS(st_identity_check(f5, 4, 1, eps_of(4, {{2, 3}})),
                    PreconditionViolatedError);
}

TEST_CASE("expansion identity examples") {
    Field f5 = Field::make(5, 1);
    ExpansionIdentityReport rep = expansion_identity_check(f5, 2, 1);
    CHECK(rep.sum_r_all_eps == 12);
    CHECK(rep.product_side == 12);
    CHECK(rep.restricted_side == 8);
    CHECK(rep.strict_count == 4);
    CHECK(rep.zero_correction == 4);
    CHECK(rep.holds);

    Field f3 = Field::make(3, 1);
    CHECK(expansion_identity_check(f3, 2, 1).restricted_side == 0);

    CHECK(expansion_identity_check(f5, 3, 2).holds);
}
