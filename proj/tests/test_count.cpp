#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dioph/count.hpp"
#include "dioph/scan.hpp"

using namespace dioph;

namespace {

CountSpec spec_of(std::uint32_t m, Fe r,
                  EntriesDomain d = EntriesDomain::nonzero,
                  SquareRule s = SquareRule::qr_only,
                  Multiplicity mult = Multiplicity::ordered_with_repeats) {
    CountSpec spec;
    spec.m = m;
    spec.r = r;
    spec.entries_domain = d;
    spec.square_rule = s;
    spec.multiplicity = mult;
    return spec;
}

const EntriesDomain kDomains[] = {EntriesDomain::nonzero, EntriesDomain::all};
const SquareRule kRules[] = {SquareRule::qr_only, SquareRule::qr_or_zero};
const Multiplicity kMults[] = {Multiplicity::ordered_with_repeats,
                               Multiplicity::ordered_distinct,
                               Multiplicity::unordered_distinct};

}  // namespace

TEST_CASE("pair graph over F_5, r = 1") {
    Field f = Field::make(5, 1);
    PairGraph g = build_pair_graph(f, spec_of(2, 1));
    CHECK(g.n == 4);
    // edges as unordered non-loop pairs: (1,3) and (2,4); codes map to
    // vertices code-1.
    auto adj = [&](Fe a, Fe b) { return g.adjacent(a - 1, b - 1); };
    CHECK(adj(1, 3));
    CHECK(adj(3, 1));
    CHECK(adj(2, 4));
    CHECK_FALSE(adj(1, 4));
    CHECK_FALSE(adj(2, 2));
    CHECK_FALSE(adj(1, 1));

    PairGraph gz = build_pair_graph(
        f, spec_of(2, 1, EntriesDomain::nonzero, SquareRule::qr_or_zero));
    auto adjz = [&](Fe a, Fe b) { return gz.adjacent(a - 1, b - 1); };
    CHECK(adjz(1, 3));
    CHECK(adjz(2, 4));
    CHECK(adjz(1, 4));
    CHECK(adjz(2, 2));  // loops
    CHECK(adjz(3, 3));
    CHECK_FALSE(adjz(4, 4));
}

TEST_CASE("pair graph over F_3, r = 1 is empty") {
    Field f = Field::make(3, 1);
    PairGraph g = build_pair_graph(f, spec_of(2, 1));
    for (std::uint32_t u = 0; u < g.n; ++u)
        for (std::uint32_t v = 0; v < g.n; ++v) CHECK_FALSE(g.adjacent(u, v));
}

TEST_CASE("brute-force examples") {
    Field f5 = Field::make(5, 1);
    CHECK(count_brute(f5, spec_of(2, 1)).count == 4);
    CHECK(count_brute(f5, spec_of(2, 1, EntriesDomain::nonzero,
                                  SquareRule::qr_or_zero))
              .count == 8);
    Field f3 = Field::make(3, 1);
    CHECK(count_brute(f3, spec_of(2, 1)).count == 0);
}

TEST_CASE("report main term and residual are exact") {
    Field f5 = Field::make(5, 1);
    CountReport rep = count_brute(f5, spec_of(4, 1));
    CHECK(rat_to_string(rep.main_term) == "625/64");
    CHECK(rep.residual == BigRat(rep.count) - BigRat(625, 64));
    CHECK(rep.residual_norm_1 ==
          doctest::Approx(std::abs(rep.residual.convert_to<double>()) / 125.0));
}

TEST_CASE("dfs equals brute across variants") {
    for (auto spec_str : {"5", "7", "3^2"}) {
        Field f = Field::from_spec(spec_str);
        for (std::uint32_t m : {2u, 3u})
            for (Fe r = 1; r < f.q(); ++r)
                for (auto d : kDomains)
                    for (auto s : kRules)
                        for (auto mult : kMults) {
                            auto spec = spec_of(m, r, d, s, mult);
                            CHECK(count_dfs(f, spec).count ==
                                  count_brute(f, spec).count);
                        }
    }
}

TEST_CASE("expansion route") {
    Field f5 = Field::make(5, 1);
    CHECK(count_expansion(f5, spec_of(2, 1)).count == 4);
    Field f3 = Field::make(3, 1);
    CHECK(count_expansion(f3, spec_of(2, 1)).count == 0);
    Field f7 = Field::make(7, 1);
    CHECK(count_expansion(f7, spec_of(3, 1)).count ==
          count_brute(f7, spec_of(3, 1)).count);
    CHECK_THROWS_AS(
        count_expansion(f5, spec_of(2, 1, EntriesDomain::all)),
        UnsupportedVariantError);
}

TEST_CASE("dfs handles repeats via loop bits: q=5 m=4 equals brute") {
    Field f = Field::make(5, 1);
    auto spec = spec_of(4, 1);
    CHECK(count_dfs(f, spec).count == count_brute(f, spec).count);
}

TEST_CASE("pigeonhole: unordered_distinct with m > q-1 is zero") {
    Field f = Field::make(5, 1);
    auto spec = spec_of(5, 1, EntriesDomain::nonzero, SquareRule::qr_or_zero,
                        Multiplicity::unordered_distinct);
    CHECK(count_dfs(f, spec).count == 0);
}

TEST_CASE("multiplicity relation: ordered_distinct = m! * unordered_distinct") {
    Field f = Field::make(13, 1);
    for (std::uint32_t m : {2u, 3u, 4u})
        for (Fe r : {Fe(1), Fe(2)}) {
            auto od = spec_of(m, r, EntriesDomain::nonzero, SquareRule::qr_only,
                              Multiplicity::ordered_distinct);
            auto ud = spec_of(m, r, EntriesDomain::nonzero, SquareRule::qr_only,
                              Multiplicity::unordered_distinct);
            std::uint64_t fact = 1;
            for (std::uint32_t i = 2; i <= m; ++i) fact *= i;
            CHECK(count_dfs(f, od).count == fact * count_dfs(f, ud).count);
        }
}

TEST_CASE("square-class invariance over F_5, m = 2") {
    Field f = Field::make(5, 1);
    std::vector<std::uint64_t> counts;
    for (Fe r = 1; r < 5; ++r) counts.push_back(count_dfs(f, spec_of(2, r)).count);
    CHECK(counts == std::vector<std::uint64_t>{4, 8, 8, 4});
}

TEST_CASE("budget and validation errors") {
    Field f = Field::make(23, 1);
    CHECK_THROWS_AS(count_brute(f, spec_of(8, 1), 1000), BudgetExceededError);
    CountSpec bad = spec_of(2, 0);
    CHECK_THROWS_AS(count_brute(f, bad), UsageError);
    CHECK_THROWS_AS(count_dfs(f, spec_of(1, 1)), UsageError);
}

TEST_CASE("thread count does not change the result") {
    Field f = Field::make(5, 2);
    auto spec = spec_of(3, 2);
    std::uint64_t base = count_dfs(f, spec, 1).count;
    CHECK(count_dfs(f, spec, 3).count == base);
    CHECK(count_dfs(f, spec, 8).count == base);
}

TEST_CASE("rational string round-trip") {
    BigRat v(BigInt(-117), BigInt(64));
    CHECK(rat_from_string(rat_to_string(v)) == v);
    CHECK(rat_to_string(BigRat(0)) == "0/1");
}
