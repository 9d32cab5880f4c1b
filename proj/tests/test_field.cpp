#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "dioph/field.hpp"
#include "dioph/scan.hpp"

using namespace dioph;

namespace {

// Euler-criterion oracle for prime fields: x^((p-1)/2) mod p.
int legendre_oracle(std::uint32_t x, std::uint32_t p) {
    if (x % p == 0) return 0;
    std::uint64_t acc = 1, b = x % p, e = (p - 1) / 2;
    while (e) {
        if (e & 1) acc = acc * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return acc == 1 ? 1 : -1;
}

std::vector<Field> sample_fields() {
    std::vector<Field> out;
    for (auto spec : {"7", "11", "3^2", "5^2", "3^3", "7^2", "3^4", "11^2"})
        out.push_back(Field::from_spec(spec));
    return out;
}

}  // namespace

TEST_CASE("F_7 squares match the Euler criterion") {
    Field f = Field::make(7, 1);
    std::set<Fe> squares;
    for (Fe x = 1; x < 7; ++x)
        if (f.is_nonzero_square(x)) squares.insert(x);
    CHECK(squares == std::set<Fe>{1, 2, 4});
    for (Fe x = 0; x < 7; ++x) CHECK(f.chi(x) == legendre_oracle(x, 7));
    CHECK(f.chi(3) == -1);
}

TEST_CASE("F_9 with modulus X^2+1") {
    Field f = Field::make(3, 2, std::vector<std::uint32_t>{1, 0, 1});
    CHECK(f.q() == 9);
    // code 3 is x; x * x = -1 = 2.
    CHECK(f.mul(3, 3) == 2);
    CHECK(f.chi(2) == 1);  // 2 = x^2 is a square
    // x + 1 (code 4) generates the order-8 group: direct power ladder.
    Fe acc = 1;
    std::set<Fe> seen;
    for (int i = 0; i < 8; ++i) {
        acc = f.mul(acc, 4);
        seen.insert(acc);
    }
    CHECK(acc == 1);
    CHECK(seen.size() == 8);
    CHECK(f.pow(4, 8) == 1);
}

TEST_CASE("construction rejects bad parameters") {
    CHECK_THROWS_AS(Field::make(4, 1), NotPrimeError);
    CHECK_THROWS_AS(Field::make(2, 3), EvenCharacteristicError);
    CHECK_THROWS_AS(Field::make(3, 2, std::vector<std::uint32_t>{0, 0, 1}),
                    ReducibleModulusError);
    CHECK_THROWS_AS(Field::make(3, 20), FieldTooLargeError);
    CHECK_THROWS_AS(Field::make(11, 1, {}, 10), FieldTooLargeError);
}

TEST_CASE("field spec strings") {
    CHECK(Field::from_spec("3^2").q() == 9);
    CHECK(Field::from_spec("13").q() == 13);
    CHECK_THROWS_AS(Field::from_spec("abc"), UsageError);
    CHECK_THROWS_AS(Field::from_spec("3^x"), UsageError);
}

TEST_CASE("basic arithmetic identities") {
    Field f = Field::make(7, 1);
    CHECK(f.inv(3) == 5);  // 3 * 5 = 15 = 1 mod 7
    CHECK_THROWS_AS(f.inv(0), DivisionByZeroError);
    for (const Field& g : sample_fields()) {
        for (Fe x = 0; x < g.q(); ++x) {
            CHECK(g.add(x, g.neg(x)) == 0);
            CHECK(g.sub(x, x) == 0);
            if (x != 0) CHECK(g.mul(x, g.inv(x)) == 1);
        }
    }
}

TEST_CASE("squares bitmap has (q-1)/2 elements and chi is multiplicative") {
    for (const Field& f : sample_fields()) {
        std::uint32_t squares = 0;
        long long chi_sum = 0;
        for (Fe x = 0; x < f.q(); ++x) {
            squares += f.is_nonzero_square(x);
            chi_sum += f.chi(x);
        }
        CHECK(squares == (f.q() - 1) / 2);
        CHECK(chi_sum == 0);  // orthogonality
        std::mt19937_64 rng(7);
        for (int i = 0; i < 500; ++i) {
            Fe x = 1 + rng() % (f.q() - 1), y = 1 + rng() % (f.q() - 1);
            CHECK(f.chi(f.mul(x, y)) == f.chi(x) * f.chi(y));
        }
    }
}

TEST_CASE("shifted-sum identity: sum chi(a+r) over F_q^* equals -chi(r)") {
    for (const auto& pp : enumerate_odd_prime_powers(3, 121)) {
        Field f = Field::make(pp.p, pp.k);
        for (Fe r = 1; r < f.q(); ++r) {
            long long s = 0;
            for (Fe a = 1; a < f.q(); ++a) s += f.chi(f.add(a, r));
            CHECK(s == -f.chi(r));
        }
    }
}

TEST_CASE("table mul agrees with polynomial mul, chi with Euler criterion") {
    for (const Field& f : sample_fields()) {
        std::mt19937_64 rng(42);
        for (int i = 0; i < 1000; ++i) {
            Fe x = rng() % f.q(), y = rng() % f.q();
            CHECK(f.mul(x, y) == f.mul_poly(x, y));
        }
        for (Fe x = 0; x < f.q(); ++x) CHECK(f.chi(x) == f.chi_euler(x));
    }
}

TEST_CASE("exp/log round-trip and generator determinism") {
    for (const Field& f : sample_fields()) {
        for (Fe x = 1; x < f.q(); ++x) CHECK(f.exp(f.log(x)) == x);
        // Reconstruction yields the same generator and tables.
        Field g = Field::make(f.p(), f.k());
        CHECK(g.generator() == f.generator());
        CHECK(g.modulus() == f.modulus());
    }
}

TEST_CASE("coefficient list parsing") {
    CHECK(parse_coeff_list("1,0,1") == std::vector<std::uint32_t>{1, 0, 1});
    CHECK_THROWS_AS(parse_coeff_list("1,,2"), UsageError);
    CHECK_THROWS_AS(parse_coeff_list("a"), UsageError);
}
