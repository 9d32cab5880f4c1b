#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "dioph/bitops.hpp"

using namespace dioph::bitops;

TEST_CASE("isa name is reported") {
    Isa isa = active_isa();
    CHECK(isa_name(isa) != nullptr);
    CHECK(std::string(isa_name(Isa::scalar)) == "scalar");
}

TEST_CASE("scalar kernels on small fixed inputs") {
    std::uint64_t a[3] = {0xF0F0F0F0F0F0F0F0ull, ~0ull, 0x1ull};
    std::uint64_t b[3] = {0x0FF00FF00FF00FF0ull, 0x8000000000000001ull, 0x3ull};
    std::uint64_t dst[3] = {};
    and_into_scalar(dst, a, b, 3);
    CHECK(dst[0] == (a[0] & b[0]));
    CHECK(dst[1] == 0x8000000000000001ull);
    CHECK(dst[2] == 0x1ull);
    CHECK(and_popcount_scalar(a, b, 3) == 16 + 2 + 1);
    CHECK(and_popcount_scalar(a, b, 0) == 0);
}

TEST_CASE("dispatched kernels match the scalar reference") {
    std::mt19937_64 rng(0x5eedULL);
    // odd and sub-vector-width lengths included deliberately
    for (std::size_t n : {std::size_t(0), std::size_t(1), std::size_t(2),
                          std::size_t(3), std::size_t(4), std::size_t(5),
                          std::size_t(7), std::size_t(8), std::size_t(13),
                          std::size_t(64), std::size_t(257)}) {
        std::vector<std::uint64_t> a(n), b(n), want(n, ~0ull), got(n, ~0ull);
        for (int rep = 0; rep < 20; ++rep) {
            for (auto& w : a) w = rng();
            for (auto& w : b) w = rng();
            and_into_scalar(want.data(), a.data(), b.data(), n);
            and_into(got.data(), a.data(), b.data(), n);
            CHECK(want == got);
            CHECK(and_popcount(a.data(), b.data(), n) ==
                  and_popcount_scalar(a.data(), b.data(), n));
        }
    }
}

TEST_CASE("and_into allows dst aliasing an input") {
    std::mt19937_64 rng(42);
    std::vector<std::uint64_t> a(37), b(37);
    for (auto& w : a) w = rng();
    for (auto& w : b) w = rng();
    std::vector<std::uint64_t> want(37);
    and_into_scalar(want.data(), a.data(), b.data(), 37);
    and_into(a.data(), a.data(), b.data(), 37);  // in-place, as the DFS does
    CHECK(a == want);
}
