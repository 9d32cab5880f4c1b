#include "dioph/bitops.hpp"

#include <bit>

namespace dioph::bitops {

void and_into_scalar(std::uint64_t* dst, const std::uint64_t* a,
                     const std::uint64_t* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] & b[i];
}

std::uint64_t and_popcount_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t n) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc += std::popcount(a[i] & b[i]);
    return acc;
}

#if defined(__x86_64__) || defined(_M_X64)
namespace detail {
// Defined in bitops_avx2.cpp, compiled with -mavx2.
void and_into_avx2(std::uint64_t*, const std::uint64_t*, const std::uint64_t*,
                   std::size_t);
std::uint64_t and_popcount_avx2(const std::uint64_t*, const std::uint64_t*,
                                std::size_t);
}  // namespace detail

static bool cpu_has_avx2() { return __builtin_cpu_supports("avx2"); }

Isa active_isa() {
    static const Isa isa = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
    return isa;
}

void and_into(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
              std::size_t n) {
    if (active_isa() == Isa::avx2) {
        detail::and_into_avx2(dst, a, b, n);
    } else {
        and_into_scalar(dst, a, b, n);
    }
}

std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b,
                           std::size_t n) {
    if (active_isa() == Isa::avx2) return detail::and_popcount_avx2(a, b, n);
    return and_popcount_scalar(a, b, n);
}

#elif defined(__aarch64__)
namespace detail {
void and_into_neon(std::uint64_t*, const std::uint64_t*, const std::uint64_t*,
                   std::size_t);
std::uint64_t and_popcount_neon(const std::uint64_t*, const std::uint64_t*,
                                std::size_t);
}  // namespace detail

Isa active_isa() { return Isa::neon; }

void and_into(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
              std::size_t n) {
    detail::and_into_neon(dst, a, b, n);
}

std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b,
                           std::size_t n) {
    return detail::and_popcount_neon(a, b, n);
}

#else
Isa active_isa() { return Isa::scalar; }

void and_into(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
              std::size_t n) {
    and_into_scalar(dst, a, b, n);
}

std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b,
                           std::size_t n) {
    return and_popcount_scalar(a, b, n);
}
#endif

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
        default: return "scalar";
    }
}

}  // namespace dioph::bitops
