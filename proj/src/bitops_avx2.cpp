// AVX2 variants of the bitset word kernels. This translation unit is the
// only one compiled with -mavx2; callers reach it through the runtime
// dispatch in bitops.cpp.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <bit>
#include <cstddef>
#include <cstdint>

namespace dioph::bitops::detail {

void and_into_avx2(std::uint64_t* dst, const std::uint64_t* a,
                   const std::uint64_t* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i),
                            _mm256_and_si256(va, vb));
    }
    for (; i < n; ++i) dst[i] = a[i] & b[i];
}

std::uint64_t and_popcount_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t n) {
    // Hardware popcnt on the 64-bit lanes of the AND; AVX2 has no vector
    // popcount, so lanes are extracted after the vector AND.
    std::uint64_t acc = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i v = _mm256_and_si256(va, vb);
        acc += static_cast<std::uint64_t>(
            _mm_popcnt_u64(static_cast<std::uint64_t>(_mm256_extract_epi64(v, 0))));
        acc += static_cast<std::uint64_t>(
            _mm_popcnt_u64(static_cast<std::uint64_t>(_mm256_extract_epi64(v, 1))));
        acc += static_cast<std::uint64_t>(
            _mm_popcnt_u64(static_cast<std::uint64_t>(_mm256_extract_epi64(v, 2))));
        acc += static_cast<std::uint64_t>(
            _mm_popcnt_u64(static_cast<std::uint64_t>(_mm256_extract_epi64(v, 3))));
    }
    for (; i < n; ++i) acc += std::popcount(a[i] & b[i]);
    return acc;
}

}  // namespace dioph::bitops::detail

#endif
