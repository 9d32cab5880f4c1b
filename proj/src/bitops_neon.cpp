// NEON variants of the bitset word kernels (AArch64 only).

#if defined(__aarch64__)

#include <arm_neon.h>

#include <bit>
#include <cstddef>
#include <cstdint>

namespace dioph::bitops::detail {

void and_into_neon(std::uint64_t* dst, const std::uint64_t* a,
                   const std::uint64_t* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        uint64x2_t va = vld1q_u64(a + i);
        uint64x2_t vb = vld1q_u64(b + i);
        vst1q_u64(dst + i, vandq_u64(va, vb));
    }
    for (; i < n; ++i) dst[i] = a[i] & b[i];
}

std::uint64_t and_popcount_neon(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t n) {
    std::uint64_t acc = 0;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        uint64x2_t v = vandq_u64(vld1q_u64(a + i), vld1q_u64(b + i));
        uint8x16_t bytes = vcntq_u8(vreinterpretq_u8_u64(v));
        acc += vaddvq_u8(bytes);
    }
    for (; i < n; ++i) acc += std::popcount(a[i] & b[i]);
    return acc;
}

}  // namespace dioph::bitops::detail

#endif
