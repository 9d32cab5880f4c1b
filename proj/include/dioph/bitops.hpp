#pragma once

#include <cstddef>
#include <cstdint>

// Word-level kernels for the bitset candidate sets used by the counting
// DFS. A scalar reference implementation is always available; on x86-64
// an AVX2 variant is selected at runtime when the CPU supports it, and
// on AArch64 a NEON variant is used. All variants are bit-exact.

namespace dioph::bitops {

enum class Isa { scalar, avx2, neon };

// The instruction set the dispatched entry points resolve to.
Isa active_isa();
const char* isa_name(Isa isa);

// dst[i] = a[i] & b[i] for i in [0, n).
void and_into(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
              std::size_t n);

// popcount of (a & b) over n words.
std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b,
                           std::size_t n);

// Scalar reference kernels, used directly by the equivalence tests.
void and_into_scalar(std::uint64_t* dst, const std::uint64_t* a,
                     const std::uint64_t* b, std::size_t n);
std::uint64_t and_popcount_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t n);

}  // namespace dioph::bitops
