#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dioph/count.hpp"
#include "dioph/field.hpp"
#include "dioph/poly.hpp"

namespace dioph {

// Exponent vector eps in {0,1}^(m(m-1)/2), indexed by pairs (i,j) with
// 1 <= i < j <= m in lexicographic row-major order:
// (1,2),(1,3),...,(1,m),(2,3),...,(m-1,m).
// Bit t of the packed integer is the entry at flat index t, so the hex I/O
// is the little-endian-bit integer value of the vector.
class EpsilonMatrix {
public:
    explicit EpsilonMatrix(std::uint32_t m, std::uint64_t bits = 0);

    static std::uint32_t flat_index(std::uint32_t i, std::uint32_t j, std::uint32_t m);

    std::uint32_t m() const { return m_; }
    std::uint32_t size() const { return m_ * (m_ - 1) / 2; }
    std::uint64_t packed() const { return bits_; }

    bool bit(std::uint32_t i, std::uint32_t j) const {  // 1-based, i < j
        return (bits_ >> flat_index(i, j, m_)) & 1;
    }
    void set(std::uint32_t i, std::uint32_t j, bool v);

    bool nonzero() const { return bits_ != 0; }
    std::uint32_t weight() const;
    // Number of active pairs (1,j).
    std::uint32_t row1_weight() const;
    // Number of active pairs (i,j) with 2 <= i < j.
    std::uint32_t lower_weight() const;

    std::string to_hex() const;
    static EpsilonMatrix from_hex(std::uint32_t m, const std::string& hex);

    bool operator==(const EpsilonMatrix& o) const {
        return m_ == o.m_ && bits_ == o.bits_;
    }

private:
    std::uint32_t m_;
    std::uint64_t bits_;
};

struct REpsResult {
    long long value = 0;
    bool trivial_zero_eps = false;  // eps = 0, value is (q-1)^m
};

enum class REpsAlgo { naive, dfs_weighted };

// R(eps) = sum over (F_q^*)^m of prod chi(a_i a_j + r)^eps_{i,j}, exact.
REpsResult r_eps(const Field& f, std::uint32_t m, Fe r, const EpsilonMatrix& eps,
                 REpsAlgo algo = REpsAlgo::dfs_weighted,
                 std::uint64_t budget = 1000000000ull);

// Variable renumbering sending some active pair to (1,2); perm[i-1] is the
// new index of old variable i. R(eps) is invariant under the relabeling.
std::pair<std::vector<std::uint32_t>, EpsilonMatrix> canonicalize_eps(
    const EpsilonMatrix& eps);

// Applies a variable permutation to eps (perm as produced above).
EpsilonMatrix relabel_eps(const EpsilonMatrix& eps,
                          const std::vector<std::uint32_t>& perm);

// Closed form for eps supported on row 1: (-chi(r))^w * (q-1)^(m-w) with
// w = row1_weight >= 1. Equals r_eps exactly.
long long r_eps_vanishing_closed_form(const Field& f, std::uint32_t m, Fe r,
                                      const EpsilonMatrix& eps);

// S(a_2..a_m) = sum over a_1 in F_q^* of chi(F(a_1)),
// F = prod_{j: eps_{1,j}=1} (a_j X + r). Requires eps_{1,2} = 1.
long long s_sum(const Field& f, Fe r, const EpsilonMatrix& eps,
                const std::vector<Fe>& a_rest);

// T(a_2..a_m) = sum over b in F_q^* of chi(G(b)),
// G = prod_{2<=i<j: eps_{i,j}=1} (a_i a_j X^2 + r). Requires a nonzero
// lower part.
long long t_sum(const Field& f, Fe r, const EpsilonMatrix& eps,
                const std::vector<Fe>& a_rest);

// Kernel builders shared with the Weil machinery; a_rest holds a_2..a_m.
FactoredKernel make_f_kernel(Fe r, const EpsilonMatrix& eps,
                             const std::vector<Fe>& a_rest);
FactoredKernel make_g_kernel(const Field& f, Fe r, const EpsilonMatrix& eps,
                             const std::vector<Fe>& a_rest);

struct STDecompositionReport {
    long long r_direct = 0;          // R(eps) by direct summation
    BigRat r_via_st;                 // (q-1)^{-1} sum S*T, exact rational
    std::uint64_t square_kernel_tuples = 0;  // tuples with F or G a closure-square
    long long weil_max_abs = 0;      // max |S|, |T| over non-square kernels
    std::uint64_t weil_violations = 0;
    bool identity_holds = false;
};

// Verifies R(eps) = (q-1)^{-1} sum_{a_2..a_m in (F_q^*)^{m-1}} S*T exactly
// and audits every kernel against the Weil bound. Requires eps_{1,2} = 1
// and nonzero lower part.
STDecompositionReport st_identity_check(const Field& f, std::uint32_t m, Fe r,
                                        const EpsilonMatrix& eps,
                                        std::uint64_t budget = 1000000000ull);

struct ExpansionIdentityReport {
    long long sum_r_all_eps = 0;   // sum of R(eps) over all eps, incl. 0
    long long product_side = 0;    // sum over (F_q^*)^m of prod (1 + chi)
    long long restricted_side = 0; // same, restricted to no zero shifted product
    long long zero_correction = 0; // product_side - restricted_side
    std::uint64_t strict_count = 0;  // restricted_side / 2^M
    bool holds = false;
};

// Verifies sum_eps R(eps) = sum prod (1 + chi(a_i a_j + r)) exactly, and
// that the restricted product side is 2^M times the default-variant count.
ExpansionIdentityReport expansion_identity_check(const Field& f, std::uint32_t m,
                                                 Fe r,
                                                 std::uint64_t budget = 1000000000ull);

}  // namespace dioph
