#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dioph/errors.hpp"

namespace dioph {

// Element of F_q as its canonical integer code in [0, q): the base-p digit
// packing of the polynomial coefficient vector, code = sum c_i * p^i. For a
// prime field this is just the residue.
using Fe = std::uint32_t;

// Immutable arithmetic context for F_q, q = p^k an odd prime power.
// Multiplication, inversion and powering run off generator exp/log tables;
// the quadratic character is read from log parity via a squares bitmap.
// Construction is single-threaded; a built Field is safe to share across
// threads, every operation is a pure read.
class Field {
public:
    static constexpr std::uint64_t kDefaultTableCap = 1u << 20;

    // modulus, when given, is the full coefficient list c0,...,ck (monic,
    // irreducible over F_p, degree k). Omitted: k == 1 uses the X - 0
    // convention, k > 1 finds the irreducible of smallest code.
    static Field make(std::uint32_t p, std::uint32_t k,
                      std::optional<std::vector<std::uint32_t>> modulus = {},
                      std::uint64_t table_cap = kDefaultTableCap);

    // Parses "p" or "p^k" field spec strings.
    static Field from_spec(const std::string& spec,
                           std::optional<std::vector<std::uint32_t>> modulus = {},
                           std::uint64_t table_cap = kDefaultTableCap);

    std::uint32_t p() const { return p_; }
    std::uint32_t k() const { return k_; }
    std::uint32_t q() const { return q_; }
    Fe generator() const { return generator_; }
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    Fe add(Fe x, Fe y) const;
    Fe sub(Fe x, Fe y) const;
    Fe neg(Fe x) const;
    Fe mul(Fe x, Fe y) const {
        if (x == 0 || y == 0) return 0;
        return exp_[log_[x] + log_[y]];
    }
    Fe inv(Fe x) const {
        if (x == 0) throw DivisionByZeroError("inv(0) in F_" + std::to_string(q_));
        return exp_[q_ - 1 - log_[x]];
    }
    Fe pow(Fe x, std::uint64_t e) const;

    // Quadratic character chi: 0 at zero, +1 on nonzero squares, -1 otherwise.
    int chi(Fe x) const {
        if (x == 0) return 0;
        return square_bit(x) ? 1 : -1;
    }

    bool is_nonzero_square(Fe x) const { return x != 0 && square_bit(x); }

    // Discrete log to base generator(); x must be nonzero.
    std::uint32_t log(Fe x) const {
        if (x == 0) throw DivisionByZeroError("log(0)");
        return log_[x];
    }
    Fe exp(std::uint32_t e) const { return exp_[e % (q_ - 1)]; }

    // Smallest nonzero non-square code; the canonical representative of the
    // non-square class of F_q^* (1 represents the square class).
    Fe smallest_nonsquare() const;

    // chi by the Euler criterion x^((q-1)/2), computed with the table-free
    // polynomial arithmetic. Test oracle for chi().
    int chi_euler(Fe x) const;

    // Table-free polynomial multiplication mod the modulus; oracle for mul().
    Fe mul_poly(Fe x, Fe y) const;

private:
    Field() = default;

    bool square_bit(Fe x) const {
        return (squares_[x >> 6] >> (x & 63)) & 1;
    }

    std::uint32_t p_ = 0, k_ = 0, q_ = 0;
    Fe generator_ = 0;
    std::vector<std::uint32_t> modulus_;   // c0..ck, monic
    std::vector<Fe> exp_;                  // size 2(q-1), doubled to skip a mod
    std::vector<std::uint32_t> log_;       // size q, log_[0] unused
    std::vector<std::uint64_t> squares_;   // bitmap over codes
};

// Parses "c0,c1,...,ck" modulus coefficient lists.
std::vector<std::uint32_t> parse_coeff_list(const std::string& s);

}  // namespace dioph
