#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dioph/field.hpp"

namespace dioph {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

enum class EntriesDomain { nonzero, all };
enum class SquareRule { qr_only, qr_or_zero };
enum class Multiplicity { ordered_with_repeats, ordered_distinct, unordered_distinct };

const char* to_string(EntriesDomain d);
const char* to_string(SquareRule s);
const char* to_string(Multiplicity m);

// Counting-variant flags. Defaults are the proof's summation set: entries
// drawn from F_q^*, a_i a_j + r a nonzero square, ordered tuples with
// repeats allowed.
struct CountSpec {
    std::uint32_t m = 2;
    Fe r = 1;
    EntriesDomain entries_domain = EntriesDomain::nonzero;
    SquareRule square_rule = SquareRule::qr_only;
    Multiplicity multiplicity = Multiplicity::ordered_with_repeats;

    void validate() const;
    bool is_default_variant() const {
        return entries_domain == EntriesDomain::nonzero &&
               square_rule == SquareRule::qr_only &&
               multiplicity == Multiplicity::ordered_with_repeats;
    }
    // "domain:squarerule:multiplicity"
    std::string variant_token() const;
};

// Bitset adjacency over the entry domain: vertex u has bit v set iff
// code(u)*code(v) + r passes the square rule. Symmetric, with the diagonal
// loop bit (u,u) present iff u^2 + r passes. Immutable after build.
struct PairGraph {
    std::uint32_t n = 0;      // vertex count (q-1 or q)
    std::uint32_t words = 0;  // 64-bit words per row
    Fe code_base = 1;         // code = vertex + code_base
    std::vector<std::uint64_t> bits;

    const std::uint64_t* row(std::uint32_t v) const { return bits.data() + v * words; }
    bool adjacent(std::uint32_t u, std::uint32_t v) const {
        return (row(u)[v >> 6] >> (v & 63)) & 1;
    }
    Fe code_of(std::uint32_t v) const { return v + code_base; }
};

PairGraph build_pair_graph(const Field& f, const CountSpec& spec);

struct CountReport {
    std::uint32_t q = 0, p = 0, k = 0;
    CountSpec spec;
    std::uint64_t count = 0;
    BigRat main_term;     // q^m / 2^(m(m-1)/2)
    BigRat residual;      // count - main_term, exact
    double residual_norm_1 = 0.0;     // |residual| / q^(m-1)
    double residual_norm_half = 0.0;  // |residual| / q^(m-1/2)
    std::string algo;
    std::int64_t millis = 0;
};

// Fills the derived fields (main term, residual, norms) from q/spec/count.
void finalize_report(CountReport& rep);

// Reference oracle: full enumeration with short-circuit on the first
// failing pair. Independent of the pair-graph machinery.
CountReport count_brute(const Field& f, const CountSpec& spec,
                        std::uint64_t budget = 1000000000ull);

// Production path: DFS over sorted prefixes with incrementally intersected
// candidate bitsets; repeats ride on the diagonal loop bits and ordered
// counts are recovered with multinomial multiplicities.
CountReport count_dfs(const Field& f, const CountSpec& spec, unsigned threads = 1);

// Character-sum route for the default variant: over tuples in
// (F_q^*)^m with all a_i a_j + r != 0, sum of prod (1 + chi(a_i a_j + r))
// equals 2^(m(m-1)/2) * count.
CountReport count_expansion(const Field& f, const CountSpec& spec,
                            std::uint64_t budget = 1000000000ull);

std::string rat_to_string(const BigRat& r);
BigRat rat_from_string(const std::string& s);

}  // namespace dioph
