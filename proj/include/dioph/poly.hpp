#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dioph/field.hpp"

namespace dioph {

// Dense polynomial over F_q, coefficients lowest degree first. Normalized:
// no trailing zero coefficient unless the zero polynomial (empty vector).
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Fe> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Poly constant(Fe c) { return Poly(std::vector<Fe>{c}); }
    static Poly zero() { return Poly(); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    Fe coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
    Fe leading() const { return c_.empty() ? 0 : c_.back(); }
    const std::vector<Fe>& coeffs() const { return c_; }

    bool operator==(const Poly& o) const { return c_ == o.c_; }

    // Comma-separated coefficient codes, constant term first.
    std::string to_string() const;
    static Poly parse(const std::string& s);

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Fe> c_;
};

Poly poly_add(const Field& f, const Poly& a, const Poly& b);
Poly poly_sub(const Field& f, const Poly& a, const Poly& b);
Poly poly_mul(const Field& f, const Poly& a, const Poly& b);
Poly poly_scale(const Field& f, const Poly& a, Fe c);
// Remainder of a by b (b nonzero).
Poly poly_rem(const Field& f, const Poly& a, const Poly& b);
// Quotient of a by b when b divides a exactly; throws otherwise.
Poly poly_div_exact(const Field& f, const Poly& a, const Poly& b);
bool poly_divides(const Field& f, const Poly& d, const Poly& a);
// Monic gcd; inputs not both zero.
Poly poly_gcd(const Field& f, Poly a, Poly b);
Poly poly_derivative(const Field& f, const Poly& a);
Fe poly_eval(const Field& f, const Poly& a, Fe x);
Poly poly_monic(const Field& f, const Poly& a);

// Product of the distinct monic irreducible factors of f. Handles the
// characteristic-p degeneracy: when f' = 0, f = h(X^p) and the p-th root is
// taken coefficient-wise via c -> c^(p^(k-1)) before recursing.
Poly square_free_part(const Field& f, const Poly& a);

// True iff every root of f in the algebraic closure has even multiplicity,
// i.e. f = c * g^2 over the closure. Constants qualify.
bool is_square_in_closure(const Field& f, const Poly& a);

enum class KernelKind { linear_family, quadratic_family };

// Structured form of the proof kernels: a product of (c X + r)^eps
// (linear_family) or (c X^2 + r)^eps (quadratic_family) with eps in {0,1}
// and a common nonzero shift r.
struct FactoredKernel {
    KernelKind kind = KernelKind::linear_family;
    // (coefficient c, active flag). Inactive factors contribute 1.
    std::vector<std::pair<Fe, bool>> factors;
    Fe r = 1;
};

Poly expand_kernel(const Field& f, const FactoredKernel& kern);

// Closure-square test in O(#factors) using multiset parity of the active
// coefficients: factors with equal c share their root set, distinct c have
// disjoint root sets (r != 0). Must agree with is_square_in_closure on the
// expanded polynomial.
bool kernel_is_square(const Field& f, const FactoredKernel& kern);

enum class SumDomain { all, nonzero };

// Exact integer sum of chi(f(x)) over the domain.
long long char_sum_poly(const Field& f, const Poly& a, SumDomain domain);

struct WeilReport {
    long long sum = 0;
    double degree_bound = 0.0;  // (deg f - 1) * sqrt(q)
    bool square_kernel = false;
    bool holds = false;  // vacuously true when square_kernel
};

// Checks |sum chi(f)| <= (deg f - 1) sqrt(q) for f not a closure-square.
WeilReport weil_check(const Field& f, const Poly& a);

struct WeilSuiteResult {
    std::uint32_t samples = 0;
    std::uint32_t squares_excluded = 0;  // closure-squares, Weil hypothesis off
    std::uint32_t checked = 0;
    std::uint32_t violations = 0;
    double max_ratio = 0.0;  // max |sum| / bound over checked kernels
};

// Draws seeded-random factored kernels (mixed linear/quadratic families,
// 2..6 factors), expands them and audits the Weil bound on each non-square.
WeilSuiteResult weil_random_suite(const Field& f, std::uint32_t samples,
                                  std::uint64_t seed);

}  // namespace dioph
