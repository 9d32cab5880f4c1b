#include "dioph/poly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace dioph {

std::string Poly::to_string() const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(c_[i]);
    }
    return out;
}

Poly Poly::parse(const std::string& s) {
    return Poly(parse_coeff_list(s));
}

Poly poly_add(const Field& f, const Poly& a, const Poly& b) {
    std::vector<Fe> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.add(a.coeff(i), b.coeff(i));
    return Poly(std::move(c));
}

Poly poly_sub(const Field& f, const Poly& a, const Poly& b) {
    std::vector<Fe> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.sub(a.coeff(i), b.coeff(i));
    return Poly(std::move(c));
}

Poly poly_mul(const Field& f, const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly::zero();
    std::vector<Fe> c(a.coeffs().size() + b.coeffs().size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        if (a.coeff(i) == 0) continue;
        for (std::size_t j = 0; j < b.coeffs().size(); ++j)
            c[i + j] = f.add(c[i + j], f.mul(a.coeff(i), b.coeff(j)));
    }
    return Poly(std::move(c));
}

Poly poly_scale(const Field& f, const Poly& a, Fe c) {
    std::vector<Fe> out(a.coeffs().size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.mul(a.coeff(i), c);
    return Poly(std::move(out));
}

Poly poly_rem(const Field& f, const Poly& a, const Poly& b) {
    if (b.is_zero()) throw DivisionByZeroError("polynomial division by zero");
    std::vector<Fe> r = a.coeffs();
    const int db = b.degree();
    const Fe inv_lead = f.inv(b.leading());
    for (int da = static_cast<int>(r.size()) - 1; da >= db; --da) {
        if (r[da] == 0) continue;
        Fe c = f.mul(r[da], inv_lead);
        for (int i = 0; i <= db; ++i)
            r[da - db + i] = f.sub(r[da - db + i], f.mul(c, b.coeff(i)));
    }
    return Poly(std::move(r));
}

Poly poly_div_exact(const Field& f, const Poly& a, const Poly& b) {
    if (b.is_zero()) throw DivisionByZeroError("polynomial division by zero");
    if (a.is_zero()) return Poly::zero();
    std::vector<Fe> r = a.coeffs();
    std::vector<Fe> quo(r.size(), 0);
    const int db = b.degree();
    const Fe inv_lead = f.inv(b.leading());
    for (int da = static_cast<int>(r.size()) - 1; da >= db; --da) {
        if (r[da] == 0) continue;
        Fe c = f.mul(r[da], inv_lead);
        quo[da - db] = c;
        for (int i = 0; i <= db; ++i)
            r[da - db + i] = f.sub(r[da - db + i], f.mul(c, b.coeff(i)));
    }
    if (!Poly(std::move(r)).is_zero())
        throw Error("poly_div_exact: division is not exact");
    return Poly(std::move(quo));
}

bool poly_divides(const Field& f, const Poly& d, const Poly& a) {
    return poly_rem(f, a, d).is_zero();
}

Poly poly_gcd(const Field& f, Poly a, Poly b) {
    if (a.is_zero() && b.is_zero()) throw BothZeroGcdError("gcd(0, 0)");
    while (!b.is_zero()) {
        Poly r = poly_rem(f, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_monic(f, a);
}

Poly poly_derivative(const Field& f, const Poly& a) {
    if (a.degree() < 1) return Poly::zero();
    std::vector<Fe> c(a.coeffs().size() - 1);
    for (std::size_t i = 1; i < a.coeffs().size(); ++i) {
        // i * coeff, with i reduced mod p as a field scalar.
        Fe scalar = static_cast<Fe>(i % f.p());
        c[i - 1] = f.mul(a.coeff(i), scalar);
    }
    return Poly(std::move(c));
}

Fe poly_eval(const Field& f, const Poly& a, Fe x) {
    Fe acc = 0;
    for (std::size_t i = a.coeffs().size(); i-- > 0;)
        acc = f.add(f.mul(acc, x), a.coeff(i));
    return acc;
}

Poly poly_monic(const Field& f, const Poly& a) {
    if (a.is_zero() || a.leading() == 1) return a;
    return poly_scale(f, a, f.inv(a.leading()));
}

namespace {

// p-th root of f when f = h(X^p): coefficients at indices divisible by p,
// each mapped through c -> c^(p^(k-1)) (the inverse of Frobenius on F_q).
Poly pth_root(const Field& f, const Poly& a) {
    std::uint64_t e = 1;
    for (std::uint32_t i = 0; i + 1 < f.k(); ++i) e *= f.p();
    std::vector<Fe> c(a.degree() / f.p() + 1);
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = f.pow(a.coeff(i * f.p()), e);
    return Poly(std::move(c));
}

}  // namespace

Poly square_free_part(const Field& f, const Poly& a) {
    if (a.is_zero()) throw ZeroPolynomialError("square_free_part(0)");
    if (a.degree() == 0) return Poly::constant(1);
    Poly fa = poly_monic(f, a);
    Poly d = poly_derivative(f, fa);
    if (d.is_zero()) {
        // fa = h(X^p); rad(fa) = rad(h after p-th root).
        return square_free_part(f, pth_root(f, fa));
    }
    Poly g = poly_gcd(f, fa, d);
    Poly w = poly_div_exact(f, fa, g);  // product of factors with p ∤ multiplicity
    if (g.degree() == 0) return w;
    // Factors of g not already in w are the p | multiplicity part.
    Poly rest = g;
    Poly common = poly_gcd(f, rest, w);
    while (common.degree() > 0) {
        rest = poly_div_exact(f, rest, common);
        common = poly_gcd(f, rest, w);
    }
    if (rest.degree() == 0) return w;
    return poly_mul(f, w, square_free_part(f, rest));
}

bool is_square_in_closure(const Field& f, const Poly& a) {
    if (a.is_zero()) throw ZeroPolynomialError("is_square_in_closure(0)");
    // All factor multiplicities even <=> rad(f)^2 | f and f / rad(f)^2 is
    // again a closure-square. Degree strictly decreases.
    Poly cur = poly_monic(f, a);
    while (cur.degree() > 0) {
        Poly rad = square_free_part(f, cur);
        Poly rad2 = poly_mul(f, rad, rad);
        if (!poly_divides(f, rad2, cur)) return false;
        cur = poly_div_exact(f, cur, rad2);
    }
    return true;
}

Poly expand_kernel(const Field& f, const FactoredKernel& kern) {
    Poly acc = Poly::constant(1);
    for (const auto& [c, active] : kern.factors) {
        if (!active) continue;
        if (kern.kind == KernelKind::linear_family) {
            acc = poly_mul(f, acc, Poly({kern.r, c}));
        } else {
            acc = poly_mul(f, acc, Poly({kern.r, 0, c}));
        }
    }
    return acc;
}

bool kernel_is_square(const Field& f, const FactoredKernel& kern) {
    std::map<Fe, unsigned> mult;
    for (const auto& [c, active] : kern.factors)
        if (active) ++mult[c];
    for (const auto& [c, n] : mult) {
        if (c == 0) {
            // Degenerate constant factor r: no roots, parity irrelevant.
            continue;
        }
        if (n % 2 != 0) return false;
    }
    return true;
}

long long char_sum_poly(const Field& f, const Poly& a, SumDomain domain) {
    long long acc = 0;
    for (Fe x = (domain == SumDomain::nonzero ? 1u : 0u); x < f.q(); ++x)
        acc += f.chi(poly_eval(f, a, x));
    return acc;
}

WeilReport weil_check(const Field& f, const Poly& a) {
    if (a.is_zero()) throw ZeroPolynomialError("weil_check(0)");
    WeilReport rep;
    rep.sum = char_sum_poly(f, a, SumDomain::all);
    rep.degree_bound = (a.degree() - 1) * std::sqrt(static_cast<double>(f.q()));
    rep.square_kernel = is_square_in_closure(f, a);
    rep.holds = rep.square_kernel
                    ? true  // Weil hypothesis excluded, vacuous
                    : std::llabs(rep.sum) <= static_cast<long long>(
                          std::floor(rep.degree_bound + 1e-9));
    return rep;
}

WeilSuiteResult weil_random_suite(const Field& f, std::uint32_t samples,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto nonzero = [&] { return static_cast<Fe>(1 + rng() % (f.q() - 1)); };
    WeilSuiteResult res;
    res.samples = samples;
    for (std::uint32_t s = 0; s < samples; ++s) {
        FactoredKernel kern;
        kern.kind = (rng() & 1) ? KernelKind::linear_family
                                : KernelKind::quadratic_family;
        kern.r = nonzero();
        std::uint32_t nfac = 2 + rng() % 5;
        std::uint32_t active = 0;
        for (std::uint32_t i = 0; i < nfac; ++i) {
            bool on = rng() & 1;
            active += on;
            kern.factors.emplace_back(nonzero(), on);
        }
        if (active == 0) {  // keep the kernel of positive degree
            kern.factors[0].second = true;
        }
        Poly expanded = expand_kernel(f, kern);
        if (kernel_is_square(f, kern)) {
            ++res.squares_excluded;
            continue;
        }
        WeilReport rep = weil_check(f, expanded);
        ++res.checked;
        if (!rep.holds) ++res.violations;
        if (rep.degree_bound > 0)
            res.max_ratio =
                std::max(res.max_ratio, std::abs(static_cast<double>(rep.sum)) /
                                            rep.degree_bound);
    }
    return res;
}

}  // namespace dioph
