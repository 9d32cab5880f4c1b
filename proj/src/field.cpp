#include "dioph/field.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace dioph {

namespace {

bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Coefficient vector of the element with the given code, length k.
std::vector<std::uint32_t> code_digits(Fe code, std::uint32_t p, std::uint32_t k) {
    std::vector<std::uint32_t> d(k);
    for (std::uint32_t i = 0; i < k; ++i, code /= p) d[i] = code % p;
    return d;
}

Fe digits_code(const std::vector<std::uint32_t>& d, std::uint32_t p) {
    Fe code = 0;
    for (std::size_t i = d.size(); i-- > 0;) code = code * p + d[i];
    return code;
}

// Multiplies two coefficient vectors mod (modulus, p); result length k.
std::vector<std::uint32_t> polymul_mod(const std::vector<std::uint32_t>& a,
                                       const std::vector<std::uint32_t>& b,
                                       const std::vector<std::uint32_t>& modulus,
                                       std::uint32_t p) {
    std::uint32_t k = static_cast<std::uint32_t>(modulus.size()) - 1;
    std::vector<std::uint64_t> prod(2 * k, 0);
    for (std::uint32_t i = 0; i < k; ++i) {
        if (a[i] == 0) continue;
        for (std::uint32_t j = 0; j < k; ++j)
            prod[i + j] += static_cast<std::uint64_t>(a[i]) * b[j];
    }
    for (auto& c : prod) c %= p;
    // Reduce: modulus is monic, X^k = -(c0 + c1 X + ... + c_{k-1} X^{k-1}).
    for (std::uint32_t d = 2 * k - 1; d >= k; --d) {
        std::uint64_t lead = prod[d];
        if (lead == 0) continue;
        prod[d] = 0;
        for (std::uint32_t i = 0; i < k; ++i) {
            std::uint64_t sub = (lead * modulus[i]) % p;
            prod[d - k + i] = (prod[d - k + i] + p - sub) % p;
        }
    }
    std::vector<std::uint32_t> out(k);
    for (std::uint32_t i = 0; i < k; ++i) out[i] = static_cast<std::uint32_t>(prod[i]);
    return out;
}

// Divides polynomial a by monic polynomial b over F_p, returns remainder.
std::vector<std::uint32_t> polyrem(std::vector<std::uint32_t> a,
                                   const std::vector<std::uint32_t>& b,
                                   std::uint32_t p) {
    auto deg = [](const std::vector<std::uint32_t>& f) -> int {
        for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
            if (f[i] != 0) return i;
        return -1;
    };
    int db = deg(b);
    for (int da = deg(a); da >= db && db >= 0; da = deg(a)) {
        std::uint32_t c = a[da];
        for (int i = 0; i <= db; ++i) {
            std::uint64_t sub = (static_cast<std::uint64_t>(c) * b[i]) % p;
            a[da - db + i] =
                static_cast<std::uint32_t>((a[da - db + i] + p - sub) % p);
        }
    }
    return a;
}

bool poly_is_zero(const std::vector<std::uint32_t>& f) {
    return std::all_of(f.begin(), f.end(), [](std::uint32_t c) { return c == 0; });
}

// Irreducibility over F_p by trial division with every monic polynomial of
// degree 1..deg/2. Fields are capped at 2^20 elements so this stays cheap.
bool is_irreducible(const std::vector<std::uint32_t>& f, std::uint32_t p) {
    std::uint32_t k = static_cast<std::uint32_t>(f.size()) - 1;
    if (f[0] == 0) return k == 1;  // X divides f
    for (std::uint32_t d = 1; 2 * d <= k; ++d) {
        std::uint64_t count = 1;
        for (std::uint32_t i = 0; i < d; ++i) count *= p;
        for (std::uint64_t low = 0; low < count; ++low) {
            std::vector<std::uint32_t> g(d + 1, 0);
            std::uint64_t c = low;
            for (std::uint32_t i = 0; i < d; ++i, c /= p)
                g[i] = static_cast<std::uint32_t>(c % p);
            g[d] = 1;
            if (poly_is_zero(polyrem(f, g, p))) return false;
        }
    }
    return true;
}

std::vector<std::uint32_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint32_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(static_cast<std::uint32_t>(d));
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(static_cast<std::uint32_t>(n));
    return out;
}

}  // namespace

Field Field::make(std::uint32_t p, std::uint32_t k,
                  std::optional<std::vector<std::uint32_t>> modulus,
                  std::uint64_t table_cap) {
    if (p == 2) throw EvenCharacteristicError("characteristic 2 not supported");
    if (!is_prime_u32(p)) throw NotPrimeError(std::to_string(p) + " is not prime");
    if (k < 1) throw UsageError("extension degree must be >= 1");

    std::uint64_t q64 = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
        q64 *= p;
        if (q64 > table_cap)
            throw FieldTooLargeError("q = " + std::to_string(p) + "^" +
                                     std::to_string(k) + " exceeds table cap " +
                                     std::to_string(table_cap));
    }
    if (q64 < 3) throw UsageError("q must be >= 3");

    Field f;
    f.p_ = p;
    f.k_ = k;
    f.q_ = static_cast<std::uint32_t>(q64);

    if (modulus) {
        if (modulus->size() != k + 1 || modulus->back() != 1)
            throw ReducibleModulusError("modulus must be monic of degree k");
        for (auto c : *modulus)
            if (c >= p) throw UsageError("modulus coefficient out of range");
        if (k > 1 && !is_irreducible(*modulus, p))
            throw ReducibleModulusError("modulus is reducible over F_p");
        f.modulus_ = *modulus;
    } else if (k == 1) {
        f.modulus_ = {0, 1};  // X - 0 convention for prime fields
    } else {
        // Deterministic choice: smallest low-coefficient code.
        for (Fe low = 0;; ++low) {
            if (low >= f.q_)
                throw ReducibleModulusError("no irreducible modulus found");
            std::vector<std::uint32_t> cand = code_digits(low, p, k);
            cand.push_back(1);
            if (is_irreducible(cand, p)) {
                f.modulus_ = cand;
                break;
            }
        }
    }

    // Smallest-code generator of F_q^*.
    const std::uint64_t order = f.q_ - 1;
    const auto ell = prime_factors(order);
    auto powmod = [&](Fe base, std::uint64_t e) {
        std::vector<std::uint32_t> acc(k, 0);
        acc[0] = 1;
        std::vector<std::uint32_t> b = code_digits(base, p, k);
        while (e) {
            if (e & 1) acc = polymul_mod(acc, b, f.modulus_, p);
            b = polymul_mod(b, b, f.modulus_, p);
            e >>= 1;
        }
        return digits_code(acc, p);
    };
    Fe g = 0;
    for (Fe cand = 2; cand < f.q_; ++cand) {
        bool ok = true;
        for (auto l : ell)
            if (powmod(cand, order / l) == 1) {
                ok = false;
                break;
            }
        if (ok) {
            g = cand;
            break;
        }
    }
    if (g == 0) throw Error("no generator found (internal)");
    f.generator_ = g;

    f.exp_.assign(2 * order, 0);
    f.log_.assign(f.q_, 0);
    {
        std::vector<std::uint32_t> acc(k, 0);
        acc[0] = 1;
        const std::vector<std::uint32_t> gd = code_digits(g, p, k);
        for (std::uint64_t e = 0; e < order; ++e) {
            Fe code = digits_code(acc, p);
            f.exp_[e] = code;
            f.exp_[e + order] = code;
            f.log_[code] = static_cast<std::uint32_t>(e);
            acc = polymul_mod(acc, gd, f.modulus_, p);
        }
        if (digits_code(acc, p) != 1) throw Error("generator order mismatch (internal)");
    }

    f.squares_.assign((f.q_ + 63) / 64, 0);
    for (std::uint64_t e = 0; e < order; e += 2) {
        Fe x = f.exp_[e];
        f.squares_[x >> 6] |= std::uint64_t{1} << (x & 63);
    }
    return f;
}

Field Field::from_spec(const std::string& spec,
                       std::optional<std::vector<std::uint32_t>> modulus,
                       std::uint64_t table_cap) {
    std::uint32_t p = 0, k = 1;
    auto caret = spec.find('^');
    std::string ps = spec.substr(0, caret);
    auto res = std::from_chars(ps.data(), ps.data() + ps.size(), p);
    if (res.ec != std::errc{} || res.ptr != ps.data() + ps.size())
        throw UsageError("bad field spec: " + spec);
    if (caret != std::string::npos) {
        std::string ks = spec.substr(caret + 1);
        auto r2 = std::from_chars(ks.data(), ks.data() + ks.size(), k);
        if (r2.ec != std::errc{} || r2.ptr != ks.data() + ks.size())
            throw UsageError("bad field spec: " + spec);
    }
    return make(p, k, std::move(modulus), table_cap);
}

Fe Field::add(Fe x, Fe y) const {
    if (k_ == 1) {
        Fe s = x + y;
        return s >= q_ ? s - q_ : s;
    }
    Fe out = 0, mult = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
        std::uint32_t d = x % p_ + y % p_;
        if (d >= p_) d -= p_;
        out += d * mult;
        mult *= p_;
        x /= p_;
        y /= p_;
    }
    return out;
}

Fe Field::neg(Fe x) const {
    if (k_ == 1) return x == 0 ? 0 : q_ - x;
    Fe out = 0, mult = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
        std::uint32_t d = x % p_;
        out += (d == 0 ? 0 : p_ - d) * mult;
        mult *= p_;
        x /= p_;
    }
    return out;
}

Fe Field::sub(Fe x, Fe y) const { return add(x, neg(y)); }

Fe Field::pow(Fe x, std::uint64_t e) const {
    if (x == 0) return e == 0 ? 1 : 0;
    std::uint64_t le = (static_cast<std::uint64_t>(log_[x]) * (e % (q_ - 1))) % (q_ - 1);
    return exp_[le];
}

Fe Field::smallest_nonsquare() const {
    for (Fe x = 1; x < q_; ++x)
        if (chi(x) == -1) return x;
    throw Error("no non-square found (internal)");
}

int Field::chi_euler(Fe x) const {
    if (x == 0) return 0;
    // x^((q-1)/2) via table-free square-and-multiply.
    std::uint64_t e = (q_ - 1) / 2;
    Fe acc = 1, b = x;
    while (e) {
        if (e & 1) acc = mul_poly(acc, b);
        b = mul_poly(b, b);
        e >>= 1;
    }
    return acc == 1 ? 1 : -1;
}

Fe Field::mul_poly(Fe x, Fe y) const {
    if (k_ == 1)
        return static_cast<Fe>((static_cast<std::uint64_t>(x) * y) % q_);
    return digits_code(
        polymul_mod(code_digits(x, p_, k_), code_digits(y, p_, k_), modulus_, p_), p_);
}

std::vector<std::uint32_t> parse_coeff_list(const std::string& s) {
    std::vector<std::uint32_t> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                                   : comma - pos);
        std::uint32_t v = 0;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
            throw UsageError("bad coefficient list: " + s);
        out.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace dioph
