#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "fp.hpp"

// Dense univariate polynomials over F_p.  4-point families keep degrees near
// d*p in x and p in t, so dense storage wins on locality and simplicity.

namespace ccmass {

struct FpPoly {
    u64 p = 0;
    std::vector<u64> c;  // c[i] = coefficient of t^i, trimmed of trailing zeros

    FpPoly() = default;
    explicit FpPoly(u64 p_) : p(p_) {}
    FpPoly(u64 p_, std::vector<u64> coeffs) : p(p_), c(std::move(coeffs)) {
        for (auto& v : c) v %= p;
        trim();
    }

    static FpPoly zero(u64 p) { return FpPoly(p); }
    static FpPoly constant(u64 p, u64 v) { return FpPoly(p, {v % p}); }
    static FpPoly one(u64 p) { return constant(p, 1); }
    // coef * t^k
    static FpPoly monomial(u64 p, std::size_t k, u64 coef) {
        FpPoly r(p);
        if (coef % p) {
            r.c.assign(k + 1, 0);
            r.c[k] = coef % p;
        }
        return r;
    }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    bool is_zero() const { return c.empty(); }
    // degree of the zero polynomial is -1
    long deg() const { return (long)c.size() - 1; }
    u64 coeff(std::size_t i) const { return i < c.size() ? c[i] : 0; }
    u64 lead() const { return c.empty() ? 0 : c.back(); }

    bool operator==(const FpPoly& o) const { return p == o.p && c == o.c; }
    bool operator!=(const FpPoly& o) const { return !(*this == o); }

    FpPoly operator+(const FpPoly& o) const {
        FpPoly r(p);
        r.c.resize(std::max(c.size(), o.c.size()), 0);
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = add_mod(coeff(i), o.coeff(i), p);
        r.trim();
        return r;
    }
    FpPoly operator-(const FpPoly& o) const {
        FpPoly r(p);
        r.c.resize(std::max(c.size(), o.c.size()), 0);
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = sub_mod(coeff(i), o.coeff(i), p);
        r.trim();
        return r;
    }
    FpPoly operator-() const {
        FpPoly r = *this;
        for (auto& v : r.c) v = neg_mod(v, p);
        return r;
    }

    FpPoly scaled(u64 s) const {
        s %= p;
        FpPoly r(p);
        if (s == 0) return r;
        r.c.resize(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) r.c[i] = mul_mod(c[i], s, p);
        r.trim();
        return r;
    }

    // multiply by t^k
    FpPoly shifted(std::size_t k) const {
        if (is_zero()) return *this;
        FpPoly r(p);
        r.c.assign(c.size() + k, 0);
        std::copy(c.begin(), c.end(), r.c.begin() + k);
        return r;
    }

    // Schoolbook below the threshold, Karatsuba above.  32 was picked by a
    // quick sweep on degree-500 operands (mod 97): crossover sat between 24
    // and 48 on the test box; anything in that range is fine at our scale.
    static constexpr std::size_t kKaratsubaThreshold = 32;

    FpPoly operator*(const FpPoly& o) const {
        if (is_zero() || o.is_zero()) return FpPoly(p);
        if (std::min(c.size(), o.c.size()) < kKaratsubaThreshold) return mul_school(*this, o);
        return mul_karatsuba(*this, o);
    }

    static FpPoly mul_school(const FpPoly& a, const FpPoly& b) {
        FpPoly r(a.p);
        r.c.assign(a.c.size() + b.c.size() - 1, 0);
        for (std::size_t i = 0; i < a.c.size(); ++i) {
            if (a.c[i] == 0) continue;
            for (std::size_t j = 0; j < b.c.size(); ++j)
                r.c[i + j] = (u64)(((u128)a.c[i] * b.c[j] + r.c[i + j]) % a.p);
        }
        r.trim();
        return r;
    }

    static FpPoly mul_karatsuba(const FpPoly& a, const FpPoly& b) {
        std::size_t n = std::max(a.c.size(), b.c.size());
        std::size_t h = n / 2;
        auto split = [h](const FpPoly& f) {
            FpPoly lo(f.p), hi(f.p);
            std::size_t cut = std::min(h, f.c.size());
            lo.c.assign(f.c.begin(), f.c.begin() + cut);
            hi.c.assign(f.c.begin() + cut, f.c.end());
            lo.trim();
            hi.trim();
            return std::pair<FpPoly, FpPoly>(lo, hi);
        };
        auto [a0, a1] = split(a);
        auto [b0, b1] = split(b);
        FpPoly z0 = a0 * b0;
        FpPoly z2 = a1 * b1;
        FpPoly z1 = (a0 + a1) * (b0 + b1) - z0 - z2;
        return z0 + z1.shifted(h) + z2.shifted(2 * h);
    }

    FpPoly derivative() const {
        FpPoly r(p);
        if (c.size() < 2) return r;
        r.c.resize(c.size() - 1);
        for (std::size_t i = 1; i < c.size(); ++i) r.c[i - 1] = mul_mod(c[i], i % p, p);
        r.trim();
        return r;
    }

    u64 eval(u64 x) const {
        u64 r = 0;
        for (std::size_t i = c.size(); i-- > 0;) r = (u64)(((u128)r * x + c[i]) % p);
        return r;
    }

    FpPoly monic() const {
        CCMASS_CHECK(!is_zero(), "monic: zero polynomial");
        return scaled(inv_mod(lead(), p));
    }

    // division with remainder; divisor need not be monic
    static std::pair<FpPoly, FpPoly> divrem(const FpPoly& a, const FpPoly& b) {
        CCMASS_CHECK(!b.is_zero(), "divrem: division by zero polynomial");
        FpPoly q(a.p), r = a;
        if (r.deg() < b.deg()) return {q, r};
        q.c.assign(r.c.size() - b.c.size() + 1, 0);
        u64 linv = inv_mod(b.lead(), a.p);
        for (long i = r.deg(); i >= b.deg(); --i) {
            if ((std::size_t)i >= r.c.size() || r.c[i] == 0) continue;
            u64 f = mul_mod(r.c[i], linv, a.p);
            q.c[i - b.deg()] = f;
            for (std::size_t j = 0; j < b.c.size(); ++j) {
                std::size_t k = i - b.deg() + j;
                r.c[k] = sub_mod(r.c[k], mul_mod(f, b.c[j], a.p), a.p);
            }
        }
        q.trim();
        r.trim();
        return {q, r};
    }

    friend FpPoly operator%(const FpPoly& a, const FpPoly& b) { return divrem(a, b).second; }
    friend FpPoly operator/(const FpPoly& a, const FpPoly& b) { return divrem(a, b).first; }

    static FpPoly gcd(FpPoly a, FpPoly b) {
        while (!b.is_zero()) {
            FpPoly r = a % b;
            a = b;
            b = r;
        }
        return a.is_zero() ? a : a.monic();
    }

    FpPoly pow(u64 e) const {
        FpPoly r = one(p), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    static FpPoly powmod(FpPoly base, u64 e, const FpPoly& mod) {
        FpPoly r = one(base.p);
        base = base % mod;
        while (e) {
            if (e & 1) r = (r * base) % mod;
            base = (base * base) % mod;
            e >>= 1;
        }
        return r;
    }

    u64 eval_zero() const { return coeff(0); }

    // Debug dump, "c0 + c1*t + c2*t^2 + ..."; used in golden files.
    std::string str(const std::string& var = "t") const {
        if (is_zero()) return "0";
        std::string s;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            if (!s.empty()) s += " + ";
            if (i == 0)
                s += std::to_string(c[i]);
            else if (i == 1)
                s += (c[i] == 1 ? var : std::to_string(c[i]) + "*" + var);
            else
                s += (c[i] == 1 ? var : std::to_string(c[i]) + "*" + var) + "^" + std::to_string(i);
        }
        return s;
    }

    // (degree, coefficients) order; used everywhere determinism matters
    static bool lex_less(const FpPoly& a, const FpPoly& b) {
        if (a.deg() != b.deg()) return a.deg() < b.deg();
        for (std::size_t i = 0; i < a.c.size(); ++i) {
            if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
        }
        return false;
    }
};

}  // namespace ccmass
