#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "fq.hpp"

// Dense polynomials with coefficients in one extension field F_{p^m}.  Used
// for concrete-fiber work: the Cartier oracle, point counts, and root
// extraction over big fields.

namespace ccmass {

struct PolyFq {
    FqCtxPtr k;
    std::vector<FqElem> c;

    PolyFq() = default;
    explicit PolyFq(FqCtxPtr ctx) : k(std::move(ctx)) {}
    PolyFq(FqCtxPtr ctx, std::vector<FqElem> coeffs) : k(std::move(ctx)), c(std::move(coeffs)) { trim(); }

    static PolyFq zero(const FqCtxPtr& k) { return PolyFq(k); }
    static PolyFq one(const FqCtxPtr& k) { return constant(k, FqElem::one(k)); }
    static PolyFq constant(const FqCtxPtr& k, const FqElem& v) {
        PolyFq r(k);
        r.c.push_back(v);
        r.trim();
        return r;
    }
    static PolyFq x_minus(const FqCtxPtr& k, const FqElem& v) {
        PolyFq r(k);
        r.c.push_back(-v);
        r.c.push_back(FqElem::one(k));
        return r;
    }
    static PolyFq from_fp(const FqCtxPtr& k, const FpPoly& f) {
        PolyFq r(k);
        r.c.reserve(f.c.size());
        for (u64 v : f.c) r.c.push_back(FqElem::from_uint(k, v));
        r.trim();
        return r;
    }

    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    long deg() const { return (long)c.size() - 1; }
    FqElem coeff(std::size_t i) const { return i < c.size() ? c[i] : FqElem::zero(k); }
    FqElem lead() const { return c.empty() ? FqElem::zero(k) : c.back(); }

    bool operator==(const PolyFq& o) const {
        if (c.size() != o.c.size()) return false;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i] != o.c[i]) return false;
        return true;
    }

    PolyFq operator+(const PolyFq& o) const {
        PolyFq r(k);
        r.c.resize(std::max(c.size(), o.c.size()), FqElem::zero(k));
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = coeff(i) + o.coeff(i);
        r.trim();
        return r;
    }
    PolyFq operator-(const PolyFq& o) const {
        PolyFq r(k);
        r.c.resize(std::max(c.size(), o.c.size()), FqElem::zero(k));
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = coeff(i) - o.coeff(i);
        r.trim();
        return r;
    }
    PolyFq operator*(const PolyFq& o) const {
        if (is_zero() || o.is_zero()) return PolyFq(k);
        PolyFq r(k);
        r.c.assign(c.size() + o.c.size() - 1, FqElem::zero(k));
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i].is_zero()) continue;
            for (std::size_t j = 0; j < o.c.size(); ++j) {
                if (o.c[j].is_zero()) continue;
                r.c[i + j] = r.c[i + j] + c[i] * o.c[j];
            }
        }
        r.trim();
        return r;
    }
    PolyFq operator-() const {
        PolyFq r = *this;
        for (auto& v : r.c) v = -v;
        return r;
    }

    PolyFq scaled(const FqElem& s) const {
        PolyFq r(k);
        if (s.is_zero()) return r;
        r.c.reserve(c.size());
        for (auto& v : c) r.c.push_back(v * s);
        r.trim();
        return r;
    }

    PolyFq monic() const {
        CCMASS_CHECK(!is_zero(), "PolyFq::monic on zero");
        return scaled(lead().inv());
    }

    static std::pair<PolyFq, PolyFq> divrem(const PolyFq& a, const PolyFq& b) {
        CCMASS_CHECK(!b.is_zero(), "PolyFq: division by zero");
        PolyFq q(a.k), r = a;
        if (r.deg() < b.deg()) return {q, r};
        q.c.assign(r.c.size() - b.c.size() + 1, FqElem::zero(a.k));
        FqElem linv = b.lead().inv();
        for (long i = r.deg(); i >= b.deg(); --i) {
            if ((std::size_t)i >= r.c.size() || r.c[i].is_zero()) continue;
            FqElem f = r.c[i] * linv;
            q.c[i - b.deg()] = f;
            for (std::size_t j = 0; j < b.c.size(); ++j) {
                std::size_t pos = i - b.deg() + j;
                r.c[pos] = r.c[pos] - f * b.c[j];
            }
        }
        q.trim();
        r.trim();
        return {q, r};
    }
    friend PolyFq operator%(const PolyFq& a, const PolyFq& b) { return divrem(a, b).second; }
    friend PolyFq operator/(const PolyFq& a, const PolyFq& b) { return divrem(a, b).first; }

    static PolyFq gcd(PolyFq a, PolyFq b) {
        while (!b.is_zero()) {
            PolyFq r = a % b;
            a = b;
            b = r;
        }
        return a.is_zero() ? a : a.monic();
    }

    PolyFq derivative() const {
        PolyFq r(k);
        if (c.size() < 2) return r;
        r.c.reserve(c.size() - 1);
        for (std::size_t i = 1; i < c.size(); ++i)
            r.c.push_back(c[i] * FqElem::from_uint(k, i % k->p));
        r.trim();
        return r;
    }

    FqElem eval(const FqElem& x) const {
        FqElem r = FqElem::zero(k);
        for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
        return r;
    }

    static PolyFq powmod(PolyFq base, u64 e, const PolyFq& mod) {
        PolyFq r = one(base.k);
        base = base % mod;
        while (e) {
            if (e & 1) r = (r * base) % mod;
            base = (base * base) % mod;
            e >>= 1;
        }
        return r;
    }

    // x^(q) mod f where q = p^m is the field order (exponent may exceed 64 bits)
    static PolyFq x_field_power_mod(const PolyFq& f) {
        PolyFq x(f.k);
        x.c = {FqElem::zero(f.k), FqElem::one(f.k)};
        PolyFq r = x;
        for (unsigned i = 0; i < f.k->m; ++i) r = powmod(r, f.k->p, f);
        return r;
    }

    // a^((q-1)/2) mod f via the norm chain, q = p^m: first a^((q-1)/(p-1))
    // by a -> a^p * a repeated m-1 times, then the 64-bit power (p-1)/2.
    static PolyFq half_order_power_mod(const PolyFq& a, const PolyFq& f) {
        PolyFq t = a % f;
        PolyFq s = t;
        for (unsigned i = 1; i < f.k->m; ++i) s = (powmod(s, f.k->p, f) * t) % f;
        return powmod(s, (f.k->p - 1) / 2, f);
    }
};

// All roots of f that lie in its own coefficient field (odd p).
inline std::vector<FqElem> roots_in_field(const PolyFq& f0, SplitMix64& rng) {
    const FqCtxPtr& k = f0.k;
    CCMASS_CHECK(k->p != 2, "roots_in_field: odd characteristic only");
    std::vector<FqElem> out;
    PolyFq f = f0.monic();
    PolyFq xq = PolyFq::x_field_power_mod(f);
    PolyFq x(k);
    x.c = {FqElem::zero(k), FqElem::one(k)};
    // x^q - x is squarefree, so this strips multiplicities for free
    PolyFq split_part = PolyFq::gcd(xq - x, f);
    std::function<void(PolyFq)> split = [&](PolyFq g) {
        if (g.deg() <= 0) return;
        if (g.deg() == 1) {
            out.push_back(-(g.monic().coeff(0)));
            return;
        }
        while (true) {
            // random shift x + c, c drawn from the deterministic stream
            std::vector<u64> cc(k->m);
            for (auto& v : cc) v = rng.below(k->p);
            PolyFq shift(k);
            shift.c = {FqElem(k, cc), FqElem::one(k)};
            PolyFq b = PolyFq::half_order_power_mod(shift, g);
            PolyFq h = PolyFq::gcd(b - PolyFq::one(k), g);
            if (h.deg() > 0 && h.deg() < g.deg()) {
                split(h);
                split(g / h);
                return;
            }
        }
    };
    split(split_part);
    std::sort(out.begin(), out.end(), FqElem::lex_less);
    return out;
}

}  // namespace ccmass
