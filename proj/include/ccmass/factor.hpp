#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "fp_poly.hpp"
#include "fq.hpp"

// Factorization over F_p: squarefree decomposition, then distinct-degree,
// then Cantor-Zassenhaus equal-degree splitting driven by a seeded stream so
// the output (and every report built from it) is reproducible.

namespace ccmass {

struct FpFactor {
    FpPoly poly;  // monic irreducible
    unsigned mult;
};

namespace detail {

// f monic squarefree -> list of (product of irreducibles of degree k, k)
inline std::vector<std::pair<FpPoly, unsigned>> distinct_degree(const FpPoly& f0) {
    std::vector<std::pair<FpPoly, unsigned>> out;
    FpPoly f = f0;
    FpPoly x(f.p, {0, 1});
    FpPoly h = x;  // will hold t^(p^k) mod f
    unsigned k = 0;
    while (f.deg() > 0) {
        ++k;
        if ((long)(2 * k) > f.deg()) {
            out.emplace_back(f, (unsigned)f.deg());
            break;
        }
        h = FpPoly::powmod(h, f.p, f);
        FpPoly g = FpPoly::gcd(h - x, f);
        if (g.deg() > 0) {
            out.emplace_back(g, k);
            f = f / g;
            h = h % f;
        }
    }
    return out;
}

// f monic, product of r >= 1 distinct irreducibles of degree k
inline void equal_degree(const FpPoly& f, unsigned k, SplitMix64& rng, std::vector<FpPoly>& out) {
    if ((unsigned)f.deg() == k) {
        out.push_back(f);
        return;
    }
    CCMASS_CHECK(f.p != 2, "equal_degree: odd characteristic only");
    // a^((p^k - 1)/2) via the norm chain, since p^k may not fit in 64 bits
    auto half_power = [&](const FpPoly& a) {
        FpPoly s = a % f;
        FpPoly t = s;
        for (unsigned i = 1; i < k; ++i) s = (FpPoly::powmod(s, f.p, f) * t) % f;
        return FpPoly::powmod(s, (f.p - 1) / 2, f);
    };
    while (true) {
        FpPoly a(f.p);
        a.c.resize(f.deg());
        for (auto& v : a.c) v = rng.below(f.p);
        a.trim();
        if (a.deg() < 1) continue;
        FpPoly b = half_power(a);
        FpPoly g = FpPoly::gcd(b - FpPoly::one(f.p), f);
        if (g.deg() > 0 && g.deg() < f.deg()) {
            equal_degree(g, k, rng, out);
            equal_degree(f / g, k, rng, out);
            return;
        }
    }
}

}  // namespace detail

// Squarefree decomposition in characteristic p, p-th power descent included.
inline std::vector<std::pair<FpPoly, unsigned>> squarefree_decomposition(const FpPoly& f0) {
    std::vector<std::pair<FpPoly, unsigned>> out;
    std::function<void(FpPoly, unsigned)> go = [&](FpPoly f, unsigned outer) {
        f = f.monic();
        if (f.deg() == 0) return;
        FpPoly df = f.derivative();
        if (df.is_zero()) {
            // f = g(t^p) = g~(t)^p since coefficients sit in F_p
            FpPoly g(f.p);
            for (std::size_t i = 0; i < f.c.size(); i += f.p) g.c.push_back(f.c[i]);
            g.trim();
            go(g, outer * (unsigned)f.p);
            return;
        }
        FpPoly c = FpPoly::gcd(f, df);
        FpPoly w = f / c;
        unsigned i = 1;
        while (w.deg() > 0) {
            FpPoly y = FpPoly::gcd(w, c);
            FpPoly z = w / y;
            if (z.deg() > 0) out.emplace_back(z, i * outer);
            w = y;
            c = c / y;
            ++i;
        }
        if (c.deg() > 0) go(c, outer);
    };
    go(f0, 1);
    return out;
}

// Full factorization, deterministic output order (degree, then coefficient
// lex).  The product of factor^mult times the unit reproduces the input.
inline std::vector<FpFactor> factor_over_fp(const FpPoly& f, u64 seed) {
    CCMASS_CHECK(!f.is_zero(), "cannot factor zero");
    std::vector<FpFactor> out;
    if (f.deg() == 0) return out;
    SplitMix64 rng(seed);
    for (auto& [sqf, mult] : squarefree_decomposition(f)) {
        for (auto& [prod, k] : detail::distinct_degree(sqf)) {
            std::vector<FpPoly> irred;
            detail::equal_degree(prod, k, rng, irred);
            for (auto& q : irred) out.push_back({q, mult});
        }
    }
    std::sort(out.begin(), out.end(), [](const FpFactor& a, const FpFactor& b) {
        return FpPoly::lex_less(a.poly, b.poly);
    });
    return out;
}

// Rabin's test: t^(p^m) = t mod f and gcd(t^(p^(m/l)) - t, f) = 1 for primes l | m.
inline bool is_irreducible(const FpPoly& f0) {
    if (f0.deg() < 1) return false;
    FpPoly f = f0.monic();
    unsigned m = (unsigned)f.deg();
    FpPoly x(f.p, {0, 1});
    std::vector<FpPoly> pw(m + 1, FpPoly(f.p));
    pw[0] = x % f;
    for (unsigned i = 1; i <= m; ++i) pw[i] = FpPoly::powmod(pw[i - 1], f.p, f);
    if (pw[m] != pw[0]) return false;
    std::vector<unsigned> prime_divs;
    unsigned rem = m;
    for (unsigned l = 2; l * l <= rem; ++l) {
        if (rem % l == 0) {
            prime_divs.push_back(l);
            while (rem % l == 0) rem /= l;
        }
    }
    if (rem > 1) prime_divs.push_back(rem);
    for (unsigned l : prime_divs) {
        if (FpPoly::gcd(pw[m / l] - x, f).deg() > 0) return false;
    }
    return true;
}

struct RootsWithField {
    FqCtxPtr field;            // F_p[T]/(factor)
    std::vector<FqElem> roots;  // the m Frobenius-conjugate roots, T^(p^i)
};

// Build the extension on the factor itself and list its conjugate roots.
inline RootsWithField roots_with_field(const FpPoly& factor) {
    CCMASS_CHECK(factor.deg() >= 1, "roots_with_field: need positive degree");
    CCMASS_CHECK(is_irreducible(factor), "roots_with_field: input reducible");
    RootsWithField rw;
    rw.field = FqCtx::make(factor.p, factor);
    FqElem r = FqElem::gen(rw.field);
    for (unsigned i = 0; i < rw.field->m; ++i) {
        CCMASS_CHECK(eval_at(factor, r).is_zero(), "roots_with_field: root check failed");
        rw.roots.push_back(r);
        r = r.frob();
    }
    CCMASS_CHECK(r == rw.roots[0], "roots_with_field: Frobenius orbit not closed");
    return rw;
}

}  // namespace ccmass
