#pragma once

#include "poly_fq.hpp"

// Point counts on the smooth projective model of y^d = f(x) over a small
// field F_q.  The fiber over a place x0 of P^1 is the etale algebra
// F_q[s]/(s^r - u(x0)) with r = gcd(ord_{x0} f, d) and u the unit part of f
// at x0, so counting rational points reduces to power-residue tests.

namespace ccmass {

// #{s in F_q : s^r = c}, c != 0
inline u64 count_power_roots(const FqElem& c, u64 r, u64 q) {
    u64 g = gcd_u64(r, q - 1);
    return c.pow((q - 1) / g) == FqElem::one(c.k) ? g : 0;
}

inline u64 point_count_superelliptic(unsigned d, const PolyFq& f, const FqCtxPtr& k) {
    CCMASS_CHECK(!f.is_zero(), "point count: zero right-hand side");
    u64 q = k->order_u64();
    u64 total = 0;
    for (const FqElem& x0 : enumerate_field(k)) {
        FqElem v = f.eval(x0);
        if (!v.is_zero()) {
            total += count_power_roots(v, d, q);
            continue;
        }
        // branch point: strip the full power of (x - x0)
        PolyFq g = f;
        u64 ord = 0;
        PolyFq lin = PolyFq::x_minus(k, x0);
        while (true) {
            auto [quo, rem] = PolyFq::divrem(g, lin);
            if (!rem.is_zero()) break;
            g = quo;
            ++ord;
        }
        u64 r = gcd_u64(ord, d);
        if (r == 0) r = d;
        total += count_power_roots(g.eval(x0), r, q);
    }
    // at infinity: y^d = xi^{-deg f} * (unit with value = leading coefficient)
    u64 a_inf = (u64)((d - (u64)f.deg() % d) % d);
    u64 r = gcd_u64(a_inf, d);
    if (r == 0) r = d;
    total += count_power_roots(f.lead(), r, q);
    return total;
}

// Supersingularity of an elliptic fiber: #E(F_q) = 1 mod p.
inline bool elliptic_supersingular(const PolyFq& cubic, const FqCtxPtr& k) {
    u64 n = point_count_superelliptic(2, cubic, k);
    return n % k->p == 1 % k->p;
}

}  // namespace ccmass
