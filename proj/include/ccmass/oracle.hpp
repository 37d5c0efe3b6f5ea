#pragma once

#include <map>

#include "cartier.hpp"
#include "poly_fq.hpp"

// Brute-force Cartier operator on a concrete fiber y^d = f(x) over F_q,
// straight from the defining rules: C is additive, C(h^p w) = h C(w), and
// C(x^m dx) = x^{(m+1)/p - 1} dx when p | m + 1, else 0, with the 1/p power
// (inverse Frobenius) on coefficients.  Independent of the symbolic matrix
// path; the two are played against each other in the test suite.

namespace ccmass {

// A differential sum_s (num_s / den_s)(x) dx / y^s, s running mod d.
struct RatDifferential {
    unsigned d = 0;
    FqCtxPtr k;
    std::map<unsigned, std::pair<PolyFq, PolyFq>> comp;  // s -> (num, den)

    static RatDifferential zero(unsigned d, const FqCtxPtr& k) { return {d, k, {}}; }

    void add_term(unsigned s, PolyFq num, PolyFq den) {
        CCMASS_CHECK(!den.is_zero(), "differential: zero denominator");
        s %= d;
        if (num.is_zero()) return;
        auto it = comp.find(s);
        if (it == comp.end()) {
            comp.emplace(s, std::make_pair(std::move(num), std::move(den)));
            return;
        }
        auto& [n0, d0] = it->second;
        PolyFq nn = n0 * den + num * d0;
        PolyFq dd = d0 * den;
        PolyFq g = PolyFq::gcd(nn, dd);
        if (g.deg() > 0) {
            nn = nn / g;
            dd = dd / g;
        }
        if (nn.is_zero())
            comp.erase(it);
        else
            it->second = {std::move(nn), std::move(dd)};
    }

    bool is_zero() const {
        for (auto& [s, nd] : comp)
            if (!nd.first.is_zero()) return false;
        return true;
    }

    bool equals(const RatDifferential& o) const {
        for (unsigned s = 0; s < d; ++s) {
            auto a = comp.find(s), b = o.comp.find(s);
            bool za = (a == comp.end()), zb = (b == o.comp.end());
            if (za && zb) continue;
            if (za != zb) return false;
            // cross-multiplied comparison
            if (!(a->second.first * b->second.second == b->second.first * a->second.second))
                return false;
        }
        return true;
    }
};

struct CartierOracle {
    unsigned d;
    u64 p;
    FqCtxPtr k;
    PolyFq f;  // y^d = f(x), t already specialized

    CartierOracle(unsigned d_, const PolyFq& f_) : d(d_), p(f_.k->p), k(f_.k), f(f_) {
        CCMASS_CHECK(p % d != 0, "oracle: p divides d");
    }

    static PolyFq frob_inv_poly(const PolyFq& a) {
        PolyFq r = a;
        for (auto& c : r.c) c = c.frob_inv();
        return r;
    }

    // C(u(x) dx) for a plain polynomial coefficient: keep exponents m with
    // p | m + 1 and apply the inverse Frobenius to their coefficients
    PolyFq cartier_rational_part(const PolyFq& u) const {
        PolyFq out(k);
        for (long m = 0; m <= u.deg(); ++m) {
            if ((u64)(m + 1) % p != 0) continue;
            std::size_t b = ((std::size_t)m + 1) / p;  // exponent becomes b - 1
            out.c.resize(std::max(out.c.size(), b), FqElem::zero(k));
            out.c[b - 1] = u.coeff((std::size_t)m).frob_inv();
        }
        out.trim();
        return out;
    }

    // C applied componentwise: (num/den) dx / y^s  ->  class s' = s/p mod d
    RatDifferential apply(const RatDifferential& w) const {
        CCMASS_CHECK(w.d == d, "oracle: degree mismatch");
        RatDifferential out = RatDifferential::zero(d, k);
        u64 pinv_mod_d = inv_mod_general(p % d, d);
        for (auto& [s, nd] : w.comp) {
            const auto& [num, den] = nd;
            unsigned s2 = (unsigned)((u64)s * pinv_mod_d % d);
            // (num/den) y^{-s} dx = (num den^{p-1} f^e) (den y^{s2})^{-p} dx,
            // e = (p s2 - s)/d  (lift s2 by d until the exponent is >= 0)
            long e_num = (long)p * (long)s2 - (long)s;
            unsigned s2_shift = s2;
            while (e_num < 0) {
                s2_shift += d;
                e_num += (long)p * (long)d;
            }
            CCMASS_ASSERT(e_num % (long)d == 0, "oracle: twist exponent not integral");
            u64 e = (u64)(e_num / (long)d);
            PolyFq poly_part = num;
            if (den.deg() > 0 || den.lead() != FqElem::one(k)) {
                PolyFq den_pow = den;
                // den^{p-1}
                PolyFq acc = PolyFq::one(k);
                u64 ex = p - 1;
                while (ex) {
                    if (ex & 1) acc = acc * den_pow;
                    den_pow = den_pow * den_pow;
                    ex >>= 1;
                }
                poly_part = poly_part * acc;
            }
            // f^e
            PolyFq fe = PolyFq::one(k);
            {
                PolyFq b = f;
                u64 ex = e;
                while (ex) {
                    if (ex & 1) fe = fe * b;
                    b = b * b;
                    ex >>= 1;
                }
            }
            poly_part = poly_part * fe;
            PolyFq img = cartier_rational_part(poly_part);
            if (img.is_zero()) continue;
            // divide the pulled-out p-th power back off: den * y^{s2_shift};
            // y^{s2_shift} = f^{(s2_shift - s2)/d} y^{s2}
            u64 extra = (s2_shift - s2) / d;
            PolyFq den_out = den;
            for (u64 i = 0; i < extra; ++i) den_out = den_out * f;
            out.add_term(s2, img, den_out);
        }
        return out;
    }

    // d(u/v * y^sigma): the exterior derivative of a function, expressed in
    // the y^{-s} dx component format (y^sigma dx = f * dx / y^{d - sigma})
    RatDifferential differential_of(unsigned sigma, const PolyFq& u, const PolyFq& v) const {
        sigma %= d;
        RatDifferential out = RatDifferential::zero(d, k);
        // d(u/v) * y^sigma + (u/v) sigma y^{sigma - 1} dy,  dy = f' y / (d f) dx
        // => [ (u'v - uv')/v^2 + (u/v) sigma f'/(d f) ] y^sigma dx
        PolyFq du = u.derivative(), dv = v.derivative();
        PolyFq n1 = du * v - u * dv;  // over v^2
        PolyFq d1 = v * v;
        FqElem sig = FqElem::from_uint(k, sigma % p);
        FqElem dinv = FqElem::from_uint(k, d % p).inv();
        PolyFq n2 = u * f.derivative().scaled(sig * dinv);  // over v f
        PolyFq d2 = v * f;
        // common denominator v^2 f
        PolyFq num = n1 * f + n2 * v;
        PolyFq den = d1 * f;
        if (num.is_zero()) return out;
        if (sigma == 0) {
            out.add_term(0, num, den);
            return out;
        }
        // y^sigma dx = f dx / y^{d-sigma}
        out.add_term(d - sigma, num * f, den);
        return out;
    }

    // F^{p-1} dF for F = (u/v) y^sigma; the identity C(F^{p-1} dF) = dF is a
    // definitional test of the operator
    RatDifferential power_p_minus_1_times_d(unsigned sigma, const PolyFq& u, const PolyFq& v) const {
        sigma %= d;
        // F^{p-1} dF = F^p dlog F;  dlog F = u'/u - v'/v + sigma f'/(d f) dx
        FqElem dinv = FqElem::from_uint(k, d % p).inv();
        FqElem sig = FqElem::from_uint(k, sigma % p);
        PolyFq num = (u.derivative() * v - u * v.derivative()) * f + (u * v).scaled(sig * dinv) * f.derivative();
        PolyFq den = u * v * f;
        auto pow_p = [&](const PolyFq& a) {
            PolyFq r = PolyFq::one(k);
            PolyFq b = a;
            u64 ex = p;
            while (ex) {
                if (ex & 1) r = r * b;
                b = b * b;
                ex >>= 1;
            }
            return r;
        };
        PolyFq up = pow_p(u), vp = pow_p(v);
        // y^{p sigma} = f^{floor(p sigma / d)} y^{p sigma mod d}
        u64 ps = (u64)p * sigma;
        u64 cls = ps % d;
        u64 fpow = ps / d;
        PolyFq fnum = PolyFq::one(k);
        for (u64 i = 0; i < fpow; ++i) fnum = fnum * f;
        RatDifferential out = RatDifferential::zero(d, k);
        PolyFq total_num = up * fnum * num;
        PolyFq total_den = vp * den;
        if (total_num.is_zero()) return out;
        if (cls == 0) {
            out.add_term(0, total_num, total_den);
        } else {
            out.add_term((unsigned)(d - cls), total_num * f, total_den);
        }
        return out;
    }
};

// Oracle image of a basis differential q(x) dx / y^s, reduced to coordinates
// in the target basis of the symbolic matrix; exact division throughout.
inline std::vector<FqElem> oracle_cartier_coords(const CartierOracle& oc, const CartierMatrix& cm,
                                                 const FqElem& t0, unsigned s_src, long col) {
    const DifferentialBasis* src = nullptr;
    const DifferentialBasis* dst = nullptr;
    const CartierBlock* blk = nullptr;
    for (auto& b : cm.blocks)
        if (b.s_src == s_src) blk = &b;
    CCMASS_CHECK(blk, "oracle_cartier_coords: no such eigenspace");
    for (auto& b : cm.basis) {
        if (b.s == blk->s_src) src = &b;
        if (b.s == blk->s_dst) dst = &b;
    }
    CCMASS_CHECK(src, "oracle_cartier_coords: missing source basis");
    // build q = x^col * G_s with t specialized
    FptPoly G = basis_prefactor(*src, cm.p);
    PolyFq q(t0.k);
    q.c.assign((std::size_t)(col + src->m[0] + src->m[1] + src->m[2]) + 1, FqElem::zero(t0.k));
    for (std::size_t i = 0; i < G.cx.size(); ++i) {
        FqElem v = eval_at(G.cx[i], t0);
        q.c[i + (std::size_t)col] = v;
    }
    q.trim();
    RatDifferential w = RatDifferential::zero(cm.d, t0.k);
    w.add_term(s_src, q, PolyFq::one(t0.k));
    RatDifferential img = oc.apply(w);
    std::vector<FqElem> coords((std::size_t)(dst ? dst->count : 0), FqElem::zero(t0.k));
    if (img.is_zero()) return coords;
    auto itc = img.comp.find(blk->s_dst % cm.d);
    CCMASS_CHECK(itc != img.comp.end(), "oracle image in unexpected eigenspace");
    auto [num, den] = itc->second;
    CCMASS_CHECK(den.deg() == 0, "oracle image has nontrivial denominator");
    PolyFq poly = num.scaled(den.lead().inv());
    // divide by the specialized target prefactor
    CCMASS_CHECK(dst, "oracle image nonzero but target basis empty");
    FptPoly Gd = basis_prefactor(*dst, cm.p);
    PolyFq gd(t0.k);
    gd.c.resize(Gd.cx.size(), FqElem::zero(t0.k));
    for (std::size_t i = 0; i < Gd.cx.size(); ++i) gd.c[i] = eval_at(Gd.cx[i], t0);
    gd.trim();
    auto [quo, rem] = PolyFq::divrem(poly, gd);
    CCMASS_CHECK(rem.is_zero(), "oracle image not divisible by target prefactor");
    CCMASS_CHECK(quo.deg() < (long)coords.size(), "oracle image exceeds target basis");
    for (long i = 0; i <= quo.deg(); ++i) coords[(std::size_t)i] = quo.coeff((std::size_t)i);
    return coords;
}

}  // namespace ccmass
