#pragma once

#include <memory>
#include <vector>

#include "fp_poly.hpp"

// Extension fields F_{p^m} presented as F_p[T]/(modulus).  Fields are built
// on whatever irreducible factors the engine encounters; there is no global
// Conway table, and cross-field identifications never happen implicitly --
// comparisons are only legal inside one context.

namespace ccmass {

struct FqCtx;
using FqCtxPtr = std::shared_ptr<const FqCtx>;

struct FqCtx : std::enable_shared_from_this<FqCtx> {
    u64 p;
    FpPoly modulus;  // monic irreducible, degree m; degree 1 (= T) for the prime field
    unsigned m;
    // Frobenius x -> x^p as an F_p-linear map: frob_img[i] = coords of T^(i*p).
    // frobinv_img is its (m-1)-st power, i.e. x -> x^(1/p).
    std::vector<std::vector<u64>> frob_img, frobinv_img;

    static FqCtxPtr make(u64 p, FpPoly modulus) {
        CCMASS_CHECK(is_prime_u64(p), "FqCtx: p must be prime");
        CCMASS_CHECK(!modulus.is_zero() && modulus.deg() >= 1, "FqCtx: bad modulus");
        auto ctx = std::make_shared<FqCtx>();
        ctx->p = p;
        ctx->modulus = modulus.monic();
        ctx->m = (unsigned)modulus.deg();
        ctx->build_frobenius();
        return ctx;
    }

    static FqCtxPtr prime_field(u64 p) { return make(p, FpPoly(p, {0, 1})); }

    void build_frobenius() {
        frob_img.assign(m, std::vector<u64>(m, 0));
        FpPoly tp = FpPoly::powmod(FpPoly(p, {0, 1}), p, modulus);  // T^p
        FpPoly cur = FpPoly::one(p);
        for (unsigned i = 0; i < m; ++i) {
            for (unsigned j = 0; j < m; ++j) frob_img[i][j] = cur.coeff(j);
            cur = (cur * tp) % modulus;
        }
        // frobinv = frob^(m-1) by repeated squaring of the matrix
        frobinv_img = mat_identity();
        auto base = frob_img;
        unsigned e = m - 1;
        while (e) {
            if (e & 1) frobinv_img = mat_mul(frobinv_img, base);
            base = mat_mul(base, base);
            e >>= 1;
        }
    }

    std::vector<std::vector<u64>> mat_identity() const {
        std::vector<std::vector<u64>> id(m, std::vector<u64>(m, 0));
        for (unsigned i = 0; i < m; ++i) id[i][i] = 1;
        return id;
    }
    std::vector<std::vector<u64>> mat_mul(const std::vector<std::vector<u64>>& a,
                                          const std::vector<std::vector<u64>>& b) const {
        std::vector<std::vector<u64>> r(m, std::vector<u64>(m, 0));
        for (unsigned i = 0; i < m; ++i)
            for (unsigned k = 0; k < m; ++k) {
                if (a[i][k] == 0) continue;
                for (unsigned j = 0; j < m; ++j)
                    r[i][j] = (u64)(((u128)a[i][k] * b[k][j] + r[i][j]) % p);
            }
        return r;
    }

    u64 order_u64() const {
        u128 q = 1;
        for (unsigned i = 0; i < m; ++i) {
            q *= p;
            CCMASS_CHECK(q <= UINT64_MAX, "FqCtx: field too large to enumerate");
        }
        return (u64)q;
    }
};

struct FqElem {
    FqCtxPtr k;
    std::vector<u64> c;  // length m

    FqElem() = default;
    FqElem(FqCtxPtr ctx, std::vector<u64> coords) : k(std::move(ctx)), c(std::move(coords)) {
        c.resize(k->m, 0);
        for (auto& v : c) v %= k->p;
    }

    static FqElem from_uint(const FqCtxPtr& ctx, u64 v) {
        std::vector<u64> c(ctx->m, 0);
        c[0] = v % ctx->p;
        return FqElem(ctx, std::move(c));
    }
    static FqElem zero(const FqCtxPtr& ctx) { return from_uint(ctx, 0); }
    static FqElem one(const FqCtxPtr& ctx) { return from_uint(ctx, 1); }
    // the class of T, a root of the modulus
    static FqElem gen(const FqCtxPtr& ctx) {
        std::vector<u64> c(ctx->m, 0);
        if (ctx->m == 1)
            c[0] = neg_mod(ctx->modulus.coeff(0), ctx->p);  // T = -a0 mod (T + a0)
        else
            c[1] = 1;
        return FqElem(ctx, std::move(c));
    }

    bool is_zero() const {
        for (u64 v : c)
            if (v) return false;
        return true;
    }

    bool same_field(const FqElem& o) const {
        return k == o.k || (k->p == o.k->p && k->modulus == o.k->modulus);
    }

    bool operator==(const FqElem& o) const {
        CCMASS_ASSERT(same_field(o), "FqElem: comparing across fields");
        return c == o.c;
    }
    bool operator!=(const FqElem& o) const { return !(*this == o); }

    FqElem operator+(const FqElem& o) const {
        CCMASS_ASSERT(same_field(o), "FqElem: mixed fields");
        FqElem r = *this;
        for (unsigned i = 0; i < k->m; ++i) r.c[i] = add_mod(r.c[i], o.c[i], k->p);
        return r;
    }
    FqElem operator-(const FqElem& o) const {
        CCMASS_ASSERT(same_field(o), "FqElem: mixed fields");
        FqElem r = *this;
        for (unsigned i = 0; i < k->m; ++i) r.c[i] = sub_mod(r.c[i], o.c[i], k->p);
        return r;
    }
    FqElem operator-() const {
        FqElem r = *this;
        for (auto& v : r.c) v = neg_mod(v, k->p);
        return r;
    }

    FqElem operator*(const FqElem& o) const {
        CCMASS_ASSERT(same_field(o), "FqElem: mixed fields");
        FpPoly a(k->p, c), b(k->p, o.c);
        FpPoly prod = (a * b) % k->modulus;
        std::vector<u64> rc(k->m, 0);
        for (unsigned i = 0; i < k->m; ++i) rc[i] = prod.coeff(i);
        return FqElem(k, std::move(rc));
    }

    FqElem inv() const {
        CCMASS_CHECK(!is_zero(), "FqElem: inverse of zero");
        // extended Euclid on (elem, modulus)
        FpPoly r0 = k->modulus, r1 = FpPoly(k->p, c);
        FpPoly s0 = FpPoly::zero(k->p), s1 = FpPoly::one(k->p);
        while (!r1.is_zero()) {
            auto [q, r2] = FpPoly::divrem(r0, r1);
            FpPoly s2 = s0 - q * s1;
            r0 = r1;
            r1 = r2;
            s0 = s1;
            s1 = s2;
        }
        CCMASS_ASSERT(r0.deg() == 0, "FqElem: modulus not irreducible?");
        FpPoly out = s0.scaled(inv_mod(r0.coeff(0), k->p)) % k->modulus;
        std::vector<u64> rc(k->m, 0);
        for (unsigned i = 0; i < k->m; ++i) rc[i] = out.coeff(i);
        return FqElem(k, std::move(rc));
    }

    FqElem pow(u64 e) const {
        FqElem r = one(k), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    // x -> x^p via the precomputed linear map
    FqElem frob() const { return apply_mat(k->frob_img); }
    // x -> x^(1/p) (inverse of Frobenius; always defined on a finite field)
    FqElem frob_inv() const { return apply_mat(k->frobinv_img); }
    FqElem frob_pow(unsigned e) const {
        FqElem r = *this;
        for (unsigned i = 0; i < e % k->m; ++i) r = r.frob();
        return r;
    }

    FqElem apply_mat(const std::vector<std::vector<u64>>& img) const {
        std::vector<u64> rc(k->m, 0);
        for (unsigned i = 0; i < k->m; ++i) {
            if (c[i] == 0) continue;
            for (unsigned j = 0; j < k->m; ++j)
                rc[j] = (u64)(((u128)c[i] * img[i][j] + rc[j]) % k->p);
        }
        return FqElem(k, std::move(rc));
    }

    // lexicographic on coordinate vectors; ties broken nowhere else
    static bool lex_less(const FqElem& a, const FqElem& b) {
        for (unsigned i = 0; i < a.k->m; ++i)
            if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
        return false;
    }

    std::string str() const { return FpPoly(k->p, c).str("T"); }
};

// Horner evaluation of an F_p[t] polynomial at an extension element.
inline FqElem eval_at(const FpPoly& f, const FqElem& x) {
    FqElem r = FqElem::zero(x.k);
    for (std::size_t i = f.c.size(); i-- > 0;) r = r * x + FqElem::from_uint(x.k, f.c[i]);
    return r;
}

// All elements of F_q in coordinate-lexicographic order (small fields only).
inline std::vector<FqElem> enumerate_field(const FqCtxPtr& ctx) {
    u64 q = ctx->order_u64();
    CCMASS_CHECK(q <= (1u << 22), "enumerate_field: field too large");
    std::vector<FqElem> out;
    out.reserve(q);
    std::vector<u64> cur(ctx->m, 0);
    for (u64 i = 0; i < q; ++i) {
        out.emplace_back(ctx, cur);
        for (unsigned j = 0; j < ctx->m; ++j) {
            if (++cur[j] < ctx->p) break;
            cur[j] = 0;
        }
    }
    return out;
}

}  // namespace ccmass
