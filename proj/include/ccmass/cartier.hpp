#pragma once

#include <optional>
#include <vector>

#include "cover.hpp"
#include "fpt_poly.hpp"
#include "poly_fq.hpp"

// Symbolic Cartier-Manin matrices in the family parameter t.  The modified
// Cartier operator C is 1/p-linear, kills exact forms and sends f^{p-1} df
// to df; on y^d = f_t(x) it maps the space of holomorphic forms q(x) dx/y^s
// into the one for s' with p s' = s mod d, and its matrix entries are single
// coefficients of f_t^{e_s} with e_s = (p s' - s)/d.  We keep the entries as
// polynomials in F_p[t] (no p-th roots, no twisting): their determinant is
// the local equation D(t) of the non-ordinary locus along the family.

namespace ccmass {

// Holomorphic forms q(x) dx / y^s for the smooth model of
// y^d = x^{a1} (x-1)^{a2} (x-t)^{a3}: q must vanish to order m_i = floor(s a_i / d)
// at the i-th finite branch point, with degree capped by the place at infinity.
struct DifferentialBasis {
    unsigned s = 0;               // y-exponent
    std::array<long, 3> m{};      // forced vanishing orders at 0, 1, t
    long count = 0;               // dimension; equals f_{d-s} from the signature
    long deg_cap = 0;             // max degree of q overall
    // q_{s,r} = x^r * G_s, G_s = x^{m1} (x-1)^{m2} (x-t)^{m3}, r < count
};

inline DifferentialBasis differential_basis(const InertiaType& it, unsigned s) {
    CCMASS_CHECK(it.n() == 4, "differential_basis: 4-point families only");
    DifferentialBasis b;
    b.s = s;
    unsigned d = it.d;
    long K = 0;
    for (unsigned ai : it.a) K += ai;
    CCMASS_ASSERT(K % d == 0, "differential_basis: inertia sum");
    K /= d;
    for (int i = 0; i < 3; ++i) b.m[i] = (long)(((u64)s * it.a[i]) / d);
    b.deg_cap = (long)s * K - 2 - (long)(((u64)s * it.a[3]) / d);
    long forced = b.m[0] + b.m[1] + b.m[2];
    b.count = b.deg_cap - forced + 1;
    if (b.count < 0) b.count = 0;
    long expected = y_exponent_dims(it)[s];
    CCMASS_ASSERT(b.count == expected, "differential_basis: dimension != signature value");
    return b;
}

inline FptPoly basis_prefactor(const DifferentialBasis& b, u64 p) {
    FptPoly g = FptPoly::x_power(p, (std::size_t)b.m[0]);
    for (long i = 0; i < b.m[1]; ++i) g = g * FptPoly::x_minus(p, 1, 0);
    for (long i = 0; i < b.m[2]; ++i) g = g * FptPoly::x_minus(p, 0, 1);
    return g;
}

struct CartierBlock {
    unsigned s_src = 0, s_dst = 0;
    long e = 0;  // power of f_t feeding the coefficient extraction
    long rows = 0, cols = 0;
    std::vector<std::vector<FpPoly>> a;  // rows x cols, entries in F_p[t]
};

struct CartierMatrix {
    u64 p = 0;
    unsigned d = 0;
    long g = 0;
    std::optional<InertiaType> it;  // present for the superelliptic build
    std::vector<DifferentialBasis> basis;  // per s with count > 0, ascending s
    std::vector<CartierBlock> blocks;      // same order as basis
    bool square = true;  // every block square <=> generically ordinary layout

    long basis_offset(unsigned s) const {
        long off = 0;
        for (auto& b : basis) {
            if (b.s == s) return off;
            off += b.count;
        }
        CCMASS_ASSERT(false, "basis_offset: unknown eigenspace");
        return -1;
    }
};

namespace detail {

// Reduce the raw image coefficients to target-basis coordinates.  The raw
// numbers are the p-th powers of the true 1/p-semilinear entries, so the
// t-dependent part of the target prefactor appears Frobenius-twisted: the
// division is by x^{m1} (x-1)^{m2} (x - t^p)^{m3}, and the quotient is the
// polynomial entry matrix of V : E -> E^{(p)}.
inline FptPoly divide_out(const FptPoly& P0, const DifferentialBasis& b) {
    FptPoly P = P0;
    for (long i = 0; i < b.m[0]; ++i) {
        CCMASS_ASSERT(P.coeff(0).is_zero(), "cartier: image not divisible by x");
        P.cx.erase(P.cx.begin());
    }
    auto div_linear = [](FptPoly& Q, const FpPoly& root) {
        auto quo = PowWindowPlan::divide_by_linear(Q, root);
        CCMASS_ASSERT(quo.has_value(), "cartier: image not in target eigenspace");
        Q = *quo;
    };
    for (long i = 0; i < b.m[1]; ++i) div_linear(P, FpPoly::constant(P.p, 1));
    FpPoly t_to_p = FpPoly::monomial(P.p, (std::size_t)P.p, 1);
    for (long i = 0; i < b.m[2]; ++i) div_linear(P, t_to_p);
    return P;
}

}  // namespace detail

// Symbolic Cartier-Manin matrix of y^d = x^{a1}(x-1)^{a2}(x-t)^{a3}.
// Requires p > d so every twist exponent e_s is nonnegative; smaller p goes
// through the concrete-fiber oracle instead.  With cross_check_full set,
// every windowed coefficient is re-derived from the fully expanded power
// and compared (slow; meant for audits).
inline CartierMatrix cartier_superelliptic_4pt(const InertiaType& it, u64 p,
                                               bool cross_check_full = false) {
    CCMASS_CHECK(it.n() == 4, "cartier_superelliptic_4pt: n = 4 required");
    CCMASS_CHECK(p % it.d != 0, "p divides d");
    CCMASS_CHECK(p > it.d, "p < d: use cartier_oracle");
    CCMASS_CHECK(is_prime_u64(p), "p must be prime");
    CartierMatrix cm;
    cm.p = p;
    cm.d = it.d;
    cm.g = genus(it);
    cm.it = it;
    unsigned d = it.d;
    u64 pinv = inv_mod_general(p % d, d);
    std::vector<long> w = y_exponent_dims(it);
    for (unsigned s = 1; s < d; ++s) {
        if (w[s] == 0) continue;
        cm.basis.push_back(differential_basis(it, s));
    }
    for (auto& src : cm.basis) {
        unsigned s = src.s;
        unsigned s2 = (unsigned)((u64)s * pinv % d);
        CCMASS_ASSERT((u64)p * s2 % d == s % d, "cartier: block wiring broken");
        long e = ((long)p * (long)s2 - (long)s) / (long)d;
        CCMASS_ASSERT(e >= 0 && ((long)p * (long)s2 - (long)s) % (long)d == 0,
                      "cartier: twist exponent not integral");
        DifferentialBasis dst = (w[s2] > 0) ? differential_basis(it, s2) : DifferentialBasis{s2, {}, 0, 0};
        CartierBlock blk;
        blk.s_src = s;
        blk.s_dst = s2;
        blk.e = e;
        blk.cols = src.count;
        blk.rows = dst.count;
        if (blk.rows != blk.cols) cm.square = false;

        // combined exponents: G_s * f^e = x^{A0} (x-1)^{A1} (x-t)^{A2}
        std::array<u64, 3> A;
        for (int i = 0; i < 3; ++i) A[i] = (u64)src.m[i] + (u64)e * it.a[i];
        long degH = (long)(A[0] + A[1] + A[2]);

        // window of H at every needed exponent p*b - 1 - r
        std::vector<long> idx;
        long bmax = (degH + (long)src.count) / (long)p + 1;
        for (long b = 1; b <= bmax; ++b)
            for (long r = 0; r < src.count; ++r) {
                long want = (long)p * b - 1 - r;
                if (want >= 0) idx.push_back(want);
            }
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());

        // hand the factored shape of G_s * f^e straight to the window core;
        // nothing here ever expands the power
        PowWindowPlan plan;
        plan.p = p;
        plan.alpha = (std::size_t)A[0];
        plan.stride = 1;
        plan.roots = {{1, 0}, {0, 1}};
        plan.root_mult = {A[1], A[2]};
        plan.residual = FptPoly::one(p);
        auto window = pow_coeff_window_plan(plan, 1, idx);
        if (cross_check_full) {
            FptPoly H = FptPoly::x_power(p, (std::size_t)A[0]);
            for (u64 i = 0; i < A[1]; ++i) H = H * FptPoly::x_minus(p, 1, 0);
            for (u64 i = 0; i < A[2]; ++i) H = H * FptPoly::x_minus(p, 0, 1);
            for (long want : idx)
                CCMASS_ASSERT(window.at(want) == H.coeff((std::size_t)want),
                              "windowed and full coefficient extraction disagree");
        }

        blk.a.assign((std::size_t)std::max<long>(blk.rows, 0),
                     std::vector<FpPoly>((std::size_t)blk.cols, FpPoly::zero(p)));
        for (long r = 0; r < src.count; ++r) {
            // P_r(x) = sum_b coeff_{x^{p b - 1 - r}}(H) x^{b-1}
            FptPoly P(p);
            for (long b = 1; b <= bmax; ++b) {
                long want = (long)p * b - 1 - r;
                P.cx.resize((std::size_t)b, FpPoly::zero(p));
                P.cx[b - 1] = want >= 0 ? window.at(want) : FpPoly::zero(p);
            }
            P.trim();
            if (blk.rows == 0) {
                CCMASS_ASSERT(P.is_zero(), "cartier: image must vanish when target is empty");
                continue;
            }
            FptPoly Q = detail::divide_out(P, dst);
            CCMASS_ASSERT(Q.deg_x() < blk.rows, "cartier: image exceeds target basis");
            for (long r2 = 0; r2 < blk.rows; ++r2) blk.a[r2][r] = Q.coeff((std::size_t)r2);
        }
        cm.blocks.push_back(std::move(blk));
    }
    return cm;
}

// Yui's matrix for y^2 = f(x, t): single block, entry (i, j) = coefficient of
// x^{p i - j} in f^{(p-1)/2}, 1 <= i, j <= g.
inline CartierMatrix cartier_hyperelliptic(const FptPoly& f, u64 p, long g) {
    CCMASS_CHECK(p != 2, "hyperelliptic Cartier needs odd p");
    CCMASS_CHECK(is_prime_u64(p), "p must be prime");
    long dx = f.deg_x();
    CCMASS_CHECK(dx == 2 * g + 1 || dx == 2 * g + 2, "cartier_hyperelliptic: degree must be 2g+1 or 2g+2");
    // squarefree for generic t: witnessed by any specialization with gcd(f, f') = 1
    {
        bool ok = false;
        for (u64 t0 = 0; t0 < std::min<u64>(p, 64) && !ok; ++t0) {
            FpPoly ft = f.specialize_t(t0);
            if (ft.deg() != dx) continue;
            if (FpPoly::gcd(ft, ft.derivative()).deg() == 0) ok = true;
        }
        CCMASS_CHECK(ok, "cartier_hyperelliptic: no separable specialization found");
    }
    CartierMatrix cm;
    cm.p = p;
    cm.d = 2;
    cm.g = g;
    DifferentialBasis b;
    b.s = 1;
    b.m = {0, 0, 0};
    b.count = g;
    b.deg_cap = g - 1;
    cm.basis.push_back(b);
    CartierBlock blk;
    blk.s_src = blk.s_dst = 1;
    blk.e = (long)(p - 1) / 2;
    blk.rows = blk.cols = g;
    std::vector<long> idx;
    for (long i = 1; i <= g; ++i)
        for (long j = 1; j <= g; ++j) idx.push_back((long)p * i - j);
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    auto window = pow_coeff_window(f, (u64)blk.e, idx);
    blk.a.assign((std::size_t)g, std::vector<FpPoly>((std::size_t)g, FpPoly::zero(p)));
    for (long i = 1; i <= g; ++i)
        for (long j = 1; j <= g; ++j) blk.a[i - 1][j - 1] = window.at((long)p * i - j);
    cm.blocks.push_back(std::move(blk));
    return cm;
}

// determinant of a small matrix over F_p[t] by cofactor expansion
inline FpPoly det_poly_matrix(const std::vector<std::vector<FpPoly>>& m, u64 p) {
    std::size_t n = m.size();
    if (n == 0) return FpPoly::one(p);
    if (n == 1) return m[0][0];
    FpPoly acc = FpPoly::zero(p);
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        std::vector<std::vector<FpPoly>> sub;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<FpPoly> row;
            for (std::size_t l = 0; l < n; ++l)
                if (l != j) row.push_back(m[i][l]);
            sub.push_back(std::move(row));
        }
        FpPoly term = m[0][j] * det_poly_matrix(sub, p);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

// D(t) = product of the block determinants, up to a unit; normalized monic.
// Non-square layout means the family is not generically ordinary and D = 0.
inline std::optional<FpPoly> det_cartier(const CartierMatrix& cm) {
    if (!cm.square) return std::nullopt;
    FpPoly D = FpPoly::one(cm.p);
    for (auto& blk : cm.blocks) {
        FpPoly bd = det_poly_matrix(blk.a, cm.p);
        if (bd.is_zero()) return std::nullopt;  // degenerate along the whole family
        D = D * bd;
    }
    return D.monic();
}

// full g x g matrix over the field of t0, rows/cols in basis order
inline std::vector<std::vector<FqElem>> specialize_cartier(const CartierMatrix& cm,
                                                           const FqElem& t0) {
    long g = 0;
    for (auto& b : cm.basis) g += b.count;
    std::vector<std::vector<FqElem>> M((std::size_t)g,
                                       std::vector<FqElem>((std::size_t)g, FqElem::zero(t0.k)));
    for (auto& blk : cm.blocks) {
        long roff = cm.basis_offset(blk.s_dst);
        long coff = cm.basis_offset(blk.s_src);
        for (long i = 0; i < blk.rows; ++i)
            for (long j = 0; j < blk.cols; ++j)
                M[(std::size_t)(roff + i)][(std::size_t)(coff + j)] = eval_at(blk.a[i][j], t0);
    }
    return M;
}

inline long matrix_rank_fq(std::vector<std::vector<FqElem>> M) {
    if (M.empty()) return 0;
    std::size_t rows = M.size(), cols = M[0].size();
    long rank = 0;
    std::size_t rr = 0;
    for (std::size_t c = 0; c < cols && rr < rows; ++c) {
        std::size_t piv = rr;
        while (piv < rows && M[piv][c].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(M[piv], M[rr]);
        FqElem inv = M[rr][c].inv();
        for (std::size_t j = c; j < cols; ++j) M[rr][j] = M[rr][j] * inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rr || M[i][c].is_zero()) continue;
            FqElem f = M[i][c];
            for (std::size_t j = c; j < cols; ++j) M[i][j] = M[i][j] - f * M[rr][j];
        }
        ++rank;
        ++rr;
    }
    return rank;
}

struct FiberInvariants {
    long a_number = 0;
    long p_rank = 0;
    long alpha = 0;
};

// a = g - rank M(t0);  p-rank = rank of M^{(p^{g-1})} ... M^{(p)} M (the
// 1/p-semilinear iterate in matrix form; the composition order is pinned by
// the supersingularity and IKO cross-checks in the test suite).
inline FiberInvariants fiber_invariants(const CartierMatrix& cm, const FqElem& t0, long alpha) {
    auto M = specialize_cartier(cm, t0);
    FiberInvariants fi;
    fi.alpha = alpha;
    long g = (long)M.size();
    fi.a_number = g - matrix_rank_fq(M);
    auto frob_mat = [](const std::vector<std::vector<FqElem>>& A) {
        auto B = A;
        for (auto& row : B)
            for (auto& v : row) v = v.frob();
        return B;
    };
    auto mat_mul = [](const std::vector<std::vector<FqElem>>& A,
                      const std::vector<std::vector<FqElem>>& B) {
        std::size_t n = A.size();
        std::vector<std::vector<FqElem>> C(n, std::vector<FqElem>(n, FqElem::zero(A[0][0].k)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                if (A[i][k].is_zero()) continue;
                for (std::size_t j = 0; j < n; ++j) C[i][j] = C[i][j] + A[i][k] * B[k][j];
            }
        return C;
    };
    auto P = M;
    auto T = M;
    for (long i = 1; i < g; ++i) {
        T = frob_mat(T);
        P = mat_mul(T, P);
    }
    fi.p_rank = matrix_rank_fq(P);
    CCMASS_ASSERT(fi.p_rank + fi.a_number <= g && fi.p_rank + fi.a_number >= 0,
                  "fiber_invariants: p-rank / a-number out of range");
    return fi;
}

// ---------------------------------------------------------------------------
// Dihedral decomposition for d odd, a = (1, 1, d-1, d-1): the W-model
// Y^2 = W^{2d} + (2-4t) W^d + 1 carries the involution (W, Y) -> (1/W, Y/W^d);
// quotienting by it and by its product with the hyperelliptic involution
// splits Jac X_t as Jac Z_{+1,t} x Jac Z_{-1,t}, where in the invariant
// coordinate u = W + 1/W (so P_n(u) = W^n + W^{-n})
//
//     Z_{e,t} :  v^2 = (u + 2e) (P_d(u) + 2 - 4t).
//
// The invariant function Y (1 + W^{-d}) squares to (P_d + 2)(P_d + 2 - 4t)
// and P_d + 2 = (u + 2) E(u)^2 for odd d, which gives the +1 model after
// absorbing E(u) into v; the -1 model comes from Y (1 - W^{-d}) the same way.
// Point counts confirm #X_t(F_q) = #Z_+ + #Z_- - (q + 1) fiberwise.

inline FpPoly chebyshev_like_P(unsigned n, u64 p) {
    FpPoly p0 = FpPoly::constant(p, 2), p1 = FpPoly(p, {0, 1});
    if (n == 0) return p0;
    FpPoly s = p1;
    for (unsigned i = 2; i <= n; ++i) {
        FpPoly p2 = s * p1 - p0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// returned with t symbolic: an FptPoly in (u, t), t-degree 1
inline FptPoly dihedral_model(unsigned d, u64 p, int epsilon) {
    CCMASS_CHECK(d % 2 == 1, "dihedral_model: d must be odd");
    CCMASS_CHECK(p % 2 == 1 && p % d != 0, "dihedral_model: need p coprime to 2d");
    FpPoly Pd = chebyshev_like_P(d, p);
    u64 two_eps = epsilon > 0 ? 2 % p : neg_mod(2 % p, p);
    FptPoly lin(p);  // u + 2 eps
    lin.cx.push_back(FpPoly::constant(p, two_eps));
    lin.cx.push_back(FpPoly::one(p));
    FptPoly inner(p);  // P_d(u) + 2 - 4t
    for (u64 v : Pd.c) inner.cx.push_back(FpPoly::constant(p, v));
    inner.trim();
    inner.cx[0] = inner.coeff(0) + FpPoly(p, {2 % p, neg_mod(4 % p, p)});
    return lin * inner;
}

// the hyperelliptic W-model of y^d = x(x-1)(x-t)^{d-1}:
// Y^2 = W^{2d} + (2 - 4t) W^d + 1, genus d - 1
inline FptPoly dihedral_w_model(unsigned d, u64 p) {
    CCMASS_CHECK(d % 2 == 1 && d >= 3, "dihedral_w_model: d odd, >= 3");
    FptPoly f(p);
    f.cx.assign(2 * d + 1, FpPoly::zero(p));
    f.cx[0] = FpPoly::one(p);
    f.cx[d] = FpPoly(p, {2 % p, neg_mod(4 % p, p)});
    f.cx[2 * d] = FpPoly::one(p);
    return f;
}

}  // namespace ccmass
