#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "fp_poly.hpp"
#include "fq.hpp"

// Polynomials in x whose coefficients live in F_p[t], stored as a dense grid.
// Cartier entries are single coefficients of f_t(x)^N; the windowed extractor
// below computes exactly the requested ones without expanding the power, and
// a full-expansion mode exists as an independent cross-check.

namespace ccmass {

struct FptPoly {
    u64 p = 0;
    std::vector<FpPoly> cx;  // cx[i] = coefficient of x^i, an element of F_p[t]

    FptPoly() = default;
    explicit FptPoly(u64 p_) : p(p_) {}

    static FptPoly zero(u64 p) { return FptPoly(p); }
    static FptPoly one(u64 p) {
        FptPoly r(p);
        r.cx.push_back(FpPoly::one(p));
        return r;
    }
    static FptPoly from_t_poly(const FpPoly& f) {
        FptPoly r(f.p);
        r.cx.push_back(f);
        return r;
    }
    // x - (g + d*t); covers x, x-1, x-t and friends
    static FptPoly x_minus(u64 p, u64 gamma, u64 delta) {
        FptPoly r(p);
        FpPoly c0(p, {neg_mod(gamma % p, p), neg_mod(delta % p, p)});
        r.cx.push_back(c0);
        r.cx.push_back(FpPoly::one(p));
        return r;
    }
    static FptPoly x_power(u64 p, std::size_t k) {
        FptPoly r(p);
        r.cx.assign(k + 1, FpPoly::zero(p));
        r.cx[k] = FpPoly::one(p);
        return r;
    }

    void trim() {
        while (!cx.empty() && cx.back().is_zero()) cx.pop_back();
    }
    bool is_zero() const {
        for (auto& f : cx)
            if (!f.is_zero()) return false;
        return true;
    }
    long deg_x() const {
        for (std::size_t i = cx.size(); i-- > 0;)
            if (!cx[i].is_zero()) return (long)i;
        return -1;
    }
    long deg_t() const {
        long d = -1;
        for (auto& f : cx) d = std::max(d, f.deg());
        return d;
    }
    FpPoly coeff(std::size_t i) const { return i < cx.size() ? cx[i] : FpPoly::zero(p); }

    bool operator==(const FptPoly& o) const {
        std::size_t n = std::max(cx.size(), o.cx.size());
        for (std::size_t i = 0; i < n; ++i)
            if (coeff(i) != o.coeff(i)) return false;
        return p == o.p;
    }

    FptPoly operator+(const FptPoly& o) const {
        FptPoly r(p);
        r.cx.resize(std::max(cx.size(), o.cx.size()), FpPoly::zero(p));
        for (std::size_t i = 0; i < r.cx.size(); ++i) r.cx[i] = coeff(i) + o.coeff(i);
        r.trim();
        return r;
    }
    FptPoly operator-(const FptPoly& o) const {
        FptPoly r(p);
        r.cx.resize(std::max(cx.size(), o.cx.size()), FpPoly::zero(p));
        for (std::size_t i = 0; i < r.cx.size(); ++i) r.cx[i] = coeff(i) - o.coeff(i);
        r.trim();
        return r;
    }
    FptPoly operator*(const FptPoly& o) const {
        if (is_zero() || o.is_zero()) return FptPoly(p);
        FptPoly r(p);
        r.cx.assign(cx.size() + o.cx.size() - 1, FpPoly::zero(p));
        for (std::size_t i = 0; i < cx.size(); ++i) {
            if (cx[i].is_zero()) continue;
            for (std::size_t j = 0; j < o.cx.size(); ++j) {
                if (o.cx[j].is_zero()) continue;
                r.cx[i + j] = r.cx[i + j] + cx[i] * o.cx[j];
            }
        }
        r.trim();
        return r;
    }

    FptPoly pow_full(u64 e) const {
        FptPoly r = one(p), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    // specialize t -> t0 in F_p, leaving a polynomial in x
    FpPoly specialize_t(u64 t0) const {
        FpPoly r(p);
        r.c.resize(cx.size());
        for (std::size_t i = 0; i < cx.size(); ++i) r.c[i] = cx[i].eval(t0);
        r.trim();
        return r;
    }

    // specialize t at an extension element, leaving a polynomial in x over F_q
    template <class PolyOverFq, class Elem>
    PolyOverFq specialize_t_ext(const Elem& t0) const {
        PolyOverFq r(t0.k);
        r.c.reserve(cx.size());
        for (auto& ci : cx) r.c.push_back(eval_at(ci, t0));
        r.trim();
        return r;
    }

    std::string str(const std::string& xv = "x", const std::string& tv = "t") const {
        if (is_zero()) return "0";
        std::string s;
        for (std::size_t i = 0; i < cx.size(); ++i) {
            if (cx[i].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += "(" + cx[i].str(tv) + ")";
            if (i == 1) s += "*" + xv;
            if (i > 1) s += "*" + xv + "^" + std::to_string(i);
        }
        return s;
    }
};

namespace detail {

// Binomial coefficients mod p by Lucas' theorem; tops run up to mult * N.
struct BinomModP {
    u64 p;
    std::vector<u64> fact, ifact;
    explicit BinomModP(u64 p_) : p(p_), fact(p_), ifact(p_) {
        fact[0] = 1;
        for (u64 i = 1; i < p; ++i) fact[i] = mul_mod(fact[i - 1], i, p);
        ifact[p - 1] = inv_mod(fact[p - 1], p);
        for (u64 i = p - 1; i > 0; --i) ifact[i - 1] = mul_mod(ifact[i], i, p);
    }
    u64 small(u64 n, u64 k) const {
        if (k > n) return 0;
        return mul_mod(fact[n], mul_mod(ifact[k], ifact[n - k], p), p);
    }
    u64 operator()(u64 n, u64 k) const {
        u64 r = 1;
        while (n || k) {
            u64 nd = n % p, kd = k % p;
            if (kd > nd) return 0;
            r = mul_mod(r, small(nd, kd), p);
            n /= p;
            k /= p;
        }
        return r;
    }
};

// One factor (z - (gamma + delta t))^E in the windowed convolution.
struct LinFactor {
    u64 gamma, delta;
    u64 E;
};

}  // namespace detail

// Structured view of f as unit * x^alpha * prod (z - c_i(t))^{m_i} * R(z),
// z = x^stride, where R has no roots linear in t.  Every family in this
// project reduces to linear factors plus at worst a quadratic R.
struct PowWindowPlan {
    u64 p = 0;
    std::size_t alpha = 0;    // x-content exponent
    std::size_t stride = 1;   // z = x^stride
    std::vector<std::pair<u64, u64>> roots;       // (gamma, delta): z = gamma + delta*t, with multiplicity
    std::vector<u64> root_mult;
    FptPoly residual;         // in z; whatever is left after peeling t-linear roots

    static PowWindowPlan analyze(const FptPoly& f) {
        CCMASS_CHECK(!f.is_zero(), "pow window: zero polynomial");
        PowWindowPlan plan;
        plan.p = f.p;
        // x-content
        std::size_t a = 0;
        while (f.coeff(a).is_zero()) ++a;
        plan.alpha = a;
        // stride = gcd of remaining exponent offsets
        std::size_t g = 0;
        for (std::size_t i = a; i < f.cx.size(); ++i)
            if (!f.cx[i].is_zero()) g = (std::size_t)gcd_u64(g, i - a);
        if (g == 0) g = 1;
        plan.stride = g;
        FptPoly F(f.p);
        for (std::size_t i = a; i < f.cx.size(); i += g) F.cx.push_back(f.coeff(i));
        F.trim();
        // peel off roots of the form gamma + delta*t by exhaustive scan
        u64 p = f.p;
        bool progress = true;
        while (F.deg_x() >= 1 && progress) {
            progress = false;
            for (u64 delta = 0; delta < p && !progress; ++delta) {
                for (u64 gamma = 0; gamma < p && !progress; ++gamma) {
                    FpPoly root(p, {gamma, delta});
                    if (!eval_x_at_tpoly(F, root).is_zero()) continue;
                    u64 mult = 0;
                    while (true) {
                        auto quo = divide_by_linear(F, root);
                        if (!quo) break;
                        F = *quo;
                        ++mult;
                        if (F.deg_x() < 1) break;
                    }
                    plan.roots.emplace_back(gamma, delta);
                    plan.root_mult.push_back(mult);
                    progress = true;
                }
            }
        }
        plan.residual = F;
        return plan;
    }

    static FpPoly eval_x_at_tpoly(const FptPoly& F, const FpPoly& v) {
        FpPoly r = FpPoly::zero(F.p);
        for (std::size_t i = F.cx.size(); i-- > 0;) r = r * v + F.coeff(i);
        return r;
    }

    // exact division by (z - v); returns nothing if the remainder is nonzero
    static std::optional<FptPoly> divide_by_linear(const FptPoly& F, const FpPoly& v) {
        FptPoly q(F.p);
        long d = F.deg_x();
        if (d < 1) return std::nullopt;
        q.cx.assign(d, FpPoly::zero(F.p));
        FpPoly carry = FpPoly::zero(F.p);
        for (long i = d; i >= 1; --i) {
            carry = F.coeff(i) + carry;
            q.cx[i - 1] = carry;
            carry = carry * v;
        }
        if (!(F.coeff(0) + carry).is_zero()) return std::nullopt;
        q.trim();
        return q;
    }
};

// Exactly the requested x-coefficients of (plan)^N, working from the factored
// shape: linear-in-t factors contribute closed-form binomial terms, and only
// the structureless residual (degree <= 2 in z for every family here) is
// expanded, in its compressed variable.
inline std::map<long, FpPoly> pow_coeff_window_plan(const PowWindowPlan& plan, u64 N,
                                                    const std::vector<long>& indices) {
    u64 p = plan.p;
    std::map<long, FpPoly> out;
    if (N == 0) {
        for (long idx : indices) out[idx] = (idx == 0) ? FpPoly::one(p) : FpPoly::zero(p);
        return out;
    }
    detail::BinomModP binom(p);

    FptPoly resN = plan.residual.pow_full(N);

    std::vector<detail::LinFactor> lins;
    for (std::size_t i = 0; i < plan.roots.size(); ++i)
        lins.push_back({plan.roots[i].first, plan.roots[i].second, plan.root_mult[i] * N});

    // coefficient of z^j in (z - (gamma + delta t))^E
    auto lin_term = [&](const detail::LinFactor& lf, u64 j) -> FpPoly {
        if (j > lf.E) return FpPoly::zero(p);
        u64 b = binom(lf.E, j);
        if (b == 0) return FpPoly::zero(p);
        u64 e = lf.E - j;
        if (lf.delta == 0) {
            u64 v = mul_mod(b, pow_mod(neg_mod(lf.gamma, p), e, p), p);
            return FpPoly::constant(p, v);
        }
        if (lf.gamma == 0) {
            u64 v = mul_mod(b, pow_mod(neg_mod(lf.delta, p), e, p), p);
            return FpPoly::monomial(p, e, v);
        }
        // general (-(gamma + delta t))^e, expanded binomially
        FpPoly r(p);
        r.c.assign(e + 1, 0);
        u64 sign = (e & 1) ? p - 1 : 1;
        for (u64 l = 0; l <= e; ++l) {
            u64 term = mul_mod(binom(e, l), mul_mod(pow_mod(lf.gamma, e - l, p), pow_mod(lf.delta, l, p), p), p);
            r.c[l] = mul_mod(term, sign, p);
        }
        r.trim();
        return r.scaled(b);
    };

    // recursive convolution over the linear factors, then the residual power
    std::vector<u64> maxdeg(lins.size() + 1, 0);
    {
        u64 acc = (u64)std::max<long>(resN.deg_x(), 0);
        maxdeg[lins.size()] = acc;
        for (std::size_t i = lins.size(); i-- > 0;) {
            acc += lins[i].E;
            maxdeg[i] = acc;
        }
    }

    std::map<std::pair<std::size_t, long>, FpPoly> memo;
    std::function<FpPoly(std::size_t, long)> conv = [&](std::size_t i, long m) -> FpPoly {
        if (m < 0) return FpPoly::zero(p);
        if (i == lins.size()) return resN.coeff((std::size_t)m);
        if ((u64)m > maxdeg[i]) return FpPoly::zero(p);
        auto key = std::make_pair(i, m);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        FpPoly acc = FpPoly::zero(p);
        u64 hi = std::min<u64>(lins[i].E, (u64)m);
        for (u64 j = 0; j <= hi; ++j) {
            FpPoly t1 = lin_term(lins[i], j);
            if (t1.is_zero()) continue;
            FpPoly rest = conv(i + 1, m - (long)j);
            if (rest.is_zero()) continue;
            acc = acc + t1 * rest;
        }
        memo.emplace(key, acc);
        return acc;
    };

    for (long idx : indices) {
        FpPoly val = FpPoly::zero(p);
        long off = idx - (long)(plan.alpha * N);
        if (off >= 0 && off % (long)plan.stride == 0) val = conv(0, off / (long)plan.stride);
        out[idx] = val;
    }
    return out;
}

// Requested x-coefficients of f^N; structure discovery plus the plan core.
// A full-expansion mode (pow_full) exists as an independent cross-check.
inline std::map<long, FpPoly> pow_coeff_window(const FptPoly& f, u64 N,
                                               const std::vector<long>& indices) {
    CCMASS_CHECK(!f.is_zero(), "pow_coeff_window: zero polynomial");
    return pow_coeff_window_plan(PowWindowPlan::analyze(f), N, indices);
}

}  // namespace ccmass
