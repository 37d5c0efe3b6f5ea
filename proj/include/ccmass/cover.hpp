#pragma once

#include <array>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fq.hpp"
#include "rational.hpp"

// Discrete invariants of mu_d-cover families: genus, signature, the moduli
// degree delta_{d,a}, fiber automorphisms Aut(X_t, tau), and grouping of
// parameter values into isomorphism classes of covers.

namespace ccmass {

struct InertiaType {
    unsigned d = 0;
    std::vector<unsigned> a;

    InertiaType() = default;
    InertiaType(unsigned d_, std::vector<unsigned> a_) : d(d_), a(std::move(a_)) { validate(); }

    unsigned n() const { return (unsigned)a.size(); }

    void validate() const {
        CCMASS_CHECK(d >= 2, "inertia type: d >= 2 required");
        CCMASS_CHECK(a.size() >= 4, "inertia type: need n >= 4 branch points");
        unsigned sum = 0, g = 0;
        for (unsigned ai : a) {
            CCMASS_CHECK(ai > 0 && ai < d, "inertia type: entries must satisfy 0 < a_i < d");
            sum = (sum + ai) % d;
            g = (unsigned)std::gcd(g, ai);
        }
        CCMASS_CHECK(sum % d == 0, "inertia type: sum of entries must be 0 mod d");
        CCMASS_CHECK(std::gcd(g, d) == 1, "inertia type: gcd(a_1,...,a_n) must be 1");
    }

    // CLI string form "d:a1,a2,...,an"
    static InertiaType parse(const std::string& s) {
        auto colon = s.find(':');
        CCMASS_CHECK(colon != std::string::npos, "inertia spec: expected \"d:a1,a2,...\"");
        unsigned d = (unsigned)std::stoul(s.substr(0, colon));
        std::vector<unsigned> a;
        std::stringstream ss(s.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) a.push_back((unsigned)std::stoul(item));
        return InertiaType(d, std::move(a));
    }

    std::string str() const {
        std::string s = std::to_string(d) + ":";
        for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
        return s;
    }

    // minimal representative under simultaneous unit scaling and label
    // sorting; used for caching and table lookups only
    std::vector<unsigned> canonical_key() const {
        std::vector<unsigned> best;
        for (unsigned l = 1; l < d; ++l) {
            if (std::gcd(l, d) != 1) continue;
            std::vector<unsigned> cand;
            for (unsigned ai : a) cand.push_back((unsigned)((u64)ai * l % d));
            std::sort(cand.begin(), cand.end());
            if (best.empty() || cand < best) best = cand;
        }
        return best;
    }
};

// Riemann-Hurwitz: g = 1 - d + (1/2) sum (d - gcd(d, a_i)).
inline long genus(const InertiaType& it) {
    long acc = 0;
    for (unsigned ai : it.a) acc += (long)it.d - (long)std::gcd(it.d, ai);
    CCMASS_ASSERT(acc % 2 == 0, "genus: ramification sum must be even");
    long g = 1 - (long)it.d + acc / 2;
    CCMASS_ASSERT(g >= 0, "genus: negative genus");
    return g;
}

// f_j = -1 + sum_i <-j a_i / d> for 1 <= j <= d-1, with <x> the fractional part.
inline std::vector<long> signature(const InertiaType& it) {
    std::vector<long> f(it.d, 0);  // index 0 unused
    for (unsigned j = 1; j < it.d; ++j) {
        long num = -1;  // accumulate in units of 1/d
        long acc = 0;
        for (unsigned ai : it.a) acc += (long)(((u64)(it.d - (u64)j * ai % it.d)) % it.d);
        CCMASS_ASSERT(acc % it.d == 0, "signature: non-integral dimension");
        f[j] = num + acc / (long)it.d;
        CCMASS_ASSERT(f[j] >= 0, "signature: negative eigenspace dimension");
    }
    long sum = std::accumulate(f.begin(), f.end(), 0l);
    CCMASS_ASSERT(sum == genus(it), "signature: sum f_j != genus");
    return f;
}

// Dimension of the space of holomorphic forms q(x) dx / y^s.  The mu_d
// action sends dx/y^s to the eigenvalue zeta^{-s}, so this space is the
// signature eigenspace at index d - s; both indexings appear below and the
// conversion is kept in this one place.
inline std::vector<long> y_exponent_dims(const InertiaType& it) {
    std::vector<long> f = signature(it);
    std::vector<long> w(it.d, 0);
    for (unsigned s = 1; s < it.d; ++s) w[s] = f[it.d - s];
    return w;
}

// Bouw's criterion for a 4-point family: the generic fiber is ordinary iff
// the signature is constant on every orbit of j -> p*j mod d.
inline bool generically_ordinary_4pt(const InertiaType& it, u64 p) {
    CCMASS_CHECK(it.n() == 4, "generically_ordinary_4pt: n = 4 required");
    CCMASS_CHECK(p % it.d != 0, "p divides d");
    std::vector<long> f = signature(it);
    std::vector<bool> seen(it.d, false);
    for (unsigned j = 1; j < it.d; ++j) {
        if (seen[j]) continue;
        unsigned k = j;
        long dim = f[j];
        do {
            seen[k] = true;
            if (f[k] != dim) return false;
            k = (unsigned)((u64)k * p % it.d);
        } while (k != j);
    }
    return true;
}

struct CompatPair {
    unsigned ell;              // unit mod d
    std::vector<unsigned> sigma;  // permutation of {0..n-1}, sigma[i] = image of label i
};

struct CompatibilitySet {
    unsigned d = 0;
    std::vector<CompatPair> elems;
    std::size_t size() const { return elems.size(); }
};

// (sigma a)_i = a_{sigma^{-1}(i)}
inline std::vector<unsigned> permute_tuple(const std::vector<unsigned>& a,
                                           const std::vector<unsigned>& sigma) {
    std::vector<unsigned> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[sigma[i]] = a[i];
    return out;
}

// Raw enumeration of {(ell, sigma) : sigma(a) = ell^{-1} a}, optionally
// restricted to sigmas fixing one label.  No genus-1 defaulting here.
inline CompatibilitySet compatibility_set(const InertiaType& it,
                                          std::optional<unsigned> marked_label = {}) {
    CompatibilitySet set;
    set.d = it.d;
    unsigned n = it.n();
    std::vector<unsigned> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::vector<std::vector<unsigned>> scaled;  // ell -> ell^{-1} a
    std::vector<unsigned> units;
    for (unsigned l = 1; l < it.d; ++l) {
        if (std::gcd(l, it.d) != 1) continue;
        unsigned linv = (unsigned)inv_mod_general(l, it.d);
        std::vector<unsigned> la;
        for (unsigned ai : it.a) la.push_back((unsigned)((u64)ai * linv % it.d));
        units.push_back(l);
        scaled.push_back(std::move(la));
    }
    do {
        if (marked_label && sigma[*marked_label - 1] != *marked_label - 1) continue;
        std::vector<unsigned> sa = permute_tuple(it.a, sigma);
        for (std::size_t ui = 0; ui < units.size(); ++ui) {
            if (sa == scaled[ui]) set.elems.push_back({units[ui], sigma});
        }
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return set;
}

// delta_{d,a} = #S_{d,a}, valid for genus >= 2.  For genus 1 the counting
// convention is that sigma must fix the marked branch label (Legendre: one
// ramification point is the origin of the elliptic curve, leaving the 3!
// labelings of the other three).
inline std::pair<long, CompatibilitySet> delta_degree(const InertiaType& it,
                                                      std::optional<unsigned> marked_label = {}) {
    if (genus(it) == 1 && !marked_label) marked_label = it.n();
    CompatibilitySet set = compatibility_set(it, marked_label);
    return {(long)set.elems.size(), set};
}

// ---------------------------------------------------------------------------
// Moebius transformations on P^1(F_q), with infinity as (1 : 0).

struct ProjPt {
    FqElem x, z;

    static ProjPt finite(const FqElem& v) { return {v, FqElem::one(v.k)}; }
    static ProjPt infinity(const FqCtxPtr& k) { return {FqElem::one(k), FqElem::zero(k)}; }
    bool is_infinity() const { return z.is_zero(); }

    // scale so z = 1, or x = 1 at infinity
    ProjPt normalized() const {
        if (z.is_zero()) return {FqElem::one(x.k), FqElem::zero(x.k)};
        FqElem zi = z.inv();
        return {x * zi, FqElem::one(x.k)};
    }
    bool operator==(const ProjPt& o) const {
        // cross-multiplied equality, no normalization needed
        return (x * o.z) == (o.x * z);
    }
};

struct Mobius {
    FqElem a, b, c, d;  // x -> (a x + b) / (c x + d)

    ProjPt apply(const ProjPt& pt) const {
        return ProjPt{a * pt.x + b * pt.z, c * pt.x + d * pt.z};
    }
    FqElem det() const { return a * d - b * c; }
    bool is_identity() const { return b.is_zero() && c.is_zero() && a == d; }

    Mobius compose(const Mobius& o) const {  // this after o
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mobius inverse() const { return {d, -b, -c, a}; }
};

// the unique map sending (p1, p2, p3) to (0, 1, oo)
inline Mobius mobius_to_standard(const ProjPt& p1, const ProjPt& p2, const ProjPt& p3) {
    // rows of [(x z1' - x1 z ... )] expressed projectively:
    // x -> ((x - p1)(p2 - p3)) / ((x - p3)(p2 - p1)), with limits at infinity
    const FqCtxPtr& k = p1.x.k;
    auto cross = [](const ProjPt& u, const ProjPt& v) { return u.x * v.z - v.x * u.z; };
    FqElem n1 = cross(p2, p3), n2 = cross(p2, p1);
    // a x + b = (x z1 - x1 z) * n1 ; c x + d = (x z3 - x3 z) * n2
    Mobius m{p1.z * n1, -(p1.x * n1), p3.z * n2, -(p3.x * n2)};
    CCMASS_ASSERT(!m.det().is_zero(), "mobius_to_standard: collinear points");
    (void)k;
    return m;
}

inline Mobius mobius_through(const std::array<ProjPt, 3>& src, const std::array<ProjPt, 3>& dst) {
    Mobius s = mobius_to_standard(src[0], src[1], src[2]);
    Mobius t = mobius_to_standard(dst[0], dst[1], dst[2]);
    return t.inverse().compose(s);
}

// ---------------------------------------------------------------------------
// Four-point machinery.  Branch points carry labels 1..4 <-> (0, 1, t, oo);
// the curve is y^d = x^{a1} (x-1)^{a2} (x-t)^{a3} with a4 sitting at infinity.

inline std::array<ProjPt, 4> four_points(const FqElem& t) {
    const FqCtxPtr& k = t.k;
    return {ProjPt::finite(FqElem::zero(k)), ProjPt::finite(FqElem::one(k)),
            ProjPt::finite(t), ProjPt::infinity(k)};
}

// all sigma in S_4 admitting some ell with sigma(a) = ell^{-1} a
inline std::vector<std::vector<unsigned>> compatible_sigmas_4pt(const InertiaType& it) {
    CCMASS_CHECK(it.n() == 4, "compatible_sigmas_4pt: n = 4 required");
    std::vector<std::vector<unsigned>> out;
    CompatibilitySet set = compatibility_set(it);
    // dedupe sigmas (ell is unique per sigma when gcd(a) = 1, but be safe)
    for (auto& e : set.elems) {
        if (std::find(out.begin(), out.end(), e.sigma) == out.end()) out.push_back(e.sigma);
    }
    return out;
}

// Given sigma and t, the unique Moebius map nu with nu(P_i) = Q_{sigma(i)}
// where P = Q = (0, 1, t', oo); returns (nu, t').  The three labels hitting
// {0, 1, oo} pin nu down and the fourth determines t'.
inline std::pair<Mobius, FqElem> relabel_map(const std::vector<unsigned>& sigma, const FqElem& t) {
    auto pts = four_points(t);
    const FqCtxPtr& k = t.k;
    std::array<ProjPt, 3> src, dst;
    std::size_t nfixed = 0;
    unsigned moving_src = 0;
    std::array<ProjPt, 3> std_pts = {ProjPt::finite(FqElem::zero(k)),
                                     ProjPt::finite(FqElem::one(k)), ProjPt::infinity(k)};
    for (unsigned i = 0; i < 4; ++i) {
        unsigned tgt = sigma[i];
        if (tgt == 2) {  // lands on the parameter slot
            moving_src = i;
            continue;
        }
        unsigned slot = tgt == 3 ? 2 : tgt;  // 0,1,oo slots
        src[nfixed] = pts[i];
        dst[nfixed] = std_pts[slot];
        ++nfixed;
    }
    CCMASS_ASSERT(nfixed == 3, "relabel_map: bad permutation");
    Mobius nu = mobius_through(src, dst);
    ProjPt image = nu.apply(pts[moving_src]).normalized();
    CCMASS_CHECK(!image.is_infinity(), "relabel_map: degenerate parameter image");
    return {nu, image.x};
}

struct FiberSymmetry {
    FqElem t;
    std::vector<std::pair<std::vector<unsigned>, unsigned>> stabilizer;  // (sigma, ell)
    long aut_order = 0;
    std::optional<unsigned> marked_label;
};

// #Aut(X_t, tau) = d * #{compatible nu stabilizing {0,1,oo,t}}.  Enumerating
// all 24 relabelings with exact field arithmetic picks up every special
// configuration (harmonic, equianharmonic, and the small-p collisions such
// as t = -1 at p = 3) without a characteristic-zero case split.
inline FiberSymmetry aut_order_4pt(const InertiaType& it, const FqElem& t,
                                   std::optional<unsigned> marked_label = {}) {
    CCMASS_CHECK(!t.is_zero() && t != FqElem::one(t.k), "degenerate fiber");
    FiberSymmetry fs;
    fs.t = t;
    if (genus(it) == 1 && !marked_label) marked_label = 4;
    fs.marked_label = marked_label;
    CompatibilitySet set = compatibility_set(it);
    std::vector<std::vector<unsigned>> seen;
    for (auto& e : set.elems) {
        if (marked_label && e.sigma[*marked_label - 1] != *marked_label - 1) continue;
        if (std::find(seen.begin(), seen.end(), e.sigma) != seen.end()) continue;
        auto [nu, t2] = relabel_map(e.sigma, t);
        if (t2 == t) {
            fs.stabilizer.push_back({e.sigma, e.ell});
            seen.push_back(e.sigma);
        }
    }
    fs.aut_order = (long)it.d * (long)fs.stabilizer.size();
    return fs;
}

// the compatible cross-ratio orbit of t (subset of {t, 1-t, 1/t, ...})
inline std::vector<FqElem> compatible_orbit_4pt(const InertiaType& it, const FqElem& t,
                                                std::optional<unsigned> marked_label = {}) {
    CCMASS_CHECK(!t.is_zero() && t != FqElem::one(t.k), "degenerate fiber");
    if (genus(it) == 1 && !marked_label) marked_label = 4;
    std::vector<FqElem> orbit;
    for (auto& sigma : compatible_sigmas_4pt(it)) {
        if (marked_label && sigma[*marked_label - 1] != *marked_label - 1) continue;
        auto [nu, t2] = relabel_map(sigma, t);
        if (std::find(orbit.begin(), orbit.end(), t2) == orbit.end()) orbit.push_back(t2);
    }
    std::sort(orbit.begin(), orbit.end(), FqElem::lex_less);
    return orbit;
}

// Moebius transformations permuting a finite point set (used for the
// hyperelliptic branch loci, where no 4-point shortcut applies).  Brute
// force over images of the first three points.
inline std::vector<Mobius> set_stabilizer(const std::vector<ProjPt>& pts) {
    CCMASS_CHECK(pts.size() >= 3, "set_stabilizer: need at least 3 points");
    std::vector<Mobius> out;
    auto contains = [&](const ProjPt& q) {
        for (auto& r : pts)
            if (r == q) return true;
        return false;
    };
    std::size_t n = pts.size();
    Mobius base = mobius_to_standard(pts[0], pts[1], pts[2]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l) {
                if (i == j || j == l || i == l) continue;
                Mobius nu = mobius_to_standard(pts[i], pts[j], pts[l]).inverse().compose(base);
                bool ok = true;
                for (auto& q : pts) {
                    if (!contains(nu.apply(q))) {
                        ok = false;
                        break;
                    }
                }
                if (ok) out.push_back(nu);
            }
    return out;
}

}  // namespace ccmass
