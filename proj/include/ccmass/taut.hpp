#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "cover.hpp"
#include "factor.hpp"
#include "rational.hpp"

// The characteristic-zero side of the mass formula: deg lambda_1 on the
// space of mu_d-covers branched at 4 points, its boundary-divisor expression
// for general n, the linearized hyperelliptic intersection ledger, and the
// closed-form masses mu(F, p) = (p-1) deg(lambda_1) / delta.

namespace ccmass {

inline long gcd_long(long a, long b) { return (long)std::gcd(a, b); }

// deg lambda_1 = (d^2 - sum gcd^2(a_i, d) + sum_{i<=3} gcd^2(a_i + a_4, d)) / (12 d^2).
// Symmetric under relabeling: pairs {i,j} inside {1,2,3} mirror {k,4} via the
// complement, so the a_4-asymmetry in the formula is only apparent.
inline Rat deg_lambda1_4pt(const InertiaType& it) {
    CCMASS_CHECK(it.n() == 4, "deg_lambda1_4pt: n = 4 required");
    long d = (long)it.d;
    long acc = d * d;
    for (unsigned ai : it.a) {
        long g = gcd_long((long)ai, d);
        acc -= g * g;
    }
    for (int i = 0; i < 3; ++i) {
        long g = gcd_long((long)((it.a[i] + it.a[3]) % it.d), d);
        acc += g * g;
    }
    return Rat(acc, 12 * d * d);
}

enum class BoundaryKind { Divisor, MinusPsi, Kappa1 };

struct BoundaryTerm {
    std::vector<unsigned> subset;  // J as 1-based labels
    Rat coeff;                     // gcd^2(sum_J a, d) / (24 d)
    BoundaryKind kind;
};

struct BoundaryExpression {
    InertiaType it;
    std::vector<BoundaryTerm> terms;
};

// lambda_1 = (1/24d) sum_J gcd^2(sum_{j in J} a_j, d) Delta_J, where Delta_J
// is the boundary divisor for 2 <= |J| <= n-2, -psi_j for |J| in {1, n-1},
// and kappa_1 for J empty or full.
inline BoundaryExpression lambda1_boundary_expression(const InertiaType& it) {
    BoundaryExpression ex{it, {}};
    unsigned n = it.n();
    long d = (long)it.d;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<unsigned> J;
        long sum = 0;
        for (unsigned i = 0; i < n; ++i)
            if (mask & (1u << i)) {
                J.push_back(i + 1);
                sum += it.a[i];
            }
        long g = gcd_long(sum % d, d);
        if (g == 0) g = d;  // gcd(0, d) = d
        Rat coeff(g * g, 24 * d);
        BoundaryKind kind;
        std::size_t sz = J.size();
        if (sz == 0 || sz == n)
            kind = BoundaryKind::Kappa1;
        else if (sz == 1 || sz == n - 1)
            kind = BoundaryKind::MinusPsi;
        else
            kind = BoundaryKind::Divisor;
        ex.terms.push_back({std::move(J), coeff, kind});
    }
    return ex;
}

// Evaluation of the boundary expression on A_{d,a} itself when n = 4: on
// M_0,4 every psi, kappa_1 and boundary point has degree 1, and the gerbe
// contributes 1/d.  Must agree with deg_lambda1_4pt on the nose.
inline Rat evaluate_boundary_4pt(const BoundaryExpression& ex) {
    CCMASS_CHECK(ex.it.n() == 4, "evaluate_boundary_4pt: n = 4 required");
    Rat acc(0);
    for (auto& term : ex.terms) {
        switch (term.kind) {
            case BoundaryKind::Kappa1:
            case BoundaryKind::Divisor:
                acc += term.coeff;
                break;
            case BoundaryKind::MinusPsi:
                acc -= term.coeff;
                break;
        }
    }
    return acc / Rat((long)ex.it.d);
}

// Intersection numbers of a linearized hyperelliptic family with the
// tautological divisors (d = 2, a = 1^{2g+2}, only the last branch point
// moves).  C_s sums F . Delta_J over |J| = s subsets.
struct IntersectionLedger {
    long g = 0;
    Rat psi_small;        // F . psi_i, i <= 2g+1
    Rat psi_moving;       // F . psi_{2g+2}
    Rat kappa1;           // F . kappa_1
    Rat delta_pair;       // F . Delta_{{i, 2g+2}}, each of the 2g+1 of them
    Rat c0, c1, c2;       // kappa / psi / divisor aggregates by |J|
    Rat total;            // deg^F lambda_1
};

inline IntersectionLedger deg_lambda1_linearized(long g) {
    CCMASS_CHECK(g >= 2, "deg_lambda1_linearized: g >= 2 required");
    IntersectionLedger led;
    led.g = g;
    led.psi_small = Rat(1, 2);
    led.psi_moving = Rat(2 * g - 1, 2);
    led.kappa1 = Rat(2 * g - 1, 2);
    led.delta_pair = Rat(1, 2);
    // C_0 is the kappa term, C_1 the (negated) psi sum, C_2 the pair sum;
    // C_s = 0 for 3 <= s <= 2g-1 and C_s = C_{2g+2-s}
    led.c0 = led.kappa1;
    led.c1 = -(Rat(2 * g + 1) * led.psi_small + led.psi_moving);
    led.c2 = Rat(2 * g + 1) * led.delta_pair;
    // coefficient gcd^2(|J|, 2) is 4 for even |J|, 1 for odd; both halves of
    // the subset sum double every term
    led.total = (Rat(4) * led.c0 + led.c1 + Rat(4) * led.c2) * Rat(1, 24);
    CCMASS_ASSERT(led.total == Rat(g, 4), "linearized ledger must evaluate to g/4");
    return led;
}

// mu(F, p) = (p - 1) deg lambda_1 / delta, with a flag when the generic
// fiber is not ordinary (the intersection number exists, the weighted-count
// interpretation does not).
struct MassRhs {
    Rat value;
    bool ordinary_generic = true;
};

inline MassRhs mass_rhs_4pt(const InertiaType& it, u64 p,
                            std::optional<unsigned> marked_label = {}) {
    CCMASS_CHECK(p % it.d != 0, "mass_rhs: p divides d");
    auto [delta, set] = delta_degree(it, marked_label);
    (void)set;
    MassRhs out;
    out.value = Rat((i64)p - 1) * deg_lambda1_4pt(it) / Rat(delta);
    out.ordinary_generic = generically_ordinary_4pt(it, p);
    return out;
}

inline Rat mass_rhs_linearized(long g, u64 p) {
    CCMASS_CHECK(p % 2 == 1, "mass_rhs_linearized: odd p required");
    return Rat((i64)p - 1) * Rat(g, 4);  // delta = 1 for an asymmetric h
}

// closed forms used by the named families
inline Rat mass_closed_legendre(u64 p) { return Rat((i64)p - 1, 24); }
inline Rat mass_closed_dihedral_odd(unsigned d, u64 p) {
    // a = (1, 1, d-1, d-1), d odd: (p-1)(d^2-1)/(32 d^2)
    return Rat((i64)p - 1) * Rat((i64)d * d - 1, 32 * (i64)d * (i64)d);
}
inline Rat mass_closed_even_family(unsigned d, u64 p) {
    // a = (1, d/2, d/2, d-1), d = 0 mod 4: (p-1)/32
    CCMASS_CHECK(d % 4 == 0, "closed form stated for d = 0 mod 4 only");
    return Rat((i64)p - 1, 32);
}
inline Rat mass_closed_111(unsigned d, u64 p) {
    // a = (1, 1, 1, d-3), gcd(d, 6) = 1: (p-1)(d^2-1)/(72 d^2)
    CCMASS_CHECK(std::gcd(d, 6u) == 1, "closed form needs gcd(d, 6) = 1");
    return Rat((i64)p - 1) * Rat((i64)d * d - 1, 72 * (i64)d * (i64)d);
}

// ---------------------------------------------------------------------------
// The 14 one-dimensional special Moonen families.  deg lambda_1, delta and z
// are recomputed from scratch and checked against these stored values; the
// a-numbers at non-ordinary points come from the literature and are verified
// against the Cartier engine at the smallest usable prime by the test suite.

struct MoonenRow {
    const char* label;
    unsigned d;
    std::array<unsigned, 4> a;
    long g;
    Rat deg_lambda1;
    long delta;
    long z;
    long a_nu;
};

inline const std::vector<MoonenRow>& moonen_rows() {
    static const std::vector<MoonenRow> rows = {
        {"M[1]", 2, {1, 1, 1, 1}, 1, Rat(1, 4), 6, 2, 1},
        {"M[3]", 3, {1, 1, 2, 2}, 2, Rat(2, 9), 8, 12, 2},
        {"M[4]", 4, {1, 2, 2, 3}, 2, Rat(1, 8), 4, 8, 2},
        {"M[5]", 6, {2, 3, 3, 4}, 2, Rat(1, 9), 4, 12, 2},
        {"M[7]", 4, {1, 1, 1, 1}, 3, Rat(1, 8), 24, 16, 1},
        {"M[9]", 6, {1, 3, 4, 4}, 3, Rat(1, 18), 2, 6, 2},
        {"M[11]", 5, {1, 3, 3, 3}, 4, Rat(2, 25), 6, 5, 2},
        {"M[12]", 6, {1, 1, 1, 3}, 4, Rat(1, 12), 6, 6, 1},
        {"M[13]", 6, {1, 1, 2, 2}, 4, Rat(1, 9), 4, 12, 2},
        {"M[15]", 8, {2, 4, 5, 5}, 5, Rat(1, 16), 2, 8, 2},
        {"M[17]", 7, {2, 4, 4, 4}, 6, Rat(4, 49), 6, 7, 2},
        {"M[18]", 10, {3, 5, 6, 6}, 6, Rat(3, 50), 2, 10, 2},
        {"M[19]", 9, {3, 5, 5, 5}, 7, Rat(2, 27), 6, 9, 2},
        {"M[20]", 12, {4, 6, 7, 7}, 7, Rat(1, 18), 2, 12, 2},
    };
    return rows;
}

struct MoonenEntry {
    std::string label;
    InertiaType it;
    long g;
    Rat deg_lambda1;
    long delta;
    long z;
    long a_nu;
    Rat n_rate;      // z * deg_lambda1 / (a_nu * delta)
    Rat mu;          // (p-1) deg_lambda1 / delta
    bool mu_applicable;  // only meaningful when p = 1 mod d
};

// generic fiber via a parameter in a cubic extension: no quadratic-or-lower
// special condition (harmonic, equianharmonic) can catch it
inline FqElem generic_parameter(u64 p) {
    for (u64 c2 = 0; c2 < p; ++c2)
        for (u64 c1 = 0; c1 < p; ++c1)
            for (u64 c0 = 1; c0 < p; ++c0) {
                FpPoly mod(p, {c0, c1, c2, 1});
                if (is_irreducible(mod)) return FqElem::gen(FqCtx::make(p, mod));
            }
    CCMASS_ASSERT(false, "generic_parameter: no irreducible cubic found");
    return FqElem();
}

inline std::vector<MoonenEntry> moonen_table(u64 p) {
    std::vector<MoonenEntry> out;
    for (auto& row : moonen_rows()) {
        InertiaType it(row.d, {row.a[0], row.a[1], row.a[2], row.a[3]});
        MoonenEntry e{row.label, it, genus(it), deg_lambda1_4pt(it),
                      delta_degree(it).first, 0, row.a_nu, Rat(0), Rat(0), false};
        CCMASS_ASSERT(e.g == row.g, "moonen_table: genus mismatch");
        CCMASS_ASSERT(e.deg_lambda1 == row.deg_lambda1, "moonen_table: deg lambda_1 mismatch");
        CCMASS_ASSERT(e.delta == row.delta, "moonen_table: delta mismatch");
        FqElem tgen = generic_parameter(row.d >= 10 ? 101 : 97);  // any p coprime to d works here
        e.z = aut_order_4pt(it, tgen).aut_order;
        CCMASS_ASSERT(e.z == row.z, "moonen_table: z mismatch");
        e.n_rate = Rat(e.z) * e.deg_lambda1 / (Rat(e.a_nu) * Rat(e.delta));
        if (p % row.d != 0) {
            e.mu = Rat((i64)p - 1) * e.deg_lambda1 / Rat(e.delta);
            e.mu_applicable = (p % row.d == 1);
        }
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace ccmass
