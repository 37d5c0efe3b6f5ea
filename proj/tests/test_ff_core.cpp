#include <doctest.h>

#include "ccmass/factor.hpp"
#include "ccmass/fpt_poly.hpp"
#include "ccmass/pointcount.hpp"

using namespace ccmass;

namespace {

FptPoly legendre_cubic(u64 p) {
    // x (x-1) (x-t)
    return FptPoly::x_power(p, 1) * FptPoly::x_minus(p, 1, 0) * FptPoly::x_minus(p, 0, 1);
}

FpPoly product_of_factors(const std::vector<FpFactor>& fs, u64 p, u64 unit) {
    FpPoly acc = FpPoly::constant(p, unit);
    for (auto& f : fs)
        for (unsigned i = 0; i < f.mult; ++i) acc = acc * f.poly;
    return acc;
}

}  // namespace

TEST_CASE("fp poly basics") {
    FpPoly a(7, {1, 2, 3});
    FpPoly b(7, {6, 5});
    CHECK((a * b).deg() == 3);
    CHECK((a * b) == FpPoly::mul_school(a, b));
    auto [q, r] = FpPoly::divrem(a * b + FpPoly::constant(7, 4), a);
    CHECK(q == b);
    CHECK(r == FpPoly::constant(7, 4));
    CHECK(a.str() == "1 + 2*t + 3*t^2");
}

TEST_CASE("karatsuba agrees with schoolbook") {
    SplitMix64 rng(7);
    for (int iter = 0; iter < 10; ++iter) {
        u64 p = 97;
        FpPoly a(p), b(p);
        a.c.resize(80 + rng.below(80));
        b.c.resize(80 + rng.below(80));
        for (auto& v : a.c) v = rng.below(p);
        for (auto& v : b.c) v = rng.below(p);
        a.trim();
        b.trim();
        CHECK(FpPoly::mul_karatsuba(a, b) == FpPoly::mul_school(a, b));
    }
}

TEST_CASE("window: f = x(x-1)(x-t) over F_3, N = 1, index 2 gives -(1+t)") {
    auto f = legendre_cubic(3);
    auto w = pow_coeff_window(f, 1, {2});
    CHECK(w.at(2) == FpPoly(3, {2, 2}));
}

TEST_CASE("window: N = 0 is the constant 1") {
    auto f = legendre_cubic(5);
    auto w = pow_coeff_window(f, 0, {0, 1, 3});
    CHECK(w.at(0) == FpPoly::one(5));
    CHECK(w.at(1).is_zero());
    CHECK(w.at(3).is_zero());
}

TEST_CASE("window: f = x(x-1)(x-t) over F_5, N = 2, index 4 gives t^2+4t+1") {
    auto f = legendre_cubic(5);
    auto w = pow_coeff_window(f, 2, {4});
    CHECK(w.at(4) == FpPoly(5, {1, 4, 1}));
}

TEST_CASE("windowed and full power expansion agree") {
    SplitMix64 rng(12345);
    for (int iter = 0; iter < 25; ++iter) {
        u64 p = (iter % 2) ? 13 : 7;
        FptPoly f(p);
        std::size_t dx = 1 + rng.below(5);
        f.cx.resize(dx + 1, FpPoly::zero(p));
        for (auto& c : f.cx) {
            c.c.resize(1 + rng.below(3));
            for (auto& v : c.c) v = rng.below(p);
            c.trim();
        }
        f.trim();
        if (f.is_zero()) continue;
        u64 N = 1 + rng.below(12);
        while ((u64)f.deg_x() * N > 2000) N /= 2;
        if (N == 0) N = 1;
        FptPoly full = f.pow_full(N);
        std::vector<long> idx;
        for (int i = 0; i < 8; ++i) idx.push_back((long)rng.below((u64)full.deg_x() + 4));
        auto w = pow_coeff_window(f, N, idx);
        for (long i : idx) CHECK(w.at(i) == full.coeff((std::size_t)i));
    }
}

TEST_CASE("window handles structured shapes without expanding") {
    // the dihedral W-model at p = 97 has x-degree 2*d*N ~ 4656; the window
    // only ever expands the compressed quadratic residual
    u64 p = 97;
    unsigned d = 3;
    FptPoly f(p);
    f.cx.assign(2 * d + 1, FpPoly::zero(p));
    f.cx[0] = FpPoly::one(p);
    f.cx[d] = FpPoly(p, {2, p - 4});
    f.cx[2 * d] = FpPoly::one(p);
    u64 N = (p - 1) / 2;
    auto w = pow_coeff_window(f, N, {(long)(p - 1), (long)(p - 2), (long)(2 * p - 1)});
    // spot-check one value against a local full expansion
    FptPoly full = f.pow_full(N);
    CHECK(w.at((long)(p - 1)) == full.coeff(p - 1));
    CHECK(w.at((long)(p - 2)) == full.coeff(p - 2));
    CHECK(w.at((long)(2 * p - 1)) == full.coeff(2 * p - 1));
}

TEST_CASE("factor: t^2 - 1 over F_5") {
    FpPoly f(5, {4, 0, 1});
    auto fs = factor_over_fp(f, 1);
    REQUIRE(fs.size() == 2);
    CHECK(fs[0].poly == FpPoly(5, {1, 1}));  // t + 1
    CHECK(fs[0].mult == 1);
    CHECK(fs[1].poly == FpPoly(5, {4, 1}));  // t - 1
    CHECK(fs[1].mult == 1);
}

TEST_CASE("factor: t^3 + 1 = (t+1)^3 over F_3") {
    FpPoly f(3, {1, 0, 0, 1});
    auto fs = factor_over_fp(f, 1);
    REQUIRE(fs.size() == 1);
    CHECK(fs[0].poly == FpPoly(3, {1, 1}));
    CHECK(fs[0].mult == 3);
}

TEST_CASE("factor: the p = 5 Hasse polynomial is an irreducible quadratic") {
    // t^2 + 4t + 1 over F_5: discriminant 12 = 2 is a non-residue mod 5
    FpPoly f(5, {1, 4, 1});
    auto fs = factor_over_fp(f, 99);
    REQUIRE(fs.size() == 1);
    CHECK(fs[0].poly.deg() == 2);
    CHECK(fs[0].mult == 1);
    // both roots in F_25 give supersingular Legendre fibers: count points of
    // y^2 = x(x-1)(x-r) over F_25 and check #E = 1 mod 5
    auto rw = roots_with_field(fs[0].poly);
    CHECK(rw.field->m == 2);
    for (auto& r : rw.roots) {
        PolyFq cubic(rw.field);
        cubic.c = {FqElem::zero(rw.field), r, -(r + FqElem::one(rw.field)),
                   FqElem::one(rw.field)};
        // x(x-1)(x-r) = x^3 - (1+r)x^2 + r x
        cubic.c[1] = r;
        cubic.c[2] = -(FqElem::one(rw.field) + r);
        CHECK(elliptic_supersingular(cubic, rw.field));
    }
}

TEST_CASE("factor round trip and degree conservation (random)") {
    SplitMix64 rng(0xabcdef);
    for (int iter = 0; iter < 20; ++iter) {
        u64 p = (iter % 3 == 0) ? 3 : (iter % 3 == 1) ? 13 : 31;
        FpPoly f(p);
        f.c.resize(2 + rng.below(14));
        for (auto& v : f.c) v = rng.below(p);
        f.trim();
        if (f.deg() < 1) continue;
        auto fs = factor_over_fp(f, iter);
        long degsum = 0;
        for (auto& fac : fs) {
            degsum += fac.poly.deg() * (long)fac.mult;
            CHECK(is_irreducible(fac.poly));
        }
        CHECK(degsum == f.deg());
        CHECK(product_of_factors(fs, p, f.lead()) == f);
    }
}

TEST_CASE("factor determinism: same seed, same output") {
    FpPoly f(13, {5, 1, 0, 9, 1, 1, 0, 0, 2, 1});
    auto a = factor_over_fp(f, 42);
    auto b = factor_over_fp(f, 42);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].poly == b[i].poly);
        CHECK(a[i].mult == b[i].mult);
    }
}

TEST_CASE("cannot factor zero") {
    CHECK_THROWS_WITH(factor_over_fp(FpPoly::zero(5), 1), "cannot factor zero");
}

TEST_CASE("roots_with_field: linear factor gives the base field") {
    FpPoly f(7, {4, 1});  // t + 4 = t - 3
    auto rw = roots_with_field(f);
    CHECK(rw.field->m == 1);
    REQUIRE(rw.roots.size() == 1);
    CHECK(rw.roots[0].c[0] == 3);
}

TEST_CASE("roots_with_field: t^2 + 1 over F_3 adjoins i") {
    FpPoly f(3, {1, 0, 1});
    auto rw = roots_with_field(f);
    CHECK(rw.field->m == 2);
    REQUIRE(rw.roots.size() == 2);
    for (auto& r : rw.roots) CHECK((r * r + FqElem::one(rw.field)).is_zero());
    CHECK(rw.roots[0] == -rw.roots[1]);
}

TEST_CASE("roots_with_field rejects reducible input") {
    CHECK_THROWS(roots_with_field(FpPoly(5, {4, 0, 1})));  // t^2 - 1
}

TEST_CASE("Frobenius closure of root sets") {
    SplitMix64 rng(2024);
    for (int iter = 0; iter < 8; ++iter) {
        u64 p = 11;
        FpPoly f(p);
        f.c.resize(3 + rng.below(5));
        for (auto& v : f.c) v = rng.below(p);
        f.trim();
        if (f.deg() < 1) continue;
        for (auto& fac : factor_over_fp(f, iter)) {
            auto rw = roots_with_field(fac.poly);
            for (auto& r : rw.roots) {
                FqElem rp = r.frob();
                bool in_set = false;
                for (auto& s : rw.roots) in_set = in_set || (s == rp);
                CHECK(in_set);
                // r^(p^m) = r
                CHECK(r.frob_pow(rw.field->m) == r);
            }
        }
    }
}

TEST_CASE("extension field arithmetic sanity") {
    auto k = FqCtx::make(7, FpPoly(7, {3, 0, 1}));  // T^2 + 3 irreducible mod 7
    FqElem a = FqElem::gen(k);
    FqElem b = a * a;  // = -3
    CHECK(b == FqElem::from_uint(k, 4));
    CHECK((a.inv() * a) == FqElem::one(k));
    CHECK(a.frob().frob() == a);
    CHECK(a.frob_inv().frob() == a);
    CHECK(a.pow(48) == FqElem::one(k));  // group order 7^2 - 1 = 48
}

TEST_CASE("point count: y^2 = x^3 + 1 supersingular at p = 3 (2 mod 3)") {
    auto k = FqCtx::prime_field(3);
    PolyFq f(k);
    f.c = {FqElem::one(k), FqElem::zero(k), FqElem::zero(k), FqElem::one(k)};
    CHECK(point_count_superelliptic(2, f, k) == 4);
    CHECK(elliptic_supersingular(f, k));
}
