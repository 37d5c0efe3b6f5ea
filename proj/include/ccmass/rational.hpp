#pragma once

#include <numeric>
#include <ostream>
#include <string>

#include "fp.hpp"

// Exact rationals on int64 with __int128 intermediates.  Masses, lambda_1
// degrees and class weights all have tiny numerators/denominators; we still
// guard every product against overflow rather than trusting that.

namespace ccmass {

struct Rat {
    i64 num = 0;
    i64 den = 1;  // always > 0, gcd(num, den) = 1

    Rat() = default;
    Rat(i64 n) : num(n), den(1) {}
    Rat(i64 n, i64 d) : num(n), den(d) { normalize(); }

    void normalize() {
        CCMASS_CHECK(den != 0, "Rat: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        i64 g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }

    static i64 clamp128(__int128 v) {
        CCMASS_CHECK(v <= INT64_MAX && v >= INT64_MIN, "Rat: overflow");
        return (i64)v;
    }

    friend Rat operator+(const Rat& a, const Rat& b) {
        __int128 n = (__int128)a.num * b.den + (__int128)b.num * a.den;
        __int128 d = (__int128)a.den * b.den;
        __int128 g = gcd128(n < 0 ? -n : n, d);
        return Rat(clamp128(n / g), clamp128(d / g));
    }
    friend Rat operator-(const Rat& a, const Rat& b) { return a + Rat(-b.num, b.den); }
    friend Rat operator*(const Rat& a, const Rat& b) {
        __int128 n = (__int128)a.num * b.num;
        __int128 d = (__int128)a.den * b.den;
        if (n == 0) return Rat(0);
        __int128 g = gcd128(n < 0 ? -n : n, d);
        return Rat(clamp128(n / g), clamp128(d / g));
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        CCMASS_CHECK(b.num != 0, "Rat: division by zero");
        return a * Rat(b.den, b.num);
    }
    Rat operator-() const { return Rat(-num, den); }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return (__int128)a.num * b.den < (__int128)b.num * a.den;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    // Reports render rationals as "num/den", reduced, never floating point.
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

    friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }
};

}  // namespace ccmass
