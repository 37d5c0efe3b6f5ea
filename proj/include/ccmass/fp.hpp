#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

// Scalar arithmetic mod a (small) prime p.  Everything in this library keeps
// residues reduced to [0, p); intermediate products go through unsigned
// __int128 so any p < 2^63 is safe.

namespace ccmass {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i64 = std::int64_t;

#define CCMASS_CHECK(cond, msg)                          \
    do {                                                 \
        if (!(cond)) throw std::runtime_error(msg);      \
    } while (0)

#define CCMASS_ASSERT(cond, msg)                         \
    do {                                                 \
        if (!(cond)) throw std::logic_error(msg);        \
    } while (0)

inline u64 add_mod(u64 a, u64 b, u64 p) {
    u64 s = a + b;
    return s >= p ? s - p : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

inline u64 neg_mod(u64 a, u64 p) { return a == 0 ? 0 : p - a; }

inline u64 mul_mod(u64 a, u64 b, u64 p) { return (u64)((u128)a * b % p); }

inline u64 pow_mod(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mul_mod(r, a, p);
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline u64 inv_mod(u64 a, u64 p) {
    CCMASS_CHECK(a % p != 0, "inv_mod: zero is not invertible");
    return pow_mod(a % p, p - 2, p);
}

// inverse mod an arbitrary modulus (extended Euclid); needed for units mod d
inline u64 inv_mod_general(u64 a, u64 n) {
    a %= n;
    i64 r0 = (i64)n, r1 = (i64)a, s0 = 0, s1 = 1;
    while (r1 != 0) {
        i64 q = r0 / r1;
        i64 r2 = r0 - q * r1;
        i64 s2 = s0 - q * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    CCMASS_CHECK(r0 == 1, "inv_mod_general: not a unit");
    return (u64)((s0 % (i64)n + (i64)n) % (i64)n);
}

// Miller-Rabin, deterministic for 64-bit inputs.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// Legendre symbol (a|p) in {-1, 0, 1}, p an odd prime.
inline int legendre_symbol(i64 a, u64 p) {
    i64 m = a % (i64)p;
    if (m < 0) m += (i64)p;
    if (m == 0) return 0;
    u64 r = pow_mod((u64)m, (p - 1) / 2, p);
    return r == 1 ? 1 : -1;
}

inline u64 gcd_u64(u64 a, u64 b) {
    while (b) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Deterministic PRNG used for equal-degree splitting; the seed is recorded in
// every report so factorization runs reproduce byte for byte.
struct SplitMix64 {
    u64 state;
    explicit SplitMix64(u64 seed) : state(seed) {}
    u64 next() {
        u64 z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    u64 below(u64 n) { return next() % n; }
};

}  // namespace ccmass
