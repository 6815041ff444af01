#pragma once
// Small independent reimplementations used as test oracles. They share no
// code with the library beyond the integer typedefs.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <vector>

namespace oracle {

using i64 = std::int64_t;
using u64 = std::uint64_t;

inline int mobius(u64 n) {
    int mu = 1;
    for (u64 p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    return n > 1 ? -mu : mu;
}

inline u64 phi(u64 n) {
    u64 c = 0;
    for (u64 k = 1; k <= n; ++k) c += std::gcd(k, n) == 1;
    return c;
}

inline u64 tau(u64 n) {
    u64 c = 0;
    for (u64 d = 1; d <= n; ++d) c += n % d == 0;
    return c;
}

inline i64 mod(i64 a, i64 m) { return ((a % m) + m) % m; }

inline u64 ipow(u64 b, unsigned e) {
    u64 r = 1;
    while (e--) r *= b;
    return r;
}

// Legendre symbol by Euler's criterion, p an odd prime.
inline int legendre(i64 a, u64 p) {
    a = mod(a, static_cast<i64>(p));
    if (a == 0) return 0;
    u64 r = 1, b = static_cast<u64>(a), e = (p - 1) / 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

// Kronecker symbol (D/n) for a discriminant D and n >= 1 from the prime factorization of n.
inline int kronecker(i64 D, u64 n) {
    int r = 1;
    for (u64 p = 2; n > 1; ++p) {
        while (n % p == 0) {
            n /= p;
            int v;
            if (p == 2) {
                const i64 d8 = mod(D, 8);
                v = (D % 2 == 0) ? 0 : (d8 == 1 || d8 == 7) ? 1 : -1;
            } else {
                v = legendre(D, p);
            }
            r *= v;
        }
    }
    return r;
}

// Height test with all exponents doubled so that halves become integers.
inline bool below(const std::vector<std::vector<int>>& twice_exponents, const std::vector<i64>& x, u64 B) {
    for (const auto& col : twice_exponents) {
        unsigned __int128 v = 1;
        const unsigned __int128 cap = static_cast<unsigned __int128>(B) * B;
        bool over = false;
        for (std::size_t j = 0; j < x.size() && !over; ++j) {
            for (int e = 0; e < col[j]; ++e) {
                v *= static_cast<u64>(std::llabs(x[j]));
                if (v > cap) {
                    over = true;
                    break;
                }
            }
        }
        if (over) return false;
    }
    return true;
}

}  // namespace oracle
