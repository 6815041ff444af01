#include "torsor/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace torsor {

unsigned Factorization::valuation(u64 p) const {
    for (const auto& [q, e] : factors) {
        if (q == p) return e;
    }
    return 0;
}

u64 Factorization::radical() const {
    u64 r = 1;
    for (const auto& f : factors) r *= f.first;
    return r;
}

std::vector<u64> Factorization::primes() const {
    std::vector<u64> out;
    out.reserve(factors.size());
    for (const auto& f : factors) out.push_back(f.first);
    return out;
}

Discriminant::Discriminant(i64 value) : value_(value) {
    if (!is_valid(value)) {
        throw std::invalid_argument("not a discriminant: " + std::to_string(value));
    }
}

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

i64 gcd_signed(i64 a, i64 b) {
    return static_cast<i64>(std::gcd(a < 0 ? -static_cast<u64>(a) : static_cast<u64>(a),
                                     b < 0 ? -static_cast<u64>(b) : static_cast<u64>(b)));
}

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // deterministic witness set for 64-bit inputs
    for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
        u64 x = pow_mod(a % n, d, n);
        if (a % n == 0 || x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
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

namespace {

u64 pollard_brent(u64 n) {
    if (n % 2 == 0) return 2;
    std::mt19937_64 rng(n);
    while (true) {
        const u64 c = rng() % (n - 1) + 1;
        u64 y = rng() % n;
        u64 m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
        auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
        while (g == 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            }
            r <<= 1;
        }
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_large(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    const u64 d = pollard_brent(n);
    factor_large(d, out);
    factor_large(n / d, out);
}

}  // namespace

Factorization factorize(u64 n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    Factorization f;
    f.value = n;
    auto take = [&](u64 p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) f.factors.emplace_back(p, e);
    };
    take(2);
    take(3);
    for (u64 p = 5; p <= 1000000 && p * p <= n; p += 6) {
        take(p);
        take(p + 2);
    }
    if (n > 1) {
        std::vector<u64> rest;
        factor_large(n, rest);
        std::sort(rest.begin(), rest.end());
        for (u64 p : rest) {
            if (!f.factors.empty() && f.factors.back().first == p) {
                ++f.factors.back().second;
            } else {
                f.factors.emplace_back(p, 1);
            }
        }
    }
    return f;
}

int mobius(u64 n) {
    const auto f = factorize(n);
    for (const auto& [p, e] : f.factors) {
        if (e > 1) return 0;
    }
    return (f.factors.size() % 2) ? -1 : 1;
}

u64 euler_phi(u64 n) {
    u64 r = n;
    for (const auto& [p, e] : factorize(n).factors) r = r / p * (p - 1);
    return r;
}

u64 divisor_count(u64 n) {
    u64 t = 1;
    for (const auto& [p, e] : factorize(n).factors) t *= e + 1;
    return t;
}

u64 sqrt_plus(u64 n) {
    u64 m = 1;
    for (const auto& [p, e] : factorize(n).factors) {
        for (unsigned i = 0; i < (e + 1) / 2; ++i) m *= p;
    }
    return m;
}

u64 isqrt(u64 n) {
    u64 lo = 0, hi = std::min<u64>(n, 4294967295ULL) + 1;
    // invariant: lo^2 <= n < hi^2
    while (hi - lo > 1) {
        const u64 mid = lo + (hi - lo) / 2;
        if (static_cast<u128>(mid) * mid <= n) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

BigInt isqrt(const BigInt& n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative");
    BigInt lo = 0, hi = n + 1;
    while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        if (mid * mid <= n) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

u64 iroot(u128 n, unsigned k) {
    if (k == 0) throw std::invalid_argument("iroot: k must be positive");
    if (k == 1) return n > static_cast<u128>(~0ULL) ? ~0ULL : static_cast<u64>(n);
    auto pow_le = [&](u64 x) {
        // x^k <= n without overflow
        u128 acc = 1;
        for (unsigned i = 0; i < k; ++i) {
            if (acc > n / x) return false;
            acc *= x;
        }
        return acc <= n;
    };
    u64 lo = 0, hi = 1;
    while (pow_le(hi)) {
        lo = hi;
        if (hi > (1ULL << 62)) {
            hi = ~0ULL;
            break;
        }
        hi <<= 1;
    }
    while (hi - lo > 1) {
        const u64 mid = lo + (hi - lo) / 2;
        if (mid == 0 || pow_le(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

bool is_square(u64 n) {
    const u64 r = isqrt(n);
    return r * r == n;
}

bool is_minus_square(i64 v) {
    if (v >= 0) return false;
    return is_square(static_cast<u64>(-(v + 1)) + 1);
}

int kronecker_symbol(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    u64 m;
    if (n < 0) {
        m = static_cast<u64>(-(n + 1)) + 1;
        if (a < 0) result = -result;
    } else {
        m = static_cast<u64>(n);
    }
    while ((m & 1) == 0) {
        m >>= 1;
        if ((a & 1) == 0) return 0;
        const i64 r8 = ((a % 8) + 8) % 8;
        if (r8 == 3 || r8 == 5) result = -result;
    }
    // Jacobi symbol (a/m), m odd positive
    i64 am = a % static_cast<i64>(m);
    u64 x = static_cast<u64>(am < 0 ? am + static_cast<i64>(m) : am);
    while (x != 0) {
        while ((x & 1) == 0) {
            x >>= 1;
            if (m % 8 == 3 || m % 8 == 5) result = -result;
        }
        std::swap(x, m);
        if (x % 4 == 3 && m % 4 == 3) result = -result;
        x %= m;
    }
    return m == 1 ? result : 0;
}

int kronecker(const Discriminant& d, i64 n) { return kronecker_symbol(d.value(), n); }

std::vector<u64> divisors(u64 n) {
    std::vector<u64> out{1};
    for (const auto& [p, e] : factorize(n).factors) {
        const std::size_t sz = out.size();
        u64 pk = 1;
        for (unsigned i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < sz; ++j) out.push_back(out[j] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<u64> divisors_in_range(u64 n, u64 lo, u64 hi) {
    std::vector<u64> out;
    for (u64 d : divisors(n)) {
        if (d >= lo && d <= hi) out.push_back(d);
    }
    return out;
}

std::vector<u64> primes_up_to(u64 n) {
    std::vector<u64> out;
    if (n < 2) return out;
    std::vector<bool> composite(n + 1, false);
    for (u64 i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= n; j += i) composite[j] = true;
    }
    return out;
}

unsigned valuation(u64 n, u64 p) {
    unsigned v = 0;
    while (n && n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

std::string to_string(const BigRational& q) {
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

}  // namespace torsor

namespace torsor {

SpfSieve::SpfSieve(u64 limit) : limit_(std::max<u64>(limit, 2)), spf_(limit_ + 1, 0) {
    for (u64 i = 2; i <= limit_; ++i) {
        if (spf_[i]) continue;
        spf_[i] = static_cast<std::uint32_t>(i);
        if (i * i > limit_) continue;
        for (u64 j = i * i; j <= limit_; j += i) {
            if (!spf_[j]) spf_[j] = static_cast<std::uint32_t>(i);
        }
    }
}

unsigned SpfSieve::factor(u64 n, u64* p, unsigned* e) const {
    unsigned k = 0;
    if (n > limit_) {
        for (const auto& [q, x] : factorize(n).factors) {
            p[k] = q;
            e[k] = x;
            ++k;
        }
        return k;
    }
    while (n > 1) {
        const u64 q = spf_[n];
        unsigned x = 0;
        do {
            n /= q;
            ++x;
        } while (n % q == 0);
        p[k] = q;
        e[k] = x;
        ++k;
    }
    return k;
}

u128 sat_pow(u64 x, unsigned e) {
    u128 r = 1;
    for (unsigned i = 0; i < e; ++i) r = sat_mul(r, x);
    return r;
}

u64 root_floor(u128 n, unsigned k) {
    if (k == 0) throw std::invalid_argument("root_floor: k must be positive");
    if (k == 1) return n > static_cast<u128>(~0ULL) ? ~0ULL : static_cast<u64>(n);
    if (n < 2) return static_cast<u64>(n);
    long double g = std::pow(static_cast<long double>(n), 1.0L / k);
    u64 r = g >= 1.8e19L ? (1ULL << 63) : static_cast<u64>(g);
    while (r > 0 && sat_pow(r, k) > n) --r;
    while (sat_pow(r + 1, k) <= n) ++r;
    return r;
}

}  // namespace torsor
