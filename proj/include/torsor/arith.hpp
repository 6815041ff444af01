#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace torsor {

using BigInt = boost::multiprecision::mpz_int;
using BigRational = boost::multiprecision::mpq_rational;

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

/// Prime factorization of a positive integer, primes strictly increasing.
struct Factorization {
    std::vector<std::pair<u64, unsigned>> factors;
    u64 value = 1;

    [[nodiscard]] unsigned valuation(u64 p) const;
    [[nodiscard]] u64 radical() const;
    [[nodiscard]] std::vector<u64> primes() const;
};

/// Nonzero integer congruent to 0 or 1 mod 4.
class Discriminant {
public:
    explicit Discriminant(i64 value);
    [[nodiscard]] i64 value() const { return value_; }
    static bool is_valid(i64 value) {
        const i64 r = ((value % 4) + 4) % 4;
        return value != 0 && (r == 0 || r == 1);
    }

private:
    i64 value_;
};

u64 gcd(u64 a, u64 b);
i64 gcd_signed(i64 a, i64 b);
u64 mul_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 base, u64 exp, u64 m);
bool is_prime(u64 n);

/// Trial division to 10^6, then Miller-Rabin / Pollard rho for the cofactor.
Factorization factorize(u64 n);

int mobius(u64 n);
u64 euler_phi(u64 n);
u64 divisor_count(u64 n);

/// Least m >= 1 with n | m^2.
u64 sqrt_plus(u64 n);

/// floor(sqrt(n)) by bisection on exact integers.
u64 isqrt(u64 n);
BigInt isqrt(const BigInt& n);
/// floor(n^(1/k)) for k >= 1.
u64 iroot(u128 n, unsigned k);

bool is_square(u64 n);
/// True iff v = -m^2 for some m >= 1.
bool is_minus_square(i64 v);

/// Kronecker symbol (a/n) for arbitrary integers.
int kronecker_symbol(i64 a, i64 n);
/// Value of the quadratic character chi_D at n.
int kronecker(const Discriminant& d, i64 n);

/// All divisors of n in [lo, hi], ascending.
std::vector<u64> divisors_in_range(u64 n, u64 lo, u64 hi);
std::vector<u64> divisors(u64 n);
std::vector<u64> primes_up_to(u64 n);

/// p-adic valuation of a nonzero integer.
unsigned valuation(u64 n, u64 p);

std::string to_string(const BigRational& q);

}  // namespace torsor

namespace torsor {

/// Smallest-prime-factor table for fast factorization of many small integers.
class SpfSieve {
public:
    explicit SpfSieve(u64 limit);
    [[nodiscard]] u64 limit() const { return limit_; }
    /// Distinct primes and exponents of n (n >= 1); falls back to factorize() above the limit.
    /// Returns the number of distinct primes written to p/e (capacity 16).
    unsigned factor(u64 n, u64* p, unsigned* e) const;

private:
    u64 limit_;
    std::vector<std::uint32_t> spf_;
};

/// floor(n^(1/k)) via a floating guess corrected with exact integer checks.
u64 root_floor(u128 n, unsigned k);

/// Saturating products used for height comparisons.
inline u128 sat_mul(u128 a, u128 b) {
    if (a == 0 || b == 0) return 0;
    const u128 max = ~static_cast<u128>(0);
    return a > max / b ? max : a * b;
}
u128 sat_pow(u64 x, unsigned e);

}  // namespace torsor
