#pragma once

#include <complex>
#include <string>
#include <vector>

#include "torsor/arith.hpp"

namespace torsor {

using Complex = std::complex<double>;

/// Arguments of S_xi(h1, h2, a, c, z).
struct SQuery {
    i64 h1 = 0, h2 = 0;
    u64 a = 1, c = 1, z = 1, xi = 1;
};

/// Arguments of T(k1, k2, x, a); (k1, k2) is the frequency pair.
struct TQuery {
    i64 k1 = 0, k2 = 0;
    i64 x = 1;
    u64 a = 1;
};

/// Largest modulus accepted by the definitional double sums.
inline constexpr u64 kBruteModulusMax = 10000;

/// Sum over y, w mod a with a | c^2 + xi^2 y w z^2 of e((h1 y + h2 w)/a).
Complex s_brute(const SQuery& q);
/// Sum over a1 a2 a3 = a, a3 | c^2 of a1 (xi^2 z^2, a2 a3) a3 mu(a2).
i64 s_closed_diag(u64 a, u64 c, u64 z, u64 xi);

/// Sum over gamma, eta mod a with gamma^2 + x eta^2 = 0 mod a of e((k1 gamma + k2 eta)/a).
Complex t_brute(const TQuery& q);
/// Divisor/discriminant closed form of T(0, 0, x, a).
i64 t_closed_diag(i64 x, u64 a);

/// Sum over x mod c, (x, c) = 1 of e((m x + n xbar)/c); c <= 10^5.
Complex kloosterman(i64 m, i64 n, u64 c);

/// Quadratic Gauss sum modulo 2^rho for odd alpha, by the case formula.
Complex gauss_pow2(i64 alpha, unsigned rho);
/// The same sum evaluated term by term.
Complex gauss_pow2_direct(i64 alpha, unsigned rho);

/// Right-hand sides of the Weil-type bounds.
double s_weil_bound(const SQuery& q);
double t_weil_bound(const TQuery& q);
double kloosterman_bound(i64 m, i64 n, u64 c);

struct Rounded {
    i64 value = 0;
    double residual = 0;  ///< distance of the complex value to the integer
};
Rounded round_integral(Complex v);

/// One verification family: how many cases were checked and how many failed.
struct FamilyReport {
    std::string family;
    u64 cases = 0;
    u64 failures = 0;
    double max_deviation = 0;  ///< identity checks: max |closed - brute|
    double max_ratio = 0;      ///< bound checks: max |sum| / bound
    std::string first_failure;
    [[nodiscard]] bool passed() const { return failures == 0 && cases > 0; }
};

FamilyReport verify_s_closed(u64 amax, u64 czmax, const std::vector<u64>& xis);
FamilyReport verify_t_closed(u64 amax, i64 xmax);
FamilyReport verify_s_weil(u64 amax, u64 czmax, const std::vector<u64>& xis, i64 hmax);
/// Odd moduli only, as in the bound's hypothesis.
FamilyReport verify_t_weil(u64 amax, i64 xmax, i64 kmax);
FamilyReport verify_kloosterman(u64 cmax, i64 mnmax);
FamilyReport verify_gauss_pow2(unsigned rho_max);

}  // namespace torsor
