#pragma once

#include <array>
#include <optional>
#include <string>

#include "torsor/arith.hpp"
#include "torsor/enumerate.hpp"

namespace torsor {

struct SingularEstimate {
    double value = 0;
    double error = 0;  ///< standard error (Monte Carlo) or truncation bound
    std::string method;  ///< "closed-product", "q-sum", "monte-carlo", "grid"
    std::optional<BigRational> exact;
    u64 seed = 0;
    u64 samples = 0;
};

/// Envelope exponent vector (zeta1, zeta2, zeta3).
struct EnvelopeVector {
    double z1 = 0.5, z2 = 0.25, z3 = 0.25;
};

/// (AB)^(1-z1) C^(1-2 z2) (YW)^(1-z3) Z^(1-2 z3).
double envelope(const DyadicBox& box, const EnvelopeVector& zeta);

/// Local factor of the singular series at p with r = v_p(xi).
BigRational euler_factor(u64 p, unsigned r);

/// #{(y, z) mod p^(2n) : p^(2n) | y z^2}.
u64 count_yz2(u64 p, unsigned n);
u64 count_yz2_brute(u64 p, unsigned n);

/// Term of the defining q-sum: q^-6 sum*_d sum_{a,b,c,y,w,z mod q} e(d F / q).
BigRational singular_term_brute(u64 q, i64 xi);
/// The same term for q = p^j as predicted by the Euler-product derivation.
BigRational singular_term_closed(u64 p, unsigned j, i64 xi);

/// Product of euler_factor over p <= pmax with a tail bound on the relative error.
SingularEstimate singular_series(i64 xi, u64 pmax);

/// Real coordinate range lo < |x| <= hi.
struct RealShell {
    double lo = 0.5;
    double hi = 1;
};
std::array<RealShell, 6> real_shells(const DyadicBox& box);

/// Monte Carlo estimate of the singular integral over the shells (a, b, c, y, w, z).
SingularEstimate singular_integral(i64 xi, const std::array<RealShell, 6>& sh, u64 samples, u64 seed,
                                   unsigned streams = 1);
SingularEstimate singular_integral(i64 xi, const DyadicBox& box, u64 samples, u64 seed);
/// Deterministic midpoint quadrature in (b, y, w, z) with the c-measure in closed form.
SingularEstimate singular_integral_grid(i64 xi, const std::array<RealShell, 6>& sh, unsigned n);

/// Shape conditions on the box for parameter lambda.
bool box_shape_ok(const DyadicBox& box, double lambda);

struct AsympReport {
    i64 xi = 1;
    DyadicBox box;
    u64 count = 0;
    SingularEstimate series;
    SingularEstimate integral;
    double main_term = 0;
    double relative_error = 0;
    double envelope_ratio = 0;  ///< count / X^(1/2, 1/4, 1/4)
    bool shape_ok = true;
};

AsympReport asymp_compare(i64 xi, const DyadicBox& box, bool exclude_minus_square, u64 samples, u64 seed,
                          double lambda = 0.25, u64 pmax = 10000);

}  // namespace torsor
