#include "torsor/singular.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace torsor {

namespace {

BigRational rpow(u64 p, int e) {
    BigInt b = 1;
    for (int i = 0; i < std::abs(e); ++i) b *= p;
    return e >= 0 ? BigRational(b) : BigRational(BigInt(1), b);
}

u64 upow(u64 p, unsigned e) {
    u64 r = 1;
    for (unsigned i = 0; i < e; ++i) r *= p;
    return r;
}

// Ramanujan sum c_q(t) = sum_{d | (t, q)} d mu(q/d).
i64 ramanujan(u64 q, u64 t) {
    const u64 g = gcd(t % q, q);
    i64 s = 0;
    for (u64 d : divisors(g == 0 ? q : g)) s += static_cast<i64>(d) * mobius(q / d);
    return s;
}

}  // namespace

double envelope(const DyadicBox& box, const EnvelopeVector& zeta) {
    const auto d = [](u64 v) { return static_cast<double>(v); };
    return std::pow(d(box.A) * d(box.B), 1 - zeta.z1) * std::pow(d(box.C), 1 - 2 * zeta.z2) *
           std::pow(d(box.Y) * d(box.W), 1 - zeta.z3) * std::pow(d(box.Z), 1 - 2 * zeta.z3);
}

BigRational euler_factor(u64 p, unsigned r) {
    if (!is_prime(p)) throw std::invalid_argument("euler_factor: p must be prime");
    const BigRational pp(p);
    const BigRational s = 1 + pp + pp * pp;
    return 1 + (s - rpow(p, 2 - static_cast<int>(r))) / (pp * s);
}

u64 count_yz2(u64 p, unsigned n) {
    if (n == 0) return 1;
    if (3.0 * n * std::log2(static_cast<double>(p)) >= 63) throw std::overflow_error("count_yz2: p^(3n) too large");
    return upow(p, 3 * n) + upow(p, 3 * n - 1) - upow(p, 2 * n - 1);
}

u64 count_yz2_brute(u64 p, unsigned n) {
    const u64 q = upow(p, 2 * n);
    if (q > 10000) throw std::invalid_argument("count_yz2_brute: modulus too large");
    std::vector<u64> sq(q);
    for (u64 z = 0; z < q; ++z) sq[z] = mul_mod(z, z, q);
    u64 count = 0;
    for (u64 y = 0; y < q; ++y) {
        for (u64 z = 0; z < q; ++z) count += mul_mod(y, sq[z], q) == 0;
    }
    return count;
}

BigRational singular_term_brute(u64 q, i64 xi) {
    if (q == 0 || q > 100) throw std::invalid_argument("singular_term_brute: q out of range");
    const u64 x2 = mul_mod(static_cast<u64>(std::llabs(xi)) % q, static_cast<u64>(std::llabs(xi)) % q, q);
    std::vector<u64> ab(q, 0), c2(q, 0), ywz(q, 0);
    for (u64 a = 0; a < q; ++a)
        for (u64 b = 0; b < q; ++b) ++ab[a * b % q];
    for (u64 c = 0; c < q; ++c) ++c2[c * c % q];
    for (u64 y = 0; y < q; ++y)
        for (u64 w = 0; w < q; ++w)
            for (u64 z = 0; z < q; ++z) ++ywz[mul_mod(x2, y * w % q * (z * z % q) % q, q)];
    auto conv = [q](const std::vector<u64>& f, const std::vector<u64>& g) {
        std::vector<u64> h(q, 0);
        for (u64 i = 0; i < q; ++i) {
            if (!f[i]) continue;
            for (u64 j = 0; j < q; ++j) h[(i + j) % q] += f[i] * g[j];
        }
        return h;
    };
    const auto dist = conv(conv(ab, c2), ywz);
    BigInt total = 0;
    for (u64 t = 0; t < q; ++t) total += BigInt(dist[t]) * ramanujan(q, t);
    return BigRational(total) / BigRational(BigInt(upow(q, 6)));
}

BigRational singular_term_closed(u64 p, unsigned j, i64 xi) {
    if (j == 0) return 1;
    if (j % 2) return 0;  // only square moduli contribute
    const unsigned n = j / 2;
    const unsigned r = valuation(static_cast<u64>(std::llabs(xi)), p);
    const unsigned m = std::min(n, r);
    // count_yz2 in exact arithmetic: p^(3e) + p^(3e-1) - p^(2e-1), e = n - r
    const int e = static_cast<int>(n - m);
    const BigRational cnt = e > 0 ? rpow(p, 3 * e) + rpow(p, 3 * e - 1) - rpow(p, 2 * e - 1) : BigRational(1);
    return BigRational(p - 1) * rpow(p, static_cast<int>(n) - 1) * rpow(p, 4 * static_cast<int>(m)) * cnt /
           rpow(p, 6 * static_cast<int>(n));
}

SingularEstimate singular_series(i64 xi, u64 pmax) {
    if (pmax < 2) throw std::invalid_argument("singular_series: pmax must be >= 2");
    if (xi == 0) throw std::invalid_argument("singular_series: xi must be nonzero");
    const u64 ax = static_cast<u64>(std::llabs(xi));
    BigRational prod = 1;
    for (u64 p : primes_up_to(pmax)) prod *= euler_factor(p, valuation(ax, p));
    SingularEstimate est;
    est.method = "closed-product";
    est.exact = prod;
    est.value = prod.convert_to<double>();
    // p > pmax with p not dividing xi: factor - 1 <= 2/p^2, summing to < 2/(pmax - 1)
    est.error = est.value * std::expm1(2.0 / static_cast<double>(pmax - 1));
    return est;
}

std::array<RealShell, 6> real_shells(const DyadicBox& box) {
    auto s = [](u64 X) { return RealShell{static_cast<double>(X) / 2, static_cast<double>(X)}; };
    return {s(box.A), s(box.B), s(box.C), s(box.Y), s(box.W), s(box.Z)};
}

SingularEstimate singular_integral(i64 xi, const std::array<RealShell, 6>& sh, u64 samples, u64 seed,
                                   unsigned streams) {
    if (samples < 10000) throw std::invalid_argument("singular_integral: need at least 1e4 samples");
    if (streams == 0) streams = 1;
    for (const auto& s : sh) {
        if (!(s.lo > 0 && s.hi > s.lo)) throw std::invalid_argument("singular_integral: bad shell");
    }
    const double xi2 = static_cast<double>(xi) * static_cast<double>(xi);
    // b is drawn with density proportional to 1/|b|, the rest uniformly
    double weight = 2 * std::log(sh[1].hi / sh[1].lo);
    for (int i = 2; i < 6; ++i) weight *= 2 * (sh[i].hi - sh[i].lo);

    u64 hits = 0;
    for (unsigned s = 0; s < streams; ++s) {
        std::seed_seq seq{seed, static_cast<u64>(s)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        auto signed_uniform = [&](const RealShell& r) {
            const double v = r.lo + (r.hi - r.lo) * unit(rng);
            return unit(rng) < 0.5 ? -v : v;
        };
        const u64 n = samples / streams + (s < samples % streams ? 1 : 0);
        for (u64 i = 0; i < n; ++i) {
            double b = sh[1].lo * std::pow(sh[1].hi / sh[1].lo, unit(rng));
            if (unit(rng) < 0.5) b = -b;
            const double c = signed_uniform(sh[2]);
            const double y = signed_uniform(sh[3]);
            const double w = signed_uniform(sh[4]);
            const double z = signed_uniform(sh[5]);
            const double a = std::fabs((c * c + xi2 * y * w * z * z) / b);
            hits += a > sh[0].lo && a <= sh[0].hi;
        }
    }
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    SingularEstimate est;
    est.method = "monte-carlo";
    est.value = weight * p;
    est.error = weight * std::sqrt(p * (1 - p) / static_cast<double>(samples));
    est.seed = seed;
    est.samples = samples;
    return est;
}

SingularEstimate singular_integral(i64 xi, const DyadicBox& box, u64 samples, u64 seed) {
    return singular_integral(xi, real_shells(box), samples, seed);
}

SingularEstimate singular_integral_grid(i64 xi, const std::array<RealShell, 6>& sh, unsigned n) {
    if (n == 0) throw std::invalid_argument("singular_integral_grid: n must be positive");
    const double xi2 = static_cast<double>(xi) * static_cast<double>(xi);
    const double c2lo = sh[2].lo * sh[2].lo, c2hi = sh[2].hi * sh[2].hi;
    // length of {c in (clo, chi] : c^2 in (t1, t2]}
    auto c_len = [&](double t1, double t2) {
        t1 = std::max(t1, c2lo);
        t2 = std::min(t2, c2hi);
        return t2 > t1 ? std::sqrt(t2) - std::sqrt(t1) : 0.0;
    };
    // c > 0 with L < |c^2 + K| <= U
    auto c_measure = [&](double K, double L, double U) { return c_len(L - K, U - K) + c_len(-U - K, -L - K); };
    auto mid = [n](const RealShell& s, unsigned i) { return s.lo + (s.hi - s.lo) * (i + 0.5) / n; };
    const double hb = (sh[1].hi - sh[1].lo) / n, hy = (sh[3].hi - sh[3].lo) / n;
    const double hw = (sh[4].hi - sh[4].lo) / n, hz = (sh[5].hi - sh[5].lo) / n;
    double total = 0;
    for (unsigned ib = 0; ib < n; ++ib) {
        const double b = mid(sh[1], ib);
        const double L = b * sh[0].lo, U = b * sh[0].hi;
        double inner = 0;
        for (unsigned iy = 0; iy < n; ++iy) {
            const double y = mid(sh[3], iy);
            for (unsigned iw = 0; iw < n; ++iw) {
                const double w = mid(sh[4], iw);
                for (unsigned iz = 0; iz < n; ++iz) {
                    const double z = mid(sh[5], iz);
                    const double K = xi2 * y * w * z * z;
                    inner += c_measure(K, L, U) + c_measure(-K, L, U);
                }
            }
        }
        total += inner / b;
    }
    // signs: b, c, z, and two (y, w) patterns per sign of yw
    SingularEstimate est;
    est.method = "grid";
    est.value = 16 * total * hb * hy * hw * hz;
    est.samples = static_cast<u64>(n) * n * n * n;
    return est;
}

bool box_shape_ok(const DyadicBox& box, double lambda) {
    const auto d = [](u64 v) { return static_cast<double>(v); };
    const double norm = std::max({d(box.A), d(box.B), d(box.C), d(box.Y), d(box.W), d(box.Z)});
    const double mn1 = std::min({d(box.A), d(box.B), d(box.C)});
    const double mx1 = std::max({d(box.A), d(box.B), d(box.C)});
    if (mn1 < std::pow(mx1, 1 - lambda)) return false;
    if (std::min(d(box.Y), d(box.W)) < std::max(d(box.Y), d(box.W)) * std::pow(norm, -lambda)) return false;
    const double t1 = d(box.A) * d(box.B), t2 = d(box.C) * d(box.C), t3 = d(box.Y) * d(box.W) * d(box.Z) * d(box.Z);
    return std::min({t1, t2, t3}) >= std::pow(std::max({t1, t2, t3}), 1 - lambda);
}

AsympReport asymp_compare(i64 xi, const DyadicBox& box, bool exclude_minus_square, u64 samples, u64 seed,
                          double lambda, u64 pmax) {
    AsympReport r;
    r.xi = xi;
    r.box = box;
    r.shape_ok = box_shape_ok(box, lambda);
    r.count = count_dyadic_box(xi, box, exclude_minus_square);
    r.series = singular_series(xi, pmax);
    r.integral = singular_integral(xi, box, samples, seed);
    r.main_term = r.series.value * r.integral.value;
    r.relative_error = std::fabs(static_cast<double>(r.count) - r.main_term) / r.main_term;
    r.envelope_ratio = static_cast<double>(r.count) / envelope(box, EnvelopeVector{});
    return r;
}

}  // namespace torsor
