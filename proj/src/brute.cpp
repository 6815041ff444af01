// Reference counters: plain nested loops, used as oracles for the fast paths.
#include <cmath>
#include <functional>

#include "torsor/enumerate.hpp"

namespace torsor {

namespace {

struct FloatMono {
    std::vector<std::pair<std::size_t, double>> terms;
};

// Conservative per-variable bound from the height monomials with the
// variables before `idx` fixed and later ones at 1.
i64 loose_bound(const std::vector<FloatMono>& monos, std::size_t idx, const TorsorPoint& x, double logB) {
    double best = 1e300;
    for (const auto& m : monos) {
        double alpha = 0, used = 0;
        for (const auto& [v, a] : m.terms) {
            if (v == idx) alpha = a;
            else if (v < idx) used += a * std::log(std::fabs(static_cast<double>(x[v])));
        }
        if (alpha == 0) continue;
        best = std::min(best, (logB - used) / alpha);
    }
    if (best < -1e-9) return 0;
    return static_cast<i64>(std::floor(std::exp(best) * (1 + 1e-9))) + 1;
}

}  // namespace

u64 count_brute(const VarietySpec& spec, HeightBound bound, bool apply_thin) {
    std::vector<FloatMono> monos;
    for (const auto& h : spec.height) {
        FloatMono m;
        for (const auto& [v, e] : h) m.terms.emplace_back(v, e.convert_to<double>());
        monos.push_back(std::move(m));
    }
    const double logB = std::log(static_cast<double>(bound.value));
    const std::size_t n = spec.size();
    TorsorPoint x(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (loose_bound(monos, i, x, logB) > 1001) {
            throw std::invalid_argument("count_brute: bound too large for direct loops");
        }
    }

    u64 count = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        const i64 r = loose_bound(monos, i, x, logB);
        for (i64 v = -r; v <= r; ++v) {
            if (v == 0) continue;
            x[i] = v;
            if (i + 1 < n) {
                rec(i + 1);
                continue;
            }
            // the equation is the cheapest filter, so test it first
            i128 total = 0;
            for (int b = 1; b <= spec.blocks(); ++b) {
                i128 term = spec.signs[b - 1];
                for (std::size_t j = 0; j < n; ++j) {
                    if (spec.variables[j].block != b) continue;
                    for (int e = 0; e < spec.variables[j].h; ++e) term *= x[j];
                }
                total += term;
            }
            if (total != 0) continue;
            if (!height_ok(spec, x, bound) || !gcd_ok(spec, x)) continue;
            if (apply_thin && !thin_ok(spec, x)) continue;
            ++count;
        }
        x[i] = 1;
    };
    rec(0);
    return count;
}

std::array<Shell, 6> shells(const DyadicBox& box) {
    auto s = [](u64 X) { return Shell{X / 2, X}; };
    return {s(box.A), s(box.B), s(box.C), s(box.Y), s(box.W), s(box.Z)};
}

u64 count_box_brute(i64 xi, const std::array<Shell, 6>& sh, bool exclude_minus_square) {
    const i128 xi2 = static_cast<i128>(xi) * xi;
    auto values = [](const Shell& s) {
        std::vector<i64> out;
        for (u64 v = s.lo + 1; v <= s.hi; ++v) {
            out.push_back(static_cast<i64>(v));
            out.push_back(-static_cast<i64>(v));
        }
        return out;
    };
    const auto A = values(sh[0]), B = values(sh[1]), C = values(sh[2]);
    const auto Y = values(sh[3]), W = values(sh[4]), Z = values(sh[5]);
    u64 count = 0;
    for (i64 a : A)
        for (i64 b : B)
            for (i64 c : C)
                for (i64 y : Y)
                    for (i64 w : W)
                        for (i64 z : Z) {
                            const i128 v = static_cast<i128>(a) * b + static_cast<i128>(c) * c + xi2 * y * w * z * z;
                            if (v != 0) continue;
                            if (exclude_minus_square && is_minus_square(y * w)) continue;
                            ++count;
                        }
    return count;
}

u64 count_box_shells(i64 xi, const std::array<Shell, 6>& sh, bool exclude_minus_square) {
    if (xi == 0) throw std::invalid_argument("count_box: xi must be nonzero");
    const u128 xi2 = static_cast<u128>(static_cast<i128>(xi) * xi);
    const Shell& sa = sh[0];
    const Shell& sb = sh[1];
    const u128 mmax = static_cast<u128>(sh[2].hi) * sh[2].hi + xi2 * sh[3].hi * sh[4].hi * sh[5].hi * sh[5].hi;
    const SpfSieve sieve(static_cast<u64>(std::min<u128>(mmax + 1, 1ULL << 26)));
    if (mmax > static_cast<u128>(~0ULL) / 2) throw std::invalid_argument("count_box: box too large");

    u64 p[64];
    unsigned e[64];
    std::vector<u64> divs;
    // pairs (a, b) with |a||b| = m, |a| in the a-shell, |b| in the b-shell
    auto pairs = [&](u64 m) -> u64 {
        if (m == 0) return 0;
        const u64 lo = std::max<u64>(sa.lo + 1, (m + sb.hi - 1) / sb.hi);
        const u64 hi = sa.hi;
        if (lo > hi) return 0;
        const unsigned np = sieve.factor(m, p, e);
        divs.assign(1, 1);
        for (unsigned i = 0; i < np; ++i) {
            const std::size_t sz = divs.size();
            for (std::size_t j = 0; j < sz; ++j) {
                u64 d = divs[j];
                for (unsigned k = 0; k < e[i]; ++k) {
                    if (d > hi / p[i]) break;
                    d *= p[i];
                    divs.push_back(d);
                }
            }
        }
        u64 n = 0;
        for (u64 d : divs) {
            if (d < lo || d > hi) continue;
            if (m / d > sb.lo) ++n;
        }
        return n;
    };

    u64 count = 0;
    for (u64 y = sh[3].lo + 1; y <= sh[3].hi; ++y) {
        for (u64 w = sh[4].lo + 1; w <= sh[4].hi; ++w) {
            const bool square = is_square(y * w);
            for (u64 z = sh[5].lo + 1; z <= sh[5].hi; ++z) {
                const u128 t = xi2 * y * w * z * z;
                for (u64 c = sh[2].lo + 1; c <= sh[2].hi; ++c) {
                    const u128 c2 = static_cast<u128>(c) * c;
                    // yw > 0: ab = -(c^2 + t); two sign patterns of (y, w)
                    u64 n = 2 * pairs(static_cast<u64>(c2 + t));
                    // yw < 0: ab = t - c^2
                    if (!(exclude_minus_square && square)) {
                        const u128 d = c2 > t ? c2 - t : t - c2;
                        n += 2 * pairs(static_cast<u64>(d));
                    }
                    // signs of c and z, and the sign of the (a, b) pair
                    count += n * 8;
                }
            }
        }
    }
    return count;
}

u64 count_dyadic_box(i64 xi, const DyadicBox& box, bool exclude_minus_square) {
    return count_box_shells(xi, shells(box), exclude_minus_square);
}

}  // namespace torsor
