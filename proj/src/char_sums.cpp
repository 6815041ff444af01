#include "torsor/char_sums.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace torsor {

namespace {

// Kahan-compensated complex accumulator.
class Accumulator {
public:
    void add(Complex v) {
        add_part(v.real(), re_, cre_);
        add_part(v.imag(), im_, cim_);
    }
    [[nodiscard]] Complex value() const { return {re_, im_}; }

private:
    static void add_part(double v, double& sum, double& comp) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    double re_ = 0, im_ = 0, cre_ = 0, cim_ = 0;
};

std::vector<Complex> phases(u64 a) {
    std::vector<Complex> out(a);
    for (u64 k = 0; k < a; ++k) {
        const double t = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(a);
        out[k] = {std::cos(t), std::sin(t)};
    }
    return out;
}

u64 mod_i(i64 v, u64 a) {
    const i64 r = v % static_cast<i64>(a);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(a) : r);
}

void check_modulus(u64 a) {
    if (a == 0) throw std::invalid_argument("modulus must be positive");
    if (a > kBruteModulusMax) throw std::invalid_argument("modulus too large for the definitional sum");
}

// Solutions (y, w) mod a of a | c^2 + xi^2 z^2 y w.
std::vector<std::pair<u64, u64>> s_solutions(u64 a, u64 c, u64 z, u64 xi) {
    const u64 c2 = mul_mod(c % a, c % a, a);
    const u64 k = mul_mod(mul_mod(xi % a, xi % a, a), mul_mod(z % a, z % a, a), a);
    std::vector<std::pair<u64, u64>> out;
    for (u64 y = 0; y < a; ++y) {
        const u64 t = mul_mod(k, y, a);
        u64 acc = c2;
        for (u64 w = 0; w < a; ++w) {
            if (acc == 0) out.emplace_back(y, w);
            acc += t;
            if (acc >= a) acc -= a;
        }
    }
    return out;
}

std::vector<std::pair<u64, u64>> t_solutions(i64 x, u64 a) {
    const u64 xm = mod_i(x, a);
    std::vector<u64> sq(a);
    for (u64 g = 0; g < a; ++g) sq[g] = mul_mod(g, g, a);
    std::vector<std::pair<u64, u64>> out;
    for (u64 e = 0; e < a; ++e) {
        const u64 t = mul_mod(xm, sq[e], a);
        const u64 need = t == 0 ? 0 : a - t;
        for (u64 g = 0; g < a; ++g) {
            if (sq[g] == need) out.emplace_back(g, e);
        }
    }
    return out;
}

Complex sum_over(const std::vector<std::pair<u64, u64>>& sols, const std::vector<Complex>& ph, u64 a, i64 h1, i64 h2) {
    const u64 m1 = mod_i(h1, a), m2 = mod_i(h2, a);
    Accumulator acc;
    for (const auto& [u, v] : sols) acc.add(ph[(mul_mod(m1, u, a) + mul_mod(m2, v, a)) % a]);
    return acc.value();
}

u64 gcd3(i64 a, i64 b, i64 c) { return static_cast<u64>(gcd_signed(gcd_signed(a, b), c)); }

std::string describe(const char* what, std::initializer_list<std::pair<const char*, i64>> fields) {
    std::ostringstream s;
    s << what;
    for (const auto& [k, v] : fields) s << ' ' << k << '=' << v;
    return s.str();
}

}  // namespace

Rounded round_integral(Complex v) {
    Rounded r;
    r.value = static_cast<i64>(std::llround(v.real()));
    r.residual = std::abs(v - Complex(static_cast<double>(r.value), 0));
    return r;
}

Complex s_brute(const SQuery& q) {
    check_modulus(q.a);
    return sum_over(s_solutions(q.a, q.c, q.z, q.xi), phases(q.a), q.a, q.h1, q.h2);
}

i64 s_closed_diag(u64 a, u64 c, u64 z, u64 xi) {
    if (a == 0) throw std::invalid_argument("modulus must be positive");
    i64 total = 0;
    for (u64 a1 : divisors(a)) {
        const u64 rest = a / a1;
        for (u64 a3 : divisors(rest)) {
            const u64 a2 = rest / a3;
            const int mu = mobius(a2);
            if (mu == 0) continue;
            if (mul_mod(c % a3, c % a3, a3) != 0) continue;
            const u64 m = a2 * a3;
            const u64 g = gcd(mul_mod(mul_mod(xi % m, xi % m, m), mul_mod(z % m, z % m, m), m), m);
            total += static_cast<i64>(a1 * g * a3) * mu;
        }
    }
    return total;
}

Complex t_brute(const TQuery& q) {
    check_modulus(q.a);
    return sum_over(t_solutions(q.x, q.a), phases(q.a), q.a, q.k1, q.k2);
}

i64 t_closed_diag(i64 x, u64 a) {
    if (a == 0) throw std::invalid_argument("modulus must be positive");
    if (x == 0) throw std::invalid_argument("t_closed_diag: x must be nonzero");
    const u64 ax = static_cast<u64>(x < 0 ? -x : x);
    i64 total = 0;
    for (u64 m : divisors(a)) {
        const u64 d1 = a / m;
        const u64 g = gcd(ax, m);
        if (!is_square(g)) continue;
        const i64 root = static_cast<i64>(isqrt(g));
        const i64 phi = static_cast<i64>(euler_phi(m));
        for (int sign : {1, -1}) {
            // the discriminant condition is imposed on d2 / (x, d2)
            const i64 D = sign * static_cast<i64>(m / g);
            if (!Discriminant::is_valid(D)) continue;
            const int chi = kronecker(Discriminant(D), -x / static_cast<i64>(g));
            total += static_cast<i64>(d1) * phi * chi * root;
        }
    }
    return total;
}

Complex kloosterman(i64 m, i64 n, u64 c) {
    if (c == 0 || c > 100000) throw std::invalid_argument("kloosterman: modulus out of range");
    const auto ph = phases(c);
    const u64 mm = mod_i(m, c), nm = mod_i(n, c);
    Accumulator acc;
    for (u64 x = 0; x < c; ++x) {
        if (gcd(x, c) != 1) continue;
        // inverse by extended Euclid
        i64 t = 0, nt = 1, r = static_cast<i64>(c), nr = static_cast<i64>(x % c);
        while (nr) {
            const i64 qq = r / nr;
            std::tie(t, nt) = std::make_pair(nt, t - qq * nt);
            std::tie(r, nr) = std::make_pair(nr, r - qq * nr);
        }
        const u64 inv = mod_i(t, c);
        acc.add(ph[(mul_mod(mm, x % c, c) + mul_mod(nm, inv, c)) % c]);
    }
    return acc.value();
}

Complex gauss_pow2(i64 alpha, unsigned rho) {
    if (alpha % 2 == 0) throw std::invalid_argument("gauss_pow2: alpha must be odd");
    if (rho == 0) return {1, 0};
    if (rho == 1) return {0, 0};
    if (rho > 60) throw std::invalid_argument("gauss_pow2: rho too large");
    const i64 q = i64{1} << rho;
    const double scale = std::pow(2.0, rho / 2.0);
    return scale * Complex(kronecker(Discriminant(q), alpha), kronecker(Discriminant(-q), alpha));
}

Complex gauss_pow2_direct(i64 alpha, unsigned rho) {
    if (alpha % 2 == 0) throw std::invalid_argument("gauss_pow2: alpha must be odd");
    const u64 q = u64{1} << rho;
    check_modulus(q);
    const auto ph = phases(q);
    const u64 am = mod_i(alpha, q);
    Accumulator acc;
    for (u64 d = 0; d < q; ++d) acc.add(ph[mul_mod(am, mul_mod(d, d, q), q)]);
    return acc.value();
}

double s_weil_bound(const SQuery& q) {
    const auto a = static_cast<i64>(q.a);
    const double g = static_cast<double>(gcd3(a, q.h1, q.h2));
    const double ac2 = static_cast<double>(gcd(q.a, q.c * q.c));
    return static_cast<double>(divisor_count(q.a)) * g * std::sqrt(static_cast<double>(q.a)) * std::sqrt(ac2);
}

double t_weil_bound(const TQuery& q) {
    const i64 v = q.k1 * q.k1 * q.x + q.k2 * q.k2;
    const double g = static_cast<double>(gcd_signed(static_cast<i64>(q.a), v));
    const double ax = static_cast<double>(gcd_signed(static_cast<i64>(q.a), q.x));
    return static_cast<double>(divisor_count(q.a)) * g * std::sqrt(ax);
}

double kloosterman_bound(i64 m, i64 n, u64 c) {
    const double g = static_cast<double>(gcd3(m, n, static_cast<i64>(c)));
    return static_cast<double>(divisor_count(c)) * std::sqrt(static_cast<double>(c)) * std::sqrt(g);
}

FamilyReport verify_s_closed(u64 amax, u64 czmax, const std::vector<u64>& xis) {
    FamilyReport r;
    r.family = "S closed form";
    for (u64 a = 1; a <= amax; ++a) {
        for (u64 xi : xis) {
            for (u64 c = 1; c <= czmax; ++c) {
                for (u64 z = 1; z <= czmax; ++z) {
                    const Complex b = s_brute({0, 0, a, c, z, xi});
                    const auto rb = round_integral(b);
                    const i64 closed = s_closed_diag(a, c, z, xi);
                    const double dev = std::abs(b - Complex(static_cast<double>(closed), 0));
                    r.max_deviation = std::max(r.max_deviation, dev);
                    ++r.cases;
                    if (rb.residual > 1e-6 || rb.value != closed) {
                        if (!r.failures++) {
                            r.first_failure = describe("S", {{"a", a}, {"c", c}, {"z", z}, {"xi", xi}});
                        }
                    }
                }
            }
        }
    }
    return r;
}

FamilyReport verify_t_closed(u64 amax, i64 xmax) {
    FamilyReport r;
    r.family = "T closed form";
    for (u64 a = 1; a <= amax; ++a) {
        for (i64 x = -xmax; x <= xmax; ++x) {
            if (x == 0) continue;
            const Complex b = t_brute({0, 0, x, a});
            const auto rb = round_integral(b);
            const i64 closed = t_closed_diag(x, a);
            r.max_deviation = std::max(r.max_deviation, std::abs(b - Complex(static_cast<double>(closed), 0)));
            ++r.cases;
            if (rb.residual > 1e-6 || rb.value != closed) {
                if (!r.failures++) r.first_failure = describe("T", {{"a", a}, {"x", x}});
            }
        }
    }
    return r;
}

FamilyReport verify_s_weil(u64 amax, u64 czmax, const std::vector<u64>& xis, i64 hmax) {
    FamilyReport r;
    r.family = "S Weil bound";
    for (u64 a = 1; a <= amax; ++a) {
        const auto ph = phases(a);
        for (u64 xi : xis) {
            for (u64 c = 1; c <= czmax; ++c) {
                for (u64 z = 1; z <= czmax; ++z) {
                    const auto sols = s_solutions(a, c, z, xi);
                    for (i64 h1 = -hmax; h1 <= hmax; ++h1) {
                        for (i64 h2 = -hmax; h2 <= hmax; ++h2) {
                            const SQuery q{h1, h2, a, c, z, xi};
                            const double v = std::abs(sum_over(sols, ph, a, h1, h2));
                            const double bound = s_weil_bound(q);
                            r.max_ratio = std::max(r.max_ratio, v / bound);
                            ++r.cases;
                            if (v > bound * (1 + 1e-9) + 1e-9 && !r.failures++) {
                                r.first_failure = describe("S", {{"h1", h1}, {"h2", h2}, {"a", a}, {"c", c}, {"z", z},
                                                                 {"xi", xi}});
                            }
                        }
                    }
                }
            }
        }
    }
    return r;
}

FamilyReport verify_t_weil(u64 amax, i64 xmax, i64 kmax) {
    FamilyReport r;
    r.family = "T Weil bound";
    for (u64 a = 1; a <= amax; a += 2) {
        const auto ph = phases(a);
        for (i64 x = -xmax; x <= xmax; ++x) {
            if (x == 0) continue;
            const auto sols = t_solutions(x, a);
            for (i64 k1 = -kmax; k1 <= kmax; ++k1) {
                for (i64 k2 = -kmax; k2 <= kmax; ++k2) {
                    const TQuery q{k1, k2, x, a};
                    const double v = std::abs(sum_over(sols, ph, a, k1, k2));
                    const double bound = t_weil_bound(q);
                    r.max_ratio = std::max(r.max_ratio, v / bound);
                    ++r.cases;
                    if (v > bound * (1 + 1e-9) + 1e-9 && !r.failures++) {
                        r.first_failure = describe("T", {{"k1", k1}, {"k2", k2}, {"x", x}, {"a", a}});
                    }
                }
            }
        }
    }
    return r;
}

FamilyReport verify_kloosterman(u64 cmax, i64 mnmax) {
    FamilyReport r;
    r.family = "Kloosterman bound";
    for (u64 c = 1; c <= cmax; ++c) {
        for (i64 m = -mnmax; m <= mnmax; ++m) {
            for (i64 n = -mnmax; n <= mnmax; ++n) {
                const double v = std::abs(kloosterman(m, n, c));
                const double bound = kloosterman_bound(m, n, c);
                r.max_ratio = std::max(r.max_ratio, v / bound);
                ++r.cases;
                if (v > bound * (1 + 1e-9) + 1e-9 && !r.failures++) {
                    r.first_failure = describe("K", {{"m", m}, {"n", n}, {"c", static_cast<i64>(c)}});
                }
            }
        }
    }
    return r;
}

FamilyReport verify_gauss_pow2(unsigned rho_max) {
    FamilyReport r;
    r.family = "Gauss sums mod 2^rho";
    for (unsigned rho = 0; rho <= rho_max; ++rho) {
        for (i64 alpha = -15; alpha <= 15; alpha += 2) {
            const double dev = std::abs(gauss_pow2(alpha, rho) - gauss_pow2_direct(alpha, rho));
            r.max_deviation = std::max(r.max_deviation, dev);
            ++r.cases;
            if (dev > 1e-6 && !r.failures++) {
                r.first_failure = describe("G", {{"alpha", alpha}, {"rho", rho}});
            }
        }
    }
    return r;
}

}  // namespace torsor
