#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "torsor/char_sums.hpp"

using namespace torsor;

namespace {

// #{(y, w) mod a : a | c^2 + xi^2 y w z^2}
i64 s_count(u64 a, u64 c, u64 z, u64 xi) {
    const u64 k = (xi * xi % a) * (z * z % a) % a;
    const u64 c2 = c * c % a;
    i64 n = 0;
    for (u64 y = 0; y < a; ++y) {
        for (u64 w = 0; w < a; ++w) n += (c2 + k * (y * w % a)) % a == 0;
    }
    return n;
}

// #{(g, e) mod a : g^2 + x e^2 = 0 mod a}
i64 t_count(i64 x, u64 a) {
    const i64 m = static_cast<i64>(a);
    const i64 xm = oracle::mod(x, m);
    i64 n = 0;
    for (i64 g = 0; g < m; ++g) {
        for (i64 e = 0; e < m; ++e) n += (g * g + xm * (e * e % m)) % m == 0;
    }
    return n;
}

}  // namespace

TEST_SUITE("char_sums") {

TEST_CASE("S examples") {
    CHECK(std::abs(s_brute({0, 0, 1, 1, 1, 1}) - Complex(1)) < 1e-9);
    CHECK(std::abs(s_brute({0, 0, 5, 1, 1, 1}) - Complex(4)) < 1e-9);
    const auto plus = s_brute({1, 0, 2, 1, 1, 1}), minus = s_brute({-1, 0, 2, 1, 1, 1});
    CHECK(std::abs(plus - std::conj(minus)) < 1e-9);
    CHECK(s_closed_diag(1, 1, 1, 1) == 1);
    CHECK(s_closed_diag(5, 1, 1, 1) == 4);
    CHECK(s_closed_diag(4, 2, 1, 1) == round_integral(s_brute({0, 0, 4, 2, 1, 1})).value);
    CHECK_THROWS(s_brute({0, 0, kBruteModulusMax + 1, 1, 1, 1}));
}

TEST_CASE("S closed form equals the direct count") {
    for (u64 a = 1; a <= 60; ++a) {
        for (u64 c = 1; c <= 6; ++c) {
            for (u64 z = 1; z <= 4; ++z) {
                for (u64 xi : {1, 2, 3, 6}) {
                    const i64 n = s_count(a, c, z, xi);
                    REQUIRE(s_closed_diag(a, c, z, xi) == n);
                    const auto r = round_integral(s_brute({0, 0, a, c, z, xi}));
                    REQUIRE(r.value == n);
                    REQUIRE(r.residual < 1e-6);
                }
            }
        }
    }
}

TEST_CASE("T examples") {
    CHECK(t_closed_diag(7, 1) == 1);
    CHECK(t_closed_diag(1, 5) == 9);
    CHECK(t_closed_diag(2, 3) == 5);
    CHECK(round_integral(t_brute({0, 0, 2, 3})).value == 5);
}

TEST_CASE("T closed form equals the direct count") {
    for (u64 a = 1; a <= 120; ++a) {
        for (i64 x = -30; x <= 30; ++x) {
            if (x == 0) continue;
            const i64 n = t_count(x, a);
            REQUIRE(t_closed_diag(x, a) == n);
        }
    }
    for (u64 a = 1; a <= 40; ++a) {
        for (i64 x = -12; x <= 12; ++x) {
            if (x) REQUIRE(round_integral(t_brute({0, 0, x, a})).value == t_count(x, a));
        }
    }
}

TEST_CASE("Kloosterman sums") {
    CHECK(std::abs(kloosterman(1, 1, 2) - Complex(1)) < 1e-12);
    CHECK(std::abs(kloosterman(1, 1, 3) - Complex(-1)) < 1e-12);
    for (u64 c = 1; c <= 50; ++c) {
        CHECK(std::abs(kloosterman(0, 0, c) - Complex(static_cast<double>(oracle::phi(c)))) < 1e-9);
    }
    // real valued and symmetric in (m, n)
    for (u64 c = 2; c <= 60; ++c) {
        const auto k = kloosterman(3, 5, c);
        REQUIRE(std::fabs(k.imag()) < 1e-9);
        REQUIRE(std::abs(k - kloosterman(5, 3, c)) < 1e-9);
        REQUIRE(std::abs(k) <= kloosterman_bound(3, 5, c) + 1e-9);
    }
    // direct sum for a prime modulus
    const u64 p = 13;
    Complex direct = 0;
    for (u64 x = 1; x < p; ++x) {
        u64 inv = 1;
        while (x * inv % p != 1) ++inv;
        direct += std::polar(1.0, 2 * std::numbers::pi * static_cast<double>((2 * x + 7 * inv) % p) / double(p));
    }
    CHECK(std::abs(direct - kloosterman(2, 7, p)) < 1e-9);
}

TEST_CASE("Gauss sums modulo powers of two") {
    CHECK(std::abs(gauss_pow2(1, 0) - Complex(1)) < 1e-12);
    CHECK(std::abs(gauss_pow2(3, 1)) < 1e-12);
    CHECK(std::abs(gauss_pow2(1, 2) - Complex(2, 2)) < 1e-12);
    for (unsigned rho = 0; rho <= 12; ++rho) {
        for (i64 alpha = -15; alpha <= 15; alpha += 2) {
            REQUIRE(std::abs(gauss_pow2(alpha, rho) - gauss_pow2_direct(alpha, rho)) < 1e-8);
        }
    }
}

TEST_CASE("Weil-type bounds on a reduced grid") {
    for (u64 a = 1; a <= 40; ++a) {
        for (i64 h1 = -4; h1 <= 4; ++h1) {
            for (i64 h2 = -4; h2 <= 4; ++h2) {
                for (u64 c : {1, 2, 3}) {
                    const SQuery q{h1, h2, a, c, 1, 1};
                    REQUIRE(std::abs(s_brute(q)) <= s_weil_bound(q) + 1e-9);
                }
            }
        }
    }
    for (u64 a = 1; a <= 41; a += 2) {
        for (i64 x = -6; x <= 6; ++x) {
            for (i64 k = -3; k <= 3; ++k) {
                if (!x) continue;
                const TQuery q{k, 2 - k, x, a};
                REQUIRE(std::abs(t_brute(q)) <= t_weil_bound(q) + 1e-9);
            }
        }
    }
}

TEST_CASE("verification families pass on small grids") {
    const std::vector<u64> xis{1, 2, 3};
    CHECK(verify_s_closed(40, 4, xis).passed());
    CHECK(verify_t_closed(40, 10).passed());
    CHECK(verify_s_weil(30, 3, xis, 3).passed());
    CHECK(verify_t_weil(31, 6, 3).passed());
    CHECK(verify_kloosterman(100, 4).passed());
    CHECK(verify_gauss_pow2(10).passed());
}

}
