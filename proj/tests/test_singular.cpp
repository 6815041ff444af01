#include "doctest.h"
#include "oracles.hpp"
#include "torsor/singular.hpp"

using namespace torsor;

namespace {

// #{(a, b, c, y, w, z) mod m : ab + c^2 + xi^2 y w z^2 = 0} via two convolutions.
BigInt solutions_mod(u64 m, i64 xi) {
    std::vector<u64> ab(m, 0), sq(m, 0), ywz(m, 0);
    for (u64 a = 0; a < m; ++a) {
        for (u64 b = 0; b < m; ++b) ++ab[a * b % m];
        ++sq[a * a % m];
    }
    const u64 x2 = static_cast<u64>(oracle::mod(xi * xi, static_cast<i64>(m)));
    for (u64 y = 0; y < m; ++y) {
        for (u64 w = 0; w < m; ++w) {
            const u64 yw = x2 * (y * w % m) % m;
            for (u64 z = 0; z < m; ++z) ++ywz[yw * (z * z % m) % m];
        }
    }
    std::vector<u64> rest(m, 0);
    for (u64 s = 0; s < m; ++s) {
        for (u64 t = 0; t < m; ++t) rest[(s + t) % m] += sq[s] * ywz[t];
    }
    BigInt n = 0;
    for (u64 t = 0; t < m; ++t) n += BigInt(ab[t]) * rest[(m - t) % m];
    return n;
}

BigRational density(u64 m, i64 xi) {
    BigInt m5 = 1;
    for (int i = 0; i < 5; ++i) m5 *= m;
    return BigRational(solutions_mod(m, xi), m5);
}

}  // namespace

TEST_SUITE("singular") {

TEST_CASE("euler factor examples") {
    CHECK(euler_factor(2, 0) == BigRational(17, 14));
    CHECK(euler_factor(3, 1) == BigRational(49, 39));
    for (u64 p : {2, 3, 5, 7, 101}) {
        const BigRational P(p);
        CHECK(euler_factor(p, 0) == 1 + (1 + P) / (P * (1 + P + P * P)));
        for (unsigned r = 0; r < 5; ++r) {
            CHECK(euler_factor(p, r) > 1);
            CHECK(euler_factor(p, r + 1) >= euler_factor(p, r));
        }
    }
}

TEST_CASE("count_yz2 closed form against brute force") {
    CHECK(count_yz2(2, 1) == 10);
    CHECK(count_yz2(3, 1) == 33);
    CHECK(count_yz2(2, 2) == 88);
    for (u64 p : {2, 3, 5, 7}) {
        for (unsigned n : {1u, 2u}) {
            const u64 m = oracle::ipow(p, 2 * n);
            u64 scan = 0;
            for (u64 y = 0; y < m; ++y) {
                for (u64 z = 0; z < m; ++z) scan += (y * (z * z % m)) % m == 0;
            }
            REQUIRE(count_yz2(p, n) == scan);
            REQUIRE(count_yz2_brute(p, n) == scan);
        }
    }
}

TEST_CASE("q-sum terms") {
    CHECK(singular_term_brute(1, 1) + singular_term_brute(2, 1) + singular_term_brute(4, 1) == BigRational(37, 32));
    for (i64 xi : {1, 2, 6}) {
        for (u64 p : {2, 3}) {
            BigRational partial = 0;
            for (unsigned j = 0; oracle::ipow(p, j) <= 81; ++j) {
                const u64 q = oracle::ipow(p, j);
                CAPTURE(xi);
                CAPTURE(q);
                const auto closed = singular_term_closed(p, j, xi);
                REQUIRE(singular_term_brute(q, xi) == closed);
                partial += closed;
                // sum over q | p^j of the terms is the solution density mod p^j
                REQUIRE(partial == density(q, xi));
            }
        }
    }
}

TEST_CASE("closed terms sum to the euler factor") {
    for (u64 p : {2, 3, 5}) {
        for (i64 xi : {1, 2, 6, 12}) {
            const unsigned r = valuation(static_cast<u64>(xi), p);
            BigRational partial = 0;
            for (unsigned j = 0; j <= 2 * r + 400; ++j) partial += singular_term_closed(p, j, xi);
            CHECK(abs(euler_factor(p, r) - partial) < BigRational(1, BigInt("1000000000000000000000")));
        }
    }
    CHECK(singular_term_closed(2, 120, 1) > 0);
    CHECK_THROWS(count_yz2(2, 30));
}

TEST_CASE("local densities converge to the euler factor") {
    for (i64 xi : {1, 2}) {
        double prev = 1e9;
        for (unsigned j = 1; j <= 4; ++j) {
            const double gap =
                std::fabs((density(oracle::ipow(3, j), xi) - euler_factor(3, 0)).convert_to<double>());
            CHECK(gap <= prev);
            prev = gap;
        }
        CHECK(prev < 2e-3);
    }
}

TEST_CASE("euler product") {
    const auto two = singular_series(1, 2);
    REQUIRE(two.exact);
    CHECK(*two.exact == BigRational(17, 14));
    CHECK(two.error > 0);
    double last = 0;
    for (u64 pmax : {10, 100, 1000, 10000}) {
        const auto s = singular_series(1, pmax);
        CHECK(s.value > last);
        last = s.value;
    }
    CHECK(singular_series(6, 1000).value > singular_series(1, 1000).value);
}

TEST_CASE("singular integral: empty region, splitting, grid, symmetry") {
    // c^2 ~ 2^40 cannot be cancelled by ab + y w z^2 of size <= 2^11
    const DyadicBox empty{32, 32, 1ULL << 20, 4, 4, 4};
    CHECK(singular_integral(1, empty, 20000, 1).value == 0.0);

    const DyadicBox box{64, 64, 64, 8, 8, 8};
    const auto sh = real_shells(box);
    const auto whole = singular_integral(1, sh, 400000, 11);
    auto lo = sh, hi = sh;
    lo[0] = {sh[0].lo, 0.75 * sh[0].hi};
    hi[0] = {0.75 * sh[0].hi, sh[0].hi};
    const auto a = singular_integral(1, lo, 400000, 12), b = singular_integral(1, hi, 400000, 13);
    const double combined = std::sqrt(whole.error * whole.error + a.error * a.error + b.error * b.error);
    CHECK(std::fabs(a.value + b.value - whole.value) <= 3 * combined);

    const auto grid = singular_integral_grid(1, sh, 48);
    CHECK(std::fabs(grid.value - whole.value) <= 0.02 * grid.value);

    // the integrand depends on (y, w) only through y w; mirrored shells sample the same law
    const auto other = singular_integral(1, sh, 400000, 99);
    CHECK(std::fabs(other.value - whole.value) <= 3 * std::hypot(other.error, whole.error));

    const auto split = singular_integral(1, sh, 400000, 11, 4);
    CHECK(split.error > 0);
    CHECK(std::fabs(split.value - whole.value) <= 3 * std::hypot(split.error, whole.error));
    CHECK(singular_integral(1, sh, 100000, 5, 4).value == singular_integral(1, sh, 100000, 5, 4).value);
}

TEST_CASE("box shape and asymptotic comparison") {
    CHECK(box_shape_ok({256, 256, 256, 16, 16, 16}, 0.25));
    CHECK_FALSE(box_shape_ok({1 << 16, 4, 256, 16, 16, 16}, 0.25));
    const auto r = asymp_compare(1, {256, 256, 256, 16, 16, 16}, true, 200000, 3);
    CHECK(r.count == count_dyadic_box(1, {256, 256, 256, 16, 16, 16}, true));
    CHECK(r.main_term == doctest::Approx(r.series.value * r.integral.value));
    CHECK(r.relative_error == doctest::Approx(std::fabs(double(r.count) - r.main_term) / r.main_term));
    CHECK(r.envelope_ratio > 0);
    CHECK(envelope({16, 16, 16, 4, 4, 4}, {}) == doctest::Approx(16.0 * 4 * 8 * 2));
}

}
