#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "printed_matrices.hpp"
#include "torsor/peyre.hpp"

using namespace torsor;

namespace {

// Area of {r >= 0 : b_l - sum_i r_i B[i][l] >= 0 for all l}, by clipping a large
// square against each half plane (exact rationals) and the shoelace formula.
BigRational clipped_area(const RatMatrix& B, const RatVector& b) {
    using P = std::pair<BigRational, BigRational>;
    const BigRational big(1000);
    std::vector<P> poly{{0, 0}, {big, 0}, {big, big}, {0, big}};
    for (std::size_t l = 0; l < b.size(); ++l) {
        auto f = [&](const P& p) { return b[l] - p.first * B[0][l] - p.second * B[1][l]; };
        std::vector<P> out;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const P& u = poly[i];
            const P& v = poly[(i + 1) % poly.size()];
            const BigRational fu = f(u), fv = f(v);
            if (fu >= 0) out.push_back(u);
            if ((fu >= 0) != (fv >= 0)) {
                const BigRational t = fu / (fu - fv);
                out.push_back({u.first + t * (v.first - u.first), u.second + t * (v.second - u.second)});
            }
        }
        poly = out;
    }
    BigRational twice = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const P& u = poly[i];
        const P& v = poly[(i + 1) % poly.size()];
        twice += u.first * v.second - v.first * u.second;
    }
    return abs(twice) / 2;
}

BigRational interval_length(const RatVector& B, const RatVector& b) {
    BigRational lo = 0, hi = 1000;
    for (std::size_t l = 0; l < b.size(); ++l) {
        if (B[l] > 0) hi = std::min(hi, BigRational(b[l] / B[l]));
        if (B[l] < 0) lo = std::max(lo, BigRational(b[l] / B[l]));
        if (B[l] == 0 && b[l] < 0) return 0;
    }
    return hi > lo ? hi - lo : BigRational(0);
}

// c_inf for x1 by deterministic quadrature. After solving for x11 and using the
// symmetries of the region, the surface integral reduces to
//   16 * 2 * int_{x31 <= x32 <= 1} (P + M) dx31 dx32,
// with m = x32, p = x31 x32, c = m^(-1/2) and x33 <= m^(-3/2); P and M are the
// x21-lengths of the two branches, integrated over x33 in closed form.
double x1_c_infty_quadrature() {
    using boost::math::quadrature::gauss_kronrod;
    auto inner = [](double x31, double x32) {
        const double m = x32, p = x31 * x32, c = 1 / std::sqrt(m), top = std::pow(m, -1.5);
        const double sp = std::sqrt(p), z1 = std::sqrt(c / p);
        const double z2 = std::sqrt(std::max(0.0, 1 / m - c) / p);
        auto arc = [&](double u) {  // int_0^u sqrt(c - p z^2)
            const double s = std::clamp(u * std::sqrt(p / c), 0.0, 1.0);
            return 0.5 * (u * std::sqrt(std::max(0.0, c - p * u * u)) + c / sp * std::asin(s));
        };
        auto plus = [&](double u) {  // int_0^u sqrt(p z^2 + c)
            return 0.5 * (u * std::sqrt(p * u * u + c) + c / sp * std::asinh(u * std::sqrt(p / c)));
        };
        auto minus = [&](double u) {  // int_{z1}^u sqrt(p z^2 - c)
            const double s = std::max(1.0, u * std::sqrt(p / c));
            return 0.5 * (u * std::sqrt(std::max(0.0, p * u * u - c)) - c / sp * std::acosh(s));
        };
        const double P = arc(std::min(top, z1));
        const double knee = std::min(top, z2);
        double M = plus(knee) + std::sqrt(1 / m) * (top - knee);
        if (top > z1) M -= minus(top);
        return P + M;
    };
    // log coordinates s_i = -log x_i, region s2 <= s1
    auto outer = [&](double s2) {
        auto f = [&](double s1) {
            const double x31 = std::exp(-s1), x32 = std::exp(-s2);
            return inner(x31, x32) * x31 * x32;
        };
        return gauss_kronrod<double, 31>::integrate(f, s2, 60.0, 12, 1e-11);
    };
    return 32 * gauss_kronrod<double, 31>::integrate(outer, 0.0, 60.0, 12, 1e-10);
}

}  // namespace

TEST_SUITE("peyre") {

TEST_CASE("exact linear algebra") {
    const RatMatrix m = printed::ints({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}});
    CHECK(rank(m) == 2);
    // unique solutions only: dependent rows are rejected
    CHECK_FALSE(solve_rows(m, {BigRational(3), BigRational(2), BigRational(4)}));
    const RatMatrix basis = printed::ints({{1, 2, 3}, {1, 0, 1}});
    const auto x = solve_rows(basis, {BigRational(3), BigRational(2), BigRational(5)});
    REQUIRE(x);
    CHECK(*x == RatVector{1, 2});
    CHECK_FALSE(solve_rows(basis, {BigRational(0), BigRational(0), BigRational(1)}));
}

TEST_CASE("exponent matrices equal the printed ones") {
    const auto s1 = exponent_system(preset("x1"));
    CHECK(s1.A1 == printed::kX1A1);
    CHECK(s1.A2 == printed::kX1A2);
    const auto s2 = exponent_system(preset("x2"));
    CHECK(s2.A1 == printed::kX2A1);
    CHECK(s2.A2 == printed::kX23A2);
    const auto s3 = exponent_system(preset("x3"));
    CHECK(s3.A1 == printed::kX3A1);
    CHECK(s3.A2 == printed::kX23A2);
}

TEST_CASE("rank condition and c2") {
    const std::vector<std::size_t> c2{1, 2, 2};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto s = preset(preset_names()[i]);
        const auto sys = exponent_system(s);
        CHECK(sys.R == 5);
        CHECK(sys.rank_A == sys.R);
        CHECK(sys.c2 == c2[i]);
        CHECK(sys.c2 == static_cast<std::size_t>(s.symmetry_rank - 1));
        CHECK(sys.I.size() == sys.R);
    }
}

TEST_CASE("row set solves reproduce the remaining rows") {
    for (const auto& n : preset_names()) {
        const auto sys = exponent_system(preset(n));
        auto row = [&](std::size_t j) {
            RatVector r = sys.A1[j];
            r.insert(r.end(), sys.A2[j].begin(), sys.A2[j].end());
            return r;
        };
        for (std::size_t t = 0; t < sys.rest.size(); ++t) {
            RatVector sum(sys.N + sys.k, 0);
            for (std::size_t l = 0; l < sys.R; ++l) {
                const auto r = row(sys.I[l]);
                for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += sys.Bmat[t][l] * r[c];
            }
            CHECK(sum == row(sys.rest[t]));
        }
        RatVector sum(sys.N + sys.k, 0), target(sys.N, 1);
        target.insert(target.end(), sys.A4.begin(), sys.A4.end());
        for (std::size_t l = 0; l < sys.R; ++l) {
            const auto r = row(sys.I[l]);
            for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += sys.b[l] * r[c];
        }
        CHECK(sum == target);
    }
}

TEST_CASE("inadmissible row sets are rejected") {
    const auto x1 = preset("x1");
    // too few rows, then a repeated row
    CHECK_THROWS_AS(exponent_system(x1, std::vector<std::size_t>{0, 1, 2, 3}), PeyreError);
    CHECK_THROWS_AS(exponent_system(x1, std::vector<std::size_t>{0, 0, 2, 3, 4}), PeyreError);
    auto x2 = preset("x2");
    x2.row_set.clear();
    // the greedy rows for x2 contain no single-variable block with exponent 1
    const auto greedy = exponent_system(x2);
    CHECK_THROWS_AS(c_infty(x2, greedy, 20000, 1), PeyreError);
}

TEST_CASE("polytope volumes") {
    CHECK(polytope_volume({{BigRational(1)}, {BigRational(1)}}, {BigRational(2), BigRational(3)}) == 2);
    CHECK(polytope_volume({{BigRational(1), BigRational(1)}}, {BigRational(1)}) == BigRational(1, 2));
    const RatMatrix cube{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    CHECK(polytope_volume(cube, {BigRational(2), BigRational(3), BigRational(5)}) == 30);
    const RatMatrix simplex{{1, 1, 1}};
    CHECK(polytope_volume(simplex, {BigRational(1)}) == BigRational(1, 6));
    CHECK_THROWS_AS(polytope_volume({{BigRational(1), BigRational(-1)}}, {BigRational(1)}), PeyreError);
}

TEST_CASE("c* against independent interval and polygon oracles") {
    const auto s1 = exponent_system(preset("x1"));
    CHECK(c_star(s1) == interval_length(s1.Bmat[0], s1.b));
    CHECK(c_star(s1) == BigRational(1, 6));
    const auto s2 = exponent_system(preset("x2")), s3 = exponent_system(preset("x3"));
    CHECK(c_star(s2) == clipped_area(s2.Bmat, s2.b));
    CHECK(c_star(s3) == clipped_area(s3.Bmat, s3.b));
    CHECK(c_star(s2) == BigRational(1, 15));
    CHECK(c_star(s3) == BigRational(1, 12));
}

TEST_CASE("c* hit counting within 1%") {
    for (const auto& n : preset_names()) {
        const auto sys = exponent_system(preset(n));
        const double exact = c_star(sys).convert_to<double>();
        const auto mc = c_star_mc(sys, 2'000'000, 5);
        CHECK(std::fabs(mc.value - exact) <= 0.01 * exact);
        CHECK(std::fabs(mc.value - exact) <= 4 * mc.error);
    }
}

TEST_CASE("synthetic surface integrals") {
    SurfaceProblem line;
    line.dim = 2;
    line.blocks = {{{0, 1}}, {{1, 1}}};
    line.signs = {1, 1};
    line.region = {{{0, 1.0}}, {{1, 1.0}}};
    line.prefactor = 1;
    REQUIRE(solve_variable(line));
    const auto a = surface_integral(line, 200000, 1);
    CHECK(a.value == doctest::Approx(2).epsilon(4 * a.error / 2 + 1e-3));
    line.prefactor = 4;
    const auto b = surface_integral(line, 200000, 1);
    CHECK(b.value == doctest::Approx(8).epsilon(4 * b.error / 8 + 1e-3));

    // t1 + t2^2 - t3 = 0 inside the unit cube: int_{-1}^{1} (2 - t2^2) dt2 = 10/3
    SurfaceProblem parab;
    parab.dim = 3;
    parab.blocks = {{{0, 1}}, {{1, 2}}, {{2, 1}}};
    parab.signs = {1, 1, -1};
    parab.region = {{{0, 1.0}}, {{1, 1.0}}, {{2, 1.0}}};
    const auto c = surface_integral(parab, 400000, 2);
    CHECK(std::fabs(c.value - 10.0 / 3) <= 4 * c.error);
    CHECK(c.error < 0.01 * c.value);

    SurfaceProblem none = parab;
    none.blocks = {{{0, 2}}, {{1, 2}}, {{2, 1}, {0, 1}}};
    CHECK_FALSE(solve_variable(none));
    CHECK_THROWS_AS(surface_integral(none, 10000, 1), PeyreError);
}

TEST_CASE("x1 c_inf against deterministic quadrature") {
    const double q = x1_c_infty_quadrature();
    MESSAGE("quadrature c_inf(x1) = " << q);
    CHECK(q == doctest::Approx(188.456).epsilon(1e-4));
    const auto s = preset("x1");
    const auto est = c_infty(s, exponent_system(s), 1'000'000, 3);
    CHECK(std::fabs(est.value - q) <= 4 * est.error);
}

TEST_CASE("standard error scales like samples^-1/2") {
    const auto s = preset("x3");
    const auto sys = exponent_system(s);
    const auto small = c_infty(s, sys, 250'000, 8), large = c_infty(s, sys, 1'000'000, 8);
    const double ratio = small.error / large.error;
    CHECK(ratio > 1.6);
    CHECK(ratio < 2.5);
}

TEST_CASE("c* c_inf is invariant across admissible row sets for x1") {
    // drop x11 or drop x12; the two choices are related by the x11 <-> x12 symmetry
    const auto s = preset("x1");
    const auto a = exponent_system(s, std::vector<std::size_t>{1, 2, 3, 4, 5});
    const auto b = exponent_system(s, std::vector<std::size_t>{0, 2, 3, 4, 5});
    const auto ia = c_infty(s, a, 1'000'000, 21), ib = c_infty(s, b, 1'000'000, 22);
    const double pa = c_star(a).convert_to<double>() * ia.value, pb = c_star(b).convert_to<double>() * ib.value;
    const double sa = c_star(a).convert_to<double>() * ia.error, sb = c_star(b).convert_to<double>() * ib.error;
    CHECK(std::fabs(pa - pb) <= 3 * std::hypot(sa, sb));
}

TEST_CASE("local densities: stratified against brute force") {
    for (u64 p : {2, 3, 5, 7}) {
        for (const auto& n : preset_names()) {
            CAPTURE(p);
            CAPTURE(n);
            REQUIRE(c_p_density(preset(n), p, 1) == c_p_density_brute(preset(n), p, 1));
        }
    }
    CHECK(c_p_density(preset("x2"), 3, 2) == c_p_density_brute(preset("x2"), 3, 2));
    CHECK(c_p_density(preset("x1"), 2, 2) == c_p_density_brute(preset("x1"), 2, 2));
    CHECK(c_p_density(preset("x2"), 2, 2) == c_p_density(preset("x2"), 2, 3));
    CHECK(c_p_density(preset("x1"), 2, 1) == BigRational(21, 32));
    CHECK(c_p_density(preset("x2"), 2, 1) == BigRational(27, 64));
    CHECK(c_p_density(preset("x3"), 3, 1) == BigRational(512, 729));
}

TEST_CASE("local densities approach 1") {
    const auto x3 = preset("x3");
    CHECK(c_p_density(x3, 5, 1) > 0);
    double K = 0;
    for (u64 p : primes_up_to(100)) {
        if (p < 5) continue;
        K = std::max(K, double(p) * std::fabs(c_p_density(x3, p, 1).convert_to<double>() - 1));
    }
    for (u64 p : primes_up_to(100)) {
        if (p >= 5) CHECK(std::fabs(c_p_density(x3, p, 1).convert_to<double>() - 1) <= K / double(p));
    }
    CHECK(K < 1);
}

TEST_CASE("finite part and the x2 surjection identity") {
    const auto f = c_fin(preset("x1"), 1000);
    CHECK(f.value > 0);
    CHECK(f.value < 1);
    CHECK(f.tail > 0);
    CHECK(f.factors.front().p == 2);
    for (const auto& lf : f.factors) CHECK(lf.L >= 1);
    for (auto [p, L] : std::vector<std::pair<u64, unsigned>>{{2, 1}, {2, 2}, {3, 1}}) {
        const auto s = x2_surjection(p, L);
        CHECK(s.ok());
        CHECK(s.direct == c_p_density_brute(preset("x2"), p, L));
    }
}

TEST_CASE("breakdown assembly") {
    PeyreOptions o;
    o.samples = 200'000;
    o.pmax = 500;
    const auto s = preset("x2");
    const auto b = peyre_constant(s, o);
    CHECK(b.c2 == 2);
    CHECK(b.product == doctest::Approx(b.c_star.convert_to<double>() * b.c_fin.value * b.c_infty.value));
    CHECK(b.product > 0);
    CHECK(b.uncertainty > 0);
    const auto j = breakdown_json(b, s);
    CHECK(j.find("\"c_star\"") != std::string::npos);
    CHECK(j.find("\"c_infty\"") != std::string::npos);
    CHECK(j.find("\"seeds\"") != std::string::npos);
}

}
