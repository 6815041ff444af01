#include "torsor/peyre.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>

#include "json.hpp"

namespace torsor {

namespace {

// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> rref(RatMatrix& m, std::size_t ncols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < m.size(); ++c) {
        std::size_t piv = r;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[r], m[piv]);
        const BigRational inv = 1 / m[r][c];
        for (auto& v : m[r]) v *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            const BigRational f = m[i][c];
            for (std::size_t j = c; j < m[i].size(); ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::optional<RatVector> solve_square(RatMatrix a, const RatVector& y) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) a[i].push_back(y[i]);
    if (rref(a, n).size() != n) return std::nullopt;
    RatVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n];
    return x;
}

struct Halfspace {
    RatVector a;
    BigRational c;  // a . x <= c
};

BigRational dot(const RatVector& a, const RatVector& x) {
    BigRational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
    return s;
}

// Vertices of {a.x <= c for ineq, a.x = c for eq} by exhausting tight subsets.
std::vector<RatVector> vertices(std::size_t d, const std::vector<Halfspace>& ineq, const std::vector<Halfspace>& eq) {
    std::vector<RatVector> out;
    if (eq.size() > d) return out;
    const std::size_t need = d - eq.size();
    const std::size_t m = ineq.size();
    if (m > 24) throw PeyreError("polytope: too many constraints");
    for (u64 mask = 0; mask < (1ULL << m); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) != need) continue;
        RatMatrix a;
        RatVector y;
        for (const auto& h : eq) {
            a.push_back(h.a);
            y.push_back(h.c);
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (mask >> i & 1) {
                a.push_back(ineq[i].a);
                y.push_back(ineq[i].c);
            }
        }
        auto x = solve_square(a, y);
        if (!x) continue;
        bool feasible = true;
        for (const auto& h : ineq) feasible = feasible && dot(h.a, *x) <= h.c;
        if (feasible && std::find(out.begin(), out.end(), *x) == out.end()) out.push_back(*x);
    }
    return out;
}

BigRational volume_rec(std::size_t d, const std::vector<Halfspace>& hs) {
    if (d == 1) {
        std::optional<BigRational> lo, hi;
        for (const auto& h : hs) {
            if (h.a[0] == 0) {
                if (h.c < 0) return 0;
                continue;
            }
            const BigRational v = h.c / h.a[0];
            if (h.a[0] > 0) hi = hi ? std::min(*hi, v) : v;
            else lo = lo ? std::max(*lo, v) : v;
        }
        if (!lo || !hi) throw PeyreError("polytope: unbounded");
        return *hi > *lo ? *hi - *lo : BigRational(0);
    }
    const auto vs = vertices(d, hs, {});
    std::vector<BigRational> xs;
    for (const auto& v : vs) xs.push_back(v[0]);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    // slice volume is a polynomial of degree d - 1 between breakpoints; Simpson is exact up to cubics
    auto slice = [&](const BigRational& x) -> BigRational {
        std::vector<Halfspace> sub;
        for (const auto& h : hs) {
            Halfspace s{RatVector(h.a.begin() + 1, h.a.end()), h.c - h.a[0] * x};
            if (std::all_of(s.a.begin(), s.a.end(), [](const BigRational& v) { return v == 0; })) {
                if (s.c < 0) return BigRational(0);
                continue;
            }
            sub.push_back(std::move(s));
        }
        return volume_rec(d - 1, sub);
    };
    BigRational total = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const BigRational& a = xs[i];
        const BigRational& b = xs[i + 1];
        total += (b - a) / 6 * (slice(a) + 4 * slice((a + b) / 2) + slice(b));
    }
    return total;
}

}  // namespace

std::size_t rank(RatMatrix m) {
    const std::size_t ncols = m.empty() ? 0 : m[0].size();
    return rref(m, ncols).size();
}

std::optional<RatVector> solve_rows(const RatMatrix& rows, const RatVector& target) {
    const std::size_t r = rows.size();
    const std::size_t n = target.size();
    // columns are the rows; unknowns x_l
    RatMatrix a(n, RatVector(r + 1));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = 0; l < r; ++l) a[j][l] = rows[l][j];
        a[j][r] = target[j];
    }
    const auto piv = rref(a, r + 1);
    if (!piv.empty() && piv.back() == r) return std::nullopt;  // inconsistent
    if (piv.size() != r) return std::nullopt;                  // not unique
    RatVector x(r);
    for (std::size_t i = 0; i < r; ++i) x[piv[i]] = a[i][r];
    return x;
}

ExponentSystem exponent_system(const VarietySpec& spec, const std::optional<std::vector<std::size_t>>& rows) {
    validate(spec);
    ExponentSystem s;
    s.J = spec.size();
    s.N = spec.height.size();
    s.k = static_cast<std::size_t>(spec.blocks());
    const int k = spec.blocks();

    s.A1.assign(s.J, RatVector(s.N, 0));
    for (std::size_t nu = 0; nu < s.N; ++nu) {
        for (const auto& [v, e] : spec.height[nu]) s.A1[v][nu] = e;
    }
    s.A2.assign(s.J, RatVector(s.k, 0));
    for (std::size_t v = 0; v < s.J; ++v) {
        const int i = spec.variables[v].block;
        const int h = spec.variables[v].h;
        for (int mu = 1; mu <= k; ++mu) {
            BigRational e;
            if (i < k) e = mu < k ? (mu == i ? h : 0) : -1;
            else e = mu < k ? -h : h - 1;
            s.A2[v][mu - 1] = e;
        }
    }
    s.A3.assign(s.N, 1);
    s.A4.assign(s.k, 0);
    s.A4.back() = -1;

    RatMatrix Z(s.J);
    for (std::size_t v = 0; v < s.J; ++v) {
        Z[v] = s.A1[v];
        Z[v].insert(Z[v].end(), s.A2[v].begin(), s.A2[v].end());
    }
    RatVector last = s.A3;
    last.insert(last.end(), s.A4.begin(), s.A4.end());

    s.R = rank(s.A1);
    RatMatrix full = Z;
    full.push_back(last);
    s.rank_A = rank(full);
    s.c2 = s.J - s.R;
    if (s.rank_A != s.R) {
        throw PeyreError("rank condition fails: rk(A1) = " + std::to_string(s.R) + ", rk(A) = " +
                         std::to_string(s.rank_A));
    }

    if (rows) s.I = *rows;
    else if (!spec.row_set.empty()) s.I = spec.row_set;
    else {
        RatMatrix acc;
        for (std::size_t v = 0; v < s.J && s.I.size() < s.R; ++v) {
            acc.push_back(Z[v]);
            if (rank(acc) == acc.size()) s.I.push_back(v);
            else acc.pop_back();
        }
    }
    std::sort(s.I.begin(), s.I.end());
    RatMatrix ZI;
    for (std::size_t v : s.I) {
        if (v >= s.J) throw PeyreError("row set index out of range");
        ZI.push_back(Z[v]);
    }
    if (s.I.size() != s.R || rank(ZI) != s.R) throw PeyreError("row set is not a basis of the row space");
    for (std::size_t v = 0; v < s.J; ++v) {
        if (std::find(s.I.begin(), s.I.end(), v) == s.I.end()) s.rest.push_back(v);
    }
    for (std::size_t v : s.rest) {
        auto x = solve_rows(ZI, Z[v]);
        if (!x) throw PeyreError("row " + spec.variables[v].id + " is outside the span of the row set");
        s.Bmat.push_back(std::move(*x));
    }
    auto b = solve_rows(ZI, last);
    if (!b) throw PeyreError("last row is outside the span of the row set");
    s.b = std::move(*b);
    return s;
}

BigRational polytope_volume(const RatMatrix& M, const RatVector& rhs) {
    if (M.empty()) throw PeyreError("polytope: no constraints");
    const std::size_t d = M[0].size();
    if (d == 0) {
        return std::all_of(rhs.begin(), rhs.end(), [](const BigRational& v) { return v >= 0; }) ? 1 : 0;
    }
    if (d > 4) throw PeyreError("polytope: exact volume implemented up to dimension 4");
    std::vector<Halfspace> hs;
    for (std::size_t l = 0; l < M.size(); ++l) hs.push_back({M[l], rhs[l]});
    for (std::size_t i = 0; i < d; ++i) {
        RatVector a(d, 0);
        a[i] = -1;
        hs.push_back({a, 0});
    }
    // bounded iff the recession cone {y >= 0, M y <= 0} is trivial
    std::vector<Halfspace> cone;
    for (const auto& h : hs) cone.push_back({h.a, 0});
    if (!vertices(d, cone, {{RatVector(d, 1), 1}}).empty()) throw PeyreError("polytope: unbounded");
    return volume_rec(d, hs);
}

namespace {

std::pair<RatMatrix, RatVector> star_constraints(const ExponentSystem& sys) {
    RatMatrix M(sys.R, RatVector(sys.c2));
    for (std::size_t l = 0; l < sys.R; ++l) {
        for (std::size_t i = 0; i < sys.c2; ++i) M[l][i] = sys.Bmat[i][l];
    }
    return {M, sys.b};
}

}  // namespace

BigRational c_star(const ExponentSystem& sys) {
    const auto [M, rhs] = star_constraints(sys);
    return polytope_volume(M, rhs);
}

SingularEstimate c_star_mc(const ExponentSystem& sys, u64 samples, u64 seed) {
    const auto [M, rhs] = star_constraints(sys);
    const std::size_t d = sys.c2;
    if (d == 0 || samples == 0) throw PeyreError("c_star_mc: needs c2 >= 1 and samples > 0");
    std::vector<Halfspace> hs;
    for (std::size_t l = 0; l < M.size(); ++l) hs.push_back({M[l], rhs[l]});
    for (std::size_t i = 0; i < d; ++i) {
        RatVector a(d, 0);
        a[i] = -1;
        hs.push_back({a, 0});
    }
    std::vector<double> hi(d, 0);
    for (const auto& v : vertices(d, hs, {})) {
        for (std::size_t i = 0; i < d; ++i) hi[i] = std::max(hi[i], v[i].convert_to<double>());
    }
    std::vector<std::vector<double>> Md(M.size(), std::vector<double>(d));
    std::vector<double> rd(M.size());
    for (std::size_t l = 0; l < M.size(); ++l) {
        for (std::size_t i = 0; i < d; ++i) Md[l][i] = M[l][i].convert_to<double>();
        rd[l] = rhs[l].convert_to<double>();
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> r(d);
    u64 hits = 0;
    for (u64 n = 0; n < samples; ++n) {
        for (std::size_t i = 0; i < d; ++i) r[i] = hi[i] * unit(rng);
        bool in = true;
        for (std::size_t l = 0; l < Md.size() && in; ++l) {
            in = std::inner_product(r.begin(), r.end(), Md[l].begin(), 0.0) <= rd[l];
        }
        hits += in;
    }
    const double box = std::accumulate(hi.begin(), hi.end(), 1.0, std::multiplies<>());
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    SingularEstimate est;
    est.method = "monte-carlo";
    est.value = box * p;
    est.error = box * std::sqrt(p * (1 - p) / static_cast<double>(samples));
    est.seed = seed;
    est.samples = samples;
    return est;
}

SurfaceProblem surface_problem(const VarietySpec& spec, const ExponentSystem& sys) {
    SurfaceProblem pr;
    pr.dim = sys.I.size();
    std::map<std::size_t, std::size_t> local;
    for (std::size_t i = 0; i < sys.I.size(); ++i) local[sys.I[i]] = i;
    for (int b = 1; b <= spec.blocks(); ++b) {
        std::vector<std::pair<std::size_t, int>> mono;
        for (std::size_t v : spec.block_members(b)) {
            if (local.count(v)) mono.emplace_back(local[v], spec.variables[v].h);
        }
        pr.blocks.push_back(std::move(mono));
        pr.signs.push_back(spec.signs[b - 1]);
    }
    for (const auto& h : spec.height) {
        std::vector<std::pair<std::size_t, double>> mono;
        for (const auto& [v, e] : h) {
            if (local.count(v)) mono.emplace_back(local[v], e.convert_to<double>());
        }
        if (!mono.empty()) pr.region.push_back(std::move(mono));
    }
    pr.prefactor = std::ldexp(1.0, static_cast<int>(sys.c2));
    return pr;
}

std::optional<std::size_t> solve_variable(const SurfaceProblem& problem) {
    for (const auto& mono : problem.blocks) {
        if (mono.size() == 1 && mono[0].second == 1) return mono[0].first;
    }
    return std::nullopt;
}

namespace {

double log_add(double a, double b) {
    if (a == -INFINITY) return b;
    if (b == -INFINITY) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// Independent Laplace(1) / Cauchy(4) coordinates, mixed evenly; the Cauchy part
// dominates every exponential tail of the integrand.
struct DefensiveProposal {
    static constexpr double kLap = 1.0, kCau = 4.0;

    template <class Rng>
    void draw(std::vector<double>& u, Rng& rng) const {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const bool heavy = unit(rng) < 0.5;
        for (auto& x : u) {
            if (heavy) {
                x = kCau * std::tan(M_PI * (unit(rng) - 0.5));
            } else {
                const double e = -kLap * std::log1p(-unit(rng));
                x = unit(rng) < 0.5 ? -e : e;
            }
        }
    }

    [[nodiscard]] double log_density(const std::vector<double>& u) const {
        double lap = 0, cau = 0;
        for (double x : u) {
            lap += -std::log(2 * kLap) - std::fabs(x) / kLap;
            cau += -std::log(M_PI * kCau) - std::log1p((x / kCau) * (x / kCau));
        }
        return std::log(0.5) + log_add(lap, cau);
    }
};

// Multivariate Student t with nu = 3, fitted to weighted draws.
struct StudentProposal {
    static constexpr double kNu = 3.0;
    std::vector<double> mu;
    std::vector<std::vector<double>> chol;  // lower triangular
    double log_norm = 0;

    bool fit(const std::vector<std::vector<double>>& xs, const std::vector<double>& ws, double inflate) {
        const std::size_t m = xs.empty() ? 0 : xs[0].size();
        double wsum = 0;
        for (double w : ws) wsum += w;
        if (m == 0 || !(wsum > 0)) return false;
        mu.assign(m, 0.0);
        for (std::size_t n = 0; n < xs.size(); ++n) {
            for (std::size_t i = 0; i < m; ++i) mu[i] += ws[n] * xs[n][i] / wsum;
        }
        std::vector<std::vector<double>> cov(m, std::vector<double>(m, 0.0));
        for (std::size_t n = 0; n < xs.size(); ++n) {
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j <= i; ++j) cov[i][j] += ws[n] * (xs[n][i] - mu[i]) * (xs[n][j] - mu[j]) / wsum;
            }
        }
        chol.assign(m, std::vector<double>(m, 0.0));
        double logdet = 0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double s = inflate * cov[i][j] + (i == j ? 1e-6 : 0.0);
                for (std::size_t k = 0; k < j; ++k) s -= chol[i][k] * chol[j][k];
                if (i == j) {
                    if (!(s > 0)) return false;
                    chol[i][i] = std::sqrt(s);
                    logdet += 2 * std::log(chol[i][i]);
                } else {
                    chol[i][j] = s / chol[j][j];
                }
            }
        }
        const double md = static_cast<double>(m);
        log_norm = std::lgamma((kNu + md) / 2) - std::lgamma(kNu / 2) - md / 2 * std::log(kNu * M_PI) - logdet / 2;
        return true;
    }

    template <class Rng>
    void draw(std::vector<double>& u, Rng& rng) const {
        std::normal_distribution<double> normal;
        std::chi_squared_distribution<double> chi(kNu);
        const std::size_t m = mu.size();
        std::vector<double> z(m);
        for (auto& x : z) x = normal(rng);
        const double s = std::sqrt(kNu / chi(rng));
        for (std::size_t i = 0; i < m; ++i) {
            double v = 0;
            for (std::size_t k = 0; k <= i; ++k) v += chol[i][k] * z[k];
            u[i] = mu[i] + s * v;
        }
    }

    [[nodiscard]] double log_density(const std::vector<double>& u) const {
        const std::size_t m = mu.size();
        std::vector<double> y(m);
        double d2 = 0;
        for (std::size_t i = 0; i < m; ++i) {
            double v = u[i] - mu[i];
            for (std::size_t k = 0; k < i; ++k) v -= chol[i][k] * y[k];
            y[i] = v / chol[i][i];
            d2 += y[i] * y[i];
        }
        return log_norm - (kNu + static_cast<double>(m)) / 2 * std::log1p(d2 / kNu);
    }
};

// One parametrization of {Phi* = 0}: a variable of exponent 1 solved from the
// others, which are sampled in log coordinates. Near a cancellation between two
// monomials the chart solving for the small one degenerates into a thin tube, so
// several charts are combined by multiple importance sampling.
struct Chart {
    std::size_t solved = 0;
    std::size_t block = 0;
    std::vector<std::size_t> free;
    StudentProposal student;
    bool fitted = false;
};

class SurfaceSampler {
public:
    explicit SurfaceSampler(const SurfaceProblem& pr) : pr_(pr) {
        for (std::size_t b = 0; b < pr.blocks.size(); ++b) {
            for (const auto& [v, h] : pr.blocks[b]) {
                if (h != 1) continue;
                Chart c;
                c.solved = v;
                c.block = b;
                for (std::size_t i = 0; i < pr.dim; ++i) {
                    if (i != v) c.free.push_back(i);
                }
                charts_.push_back(std::move(c));
            }
        }
        logt_.resize(pr.dim);
        t_.resize(pr.dim);
        u_.resize(pr.dim == 0 ? 0 : pr.dim - 1);
    }

    [[nodiscard]] std::size_t free_dim() const { return u_.size(); }
    std::vector<Chart>& charts() { return charts_; }

    // Draw a point; returns chi / (mixture density w.r.t. the surface measure),
    // 0 outside the region.
    template <class Rng>
    double draw(Rng& rng, double share) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_int_distribution<std::size_t> pick(0, charts_.size() - 1);
        const Chart& c = charts_[pick(rng)];
        if (c.fitted && unit(rng) < share) c.student.draw(u_, rng);
        else defensive_.draw(u_, rng);
        for (std::size_t a = 0; a < c.free.size(); ++a) {
            const std::size_t j = c.free[a];
            logt_[j] = u_[a];
            t_[j] = unit(rng) < 0.5 ? -std::exp(u_[a]) : std::exp(u_[a]);
        }
        double g = 0, coef = pr_.signs[c.block];
        for (std::size_t b = 0; b < pr_.blocks.size(); ++b) {
            double mono = pr_.signs[b];
            for (const auto& [v, h] : pr_.blocks[b]) {
                if (v != c.solved) mono *= std::pow(t_[v], h);
            }
            if (b == c.block) coef = mono;
            else g += mono;
        }
        const double x = -g / coef;
        t_[c.solved] = x;
        logt_[c.solved] = x == 0 ? -INFINITY : std::log(std::fabs(x));
        for (const auto& mono : pr_.region) {
            double s = 0;
            for (const auto& [v, a] : mono) s += a * logt_[v];
            if (s > 0) return 0;
        }
        return std::exp(-log_mixture(share));
    }

    // Coordinates of the last point in the given chart (false if not representable).
    bool coordinates(const Chart& c, std::vector<double>& out) const {
        out.resize(c.free.size());
        for (std::size_t a = 0; a < c.free.size(); ++a) {
            out[a] = logt_[c.free[a]];
            if (!std::isfinite(out[a])) return false;
        }
        return true;
    }

private:
    // log of sum_c (1/C) q_c(u_c) |d_c Phi| / prod_{j != c} |t_j| at the last point
    double log_mixture(double share) {
        double total = -INFINITY;
        std::vector<double> uc;
        for (const Chart& c : charts_) {
            if (!coordinates(c, uc)) continue;
            double lq = std::log(1 - (c.fitted ? share : 0.0)) + defensive_.log_density(uc);
            if (c.fitted) lq = log_add(lq, std::log(share) + c.student.log_density(uc));
            double lgrad = 0, ljac = 0;
            for (const auto& [v, h] : pr_.blocks[c.block]) {
                if (v != c.solved) lgrad += h * logt_[v];
            }
            for (std::size_t j : c.free) ljac += logt_[j];
            total = log_add(total, lq + lgrad - ljac);
        }
        return total - std::log(static_cast<double>(charts_.size()));
    }

    const SurfaceProblem& pr_;
    std::vector<Chart> charts_;
    DefensiveProposal defensive_;
    std::vector<double> logt_, t_, u_;
};

}  // namespace

SingularEstimate surface_integral(const SurfaceProblem& pr, u64 samples, u64 seed) {
    if (!solve_variable(pr)) {
        throw PeyreError("no block reduces to a single variable with exponent 1; choose another row set");
    }
    if (samples < 1000) throw std::invalid_argument("surface_integral: need samples >= 1000");
    SurfaceSampler sampler(pr);
    std::mt19937_64 rng(seed);
    constexpr double kShare = 0.8;

    // two pilot rounds of a twentieth of the budget each fit one t proposal per
    // chart to the weighted target; pilot draws are not used in the estimate
    const u64 pilot = std::max<u64>(samples / 20, 250);
    if (sampler.free_dim() > 0) {
        for (int round = 0; round < 2; ++round) {
            const std::size_t C = sampler.charts().size();
            std::vector<std::vector<std::vector<double>>> xs(C);
            std::vector<std::vector<double>> ws(C);
            std::vector<double> uc;
            for (u64 n = 0; n < pilot; ++n) {
                const double w = sampler.draw(rng, kShare);
                if (w == 0) continue;
                for (std::size_t c = 0; c < C; ++c) {
                    if (!sampler.coordinates(sampler.charts()[c], uc)) continue;
                    xs[c].push_back(uc);
                    ws[c].push_back(w);
                }
            }
            for (std::size_t c = 0; c < C; ++c) {
                auto& chart = sampler.charts()[c];
                StudentProposal next;
                if (next.fit(xs[c], ws[c], 2.0)) {
                    chart.student = std::move(next);
                    chart.fitted = true;
                }
            }
        }
    }

    const u64 main = samples - 2 * pilot;
    double mean = 0, m2 = 0;
    for (u64 n = 1; n <= main; ++n) {
        const double w = sampler.draw(rng, kShare);
        const double delta = w - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (w - mean);
    }
    // random signs stand in for the 2^m sign patterns of the free variables
    const double scale = pr.prefactor * std::ldexp(1.0, static_cast<int>(sampler.free_dim()));
    SingularEstimate est;
    est.method = "monte-carlo";
    est.value = scale * mean;
    est.error = scale * std::sqrt(m2 / static_cast<double>(main - 1) / static_cast<double>(main));
    est.seed = seed;
    est.samples = samples;
    return est;
}

SingularEstimate c_infty(const VarietySpec& spec, const ExponentSystem& sys, u64 samples, u64 seed) {
    return surface_integral(surface_problem(spec, sys), samples, seed);
}

namespace {

BigInt big_pow(u64 p, u64 e) {
    BigInt r = 1;
    for (u64 i = 0; i < e; ++i) r *= p;
    return r;
}

u64 small_pow(u64 p, u64 e) {
    u64 r = 1;
    for (u64 i = 0; i < e; ++i) r *= p;
    return r;
}

constexpr double kBruteLimit = 1e8;

struct BlockData {
    std::vector<std::pair<std::size_t, int>> members;  // (variable, h)
    int sign = 1;
};

std::vector<BlockData> equation_blocks(const VarietySpec& spec) {
    std::vector<BlockData> out;
    for (int b = 1; b <= spec.blocks(); ++b) {
        BlockData d;
        d.sign = spec.signs[b - 1];
        for (std::size_t v : spec.block_members(b)) d.members.emplace_back(v, spec.variables[v].h);
        out.push_back(std::move(d));
    }
    return out;
}

u64 equation_mod(const std::vector<BlockData>& blocks, const std::vector<u64>& x, u64 q) {
    u64 total = 0;
    for (const auto& b : blocks) {
        u64 term = 1 % q;
        for (const auto& [v, h] : b.members) term = mul_mod(term, pow_mod(x[v], static_cast<u64>(h), q), q);
        total = (total + (b.sign > 0 ? term : (q - term) % q)) % q;
    }
    return total;
}

bool coprime_mod_p(const VarietySpec& spec, const std::vector<u64>& x, u64 p) {
    for (const auto& s : spec.gcd_sets) {
        bool any_unit = false;
        for (std::size_t v : s) any_unit = any_unit || x[v] % p != 0;
        if (!any_unit) return false;
    }
    return true;
}

// Count residues mod p^L satisfying the equation and coprimality; with a mask,
// only residues whose vanishing pattern mod p equals the mask.
BigInt count_residues(const VarietySpec& spec, u64 p, unsigned L, std::optional<u64> mask) {
    const std::size_t J = spec.size();
    const u64 q = small_pow(p, L);
    if (std::pow(static_cast<double>(q), static_cast<double>(J)) > kBruteLimit) {
        throw PeyreError("p-adic brute force beyond 1e8 residues");
    }
    const auto blocks = equation_blocks(spec);
    std::vector<u64> x(J, 0);
    u64 count = 0;
    while (true) {
        bool keep = true;
        if (mask) {
            for (std::size_t v = 0; v < J && keep; ++v) keep = ((x[v] % p == 0) == static_cast<bool>(*mask >> v & 1));
        }
        if (keep && coprime_mod_p(spec, x, p) && equation_mod(blocks, x, q) == 0) ++count;
        std::size_t i = 0;
        while (i < J && ++x[i] == q) x[i++] = 0;
        if (i == J) break;
    }
    return BigInt(count);
}

// Stratum counts mod p for one prime: variables that vanish mod p are given by a mask.
class PrimeStrata {
public:
    PrimeStrata(const VarietySpec& spec, u64 p) : spec_(spec), p_(p), blocks_(equation_blocks(spec)) {
        for (const auto& b : blocks_) {
            u64 d = p - 1;
            for (const auto& [v, h] : b.members) d = gcd(d, static_cast<u64>(h));
            d_.push_back(d == 0 ? 1 : d);
        }
    }

    [[nodiscard]] bool coprime(u64 mask) const {
        for (const auto& s : spec_.gcd_sets) {
            if (std::all_of(s.begin(), s.end(), [&](std::size_t v) { return mask >> v & 1; })) return false;
        }
        return true;
    }

    // Points mod p with exactly the variables in `mask` divisible by p.
    BigInt count(u64 mask) {
        const u64 unit = p_ - 1;
        BigInt c = 1;
        u64 alive = 0;
        for (std::size_t v = 0; v < spec_.size(); ++v) {
            if (spec_.variables[v].block == 0 && !(mask >> v & 1)) c *= unit;
        }
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            const bool dead = std::any_of(blocks_[b].members.begin(), blocks_[b].members.end(),
                                          [&](const auto& m) { return mask >> m.first & 1; });
            const std::size_t units = std::count_if(blocks_[b].members.begin(), blocks_[b].members.end(),
                                                    [&](const auto& m) { return !(mask >> m.first & 1); });
            if (dead) {
                c *= big_pow(unit, units);
            } else {
                // x -> prod x^h is uniform on the d-th powers, each hit d (p-1)^(n-1) times
                alive |= 1ULL << b;
                c *= BigInt(d_[b]) * big_pow(unit, units - 1);
            }
        }
        if (c == 0) return c;
        return c * torus(alive);
    }

    // Every point of the stratum has a unit partial derivative.
    [[nodiscard]] bool smooth(u64 mask) const {
        for (const auto& b : blocks_) {
            for (const auto& [v, h] : b.members) {
                if (static_cast<u64>(h) % p_ == 0) continue;
                if (h > 1 && (mask >> v & 1)) continue;
                bool others = true;
                for (const auto& [w, hw] : b.members) others = others && (w == v || !(mask >> w & 1));
                if (others) return true;
            }
        }
        return false;
    }

private:
    // #{(m_b) in prod H_{d_b} : sum sign_b m_b = 0 mod p} over the blocks in `alive`.
    u64 torus(u64 alive) {
        if (auto it = torus_cache_.find(alive); it != torus_cache_.end()) return it->second;
        std::vector<std::size_t> idx;
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            if (alive >> b & 1) idx.push_back(b);
        }
        u64 result = 0;
        if (idx.empty()) result = 1;
        else if (idx.size() >= 2) {
            // scaling by the subgroup of the coarsest block fixes every other subgroup
            std::size_t piv = idx.size();
            for (std::size_t i = 0; i < idx.size(); ++i) {
                bool ok = true;
                for (std::size_t j : idx) ok = ok && d_[idx[i]] % d_[j] == 0;
                if (ok) piv = i;
            }
            if (piv == idx.size()) throw PeyreError("stratum count: incompatible power subgroups");
            std::vector<std::size_t> others;
            for (std::size_t i = 0; i < idx.size(); ++i) {
                if (i != piv) others.push_back(idx[i]);
            }
            const u64 start = signed_residue(blocks_[idx[piv]].sign);
            result = walk(others, 0, start) * ((p_ - 1) / d_[idx[piv]]);
        }
        torus_cache_[alive] = result;
        return result;
    }

    // ways to choose the remaining m's (each in its subgroup) so that acc + sum sign m = 0
    u64 walk(const std::vector<std::size_t>& others, std::size_t pos, u64 acc) {
        const std::size_t b = others[pos];
        const u64 sgn = signed_residue(blocks_[b].sign);
        if (pos + 1 == others.size()) {
            const u64 m = mul_mod((p_ - acc) % p_, sgn, p_);  // sign^-1 = sign
            return m != 0 && in_subgroup(m, d_[b]);
        }
        u64 n = 0;
        for (u64 m = 1; m < p_; ++m) {
            if (in_subgroup(m, d_[b])) n += walk(others, pos + 1, (acc + mul_mod(sgn, m, p_)) % p_);
        }
        return n;
    }

    [[nodiscard]] u64 signed_residue(int s) const { return s > 0 ? 1 % p_ : p_ - 1; }

    bool in_subgroup(u64 m, u64 d) {
        if (d == 1) return true;
        auto& table = subgroup_[d];
        if (table.empty()) {
            table.assign(p_, 0);
            for (u64 x = 1; x < p_; ++x) table[pow_mod(x, d, p_)] = 1;
        }
        return table[m];
    }

    const VarietySpec& spec_;
    u64 p_;
    std::vector<BlockData> blocks_;
    std::vector<u64> d_;
    std::map<u64, u64> torus_cache_;
    std::map<u64, std::vector<char>> subgroup_;
};

}  // namespace

BigRational c_p_density(const VarietySpec& spec, u64 p, unsigned L) {
    if (!is_prime(p)) throw std::invalid_argument("c_p_density: p must be prime");
    if (L == 0) throw std::invalid_argument("c_p_density: L must be positive");
    const std::size_t J = spec.size();
    if (J > 20) throw std::invalid_argument("c_p_density: too many variables");
    PrimeStrata strata(spec, p);
    const BigInt lift = big_pow(p, (J - 1) * (L - 1));
    BigInt total = 0;
    for (u64 mask = 0; mask < (1ULL << J); ++mask) {
        if (!strata.coprime(mask)) continue;
        const BigInt c1 = strata.count(mask);
        if (c1 == 0) continue;
        if (L == 1) total += c1;
        else if (strata.smooth(mask)) total += c1 * lift;  // Hensel
        else total += count_residues(spec, p, L, mask);
    }
    return BigRational(total) / BigRational(big_pow(p, (J - 1) * L));
}

BigRational c_p_density_brute(const VarietySpec& spec, u64 p, unsigned L) {
    if (!is_prime(p) || L == 0) throw std::invalid_argument("c_p_density_brute: need prime p and L >= 1");
    return BigRational(count_residues(spec, p, L, std::nullopt)) /
           BigRational(big_pow(p, (spec.size() - 1) * L));
}

FiniteDensity c_fin(const VarietySpec& spec, u64 pmax, unsigned max_level) {
    if (pmax < 2) throw std::invalid_argument("c_fin: pmax must be >= 2");
    FiniteDensity out;
    out.pmax = pmax;
    double log_value = 0;
    for (u64 p : primes_up_to(pmax)) {
        unsigned L = 1;
        BigRational prev = c_p_density(spec, p, 1);
        while (true) {
            if (L >= max_level) throw PeyreError("c_p did not stabilize at p = " + std::to_string(p));
            BigRational next = c_p_density(spec, p, L + 1);
            if (next == prev) break;
            prev = std::move(next);
            ++L;
        }
        const double v = prev.convert_to<double>();
        if (!(v > 0)) throw PeyreError("c_p vanishes at p = " + std::to_string(p));
        log_value += std::log(v);
        if (p >= 5) out.K = std::max(out.K, std::fabs(v - 1) * static_cast<double>(p) * static_cast<double>(p));
        out.factors.push_back({p, L, std::move(prev)});
    }
    out.value = std::exp(log_value);
    // sum_{p > P} K/p^2 ~ K / (P log P)
    const double P = static_cast<double>(pmax);
    out.tail = out.value * std::expm1(out.K / (P * std::log(P)));
    return out;
}

SurjectionCheck x2_surjection(u64 p, unsigned L) {
    const VarietySpec spec = preset("x2");
    SurjectionCheck r;
    r.direct = c_p_density_brute(spec, p, L);

    const u64 q = small_pow(p, L);
    if (std::pow(static_cast<double>(q), 8.0) > 1e9) throw PeyreError("x2_surjection: modulus too large");
    const std::size_t x11 = spec.index_of("x11"), x12 = spec.index_of("x12"), x21 = spec.index_of("x21");
    const std::size_t x31 = spec.index_of("x31"), x32 = spec.index_of("x32");
    std::vector<u64> x(spec.size(), 0);
    u64 count = 0;
    while (true) {
        if (coprime_mod_p(spec, x, p)) {
            const u64 lin = (mul_mod(x[x11], x[x12], q) + q - mul_mod(x[x21], x[x21], q)) % q;
            const u64 rhs = mul_mod(x[x31], x[x32], q);
            const bool prod_unit = rhs % p != 0;
            for (u64 z = 0; z < q; ++z) {
                if (!prod_unit && z % p == 0) continue;
                count += mul_mod(lin, z, q) == rhs;
            }
        }
        std::size_t i = 0;
        while (i < x.size() && ++x[i] == q) x[i++] = 0;
        if (i == x.size()) break;
    }
    r.projected = BigRational(BigInt(p), BigInt(p - 1)) * BigRational(BigInt(count)) / BigRational(big_pow(p, 7 * L));
    return r;
}

bool x2_surjection_check(u64 p, unsigned L) { return x2_surjection(p, L).ok(); }

PeyreBreakdown peyre_constant(const VarietySpec& spec, const PeyreOptions& options) {
    PeyreBreakdown b;
    b.system = exponent_system(spec, options.rows);
    b.c2 = b.system.c2;
    b.c_star = c_star(b.system);
    b.c_fin = c_fin(spec, options.pmax);
    b.c_infty = c_infty(spec, b.system, options.samples, options.seed);
    b.seed = options.seed;
    const double cs = b.c_star.convert_to<double>();
    b.product = cs * b.c_fin.value * b.c_infty.value;
    if (!(b.product > 0) || !std::isfinite(b.product)) throw PeyreError("predicted constant is not positive");
    const double r1 = b.c_infty.error / b.c_infty.value, r2 = b.c_fin.tail / b.c_fin.value;
    b.uncertainty = b.product * std::hypot(r1, r2);
    return b;
}

std::string breakdown_json(const PeyreBreakdown& b, const VarietySpec& spec) {
    nlohmann::json j;
    j["variety"] = spec.name;
    j["fingerprint"] = fingerprint(spec);
    std::vector<std::string> rows;
    for (std::size_t v : b.system.I) rows.push_back(spec.variables[v].id);
    j["row_set"] = rows;
    j["c2"] = b.c2;
    j["c_star"] = {{"num", numerator(b.c_star).str()},
                   {"den", denominator(b.c_star).str()},
                   {"value", b.c_star.convert_to<double>()}};
    j["c_fin"] = {{"value", b.c_fin.value}, {"tail", b.c_fin.tail}, {"K", b.c_fin.K}, {"pmax", b.c_fin.pmax}};
    j["c_infty"] = {{"value", b.c_infty.value}, {"stderr", b.c_infty.error}, {"samples", b.c_infty.samples}};
    j["product"] = b.product;
    j["uncertainty"] = b.uncertainty;
    j["seeds"] = {{"c_infty", b.seed}};
    return j.dump(2);
}

}  // namespace torsor
