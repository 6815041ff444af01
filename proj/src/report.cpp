#include "torsor/report.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#ifndef TORSOR_BUILD_ID
#define TORSOR_BUILD_ID "unknown"
#endif

namespace torsor {

double c_emp(u64 raw, u64 bound, std::size_t c2) {
    if (bound < 2) throw std::invalid_argument("c_emp: bound must be >= 2");
    const double b = static_cast<double>(bound);
    return static_cast<double>(raw) / (b * std::pow(std::log(b), static_cast<double>(c2)));
}

FitResult fit(const CountLedger& ledger, std::size_t c2) {
    const auto& rows = ledger.rows;
    if (rows.size() < 3) throw std::invalid_argument("fit: need at least 3 ledger rows");
    u64 lo = rows[0].bound, hi = rows[0].bound;
    for (const auto& r : rows) {
        lo = std::min(lo, r.bound);
        hi = std::max(hi, r.bound);
    }
    if (lo < 2 || static_cast<double>(hi) < 100.0 * static_cast<double>(lo)) {
        throw std::invalid_argument("fit: rows must span at least two decades");
    }
    if (rows.size() < c2 + 1) throw std::invalid_argument("fit: fewer rows than coefficients");

    FitResult out;
    out.c2 = c2;
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto m = static_cast<Eigen::Index>(c2 + 1);
    Eigen::MatrixXd X(n, m);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = rows[static_cast<std::size_t>(i)];
        const double L = std::log(static_cast<double>(r.bound));
        for (Eigen::Index j = 0; j < m; ++j) X(i, j) = std::pow(L, static_cast<double>(j));
        y(i) = static_cast<double>(r.raw) / static_cast<double>(r.bound);
        out.bounds.push_back(r.bound);
        out.c_emp.push_back(c_emp(r.raw, r.bound, c2));
    }
    const Eigen::VectorXd a = X.colPivHouseholderQr().solve(y);
    out.coefficients.assign(a.data(), a.data() + a.size());
    out.leading = a(m - 1);
    out.residual_norm = (X * a - y).norm();
    out.relative_residual = y.norm() > 0 ? out.residual_norm / y.norm() : 0.0;
    return out;
}

double last_decade_drift(const CountLedger& ledger, std::size_t c2) {
    const LedgerRow* last = nullptr;
    const LedgerRow* prev = nullptr;
    for (const auto& r : ledger.rows) {
        if (r.bound % 10 != 0) continue;
        for (const auto& q : ledger.rows) {
            if (q.bound * 10 == r.bound && (!last || r.bound > last->bound)) {
                last = &r;
                prev = &q;
            }
        }
    }
    if (!last) throw std::invalid_argument("drift: no pair of bounds one decade apart");
    const double c1 = c_emp(last->raw, last->bound, c2);
    const double c0 = c_emp(prev->raw, prev->bound, c2);
    return std::fabs(c1 - c0) / c1;
}

ThinContrast thin_contrast(const CountLedger& excluded, const CountLedger& included) {
    ThinContrast t;
    t.excluded = excluded;
    t.included = included;
    for (const auto& e : excluded.rows) {
        for (const auto& i : included.rows) {
            if (i.bound != e.bound) continue;
            if (i.raw < e.raw) throw std::invalid_argument("thin contrast: excluding thin points increased a count");
            t.bounds.push_back(e.bound);
            t.thin_only.push_back(i.raw - e.raw);
            const double b = static_cast<double>(e.bound);
            t.ratio.push_back(static_cast<double>(i.raw - e.raw) / (b * std::log(b)));
        }
    }
    return t;
}

ThinContrast thin_contrast(const VarietySpec& spec, const std::vector<u64>& bounds, CountOptions options) {
    if (spec.thin.empty()) throw std::invalid_argument("thin contrast: variety has no thin-set predicate");
    const auto base = options.checkpoint;
    options.apply_thin = true;
    if (base) options.checkpoint = *base + ".excluded";
    const CountLedger excluded = ladder(spec, bounds, options);
    options.apply_thin = false;
    if (base) options.checkpoint = *base + ".included";
    const CountLedger included = ladder(spec, bounds, options);
    return thin_contrast(excluded, included);
}

std::string series_tsv(const std::string& xname, const std::string& yname, const std::vector<u64>& x,
                       const std::vector<double>& y) {
    std::ostringstream out;
    out.precision(12);
    out << xname << '\t' << yname << '\n';
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) out << x[i] << '\t' << y[i] << '\n';
    return out.str();
}

std::string build_id() { return TORSOR_BUILD_ID; }

}  // namespace torsor
