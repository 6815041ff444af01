#pragma once

#include <string>
#include <vector>

#include "torsor/enumerate.hpp"

namespace torsor {

/// raw / (B (log B)^c2).
double c_emp(u64 raw, u64 bound, std::size_t c2);

struct FitResult {
    std::size_t c2 = 0;
    std::vector<u64> bounds;
    std::vector<double> c_emp;
    std::vector<double> coefficients;  ///< a_0 .. a_c2 of raw/B = sum a_m (log B)^m
    double leading = 0;                ///< a_c2
    double residual_norm = 0;          ///< of raw/B against the fitted polynomial
    double relative_residual = 0;
};

/// Needs at least three rows spanning two decades.
FitResult fit(const CountLedger& ledger, std::size_t c2);

/// |C(B) - C(B/10)| / C(B) at the largest B whose previous decade is in the ledger.
double last_decade_drift(const CountLedger& ledger, std::size_t c2);

/// Ledgers with thin points removed (the counted quantity) and kept.
struct ThinContrast {
    CountLedger excluded;
    CountLedger included;
    std::vector<u64> bounds;
    std::vector<u64> thin_only;  ///< included - excluded
    std::vector<double> ratio;   ///< thin_only / (B log B)
};

ThinContrast thin_contrast(const VarietySpec& spec, const std::vector<u64>& bounds, CountOptions options = {});
/// Pairs up two existing ledgers by bound.
ThinContrast thin_contrast(const CountLedger& excluded, const CountLedger& included);

/// Two-column, tab separated, with a header line.
std::string series_tsv(const std::string& xname, const std::string& yname, const std::vector<u64>& x,
                       const std::vector<double>& y);

/// git describe of the source tree at configure time.
std::string build_id();

}  // namespace torsor
