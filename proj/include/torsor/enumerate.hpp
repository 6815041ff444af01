#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "torsor/variety.hpp"

namespace torsor {

/// Side lengths of a dyadic box; coordinate x is counted when X/2 < |x| <= X.
struct DyadicBox {
    u64 A = 1, B = 1, C = 1, Y = 1, W = 1, Z = 1;
};

/// Integer magnitude range lo < |x| <= hi.
struct Shell {
    u64 lo = 0;
    u64 hi = 1;
};

/// Shells in the order (a, b, c, y, w, z).
std::array<Shell, 6> shells(const DyadicBox& box);

struct LedgerRow {
    u64 bound = 0;
    u64 raw = 0;
    u64 adjusted = 0;  ///< raw / 2^symmetry_rank
    double seconds = 0;
    unsigned shards = 1;
    std::string fingerprint;
};

struct CountLedger {
    std::vector<LedgerRow> rows;
    /// Provenance written as "# key: value" lines ahead of the header.
    std::vector<std::pair<std::string, std::string>> meta;
};

struct CountOptions {
    unsigned shards = 1;
    std::optional<std::string> checkpoint;
    bool apply_thin = true;
    /// Abort (throwing Interrupted) once this many slices finished in the current run.
    std::optional<unsigned> stop_after_slices;
};

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Interrupted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Number of outer-loop slices used for sharding and checkpoints.
inline constexpr unsigned kSlices = 256;

/// Direct nested loops over all coordinates with exact predicate checks.
/// Refuses (std::invalid_argument) when a single-monomial range exceeds 1000.
u64 count_brute(const VarietySpec& spec, HeightBound bound, bool apply_thin = true);

/// Divisor-method count of the same quantity as count_brute.
LedgerRow count_exact(const VarietySpec& spec, HeightBound bound, const CountOptions& options = {});

/// Solutions of ab + c^2 + xi^2 y w z^2 = 0 with all coordinates nonzero in the box.
u64 count_dyadic_box(i64 xi, const DyadicBox& box, bool exclude_minus_square);
u64 count_box_shells(i64 xi, const std::array<Shell, 6>& sh, bool exclude_minus_square);
/// Six nested loops; small boxes only.
u64 count_box_brute(i64 xi, const std::array<Shell, 6>& sh, bool exclude_minus_square);

CountLedger ladder(const VarietySpec& spec, const std::vector<u64>& bounds, const CountOptions& options = {});

/// CSV with header B,raw,adjusted,seconds, preceded by the metadata comments.
std::string ledger_csv(const CountLedger& ledger);
CountLedger parse_ledger_csv(const std::string& text);

/// Raw counts nondecreasing and divisible by 2^symmetry_rank.
bool ledger_consistent(const VarietySpec& spec, const CountLedger& ledger);

/// Write-temp-then-rename.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace torsor
