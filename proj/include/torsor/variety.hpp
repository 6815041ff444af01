#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "torsor/arith.hpp"

namespace torsor {

struct Variable {
    std::string id;
    int block = 0;  ///< 0 for variables outside the torsor equation
    int h = 0;      ///< exponent in the equation, 0 when block == 0

    bool operator==(const Variable&) const = default;
};

/// One height monomial: variable index -> nonnegative rational exponent.
using HeightMonomial = std::map<std::size_t, BigRational>;

enum class ThinKind { MinusSquareProduct };

struct ThinPredicate {
    ThinKind kind = ThinKind::MinusSquareProduct;
    std::size_t a = 0;
    std::size_t b = 0;

    bool operator==(const ThinPredicate&) const = default;
};

/// Declarative torsor counting problem: the equation
///   sum_{i=1..k} signs[i-1] * prod_{j in block i} x_j^{h_j} = 0
/// with height monomials, coprimality sets and thin-set predicates.
struct VarietySpec {
    std::string name;
    std::vector<Variable> variables;
    std::vector<int> signs;  ///< one per equation block 1..k
    std::vector<HeightMonomial> height;
    std::vector<std::vector<std::size_t>> gcd_sets;
    std::vector<ThinPredicate> thin;
    int symmetry_rank = 0;
    /// Preferred row set I for the constant machinery (variable indices); empty = greedy.
    std::vector<std::size_t> row_set;

    [[nodiscard]] std::size_t size() const { return variables.size(); }
    [[nodiscard]] int blocks() const { return static_cast<int>(signs.size()); }
    [[nodiscard]] std::size_t index_of(std::string_view id) const;
    [[nodiscard]] std::vector<std::size_t> block_members(int block) const;

    bool operator==(const VarietySpec&) const = default;
};

using TorsorPoint = std::vector<i64>;

struct HeightBound {
    u64 value = 1;
    explicit HeightBound(u64 b) : value(b < 1 ? 1 : b) {}
};

class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Built-in presets "x1", "x2", "x3".
VarietySpec preset(std::string_view name);
std::vector<std::string> preset_names();
/// Embedded JSON document of a preset.
std::string preset_document(std::string_view name);

VarietySpec load_spec(std::string_view document);
VarietySpec load_spec_file(const std::string& path);
std::string dump_spec(const VarietySpec& spec);
void validate(const VarietySpec& spec);

/// 16 hex digits identifying the spec's canonical serialization.
std::string fingerprint(const VarietySpec& spec);

/// Exact evaluation of sum signs * monomials at the point.
BigInt equation_value(const VarietySpec& spec, const TorsorPoint& x);
bool height_ok(const VarietySpec& spec, const TorsorPoint& x, const HeightBound& bound);
bool gcd_ok(const VarietySpec& spec, const TorsorPoint& x);
bool thin_ok(const VarietySpec& spec, const TorsorPoint& x);

/// Floating point height max_F |F(x)| (ties may misclassify; diagnostics only).
double height_float(const VarietySpec& spec, const TorsorPoint& x);

/// Monomial with all exponents multiplied by its least common denominator.
struct ClearedMonomial {
    std::vector<std::pair<std::size_t, unsigned>> terms;
    unsigned den = 1;
};
std::vector<ClearedMonomial> cleared_height(const VarietySpec& spec);

}  // namespace torsor
