#include <string>
#include <string_view>

#include "torsor/variety.hpp"

namespace torsor {

namespace {

// Variable order fixes the row order of the exponent matrices; monomial order
// fixes their column order.
constexpr std::string_view kX1 = R"({
  "name": "x1",
  "variables": [
    {"id": "x11", "block": 1, "h": 1}, {"id": "x12", "block": 1, "h": 1},
    {"id": "x21", "block": 2, "h": 2},
    {"id": "x31", "block": 3, "h": 1}, {"id": "x32", "block": 3, "h": 1}, {"id": "x33", "block": 3, "h": 2}
  ],
  "signs": [1, -1, -1],
  "height": [
    {"x11": [2, 1], "x31": [1, 1]}, {"x12": [2, 1], "x31": [1, 1]}, {"x21": [2, 1], "x31": [1, 1]},
    {"x11": [2, 1], "x32": [1, 1]}, {"x12": [2, 1], "x32": [1, 1]}, {"x21": [2, 1], "x32": [1, 1]},
    {"x31": [3, 1], "x33": [2, 1]}, {"x32": [3, 1], "x33": [2, 1]}
  ],
  "gcd_sets": [["x11", "x12", "x21", "x33"], ["x31", "x32"]],
  "thin": [{"kind": "minus_square_product", "vars": ["x31", "x32"]}],
  "symmetry_rank": 2,
  "row_set": ["x11", "x21", "x31", "x32", "x33"]
})";

constexpr std::string_view kX2 = R"({
  "name": "x2",
  "variables": [
    {"id": "x01", "block": 0, "h": 0}, {"id": "x02", "block": 0, "h": 0},
    {"id": "x11", "block": 1, "h": 1}, {"id": "x12", "block": 1, "h": 1},
    {"id": "x21", "block": 3, "h": 2},
    {"id": "x31", "block": 2, "h": 1}, {"id": "x32", "block": 2, "h": 1}
  ],
  "signs": [1, -1, -1],
  "height": [
    {"x01": [2, 1], "x11": [1, 1], "x31": [1, 1]},
    {"x01": [2, 1], "x12": [1, 1], "x31": [1, 1]},
    {"x01": [2, 1], "x21": [1, 1], "x31": [1, 1]},
    {"x02": [2, 1], "x11": [3, 1], "x32": [1, 1]},
    {"x02": [2, 1], "x12": [3, 1], "x32": [1, 1]},
    {"x02": [2, 1], "x21": [3, 1], "x32": [1, 1]},
    {"x01": [1, 1], "x02": [1, 1], "x11": [3, 1]},
    {"x01": [1, 1], "x02": [1, 1], "x12": [3, 1]},
    {"x01": [1, 1], "x02": [1, 1], "x21": [3, 1]},
    {"x02": [2, 1], "x31": [3, 2], "x32": [5, 2]},
    {"x01": [2, 1], "x31": [3, 2], "x32": [1, 2]}
  ],
  "gcd_sets": [["x11", "x12", "x21"], ["x01", "x32"], ["x02", "x31"], ["x01", "x02"]],
  "thin": [],
  "symmetry_rank": 3,
  "row_set": ["x01", "x02", "x11", "x21", "x31"]
})";

constexpr std::string_view kX3 = R"({
  "name": "x3",
  "variables": [
    {"id": "x01", "block": 0, "h": 0}, {"id": "x02", "block": 0, "h": 0},
    {"id": "x11", "block": 1, "h": 1}, {"id": "x12", "block": 1, "h": 1},
    {"id": "x21", "block": 3, "h": 2},
    {"id": "x31", "block": 2, "h": 1}, {"id": "x32", "block": 2, "h": 1}
  ],
  "signs": [1, -1, -1],
  "height": [
    {"x02": [2, 1], "x31": [1, 1], "x32": [2, 1]},
    {"x02": [2, 1], "x21": [2, 1], "x32": [1, 1]},
    {"x02": [2, 1], "x12": [2, 1], "x32": [1, 1]},
    {"x02": [2, 1], "x11": [2, 1], "x32": [1, 1]},
    {"x01": [1, 1], "x02": [1, 1], "x21": [3, 1]},
    {"x01": [1, 1], "x02": [1, 1], "x12": [3, 1]},
    {"x01": [1, 1], "x02": [1, 1], "x11": [3, 1]},
    {"x01": [2, 1], "x31": [2, 1], "x32": [1, 1]},
    {"x01": [2, 1], "x21": [2, 1], "x31": [1, 1]},
    {"x01": [2, 1], "x12": [2, 1], "x31": [1, 1]},
    {"x01": [2, 1], "x11": [2, 1], "x31": [1, 1]}
  ],
  "gcd_sets": [["x11", "x12", "x21"], ["x01", "x32"], ["x02", "x31"], ["x01", "x02"]],
  "thin": [],
  "symmetry_rank": 3,
  "row_set": ["x01", "x02", "x11", "x21", "x31"]
})";

}  // namespace

std::vector<std::string> preset_names() { return {"x1", "x2", "x3"}; }

std::string preset_document(std::string_view name) {
    if (name == "x1") return std::string(kX1);
    if (name == "x2") return std::string(kX2);
    if (name == "x3") return std::string(kX3);
    throw SpecError("unknown variety preset: " + std::string(name));
}

VarietySpec preset(std::string_view name) { return load_spec(preset_document(name)); }

}  // namespace torsor
