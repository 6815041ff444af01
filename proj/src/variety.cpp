#include "torsor/variety.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace torsor {

using nlohmann::json;

std::size_t VarietySpec::index_of(std::string_view id) const {
    for (std::size_t i = 0; i < variables.size(); ++i) {
        if (variables[i].id == id) return i;
    }
    throw SpecError("unknown variable id: " + std::string(id));
}

std::vector<std::size_t> VarietySpec::block_members(int block) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < variables.size(); ++i) {
        if (variables[i].block == block) out.push_back(i);
    }
    return out;
}

void validate(const VarietySpec& spec) {
    const int k = spec.blocks();
    if (spec.variables.empty()) throw SpecError("no variables");
    if (k < 2) throw SpecError("equation needs at least two blocks");
    for (int s : spec.signs) {
        if (s != 1 && s != -1) throw SpecError("signs must be +1 or -1");
    }
    std::set<std::string> ids;
    for (const auto& v : spec.variables) {
        if (!ids.insert(v.id).second) throw SpecError("duplicate variable id: " + v.id);
        if (v.block < 0 || v.block > k) {
            throw SpecError("variable " + v.id + " has block index outside 0.." + std::to_string(k));
        }
        if (v.block >= 1 && v.h < 1) throw SpecError("variable " + v.id + " needs exponent h >= 1");
        if (v.block == 0 && v.h != 0) throw SpecError("variable " + v.id + " outside the equation must have h = 0");
    }
    for (int b = 1; b <= k; ++b) {
        if (spec.block_members(b).empty()) throw SpecError("equation block " + std::to_string(b) + " is empty");
    }
    if (spec.height.empty()) throw SpecError("no height monomials");
    std::vector<bool> seen(spec.size(), false);
    for (const auto& mono : spec.height) {
        if (mono.empty()) throw SpecError("empty height monomial");
        for (const auto& [idx, e] : mono) {
            if (idx >= spec.size()) throw SpecError("height monomial references unknown variable");
            if (e <= 0) throw SpecError("height monomial with zero or negative exponent");
            seen[idx] = true;
        }
    }
    for (std::size_t i = 0; i < spec.size(); ++i) {
        if (!seen[i]) throw SpecError("variable " + spec.variables[i].id + " appears in no height monomial");
    }
    for (const auto& set : spec.gcd_sets) {
        if (set.empty()) throw SpecError("empty gcd set");
        for (auto idx : set) {
            if (idx >= spec.size()) throw SpecError("gcd set references unknown variable");
        }
    }
    for (const auto& t : spec.thin) {
        if (t.a >= spec.size() || t.b >= spec.size()) throw SpecError("thin predicate references unknown variable");
    }
    for (auto idx : spec.row_set) {
        if (idx >= spec.size()) throw SpecError("row_set references unknown variable");
    }
    if (spec.symmetry_rank < 0) throw SpecError("symmetry_rank must be nonnegative");
}

namespace {

std::size_t lookup(const std::vector<Variable>& vars, const std::string& id) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].id == id) return i;
    }
    throw SpecError("unknown variable id: " + id);
}

BigRational parse_exponent(const json& j) {
    if (j.is_number_integer()) return BigRational(j.get<i64>());
    if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
        const i64 num = j[0].get<i64>();
        const i64 den = j[1].get<i64>();
        if (den <= 0) throw SpecError("exponent denominator must be positive");
        return BigRational(num, den);
    }
    throw SpecError("exponent must be an integer or [num, den]");
}

const json& require(const json& j, const char* key) {
    if (!j.contains(key)) throw SpecError(std::string("missing field: ") + key);
    return j.at(key);
}

}  // namespace

VarietySpec load_spec(std::string_view document) {
    json j;
    try {
        j = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("malformed spec document: ") + e.what());
    }
    if (!j.is_object()) throw SpecError("spec document must be an object");
    VarietySpec spec;
    try {
        spec.name = require(j, "name").get<std::string>();
        for (const auto& v : require(j, "variables")) {
            Variable var;
            var.id = require(v, "id").get<std::string>();
            var.block = require(v, "block").get<int>();
            var.h = v.value("h", 0);
            spec.variables.push_back(var);
        }
        spec.signs = require(j, "signs").get<std::vector<int>>();
        for (const auto& m : require(j, "height")) {
            if (!m.is_object()) throw SpecError("height monomial must be an object");
            HeightMonomial mono;
            for (const auto& [id, e] : m.items()) {
                const auto idx = lookup(spec.variables, id);
                mono[idx] = parse_exponent(e);
            }
            spec.height.push_back(std::move(mono));
        }
        for (const auto& s : require(j, "gcd_sets")) {
            std::vector<std::size_t> set;
            for (const auto& id : s) set.push_back(lookup(spec.variables, id.get<std::string>()));
            spec.gcd_sets.push_back(std::move(set));
        }
        if (j.contains("thin")) {
            for (const auto& t : j.at("thin")) {
                if (require(t, "kind").get<std::string>() != "minus_square_product") {
                    throw SpecError("unknown thin predicate kind");
                }
                const auto vars = require(t, "vars").get<std::vector<std::string>>();
                if (vars.size() != 2) throw SpecError("minus_square_product needs two variables");
                spec.thin.push_back({ThinKind::MinusSquareProduct, lookup(spec.variables, vars[0]),
                                     lookup(spec.variables, vars[1])});
            }
        }
        spec.symmetry_rank = require(j, "symmetry_rank").get<int>();
        if (j.contains("row_set")) {
            for (const auto& id : j.at("row_set")) spec.row_set.push_back(lookup(spec.variables, id.get<std::string>()));
        }
    } catch (const json::exception& e) {
        throw SpecError(std::string("schema violation: ") + e.what());
    }
    validate(spec);
    return spec;
}

VarietySpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open spec file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_spec(ss.str());
}

std::string dump_spec(const VarietySpec& spec) {
    json j;
    j["name"] = spec.name;
    j["variables"] = json::array();
    for (const auto& v : spec.variables) j["variables"].push_back({{"id", v.id}, {"block", v.block}, {"h", v.h}});
    j["signs"] = spec.signs;
    j["height"] = json::array();
    for (const auto& mono : spec.height) {
        json m = json::object();
        for (const auto& [idx, e] : mono) {
            m[spec.variables[idx].id] = {boost::multiprecision::numerator(e).convert_to<i64>(),
                                         boost::multiprecision::denominator(e).convert_to<i64>()};
        }
        j["height"].push_back(m);
    }
    j["gcd_sets"] = json::array();
    for (const auto& s : spec.gcd_sets) {
        json arr = json::array();
        for (auto idx : s) arr.push_back(spec.variables[idx].id);
        j["gcd_sets"].push_back(arr);
    }
    j["thin"] = json::array();
    for (const auto& t : spec.thin) {
        j["thin"].push_back({{"kind", "minus_square_product"},
                             {"vars", {spec.variables[t.a].id, spec.variables[t.b].id}}});
    }
    j["symmetry_rank"] = spec.symmetry_rank;
    if (!spec.row_set.empty()) {
        json arr = json::array();
        for (auto idx : spec.row_set) arr.push_back(spec.variables[idx].id);
        j["row_set"] = arr;
    }
    return j.dump();
}

std::string fingerprint(const VarietySpec& spec) {
    u64 h = 1469598103934665603ULL;
    for (unsigned char c : dump_spec(spec)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

BigInt equation_value(const VarietySpec& spec, const TorsorPoint& x) {
    if (x.size() != spec.size()) throw SpecError("point arity does not match spec");
    BigInt total = 0;
    for (int b = 1; b <= spec.blocks(); ++b) {
        BigInt term = spec.signs[b - 1];
        for (auto idx : spec.block_members(b)) {
            BigInt v = x[idx];
            for (int e = 0; e < spec.variables[idx].h; ++e) term *= v;
        }
        total += term;
    }
    return total;
}

std::vector<ClearedMonomial> cleared_height(const VarietySpec& spec) {
    std::vector<ClearedMonomial> out;
    for (const auto& mono : spec.height) {
        BigInt den = 1;
        for (const auto& [idx, e] : mono) den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(e));
        ClearedMonomial c;
        c.den = den.convert_to<unsigned>();
        for (const auto& [idx, e] : mono) {
            BigRational scaled = e * BigRational(den);
            c.terms.emplace_back(idx, boost::multiprecision::numerator(scaled).convert_to<unsigned>());
        }
        out.push_back(std::move(c));
    }
    return out;
}

bool height_ok(const VarietySpec& spec, const TorsorPoint& x, const HeightBound& bound) {
    if (x.size() != spec.size()) throw SpecError("point arity does not match spec");
    for (const auto& mono : cleared_height(spec)) {
        BigInt lhs = 1;
        for (const auto& [idx, e] : mono.terms) {
            const BigInt v = boost::multiprecision::abs(BigInt(x[idx]));
            lhs *= boost::multiprecision::pow(v, e);
        }
        const BigInt rhs = boost::multiprecision::pow(BigInt(bound.value), mono.den);
        if (lhs > rhs) return false;
    }
    return true;
}

bool gcd_ok(const VarietySpec& spec, const TorsorPoint& x) {
    if (x.size() != spec.size()) throw SpecError("point arity does not match spec");
    for (const auto& set : spec.gcd_sets) {
        i64 g = 0;
        for (auto idx : set) g = gcd_signed(g, x[idx]);
        if (g != 1) return false;
    }
    return true;
}

bool thin_ok(const VarietySpec& spec, const TorsorPoint& x) {
    if (x.size() != spec.size()) throw SpecError("point arity does not match spec");
    for (const auto& t : spec.thin) {
        const i128 prod = static_cast<i128>(x[t.a]) * x[t.b];
        if (prod < 0) {
            const u128 mag = static_cast<u128>(-prod);
            if (mag <= ~0ULL && is_square(static_cast<u64>(mag))) return false;
        }
    }
    return true;
}

double height_float(const VarietySpec& spec, const TorsorPoint& x) {
    double best = 0;
    for (const auto& mono : spec.height) {
        double v = 1;
        for (const auto& [idx, e] : mono) v *= std::pow(std::fabs(static_cast<double>(x[idx])), e.convert_to<double>());
        best = std::max(best, v);
    }
    return best;
}

}  // namespace torsor
