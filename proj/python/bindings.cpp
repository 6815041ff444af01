#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "torsor/char_sums.hpp"
#include "torsor/enumerate.hpp"
#include "torsor/peyre.hpp"
#include "torsor/report.hpp"
#include "torsor/singular.hpp"

namespace py = pybind11;
using namespace torsor;

namespace {

// Exact rationals cross the boundary as fractions.Fraction; hex avoids the
// interpreter's digit limit on decimal conversion.
py::object fraction(const BigRational& q) {
    static py::object cls = py::module_::import("fractions").attr("Fraction");
    static py::object to_int = py::module_::import("builtins").attr("int");
    auto big = [](const BigInt& v) {
        const py::object mag = to_int(py::str(BigInt(abs(v)).str(0, std::ios_base::hex)), 16);
        return v < 0 ? -mag : mag;
    };
    return cls(big(numerator(q)), big(denominator(q)));
}

py::list fractions(const RatMatrix& m) {
    py::list out;
    for (const auto& row : m) {
        py::list r;
        for (const auto& v : row) r.append(fraction(v));
        out.append(r);
    }
    return out;
}

py::dict estimate(const SingularEstimate& e) {
    py::dict d;
    d["value"] = e.value;
    d["error"] = e.error;
    d["method"] = e.method;
    d["exact"] = e.exact ? fraction(*e.exact) : py::none();
    return d;
}

py::dict family(const FamilyReport& r) {
    py::dict d;
    d["family"] = r.family;
    d["cases"] = r.cases;
    d["failures"] = r.failures;
    d["max_deviation"] = r.max_deviation;
    d["max_ratio"] = r.max_ratio;
    d["first_failure"] = r.first_failure;
    d["passed"] = r.passed();
    return d;
}

CountOptions options(unsigned shards, bool keep_thin) {
    CountOptions o;
    o.shards = shards;
    o.apply_thin = !keep_thin;
    return o;
}

py::list rows(const CountLedger& l) {
    py::list out;
    for (const auto& r : l.rows) {
        py::dict d;
        d["bound"] = r.bound;
        d["raw"] = r.raw;
        d["adjusted"] = r.adjusted;
        d["seconds"] = r.seconds;
        out.append(d);
    }
    return out;
}

CountLedger ledger_from(const std::vector<u64>& bounds, const std::vector<u64>& raw) {
    if (bounds.size() != raw.size()) throw std::invalid_argument("bounds and raw differ in length");
    CountLedger l;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        LedgerRow r;
        r.bound = bounds[i];
        r.raw = raw[i];
        l.rows.push_back(r);
    }
    return l;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact rational-point counts and Manin-Peyre constants for three Fano threefolds.";

    py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
    py::register_exception<PeyreError>(m, "PeyreError", PyExc_ArithmeticError);

    py::class_<VarietySpec>(m, "VarietySpec")
        .def_readonly("name", &VarietySpec::name)
        .def_readonly("symmetry_rank", &VarietySpec::symmetry_rank)
        .def_property_readonly("variables",
                               [](const VarietySpec& s) {
                                   std::vector<std::string> ids;
                                   for (const auto& v : s.variables) ids.push_back(v.id);
                                   return ids;
                               })
        .def_property_readonly("fingerprint", [](const VarietySpec& s) { return fingerprint(s); })
        .def("dump", [](const VarietySpec& s) { return dump_spec(s); })
        .def("equation_value",
             [](const VarietySpec& s, const TorsorPoint& x) { return equation_value(s, x).str(); })
        .def("height_ok", [](const VarietySpec& s, const TorsorPoint& x,
                             u64 bound) { return height_ok(s, x, HeightBound(bound)); })
        .def("__repr__", [](const VarietySpec& s) { return "<VarietySpec " + s.name + ">"; });

    m.def("preset", [](const std::string& name) { return preset(name); }, py::arg("name"));
    m.def("preset_names", &preset_names);
    m.def("load_spec", [](const std::string& doc) { return load_spec(doc); }, py::arg("document"));

    m.def(
        "count_exact",
        [](const VarietySpec& s, u64 bound, unsigned shards, bool keep_thin) {
            py::gil_scoped_release release;
            return count_exact(s, HeightBound(bound), options(shards, keep_thin)).raw;
        },
        py::arg("spec"), py::arg("bound"), py::arg("shards") = 1, py::arg("keep_thin") = false);
    m.def(
        "count_brute",
        [](const VarietySpec& s, u64 bound, bool keep_thin) { return count_brute(s, HeightBound(bound), !keep_thin); },
        py::arg("spec"), py::arg("bound"), py::arg("keep_thin") = false);
    m.def(
        "ladder",
        [](const VarietySpec& s, const std::vector<u64>& bounds, unsigned shards, bool keep_thin) {
            CountLedger l;
            {
                py::gil_scoped_release release;
                l = ladder(s, bounds, options(shards, keep_thin));
            }
            return rows(l);
        },
        py::arg("spec"), py::arg("bounds"), py::arg("shards") = 1, py::arg("keep_thin") = false);
    m.def(
        "count_dyadic_box",
        [](i64 xi, const std::array<u64, 6>& d, bool exclude) {
            return count_dyadic_box(xi, {d[0], d[1], d[2], d[3], d[4], d[5]}, exclude);
        },
        py::arg("xi"), py::arg("dims"), py::arg("exclude_minus_square") = true);

    m.def(
        "s_sum",
        [](i64 h1, i64 h2, u64 a, u64 c, u64 z, u64 xi) { return s_brute({h1, h2, a, c, z, xi}); },
        py::arg("h1"), py::arg("h2"), py::arg("a"), py::arg("c"), py::arg("z"), py::arg("xi") = 1);
    m.def("s_closed", &s_closed_diag, py::arg("a"), py::arg("c"), py::arg("z"), py::arg("xi") = 1);
    m.def(
        "t_sum", [](i64 k1, i64 k2, i64 x, u64 a) { return t_brute({k1, k2, x, a}); }, py::arg("k1"),
        py::arg("k2"), py::arg("x"), py::arg("a"));
    m.def("t_closed", &t_closed_diag, py::arg("x"), py::arg("a"));
    m.def("kloosterman", &kloosterman, py::arg("m"), py::arg("n"), py::arg("c"));
    m.def("gauss_pow2", &gauss_pow2, py::arg("alpha"), py::arg("rho"));
    m.def(
        "verify_charsums",
        [](u64 amax, u64 czmax, i64 xmax, i64 hmax) {
            const std::vector<u64> xis{1, 2, 3};
            py::gil_scoped_release release;
            std::vector<FamilyReport> r{verify_s_closed(amax, czmax, xis), verify_t_closed(amax, xmax),
                                        verify_s_weil(amax, czmax, xis, hmax), verify_t_weil(amax, xmax, hmax)};
            py::gil_scoped_acquire acquire;
            py::list out;
            for (const auto& f : r) out.append(family(f));
            return out;
        },
        py::arg("amax") = 40, py::arg("czmax") = 4, py::arg("xmax") = 10, py::arg("hmax") = 3);

    m.def("euler_factor", [](u64 p, unsigned r) { return fraction(euler_factor(p, r)); }, py::arg("p"),
          py::arg("r") = 0);
    m.def("singular_series", [](i64 xi, u64 pmax) { return estimate(singular_series(xi, pmax)); },
          py::arg("xi") = 1, py::arg("pmax") = 10000);
    m.def(
        "asymp_compare",
        [](i64 xi, const std::array<u64, 6>& d, u64 samples, u64 seed, bool exclude) {
            AsympReport r;
            {
                py::gil_scoped_release release;
                r = asymp_compare(xi, {d[0], d[1], d[2], d[3], d[4], d[5]}, exclude, samples, seed);
            }
            py::dict out;
            out["count"] = r.count;
            out["main_term"] = r.main_term;
            out["relative_error"] = r.relative_error;
            out["series"] = estimate(r.series);
            out["integral"] = estimate(r.integral);
            out["shape_ok"] = r.shape_ok;
            return out;
        },
        py::arg("xi"), py::arg("dims"), py::arg("samples") = 400000, py::arg("seed") = 1,
        py::arg("exclude_minus_square") = true);

    m.def(
        "exponent_system",
        [](const VarietySpec& s) {
            const auto sys = exponent_system(s);
            py::dict d;
            d["A1"] = fractions(sys.A1);
            d["A2"] = fractions(sys.A2);
            d["rank"] = sys.R;
            d["c2"] = sys.c2;
            d["rows"] = sys.I;
            return d;
        },
        py::arg("spec"));
    m.def("c_star", [](const VarietySpec& s) { return fraction(c_star(exponent_system(s))); }, py::arg("spec"));
    m.def("c_p", [](const VarietySpec& s, u64 p, unsigned L) { return fraction(c_p_density(s, p, L)); },
          py::arg("spec"), py::arg("p"), py::arg("level") = 1);
    m.def(
        "c_infty",
        [](const VarietySpec& s, u64 samples, u64 seed) {
            const auto sys = exponent_system(s);
            py::gil_scoped_release release;
            const auto e = c_infty(s, sys, samples, seed);
            py::gil_scoped_acquire acquire;
            return estimate(e);
        },
        py::arg("spec"), py::arg("samples") = 1'000'000, py::arg("seed") = 1);
    m.def(
        "peyre_constant",
        [](const VarietySpec& s, u64 samples, u64 seed, u64 pmax) {
            PeyreOptions o;
            o.samples = samples;
            o.seed = seed;
            o.pmax = pmax;
            PeyreBreakdown b;
            {
                py::gil_scoped_release release;
                b = peyre_constant(s, o);
            }
            py::dict d;
            d["c_star"] = fraction(b.c_star);
            d["c_fin"] = b.c_fin.value;
            d["c_infty"] = estimate(b.c_infty);
            d["c2"] = b.c2;
            d["product"] = b.product;
            d["uncertainty"] = b.uncertainty;
            return d;
        },
        py::arg("spec"), py::arg("samples") = 1'000'000, py::arg("seed") = 1, py::arg("pmax") = 1000);

    m.def("c_emp", &c_emp, py::arg("raw"), py::arg("bound"), py::arg("c2"));
    m.def(
        "fit",
        [](const std::vector<u64>& bounds, const std::vector<u64>& raw, std::size_t c2) {
            const auto f = fit(ledger_from(bounds, raw), c2);
            py::dict d;
            d["coefficients"] = f.coefficients;
            d["leading"] = f.leading;
            d["c_emp"] = f.c_emp;
            d["relative_residual"] = f.relative_residual;
            return d;
        },
        py::arg("bounds"), py::arg("raw"), py::arg("c2"));
    m.def(
        "last_decade_drift",
        [](const std::vector<u64>& bounds, const std::vector<u64>& raw, std::size_t c2) {
            return last_decade_drift(ledger_from(bounds, raw), c2);
        },
        py::arg("bounds"), py::arg("raw"), py::arg("c2"));
    m.attr("build_id") = build_id();
}
