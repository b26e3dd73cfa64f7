#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hopf/connectivity.hpp"
#include "hopf/explorer.hpp"
#include "hopf/serialize.hpp"

namespace py = pybind11;
using namespace hopf;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_python(const py::handle& obj) {
    return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

PathConfig path_config(double margin_threshold, int samples_per_segment, int max_depth, double detour_scale,
                       double min_step, std::uint64_t seed, bool strict) {
    PathConfig cfg;
    cfg.margin_threshold = margin_threshold;
    cfg.samples_per_segment = samples_per_segment;
    cfg.max_depth = max_depth;
    cfg.detour_scale = detour_scale;
    cfg.min_step = min_step;
    cfg.seed = seed;
    cfg.strict = strict;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(hopf_moduli, m) {
    m.doc() = "Moduli of rank-2 bundles on classical Hopf surfaces: divisors, spectral curves, periods, paths.";

    static py::exception<Error> base(m, "HopfError", PyExc_RuntimeError);
    static py::exception<Error> parse(m, "ParseError", base.ptr());
    static py::exception<Error> invariant(m, "InvariantError", base.ptr());
    static py::exception<Error> precondition(m, "PreconditionError", base.ptr());
    static py::exception<Error> budget(m, "BudgetError", base.ptr());
    static py::exception<Error> singular(m, "SingularError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            switch (e.kind()) {
                case ErrorKind::Parse: py::set_error(parse, e.what()); break;
                case ErrorKind::Invariant: py::set_error(invariant, e.what()); break;
                case ErrorKind::Precondition: py::set_error(precondition, e.what()); break;
                case ErrorKind::Budget: py::set_error(budget, e.what()); break;
                case ErrorKind::Singular: py::set_error(singular, e.what()); break;
            }
        }
    });

    py::class_<HopfParameter>(m, "HopfParameter")
        .def_static("from_tau", &HopfParameter::from_tau, py::arg("tau"))
        .def_static("from_mu", &HopfParameter::from_mu, py::arg("mu"))
        .def_static("standard", &HopfParameter::standard)
        .def_property_readonly("mu", &HopfParameter::mu)
        .def_property_readonly("tau", &HopfParameter::tau)
        .def("__repr__", [](const HopfParameter& h) { return "HopfParameter(" + io::encode(h).dump() + ")"; });

    py::class_<ProjectivePoint>(m, "ProjectivePoint")
        .def(py::init(&ProjectivePoint::normalized), py::arg("x0"), py::arg("x1"))
        .def_static("from_value", &ProjectivePoint::from_value, py::arg("w"))
        .def_static("infinity", &ProjectivePoint::infinity)
        .def_readonly("x0", &ProjectivePoint::x0)
        .def_readonly("x1", &ProjectivePoint::x1)
        .def("is_infinite", &ProjectivePoint::is_infinite, py::arg("tol") = 0.0)
        .def("value", &ProjectivePoint::value)
        .def("__repr__", [](const ProjectivePoint& p) { return "ProjectivePoint(" + io::encode(p).dump() + ")"; });
    m.def("chordal_distance", &chordal_distance);

    m.def("roots", [](const Coeffs& c) {
        std::vector<std::pair<ProjectivePoint, int>> out;
        for (const auto& r : roots(BinaryForm(c))) out.emplace_back(r.point, r.multiplicity);
        return out;
    }, py::arg("coeffs"), "Roots on P^1 of sum c_k x0^(d-k) x1^k, with multiplicities.");
    m.def("resultant", [](const Coeffs& f, const Coeffs& g) { return resultant(BinaryForm(f), BinaryForm(g)); });
    m.def("discriminant", [](const Coeffs& f) { return discriminant(BinaryForm(f)); });
    m.def("gcd", [](const Coeffs& f, const Coeffs& g) {
        const BinaryForm d = gcd(BinaryForm(f), BinaryForm(g));
        return Coeffs(d.coefficients().begin(), d.coefficients().end());
    }, "Unit-norm gcd coefficients; length 1 means coprime.");

    py::class_<GraphDivisor>(m, "GraphDivisor")
        .def(py::init<Coeffs, Coeffs>(), py::arg("a"), py::arg("b"))
        .def_static("from_json", [](const py::object& o) { return io::decode_divisor(from_python(o)); })
        .def_property_readonly("n", &GraphDivisor::n)
        .def_property_readonly("a", [](const GraphDivisor& d) { return Coeffs(d.a().begin(), d.a().end()); })
        .def_property_readonly("b", [](const GraphDivisor& d) { return Coeffs(d.b().begin(), d.b().end()); })
        .def("normalized", &GraphDivisor::normalized)
        .def("equivalent_to", &GraphDivisor::equivalent_to, py::arg("other"), py::arg("tol") = 1e-12)
        .def("map", &GraphDivisor::map)
        .def("to_json", [](const GraphDivisor& d) { return to_python(io::encode(d)); });

    m.def("stratify", [](const GraphDivisor& d) { return to_python(io::encode(stratify(d))); });
    m.def("spectral_curve", [](const GraphDivisor& d, const HopfParameter& h) {
        return to_python(io::encode(spectral_curve(d, h)));
    }, py::arg("divisor"), py::arg("hopf") = HopfParameter::standard());
    m.def("regularity_margin", &regularity_margin, py::arg("divisor"), py::arg("hopf") = HopfParameter::standard());
    m.def("is_regular", &is_regular, py::arg("divisor"), py::arg("hopf") = HopfParameter::standard());
    m.def("fiber_type", [](const GraphDivisor& d, const HopfParameter& h, const ProjectivePoint& x) {
        return to_python(io::encode(fiber_type(d, h, x)));
    }, py::arg("divisor"), py::arg("hopf"), py::arg("x"));
    m.def("dimension_count", [](int n) { return to_python(io::encode(dimension_count(n))); });

    m.def("riemann_matrix", [](const GraphDivisor& d, const HopfParameter& h, int quadrature_order, int ordering_shift) {
        PeriodOptions opt;
        opt.quadrature_order = quadrature_order;
        opt.ordering_shift = ordering_shift;
        return period_matrix(spectral_curve(d, h), opt).riemann;
    }, py::arg("divisor"), py::arg("hopf") = HopfParameter::standard(), py::arg("quadrature_order") = 24,
          py::arg("ordering_shift") = 0);
    m.def("periods", [](const GraphDivisor& d, const HopfParameter& h) {
        return to_python(io::encode(period_matrix(spectral_curve(d, h))));
    }, py::arg("divisor"), py::arg("hopf") = HopfParameter::standard());

    m.def("connect", [](const GraphDivisor& d0, const GraphDivisor& d1, const HopfParameter& h, double margin_threshold,
                        int samples_per_segment, int max_depth, double detour_scale, double min_step,
                        std::uint64_t seed, bool strict) {
        const PathConfig cfg =
            path_config(margin_threshold, samples_per_segment, max_depth, detour_scale, min_step, seed, strict);
        return to_python(io::encode(connect_base(d0, d1, h, cfg)));
    }, py::arg("start"), py::arg("end"), py::arg("hopf") = HopfParameter::standard(),
          py::arg("margin_threshold") = 1e-10, py::arg("samples_per_segment") = 16, py::arg("max_depth") = 3,
          py::arg("detour_scale") = 0.5, py::arg("min_step") = 1e-6, py::arg("seed") = 0, py::arg("strict") = false);

    m.def("census", [](int n, long trials, const HopfParameter& h, std::uint64_t seed) {
        const CensusRecord c = census(n, trials, h, seed, thread_count());
        py::dict out;
        out["n"] = c.n;
        out["trials"] = c.trials;
        out["counts"] = c.counts;
        out["irregular"] = c.irregular;
        out["regular_fraction"] = c.regular_fraction;
        return out;
    }, py::arg("n"), py::arg("trials"), py::arg("hopf") = HopfParameter::standard(), py::arg("seed") = 0);

    m.def("run", [](const std::string& command, const py::object& config, const std::string& base_dir) {
        const RunConfig cfg = parse_run_config(from_python(config), command, base_dir);
        CommandResult r;
        {
            py::gil_scoped_release release;
            r = run_command(cfg);
        }
        return to_python(r.document);
    }, py::arg("command"), py::arg("config"), py::arg("base_dir") = ".",
          "Runs analyze / connect / sample / periods on a configuration dict and returns the v1 document.");

    m.attr("SCHEMA") = io::kSchema;
}
