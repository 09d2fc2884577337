#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gd/analysis.hpp"
#include "gd/errors.hpp"
#include "gd/study.hpp"

namespace py = pybind11;
using namespace gd;

namespace {

RealFunction lookup(const std::string& label) {
    auto f = battery_function(label);
    if (!f) throw py::value_error("unknown battery function '" + label + "'");
    return *f;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Grunwald and Grunwald-Durrmeyer operators on [0, pi]";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigurationError>(m, "ConfigurationError", PyExc_RuntimeError);
    py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);

    py::enum_<KernelPath>(m, "KernelPath").value("direct", KernelPath::direct).value("series", KernelPath::series);
    py::enum_<OperatorKind>(m, "OperatorKind")
        .value("grunwald", OperatorKind::grunwald)
        .value("durrmeyer", OperatorKind::durrmeyer);
    py::enum_<Smoothness>(m, "Smoothness")
        .value("continuous", Smoothness::continuous)
        .value("lipschitz", Smoothness::lipschitz)
        .value("c1", Smoothness::c1)
        .value("step", Smoothness::step)
        .value("generic_lp", Smoothness::generic_lp);

    py::class_<RealFunction>(m, "RealFunction")
        .def(py::init([](std::string label, Smoothness s, std::function<double(double)> fn,
                         std::vector<double> discontinuities, std::vector<double> kinks) {
                 auto f = make_function(std::move(label), s, std::move(fn));
                 f.discontinuities = std::move(discontinuities);
                 f.kinks = std::move(kinks);
                 return f;
             }),
             py::arg("label"), py::arg("smoothness"), py::arg("evaluator"), py::arg("discontinuities") = std::vector<double>{},
             py::arg("kinks") = std::vector<double>{})
        .def_readonly("label", &RealFunction::label)
        .def_readonly("smoothness", &RealFunction::smoothness)
        .def("__call__", &RealFunction::operator())
        .def("breakpoints", &RealFunction::breakpoints);

    m.def("battery_labels", &battery_labels);
    m.def("battery_function", &lookup, py::arg("label"));

    m.def("chebyshev_nodes", [](int n) { return chebyshev_nodes(n).angles; }, py::arg("n"));
    m.def("lagrange_basis", &lagrange_basis, py::arg("n"), py::arg("k"), py::arg("t"),
          py::arg("path") = KernelPath::series);
    m.def("kernel_eval", &kernel_eval, py::arg("n"), py::arg("k"), py::arg("t"), py::arg("path") = KernelPath::series);
    m.def(
        "kernel_table",
        [](int n, const std::vector<double>& grid) {
            const auto t = kernel_table(n, grid);
            std::vector<std::vector<double>> rows;
            for (int k = 1; k <= n; ++k) rows.emplace_back(t.row(k).begin(), t.row(k).end());
            return rows;
        },
        py::arg("n"), py::arg("grid"));

    m.def(
        "apply",
        [](OperatorKind kind, int n, const RealFunction& f, const std::vector<double>& thetas) {
            const OperatorWorkspace ws(n, default_rule(n, f.breakpoints()), thetas);
            return ws.apply_on_grid(kind, f);
        },
        py::arg("kind"), py::arg("n"), py::arg("f"), py::arg("thetas"));
    m.def(
        "durrmeyer_coefficients",
        [](int n, const RealFunction& f) { return durrmeyer_coefficients(n, f, default_rule(n, f.breakpoints())).c; },
        py::arg("n"), py::arg("f"));
    m.def(
        "operator_error",
        [](int n, const RealFunction& f, OperatorKind kind, const std::string& norm) {
            const auto nm = parse_norm(norm);
            if (!nm) throw py::value_error("unknown norm '" + norm + "'");
            return operator_error(n, f, kind, *nm);
        },
        py::arg("n"), py::arg("f"), py::arg("kind") = OperatorKind::durrmeyer, py::arg("norm") = "sup");

    m.def(
        "kernel_mass_deviation", [](int n) { return verify_kernel_mass(n, default_rule(n)).max_deviation; },
        py::arg("n"));
    m.def("lebesgue_sum", &lebesgue_sum, py::arg("n"), py::arg("theta"));
    m.def(
        "delta_n", [](int n, double theta) { return delta_n(n, theta, default_rule(n)); }, py::arg("n"),
        py::arg("theta"));
    m.def("m_n", &m_n, py::arg("n"), py::arg("p"));
    m.def(
        "k_functional_upper", [](const RealFunction& f, double delta, double p) { return k_functional_upper(f, delta, p).value; },
        py::arg("f"), py::arg("delta"), py::arg("p"));
    m.def(
        "rate_fit",
        [](const std::vector<int>& ns, const std::vector<double>& errors, const std::vector<double>& model) {
            if (ns.size() != errors.size() || ns.size() != model.size())
                throw py::value_error("rate_fit: length mismatch");
            std::vector<ConvergenceRecord> recs;
            for (std::size_t i = 0; i < ns.size(); ++i)
                recs.push_back({ns[i], "", OperatorKind::durrmeyer, Norm::sup(), errors[i], model[i]});
            const auto fit = rate_fit(recs);
            py::dict d;
            d["slope"] = fit.slope;
            d["intercept"] = fit.intercept;
            d["r_squared"] = fit.r_squared;
            d["max_ratio"] = fit.max_ratio;
            d["min_ratio"] = fit.min_ratio;
            return d;
        },
        py::arg("n"), py::arg("errors"), py::arg("model_values"));
    m.def(
        "verify",
        [](const std::vector<int>& n_values) {
            StudyConfig c;
            c.n_values = n_values;
            py::list out;
            for (const auto& chk : run_verification(c)) {
                py::dict d;
                d["check"] = chk.check;
                d["n"] = chk.n;
                d["deviation"] = chk.deviation;
                d["tolerance"] = chk.tolerance;
                d["pass"] = chk.pass();
                out.append(d);
            }
            return out;
        },
        py::arg("n_values"));
}
