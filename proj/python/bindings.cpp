#include "sinklab/closure.hpp"
#include "sinklab/errors.hpp"
#include "sinklab/green.hpp"
#include "sinklab/ilt.hpp"
#include "sinklab/literal.hpp"
#include "sinklab/observables.hpp"
#include "sinklab/oracle.hpp"
#include "sinklab/volterra.hpp"

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace sinklab;

PYBIND11_MODULE(_sinklab, m)
{
    m.doc() = "Diffusion in a V-shaped potential with a time-dependent point sink";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::enum_<SinkSign>(m, "SinkSign")
        .value("absorbing", SinkSign::absorbing)
        .value("gain", SinkSign::gain);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](double D, double omega, int sigma) {
                 return ModelParams(D, omega, parse_sink_sign(sigma));
             }),
             py::arg("D"), py::arg("omega"), py::arg("sigma") = -1)
        .def_property_readonly("D", &ModelParams::diffusion)
        .def_property_readonly("omega", &ModelParams::omega)
        .def_property_readonly("q", &ModelParams::q)
        .def_property_readonly("sigma", &ModelParams::sigma)
        .def_property_readonly("relaxation_time", &ModelParams::relaxation_time)
        .def("__repr__", [](const ModelParams& p) {
            return "ModelParams(D=" + std::to_string(p.diffusion()) +
                   ", omega=" + std::to_string(p.omega()) +
                   ", sigma=" + std::to_string(static_cast<int>(p.sigma())) + ")";
        });

    py::class_<NoSink>(m, "NoSink").def(py::init<>());
    py::class_<ConstantSink>(m, "ConstantSink")
        .def(py::init([](double a) { return ConstantSink{a}; }), py::arg("alpha0"))
        .def_readwrite("alpha0", &ConstantSink::alpha0);
    py::class_<LinearSink>(m, "LinearSink")
        .def(py::init([](double a) { return LinearSink{a}; }), py::arg("alpha1"))
        .def_readwrite("alpha1", &LinearSink::alpha1);
    py::class_<InverseTimeSink>(m, "InverseTimeSink")
        .def(py::init([](double a, double t_on) { return InverseTimeSink{a, t_on}; }),
             py::arg("alpha"), py::arg("t_on") = 1e-2)
        .def_readwrite("alpha", &InverseTimeSink::alpha)
        .def_readwrite("t_on", &InverseTimeSink::t_on);
    py::class_<ExpDecaySink>(m, "ExpDecaySink")
        .def(py::init([](double b, double a) { return ExpDecaySink{b, a}; }), py::arg("beta"),
             py::arg("alpha_decay") = 1.0)
        .def_readwrite("beta", &ExpDecaySink::beta)
        .def_readwrite("alpha_decay", &ExpDecaySink::alpha_decay);

    m.def("sink_strength", &sink_strength, py::arg("sink"), py::arg("t"));
    m.def("law_name", &law_name, py::arg("sink"));

    m.def("exact_v_green", &exact_v_green, py::arg("x"), py::arg("x0"), py::arg("s"), py::arg("params"));
    m.def("origin_green", &origin_green, py::arg("x0"), py::arg("s"), py::arg("params"));
    m.def("free_drift_green", &free_drift_green, py::arg("x"), py::arg("x0"), py::arg("s"),
          py::arg("params"));
    m.def("literal_green", &literal_green, py::arg("x"), py::arg("x0"), py::arg("s"), py::arg("params"));
    m.def("origin_kernel", &origin_kernel, py::arg("tau"), py::arg("params"));

    py::enum_<IltMethod>(m, "IltMethod")
        .value("talbot", IltMethod::talbot)
        .value("stehfest", IltMethod::stehfest)
        .value("both", IltMethod::both);

    py::class_<IltConfig>(m, "IltConfig")
        .def(py::init<>())
        .def_readwrite("method", &IltConfig::method)
        .def_readwrite("talbot_nodes", &IltConfig::talbot_nodes)
        .def_readwrite("stehfest_terms", &IltConfig::stehfest_terms)
        .def_readwrite("agreement_tol", &IltConfig::agreement_tol);

    py::class_<CheckedInversion>(m, "CheckedInversion")
        .def_readonly("value", &CheckedInversion::value)
        .def_readonly("discrepancy", &CheckedInversion::discrepancy)
        .def_readonly("flagged", &CheckedInversion::flagged)
        .def_readonly("cancellation_warning", &CheckedInversion::cancellation_warning);

    m.def("talbot", &talbot, py::arg("transform"), py::arg("t"), py::arg("nodes") = 32,
          py::arg("shift") = 0.0);
    m.def("stehfest", &stehfest, py::arg("transform"), py::arg("t"), py::arg("terms") = 14);
    m.def("invert_checked", &invert_checked, py::arg("transform"), py::arg("t"),
          py::arg("config") = IltConfig{}, py::arg("talbot_shift") = 0.0);

    py::class_<OriginResponse>(m, "OriginResponse")
        .def_readonly("s", &OriginResponse::s)
        .def_readonly("p0", &OriginResponse::p0)
        .def_readonly("sink_lap", &OriginResponse::sink_lap)
        .def_readonly("a_s", &OriginResponse::a_s)
        .def("closure_residual", &OriginResponse::closure_residual);

    m.def(
        "solve_origin",
        [](Complex s, const ModelParams& p, const SinkSpec& sink, double x0) {
            return solve_origin(s, p, sink, x0);
        },
        py::arg("s"), py::arg("params"), py::arg("sink"), py::arg("x0"));
    m.def("assemble_field", &assemble_field, py::arg("x"), py::arg("origin"), py::arg("params"),
          py::arg("x0"));

    py::class_<AnalyticSolution>(m, "AnalyticSolution")
        .def(py::init([](const ModelParams& p, const SinkSpec& sink, double x0, const IltConfig& ilt) {
                 return std::make_unique<AnalyticSolution>(p, sink, x0, ilt);
             }),
             py::arg("params"), py::arg("sink"), py::arg("x0"), py::arg("ilt") = IltConfig{})
        .def("origin", &AnalyticSolution::origin, py::arg("t"),
             py::call_guard<py::gil_scoped_release>())
        .def("survival", &AnalyticSolution::survival, py::arg("t"),
             py::call_guard<py::gil_scoped_release>())
        .def(
            "field",
            [](const AnalyticSolution& a, double t, const std::vector<double>& xs) {
                return a.field(t, xs);
            },
            py::arg("t"), py::arg("xs"), py::call_guard<py::gil_scoped_release>())
        .def_property_readonly("max_closure_residual", &AnalyticSolution::max_closure_residual);

    m.def(
        "survival_from_laplace",
        [](const ModelParams& p, const SinkSpec& sink, double x0, double t) {
            return survival_from_laplace(p, sink, x0, t);
        },
        py::arg("params"), py::arg("sink"), py::arg("x0"), py::arg("t"),
        py::call_guard<py::gil_scoped_release>());
    m.def("equilibrium_profile", &equilibrium_profile, py::arg("params"), py::arg("x"));

    py::class_<VolterraResult>(m, "VolterraResult")
        .def_readonly("t", &VolterraResult::t)
        .def_readonly("p0", &VolterraResult::p0);
    m.def(
        "volterra_p0",
        [](const ModelParams& p, const SinkSpec& sink, double x0, double t_max, int steps) {
            const auto grid = uniform_grid(t_max, steps);
            return volterra_p0(p, sink, x0, grid);
        },
        py::arg("params"), py::arg("sink"), py::arg("x0"), py::arg("t_max"), py::arg("steps"),
        py::call_guard<py::gil_scoped_release>());

    py::class_<TimeGridField>(m, "TimeGridField")
        .def_readonly("x", &TimeGridField::x)
        .def_readonly("t", &TimeGridField::t)
        .def_readonly("survival", &TimeGridField::survival)
        .def_readonly("origin", &TimeGridField::origin)
        .def_readonly("flux", &TimeGridField::flux)
        .def_readonly("snapshot_times", &TimeGridField::snapshot_times)
        .def_readonly("snapshots", &TimeGridField::snapshots)
        .def_readonly("dx", &TimeGridField::dx)
        .def_readonly("dt", &TimeGridField::dt)
        .def_readonly("x0_used", &TimeGridField::x0_used)
        .def_readonly("min_value", &TimeGridField::min_value)
        .def("value_at", &TimeGridField::value_at, py::arg("snapshot"), py::arg("x"));
    m.def(
        "cn_solve",
        [](const ModelParams& p, const SinkSpec& sink, double x0, double t_max, double dx, double dt,
           std::vector<double> snapshot_times) {
            GridSpec grid = make_grid(p, x0, t_max, dx, dt);
            grid.snapshot_times = std::move(snapshot_times);
            return cn_solve(p, sink, x0, grid);
        },
        py::arg("params"), py::arg("sink"), py::arg("x0"), py::arg("t_max"), py::arg("dx") = 0.01,
        py::arg("dt") = 1e-3, py::arg("snapshot_times") = std::vector<double>{},
        py::call_guard<py::gil_scoped_release>());

    py::class_<McEstimate>(m, "McEstimate")
        .def_readonly("t", &McEstimate::t)
        .def_readonly("survival", &McEstimate::survival)
        .def_readonly("survival_stderr", &McEstimate::survival_stderr)
        .def_readonly("mean_abs_x", &McEstimate::mean_abs_x);
    m.def(
        "mc_solve",
        [](const ModelParams& p, const SinkSpec& sink, double x0, std::int64_t paths, double dt,
           double t_max, std::uint64_t seed, double delta_width, std::vector<double> sample_times) {
            McOptions o;
            o.paths = paths;
            o.dt = dt;
            o.t_max = t_max;
            o.seed = seed;
            o.delta_width = delta_width;
            o.sample_times = std::move(sample_times);
            return mc_solve(p, sink, x0, o);
        },
        py::arg("params"), py::arg("sink"), py::arg("x0"), py::arg("paths"), py::arg("dt"),
        py::arg("t_max"), py::arg("seed") = 1, py::arg("delta_width") = 0.1,
        py::arg("sample_times") = std::vector<double>{}, py::call_guard<py::gil_scoped_release>());

    m.def(
        "numeric_laplace",
        [](const std::vector<double>& series, double dt, double s, bool apply_tail) {
            const NumericLaplace r = numeric_laplace(series, dt, s, apply_tail);
            return py::make_tuple(r.value, r.remainder_bound);
        },
        py::arg("series"), py::arg("dt"), py::arg("s"), py::arg("apply_tail") = false);

    m.def("literal_p0_constant", &literal_p0_constant, py::arg("s"), py::arg("params"),
          py::arg("alpha0"), py::arg("x0"));
}
