// Python bindings. Reports cross the boundary as JSON text and are decoded on the
// Python side, so both front ends share one serialization path.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "eigcouple/crystal_optics.hpp"
#include "eigcouple/reports.hpp"

namespace py = pybind11;
namespace ec = eigcouple;

namespace {

ec::CMatrix to_cmatrix(const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw ec::DimensionError("expected a square matrix");
  const auto n = static_cast<std::size_t>(a.shape(0));
  ec::CMatrix m(n, n);
  auto r = a.unchecked<2>();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = r(i, j);
  return m;
}

py::array_t<std::complex<double>> to_numpy(const ec::CMatrix& m) {
  py::array_t<std::complex<double>> out({m.rows(), m.cols()});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) w(i, j) = m(i, j);
  return out;
}

ec::AnalysisOptions opts(double tol_cluster, double tol_rank) {
  ec::AnalysisOptions o;
  o.tol_cluster = tol_cluster;
  o.tol_rank = tol_rank;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Double-eigenvalue detection and local asymptotics for matrix families";

  auto base = py::register_exception<ec::Error>(m, "EigcoupleError");
  py::register_exception<ec::DegeneracyError>(m, "DegeneracyError", base);
  py::register_exception<ec::DomainError>(m, "DomainError", base);
  py::register_exception<ec::ChartError>(m, "ChartError", base);
  py::register_exception<ec::ParseError>(m, "ParseError", base);
  py::register_exception<ec::DimensionError>(m, "DimensionError", base);
  static py::handle nonconv = py::exception<ec::NonConvergenceError>(m, "NonConvergenceError", base).release();
  // carries the residual history as .history
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ec::NonConvergenceError& e) {
      py::object inst = py::reinterpret_borrow<py::object>(nonconv)(e.what());
      inst.attr("history") = e.history();
      PyErr_SetObject(nonconv.ptr(), inst.ptr());
    }
  });

  py::class_<ec::MatrixFamily>(m, "Family")
      .def_property_readonly("dimension", &ec::MatrixFamily::dimension)
      .def_property_readonly("n_params", &ec::MatrixFamily::n_params)
      .def("in_domain", [](const ec::MatrixFamily& f, std::vector<double> p) { return f.in_domain(p); })
      .def("evaluate", [](const ec::MatrixFamily& f, std::vector<double> p) { return to_numpy(f.evaluate(p)); })
      .def("derivative", [](const ec::MatrixFamily& f, std::vector<double> p, std::size_t i) {
        return to_numpy(f.derivative(p, i));
      });

  m.def("builtin_family", [](const std::string& name) {
    auto f = ec::builtin_family(name);
    if (!f) throw py::value_error("unknown builtin family: " + name);
    return *f;
  });
  m.def("parse_family", [](const std::string& text) { return ec::parse_family(text); });
  m.def("dielectric_family", [](const std::string& text) {
    return ec::family_adapter(ec::parse_dielectric_spec(text));
  });

  m.def("eigenvalues", [](const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& a) {
    return ec::eigenvalues(to_cmatrix(a));
  });

  m.def(
      "classify_json",
      [](const ec::MatrixFamily& f, std::vector<double> at, double tol_cluster, double tol_rank,
         const std::string& name) { return ec::classify_report(ec::analyze_anchor(f, at, opts(tol_cluster, tol_rank)), name); },
      py::arg("family"), py::arg("at"), py::arg("tol_cluster") = ec::kDefaultClusterTol,
      py::arg("tol_rank") = ec::kDefaultRankTol, py::arg("name") = "");

  m.def(
      "scenario_json",
      [](const ec::MatrixFamily& f, std::vector<double> at, std::vector<double> section, const std::string& name) {
        const auto an = ec::analyze_anchor(f, at);
        if (section.empty()) section.assign(f.n_params() - 1, 0.0);
        return ec::scenario_report(an, name, section);
      },
      py::arg("family"), py::arg("at"), py::arg("section") = std::vector<double>{}, py::arg("name") = "");

  m.def(
      "loop_json",
      [](const ec::MatrixFamily& f, std::vector<double> at, double a, double b, double r, std::size_t samples) {
        const auto an = ec::analyze_anchor(f, at);
        if (!an.ep) throw ec::DegeneracyError("loop requires an exceptional point at the anchor");
        const ec::LoopSpec spec{a, b, r, samples};
        return ec::loop_report(an, spec, ec::loop_trajectory(*an.ep, spec));
      },
      py::arg("family"), py::arg("at"), py::arg("a"), py::arg("b"), py::arg("r"), py::arg("samples") = 720);

  m.def(
      "find_ep_json",
      [](const ec::MatrixFamily& f, std::vector<double> guess, const std::string& name) {
        return ec::find_ep_report(ec::find_ep(f, guess), name);
      },
      py::arg("family"), py::arg("guess"), py::arg("name") = "");

  m.def(
      "surface_csv",
      [](const ec::MatrixFamily& f, std::vector<double> at, std::array<double, 4> window, std::size_t res) {
        const auto an = ec::analyze_anchor(f, at);
        std::ostringstream os;
        ec::write_surface_csv(os, ec::sample_surface(f, an, {window[0], window[1], window[2], window[3]}, res));
        return os.str();
      },
      py::arg("family"), py::arg("at"), py::arg("window"), py::arg("res"));
}
