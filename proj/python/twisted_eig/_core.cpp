#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "twisted/ball_eigen.hpp"
#include "twisted/errors.hpp"
#include "twisted/params.hpp"
#include "twisted/shape_verify.hpp"
#include "twisted/twisted_eigen.hpp"
#include "twisted/wirtinger.hpp"

namespace py = pybind11;
using namespace twisted;

namespace {

py::dict ball(double p, double q, int dim, double radius) {
  const auto r = ball_lambda(validate(p, q, dim), radius);
  py::dict d;
  d["lambda"] = r.lambda;
  d["radius"] = r.radius;
  d["flux"] = r.flux;
  d["euler_k"] = r.euler_k;
  d["energy_residual"] = r.energy_residual;
  const auto nodes = r.profile.grid().nodes();
  const auto values = r.profile.values();
  d["r"] = std::vector<double>(nodes.begin(), nodes.end());
  d["u"] = std::vector<double>(values.begin(), values.end());
  return d;
}

py::dict twisted_pair(double p, double q, int dim, double R1, double R2, const std::string& method) {
  TwistedConfig cfg{validate(p, q, dim), R1, R2};
  const auto r = method == "direct" ? twisted_direct(cfg) : twisted_structured(cfg);
  py::dict d;
  d["lambda"] = r.lambda;
  d["m"] = r.m;
  d["k"] = r.k;
  d["c1"] = r.c1;
  d["c2"] = r.c2;
  d["f1"] = r.f1;
  d["f2"] = r.f2;
  d["moment_residual"] = r.moment_residual;
  d["method"] = r.method;
  return d;
}

py::list sweep(double p, double q, int dim, std::size_t steps, double min_fraction) {
  SweepSettings s;
  s.steps = steps;
  s.min_fraction = min_fraction;
  py::list out;
  for (const auto& r : sweep_volume(validate(p, q, dim), s)) {
    py::dict d;
    d["theta"] = r.theta;
    d["R1"] = r.R1;
    d["R2"] = r.R2;
    d["lambda"] = r.lambda;
    d["f1"] = r.f1;
    d["f2"] = r.f2;
    d["m"] = r.m;
    d["status"] = r.status;
    out.append(d);
  }
  return out;
}

double curve_defect(const std::string& shape, double p, double a, double b, std::uint64_t seed) {
  if (shape == "circle") return isoperimetric_defect(circle_curve(), p);
  if (shape == "ellipse") return isoperimetric_defect(ellipse_curve(a, b), p);
  if (shape == "lr-ball") return isoperimetric_defect(lr_ball_curve(conjugate_exponent(p)), p);
  if (shape == "random") return isoperimetric_defect(random_curve(seed), p);
  throw Error(ErrorKind::InvalidArgument, "unknown shape '" + shape + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Twisted Dirichlet eigenvalues on balls, two-ball unions and intervals";

  py::register_exception_translator([](std::exception_ptr ptr) {
    try {
      if (ptr) std::rethrow_exception(ptr);
    } catch (const Error& e) {
      if (e.is_usage_error()) PyErr_SetString(PyExc_ValueError, e.what());
      else PyErr_SetString(PyExc_RuntimeError, e.what());
    }
  });

  m.def("scaling_exponent",
        [](double p, double q, int dim) { return scaling_exponent(validate(p, q, dim)); },
        py::arg("p"), py::arg("q"), py::arg("dim"));
  m.def("ball_lambda", &ball, py::arg("p"), py::arg("q"), py::arg("dim"), py::arg("radius") = 1.0,
        "First eigenvalue of the ball with its normalized radial profile.");
  m.def("ball_lambda_direct",
        [](double p, double q, int dim, double radius, std::size_t cells) {
          DirectOptions o;
          o.cells = cells;
          return ball_lambda_direct(validate(p, q, dim), radius, o).lambda;
        },
        py::arg("p"), py::arg("q"), py::arg("dim"), py::arg("radius") = 1.0, py::arg("cells") = 512);
  m.def("twisted", &twisted_pair, py::arg("p"), py::arg("q"), py::arg("dim"), py::arg("R1"),
        py::arg("R2"), py::arg("method") = "structured");
  m.def("sweep", &sweep, py::arg("p"), py::arg("q"), py::arg("dim"), py::arg("steps") = 33,
        py::arg("min_fraction") = 0.4);
  m.def("wirtinger_lambda", &wirtinger_lambda, py::arg("p"), py::arg("q"));
  m.def("curve_defect", &curve_defect, py::arg("shape"), py::arg("p"), py::arg("a") = 1.0,
        py::arg("b") = 2.0, py::arg("seed") = 0);
}
