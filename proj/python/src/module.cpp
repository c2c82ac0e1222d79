#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "germforge/errors.hpp"
#include "germforge/solver.hpp"
#include "germforge/workspace.hpp"

namespace py = pybind11;
using namespace germforge;

namespace {

std::vector<std::string> jets_text(const std::vector<Jet>& js) {
  std::vector<std::string> out;
  for (const auto& j : js) out.push_back(j.to_string());
  return out;
}

py::dict solve(const Workspace& ws, const std::string& group, const std::string& lhs,
               const std::string& rhs, int degree, const std::optional<std::string>& seed,
               const std::vector<std::string>& constraints) {
  SolveRequest req;
  req.group = parse_group_tag(group);
  req.f_tilde = ws.map(lhs);
  req.f = ws.map(rhs);
  req.degree = degree;
  if (seed) req.seed = ws.element(*seed).element;
  for (const auto& c : constraints) {
    auto sp = c.find(' ');
    if (sp == std::string::npos) throw DomainError("constraint needs a target and a variant");
    req.constraints.push_back(parse_constraint(c.substr(0, sp), c.substr(sp + 1)));
  }
  SolveReport r;
  {
    py::gil_scoped_release release;
    r = solve_equivalence(req);
  }
  py::dict d;
  d["verdict"] = to_string(r.verdict);
  d["degree"] = r.degree;
  d["order"] = r.order;
  d["message"] = r.message;
  py::dict residual;
  for (const auto& p : r.residual) residual[py::str(p.label)] = p.residual.to_string();
  d["residual"] = residual;
  if (r.witness) {
    d["phi_x"] = jets_text(r.phi_x);
    d["phi_y"] = jets_text(r.phi_y);
    d["contact"] = jets_text(r.contact);
    d["element"] = print_element("witness", {req.f.source->name(), req.f.target->name(), *r.witness});
  } else {
    d["element"] = py::none();
  }
  return d;
}

bool verify(const Workspace& ws, const std::string& lhs, const std::string& rhs,
            const std::string& element, int degree) {
  return maps_equal_mod(apply(ws.element(element).element, ws.map(rhs)), ws.map(lhs), degree);
}

py::tuple run(const std::vector<std::string>& args, const std::string& input) {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = cli::run(args, in, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

template <class M>
std::vector<std::string> keys(const M& m) {
  std::vector<std::string> out;
  for (const auto& [k, v] : m) out.push_back(k);
  return out;
}

}  // namespace

PYBIND11_MODULE(_germforge, m) {
  py::register_exception<Error>(m, "GermforgeError", PyExc_ValueError);

  py::class_<Workspace>(m, "Workspace")
      .def(py::init(&parse_workspace), py::arg("text"))
      .def("__str__", &print_workspace)
      .def_property_readonly("rings", [](const Workspace& w) { return keys(w.rings); })
      .def_property_readonly("maps", [](const Workspace& w) { return keys(w.maps); })
      .def_property_readonly("quivers", [](const Workspace& w) { return keys(w.quivers); })
      .def_property_readonly("elements", [](const Workspace& w) { return keys(w.elements); })
      .def("map_components",
           [](const Workspace& w, const std::string& name) { return jets_text(w.map(name).components); })
      .def("parse_jet", [](const Workspace& w, const std::string& ring, const std::string& text) {
        return w.ring(ring)->parse(text).to_string();
      });

  m.def("solve", &solve, py::arg("workspace"), py::arg("group"), py::arg("lhs"), py::arg("rhs"),
        py::arg("degree"), py::arg("seed") = py::none(),
        py::arg("constraints") = std::vector<std::string>{});
  m.def("verify", &verify, py::arg("workspace"), py::arg("lhs"), py::arg("rhs"),
        py::arg("element"), py::arg("degree"));
  m.def("run", &run, py::arg("args"), py::arg("stdin") = "");
}
