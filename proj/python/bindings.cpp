#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fusion/constructors.hpp"
#include "fusion/errors.hpp"
#include "fusion/io.hpp"
#include "fusion/modules.hpp"
#include "fusion/spectra.hpp"
#include "fusion/torsion.hpp"

namespace py = pybind11;
using namespace fusion;

namespace {

py::int_ to_py(const Coeff& c) { return py::int_(py::module_::import("builtins").attr("int")(c.str())); }

py::dict to_dict(const Combination& x) {
  py::dict d;
  for (const auto& [l, c] : x.terms()) d[py::str(l.id())] = to_py(c);
  return d;
}

std::vector<std::vector<std::int64_t>> to_rows(const IntMatrix& m) {
  std::vector<std::vector<std::int64_t>> rows(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) rows[i].assign(m.row(i).begin(), m.row(i).end());
  return rows;
}

struct Ring {
  io::LoadedRing r;

  std::string name() const { return r.ring->name(); }
  bool is_finite() const { return r.ring->is_finite(); }
  std::string unit() const { return r.ring->unit().id(); }
  std::vector<std::string> basis() const {
    std::vector<std::string> out;
    if (r.table)
      for (const auto& l : r.table->basis()) out.push_back(l.id());
    return out;
  }
  std::vector<std::string> labels(std::size_t depth) const {
    std::vector<std::string> out;
    for (const auto& l : r.ring->labels_up_to(depth)) out.push_back(l.id());
    return out;
  }
  std::string dual(const std::string& a) const {
    r.ring->require(a);
    return r.ring->dual(a).id();
  }
  py::dict multiply(const std::string& a, const std::string& b) const {
    r.ring->require(a);
    r.ring->require(b);
    return to_dict(r.ring->multiply(a, b));
  }
  std::string fuse_text(const std::string& x, const std::string& y) const {
    return fuse(*r.ring, io::parse_expression(*r.ring, x), io::parse_expression(*r.ring, y)).to_string();
  }
  std::map<std::string, double> dims() const {
    if (!r.table) throw io::InputError("dimensions need a finite table ring");
    std::map<std::string, double> out;
    auto dims = frobenius_perron_dims(*r.table);
    for (const auto& [l, d] : dims.values()) out[l.id()] = d;
    return out;
  }
  std::pair<bool, std::string> verify(std::size_t depth) const {
    auto rep = r.table ? verify_based_ring(*r.table) : verify_lazy_ring(*r.ring, depth);
    return {rep.passed(), rep.to_string()};
  }
  std::string document() const { return io::emit(r.document); }
  TablePtr table() const {
    if (!r.table) throw io::InputError(name() + " is not a finite table ring");
    return r.table;
  }
};

struct Module {
  ModulePtr m;
  io::Json ring_doc;

  std::vector<std::string> basis() const {
    std::vector<std::string> out;
    for (const auto& l : m->basis()) out.push_back(l.id());
    return out;
  }
  std::vector<std::vector<std::int64_t>> matrix(const std::string& alpha) const {
    m->ring()->require(alpha);
    return to_rows(m->matrix(Label(alpha)));
  }
  std::pair<bool, std::string> verify() const {
    auto rep = verify_module(*m);
    return {rep.passed(), rep.to_string()};
  }
  std::string document() const { return io::emit(io::module_to_json(*m, ring_doc)); }
};

Ring from_table(TablePtr t) {
  Ring out;
  out.r.table = t;
  out.r.ring = t;
  out.r.document = io::ring_to_json(*t);
  return out;
}

ModuleSearchConfig search(std::size_t max_size, double budget, std::size_t threads) {
  ModuleSearchConfig c;
  c.max_basis_size = max_size;
  c.time_budget_seconds = budget;
  c.threads = threads;
  return c;
}

std::vector<Module> wrap(const std::vector<ModulePtr>& ms, const io::Json& doc) {
  std::vector<Module> out;
  for (const auto& m : ms) out.push_back({m, doc});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Based rings, based modules and torsion-freeness";

  py::register_exception<io::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<FusionError>(m, "FusionError", PyExc_RuntimeError);

  py::class_<Ring>(m, "Ring")
      .def_property_readonly("name", &Ring::name)
      .def_property_readonly("is_finite", &Ring::is_finite)
      .def_property_readonly("unit", &Ring::unit)
      .def_property_readonly("basis", &Ring::basis, "Basis ids of a finite ring (empty for lazy rings)")
      .def("labels", &Ring::labels, py::arg("depth"), "Basis ids of level at most depth")
      .def("dual", &Ring::dual)
      .def("multiply", &Ring::multiply, "Product of two basis ids as {id: multiplicity}")
      .def("fuse", &Ring::fuse_text, "Product of two expressions such as \"2*phi + 1\"")
      .def("dims", &Ring::dims)
      .def("verify", &Ring::verify, py::arg("depth") = 4)
      .def("document", &Ring::document, "Canonical fusionring/1 text");

  py::class_<Module>(m, "Module")
      .def_property_readonly("basis", &Module::basis)
      .def_property_readonly("size", [](const Module& x) { return x.m->size(); })
      .def("matrix", &Module::matrix, "M(alpha) with M[b][c] = N_{alpha b}^c")
      .def("verify", &Module::verify)
      .def("document", &Module::document, "Canonical fusionmodule/1 text");

  m.def("load_ring", [](const std::string& source) { return Ring{io::load_ring(source)}; },
        "Load a ring from a path or builtin: URI");
  m.def("load_module", [](const std::string& path) {
    auto lm = io::load_module(path);
    return Module{lm.module, lm.ring.document};
  });
  m.def("tensor_product", [](const Ring& a, const Ring& b) { return from_table(tensor_product(*a.table(), *b.table())); });
  m.def("free_product", [](const std::vector<Ring>& rings) {
    io::Json factors = io::Json::array();
    for (const auto& r : rings) factors.push_back(r.r.document);
    return Ring{io::ring_from_json(io::lazy_ring_json("free_product", "", {{"factors", factors}}))};
  });
  m.def("standard_module", [](const Ring& r) { return Module{standard_module(r.table()), r.r.document}; });

  m.def(
      "enumerate_modules",
      [](const Ring& r, std::size_t max_size, double budget, std::size_t threads) {
        auto table = r.table();
        EnumerationResult res;
        {
          py::gil_scoped_release release;
          res = enumerate_modules(table, search(max_size, budget, threads));
        }
        py::dict d;
        d["modules"] = wrap(res.modules, r.r.document);
        d["complete"] = res.complete;
        d["certification_bound"] = res.certification_bound;
        d["max_basis_size"] = res.max_basis_size;
        return d;
      },
      py::arg("ring"), py::arg("max_size") = 0, py::arg("budget") = 0.0, py::arg("threads") = 0,
      "Connected based modules up to isomorphism");
  m.def(
      "is_torsion_free",
      [](const Ring& r, std::size_t max_size, double budget, std::size_t threads) {
        auto table = r.table();
        TorsionVerdict v;
        {
          py::gil_scoped_release release;
          v = is_torsion_free(table, search(max_size, budget, threads));
        }
        py::dict d;
        d["status"] = to_string(v.status);
        d["classes"] = v.classes;
        d["certified_bound"] = v.certified_bound;
        d["witnesses"] = wrap(v.witnesses, r.r.document);
        return d;
      },
      py::arg("ring"), py::arg("max_size") = 0, py::arg("budget") = 0.0, py::arg("threads") = 0);
  m.def("isomorphic", [](const Module& a, const Module& b) { return isomorphic(*a.m, *b.m); });
  m.def("chebyshev_coeffs", &chebyshev_coeffs, py::arg("n"));
  m.def(
      "dynkin_classify",
      [](const std::vector<std::vector<std::int64_t>>& adjacency) {
        FusionGraph g;
        g.adjacency = IntMatrix::from_rows(adjacency);
        g.orientation = Orientation::symmetrized;
        for (std::size_t i = 0; i < adjacency.size(); ++i) g.vertices.push_back(Label("v" + std::to_string(i)));
        auto v = dynkin_classify(g);
        py::dict d;
        d["name"] = v.name;
        d["norm"] = v.norm;
        d["describe"] = v.describe();
        return d;
      },
      "Classify a connected undirected multigraph of norm at most 2");
  m.def("canonical_json", [](const std::string& text) { return io::emit(io::parse(text)); },
        "Re-emit JSON text in the canonical document layout");
}
