// Thin JSON-in, JSON-out bindings; the Python package converts to dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sia/exact.hpp"
#include "sia/json_io.hpp"
#include "sia/multi_round.hpp"

namespace py = pybind11;

namespace {

sia::Instance parse_instance(const std::string& text) {
  return sia::instance_from_json(nlohmann::json::parse(text));
}

sia::SolverKind parse_solver(const std::string& name) {
  auto kind = sia::parse_solver_kind(name);
  if (!kind) throw std::invalid_argument("unknown solver '" + name + "'");
  return *kind;
}

std::string solve(const std::string& instance, const std::string& solver, std::optional<std::uint64_t> seed,
                  std::int64_t rounds, std::optional<std::uint64_t> node_budget) {
  const auto inst = parse_instance(instance);
  const auto kind = parse_solver(solver);
  if (kind == sia::SolverKind::RandomShares && !seed) throw std::invalid_argument("solver 'rand' needs a seed");
  sia::SolveResult result;
  {
    py::gil_scoped_release release;
    result = sia::solve_multi_round(inst, rounds, kind, seed.value_or(0), node_budget);
  }
  sia::OrderedJson doc;
  doc["solver"] = solver;
  doc["rounds"] = rounds;
  doc["proven_optimal"] = result.proven_optimal;
  doc["x"] = sia::allocation_tensor_json(result.allocation);
  doc["cost"] = sia::cost_to_json(result.cost);
  return doc.dump();
}

std::string brute_force(const std::string& instance, std::int64_t rounds) {
  const auto inst = parse_instance(instance);
  const auto result = sia::brute_force_oracle(inst, rounds);
  return sia::allocation_to_json(result.allocation, result.cost).dump();
}

std::string bounds(const std::string& instance) {
  const auto inst = parse_instance(instance);
  return sia::bounds_to_json(sia::compute_bounds(inst), inst).dump();
}

std::string validate(const std::string& instance, const std::string& allocation, std::int64_t rounds) {
  const auto inst = parse_instance(instance);
  const auto alloc = sia::allocation_from_json(nlohmann::json::parse(allocation), inst);
  return sia::report_to_json(sia::validate(inst, alloc, rounds)).dump();
}

std::string decompose(const std::string& instance, const std::string& allocation, std::int64_t rounds) {
  const auto inst = parse_instance(instance);
  const auto alloc = sia::allocation_from_json(nlohmann::json::parse(allocation), inst);
  sia::OrderedJson out = sia::OrderedJson::array();
  for (const auto& round : sia::decompose_rounds(inst, alloc, rounds)) out.push_back(sia::allocation_tensor_json(round));
  return out.dump();
}

std::string partition_instance(const std::vector<std::int64_t>& values) {
  return sia::instance_to_json(sia::build_partition_instance(values)).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Service-to-interface assignment solvers";

  // Released handles: the module keeps the types alive, and nothing runs at
  // interpreter teardown.
  static py::handle infeasible = py::exception<sia::InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError).release();
  static py::handle schema = py::exception<sia::JsonSchemaError>(m, "SchemaError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const sia::InfeasibleError& e) {
      PyErr_SetString(infeasible.ptr(), e.what());
    } catch (const sia::JsonSchemaError& e) {
      PyErr_SetString(schema.ptr(), e.what());
    } catch (const nlohmann::json::exception& e) {
      PyErr_SetString(schema.ptr(), e.what());
    }
  });

  m.def("solve", &solve, py::arg("instance"), py::arg("solver") = "exact", py::arg("seed") = py::none(),
        py::arg("rounds") = 1, py::arg("node_budget") = py::none());
  m.def("brute_force", &brute_force, py::arg("instance"), py::arg("rounds") = 1);
  m.def("bounds", &bounds, py::arg("instance"));
  m.def("validate", &validate, py::arg("instance"), py::arg("allocation"), py::arg("rounds") = 1);
  m.def("decompose", &decompose, py::arg("instance"), py::arg("allocation"), py::arg("rounds"));
  m.def("partition_instance", &partition_instance, py::arg("values"));
}
