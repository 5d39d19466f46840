#include "sia/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sia {
namespace {

using nlohmann::json;

std::string child(const std::string& pointer, const std::string& key) { return pointer + "/" + key; }
std::string child(const std::string& pointer, std::size_t index) { return pointer + "/" + std::to_string(index); }

const json& field(const json& obj, const std::string& pointer, const std::string& key) {
  if (!obj.is_object()) throw JsonSchemaError(pointer.empty() ? "/" : pointer, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw JsonSchemaError(child(pointer, key), "missing required field");
  return *it;
}

const json& array_at(const json& value, const std::string& pointer) {
  if (!value.is_array()) throw JsonSchemaError(pointer, "expected an array");
  return value;
}

std::int64_t integer(const json& value, const std::string& pointer) {
  if (value.is_number_integer()) return value.get<std::int64_t>();
  if (value.is_number_float()) {
    const double d = value.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
  }
  throw JsonSchemaError(pointer, "expected an integer");
}

std::int64_t nonnegative(const json& value, const std::string& pointer) {
  const auto v = integer(value, pointer);
  if (v < 0) throw JsonSchemaError(pointer, "must be nonnegative");
  return v;
}

std::vector<std::int64_t> nonnegative_vector(const json& value, const std::string& pointer, std::size_t length) {
  array_at(value, pointer);
  if (value.size() != length) {
    throw JsonSchemaError(pointer, "expected " + std::to_string(length) + " entries, got " + std::to_string(value.size()));
  }
  std::vector<std::int64_t> out;
  for (std::size_t n = 0; n < value.size(); ++n) out.push_back(nonnegative(value[n], child(pointer, n)));
  return out;
}

std::string optional_string(const json& obj, const std::string& key, std::string fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) throw JsonSchemaError("/" + key, "expected a string");
  return it->get<std::string>();
}

Rational rational_value(const json& value, const std::string& pointer) {
  try {
    if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
    if (value.is_number_float()) return rational_from_double(value.get<double>());
    if (value.is_string()) return parse_rational(value.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw JsonSchemaError(pointer, e.what());
  }
  throw JsonSchemaError(pointer, "expected a number or a \"p/q\" string");
}

template <class Fn>
auto wrap_domain_errors(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw JsonSchemaError("/", e.what());
  }
}

}  // namespace

Instance instance_from_json(const json& doc) {
  const auto& resources_json = array_at(field(doc, "", "resources"), "/resources");
  std::vector<std::string> resources;
  for (std::size_t k = 0; k < resources_json.size(); ++k) {
    if (!resources_json[k].is_string()) throw JsonSchemaError(child("/resources", k), "expected a string");
    resources.push_back(resources_json[k].get<std::string>());
  }
  if (resources.empty()) throw JsonSchemaError("/resources", "needs at least one resource");
  const std::size_t K = resources.size();

  const auto& interfaces_json = array_at(field(doc, "", "interfaces"), "/interfaces");
  if (interfaces_json.empty()) throw JsonSchemaError("/interfaces", "needs at least one interface");
  std::vector<InterfaceSpec> interfaces;
  for (std::size_t i = 0; i < interfaces_json.size(); ++i) {
    const auto p = child("/interfaces", i);
    const auto& obj = interfaces_json[i];
    InterfaceSpec spec;
    if (obj.is_object() && obj.contains("name")) {
      if (!obj["name"].is_string()) throw JsonSchemaError(child(p, "name"), "expected a string");
      spec.name = obj["name"].get<std::string>();
    }
    spec.capacity = nonnegative_vector(field(obj, p, "capacity"), child(p, "capacity"), K);
    spec.unit_cost = nonnegative_vector(field(obj, p, "unit_cost"), child(p, "unit_cost"), K);
    spec.activation_cost = nonnegative(field(obj, p, "activation_cost"), child(p, "activation_cost"));
    interfaces.push_back(std::move(spec));
  }

  const auto& services_json = array_at(field(doc, "", "services"), "/services");
  std::vector<ServiceSpec> services;
  for (std::size_t j = 0; j < services_json.size(); ++j) {
    const auto p = child("/services", j);
    const auto& obj = services_json[j];
    ServiceSpec spec;
    if (obj.is_object() && obj.contains("name")) {
      if (!obj["name"].is_string()) throw JsonSchemaError(child(p, "name"), "expected a string");
      spec.name = obj["name"].get<std::string>();
    }
    spec.demand = nonnegative_vector(field(obj, p, "demand"), child(p, "demand"), K);
    services.push_back(std::move(spec));
  }

  OverheadTensor overhead;
  if (doc.contains("overhead") && !doc["overhead"].is_null()) {
    const auto& a = array_at(doc["overhead"], "/overhead");
    if (a.size() != interfaces.size()) throw JsonSchemaError("/overhead", "expected one entry per interface");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto pi = child("/overhead", i);
      array_at(a[i], pi);
      if (a[i].size() != services.size()) throw JsonSchemaError(pi, "expected one entry per service");
      auto& per_interface = overhead.emplace_back();
      for (std::size_t j = 0; j < a[i].size(); ++j) {
        const auto pj = child(pi, j);
        array_at(a[i][j], pj);
        if (a[i][j].size() != K) throw JsonSchemaError(pj, "expected one entry per resource");
        auto& per_service = per_interface.emplace_back();
        for (std::size_t k = 0; k < K; ++k) {
          const auto value = rational_value(a[i][j][k], child(pj, k));
          if (value < 0) throw JsonSchemaError(child(pj, k), "must be nonnegative");
          per_service.push_back(value);
        }
      }
    }
  }

  return wrap_domain_errors([&] {
    return Instance(std::move(resources), std::move(interfaces), std::move(services), std::move(overhead));
  });
}

OrderedJson instance_to_json(const Instance& inst) {
  OrderedJson doc;
  doc["resources"] = inst.resource_names();
  doc["interfaces"] = OrderedJson::array();
  for (int i = 0; i < inst.num_interfaces(); ++i) {
    OrderedJson entry;
    entry["name"] = inst.interface_names()[static_cast<std::size_t>(i)];
    entry["capacity"] = inst.capacity_matrix()[static_cast<std::size_t>(i)];
    entry["unit_cost"] = inst.unit_cost_matrix()[static_cast<std::size_t>(i)];
    entry["activation_cost"] = inst.activation_cost(i);
    doc["interfaces"].push_back(std::move(entry));
  }
  doc["services"] = OrderedJson::array();
  for (int j = 0; j < inst.num_services(); ++j) {
    OrderedJson entry;
    entry["name"] = inst.service_names()[static_cast<std::size_t>(j)];
    entry["demand"] = inst.demand_matrix()[static_cast<std::size_t>(j)];
    doc["services"].push_back(std::move(entry));
  }
  if (inst.has_overhead()) {
    OrderedJson a = OrderedJson::array();
    for (int i = 0; i < inst.num_interfaces(); ++i) {
      OrderedJson per_interface = OrderedJson::array();
      for (int j = 0; j < inst.num_services(); ++j) {
        OrderedJson per_service = OrderedJson::array();
        for (int k = 0; k < inst.num_resources(); ++k) per_service.push_back(to_string(inst.overhead(i, j, k)));
        per_interface.push_back(std::move(per_service));
      }
      a.push_back(std::move(per_interface));
    }
    doc["overhead"] = std::move(a);
  }
  return doc;
}

Allocation allocation_from_json(const json& doc, const Instance& inst) {
  const auto& x = array_at(field(doc, "", "x"), "/x");
  if (x.size() != static_cast<std::size_t>(inst.num_interfaces())) {
    throw JsonSchemaError("/x", "expected " + std::to_string(inst.num_interfaces()) + " interfaces");
  }
  Allocation alloc = Allocation::zeros_like(inst);
  for (int i = 0; i < inst.num_interfaces(); ++i) {
    const auto pi = child("/x", static_cast<std::size_t>(i));
    const auto& xi = array_at(x[static_cast<std::size_t>(i)], pi);
    if (xi.size() != static_cast<std::size_t>(inst.num_services())) {
      throw JsonSchemaError(pi, "expected " + std::to_string(inst.num_services()) + " services");
    }
    for (int j = 0; j < inst.num_services(); ++j) {
      const auto pj = child(pi, static_cast<std::size_t>(j));
      const auto& xij = array_at(xi[static_cast<std::size_t>(j)], pj);
      if (xij.size() != static_cast<std::size_t>(inst.num_resources())) {
        throw JsonSchemaError(pj, "expected " + std::to_string(inst.num_resources()) + " resources");
      }
      for (int k = 0; k < inst.num_resources(); ++k) {
        alloc(i, j, k) = integer(xij[static_cast<std::size_t>(k)], child(pj, static_cast<std::size_t>(k)));
      }
    }
  }
  return alloc;
}

OrderedJson allocation_tensor_json(const Allocation& alloc) {
  OrderedJson x = OrderedJson::array();
  for (int i = 0; i < alloc.num_interfaces(); ++i) {
    OrderedJson per_interface = OrderedJson::array();
    for (int j = 0; j < alloc.num_services(); ++j) {
      OrderedJson per_service = OrderedJson::array();
      for (int k = 0; k < alloc.num_resources(); ++k) per_service.push_back(alloc(i, j, k));
      per_interface.push_back(std::move(per_service));
    }
    x.push_back(std::move(per_interface));
  }
  return x;
}

OrderedJson cost_to_json(const CostBreakdown& cost) {
  OrderedJson c;
  c["utilization"] = cost.utilization;
  c["activation"] = cost.activation;
  c["total"] = cost.total;
  return c;
}

OrderedJson allocation_to_json(const Allocation& alloc, const CostBreakdown& cost) {
  OrderedJson doc;
  doc["x"] = allocation_tensor_json(alloc);
  doc["cost"] = cost_to_json(cost);
  return doc;
}

OrderedJson report_to_json(const ValidationReport& report) {
  OrderedJson doc;
  doc["ok"] = report.ok();
  doc["rounds"] = report.rounds;

  OrderedJson demand;
  demand["ok"] = report.demand_ok();
  if (report.demand) {
    demand["service"] = report.demand->service + 1;
    demand["resource"] = report.demand->resource + 1;
    demand["served"] = report.demand->served;
    demand["demanded"] = report.demand->demanded;
  }
  doc["demand"] = std::move(demand);

  OrderedJson capacity;
  capacity["ok"] = report.capacity_ok();
  if (report.capacity) {
    capacity["interface"] = report.capacity->interface + 1;
    capacity["resource"] = report.capacity->resource + 1;
    capacity["consumed"] = to_string(report.capacity->consumed);
    capacity["limit"] = report.capacity->limit;
  }
  doc["capacity"] = std::move(capacity);

  OrderedJson negative;
  negative["ok"] = report.nonnegativity_ok();
  if (report.negative) {
    negative["interface"] = report.negative->interface + 1;
    negative["service"] = report.negative->service + 1;
    negative["resource"] = report.negative->resource + 1;
    negative["value"] = report.negative->value;
  }
  doc["nonnegativity"] = std::move(negative);
  doc["message"] = describe(report);
  return doc;
}

OrderedJson bounds_to_json(const RoundBounds& bounds, const Instance& inst) {
  OrderedJson doc;
  doc["r_min"] = bounds.r_min;
  doc["r_max"] = bounds.r_max;
  OrderedJson per_resource = OrderedJson::array();
  for (std::size_t k = 0; k < bounds.cheapest_interface.size(); ++k) {
    OrderedJson entry;
    entry["resource"] = inst.resource_names()[k];
    entry["total_demand"] = bounds.total_demand[k];
    entry["total_capacity"] = bounds.total_capacity[k];
    entry["cheapest_interface"] = bounds.cheapest_interface[k] + 1;
    entry["cheapest_interface_name"] =
        inst.interface_names()[static_cast<std::size_t>(bounds.cheapest_interface[k])];
    per_resource.push_back(std::move(entry));
  }
  doc["resources"] = std::move(per_resource);
  return doc;
}

ScenarioConfig scenario_from_json(const json& doc) {
  ScenarioConfig config;
  if (!doc.is_object()) throw JsonSchemaError("/", "expected an object");
  config.name = optional_string(doc, "name", config.name);
  config.note = optional_string(doc, "note", "");

  const auto& resources_json = array_at(field(doc, "", "resources"), "/resources");
  for (std::size_t k = 0; k < resources_json.size(); ++k) {
    if (!resources_json[k].is_string()) throw JsonSchemaError(child("/resources", k), "expected a string");
    config.resources.push_back(resources_json[k].get<std::string>());
  }
  const std::size_t K = config.resources.size();

  const auto& interfaces_json = array_at(field(doc, "", "interfaces"), "/interfaces");
  for (std::size_t i = 0; i < interfaces_json.size(); ++i) {
    const auto p = child("/interfaces", i);
    const auto& obj = interfaces_json[i];
    InterfaceSpec spec;
    if (obj.is_object() && obj.contains("name") && obj["name"].is_string()) spec.name = obj["name"].get<std::string>();
    spec.capacity = nonnegative_vector(field(obj, p, "capacity"), child(p, "capacity"), K);
    spec.unit_cost = nonnegative_vector(field(obj, p, "unit_cost"), child(p, "unit_cost"), K);
    if (obj.contains("activation_cost")) {
      spec.activation_cost = nonnegative(obj["activation_cost"], child(p, "activation_cost"));
    }
    config.interfaces.push_back(std::move(spec));
  }

  const auto profile = optional_string(doc, "activation_profile", "custom");
  if (profile == "custom") {
    if (doc.contains("activation_cost")) {
      const auto costs =
          nonnegative_vector(doc["activation_cost"], "/activation_cost", config.interfaces.size());
      for (std::size_t i = 0; i < costs.size(); ++i) config.interfaces[i].activation_cost = costs[i];
    }
  } else {
    try {
      apply_activation_profile(config, profile);
    } catch (const std::invalid_argument& e) {
      throw JsonSchemaError("/activation_profile", e.what());
    }
  }

  const auto& classes = array_at(field(doc, "", "demand_classes"), "/demand_classes");
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const auto p = child("/demand_classes", c);
    DemandClass dc;
    if (classes[c].is_object() && classes[c].contains("name") && classes[c]["name"].is_string()) {
      dc.name = classes[c]["name"].get<std::string>();
    } else {
      dc.name = "class" + std::to_string(c + 1);
    }
    dc.demand = nonnegative_vector(field(classes[c], p, "demand"), child(p, "demand"), K);
    if (classes[c].contains("weight")) {
      if (!classes[c]["weight"].is_number()) throw JsonSchemaError(child(p, "weight"), "expected a number");
      dc.weight = classes[c]["weight"].get<double>();
    }
    config.demand_classes.push_back(std::move(dc));
  }

  const auto& services = field(doc, "", "services");
  config.min_services = static_cast<int>(nonnegative(field(services, "/services", "min"), "/services/min"));
  config.max_services = static_cast<int>(nonnegative(field(services, "/services", "max"), "/services/max"));
  if (doc.contains("runs")) config.runs = static_cast<int>(nonnegative(doc["runs"], "/runs"));
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !(doc["seed"].is_number_integer() && doc["seed"].get<std::int64_t>() >= 0)) {
      throw JsonSchemaError("/seed", "expected a nonnegative integer");
    }
    config.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("node_budget")) {
    config.node_budget = static_cast<std::uint64_t>(nonnegative(doc["node_budget"], "/node_budget"));
  }
  if (doc.contains("solvers")) {
    const auto& solvers = array_at(doc["solvers"], "/solvers");
    config.solvers.clear();
    for (std::size_t s = 0; s < solvers.size(); ++s) {
      const auto kind = solvers[s].is_string() ? parse_solver_kind(solvers[s].get<std::string>()) : std::nullopt;
      if (!kind) throw JsonSchemaError(child("/solvers", s), "expected one of exact, rand, avg");
      config.solvers.push_back(*kind);
    }
  }

  wrap_domain_errors([&] {
    config.check();
    return 0;
  });
  return config;
}

namespace {

OrderedJson summary_json(const Summary& s) {
  OrderedJson doc;
  doc["count"] = s.count;
  doc["min"] = s.min;
  doc["q1"] = s.q1;
  doc["median"] = s.median;
  doc["mean"] = s.mean;
  doc["q3"] = s.q3;
  doc["p95"] = s.p95;
  doc["max"] = s.max;
  return doc;
}

}  // namespace

OrderedJson summary_to_json(const RunStats& stats) {
  OrderedJson doc;
  doc["scenario"] = stats.scenario;
  doc["seed"] = stats.seed;
  doc["runs"] = stats.runs;
  doc["redraws"] = stats.redraws;
  OrderedJson groups = OrderedJson::array();
  for (const auto& g : stats.groups) {
    OrderedJson entry;
    entry["j"] = g.services;
    entry["solver"] = std::string(to_string(g.solver));
    entry["runs"] = g.runs;
    entry["failures"] = g.failures;
    entry["total"] = g.total ? summary_json(*g.total) : OrderedJson();
    entry["mean_splits_per_service"] = g.mean_splits ? OrderedJson(*g.mean_splits) : OrderedJson();
    entry["gap"] = g.gap ? summary_json(*g.gap) : OrderedJson();
    entry["ratio_to_exact"] = g.ratio ? summary_json(*g.ratio) : OrderedJson();
    groups.push_back(std::move(entry));
  }
  doc["groups"] = std::move(groups);
  OrderedJson failures = OrderedJson::array();
  for (const auto& r : stats.records) {
    if (r.error.empty()) continue;
    OrderedJson entry;
    entry["j"] = r.services;
    entry["solver"] = std::string(to_string(r.solver));
    entry["run"] = r.run;
    entry["error"] = r.error;
    failures.push_back(std::move(entry));
  }
  doc["failures"] = std::move(failures);
  return doc;
}

namespace {

void format_into(std::string& out, const OrderedJson& value, int depth) {
  const std::string pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
  const std::string close_pad(static_cast<std::size_t>(depth) * 2, ' ');
  if (value.is_object()) {
    if (value.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, item] : value.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + OrderedJson(key).dump() + ": ";
      format_into(out, item, depth + 1);
    }
    out += "\n" + close_pad + "}";
    return;
  }
  if (value.is_array()) {
    const bool flat = std::none_of(value.begin(), value.end(), [](const auto& v) { return v.is_structured(); });
    if (flat) {
      out += "[";
      for (std::size_t n = 0; n < value.size(); ++n) {
        if (n > 0) out += ", ";
        out += value[n].dump();
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t n = 0; n < value.size(); ++n) {
      if (n > 0) out += ",\n";
      out += pad;
      format_into(out, value[n], depth + 1);
    }
    out += "\n" + close_pad + "]";
    return;
  }
  out += value.dump();
}

}  // namespace

std::string format_json(const OrderedJson& doc) {
  std::string out;
  format_into(out, doc, 0);
  out += "\n";
  return out;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw JsonSchemaError("", "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw JsonSchemaError("", path + ": " + e.what());
  }
}

}  // namespace sia
