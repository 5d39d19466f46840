#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "sia/exact.hpp"
#include "sia/experiments.hpp"
#include "sia/model.hpp"
#include "sia/multi_round.hpp"

namespace sia {

using OrderedJson = nlohmann::ordered_json;

/// Input that does not match the expected schema. pointer() is a JSON
/// pointer to the offending value, e.g. "/interfaces/1/capacity/2".
class JsonSchemaError : public std::runtime_error {
 public:
  JsonSchemaError(std::string pointer, const std::string& message)
      : std::runtime_error(pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

/// Schema:
///   { "resources": [names],
///     "interfaces": [{"name", "capacity": [K], "unit_cost": [K], "activation_cost"}],
///     "services": [{"name", "demand": [K]}],
///     "overhead": I x J x K of numbers or "p/q" strings (optional) }
Instance instance_from_json(const nlohmann::json& doc);
OrderedJson instance_to_json(const Instance& inst);

/// Reads "x" (I x J x K integers) and checks it against the instance shape.
Allocation allocation_from_json(const nlohmann::json& doc, const Instance& inst);
/// {"x": ..., "cost": {"utilization", "activation", "total"}}.
OrderedJson allocation_to_json(const Allocation& alloc, const CostBreakdown& cost);
OrderedJson allocation_tensor_json(const Allocation& alloc);
OrderedJson cost_to_json(const CostBreakdown& cost);

/// Indices in reports are one-based.
OrderedJson report_to_json(const ValidationReport& report);
OrderedJson bounds_to_json(const RoundBounds& bounds, const Instance& inst);

ScenarioConfig scenario_from_json(const nlohmann::json& doc);
OrderedJson summary_to_json(const RunStats& stats);

/// Two-space indented JSON with arrays of scalars kept on one line, plus a
/// trailing newline. Key order is insertion order.
std::string format_json(const OrderedJson& doc);

/// Parses a file; throws JsonSchemaError (pointer "") for unreadable or
/// syntactically malformed files.
nlohmann::json read_json_file(const std::string& path);

}  // namespace sia
