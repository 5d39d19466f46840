#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sia/model.hpp"
#include "sia/multi_round.hpp"

namespace sia {

struct DemandClass {
  std::string name;
  std::vector<std::int64_t> demand;
  double weight = 1.0;
};

/// Description of a Monte-Carlo study: fixed interfaces, a table of demand
/// classes that services are drawn from, and the service counts to sweep.
struct ScenarioConfig {
  std::string name = "scenario";
  std::string note;
  std::vector<std::string> resources;
  /// Activation costs are already resolved from the profile.
  std::vector<InterfaceSpec> interfaces;
  std::string activation_profile = "custom";
  std::vector<DemandClass> demand_classes;
  int min_services = 1;
  int max_services = 1;
  int runs = 1;
  std::uint64_t seed = 0;
  std::vector<SolverKind> solvers{SolverKind::Exact, SolverKind::RandomShares, SolverKind::AverageCost};
  std::optional<std::uint64_t> node_budget;
  /// Redraws allowed per run before the run is recorded as failed.
  int max_redraws = 1000;

  /// Throws std::invalid_argument describing the first problem found.
  void check() const;
};

/// Named activation-cost vectors for three interfaces: RSH, RSM, RSL, HDL,
/// LDL. nullopt for unknown names.
std::optional<std::vector<std::int64_t>> activation_profile(std::string_view name);

/// Sets every interface's activation cost from a named profile. Throws
/// std::invalid_argument for unknown names or a size mismatch.
void apply_activation_profile(ScenarioConfig& config, std::string_view name);

/// Draws `services` demand vectors i.i.d. from the class table (one uniform
/// draw per service, so smaller counts are prefixes of larger ones for the
/// same seed).
Instance generate_instance(const ScenarioConfig& config, int services, std::uint64_t seed);

/// Engaged (interface, service) pairs per service that receives anything.
/// 1.0 means no service was split. Throws std::invalid_argument when no
/// service receives any units.
double splits_per_service(const Allocation& alloc);

/// Order statistics with linear interpolation between closest ranks.
struct Summary {
  std::size_t count = 0;
  double min = 0, q1 = 0, median = 0, mean = 0, q3 = 0, p95 = 0, max = 0;
};

Summary summarize(std::vector<double> values);

struct RunRecord {
  int services;
  SolverKind solver;
  int run;
  std::uint64_t seed;  // drives both instance sampling and the random heuristic
  std::optional<CostBreakdown> cost;
  std::optional<double> splits;
  std::optional<std::int64_t> gap;  // heuristic total minus exact total
  std::string error;
};

struct GroupStats {
  int services;
  SolverKind solver;
  std::size_t runs = 0;
  std::size_t failures = 0;
  std::optional<Summary> total;
  std::optional<double> mean_splits;
  std::optional<Summary> gap;
  std::optional<Summary> ratio;  // heuristic total / exact total
};

struct RunStats {
  std::string scenario;
  std::uint64_t seed = 0;
  int runs = 0;
  std::int64_t redraws = 0;  // infeasible draws that were rejected
  std::vector<RunRecord> records;
  std::vector<GroupStats> groups;
};

/// Runs every requested solver on `config.runs` sampled instances for each
/// service count in [min_services, max_services]. Solver failures are
/// recorded, not thrown.
RunStats run_monte_carlo(const ScenarioConfig& config, std::span<const SolverKind> solvers, int min_services,
                         int max_services);
RunStats run_monte_carlo(const ScenarioConfig& config);

/// Header "scenario,j,solver,run,seed,total,utilization,activation,splits_per_service,gap".
void write_runs_csv(std::ostream& out, const RunStats& stats);

/// Shortest round-trip decimal form of a double.
std::string format_number(double value);

}  // namespace sia
