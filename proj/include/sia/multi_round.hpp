#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "sia/model.hpp"

namespace sia {

/// Round counts between "fewest rounds that are feasible" and "enough rounds
/// that each resource can be served entirely by its cheapest interface".
struct RoundBounds {
  std::int64_t r_min = 1;
  std::int64_t r_max = 1;
  /// i'_k = argmin_i (c[i][k] * D_k + F[i]) over interfaces offering k.
  std::vector<int> cheapest_interface;
  std::vector<std::int64_t> total_demand;    // D_k
  std::vector<std::int64_t> total_capacity;  // B_k
};

/// Throws InfeasibleError if some resource is demanded but offered nowhere.
RoundBounds compute_bounds(const Instance& inst);

enum class SolverKind { Exact, RandomShares, AverageCost };

/// "exact", "rand", "avg".
std::string_view to_string(SolverKind kind);
std::optional<SolverKind> parse_solver_kind(std::string_view name);

struct SolveResult {
  Allocation allocation;
  CostBreakdown cost;
  std::int64_t rounds = 1;
  SolverKind solver = SolverKind::Exact;
  std::uint64_t seed = 0;
  bool proven_optimal = false;  // only the exact solver proves optimality
};

/// Solves with capacity R * b[i][k]. Activation is charged once per
/// (interface, service) over the whole horizon. Throws InfeasibleError
/// naming the binding resource when R < r_min.
SolveResult solve_multi_round(const Instance& inst, std::int64_t rounds, SolverKind solver, std::uint64_t seed = 0,
                              std::optional<std::uint64_t> node_budget = std::nullopt);

/// Per-round allocations; they sum to the flat allocation.
using RoundSchedule = std::vector<Allocation>;

/// Water-fills each (interface, resource) column round by round, splitting a
/// service's units at round boundaries. Throws std::invalid_argument if the
/// allocation does not pass validate() for `rounds`, and InfeasibleError if
/// integer units cannot be packed because fractional overhead wastes part of
/// a round.
RoundSchedule decompose_rounds(const Instance& inst, const Allocation& alloc, std::int64_t rounds);

struct SweepPoint {
  std::int64_t rounds;
  CostBreakdown cost;
  SolverKind solver;
  std::uint64_t seed;
};

std::vector<SweepPoint> sweep_rounds(const Instance& inst, SolverKind solver, std::int64_t r_from, std::int64_t r_to,
                                     std::uint64_t seed = 0);

/// Header "R,total,utilization,activation,solver,seed".
void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points);

}  // namespace sia
