#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "sia/model.hpp"

namespace sia {

struct ExactResult {
  Allocation allocation;
  CostBreakdown cost;
  std::uint64_t node_count = 0;
  /// False only when the node budget stopped the search early.
  bool proven_optimal = true;
};

/// Optimal allocation with capacities scaled by `rounds`.
///
/// Branches, service by service, over the set of interfaces each service may
/// use. For a fixed set of usable (interface, service) pairs the remaining
/// problem splits per resource into a transportation problem, solved with
/// min-cost flow (or, for resources carrying overhead, an exact dynamic
/// program over integer consumptions). Nodes are pruned with the incumbent
/// against the transport cost plus the activation cost already committed.
///
/// Throws InfeasibleError when no allocation exists, and
/// BudgetExhaustedError when `node_budget` runs out before any feasible
/// allocation is found. When the budget runs out after that, the incumbent is
/// returned with proven_optimal = false.
ExactResult solve_exact(const Instance& inst, std::int64_t rounds = 1,
                        std::optional<std::uint64_t> node_budget = std::nullopt);

inline constexpr double kDefaultOracleSpaceLimit = 1e9;

/// Exhaustive enumeration of every integer split of every demand. Used as an
/// independent check on solve_exact. Throws SearchSpaceTooLargeError when
/// the product of per-demand composition counts exceeds `space_limit`.
ExactResult brute_force_oracle(const Instance& inst, std::int64_t rounds = 1,
                               double space_limit = kDefaultOracleSpaceLimit);

/// Number of integer allocations brute_force_oracle would consider before
/// capacity pruning: the product over demanded (j, k) of C(d + I - 1, I - 1).
double oracle_search_space(const Instance& inst);

/// Reduction gadget from the partition problem: one resource, two
/// interfaces with capacities ceil(S/2) and floor(S/2), one service per
/// value, zero utilization cost and unit activation cost. The optimum equals
/// the number of values exactly when an equal-sum bipartition exists.
Instance build_partition_instance(std::span<const std::int64_t> values);

}  // namespace sia
