#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace sia::detail {

/// Successive shortest paths with Bellman-Ford (queue based) on small
/// graphs. Capacities and costs are integers, so the optimal flow is
/// integral.
class MinCostFlow {
 public:
  explicit MinCostFlow(int num_nodes) : adjacency_(static_cast<std::size_t>(num_nodes)) {}

  /// Returns the edge id, usable with flow().
  int add_edge(int from, int to, std::int64_t capacity, std::int64_t cost);

  /// Pushes `required` units from source to sink at minimum cost. Returns
  /// nullopt when the network cannot carry that much.
  std::optional<std::int64_t> solve(int source, int sink, std::int64_t required);

  std::int64_t flow(int edge_id) const;

 private:
  struct Edge {
    int to;
    std::int64_t capacity;
    std::int64_t cost;
    std::int64_t flow;
  };

  std::vector<Edge> edges_;  // forward edge at 2e, residual twin at 2e+1
  std::vector<std::vector<int>> adjacency_;
};

/// Min-cost routing of per-service demands to interfaces for one resource.
/// units[i * num_services + j] holds the resulting integer amounts.
struct TransportSolution {
  std::int64_t cost = 0;
  std::vector<std::int64_t> units;
};

/// demand[j], capacity[i], unit_cost[i]; allowed[i * J + j] permits sending
/// service j's units to interface i.
std::optional<TransportSolution> solve_transport(const std::vector<std::int64_t>& demand,
                                                 const std::vector<std::int64_t>& capacity,
                                                 const std::vector<std::int64_t>& unit_cost,
                                                 const std::vector<bool>& allowed);

/// Same problem when each unit of service j consumes weight[i * J + j]
/// capacity units on interface i (integer-scaled overhead). Solved exactly
/// by dynamic programming over per-interface consumption vectors, so it is
/// only meant for desk-scale inputs.
std::optional<TransportSolution> solve_weighted_transport(const std::vector<std::int64_t>& demand,
                                                          const std::vector<std::int64_t>& capacity,
                                                          const std::vector<std::int64_t>& unit_cost,
                                                          const std::vector<bool>& allowed,
                                                          const std::vector<std::int64_t>& weight);

}  // namespace sia::detail
