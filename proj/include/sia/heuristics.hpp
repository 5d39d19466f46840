#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sia/model.hpp"

namespace sia {

/// d'[j][k] = d[j][k] / max_j d[j][k]; zero where the column maximum is zero.
using NormalizedDemands = std::vector<std::vector<Rational>>;

struct DemandEntry {
  int service;
  int resource;
  Rational key;

  bool operator==(const DemandEntry&) const = default;
};

/// Serving order over every (service, resource) with positive demand, keys
/// non-increasing.
using DemandOrder = std::vector<DemandEntry>;

/// Elementary-step counters, grouped by phase, used to check the running
/// time bound O(IKJ + KJ log KJ) empirically.
struct StepCounts {
  std::uint64_t normalization = 0;  // share computation
  std::uint64_t ordering = 0;       // key computation, sorting, tie shuffles
  std::uint64_t allocation = 0;     // the serving loop
  std::uint64_t activation = 0;     // activation bookkeeping and final sum

  std::uint64_t total() const noexcept { return normalization + ordering + allocation + activation; }
  StepCounts& operator+=(const StepCounts& o) noexcept {
    normalization += o.normalization;
    ordering += o.ordering;
    allocation += o.allocation;
    activation += o.activation;
    return *this;
  }
};

struct HeuristicResult {
  Allocation allocation;
  CostBreakdown cost;
  DemandOrder order;
  std::optional<std::uint64_t> seed;  // set for the random-shares variant
  StepCounts steps;
};

NormalizedDemands normalize_demands(const IntMatrix& demand, StepCounts* steps = nullptr);

/// Descending shares; each maximal run of equal shares is put in a uniformly
/// random order drawn from Rng(seed).
DemandOrder order_random_equal_shares(const NormalizedDemands& shares, std::uint64_t seed,
                                      StepCounts* steps = nullptr);

/// Keys d'[j][k] * (sum_i c[i][k] b[i][k]) / 100, descending; ties by lowest
/// (resource, service).
DemandOrder order_average_cost(const NormalizedDemands& shares, const Instance& inst, StepCounts* steps = nullptr);

/// Mutable bookkeeping for the serving loop: remaining capacity per
/// (interface, resource) and which (interface, service) pairs are engaged.
class AllocationState {
 public:
  AllocationState(const Instance& inst, std::int64_t rounds = 1);

  const Rational& remaining(int i, int k) const { return remaining_[index_ik(i, k)]; }
  bool engaged(int i, int j) const { return engaged_[index_ij(i, j)] != 0; }
  /// (1 + a[i][j][k]) * units <= remaining(i, k).
  bool fits(int i, int j, int k, std::int64_t units) const;
  /// Largest unit count that fits on interface i.
  std::int64_t room_for(int i, int j, int k) const;

  /// Deducts effective consumption and engages (i, j). Returns the
  /// utilization cost of the placed units.
  std::int64_t allocate(int i, int j, int k, std::int64_t units);

  const Allocation& allocation() const noexcept { return alloc_; }
  const Instance& instance() const noexcept { return *inst_; }

 private:
  std::size_t index_ik(int i, int k) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(inst_->num_resources()) + static_cast<std::size_t>(k);
  }
  std::size_t index_ij(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(inst_->num_services()) + static_cast<std::size_t>(j);
  }

  const Instance* inst_;
  std::vector<Rational> remaining_;
  std::vector<unsigned char> engaged_;
  Allocation alloc_;
};

/// Cheapest interface that can take the whole demand on its own. cost is
/// nullopt when no interface can.
struct NonSplitChoice {
  std::optional<std::int64_t> cost;
  int interface = -1;
};

/// Cheapest-first fill across interfaces. cost is nullopt when the total
/// remaining capacity cannot cover the demand.
struct SplitPlan {
  std::optional<std::int64_t> cost;
  std::vector<std::pair<int, std::int64_t>> parts;  // (interface, units)
};

/// Both include the activation cost of interfaces not yet engaged for the
/// service.
NonSplitChoice non_split_cost(const AllocationState& state, int service, int resource, std::int64_t units,
                              StepCounts* steps = nullptr);
SplitPlan split_cost(const AllocationState& state, int service, int resource, std::int64_t units,
                     StepCounts* steps = nullptr);

/// Serves `order` in sequence: cheapest interface by unit cost, then the
/// second cheapest, and otherwise the cheaper of the best single interface
/// and a cheapest-first split (ties go to the single interface). Capacity is
/// scaled by `rounds`. Throws CapacityExhaustedError if a demand cannot be
/// served at all.
HeuristicResult greedy_allocate(const Instance& inst, const DemandOrder& order, std::int64_t rounds = 1);

HeuristicResult run_random_heuristic(const Instance& inst, std::uint64_t seed, std::int64_t rounds = 1);
HeuristicResult run_average_cost_heuristic(const Instance& inst, std::int64_t rounds = 1);

}  // namespace sia
