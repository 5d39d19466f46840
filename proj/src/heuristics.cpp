#include "sia/heuristics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sia/random.hpp"

namespace sia {
namespace {

void count(StepCounts* steps, std::uint64_t StepCounts::*phase, std::uint64_t n) {
  if (steps) steps->*phase += n;
}

// Descending by key, then ascending (resource, service). Counts comparisons.
void sort_entries(DemandOrder& order, StepCounts* steps) {
  std::uint64_t comparisons = 0;
  std::sort(order.begin(), order.end(), [&](const DemandEntry& a, const DemandEntry& b) {
    ++comparisons;
    if (a.key != b.key) return a.key > b.key;
    if (a.resource != b.resource) return a.resource < b.resource;
    return a.service < b.service;
  });
  count(steps, &StepCounts::ordering, comparisons);
}

DemandOrder positive_entries(const NormalizedDemands& shares) {
  DemandOrder order;
  for (std::size_t j = 0; j < shares.size(); ++j) {
    for (std::size_t k = 0; k < shares[j].size(); ++k) {
      if (shares[j][k] > 0) order.push_back({static_cast<int>(j), static_cast<int>(k), shares[j][k]});
    }
  }
  return order;
}

}  // namespace

NormalizedDemands normalize_demands(const IntMatrix& demand, StepCounts* steps) {
  NormalizedDemands shares(demand.size());
  if (demand.empty()) return shares;
  const std::size_t K = demand.front().size();
  for (auto& row : shares) row.assign(K, Rational(0));
  for (std::size_t k = 0; k < K; ++k) {
    std::int64_t column_max = 0;
    for (const auto& row : demand) column_max = std::max(column_max, row[k]);
    if (column_max > 0) {
      for (std::size_t j = 0; j < demand.size(); ++j) shares[j][k] = Rational(demand[j][k], column_max);
    }
  }
  count(steps, &StepCounts::normalization, 2 * demand.size() * K);
  return shares;
}

DemandOrder order_random_equal_shares(const NormalizedDemands& shares, std::uint64_t seed, StepCounts* steps) {
  DemandOrder order = positive_entries(shares);
  sort_entries(order, steps);
  Rng rng(seed);
  for (auto group = order.begin(); group != order.end();) {
    auto end = std::find_if(group, order.end(), [&](const DemandEntry& e) { return e.key != group->key; });
    rng.shuffle(group, end);
    count(steps, &StepCounts::ordering, static_cast<std::uint64_t>(end - group));
    group = end;
  }
  return order;
}

DemandOrder order_average_cost(const NormalizedDemands& shares, const Instance& inst, StepCounts* steps) {
  const int K = inst.num_resources();
  std::vector<Rational> average(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    std::int64_t dot = 0;
    for (int i = 0; i < inst.num_interfaces(); ++i) dot += inst.unit_cost(i, k) * inst.capacity(i, k);
    average[static_cast<std::size_t>(k)] = Rational(dot, 100);
  }
  count(steps, &StepCounts::ordering, static_cast<std::uint64_t>(K) * static_cast<std::uint64_t>(inst.num_interfaces()));

  DemandOrder order = positive_entries(shares);
  for (auto& e : order) e.key *= average[static_cast<std::size_t>(e.resource)];
  count(steps, &StepCounts::ordering, shares.size() * static_cast<std::size_t>(K));
  sort_entries(order, steps);
  return order;
}

AllocationState::AllocationState(const Instance& inst, std::int64_t rounds)
    : inst_(&inst),
      engaged_(static_cast<std::size_t>(inst.num_interfaces()) * static_cast<std::size_t>(inst.num_services()), 0),
      alloc_(Allocation::zeros_like(inst)) {
  if (rounds < 1) throw std::invalid_argument("rounds must be positive");
  remaining_.reserve(static_cast<std::size_t>(inst.num_interfaces()) * static_cast<std::size_t>(inst.num_resources()));
  for (int i = 0; i < inst.num_interfaces(); ++i) {
    for (int k = 0; k < inst.num_resources(); ++k) remaining_.emplace_back(rounds * inst.capacity(i, k));
  }
}

bool AllocationState::fits(int i, int j, int k, std::int64_t units) const {
  return inst_->consumption_factor(i, j, k) * units <= remaining(i, k);
}

std::int64_t AllocationState::room_for(int i, int j, int k) const {
  return units_that_fit(remaining(i, k), inst_->consumption_factor(i, j, k));
}

std::int64_t AllocationState::allocate(int i, int j, int k, std::int64_t units) {
  remaining_[index_ik(i, k)] -= inst_->consumption_factor(i, j, k) * units;
  if (units > 0) engaged_[index_ij(i, j)] = 1;
  alloc_(i, j, k) += units;
  return inst_->unit_cost(i, k) * units;
}

NonSplitChoice non_split_cost(const AllocationState& state, int service, int resource, std::int64_t units,
                              StepCounts* steps) {
  const auto& inst = state.instance();
  NonSplitChoice best;
  for (int i = 0; i < inst.num_interfaces(); ++i) {
    if (!state.fits(i, service, resource, units)) continue;
    std::int64_t cost = inst.unit_cost(i, resource) * units;
    if (!state.engaged(i, service)) cost += inst.activation_cost(i);
    if (!best.cost || cost < *best.cost) best = {cost, i};
  }
  count(steps, &StepCounts::allocation, static_cast<std::uint64_t>(inst.num_interfaces()));
  return best;
}

SplitPlan split_cost(const AllocationState& state, int service, int resource, std::int64_t units,
                     StepCounts* steps) {
  const auto& inst = state.instance();
  std::vector<int> by_cost(static_cast<std::size_t>(inst.num_interfaces()));
  std::iota(by_cost.begin(), by_cost.end(), 0);
  std::uint64_t comparisons = 0;
  std::stable_sort(by_cost.begin(), by_cost.end(), [&](int a, int b) {
    ++comparisons;
    return inst.unit_cost(a, resource) < inst.unit_cost(b, resource);
  });

  SplitPlan plan;
  std::int64_t left = units;
  std::int64_t cost = 0;
  for (int i : by_cost) {
    if (left == 0) break;
    ++comparisons;
    const auto take = std::min(left, state.room_for(i, service, resource));
    if (take <= 0) continue;
    cost += inst.unit_cost(i, resource) * take;
    if (!state.engaged(i, service)) cost += inst.activation_cost(i);
    plan.parts.emplace_back(i, take);
    left -= take;
  }
  count(steps, &StepCounts::allocation, comparisons);
  if (left == 0) plan.cost = cost;
  return plan;
}

HeuristicResult greedy_allocate(const Instance& inst, const DemandOrder& order, std::int64_t rounds) {
  HeuristicResult result;
  result.order = order;
  AllocationState state(inst, rounds);
  const int I = inst.num_interfaces();
  const auto pairs = static_cast<std::uint64_t>(I) * static_cast<std::uint64_t>(inst.num_services());
  result.steps.activation += pairs;  // A = 0

  std::int64_t utilization = 0;
  for (const auto& entry : order) {
    const int j = entry.service;
    const int k = entry.resource;
    const auto d = inst.demand(j, k);
    if (d == 0) continue;

    int cheapest = 0;
    for (int i = 1; i < I; ++i) {
      if (inst.unit_cost(i, k) < inst.unit_cost(cheapest, k)) cheapest = i;
    }
    int second = -1;
    for (int i = 0; i < I; ++i) {
      if (i == cheapest) continue;
      if (second < 0 || inst.unit_cost(i, k) < inst.unit_cost(second, k)) second = i;
    }
    result.steps.allocation += 2 * static_cast<std::uint64_t>(I) + 1;

    if (state.fits(cheapest, j, k, d)) {
      utilization += state.allocate(cheapest, j, k, d);
      continue;
    }
    if (second >= 0 && state.fits(second, j, k, d)) {
      utilization += state.allocate(second, j, k, d);
      continue;
    }

    const auto whole = non_split_cost(state, j, k, d, &result.steps);
    const auto split = split_cost(state, j, k, d, &result.steps);
    result.steps.allocation += 1;
    if (!whole.cost && !split.cost) {
      throw CapacityExhaustedError("capacity exhausted serving service " + std::to_string(j + 1) + ", resource " +
                                       std::to_string(k + 1) + "; more rounds are needed",
                                   j, k);
    }
    if (whole.cost && (!split.cost || *whole.cost <= *split.cost)) {
      utilization += state.allocate(whole.interface, j, k, d);
    } else {
      for (const auto& [i, units] : split.parts) utilization += state.allocate(i, j, k, units);
    }
  }

  std::int64_t activation = 0;
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < inst.num_services(); ++j) {
      if (state.engaged(i, j)) activation += inst.activation_cost(i);
    }
  }
  result.steps.activation += pairs;

  result.allocation = state.allocation();
  result.cost = CostBreakdown{utilization, activation, utilization + activation};
  return result;
}

HeuristicResult run_random_heuristic(const Instance& inst, std::uint64_t seed, std::int64_t rounds) {
  StepCounts steps;
  const auto shares = normalize_demands(inst.demand_matrix(), &steps);
  const auto order = order_random_equal_shares(shares, seed, &steps);
  auto result = greedy_allocate(inst, order, rounds);
  result.steps += steps;
  result.seed = seed;
  return result;
}

HeuristicResult run_average_cost_heuristic(const Instance& inst, std::int64_t rounds) {
  StepCounts steps;
  const auto shares = normalize_demands(inst.demand_matrix(), &steps);
  const auto order = order_average_cost(shares, inst, &steps);
  auto result = greedy_allocate(inst, order, rounds);
  result.steps += steps;
  return result;
}

}  // namespace sia
