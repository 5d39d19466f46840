#include "sia/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "detail/min_cost_flow.hpp"
#include "detail/scaled_consumption.hpp"

namespace sia {
namespace {

constexpr int kMaxExactInterfaces = 20;

class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, std::int64_t rounds, std::optional<std::uint64_t> budget)
      : inst_(inst),
        rounds_(rounds),
        budget_(budget),
        scaled_(detail::scale_consumption(inst)),
        I_(inst.num_interfaces()),
        J_(inst.num_services()),
        K_(inst.num_resources()),
        full_mask_((1u << I_) - 1u),
        chosen_(static_cast<std::size_t>(J_), 0u) {
    order_services();
    build_candidates();
    // Cheapest activation any remaining service can get away with.
    remaining_activation_.assign(candidates_.size() + 1, 0);
    for (std::size_t d = candidates_.size(); d-- > 0;) {
      std::int64_t cheapest = std::numeric_limits<std::int64_t>::max();
      for (auto mask : candidates_[d]) cheapest = std::min(cheapest, mask_activation(mask));
      if (candidates_[d].empty()) cheapest = 0;
      remaining_activation_[d] = remaining_activation_[d + 1] + cheapest;
    }
    for (int j : order_) chosen_[static_cast<std::size_t>(j)] = full_mask_;
  }

  ExactResult run() {
    for (const auto& options : candidates_) {
      if (options.empty()) {
        throw InfeasibleError("infeasible: a service cannot be covered by any set of interfaces");
      }
    }
    search(0, 0);
    if (!best_) {
      if (budget_hit_) throw BudgetExhaustedError("node budget exhausted before a feasible allocation was found");
      throw InfeasibleError("infeasible: no allocation satisfies the capacity constraints");
    }
    return ExactResult{best_allocation_, *best_, nodes_, !budget_hit_};
  }

 private:
  std::int64_t mask_activation(std::uint32_t mask) const {
    std::int64_t sum = 0;
    for (int i = 0; i < I_; ++i) {
      if (mask & (1u << i)) sum += inst_.activation_cost(i);
    }
    return sum;
  }

  std::int64_t units_that_fit(int i, int j, int k) const {
    return rounds_ * inst_.capacity(i, k) * scaled_.scale / scaled_.weight(i, j, k);
  }

  // Services by descending sum_k d[j][k] * mean_i c[i][k]; the mean's common
  // 1/I factor is dropped so the comparison stays in integers.
  void order_services() {
    std::vector<std::int64_t> weight(static_cast<std::size_t>(J_), 0);
    for (int j = 0; j < J_; ++j) {
      if (inst_.service_demand(j) == 0) continue;
      order_.push_back(j);
      for (int k = 0; k < K_; ++k) {
        std::int64_t cost_sum = 0;
        for (int i = 0; i < I_; ++i) cost_sum += inst_.unit_cost(i, k);
        weight[static_cast<std::size_t>(j)] += inst_.demand(j, k) * cost_sum;
      }
    }
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return weight[static_cast<std::size_t>(a)] > weight[static_cast<std::size_t>(b)];
    });
  }

  // Interface subsets each service may use, fewest interfaces first, then
  // lexicographically by ascending activation cost (lowest index on ties).
  void build_candidates() {
    std::vector<int> by_activation(static_cast<std::size_t>(I_));
    std::iota(by_activation.begin(), by_activation.end(), 0);
    std::stable_sort(by_activation.begin(), by_activation.end(),
                     [&](int a, int b) { return inst_.activation_cost(a) < inst_.activation_cost(b); });
    auto ranks = [&](std::uint32_t mask) {
      std::vector<int> r;
      for (int pos = 0; pos < I_; ++pos) {
        if (mask & (1u << by_activation[static_cast<std::size_t>(pos)])) r.push_back(pos);
      }
      return r;
    };

    for (int j : order_) {
      std::vector<std::uint32_t> options;
      for (std::uint32_t mask = 1; mask <= full_mask_; ++mask) {
        if (useful(mask, j)) options.push_back(mask);
      }
      std::stable_sort(options.begin(), options.end(), [&](std::uint32_t a, std::uint32_t b) {
        const int pa = std::popcount(a);
        const int pb = std::popcount(b);
        if (pa != pb) return pa < pb;
        return ranks(a) < ranks(b);
      });
      candidates_.push_back(std::move(options));
    }
  }

  // Every interface in the set can carry part of the service, and together
  // they can carry all of it.
  bool useful(std::uint32_t mask, int j) const {
    for (int i = 0; i < I_; ++i) {
      if (!(mask & (1u << i))) continue;
      bool carries = false;
      for (int k = 0; k < K_ && !carries; ++k) carries = inst_.demand(j, k) > 0 && units_that_fit(i, j, k) > 0;
      if (!carries) return false;
    }
    for (int k = 0; k < K_; ++k) {
      const auto d = inst_.demand(j, k);
      if (d == 0) continue;
      std::int64_t room = 0;
      for (int i = 0; i < I_; ++i) {
        if (mask & (1u << i)) room += units_that_fit(i, j, k);
      }
      if (room < d) return false;
    }
    return true;
  }

  std::vector<bool> allowed_pairs() const {
    std::vector<bool> allowed(static_cast<std::size_t>(I_) * static_cast<std::size_t>(J_), false);
    for (int i = 0; i < I_; ++i) {
      for (int j = 0; j < J_; ++j) {
        allowed[static_cast<std::size_t>(i) * static_cast<std::size_t>(J_) + static_cast<std::size_t>(j)] =
            (chosen_[static_cast<std::size_t>(j)] >> i) & 1u;
      }
    }
    return allowed;
  }

  void search(std::size_t depth, std::int64_t committed_activation) {
    if (budget_ && nodes_ >= *budget_) {
      budget_hit_ = true;
      return;
    }
    ++nodes_;

    const std::int64_t activation_bound = committed_activation + remaining_activation_[depth];
    if (best_ && activation_bound >= best_->total) return;

    // Transport relaxation per resource; overhead is dropped, which only
    // loosens capacity, so the sum is a valid lower bound.
    const auto allowed = allowed_pairs();
    std::vector<detail::TransportSolution> flows;
    std::int64_t bound = activation_bound;
    for (int k = 0; k < K_; ++k) {
      std::vector<std::int64_t> demand(static_cast<std::size_t>(J_));
      std::vector<std::int64_t> capacity(static_cast<std::size_t>(I_));
      std::vector<std::int64_t> cost(static_cast<std::size_t>(I_));
      for (int j = 0; j < J_; ++j) demand[static_cast<std::size_t>(j)] = inst_.demand(j, k);
      for (int i = 0; i < I_; ++i) {
        capacity[static_cast<std::size_t>(i)] = rounds_ * inst_.capacity(i, k);
        cost[static_cast<std::size_t>(i)] = inst_.unit_cost(i, k);
      }
      auto flow = detail::solve_transport(demand, capacity, cost, allowed);
      if (!flow) return;
      bound += flow->cost;
      if (best_ && bound >= best_->total) return;
      flows.push_back(std::move(*flow));
    }

    if (depth == order_.size()) {
      leaf(allowed, std::move(flows));
      return;
    }
    // Without overhead the relaxation's flows are themselves a feasible
    // allocation, which often makes a good incumbent early on.
    if (!inst_.has_overhead()) offer(assemble(flows));

    // Try first the interface set the relaxation already uses for j.
    const int j = order_[depth];
    std::uint32_t used = 0;
    for (int k = 0; k < K_; ++k) {
      for (int i = 0; i < I_; ++i) {
        if (flows[static_cast<std::size_t>(k)].units[pair_index(i, j)] > 0) used |= 1u << i;
      }
    }
    const auto& options = candidates_[depth];
    std::vector<std::uint32_t> ordered;
    ordered.reserve(options.size());
    if (std::find(options.begin(), options.end(), used) != options.end()) ordered.push_back(used);
    for (auto mask : options) {
      if (mask != used) ordered.push_back(mask);
    }

    for (std::uint32_t mask : ordered) {
      chosen_[static_cast<std::size_t>(j)] = mask;
      search(depth + 1, committed_activation + mask_activation(mask));
      if (budget_hit_) break;
    }
    chosen_[static_cast<std::size_t>(j)] = full_mask_;
  }

  void leaf(const std::vector<bool>& allowed, std::vector<detail::TransportSolution> flows) {
    for (int k = 0; k < K_; ++k) {
      if (inst_.has_overhead_on(k)) {
        std::vector<std::int64_t> demand(static_cast<std::size_t>(J_));
        std::vector<std::int64_t> capacity(static_cast<std::size_t>(I_));
        std::vector<std::int64_t> cost(static_cast<std::size_t>(I_));
        std::vector<std::int64_t> weight(static_cast<std::size_t>(I_) * static_cast<std::size_t>(J_));
        for (int j = 0; j < J_; ++j) demand[static_cast<std::size_t>(j)] = inst_.demand(j, k);
        for (int i = 0; i < I_; ++i) {
          capacity[static_cast<std::size_t>(i)] = rounds_ * inst_.capacity(i, k) * scaled_.scale;
          cost[static_cast<std::size_t>(i)] = inst_.unit_cost(i, k);
          for (int j = 0; j < J_; ++j) {
            weight[static_cast<std::size_t>(i) * static_cast<std::size_t>(J_) + static_cast<std::size_t>(j)] =
                scaled_.weight(i, j, k);
          }
        }
        auto exact = detail::solve_weighted_transport(demand, capacity, cost, allowed, weight);
        if (!exact) return;
        flows[static_cast<std::size_t>(k)] = std::move(*exact);
      }
    }
    offer(assemble(flows));
  }

  std::size_t pair_index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(J_) + static_cast<std::size_t>(j);
  }

  Allocation assemble(const std::vector<detail::TransportSolution>& flows) const {
    Allocation alloc = Allocation::zeros_like(inst_);
    for (int k = 0; k < K_; ++k) {
      const auto& units = flows[static_cast<std::size_t>(k)].units;
      for (int i = 0; i < I_; ++i) {
        for (int j = 0; j < J_; ++j) alloc(i, j, k) = units[pair_index(i, j)];
      }
    }
    return alloc;
  }

  void offer(Allocation alloc) {
    const auto cost = total_cost(inst_, alloc);
    if (!best_ || cost.total < best_->total) {
      best_ = cost;
      best_allocation_ = std::move(alloc);
    }
  }

  const Instance& inst_;
  std::int64_t rounds_;
  std::optional<std::uint64_t> budget_;
  detail::ScaledConsumption scaled_;
  int I_, J_, K_;
  std::uint32_t full_mask_;
  std::vector<std::int64_t> remaining_activation_;      // per branching depth
  std::vector<int> order_;                             // active services in branching order
  std::vector<std::vector<std::uint32_t>> candidates_;  // per branching depth
  std::vector<std::uint32_t> chosen_;                   // per service; full mask while unassigned

  std::optional<CostBreakdown> best_;
  Allocation best_allocation_;
  std::uint64_t nodes_ = 0;
  bool budget_hit_ = false;
};

double binomial(std::int64_t n, std::int64_t r) {
  double value = 1.0;
  for (std::int64_t t = 1; t <= r; ++t) value = value * static_cast<double>(n - r + t) / static_cast<double>(t);
  return value;
}

}  // namespace

ExactResult solve_exact(const Instance& inst, std::int64_t rounds, std::optional<std::uint64_t> node_budget) {
  if (rounds < 1) throw std::invalid_argument("rounds must be positive");
  if (inst.num_interfaces() > kMaxExactInterfaces) {
    throw std::invalid_argument("exact solver supports at most " + std::to_string(kMaxExactInterfaces) +
                                " interfaces");
  }
  if (auto shortfall = find_shortfall(inst, rounds)) throw make_infeasible_error(*shortfall);
  return BranchAndBound(inst, rounds, node_budget).run();
}

double oracle_search_space(const Instance& inst) {
  double space = 1.0;
  for (int j = 0; j < inst.num_services(); ++j) {
    for (int k = 0; k < inst.num_resources(); ++k) {
      const auto d = inst.demand(j, k);
      if (d > 0) space *= binomial(d + inst.num_interfaces() - 1, inst.num_interfaces() - 1);
    }
  }
  return space;
}

ExactResult brute_force_oracle(const Instance& inst, std::int64_t rounds, double space_limit) {
  if (rounds < 1) throw std::invalid_argument("rounds must be positive");
  const double space = oracle_search_space(inst);
  if (space > space_limit) {
    throw SearchSpaceTooLargeError("brute-force space of " + std::to_string(space) + " allocations exceeds limit");
  }

  const int I = inst.num_interfaces();
  const int J = inst.num_services();
  const int K = inst.num_resources();
  const auto scaled = detail::scale_consumption(inst);

  struct Cell {
    int service;
    int resource;
    std::int64_t demand;
  };
  std::vector<Cell> cells;
  for (int j = 0; j < J; ++j) {
    for (int k = 0; k < K; ++k) {
      if (inst.demand(j, k) > 0) cells.push_back({j, k, inst.demand(j, k)});
    }
  }

  // Remaining integer-scaled capacity per (i, k) and number of nonzero
  // entries per (i, j), which decides when activation is charged.
  std::vector<std::int64_t> room(static_cast<std::size_t>(I) * static_cast<std::size_t>(K));
  for (int i = 0; i < I; ++i) {
    for (int k = 0; k < K; ++k) {
      room[static_cast<std::size_t>(i * K + k)] = rounds * inst.capacity(i, k) * scaled.scale;
    }
  }
  std::vector<int> engaged(static_cast<std::size_t>(I) * static_cast<std::size_t>(J), 0);
  Allocation current = Allocation::zeros_like(inst);
  std::optional<std::int64_t> best;
  Allocation best_alloc;
  std::uint64_t visited = 0;

  std::function<void(std::size_t, int, std::int64_t, std::int64_t)> enumerate =
      [&](std::size_t cell, int i, std::int64_t left, std::int64_t cost) {
        ++visited;
        if (best && cost >= *best) return;
        if (cell == cells.size()) {
          best = cost;
          best_alloc = current;
          return;
        }
        const auto [j, k, d] = cells[cell];
        if (i == I) {
          if (left == 0) enumerate(cell + 1, 0, cells.size() > cell + 1 ? cells[cell + 1].demand : 0, cost);
          return;
        }
        const auto w = scaled.weight(i, j, k);
        auto& r = room[static_cast<std::size_t>(i * K + k)];
        auto& e = engaged[static_cast<std::size_t>(i * J + j)];
        const std::int64_t most = std::min(left, r / w);
        for (std::int64_t x = 0; x <= most; ++x) {
          std::int64_t step = x * inst.unit_cost(i, k);
          if (x > 0 && e == 0) step += inst.activation_cost(i);
          current(i, j, k) = x;
          r -= w * x;
          if (x > 0) ++e;
          enumerate(cell, i + 1, left - x, cost + step);
          if (x > 0) --e;
          r += w * x;
        }
        current(i, j, k) = 0;
      };
  enumerate(0, 0, cells.empty() ? 0 : cells.front().demand, 0);

  if (!best) throw InfeasibleError("infeasible: no integer allocation fits the capacities");
  return ExactResult{best_alloc, total_cost(inst, best_alloc), visited, true};
}

Instance build_partition_instance(std::span<const std::int64_t> values) {
  if (values.empty()) throw std::invalid_argument("partition instance needs at least one value");
  std::int64_t sum = 0;
  IntMatrix demand;
  for (auto v : values) {
    if (v <= 0) throw std::invalid_argument("partition values must be positive");
    sum += v;
    demand.push_back({v});
  }
  return Instance::from_matrices({{(sum + 1) / 2}, {sum / 2}}, {{0}, {0}}, {1, 1}, demand);
}

}  // namespace sia
