#include "sia/multi_round.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "detail/scaled_consumption.hpp"
#include "sia/exact.hpp"
#include "sia/heuristics.hpp"

namespace sia {
namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

RoundBounds compute_bounds(const Instance& inst) {
  RoundBounds bounds;
  const int I = inst.num_interfaces();
  for (int k = 0; k < inst.num_resources(); ++k) {
    const auto demand = inst.total_demand(k);
    const auto capacity = inst.total_capacity(k);
    bounds.total_demand.push_back(demand);
    bounds.total_capacity.push_back(capacity);
    if (demand > 0 && capacity == 0) {
      throw InfeasibleError("infeasible: resource " + std::to_string(k + 1) + " is not offered by any interface", k);
    }

    // Interfaces with zero capacity for k can never serve it, so they are
    // skipped unless nothing offers k at all (then D_k is zero too).
    int cheapest = -1;
    for (int pass = 0; pass < 2 && cheapest < 0; ++pass) {
      std::int64_t best = 0;
      for (int i = 0; i < I; ++i) {
        if (pass == 0 && inst.capacity(i, k) == 0) continue;
        const auto score = inst.unit_cost(i, k) * demand + inst.activation_cost(i);
        if (cheapest < 0 || score < best) {
          cheapest = i;
          best = score;
        }
      }
    }
    bounds.cheapest_interface.push_back(cheapest);

    if (demand > 0) {
      bounds.r_min = std::max(bounds.r_min, ceil_div(demand, capacity));
      bounds.r_max = std::max(bounds.r_max, ceil_div(demand, inst.capacity(cheapest, k)));
    }
  }
  // ceil(D/b') >= ceil(D/B) per resource because b' <= B, so this only
  // matters for the all-zero-demand case where both are 1.
  bounds.r_max = std::max(bounds.r_max, bounds.r_min);
  return bounds;
}

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Exact:
      return "exact";
    case SolverKind::RandomShares:
      return "rand";
    case SolverKind::AverageCost:
      return "avg";
  }
  return "unknown";
}

std::optional<SolverKind> parse_solver_kind(std::string_view name) {
  if (name == "exact") return SolverKind::Exact;
  if (name == "rand") return SolverKind::RandomShares;
  if (name == "avg") return SolverKind::AverageCost;
  return std::nullopt;
}

SolveResult solve_multi_round(const Instance& inst, std::int64_t rounds, SolverKind solver, std::uint64_t seed,
                              std::optional<std::uint64_t> node_budget) {
  if (rounds < 1) throw std::invalid_argument("rounds must be positive");
  if (auto shortfall = find_shortfall(inst, rounds)) throw make_infeasible_error(*shortfall);

  SolveResult result;
  result.rounds = rounds;
  result.solver = solver;
  result.seed = seed;
  switch (solver) {
    case SolverKind::Exact: {
      auto exact = solve_exact(inst, rounds, node_budget);
      result.allocation = std::move(exact.allocation);
      result.cost = exact.cost;
      result.proven_optimal = exact.proven_optimal;
      break;
    }
    case SolverKind::RandomShares: {
      auto heuristic = run_random_heuristic(inst, seed, rounds);
      result.allocation = std::move(heuristic.allocation);
      result.cost = heuristic.cost;
      break;
    }
    case SolverKind::AverageCost: {
      auto heuristic = run_average_cost_heuristic(inst, rounds);
      result.allocation = std::move(heuristic.allocation);
      result.cost = heuristic.cost;
      break;
    }
  }
  return result;
}

RoundSchedule decompose_rounds(const Instance& inst, const Allocation& alloc, std::int64_t rounds) {
  const auto report = validate(inst, alloc, rounds);
  if (!report.ok()) throw std::invalid_argument("cannot decompose an invalid allocation: " + describe(report));

  const auto scaled = detail::scale_consumption(inst);
  RoundSchedule schedule(static_cast<std::size_t>(rounds), Allocation::zeros_like(inst));
  for (int i = 0; i < inst.num_interfaces(); ++i) {
    for (int k = 0; k < inst.num_resources(); ++k) {
      const std::int64_t per_round = inst.capacity(i, k) * scaled.scale;
      std::size_t round = 0;
      std::int64_t room = per_round;
      for (int j = 0; j < inst.num_services(); ++j) {
        const auto weight = scaled.weight(i, j, k);
        std::int64_t left = alloc(i, j, k);
        while (left > 0) {
          const auto take = std::min(left, room / weight);
          if (take > 0) {
            schedule[round](i, j, k) += take;
            left -= take;
            room -= take * weight;
          }
          if (left > 0) {
            if (++round == schedule.size()) {
              throw InfeasibleError("infeasible: interface " + std::to_string(i + 1) + ", resource " +
                                        std::to_string(k + 1) + " cannot pack whole units into " +
                                        std::to_string(rounds) + " rounds",
                                    k);
            }
            room = per_round;
          }
        }
      }
    }
  }
  return schedule;
}

std::vector<SweepPoint> sweep_rounds(const Instance& inst, SolverKind solver, std::int64_t r_from, std::int64_t r_to,
                                     std::uint64_t seed) {
  if (r_from < 1 || r_to < r_from) throw std::invalid_argument("sweep needs 1 <= from <= to");
  std::vector<SweepPoint> points;
  for (std::int64_t r = r_from; r <= r_to; ++r) {
    const auto solved = solve_multi_round(inst, r, solver, seed);
    points.push_back({r, solved.cost, solver, seed});
  }
  return points;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points) {
  out << "R,total,utilization,activation,solver,seed\n";
  for (const auto& p : points) {
    out << p.rounds << ',' << p.cost.total << ',' << p.cost.utilization << ',' << p.cost.activation << ','
        << to_string(p.solver) << ',' << p.seed << '\n';
  }
}

}  // namespace sia
