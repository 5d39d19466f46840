#pragma once

// Generators and independent oracles shared by the unit and acceptance
// tests. Nothing here calls into the solvers under test.

#include <cstdint>
#include <optional>
#include <vector>

#include "sia/model.hpp"
#include "sia/random.hpp"

namespace sia::testing {

struct SmallShape {
  int max_interfaces = 3;
  int max_services = 3;
  int max_resources = 2;
  std::int64_t max_demand = 4;
  std::int64_t max_capacity = 6;
  std::int64_t max_unit_cost = 9;
  std::int64_t max_activation = 9;
  /// Chance that an instance gets a random overhead tensor drawn from
  /// {0, 1/2, 1}.
  double overhead_probability = 0.0;
};

inline std::int64_t draw(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

/// Random instance within `shape`, redrawn until every resource's total
/// demand fits its total capacity for `rounds`.
inline Instance random_instance(Rng& rng, const SmallShape& shape, std::int64_t rounds = 1) {
  for (;;) {
    const int I = static_cast<int>(draw(rng, 1, shape.max_interfaces));
    const int J = static_cast<int>(draw(rng, 1, shape.max_services));
    const int K = static_cast<int>(draw(rng, 1, shape.max_resources));
    IntMatrix cap(static_cast<std::size_t>(I)), cost(static_cast<std::size_t>(I)), demand(static_cast<std::size_t>(J));
    std::vector<std::int64_t> activation;
    for (int i = 0; i < I; ++i) {
      for (int k = 0; k < K; ++k) {
        cap[static_cast<std::size_t>(i)].push_back(draw(rng, 0, shape.max_capacity));
        cost[static_cast<std::size_t>(i)].push_back(draw(rng, 0, shape.max_unit_cost));
      }
      activation.push_back(draw(rng, 0, shape.max_activation));
    }
    for (int j = 0; j < J; ++j) {
      for (int k = 0; k < K; ++k) demand[static_cast<std::size_t>(j)].push_back(draw(rng, 0, shape.max_demand));
    }
    OverheadTensor overhead;
    if (shape.overhead_probability > 0 && rng.uniform01() < shape.overhead_probability) {
      const Rational choices[] = {Rational(0), Rational(1, 2), Rational(1)};
      overhead.assign(static_cast<std::size_t>(I),
                      std::vector<std::vector<Rational>>(static_cast<std::size_t>(J),
                                                         std::vector<Rational>(static_cast<std::size_t>(K))));
      for (auto& a : overhead) {
        for (auto& row : a) {
          for (auto& v : row) v = choices[rng.below(3)];
        }
      }
    }
    bool fits = true;
    for (int k = 0; k < K && fits; ++k) {
      std::int64_t d = 0, b = 0;
      for (int j = 0; j < J; ++j) d += demand[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      for (int i = 0; i < I; ++i) b += cap[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      fits = d <= rounds * b;
    }
    if (fits) return Instance::from_matrices(cap, cost, activation, demand, std::move(overhead));
  }
}

/// Cost written straight from the objective, without activation_matrix.
inline std::int64_t reference_total(const Instance& inst, const Allocation& x) {
  std::int64_t total = 0;
  for (int i = 0; i < inst.num_interfaces(); ++i) {
    for (int j = 0; j < inst.num_services(); ++j) {
      bool engaged = false;
      for (int k = 0; k < inst.num_resources(); ++k) {
        total += inst.unit_cost(i, k) * x(i, j, k);
        engaged = engaged || x(i, j, k) > 0;
      }
      if (engaged) total += inst.activation_cost(i);
    }
  }
  return total;
}

/// Capacity and demand check in cross-multiplied integers.
inline bool reference_feasible(const Instance& inst, const Allocation& x, std::int64_t rounds = 1) {
  for (int j = 0; j < inst.num_services(); ++j) {
    for (int k = 0; k < inst.num_resources(); ++k) {
      std::int64_t served = 0;
      for (int i = 0; i < inst.num_interfaces(); ++i) {
        if (x(i, j, k) < 0) return false;
        served += x(i, j, k);
      }
      if (served != inst.demand(j, k)) return false;
    }
  }
  for (int i = 0; i < inst.num_interfaces(); ++i) {
    for (int k = 0; k < inst.num_resources(); ++k) {
      Rational used(0);
      for (int j = 0; j < inst.num_services(); ++j) used += inst.consumption_factor(i, j, k) * x(i, j, k);
      if (used > Rational(rounds * inst.capacity(i, k))) return false;
    }
  }
  return true;
}

/// Pseudo-polynomial subset-sum: is there a subset summing to half the total?
inline bool has_equal_bipartition(const std::vector<std::int64_t>& values) {
  std::int64_t sum = 0;
  for (auto v : values) sum += v;
  if (sum % 2 != 0) return false;
  std::vector<char> reachable(static_cast<std::size_t>(sum / 2 + 1), 0);
  reachable[0] = 1;
  for (auto v : values) {
    for (std::int64_t s = sum / 2; s >= v; --s) {
      if (reachable[static_cast<std::size_t>(s - v)]) reachable[static_cast<std::size_t>(s)] = 1;
    }
  }
  return reachable[static_cast<std::size_t>(sum / 2)] != 0;
}

/// Cheapest allocation that keeps every active service on a single
/// interface, by enumerating all I^J assignments. nullopt when none fits.
inline std::optional<std::int64_t> best_unsplit_cost(const Instance& inst, std::int64_t rounds = 1) {
  const int I = inst.num_interfaces();
  const int J = inst.num_services();
  const int K = inst.num_resources();
  std::vector<int> pick(static_cast<std::size_t>(J), 0);
  std::optional<std::int64_t> best;
  for (;;) {
    bool fits = true;
    std::int64_t cost = 0;
    for (int i = 0; i < I && fits; ++i) {
      for (int k = 0; k < K && fits; ++k) {
        Rational used(0);
        for (int j = 0; j < J; ++j) {
          if (pick[static_cast<std::size_t>(j)] == i) used += inst.consumption_factor(i, j, k) * inst.demand(j, k);
        }
        fits = used <= Rational(rounds * inst.capacity(i, k));
      }
    }
    if (fits) {
      for (int j = 0; j < J; ++j) {
        const int i = pick[static_cast<std::size_t>(j)];
        if (inst.service_demand(j) == 0) continue;
        cost += inst.activation_cost(i);
        for (int k = 0; k < K; ++k) cost += inst.unit_cost(i, k) * inst.demand(j, k);
      }
      if (!best || cost < *best) best = cost;
    }
    int pos = 0;
    while (pos < J && ++pick[static_cast<std::size_t>(pos)] == I) pick[static_cast<std::size_t>(pos++)] = 0;
    if (pos == J) break;
  }
  return best;
}

}  // namespace sia::testing
