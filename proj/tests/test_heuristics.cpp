#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "sia/exact.hpp"
#include "sia/heuristics.hpp"
#include "support/helpers.hpp"

namespace sia {
namespace {

TEST(NormalizeDemands, ColumnMaxima) {
  const auto shares = normalize_demands({{2, 5, 0}, {4, 5, 0}, {1, 5, 0}});
  EXPECT_EQ(shares[0][0], Rational(1, 2));
  EXPECT_EQ(shares[1][0], Rational(1));
  EXPECT_EQ(shares[2][0], Rational(1, 4));
  for (int j = 0; j < 3; ++j) {
    EXPECT_EQ(shares[static_cast<std::size_t>(j)][1], Rational(1));
    EXPECT_EQ(shares[static_cast<std::size_t>(j)][2], Rational(0));
  }
  EXPECT_TRUE(normalize_demands({}).empty());
}

NormalizedDemands shares_of(std::initializer_list<std::initializer_list<Rational>> rows) {
  NormalizedDemands out;
  for (auto row : rows) out.emplace_back(row);
  return out;
}

TEST(OrderRandomEqualShares, StrictKeysIgnoreSeed) {
  const auto shares = shares_of({{Rational(1)}, {Rational(1, 2)}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto order = order_random_equal_shares(shares, seed);
    ASSERT_EQ(order.size(), 2u);
    EXPECT_EQ(order[0].service, 0);
    EXPECT_EQ(order[1].service, 1);
  }
  const auto single = order_random_equal_shares(shares_of({{Rational(0), Rational(1)}}), 3);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].resource, 1);
}

TEST(OrderRandomEqualShares, TiesArePermutedUniformly) {
  // 6 permutations, 10000 draws; chi-square with 5 degrees of freedom has
  // a 99.9% quantile of 20.515.
  const auto shares = shares_of({{Rational(1)}, {Rational(1)}, {Rational(1)}});
  std::map<std::vector<int>, int> counts;
  constexpr int kDraws = 10000;
  for (int n = 0; n < kDraws; ++n) {
    const auto order = order_random_equal_shares(shares, derive_seed(77, static_cast<std::uint64_t>(n)));
    std::vector<int> perm;
    for (const auto& e : order) perm.push_back(e.service);
    ++counts[perm];
  }
  ASSERT_EQ(counts.size(), 6u);
  const double expected = kDraws / 6.0;
  double chi2 = 0;
  for (const auto& [perm, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 20.515);
}

TEST(OrderAverageCost, KeysAndTies) {
  // C = (10*5 + 10*5) / 100 = 1, so keys equal the shares.
  const auto inst = Instance::from_matrices({{5}, {5}}, {{10}, {10}}, {0, 0}, {{2}, {4}});
  const auto order = order_average_cost(normalize_demands(inst.demand_matrix()), inst);
  ASSERT_EQ(order.size(), 2u);
  EXPECT_EQ(order[0].service, 1);
  EXPECT_EQ(order[0].key, Rational(1));
  EXPECT_EQ(order[1].key, Rational(1, 2));

  // Equal keys fall back to (resource, service) order.
  const auto flat = Instance::from_matrices({{5, 5}}, {{10, 10}}, {0}, {{3, 3}, {3, 3}});
  const auto tied = order_average_cost(normalize_demands(flat.demand_matrix()), flat);
  ASSERT_EQ(tied.size(), 4u);
  EXPECT_EQ((std::vector<int>{tied[0].resource, tied[0].service, tied[1].resource, tied[1].service,
                              tied[2].resource, tied[2].service}),
            (std::vector<int>{0, 0, 0, 1, 1, 0}));
}

TEST(OrderAverageCost, ExpensiveResourceFirst) {
  // Resource 2's capacity-weighted cost is ten times resource 1's, so any
  // of its shares above 1/10 outranks every share of resource 1. A share of
  // exactly 1/10 ties with a full resource-1 share and loses on index.
  const auto inst = Instance::from_matrices({{10, 10}, {10, 10}}, {{1, 10}, {1, 10}}, {0, 0},
                                            {{10, 1}, {7, 10}, {10, 2}, {4, 3}});
  const auto shares = normalize_demands(inst.demand_matrix());
  const auto order = order_average_cost(shares, inst);
  bool seen_first_resource = false;
  for (const auto& e : order) {
    if (e.resource == 0) seen_first_resource = true;
    const auto& share = shares[static_cast<std::size_t>(e.service)][1];
    if (e.resource == 1 && share > Rational(1, 10)) EXPECT_FALSE(seen_first_resource) << "service " << e.service;
  }
}

TEST(GreedyAllocate, CheapestInterfaceFits) {
  const auto inst = Instance::from_matrices({{5}, {5}}, {{2}, {9}}, {1, 1}, {{3}});
  for (const auto& r : {run_average_cost_heuristic(inst), run_random_heuristic(inst, 1)}) {
    EXPECT_EQ(r.allocation(0, 0, 0), 3);
    EXPECT_EQ(r.cost.total, 7);
  }
  EXPECT_EQ(brute_force_oracle(inst).cost.total, 7);
}

TEST(GreedyAllocate, SplitsWhenNothingFits) {
  const auto inst = Instance::from_matrices({{2}, {2}}, {{1}, {5}}, {1, 1}, {{3}});
  const auto r = run_average_cost_heuristic(inst);
  EXPECT_EQ(r.allocation(0, 0, 0), 2);
  EXPECT_EQ(r.allocation(1, 0, 0), 1);
  EXPECT_EQ(r.cost, (CostBreakdown{7, 2, 9}));
}

TEST(GreedyAllocate, ZeroDemand) {
  const auto inst = Instance::from_matrices({{2}, {2}}, {{1}, {5}}, {1, 1}, {{0}, {0}});
  const auto r = run_random_heuristic(inst, 9);
  EXPECT_TRUE(r.order.empty());
  EXPECT_EQ(r.cost.total, 0);
}

TEST(GreedyAllocate, CapacityExhausted) {
  // Aggregate capacity suffices but overhead makes the last demand unplaceable.
  const auto inst = Instance::from_matrices({{4}}, {{1}}, {0}, {{2}, {2}}, {{{Rational(1)}, {Rational(0)}}});
  try {
    run_average_cost_heuristic(inst);
    FAIL() << "expected CapacityExhaustedError";
  } catch (const CapacityExhaustedError& e) {
    EXPECT_EQ(e.resource(), 0);
  }
}

TEST(NonSplitCost, ChoosesCheapestIncludingActivation) {
  const auto inst = Instance::from_matrices({{20}, {20}}, {{3}, {5}}, {100, 1}, {{10}});
  AllocationState state(inst);
  const auto choice = non_split_cost(state, 0, 0, 10);
  ASSERT_TRUE(choice.cost.has_value());
  EXPECT_EQ(choice.interface, 1);
  EXPECT_EQ(*choice.cost, 51);

  // Already engaged interfaces are not charged again.
  const auto small = Instance::from_matrices({{20, 5}}, {{3, 1}}, {100}, {{10, 1}});
  AllocationState engaged(small);
  engaged.allocate(0, 0, 1, 1);
  EXPECT_EQ(non_split_cost(engaged, 0, 0, 10).cost, 30);

  const auto tight = Instance::from_matrices({{4}, {4}}, {{3}, {5}}, {1, 1}, {{10}});
  AllocationState none(tight);
  EXPECT_FALSE(non_split_cost(none, 0, 0, 10).cost.has_value());
}

TEST(SplitCost, FillsCheapestFirst) {
  const auto inst = Instance::from_matrices({{2}, {2}}, {{1}, {5}}, {1, 1}, {{3}});
  AllocationState state(inst);
  const auto plan = split_cost(state, 0, 0, 3);
  ASSERT_TRUE(plan.cost.has_value());
  EXPECT_EQ(*plan.cost, 9);
  ASSERT_EQ(plan.parts.size(), 2u);
  EXPECT_EQ(plan.parts[0], (std::pair<int, std::int64_t>{0, 2}));
  EXPECT_EQ(plan.parts[1], (std::pair<int, std::int64_t>{1, 1}));

  const auto roomy = Instance::from_matrices({{5}, {5}}, {{1}, {5}}, {1, 1}, {{3}});
  AllocationState one(roomy);
  const auto degenerate = split_cost(one, 0, 0, 3);
  ASSERT_EQ(degenerate.parts.size(), 1u);
  EXPECT_EQ(degenerate.cost, non_split_cost(one, 0, 0, 3).cost);

  EXPECT_FALSE(split_cost(state, 0, 0, 5).cost.has_value());
}

TEST(Heuristics, TwoServiceInstanceIsFeasible) {
  const auto inst = Instance::from_matrices({{6, 3, 0}, {8, 10, 7}, {3, 6, 6}}, {{4, 6, 0}, {3, 5, 4}, {5, 2, 6}},
                                            {10, 20, 15}, {{8, 10, 13}, {8, 5, 0}});
  for (const auto& r : {run_average_cost_heuristic(inst), run_random_heuristic(inst, 4)}) {
    EXPECT_TRUE(validate(inst, r.allocation).ok()) << describe(validate(inst, r.allocation));
    EXPECT_EQ(r.cost, total_cost(inst, r.allocation));
  }
}

TEST(Heuristics, SingleInterfaceExactFit) {
  const auto inst = Instance::from_matrices({{4, 2}}, {{3, 1}}, {5}, {{4, 2}});
  const auto a = run_average_cost_heuristic(inst);
  const auto b = run_random_heuristic(inst, 123);
  EXPECT_EQ(a.allocation, b.allocation);
  EXPECT_EQ(a.cost, b.cost);
}

TEST(HeuristicProperties, FeasibleDominatedAndDeterministic) {
  Rng rng(40);
  testing::SmallShape shape;
  for (int trial = 0; trial < 400; ++trial) {
    const auto inst = testing::random_instance(rng, shape);
    const auto seed = rng.next();
    std::optional<std::int64_t> exact;
    try {
      exact = solve_exact(inst).cost.total;
    } catch (const InfeasibleError&) {
    }
    for (int variant = 0; variant < 2; ++variant) {
      HeuristicResult r;
      try {
        r = variant == 0 ? run_random_heuristic(inst, seed) : run_average_cost_heuristic(inst);
      } catch (const CapacityExhaustedError&) {
        continue;
      }
      EXPECT_TRUE(validate(inst, r.allocation).ok());
      EXPECT_EQ(r.cost, total_cost(inst, r.allocation));
      ASSERT_TRUE(exact.has_value());
      EXPECT_GE(r.cost.total, *exact);

      const auto again = variant == 0 ? run_random_heuristic(inst, seed) : run_average_cost_heuristic(inst);
      EXPECT_EQ(again.allocation, r.allocation);
      EXPECT_EQ(again.order, r.order);
    }
  }
}

TEST(HeuristicProperties, OrderCoversEveryDemandOnce) {
  Rng rng(41);
  testing::SmallShape shape{4, 6, 3, 5, 20, 9, 9};
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = testing::random_instance(rng, shape);
    const auto shares = normalize_demands(inst.demand_matrix());
    for (const auto& order : {order_random_equal_shares(shares, rng.next()), order_average_cost(shares, inst)}) {
      std::set<std::pair<int, int>> seen;
      for (std::size_t n = 0; n < order.size(); ++n) {
        EXPECT_GT(inst.demand(order[n].service, order[n].resource), 0);
        EXPECT_TRUE(seen.emplace(order[n].service, order[n].resource).second);
        if (n > 0) EXPECT_LE(order[n].key, order[n - 1].key);
      }
      std::size_t demanded = 0;
      for (int j = 0; j < inst.num_services(); ++j) {
        for (int k = 0; k < inst.num_resources(); ++k) demanded += inst.demand(j, k) > 0 ? 1 : 0;
      }
      EXPECT_EQ(seen.size(), demanded);
    }
  }
}

TEST(HeuristicProperties, OverheadRespected) {
  Rng rng(42);
  testing::SmallShape shape;
  shape.overhead_probability = 1.0;
  int solved = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const auto inst = testing::random_instance(rng, shape);
    try {
      const auto r = run_average_cost_heuristic(inst);
      EXPECT_TRUE(testing::reference_feasible(inst, r.allocation));
      ++solved;
    } catch (const CapacityExhaustedError&) {
    }
  }
  EXPECT_GT(solved, 100);
}

TEST(StepCounts, GrowWithProblemSize) {
  Rng rng(43);
  auto make = [&](int I, int J, int K) {
    IntMatrix cap(static_cast<std::size_t>(I)), cost(static_cast<std::size_t>(I)), demand(static_cast<std::size_t>(J));
    std::vector<std::int64_t> F;
    for (int i = 0; i < I; ++i) {
      for (int k = 0; k < K; ++k) {
        cap[static_cast<std::size_t>(i)].push_back(10 * J);
        cost[static_cast<std::size_t>(i)].push_back(testing::draw(rng, 1, 50));
      }
      F.push_back(20);
    }
    for (int j = 0; j < J; ++j) {
      for (int k = 0; k < K; ++k) demand[static_cast<std::size_t>(j)].push_back(testing::draw(rng, 1, 9));
    }
    return Instance::from_matrices(cap, cost, F, demand);
  };
  const auto small = run_average_cost_heuristic(make(2, 4, 2)).steps.total();
  const auto large = run_average_cost_heuristic(make(4, 16, 4)).steps.total();
  EXPECT_GT(small, 0u);
  EXPECT_GT(large, 8 * small);
}

}  // namespace
}  // namespace sia
