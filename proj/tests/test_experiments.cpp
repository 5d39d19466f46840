#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "sia/exact.hpp"
#include "sia/experiments.hpp"
#include "sia/heuristics.hpp"
#include "support/helpers.hpp"

namespace sia {
namespace {

ScenarioConfig small_config() {
  ScenarioConfig c;
  c.name = "unit";
  c.resources = {"r1", "r2"};
  c.interfaces = {{"if1", {12, 10}, {10, 30}, 0}, {"if2", {10, 12}, {20, 10}, 0}, {"if3", {8, 8}, {15, 15}, 0}};
  apply_activation_profile(c, "RSL");
  c.demand_classes = {{"a", {2, 1}, 1.0}, {"b", {1, 3}, 1.0}, {"c", {3, 2}, 1.0}};
  c.min_services = 1;
  c.max_services = 4;
  c.runs = 10;
  c.seed = 99;
  return c;
}

TEST(ScenarioConfig, Checks) {
  EXPECT_NO_THROW(small_config().check());
  auto c = small_config();
  c.demand_classes[0].weight = 0;
  EXPECT_THROW(c.check(), std::invalid_argument);
  c = small_config();
  c.demand_classes[1].demand = {1};
  EXPECT_THROW(c.check(), std::invalid_argument);
  c = small_config();
  c.max_services = 0;
  EXPECT_THROW(c.check(), std::invalid_argument);
  c = small_config();
  c.runs = 0;
  EXPECT_THROW(c.check(), std::invalid_argument);
  c = small_config();
  c.solvers.clear();
  EXPECT_THROW(c.check(), std::invalid_argument);
}

TEST(ActivationProfiles, Values) {
  EXPECT_EQ(activation_profile("RSH"), (std::vector<std::int64_t>{500, 500, 500}));
  EXPECT_EQ(activation_profile("RSM"), (std::vector<std::int64_t>{300, 100, 200}));
  for (const char* name : {"RSL", "HDL", "LDL"}) EXPECT_EQ(activation_profile(name), (std::vector<std::int64_t>{20, 20, 20}));
  EXPECT_FALSE(activation_profile("XYZ").has_value());
  auto c = small_config();
  apply_activation_profile(c, "RSM");
  EXPECT_EQ(c.interfaces[1].activation_cost, 100);
  c.interfaces.pop_back();
  EXPECT_THROW(apply_activation_profile(c, "RSM"), std::invalid_argument);
}

TEST(GenerateInstance, SingleClassAndEmpty) {
  auto c = small_config();
  c.demand_classes = {{"only", {4, 5}, 2.0}};
  const auto inst = generate_instance(c, 7, 3);
  ASSERT_EQ(inst.num_services(), 7);
  for (int j = 0; j < 7; ++j) {
    EXPECT_EQ(inst.demand(j, 0), 4);
    EXPECT_EQ(inst.demand(j, 1), 5);
  }
  EXPECT_EQ(generate_instance(c, 0, 3).num_services(), 0);
}

TEST(GenerateInstance, DeterministicAndPrefixNested) {
  const auto c = small_config();
  const auto a = generate_instance(c, 6, 1234);
  const auto b = generate_instance(c, 6, 1234);
  EXPECT_EQ(a.demand_matrix(), b.demand_matrix());
  const auto shorter = generate_instance(c, 4, 1234);
  for (int j = 0; j < 4; ++j) EXPECT_EQ(shorter.demand_matrix()[static_cast<std::size_t>(j)], a.demand_matrix()[static_cast<std::size_t>(j)]);
}

TEST(GenerateInstance, EqualWeightsAreBalanced) {
  // Binomial(10000, 1/2): sigma = 50, so 3 sigma is 150.
  auto c = small_config();
  c.demand_classes = {{"x", {1, 0}, 1.0}, {"y", {0, 1}, 1.0}};
  const auto inst = generate_instance(c, 10000, 8);
  int first = 0;
  for (int j = 0; j < inst.num_services(); ++j) first += inst.demand(j, 0) == 1 ? 1 : 0;
  EXPECT_LE(std::abs(first - 5000), 150);
}

TEST(GenerateInstance, WeightsAreRespected) {
  // Weight 3:1 -> p = 3/4, sigma = sqrt(10000 * 3/16) ~ 43.3.
  auto c = small_config();
  c.demand_classes = {{"x", {1, 0}, 3.0}, {"y", {0, 1}, 1.0}};
  const auto inst = generate_instance(c, 10000, 9);
  int first = 0;
  for (int j = 0; j < inst.num_services(); ++j) first += inst.demand(j, 0) == 1 ? 1 : 0;
  EXPECT_LE(std::abs(first - 7500), 130);
}

TEST(SplitsPerService, Definition) {
  Allocation x(3, 2, 1);
  x(0, 0, 0) = 1;
  x(1, 1, 0) = 2;
  EXPECT_DOUBLE_EQ(splits_per_service(x), 1.0);

  // Service 1 on interfaces 2 and 3, service 2 on interfaces 1 and 3.
  Allocation both(3, 2, 3);
  both(1, 0, 0) = 8;
  both(2, 0, 1) = 4;
  both(0, 1, 0) = 5;
  both(2, 1, 0) = 3;
  EXPECT_DOUBLE_EQ(splits_per_service(both), 2.0);

  // One service on three interfaces and one unsplit; idle services do not count.
  Allocation mixed(3, 3, 1);
  mixed(0, 0, 0) = 1;
  mixed(1, 0, 0) = 1;
  mixed(2, 0, 0) = 1;
  mixed(1, 1, 0) = 4;
  EXPECT_DOUBLE_EQ(splits_per_service(mixed), 2.0);

  EXPECT_THROW(splits_per_service(Allocation(2, 2, 1)), std::invalid_argument);
}

TEST(Summarize, Quantiles) {
  const auto s = summarize({5, 1, 4, 2, 3});
  EXPECT_EQ(s.count, 5u);
  EXPECT_DOUBLE_EQ(s.min, 1);
  EXPECT_DOUBLE_EQ(s.q1, 2);
  EXPECT_DOUBLE_EQ(s.median, 3);
  EXPECT_DOUBLE_EQ(s.mean, 3);
  EXPECT_DOUBLE_EQ(s.q3, 4);
  EXPECT_DOUBLE_EQ(s.p95, 4.8);
  EXPECT_DOUBLE_EQ(s.max, 5);
  const auto one = summarize({7});
  EXPECT_DOUBLE_EQ(one.min, 7);
  EXPECT_DOUBLE_EQ(one.q1, 7);
  EXPECT_DOUBLE_EQ(one.p95, 7);
  EXPECT_THROW(summarize({}), std::invalid_argument);
}

TEST(MonteCarlo, SingleRunCollapses) {
  auto c = small_config();
  c.runs = 1;
  c.min_services = c.max_services = 3;
  const std::vector<SolverKind> solvers{SolverKind::AverageCost};
  const auto stats = run_monte_carlo(c, solvers, 3, 3);
  ASSERT_EQ(stats.groups.size(), 1u);
  const auto& total = *stats.groups[0].total;
  EXPECT_EQ(total.min, total.max);
  EXPECT_EQ(total.median, total.mean);
  EXPECT_FALSE(stats.groups[0].ratio.has_value());
}

TEST(MonteCarlo, GapsNonnegativeAndAllocationsValid) {
  const auto c = small_config();
  const auto stats = run_monte_carlo(c);
  EXPECT_EQ(stats.records.size(), static_cast<std::size_t>(4 * 10 * 3));
  for (const auto& r : stats.records) {
    EXPECT_TRUE(r.error.empty()) << r.error;
    if (r.gap) EXPECT_GE(*r.gap, 0);
    if (r.solver != SolverKind::Exact) EXPECT_TRUE(r.gap.has_value());
    // Recreate the instance from the logged seed and check the solver's output.
    const auto inst = generate_instance(c, r.services, r.seed);
    switch (r.solver) {
      case SolverKind::Exact:
        EXPECT_EQ(solve_exact(inst).cost, *r.cost);
        break;
      case SolverKind::RandomShares: {
        const auto h = run_random_heuristic(inst, r.seed);
        EXPECT_TRUE(validate(inst, h.allocation).ok());
        EXPECT_EQ(h.cost, *r.cost);
        break;
      }
      case SolverKind::AverageCost: {
        const auto h = run_average_cost_heuristic(inst);
        EXPECT_TRUE(validate(inst, h.allocation).ok());
        EXPECT_EQ(h.cost, *r.cost);
        break;
      }
    }
  }
  for (const auto& g : stats.groups) {
    ASSERT_TRUE(g.total.has_value());
    EXPECT_LE(g.total->min, g.total->q1);
    EXPECT_LE(g.total->q1, g.total->median);
    EXPECT_LE(g.total->median, g.total->q3);
    EXPECT_LE(g.total->q3, g.total->max);
    if (g.solver != SolverKind::Exact) {
      ASSERT_TRUE(g.ratio.has_value());
      EXPECT_GE(g.ratio->min, 1.0);
    }
  }
}

TEST(MonteCarlo, ExactCostGrowsWithPrefixServices) {
  const auto c = small_config();
  const std::vector<SolverKind> solvers{SolverKind::Exact};
  const auto stats = run_monte_carlo(c, solvers, 1, 4);
  // Same run index means same seed unless a redraw happened.
  std::map<int, std::vector<const RunRecord*>> by_run;
  for (const auto& r : stats.records) by_run[r.run].push_back(&r);
  for (const auto& [run, records] : by_run) {
    for (std::size_t n = 1; n < records.size(); ++n) {
      if (records[n]->seed != records[n - 1]->seed) continue;
      EXPECT_GE(records[n]->cost->total, records[n - 1]->cost->total);
    }
  }
}

TEST(MonteCarlo, RejectsInfeasibleDraws) {
  auto c = small_config();
  c.demand_classes = {{"fits", {1, 1}, 1.0}, {"huge", {40, 1}, 1.0}};
  c.max_redraws = 50;
  const std::vector<SolverKind> solvers{SolverKind::AverageCost};
  const auto stats = run_monte_carlo(c, solvers, 2, 2);
  EXPECT_GT(stats.redraws, 0);
  for (const auto& r : stats.records) {
    ASSERT_TRUE(r.error.empty());
    EXPECT_TRUE(is_single_round_feasible(generate_instance(c, 2, r.seed)));
  }

  c.demand_classes = {{"huge", {40, 1}, 1.0}};
  const auto hopeless = run_monte_carlo(c, solvers, 1, 1);
  EXPECT_EQ(hopeless.groups[0].failures, hopeless.groups[0].runs);
}

TEST(MonteCarlo, CsvIsReproducible) {
  const auto c = small_config();
  std::ostringstream a, b;
  write_runs_csv(a, run_monte_carlo(c));
  write_runs_csv(b, run_monte_carlo(c));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')),
            "scenario,j,solver,run,seed,total,utilization,activation,splits_per_service,gap");
}

TEST(FormatNumber, Shortest) {
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(2.0 / 3.0), "0.6666666666666666");
}

}  // namespace
}  // namespace sia
