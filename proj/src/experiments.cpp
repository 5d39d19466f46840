#include "sia/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sia/exact.hpp"
#include "sia/heuristics.hpp"
#include "sia/random.hpp"

namespace sia {
namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

double quantile(const std::vector<double>& sorted, double q) {
  const double position = q * static_cast<double>(sorted.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(position));
  const auto upper = std::min(lower + 1, sorted.size() - 1);
  const double fraction = position - static_cast<double>(lower);
  return sorted[lower] + fraction * (sorted[upper] - sorted[lower]);
}

std::vector<SolverKind> canonical(std::span<const SolverKind> solvers) {
  std::vector<SolverKind> out(solvers.begin(), solvers.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

void ScenarioConfig::check() const {
  require(!resources.empty(), "scenario needs at least one resource");
  require(!interfaces.empty(), "scenario needs at least one interface");
  require(!demand_classes.empty(), "scenario needs at least one demand class");
  for (const auto& c : demand_classes) {
    require(c.demand.size() == resources.size(), "demand class '" + c.name + "' has wrong length");
    require(std::isfinite(c.weight) && c.weight > 0, "demand class '" + c.name + "' needs a positive weight");
    for (auto d : c.demand) require(d >= 0, "demand class '" + c.name + "' has a negative entry");
  }
  require(min_services >= 0 && max_services >= min_services, "service range must satisfy 0 <= min <= max");
  require(runs >= 1, "runs must be positive");
  require(max_redraws >= 0, "max_redraws must be nonnegative");
  require(!solvers.empty(), "scenario needs at least one solver");
  // Shapes of interfaces are checked by building an instance.
  Instance(resources, interfaces, {});
}

std::optional<std::vector<std::int64_t>> activation_profile(std::string_view name) {
  if (name == "RSH") return std::vector<std::int64_t>{500, 500, 500};
  if (name == "RSM") return std::vector<std::int64_t>{300, 100, 200};
  if (name == "RSL" || name == "HDL" || name == "LDL") return std::vector<std::int64_t>{20, 20, 20};
  return std::nullopt;
}

void apply_activation_profile(ScenarioConfig& config, std::string_view name) {
  const auto profile = activation_profile(name);
  require(profile.has_value(), "unknown activation profile '" + std::string(name) + "'");
  require(profile->size() == config.interfaces.size(),
          "activation profile '" + std::string(name) + "' needs exactly " + std::to_string(profile->size()) +
              " interfaces");
  for (std::size_t i = 0; i < profile->size(); ++i) config.interfaces[i].activation_cost = (*profile)[i];
  config.activation_profile = std::string(name);
}

Instance generate_instance(const ScenarioConfig& config, int services, std::uint64_t seed) {
  require(services >= 0, "service count must be nonnegative");
  require(!config.demand_classes.empty(), "scenario needs at least one demand class");
  double total_weight = 0;
  for (const auto& c : config.demand_classes) total_weight += c.weight;

  Rng rng(seed);
  std::vector<ServiceSpec> drawn;
  for (int j = 0; j < services; ++j) {
    const double u = rng.uniform01() * total_weight;
    std::size_t pick = config.demand_classes.size() - 1;
    double cumulative = 0;
    for (std::size_t c = 0; c < config.demand_classes.size(); ++c) {
      cumulative += config.demand_classes[c].weight;
      if (u < cumulative) {
        pick = c;
        break;
      }
    }
    drawn.push_back({"s" + std::to_string(j + 1), config.demand_classes[pick].demand});
  }
  return Instance(config.resources, config.interfaces, std::move(drawn));
}

double splits_per_service(const Allocation& alloc) {
  int engaged = 0;
  int served = 0;
  for (int j = 0; j < alloc.num_services(); ++j) {
    int here = 0;
    for (int i = 0; i < alloc.num_interfaces(); ++i) here += alloc.slice_total(i, j) > 0 ? 1 : 0;
    engaged += here;
    served += here > 0 ? 1 : 0;
  }
  require(served > 0, "splits per service is undefined without a served service");
  return static_cast<double>(engaged) / static_cast<double>(served);
}

Summary summarize(std::vector<double> values) {
  require(!values.empty(), "cannot summarize an empty sample");
  std::sort(values.begin(), values.end());
  Summary s;
  s.count = values.size();
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile(values, 0.25);
  s.median = quantile(values, 0.5);
  s.q3 = quantile(values, 0.75);
  s.p95 = quantile(values, 0.95);
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  return s;
}

RunStats run_monte_carlo(const ScenarioConfig& config, std::span<const SolverKind> solvers, int min_services,
                         int max_services) {
  config.check();
  require(min_services >= 0 && max_services >= min_services, "service range must satisfy 0 <= min <= max");
  const auto order = canonical(solvers);
  const bool with_exact = !order.empty() && order.front() == SolverKind::Exact;

  RunStats stats;
  stats.scenario = config.name;
  stats.seed = config.seed;
  stats.runs = config.runs;

  for (int j = min_services; j <= max_services; ++j) {
    const std::size_t first_record = stats.records.size();
    for (int run = 0; run < config.runs; ++run) {
      const auto run_seed = derive_seed(config.seed, static_cast<std::uint64_t>(run));
      std::uint64_t seed = run_seed;
      std::optional<Instance> inst;
      for (int attempt = 0; attempt <= config.max_redraws; ++attempt) {
        seed = attempt == 0 ? run_seed : derive_seed(run_seed, static_cast<std::uint64_t>(attempt));
        auto candidate = generate_instance(config, j, seed);
        if (is_single_round_feasible(candidate)) {
          inst = std::move(candidate);
          break;
        }
        ++stats.redraws;
      }

      std::optional<std::int64_t> exact_total;
      for (auto solver : order) {
        RunRecord record{j, solver, run, seed, std::nullopt, std::nullopt, std::nullopt, {}};
        if (!inst) {
          record.error = "no single-round feasible draw";
          stats.records.push_back(std::move(record));
          continue;
        }
        try {
          Allocation alloc;
          switch (solver) {
            case SolverKind::Exact: {
              auto r = solve_exact(*inst, 1, config.node_budget);
              alloc = std::move(r.allocation);
              record.cost = r.cost;
              exact_total = r.cost.total;
              if (!r.proven_optimal) record.error = "node budget exhausted";
              break;
            }
            case SolverKind::RandomShares: {
              auto r = run_random_heuristic(*inst, seed);
              alloc = std::move(r.allocation);
              record.cost = r.cost;
              break;
            }
            case SolverKind::AverageCost: {
              auto r = run_average_cost_heuristic(*inst);
              alloc = std::move(r.allocation);
              record.cost = r.cost;
              break;
            }
          }
          if (!alloc.empty_total()) record.splits = splits_per_service(alloc);
          if (solver != SolverKind::Exact && exact_total) record.gap = record.cost->total - *exact_total;
        } catch (const std::exception& e) {
          record.cost.reset();
          record.error = e.what();
        }
        stats.records.push_back(std::move(record));
      }
    }

    for (auto solver : order) {
      GroupStats group;
      group.services = j;
      group.solver = solver;
      std::vector<double> totals, splits, gaps, ratios;
      // Ratios pair each heuristic run with the exact run of the same index.
      std::vector<std::optional<std::int64_t>> exact_by_run(static_cast<std::size_t>(config.runs));
      for (std::size_t r = first_record; r < stats.records.size(); ++r) {
        const auto& rec = stats.records[r];
        if (rec.solver == SolverKind::Exact && rec.cost) exact_by_run[static_cast<std::size_t>(rec.run)] = rec.cost->total;
      }
      for (std::size_t r = first_record; r < stats.records.size(); ++r) {
        const auto& rec = stats.records[r];
        if (rec.solver != solver) continue;
        ++group.runs;
        if (!rec.cost) {
          ++group.failures;
          continue;
        }
        totals.push_back(static_cast<double>(rec.cost->total));
        if (rec.splits) splits.push_back(*rec.splits);
        if (rec.gap) gaps.push_back(static_cast<double>(*rec.gap));
        const auto& exact = exact_by_run[static_cast<std::size_t>(rec.run)];
        if (with_exact && solver != SolverKind::Exact && exact) {
          if (*exact > 0) {
            ratios.push_back(static_cast<double>(rec.cost->total) / static_cast<double>(*exact));
          } else if (rec.cost->total == 0) {
            ratios.push_back(1.0);
          }
        }
      }
      if (!totals.empty()) group.total = summarize(totals);
      if (!splits.empty()) group.mean_splits = summarize(splits).mean;
      if (!gaps.empty()) group.gap = summarize(gaps);
      if (!ratios.empty()) group.ratio = summarize(ratios);
      stats.groups.push_back(std::move(group));
    }
  }
  return stats;
}

RunStats run_monte_carlo(const ScenarioConfig& config) {
  return run_monte_carlo(config, config.solvers, config.min_services, config.max_services);
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_runs_csv(std::ostream& out, const RunStats& stats) {
  out << "scenario,j,solver,run,seed,total,utilization,activation,splits_per_service,gap\n";
  for (const auto& r : stats.records) {
    out << stats.scenario << ',' << r.services << ',' << to_string(r.solver) << ',' << r.run << ',' << r.seed << ',';
    if (r.cost) {
      out << r.cost->total << ',' << r.cost->utilization << ',' << r.cost->activation << ',';
    } else {
      out << ",,,";
    }
    if (r.splits) out << format_number(*r.splits);
    out << ',';
    if (r.gap) out << *r.gap;
    out << '\n';
  }
}

}  // namespace sia
