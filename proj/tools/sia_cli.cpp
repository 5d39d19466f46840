// sia: command-line front end for the service-to-interface assignment toolkit.
//
// Exit status: 0 success, 1 infeasible (or no allocation found), 2 bad input.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sia/exact.hpp"
#include "sia/experiments.hpp"
#include "sia/heuristics.hpp"
#include "sia/json_io.hpp"
#include "sia/multi_round.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInfeasible = 1;
constexpr int kBadInput = 2;

// Thrown for usage problems detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string in;
  std::string alloc;
  std::string out;
  std::string scenario;
  std::string solver = "exact";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> node_budget;
  std::int64_t rounds = 1;
  std::optional<std::int64_t> sweep_to;
  std::optional<int> runs;
};

sia::Instance load_instance(const std::string& path) {
  const auto doc = sia::read_json_file(path);
  try {
    return sia::instance_from_json(doc);
  } catch (const sia::JsonSchemaError& e) {
    throw sia::JsonSchemaError(path + ":" + e.pointer(), std::string(e.what()).substr(e.pointer().size() + 2));
  }
}

sia::SolverKind solver_kind(const Options& opt) {
  auto kind = sia::parse_solver_kind(opt.solver);
  if (!kind) throw UsageError("unknown solver '" + opt.solver + "'");
  if (*kind == sia::SolverKind::RandomShares && !opt.seed) {
    throw UsageError("--solver rand requires --seed");
  }
  return *kind;
}

void emit(const sia::OrderedJson& doc, const std::string& out_path) {
  const auto text = sia::format_json(doc);
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + out_path);
  out << text;
}

int cmd_solve(const Options& opt) {
  const auto inst = load_instance(opt.in);
  const auto kind = solver_kind(opt);
  const auto result = sia::solve_multi_round(inst, 1, kind, opt.seed.value_or(0), opt.node_budget);

  sia::OrderedJson doc;
  doc["solver"] = std::string(sia::to_string(kind));
  if (kind == sia::SolverKind::RandomShares) doc["seed"] = *opt.seed;
  if (kind == sia::SolverKind::Exact) doc["proven_optimal"] = result.proven_optimal;
  doc["x"] = sia::allocation_tensor_json(result.allocation);
  doc["cost"] = sia::cost_to_json(result.cost);
  emit(doc, opt.out);
  return kOk;
}

int cmd_bounds(const Options& opt) {
  const auto inst = load_instance(opt.in);
  emit(sia::bounds_to_json(sia::compute_bounds(inst), inst), opt.out);
  return kOk;
}

int cmd_multiround(const Options& opt) {
  const auto inst = load_instance(opt.in);
  const auto kind = solver_kind(opt);
  if (opt.rounds < 1) throw UsageError("--rounds must be at least 1");

  if (opt.sweep_to) {
    if (*opt.sweep_to < opt.rounds) throw UsageError("--sweep-to must be at least --rounds");
    const auto points = sia::sweep_rounds(inst, kind, opt.rounds, *opt.sweep_to, opt.seed.value_or(0));
    std::ostringstream csv;
    sia::write_sweep_csv(csv, points);
    if (opt.out.empty()) {
      std::cout << csv.str();
    } else {
      std::ofstream out(opt.out, std::ios::binary);
      if (!out) throw UsageError("cannot write " + opt.out);
      out << csv.str();
    }
    return kOk;
  }

  const auto result = sia::solve_multi_round(inst, opt.rounds, kind, opt.seed.value_or(0), opt.node_budget);
  const auto schedule = sia::decompose_rounds(inst, result.allocation, opt.rounds);

  sia::OrderedJson doc;
  doc["solver"] = std::string(sia::to_string(kind));
  if (kind == sia::SolverKind::RandomShares) doc["seed"] = *opt.seed;
  if (kind == sia::SolverKind::Exact) doc["proven_optimal"] = result.proven_optimal;
  doc["rounds"] = opt.rounds;
  doc["x"] = sia::allocation_tensor_json(result.allocation);
  doc["cost"] = sia::cost_to_json(result.cost);
  sia::OrderedJson per_round = sia::OrderedJson::array();
  for (std::size_t r = 0; r < schedule.size(); ++r) {
    sia::OrderedJson entry;
    entry["round"] = r + 1;
    entry["x"] = sia::allocation_tensor_json(schedule[r]);
    per_round.push_back(std::move(entry));
  }
  doc["schedule"] = std::move(per_round);
  emit(doc, opt.out);
  return kOk;
}

int cmd_bench(const Options& opt) {
  const auto doc = sia::read_json_file(opt.scenario);
  sia::ScenarioConfig config;
  try {
    config = sia::scenario_from_json(doc);
  } catch (const sia::JsonSchemaError& e) {
    throw sia::JsonSchemaError(opt.scenario + ":" + e.pointer(), std::string(e.what()).substr(e.pointer().size() + 2));
  }
  if (opt.runs) {
    if (*opt.runs < 1) throw UsageError("--runs must be at least 1");
    config.runs = *opt.runs;
  }
  if (opt.seed) config.seed = *opt.seed;

  const auto stats = sia::run_monte_carlo(config);

  std::filesystem::create_directories(opt.out);
  const auto runs_path = (std::filesystem::path(opt.out) / "runs.csv").string();
  const auto summary_path = (std::filesystem::path(opt.out) / "summary.json").string();
  {
    std::ofstream out(runs_path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + runs_path);
    sia::write_runs_csv(out, stats);
  }
  emit(sia::summary_to_json(stats), summary_path);

  std::size_t failures = 0;
  for (const auto& g : stats.groups) failures += g.failures;
  std::cout << "scenario " << stats.scenario << ": " << stats.records.size() << " records, " << failures
            << " failures, " << stats.redraws << " redraws\n"
            << "wrote " << runs_path << "\n"
            << "wrote " << summary_path << "\n";
  return kOk;
}

int cmd_validate(const Options& opt) {
  if (opt.rounds < 1) throw UsageError("--rounds must be at least 1");
  const auto inst = load_instance(opt.in);
  const auto alloc_doc = sia::read_json_file(opt.alloc);
  sia::Allocation alloc;
  try {
    alloc = sia::allocation_from_json(alloc_doc, inst);
  } catch (const sia::JsonSchemaError& e) {
    throw sia::JsonSchemaError(opt.alloc + ":" + e.pointer(), std::string(e.what()).substr(e.pointer().size() + 2));
  }
  const auto report = sia::validate(inst, alloc, opt.rounds);
  auto doc = sia::report_to_json(report);
  if (report.ok()) doc["cost"] = sia::cost_to_json(sia::total_cost(inst, alloc));
  emit(doc, opt.out);
  return report.ok() ? kOk : kInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Service-to-interface assignment: exact and heuristic solvers"};
  app.require_subcommand(1);
  Options opt;

  auto* solve = app.add_subcommand("solve", "Solve a single-round instance");
  solve->add_option("--solver", opt.solver, "exact, rand or avg")->check(CLI::IsMember({"exact", "rand", "avg"}));
  solve->add_option("--in", opt.in, "Instance JSON")->required();
  solve->add_option("--seed", opt.seed, "Seed for the random heuristic");
  solve->add_option("--node-budget", opt.node_budget, "Node limit for the exact search");
  solve->add_option("--out", opt.out, "Write the result here instead of stdout");

  auto* bounds = app.add_subcommand("bounds", "Print r_min, r_max and the cheapest interface per resource");
  bounds->add_option("--in", opt.in, "Instance JSON")->required();
  bounds->add_option("--out", opt.out, "Write the result here instead of stdout");

  auto* multiround = app.add_subcommand("multiround", "Solve with capacity spread over several rounds");
  multiround->add_option("--in", opt.in, "Instance JSON")->required();
  multiround->add_option("--rounds", opt.rounds, "Number of rounds R")->required();
  multiround->add_option("--solver", opt.solver, "exact, rand or avg")->check(CLI::IsMember({"exact", "rand", "avg"}));
  multiround->add_option("--seed", opt.seed, "Seed for the random heuristic");
  multiround->add_option("--node-budget", opt.node_budget, "Node limit for the exact search");
  multiround->add_option("--sweep-to", opt.sweep_to, "Sweep R from --rounds up to this value and print CSV");
  multiround->add_option("--out", opt.out, "Write the result here instead of stdout");

  auto* bench = app.add_subcommand("bench", "Monte-Carlo study over a scenario file");
  bench->add_option("--scenario", opt.scenario, "Scenario JSON")->required();
  bench->add_option("--out", opt.out, "Output directory for runs.csv and summary.json")->required();
  bench->add_option("--runs", opt.runs, "Override the scenario's run count");
  bench->add_option("--seed", opt.seed, "Override the scenario's seed");

  auto* validate = app.add_subcommand("validate", "Check an allocation against an instance");
  validate->add_option("--in", opt.in, "Instance JSON")->required();
  validate->add_option("--alloc", opt.alloc, "Allocation JSON with field x")->required();
  validate->add_option("--rounds", opt.rounds, "Number of rounds R");
  validate->add_option("--out", opt.out, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (solve->parsed()) return cmd_solve(opt);
    if (bounds->parsed()) return cmd_bounds(opt);
    if (multiround->parsed()) return cmd_multiround(opt);
    if (bench->parsed()) return cmd_bench(opt);
    if (validate->parsed()) return cmd_validate(opt);
  } catch (const sia::InfeasibleError& e) {
    std::cerr << e.what() << "\n";
    return kInfeasible;
  } catch (const sia::CapacityExhaustedError& e) {
    std::cerr << "no allocation found: " << e.what() << "\n";
    return kInfeasible;
  } catch (const sia::BudgetExhaustedError& e) {
    std::cerr << "no allocation found: " << e.what() << "\n";
    return kInfeasible;
  } catch (const sia::JsonSchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}
