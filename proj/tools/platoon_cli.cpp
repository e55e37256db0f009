#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "platoon/bench.hpp"
#include "platoon/evaluate.hpp"
#include "platoon/generate.hpp"
#include "platoon/io.hpp"
#include "platoon/model.hpp"
#include "platoon/mps.hpp"
#include "platoon/orchestrator.hpp"

namespace {

using namespace platoon;

enum Exit { kOk = 0, kFailure = 1, kParse = 2, kInfeasible = 3, kViolations = 4 };

struct SolveArgs {
  std::string instance;
  std::string output;
  std::uint64_t seed = 1;
  double time_limit = 3600.0;
  std::optional<int> iterations;
  std::optional<int> platoon_size;
  std::string scheduler = "auto";
  bool compare = false;
};

void print_cost(const char* label, const CostBreakdown& c) {
  std::printf("%-22s %12.4f\n", label, c.total);
  std::printf("  %-20s %12.4f\n", "dispatch", c.dispatch);
  std::printf("  %-20s %12.4f\n", "energy", c.energy);
}

int run_solve(const SolveArgs& a) {
  const ProblemInstance inst = load_instance(a.instance);
  SolverConfig cfg;
  cfg.seed = a.seed;
  cfg.time_limit_s = a.time_limit;
  cfg.iteration_limit = a.iterations;
  cfg.platoon_size = a.platoon_size;
  cfg.scheduler = *scheduler_from_string(a.scheduler);

  Solution sol;
  std::optional<BenefitReport> report;
  if (a.compare) {
    report = platooning_benefit(inst, cfg);
    sol = report->with_platoons;
  } else {
    sol = solve(inst, cfg);
  }

  std::size_t trucks = 0;
  for (const RoutePlan& r : sol.routes) trucks += r.dispatched() ? 1 : 0;
  print_cost("total cost", sol.cost);
  std::printf("%-22s %12zu\n", "trucks", trucks);
  std::printf("%-22s %12d\n", "iterations", sol.stats.iterations);
  std::printf("%-22s %12.3f\n", "wall time [s]", sol.stats.elapsed_s);
  if (sol.stats.exact_fallback) std::printf("note: exact scheduling hit its node budget; greedy used\n");
  for (const Revisit& r : find_revisits(sol.routes))
    std::printf("note: truck %d passes node %d %d times\n", r.truck, r.node, r.visits);
  if (report) {
    print_cost("total without platoons", report->without_platoons.cost);
    std::printf("%-22s %12.4f (%.2f%%)\n", "platooning benefit", report->benefit, 100.0 * report->percent);
    std::printf("%-22s %12.4f (%.2f%%)\n", "energy benefit", report->energy_benefit,
                100.0 * report->energy_percent);
  }
  if (!a.output.empty()) write_text(a.output, dump(solution_to_json(sol, cfg)));
  return kOk;
}

int run_validate(const std::string& instance_path, const std::string& solution_path) {
  const ProblemInstance inst = load_instance(instance_path);
  const Solution sol = load_solution(solution_path);
  const auto violations = check_feasibility(inst, sol);
  const CostBreakdown cost = evaluate_solution(inst, sol);
  std::printf("%zu violations\n", violations.size());
  for (const Violation& v : violations) std::printf("  %s\n", describe(v).c_str());
  std::printf("%-10s %14s %14s\n", "", "claimed", "recomputed");
  bool mismatch = false;
  auto row = [&](const char* name, double claimed, double actual) {
    const bool bad = std::abs(claimed - actual) > kTol;
    mismatch = mismatch || bad;
    std::printf("%-10s %14.6f %14.6f%s\n", name, claimed, actual, bad ? "  MISMATCH" : "");
  };
  row("dispatch", sol.cost.dispatch, cost.dispatch);
  row("energy", sol.cost.energy, cost.energy);
  row("total", sol.cost.total, cost.total);
  if (!violations.empty()) return kViolations;
  if (mismatch) {
    std::printf("cost mismatch\n");
    return kViolations;
  }
  std::printf("costs match\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacitated vehicle routing with time windows and truck platooning"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance with the iterative heuristic");
  solve_cmd->add_option("instance", sa.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("-o,--output", sa.output, "Write the solution JSON here");
  solve_cmd->add_option("--seed", sa.seed, "Shuffle seed");
  solve_cmd->add_option("--time-limit", sa.time_limit, "Wall-clock limit in seconds")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--iterations", sa.iterations, "Iteration limit per seeding phase")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--platoon-size", sa.platoon_size, "Override the maximum platoon size L")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--scheduler", sa.scheduler, "exact, greedy or auto")
      ->check(CLI::IsMember({"exact", "greedy", "auto"}));
  solve_cmd->add_flag("--compare-no-platoon", sa.compare, "Also solve with L = 1 and report the benefit");

  GenerateOptions go;
  std::string network = "yangtze", gen_out;
  auto* gen_cmd = app.add_subcommand("generate", "Generate a random instance");
  gen_cmd->add_option("--network", network, "yangtze, grid or random")
      ->check(CLI::IsMember({"yangtze", "grid", "random"}));
  gen_cmd->add_option("--nodes", go.nodes, "Node count of a random network");
  gen_cmd->add_option("--customers", go.customers, "Number of customers");
  gen_cmd->add_option("--seed", go.seed, "Generator seed");
  gen_cmd->add_option("--tw-tolerance", go.tw_tolerance, "Minimum window span in hours");
  gen_cmd->add_option("-o,--output", gen_out, "Output file (default stdout)");

  std::string val_instance, val_solution;
  auto* val_cmd = app.add_subcommand("validate", "Check a solution against an instance");
  val_cmd->add_option("instance", val_instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  val_cmd->add_option("solution", val_solution, "Solution JSON")->required()->check(CLI::ExistingFile);

  std::string exp_instance, exp_out;
  std::optional<int> exp_trucks;
  bool exp_literal = false;
  auto* exp_cmd = app.add_subcommand("export", "Write the full MILP as fixed-format MPS");
  exp_cmd->add_option("instance", exp_instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  exp_cmd->add_option("-o,--output", exp_out, "MPS file")->required();
  exp_cmd->add_option("--trucks", exp_trucks, "Fleet size (default: customer count)")->check(CLI::PositiveNumber);
  exp_cmd->add_flag("--customer-loads-only", exp_literal,
                    "Track loads only on arcs into customers, without transit rows");

  std::string bench_spec, bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "Run a parameter sweep and print CSV");
  bench_cmd->add_option("spec", bench_spec, "Bench spec JSON")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("-o,--output", bench_out, "Output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return run_solve(sa);
    if (*gen_cmd) {
      go.network = *network_from_string(network);
      const std::string text = dump(generate_instance(go));
      if (gen_out.empty())
        std::cout << text;
      else
        write_text(gen_out, text);
      return kOk;
    }
    if (*val_cmd) return run_validate(val_instance, val_solution);
    if (*exp_cmd) {
      const ProblemInstance inst = load_instance(exp_instance);
      ModelOptions mo;
      mo.trucks = exp_trucks;
      mo.transit_loads = !exp_literal;
      const MilpModel m = build_full_model(inst, mo);
      export_mps(m, exp_out);
      std::printf("%zu variables, %zu rows written to %s\n", m.vars.size(), m.rows.size(), exp_out.c_str());
      return kOk;
    }
    if (*bench_cmd) {
      const BenchSpec spec = bench_spec_from_json(detail::parse_json(detail::read_file(bench_spec)));
      const std::string csv = bench_csv(run_bench(spec));
      if (bench_out.empty())
        std::cout << csv;
      else
        write_text(bench_out, csv);
      return kOk;
    }
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kParse;
  } catch (const InstanceInvalid& e) {
    std::fprintf(stderr, "invalid instance: %s\n", e.what());
    return kParse;
  } catch (const DisconnectedNetwork& e) {
    std::fprintf(stderr, "invalid instance: %s\n", e.what());
    return kParse;
  } catch (const NoFeasibleSolutionFound& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return kInfeasible;
  } catch (const DemandExceedsCapacity& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return kInfeasible;
  } catch (const MalformedSolution& e) {
    std::fprintf(stderr, "malformed solution: %s\n", e.what());
    return kViolations;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailure;
  }
  return kFailure;
}
