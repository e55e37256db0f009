#pragma once

#include <atomic>
#include <cstdint>
#include <iomanip>
#include <locale>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "platoon/generate.hpp"
#include "platoon/io.hpp"
#include "platoon/orchestrator.hpp"

namespace platoon {

struct Sweep {
  std::string parameter;  // alpha, c1, L, Q, beta or tw_tolerance
  std::vector<double> values;
};

struct BenchSpec {
  NetworkKind network = NetworkKind::yangtze;
  int nodes = 38;
  std::vector<int> customers{10};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  double tw_tolerance = 20.0;
  Parameters params;
  SolverConfig solver;
  std::vector<Sweep> sweeps;
  int threads = 0;  // 0: hardware concurrency
};

struct BenchRow {
  std::string parameter;
  double value = 0.0;
  int customers = 0;
  double mean_cost = 0.0;
  double mean_cost_no_platoon = 0.0;
  double mean_benefit = 0.0;
  double mean_benefit_pct = 0.0;
  double mean_trucks = 0.0;
  int runs = 0;
  std::string status = "OK";
};

inline BenchSpec bench_spec_from_json(const Json& j) {
  using detail::integer;
  using detail::number;
  BenchSpec s;
  if (!j.is_object()) throw InstanceInvalid("bench: expected an object");
  if (j.contains("network")) {
    const auto kind = network_from_string(j["network"].is_string() ? j["network"].get<std::string>() : "");
    if (!kind) throw InstanceInvalid("network: expected yangtze, grid or random");
    s.network = *kind;
  }
  if (j.contains("nodes")) s.nodes = integer(j["nodes"], "nodes");
  if (j.contains("customers")) {
    s.customers.clear();
    const Json& c = j["customers"];
    if (c.is_array()) {
      for (std::size_t i = 0; i < c.size(); ++i) s.customers.push_back(integer(c[i], "customers[" + std::to_string(i) + "]"));
    } else {
      s.customers.push_back(integer(c, "customers"));
    }
  }
  if (j.contains("seeds")) {
    s.seeds.clear();
    if (!j["seeds"].is_array()) throw InstanceInvalid("seeds: expected a list");
    for (const Json& v : j["seeds"]) {
      if (!v.is_number_unsigned()) throw InstanceInvalid("seeds: expected non-negative integers");
      s.seeds.push_back(v.get<std::uint64_t>());
    }
  }
  if (j.contains("tw_tolerance")) s.tw_tolerance = number(j["tw_tolerance"], "tw_tolerance");
  if (j.contains("params")) s.params = params_from_json(j["params"]);
  if (j.contains("iterations")) s.solver.iteration_limit = integer(j["iterations"], "iterations");
  if (j.contains("time_limit_s")) s.solver.time_limit_s = number(j["time_limit_s"], "time_limit_s");
  if (j.contains("streak_limit")) s.solver.streak_limit = integer(j["streak_limit"], "streak_limit");
  if (j.contains("shuffle_limit")) s.solver.shuffle_limit = integer(j["shuffle_limit"], "shuffle_limit");
  if (j.contains("scheduler")) {
    const auto k = scheduler_from_string(j["scheduler"].is_string() ? j["scheduler"].get<std::string>() : "");
    if (!k) throw InstanceInvalid("scheduler: expected exact, greedy or auto");
    s.solver.scheduler = *k;
  }
  if (j.contains("threads")) s.threads = integer(j["threads"], "threads");
  if (j.contains("sweeps")) {
    const Json& sw = j["sweeps"];
    if (!sw.is_array()) throw InstanceInvalid("sweeps: expected a list");
    for (std::size_t i = 0; i < sw.size(); ++i) {
      const std::string where = "sweeps[" + std::to_string(i) + "]";
      Sweep x;
      const Json& name = detail::field(sw[i], "parameter", where);
      if (!name.is_string()) throw InstanceInvalid(where + ".parameter: expected a string");
      x.parameter = name.get<std::string>();
      static const char* known[] = {"alpha", "c1", "L", "Q", "beta", "tw_tolerance"};
      if (std::find(std::begin(known), std::end(known), x.parameter) == std::end(known))
        throw InstanceInvalid(where + ".parameter: unknown parameter " + x.parameter);
      const Json& values = detail::field(sw[i], "values", where);
      if (!values.is_array()) throw InstanceInvalid(where + ".values: expected a list");
      for (const Json& v : values) x.values.push_back(number(v, where + ".values"));
      s.sweeps.push_back(std::move(x));
    }
  }
  return s;
}

namespace detail {

struct BenchCell {
  std::string parameter;
  double value;
  int customers;
};

inline BenchRow run_cell(const BenchSpec& spec, const BenchCell& cell) {
  BenchRow row{cell.parameter, cell.value, cell.customers};
  Parameters p = spec.params;
  double tol = spec.tw_tolerance;
  if (cell.parameter == "alpha") p.alpha = cell.value;
  else if (cell.parameter == "c1") p.c1 = cell.value;
  else if (cell.parameter == "L") p.L = static_cast<int>(std::lround(cell.value));
  else if (cell.parameter == "Q") p.Q = cell.value;
  else if (cell.parameter == "beta") p.beta = cell.value;
  else if (cell.parameter == "tw_tolerance") tol = cell.value;

  int failures = 0;
  for (std::uint64_t seed : spec.seeds) {
    try {
      GenerateOptions g;
      g.network = spec.network;
      g.nodes = spec.nodes;
      g.customers = cell.customers;
      g.seed = seed;
      g.tw_tolerance = tol;
      g.params = p;
      const ProblemInstance inst = instance_from_json(generate_instance(g));
      SolverConfig cfg = spec.solver;
      cfg.seed = seed;
      const BenefitReport r = platooning_benefit(inst, cfg);
      row.mean_cost += r.cost_with;
      row.mean_cost_no_platoon += r.cost_without;
      row.mean_benefit += r.benefit;
      row.mean_benefit_pct += 100.0 * r.percent;
      std::size_t trucks = 0;
      for (const RoutePlan& rp : r.with_platoons.routes) trucks += rp.dispatched() ? 1 : 0;
      row.mean_trucks += static_cast<double>(trucks);
      ++row.runs;
    } catch (const Error&) {
      ++failures;
    }
  }
  if (row.runs > 0) {
    const double n = row.runs;
    row.mean_cost /= n;
    row.mean_cost_no_platoon /= n;
    row.mean_benefit /= n;
    row.mean_benefit_pct /= n;
    row.mean_trucks /= n;
  }
  if (failures > 0) row.status = "INFEASIBLE";
  return row;
}

}  // namespace detail

/// Runs every (sweep value, size) cell over all seeds, in parallel. Rows
/// come back in spec order.
inline std::vector<BenchRow> run_bench(const BenchSpec& spec) {
  std::vector<detail::BenchCell> cells;
  for (const Sweep& s : spec.sweeps)
    for (double v : s.values)
      for (int c : spec.customers) cells.push_back({s.parameter, v, c});
  std::vector<BenchRow> rows(cells.size());
  if (cells.empty()) return rows;

  unsigned workers = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(cells.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cells.size(); i = next++) rows[i] = detail::run_cell(spec, cells[i]);
    });
  for (auto& t : pool) t.join();
  return rows;
}

inline constexpr const char* kBenchHeader =
    "parameter,value,customers,mean_cost,mean_cost_no_platoon,mean_benefit,mean_benefit_pct,mean_trucks,runs,status";

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << kBenchHeader << "\n";
  for (const BenchRow& r : rows) {
    out << r.parameter << "," << std::setprecision(10) << r.value << "," << r.customers;
    out << std::fixed << std::setprecision(4);
    out << "," << r.mean_cost << "," << r.mean_cost_no_platoon << "," << r.mean_benefit << ","
        << r.mean_benefit_pct << "," << r.mean_trucks;
    out << std::defaultfloat << "," << r.runs << "," << r.status << "\n";
  }
  return out.str();
}

}  // namespace platoon
