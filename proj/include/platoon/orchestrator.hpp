#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "platoon/error.hpp"
#include "platoon/evaluate.hpp"
#include "platoon/grouping.hpp"
#include "platoon/instance.hpp"
#include "platoon/rng.hpp"
#include "platoon/routing.hpp"
#include "platoon/scheduling.hpp"
#include "platoon/solution.hpp"

namespace platoon {

struct SolverConfig {
  double time_limit_s = 3600.0;
  std::optional<int> iteration_limit;  // per seeding phase
  int streak_limit = 10;
  int shuffle_limit = 500;  // consecutive infeasible passes before a phase gives up
  std::uint64_t seed = 1;
  std::optional<int> platoon_size;  // overrides the instance's L
  SchedulerKind scheduler = SchedulerKind::automatic;
  ScheduleOptions schedule_options;
  bool corridor_seed = true;  // second phase seeded from shared corridors
};

/// Per-truck link costs for the next routing pass.
///
/// Own arcs cost t(1 + (m-1)(1-beta))/m for platoon size m (the largest m when
/// a truck traverses the arc more than once), arcs used only by other trucks
/// cost (1-beta)t, and everything else keeps t. Entry r belongs to routes[r].
inline std::vector<ArcCosts> update_link_costs(std::span<const RoutePlan> routes,
                                               const Schedule& sched,
                                               const ProblemInstance& inst) {
  const RoadNetwork& net = inst.network();
  const double beta = inst.params().beta;
  const auto sets = extract_platoon_sets(routes, sched);

  std::vector<std::map<ArcId, int>> own(routes.size());
  std::set<ArcId> used;
  for (std::size_t r = 0; r < routes.size(); ++r) {
    for (std::size_t a = 0; a < routes[r].arc_count(); ++a) {
      const ArcId id = *net.find_arc(routes[r].path[a], routes[r].path[a + 1]);
      int& m = own[r][id];
      m = std::max(m, sets[r][a]);
      used.insert(id);
    }
  }
  std::vector<ArcCosts> out;
  for (std::size_t r = 0; r < routes.size(); ++r) {
    ArcCosts c = net.travel_times();
    for (ArcId id : used) {
      const double t = net.arc(id).time;
      auto it = own[r].find(id);
      if (it == own[r].end()) {
        c[id] = (1.0 - beta) * t;
      } else {
        const int m = it->second;
        c[id] = t * (1.0 + (m - 1) * (1.0 - beta)) / m;
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

/// Costs for a truck that had no route in the previous pass: every arc in
/// use by someone else is discounted.
inline ArcCosts outsider_costs(std::span<const RoutePlan> routes, const ProblemInstance& inst) {
  const RoadNetwork& net = inst.network();
  ArcCosts c = net.travel_times();
  for (const RoutePlan& r : routes)
    for (std::size_t a = 0; a < r.arc_count(); ++a) {
      const ArcId id = *net.find_arc(r.path[a], r.path[a + 1]);
      c[id] = (1.0 - inst.params().beta) * net.arc(id).time;
    }
  return c;
}

/// Per-truck costs that discount every arc lying on a near-shortest path
/// (within a factor 1 + beta) of some other truck's customer-to-customer leg.
inline std::vector<ArcCosts> corridor_costs(std::span<const std::vector<NodeId>> sequences,
                                            const ProblemInstance& inst) {
  const RoadNetwork& net = inst.network();
  const DistMatrix& d = inst.dist();
  const double beta = inst.params().beta;

  std::vector<std::vector<bool>> on_corridor(sequences.size(),
                                             std::vector<bool>(net.arc_count(), false));
  for (std::size_t k = 0; k < sequences.size(); ++k) {
    const auto& seq = sequences[k];
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      const NodeId u = seq[i], v = seq[i + 1];
      const double limit = (1.0 + beta) * d(u, v) + 1e-9;
      for (ArcId a = 0; a < static_cast<ArcId>(net.arc_count()); ++a) {
        const Arc& arc = net.arc(a);
        if (d(u, arc.tail) + arc.time + d(arc.head, v) <= limit) on_corridor[k][a] = true;
      }
    }
  }
  std::vector<ArcCosts> out;
  for (std::size_t k = 0; k < sequences.size(); ++k) {
    ArcCosts c = net.travel_times();
    for (ArcId a = 0; a < static_cast<ArcId>(net.arc_count()); ++a) {
      for (std::size_t other = 0; other < sequences.size(); ++other) {
        if (other != k && on_corridor[other][a]) {
          c[a] = (1.0 - beta) * net.arc(a).time;
          break;
        }
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

namespace detail {

struct Pass {
  std::vector<std::vector<NodeId>> sequences;
  std::vector<RoutePlan> routes;
};

inline Pass route_pass(std::span<const NodeId> order, const std::vector<ArcCosts>& costs,
                       const ArcCosts& fallback, const ProblemInstance& inst) {
  Pass p;
  const TruckAssignment trucks = assign_trucks(order, inst);
  for (std::size_t k = 0; k < trucks.size(); ++k) {
    std::vector<NodeId> seq = build_route(trucks[k].customers, inst);
    const ArcCosts& c = k < costs.size() ? costs[k] : fallback;
    p.routes.push_back(make_route_plan(static_cast<TruckId>(k), seq, c, inst));
    p.sequences.push_back(std::move(seq));
  }
  return p;
}

inline std::vector<std::vector<NodeId>> sequences_for(std::span<const NodeId> order,
                                                      const ProblemInstance& inst) {
  std::vector<std::vector<NodeId>> out;
  for (const TruckLoad& t : assign_trucks(order, inst)) out.push_back(build_route(t.customers, inst));
  return out;
}

inline std::set<std::pair<NodeId, NodeId>> arc_union(std::span<const RoutePlan> routes) {
  std::set<std::pair<NodeId, NodeId>> u;
  for (const RoutePlan& r : routes)
    for (std::size_t a = 0; a < r.arc_count(); ++a) u.emplace(r.path[a], r.path[a + 1]);
  return u;
}

}  // namespace detail

/// Iterative route-then-schedule heuristic.
///
/// Each pass groups customers, loads trucks, builds and expands routes under
/// per-truck link costs, then schedules platoons. A feasible pass feeds its
/// platoons back through update_link_costs; an infeasible one shuffles the
/// customer order and restarts from the phase's seed costs. A phase ends when
/// the link costs reach a fixed point or repeat an earlier state, when the arc
/// union stays unchanged for streak_limit passes, after shuffle_limit
/// infeasible passes in a row, or when the iteration or time budget runs out.
///
/// The first phase seeds with travel times. When platooning can pay off a
/// second phase seeds with corridor_costs, and the better incumbent wins.
inline Solution solve(const ProblemInstance& base_inst, const SolverConfig& config = {}) {
  Parameters params = base_inst.params();
  if (config.platoon_size) params.L = *config.platoon_size;
  const ProblemInstance inst = base_inst.with_params(params);
  const RoadNetwork& net = inst.network();
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  Rng rng(config.seed);
  std::optional<Solution> best;
  SolveStats stats;

  enum class Seed { travel_times, corridor };
  auto seed_costs = [&](Seed s, std::span<const NodeId> order) {
    if (s == Seed::travel_times) return std::vector<ArcCosts>{};
    const auto seqs = detail::sequences_for(order, inst);
    return corridor_costs(seqs, inst);
  };

  auto run_phase = [&](Seed seed) {
    std::vector<NodeId> order = inst.customer_nodes();
    std::vector<ArcCosts> costs = seed_costs(seed, order);
    ArcCosts fallback = net.travel_times();
    std::set<std::pair<NodeId, NodeId>> last_union;
    // Cost states seen since the last reset; a repeat means the passes cycle.
    std::set<std::pair<std::vector<ArcCosts>, ArcCosts>> seen;
    int streak = 0;
    int iterations = 0;
    int infeasible_run = 0;
    while (true) {
      if (config.iteration_limit && iterations >= *config.iteration_limit) break;
      if (elapsed() >= config.time_limit_s && (best || iterations > 0)) break;
      ++iterations;
      ++stats.iterations;

      detail::Pass pass = detail::route_pass(order, costs, fallback, inst);
      ScheduleOutcome outcome =
          schedule_routes(config.scheduler, pass.routes, inst, config.schedule_options);
      if (outcome.feasible() && !check_feasibility(inst, pass.routes, *outcome.schedule).empty()) {
        outcome.infeasibility = "schedule failed verification";
        outcome.schedule.reset();
      }
      if (!outcome.feasible()) {
        stats.last_infeasibility = outcome.infeasibility;
        ++stats.shuffles;
        rng.shuffle(std::span<NodeId>(order));
        costs = seed_costs(seed, order);
        fallback = net.travel_times();
        last_union.clear();
        seen.clear();
        streak = 0;
        stats.incumbent_history.push_back(best ? best->cost.total : kInf);
        if (++infeasible_run >= config.shuffle_limit) break;
        continue;
      }
      infeasible_run = 0;
      ++stats.feasible_iterations;
      stats.exact_fallback = stats.exact_fallback || outcome.schedule->exact_fallback;

      CostBreakdown cost = evaluate_solution(inst, pass.routes, *outcome.schedule);
      if (!best || cost.total < best->cost.total - 1e-9) {
        best = Solution{pass.routes, *outcome.schedule, std::move(cost), config.seed, {}};
      }
      stats.incumbent_history.push_back(best->cost.total);

      auto uni = detail::arc_union(pass.routes);
      streak = uni == last_union ? streak + 1 : 0;
      last_union = std::move(uni);

      std::vector<ArcCosts> next = update_link_costs(pass.routes, *outcome.schedule, inst);
      ArcCosts next_fallback = outsider_costs(pass.routes, inst);
      const bool fixed_point = !costs.empty() && next == costs && next_fallback == fallback;
      const bool cycle = !seen.emplace(next, next_fallback).second;
      costs = std::move(next);
      fallback = std::move(next_fallback);
      if (fixed_point || cycle || streak >= config.streak_limit) break;
    }
  };

  run_phase(Seed::travel_times);
  if (config.corridor_seed && params.L > 1 && params.beta > 0.0 &&
      !(config.iteration_limit && *config.iteration_limit <= 0)) {
    const auto seqs = detail::sequences_for(inst.customer_nodes(), inst);
    const auto corridor = corridor_costs(seqs, inst);
    bool differs = false;
    for (const ArcCosts& c : corridor) differs = differs || c != net.travel_times();
    if (differs && elapsed() < config.time_limit_s) run_phase(Seed::corridor);
  }

  stats.elapsed_s = elapsed();
  if (!best)
    throw NoFeasibleSolutionFound("no feasible solution found" +
                                  (stats.last_infeasibility.empty()
                                       ? std::string()
                                       : ": " + stats.last_infeasibility));
  best->stats = std::move(stats);
  return *best;
}

struct BenefitReport {
  Solution with_platoons;
  Solution without_platoons;
  double cost_with = 0.0;
  double cost_without = 0.0;
  double benefit = 0.0;
  double percent = 0.0;  // fraction of cost_without
  double energy_benefit = 0.0;
  double energy_percent = 0.0;  // fraction of the L=1 energy
};

/// Solves at the configured platoon size and at size 1 with the same seed.
inline BenefitReport platooning_benefit(const ProblemInstance& inst, const SolverConfig& config = {}) {
  BenefitReport r;
  r.with_platoons = solve(inst, config);
  SolverConfig alone = config;
  alone.platoon_size = 1;
  r.without_platoons = solve(inst, alone);
  r.cost_with = r.with_platoons.cost.total;
  r.cost_without = r.without_platoons.cost.total;
  r.benefit = r.cost_without - r.cost_with;
  r.percent = r.cost_without > 0.0 ? r.benefit / r.cost_without : 0.0;
  const double e_with = r.with_platoons.cost.energy, e_without = r.without_platoons.cost.energy;
  r.energy_benefit = e_without - e_with;
  r.energy_percent = e_without > 0.0 ? r.energy_benefit / e_without : 0.0;
  return r;
}

}  // namespace platoon
