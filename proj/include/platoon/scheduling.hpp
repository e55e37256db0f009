#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "platoon/cost.hpp"
#include "platoon/error.hpp"
#include "platoon/evaluate.hpp"
#include "platoon/instance.hpp"
#include "platoon/solution.hpp"

namespace platoon {

enum class SchedulerKind { exact, greedy, automatic };

struct ScheduleOptions {
  std::size_t node_budget = 1'000'000;  // branch-and-bound nodes before falling back
  int max_exact_trucks = 4;             // trucks that share at least one arc
  int max_exact_shared_arcs = 12;
};

/// Result of a scheduling call: a schedule, or the reason none exists.
struct ScheduleOutcome {
  std::optional<Schedule> schedule;
  std::string infeasibility;

  bool feasible() const { return schedule.has_value(); }
};

namespace detail {

/// Simple temporal network over departure times with all-pairs distances
/// kept closed under incremental constraint addition.
///
/// An edge u -> v of weight w encodes x_v - x_u <= w. Node 0 is time zero.
class TemporalNetwork {
 public:
  explicit TemporalNetwork(int n) : n_(n), d_(static_cast<std::size_t>(n) * n, kInf) {
    for (int i = 0; i < n; ++i) at(i, i) = 0.0;
  }

  int size() const { return n_; }

  /// Adds an edge without re-closing; call close() afterwards.
  void add_raw(int u, int v, double w) { at(u, v) = std::min(at(u, v), w); }

  /// Floyd-Warshall closure. Returns false on a negative cycle.
  bool close() {
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i) {
        const double dik = at(i, k);
        if (dik == kInf) continue;
        for (int j = 0; j < n_; ++j) {
          const double via = dik + at(k, j);
          if (via < at(i, j)) at(i, j) = via;
        }
      }
    for (int i = 0; i < n_; ++i)
      if (at(i, i) < -kEps) return false;
    return true;
  }

  /// Adds x_v - x_u <= w and restores closure. Leaves the network untouched
  /// and returns false when the constraint would be inconsistent.
  bool add(int u, int v, double w) {
    if (w + at(v, u) < -kEps) return false;
    if (w >= at(u, v)) return true;
    for (int i = 0; i < n_; ++i) {
      const double diu = at(i, u);
      if (diu == kInf) continue;
      for (int j = 0; j < n_; ++j) {
        const double via = diu + w + at(v, j);
        if (via < at(i, j)) at(i, j) = via;
      }
    }
    return true;
  }

  /// x_a == x_b. On failure the network may be partially updated, so callers
  /// work on a copy.
  bool equate(int a, int b) { return add(a, b, 0.0) && add(b, a, 0.0); }

  double earliest(int v) const { return 0.0 - at(v, 0); }  // never -0.0
  double latest(int v) const { return at(0, v); }

 private:
  static constexpr double kEps = 1e-9;
  double& at(int i, int j) { return d_[static_cast<std::size_t>(i) * n_ + j]; }
  double at(int i, int j) const { return d_[static_cast<std::size_t>(i) * n_ + j]; }

  int n_;
  std::vector<double> d_;
};

struct Occurrence {
  std::size_t route;
  std::size_t pos;  // arc position on the route
  TruckId truck;
  double load;
  int var;  // STN node of the departure at the arc tail
};

struct SharedArc {
  ArcId arc;
  double time;
  std::vector<Occurrence> occs;
};

/// Departure variables, base constraints and shared arcs of a route set.
struct SchedulingProblem {
  std::vector<int> offset;  // first STN node per route
  int nodes = 1;
  std::vector<std::vector<double>> arc_time;  // per route, per arc
  std::vector<SharedArc> shared;

  int var(std::size_t route, std::size_t pos) const {
    return offset[route] + static_cast<int>(pos);
  }
};

inline SchedulingProblem build_problem(std::span<const RoutePlan> routes,
                                       const ProblemInstance& inst) {
  SchedulingProblem sp;
  const RoadNetwork& net = inst.network();
  std::map<ArcId, std::vector<Occurrence>> occs;
  for (std::size_t r = 0; r < routes.size(); ++r) {
    const RoutePlan& route = routes[r];
    sp.offset.push_back(sp.nodes);
    sp.nodes += static_cast<int>(route.arc_count());
    std::vector<double> times;
    for (std::size_t a = 0; a < route.arc_count(); ++a) {
      const auto arc = net.find_arc(route.path[a], route.path[a + 1]);
      if (!arc)
        throw MalformedSolution("route of truck " + std::to_string(route.truck) +
                                " uses a missing arc");
      times.push_back(net.arc(*arc).time);
      occs[*arc].push_back({r, a, route.truck, route.loads.at(a), sp.offset[r] + static_cast<int>(a)});
    }
    sp.arc_time.push_back(std::move(times));
  }
  for (auto& [arc, list] : occs) {
    std::set<TruckId> trucks;
    for (const auto& o : list) trucks.insert(o.truck);
    if (trucks.size() >= 2) sp.shared.push_back({arc, net.arc(arc).time, std::move(list)});
  }
  return sp;
}

inline TemporalNetwork base_network(const SchedulingProblem& sp, std::span<const RoutePlan> routes,
                                    const ProblemInstance& inst) {
  TemporalNetwork stn(sp.nodes);
  for (std::size_t r = 0; r < routes.size(); ++r) {
    const RoutePlan& route = routes[r];
    const std::size_t m = route.arc_count();
    if (m == 0) continue;
    stn.add_raw(sp.var(r, 0), 0, 0.0);  // depart at or after time zero
    for (std::size_t a = 1; a < m; ++a)
      stn.add_raw(sp.var(r, a), sp.var(r, a - 1), -sp.arc_time[r][a - 1]);
    for (std::size_t c = 0; c < route.serve_index.size(); ++c) {
      const std::size_t pos = route.serve_index[c];
      const CustomerDemand& cd = inst.customer(route.path[pos]);
      // Arrival d_{pos-1} + t >= t_ea and departure d_pos <= t_ld.
      stn.add_raw(sp.var(r, pos - 1), 0, sp.arc_time[r][pos - 1] - cd.t_ea);
      if (pos < m) stn.add_raw(0, sp.var(r, pos), cd.t_ld);
    }
  }
  return stn;
}

/// Index of the lightest member (ties: smaller truck id); it leads.
inline std::size_t leader_of(const std::vector<Occurrence>& occs, const std::vector<int>& block) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < block.size(); ++i) {
    const Occurrence& a = occs[block[i]];
    const Occurrence& b = occs[block[best]];
    if (a.load < b.load || (a.load == b.load && a.truck < b.truck)) best = i;
  }
  return best;
}

inline double block_saving(const SharedArc& arc, const std::vector<int>& block, const Parameters& p) {
  if (block.size() < 2) return 0.0;
  const std::size_t lead = leader_of(arc.occs, block);
  double s = 0.0;
  for (std::size_t i = 0; i < block.size(); ++i)
    if (i != lead) s += p.beta * arc_energy(arc.time, arc.occs[block[i]].load, Role::alone, p);
  return s;
}

struct ArcOption {
  std::vector<std::vector<int>> blocks;  // only blocks with >= 2 members
  double saving = 0.0;
};

/// All valid platoon partitions of an arc's occurrences, best saving first.
inline std::vector<ArcOption> arc_options(const SharedArc& arc, const Parameters& p) {
  const std::size_t n = arc.occs.size();
  std::vector<ArcOption> out;
  std::vector<int> label(n, 0);
  // Restricted growth strings enumerate each set partition once.
  auto emit = [&] {
    const int k = *std::max_element(label.begin(), label.end()) + 1;
    std::vector<std::vector<int>> blocks(k);
    for (std::size_t i = 0; i < n; ++i) blocks[label[i]].push_back(static_cast<int>(i));
    ArcOption opt;
    for (auto& b : blocks) {
      if (static_cast<int>(b.size()) > p.L) return;
      std::set<TruckId> t;
      for (int i : b) t.insert(arc.occs[i].truck);
      if (t.size() != b.size()) return;
      if (b.size() >= 2) {
        opt.saving += block_saving(arc, b, p);
        opt.blocks.push_back(b);
      }
    }
    out.push_back(std::move(opt));
  };
  auto rec = [&](auto&& self, std::size_t i, int max_label) -> void {
    if (i == n) {
      emit();
      return;
    }
    for (int l = 0; l <= max_label + 1; ++l) {
      label[i] = l;
      self(self, i + 1, std::max(max_label, l));
    }
  };
  if (n == 0) return out;
  label[0] = 0;
  rec(rec, 1, 0);
  std::stable_sort(out.begin(), out.end(),
                   [](const ArcOption& a, const ArcOption& b) { return a.saving > b.saving; });
  return out;
}

inline bool apply_option(TemporalNetwork& stn, const SharedArc& arc, const ArcOption& opt) {
  for (const auto& block : opt.blocks)
    for (std::size_t i = 1; i < block.size(); ++i)
      if (!stn.equate(arc.occs[block[0]].var, arc.occs[block[i]].var)) return false;
  return true;
}

/// Earliest timetable consistent with `stn`, with roles from the chosen blocks.
inline Schedule materialize(const SchedulingProblem& sp, const TemporalNetwork& stn,
                            std::span<const RoutePlan> routes,
                            const std::vector<ArcOption>& chosen, const ProblemInstance& inst) {
  Schedule s;
  for (std::size_t r = 0; r < routes.size(); ++r) {
    const RoutePlan& route = routes[r];
    TruckTimes tt;
    const std::size_t m = route.arc_count();
    tt.arrival.assign(route.path.size(), 0.0);
    tt.wait.assign(route.path.size(), 0.0);
    tt.roles.assign(m, ArcRole{Role::alone, route.truck});
    for (std::size_t a = 0; a < m; ++a) {
      const double dep = std::max(stn.earliest(sp.var(r, a)), tt.arrival[a]);
      tt.wait[a] = dep - tt.arrival[a];
      tt.arrival[a + 1] = dep + sp.arc_time[r][a];
    }
    s.trucks.push_back(std::move(tt));
  }
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const SharedArc& arc = sp.shared[i];
    for (const auto& block : chosen[i].blocks) {
      const std::size_t lead = leader_of(arc.occs, block);
      const TruckId leader = arc.occs[block[lead]].truck;
      for (std::size_t b = 0; b < block.size(); ++b) {
        const Occurrence& o = arc.occs[block[b]];
        s.trucks[o.route].roles[o.pos] =
            b == lead ? ArcRole{Role::leader, leader} : ArcRole{Role::follower, leader};
      }
    }
  }
  double energy = 0.0;
  const Parameters& p = inst.params();
  for (std::size_t r = 0; r < routes.size(); ++r)
    for (std::size_t a = 0; a < routes[r].arc_count(); ++a)
      energy += arc_energy(sp.arc_time[r][a], routes[r].loads[a], s.trucks[r].roles[a].role, p);
  s.energy = energy;
  return s;
}

inline std::string infeasibility_reason(std::span<const RoutePlan> routes, const ProblemInstance& inst) {
  // Locate the first truck whose own windows are unmeetable.
  for (std::size_t r = 0; r < routes.size(); ++r) {
    std::vector<RoutePlan> one{routes[r]};
    SchedulingProblem sp = build_problem(one, inst);
    TemporalNetwork stn = base_network(sp, one, inst);
    if (!stn.close())
      return "truck " + std::to_string(routes[r].truck) +
             " cannot meet its customers' time windows on its route";
  }
  return "time windows cannot be met";
}

}  // namespace detail

/// Greedy platoon formation; same contract as schedule_exact without the
/// optimality guarantee.
inline ScheduleOutcome schedule_greedy(std::span<const RoutePlan> routes, const ProblemInstance& inst) {
  using namespace detail;
  const Parameters& p = inst.params();
  SchedulingProblem sp = build_problem(routes, inst);
  TemporalNetwork stn = base_network(sp, routes, inst);
  if (!stn.close()) return {std::nullopt, infeasibility_reason(routes, inst)};

  std::vector<ArcOption> chosen(sp.shared.size());
  if (p.beta > 0.0 && p.L > 1) {
    std::vector<std::size_t> order(sp.shared.size());
    std::vector<double> first_dep(sp.shared.size(), kInf);
    for (std::size_t i = 0; i < sp.shared.size(); ++i) {
      order[i] = i;
      for (const auto& o : sp.shared[i].occs) first_dep[i] = std::min(first_dep[i], stn.earliest(o.var));
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return first_dep[a] < first_dep[b]; });

    for (std::size_t i : order) {
      const SharedArc& arc = sp.shared[i];
      std::vector<int> idx(arc.occs.size());
      for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = static_cast<int>(k);
      std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        const double ea = stn.earliest(arc.occs[a].var), eb = stn.earliest(arc.occs[b].var);
        return ea < eb || (ea == eb && arc.occs[a].truck < arc.occs[b].truck);
      });
      std::vector<std::vector<int>> blocks;
      for (int o : idx) {
        bool placed = false;
        const Occurrence& occ = arc.occs[o];
        for (auto& block : blocks) {
          if (static_cast<int>(block.size()) >= p.L) continue;
          bool clash = false;
          double lo = stn.earliest(occ.var), hi = stn.latest(occ.var);
          for (int m : block) {
            clash = clash || arc.occs[m].truck == occ.truck;
            lo = std::max(lo, stn.earliest(arc.occs[m].var));
            hi = std::min(hi, stn.latest(arc.occs[m].var));
          }
          if (clash || lo > hi + 1e-9) continue;
          TemporalNetwork trial = stn;
          if (trial.equate(arc.occs[block.front()].var, occ.var)) {
            stn = std::move(trial);
            block.push_back(o);
            placed = true;
            break;
          }
        }
        if (!placed) blocks.push_back({o});
      }
      for (auto& block : blocks) {
        if (block.size() < 2) continue;
        chosen[i].saving += block_saving(arc, block, p);
        chosen[i].blocks.push_back(std::move(block));
      }
    }
  }
  return {materialize(sp, stn, routes, chosen, inst), {}};
}

/// Optimal platoon formation on fixed routes by branch and bound over the
/// partition of each shared arc's traversals, with temporal-consistency
/// pruning. Falls back to the greedy schedule (flagged) when the node budget
/// runs out.
inline ScheduleOutcome schedule_exact(std::span<const RoutePlan> routes, const ProblemInstance& inst,
                                      const ScheduleOptions& opts = {}) {
  using namespace detail;
  const Parameters& p = inst.params();
  SchedulingProblem sp = build_problem(routes, inst);

  std::set<TruckId> sharing;
  for (const auto& arc : sp.shared)
    for (const auto& o : arc.occs) sharing.insert(o.truck);
  if (static_cast<int>(sp.shared.size()) > opts.max_exact_shared_arcs ||
      static_cast<int>(sharing.size()) > opts.max_exact_trucks)
    throw SizeLimitExceeded("exact scheduling supports at most " +
                            std::to_string(opts.max_exact_trucks) + " sharing trucks and " +
                            std::to_string(opts.max_exact_shared_arcs) + " shared arcs (got " +
                            std::to_string(sharing.size()) + " and " +
                            std::to_string(sp.shared.size()) + ")");

  TemporalNetwork base = base_network(sp, routes, inst);
  if (!base.close()) return {std::nullopt, infeasibility_reason(routes, inst)};

  const std::size_t n = sp.shared.size();
  std::vector<std::vector<ArcOption>> options(n);
  std::vector<double> suffix(n + 1, 0.0);
  if (p.beta > 0.0 && p.L > 1) {
    for (std::size_t i = 0; i < n; ++i) options[i] = arc_options(sp.shared[i], p);
  } else {
    for (std::size_t i = 0; i < n; ++i) options[i] = {ArcOption{}};
  }
  for (std::size_t i = n; i > 0; --i) suffix[i - 1] = suffix[i] + options[i - 1].front().saving;

  std::vector<ArcOption> current(n), best_choice(n);
  double best = 0.0;
  TemporalNetwork best_stn = base;
  std::size_t nodes = 0;
  bool exhausted = false;

  auto dfs = [&](auto&& self, std::size_t i, const TemporalNetwork& stn, double saving) -> void {
    if (exhausted) return;
    if (++nodes > opts.node_budget) {
      exhausted = true;
      return;
    }
    if (saving + suffix[i] <= best + 1e-12) return;
    if (i == n) {
      best = saving;
      best_choice = current;
      best_stn = stn;
      return;
    }
    for (const ArcOption& opt : options[i]) {
      if (saving + opt.saving + suffix[i + 1] <= best + 1e-12) break;  // options sorted
      TemporalNetwork next = stn;
      if (!apply_option(next, sp.shared[i], opt)) continue;
      current[i] = opt;
      self(self, i + 1, next, saving + opt.saving);
      if (exhausted) return;
    }
  };
  dfs(dfs, 0, base, 0.0);

  if (exhausted) {
    ScheduleOutcome g = schedule_greedy(routes, inst);
    if (g.schedule) g.schedule->exact_fallback = true;
    return g;
  }
  return {materialize(sp, best_stn, routes, best_choice, inst), {}};
}

/// Dispatches on the scheduler kind; `automatic` runs the exact search when
/// the route set is within its size limits.
inline ScheduleOutcome schedule_routes(SchedulerKind kind, std::span<const RoutePlan> routes,
                                       const ProblemInstance& inst, const ScheduleOptions& opts = {}) {
  switch (kind) {
    case SchedulerKind::exact: return schedule_exact(routes, inst, opts);
    case SchedulerKind::greedy: return schedule_greedy(routes, inst);
    case SchedulerKind::automatic:
      try {
        return schedule_exact(routes, inst, opts);
      } catch (const SizeLimitExceeded&) {
        return schedule_greedy(routes, inst);
      }
  }
  return schedule_greedy(routes, inst);
}

/// Platoon cardinality |P| of every truck on every arc of its route
/// (1 when travelling alone).
inline std::vector<std::vector<int>> extract_platoon_sets(std::span<const RoutePlan> routes,
                                                          const Schedule& sched) {
  struct Key {
    NodeId tail, head;
    TruckId leader;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, std::vector<double>> departures;
  auto key_of = [&](std::size_t r, std::size_t a) {
    const ArcRole& role = sched.trucks[r].roles[a];
    const TruckId lead = role.role == Role::alone ? -1 - routes[r].truck : role.leader;
    return Key{routes[r].path[a], routes[r].path[a + 1], lead};
  };
  for (std::size_t r = 0; r < routes.size(); ++r)
    for (std::size_t a = 0; a < routes[r].arc_count(); ++a)
      departures[key_of(r, a)].push_back(sched.trucks[r].departure(a));

  std::vector<std::vector<int>> out(routes.size());
  for (std::size_t r = 0; r < routes.size(); ++r) {
    for (std::size_t a = 0; a < routes[r].arc_count(); ++a) {
      if (sched.trucks[r].roles[a].role == Role::alone) {
        out[r].push_back(1);
        continue;
      }
      const double dep = sched.trucks[r].departure(a);
      int count = 0;
      for (double d : departures[key_of(r, a)])
        if (std::abs(d - dep) <= kTol) ++count;
      out[r].push_back(count);
    }
  }
  return out;
}

}  // namespace platoon
