#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "platoon/cost.hpp"
#include "platoon/error.hpp"
#include "platoon/instance.hpp"
#include "platoon/solution.hpp"

namespace platoon {

inline constexpr double kTol = 1e-6;

namespace detail {

inline void require_shapes(std::span<const RoutePlan> routes, const Schedule& sched) {
  if (sched.trucks.size() != routes.size())
    throw MalformedSolution("schedule covers " + std::to_string(sched.trucks.size()) +
                            " trucks but there are " + std::to_string(routes.size()) +
                            " routes");
  for (std::size_t r = 0; r < routes.size(); ++r) {
    const RoutePlan& route = routes[r];
    const TruckTimes& tt = sched.trucks[r];
    const auto who = "truck " + std::to_string(route.truck);
    if (route.loads.size() != route.arc_count())
      throw MalformedSolution(who + ": one load per arc is required");
    if (tt.roles.size() != route.arc_count())
      throw MalformedSolution(who + ": one platoon role per arc is required");
    if (tt.arrival.size() != route.path.size() || tt.wait.size() != route.path.size())
      throw MalformedSolution(who + ": one arrival and wait per path node is required");
    for (const ArcRole& role : tt.roles) {
      if (role.role == Role::follower && role.leader == route.truck)
        throw MalformedSolution(who + ": a truck cannot follow itself");
    }
  }
}

}  // namespace detail

/// Dispatch plus energy of a complete solution, from first principles.
///
/// The energy of every arc traversal uses the load at the arc tail and the
/// recorded platoon role; nothing produced by the solver is trusted beyond
/// the routes, loads and roles themselves.
inline CostBreakdown evaluate_solution(const ProblemInstance& inst,
                                       std::span<const RoutePlan> routes,
                                       const Schedule& sched) {
  detail::require_shapes(routes, sched);
  const Parameters& p = inst.params();
  CostBreakdown out;
  for (std::size_t r = 0; r < routes.size(); ++r) {
    const RoutePlan& route = routes[r];
    if (!route.dispatched()) continue;
    out.dispatch += p.c1;
    for (std::size_t a = 0; a < route.arc_count(); ++a) {
      const NodeId u = route.path[a];
      const NodeId v = route.path[a + 1];
      const auto arc = inst.network().find_arc(u, v);
      if (!arc)
        throw MalformedSolution("truck " + std::to_string(route.truck) + " uses missing arc (" +
                                std::to_string(u) + "," + std::to_string(v) + ")");
      const Role role = sched.trucks[r].roles[a].role;
      const double cost = arc_energy(inst.network().arc(*arc).time, route.loads[a], role, p);
      out.energy += cost;
      out.ledger.push_back({route.truck, u, v, role, route.loads[a], cost});
    }
  }
  out.total = out.dispatch + p.c2 * out.energy;
  return out;
}

inline CostBreakdown evaluate_solution(const ProblemInstance& inst, const Solution& sol) {
  return evaluate_solution(inst, sol.routes, sol.schedule);
}

enum class ViolationKind {
  flow_conservation,   // path is not a depot-to-depot chain of network arcs
  single_serve,        // customer served zero or several times
  capacity,            // initial load differs from assigned demand or exceeds Q
  load_decrement,      // load does not drop by exactly the demand served
  role_exclusivity,    // inconsistent leader/follower roles
  platoon_size,        // more than L trucks in one platoon
  sync_departure,      // platoon members leave the arc tail at different times
  time_propagation,    // arrival != previous departure + travel time, or negative times
  time_window,         // served outside [t_ea, t_ld]
};

inline std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::flow_conservation: return "flow_conservation";
    case ViolationKind::single_serve: return "single_serve";
    case ViolationKind::capacity: return "capacity";
    case ViolationKind::load_decrement: return "load_decrement";
    case ViolationKind::role_exclusivity: return "role_exclusivity";
    case ViolationKind::platoon_size: return "platoon_size";
    case ViolationKind::sync_departure: return "sync_departure";
    case ViolationKind::time_propagation: return "time_propagation";
    case ViolationKind::time_window: return "time_window";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  TruckId truck = -1;
  NodeId node = -1;
  int position = -1;  // path position, -1 when not applicable
  std::string detail;
};

inline std::string describe(const Violation& v) {
  std::string s(to_string(v.kind));
  if (v.truck >= 0) s += " truck=" + std::to_string(v.truck);
  if (v.node >= 0) s += " node=" + std::to_string(v.node);
  if (v.position >= 0) s += " pos=" + std::to_string(v.position);
  if (!v.detail.empty()) s += ": " + v.detail;
  return s;
}

/// Every violated constraint family, with indices. Empty means feasible.
inline std::vector<Violation> check_feasibility(const ProblemInstance& inst,
                                                std::span<const RoutePlan> routes,
                                                const Schedule& sched) {
  std::vector<Violation> out;
  auto add = [&](ViolationKind k, TruckId t, NodeId n, int pos, std::string d) {
    out.push_back({k, t, n, pos, std::move(d)});
  };
  const Parameters& p = inst.params();
  const RoadNetwork& net = inst.network();

  if (sched.trucks.size() != routes.size()) {
    add(ViolationKind::flow_conservation, -1, -1, -1, "schedule and routes differ in size");
    return out;
  }

  std::map<NodeId, int> served;
  for (const auto& c : inst.customers()) served[c.node] = 0;

  // Departure lookup for platoon checks: (tail, head) -> occurrences.
  struct Occ {
    std::size_t route;
    std::size_t pos;
    double depart;
    ArcRole role;
  };
  std::map<std::pair<NodeId, NodeId>, std::vector<Occ>> by_arc;

  for (std::size_t r = 0; r < routes.size(); ++r) {
    const RoutePlan& route = routes[r];
    const TruckTimes& tt = sched.trucks[r];
    const TruckId k = route.truck;
    if (route.path.empty()) continue;

    bool shape_ok = true;
    if (route.loads.size() != route.arc_count() || tt.roles.size() != route.arc_count() ||
        tt.arrival.size() != route.path.size() || tt.wait.size() != route.path.size()) {
      add(ViolationKind::flow_conservation, k, -1, -1,
          "loads, roles or times do not match the path length");
      shape_ok = false;
    }
    if (route.path.front() != kDepot || route.path.back() != kDepot || route.path.size() < 2)
      add(ViolationKind::flow_conservation, k, -1, -1, "path must start and end at the depot");

    std::vector<double> arc_time(route.arc_count(), 0.0);
    for (std::size_t a = 0; a < route.arc_count(); ++a) {
      const auto arc = net.find_arc(route.path[a], route.path[a + 1]);
      if (!arc) {
        add(ViolationKind::flow_conservation, k, route.path[a], static_cast<int>(a),
            "no arc to node " + std::to_string(route.path[a + 1]));
        shape_ok = false;
      } else {
        arc_time[a] = net.arc(*arc).time;
      }
    }

    // Served customers and their positions.
    const std::size_t n_cust =
        route.customer_sequence.size() >= 2 ? route.customer_sequence.size() - 2 : 0;
    std::vector<double> drop(route.path.size(), 0.0);
    std::vector<NodeId> serve_node(route.path.size(), -1);
    double assigned = 0.0;
    if (route.serve_index.size() != n_cust) {
      add(ViolationKind::single_serve, k, -1, -1, "serve positions do not match the customer sequence");
    } else {
      std::size_t last = 0;
      for (std::size_t c = 0; c < n_cust; ++c) {
        const NodeId node = route.customer_sequence[c + 1];
        const std::size_t pos = route.serve_index[c];
        if (pos >= route.path.size() || route.path[pos] != node || (c > 0 && pos <= last) ||
            pos == 0) {
          add(ViolationKind::single_serve, k, node, static_cast<int>(pos),
              "customer is not visited at its recorded position");
          continue;
        }
        last = pos;
        if (!inst.is_customer(node)) {
          add(ViolationKind::single_serve, k, node, static_cast<int>(pos), "not a customer node");
          continue;
        }
        ++served[node];
        drop[pos] += inst.customer(node).q;
        serve_node[pos] = node;
        assigned += inst.customer(node).q;
      }
    }

    if (!shape_ok) continue;

    // Volume.
    if (std::abs(route.loads[0] - assigned) > kTol)
      add(ViolationKind::capacity, k, kDepot, 0,
          "initial load " + std::to_string(route.loads[0]) + " differs from assigned demand " +
              std::to_string(assigned));
    if (route.loads[0] > p.Q + kTol)
      add(ViolationKind::capacity, k, kDepot, 0, "initial load exceeds Q");
    for (std::size_t a = 1; a < route.arc_count(); ++a) {
      const double expect = route.loads[a - 1] - drop[a];
      if (std::abs(route.loads[a] - expect) > kTol || route.loads[a] < -kTol)
        add(ViolationKind::load_decrement, k, route.path[a], static_cast<int>(a),
            "load " + std::to_string(route.loads[a]) + ", expected " + std::to_string(expect));
    }

    // Time propagation and windows.
    for (std::size_t i = 0; i < route.path.size(); ++i) {
      if (tt.arrival[i] < -kTol || tt.wait[i] < -kTol)
        add(ViolationKind::time_propagation, k, route.path[i], static_cast<int>(i),
            "negative arrival or wait");
      if (i + 1 < route.path.size()) {
        const double expect = tt.arrival[i] + tt.wait[i] + arc_time[i];
        if (std::abs(tt.arrival[i + 1] - expect) > kTol)
          add(ViolationKind::time_propagation, k, route.path[i + 1], static_cast<int>(i + 1),
              "arrival " + std::to_string(tt.arrival[i + 1]) + ", expected " +
                  std::to_string(expect));
      }
      if (serve_node[i] >= 0) {
        const CustomerDemand& cd = inst.customer(serve_node[i]);
        if (tt.arrival[i] < cd.t_ea - kTol)
          add(ViolationKind::time_window, k, cd.node, static_cast<int>(i),
              "arrival " + std::to_string(tt.arrival[i]) + " before t_ea " + std::to_string(cd.t_ea));
        if (tt.arrival[i] + tt.wait[i] > cd.t_ld + kTol)
          add(ViolationKind::time_window, k, cd.node, static_cast<int>(i),
              "departure " + std::to_string(tt.arrival[i] + tt.wait[i]) + " after t_ld " +
                  std::to_string(cd.t_ld));
      }
    }

    for (std::size_t a = 0; a < route.arc_count(); ++a)
      by_arc[{route.path[a], route.path[a + 1]}].push_back({r, a, tt.departure(a), tt.roles[a]});
  }

  for (const auto& [node, count] : served) {
    if (count != 1)
      add(ViolationKind::single_serve, -1, node, -1,
          "served " + std::to_string(count) + " times");
  }

  // Platoon structure on each arc.
  for (const auto& [arc, occs] : by_arc) {
    std::vector<int> followers(occs.size(), 0);
    for (std::size_t i = 0; i < occs.size(); ++i) {
      const Occ& o = occs[i];
      const TruckId k = routes[o.route].truck;
      if (o.role.role != Role::follower) {
        if (o.role.role == Role::leader && o.role.leader >= 0 && o.role.leader != k)
          add(ViolationKind::role_exclusivity, k, arc.first, static_cast<int>(o.pos),
              "leader entry names another truck as leader");
        continue;
      }
      if (o.role.leader == k) {
        add(ViolationKind::role_exclusivity, k, arc.first, static_cast<int>(o.pos),
            "truck follows itself");
        continue;
      }
      std::size_t match = occs.size();
      bool leader_present = false;
      for (std::size_t j = 0; j < occs.size(); ++j) {
        if (routes[occs[j].route].truck != o.role.leader) continue;
        leader_present = true;
        if (occs[j].role.role == Role::leader && std::abs(occs[j].depart - o.depart) <= kTol) {
          match = j;
          break;
        }
      }
      if (match == occs.size()) {
        add(leader_present ? ViolationKind::sync_departure : ViolationKind::role_exclusivity, k,
            arc.first, static_cast<int>(o.pos),
            "no leading truck " + std::to_string(o.role.leader) +
                " departs with this follower on (" + std::to_string(arc.first) + "," +
                std::to_string(arc.second) + ")");
        continue;
      }
      ++followers[match];
    }
    for (std::size_t j = 0; j < occs.size(); ++j) {
      if (followers[j] + 1 > p.L)
        add(ViolationKind::platoon_size, routes[occs[j].route].truck, arc.first,
            static_cast<int>(occs[j].pos),
            "platoon of " + std::to_string(followers[j] + 1) + " exceeds L=" + std::to_string(p.L));
    }
  }
  return out;
}

inline std::vector<Violation> check_feasibility(const ProblemInstance& inst, const Solution& sol) {
  return check_feasibility(inst, sol.routes, sol.schedule);
}

/// Nodes that a truck's path enters more than once. Informational: shortest
/// path legs may legitimately cross the same junction twice.
struct Revisit {
  TruckId truck;
  NodeId node;
  int visits;
};

inline std::vector<Revisit> find_revisits(std::span<const RoutePlan> routes) {
  std::vector<Revisit> out;
  for (const RoutePlan& route : routes) {
    std::map<NodeId, int> seen;
    for (std::size_t i = 1; i < route.path.size(); ++i) ++seen[route.path[i]];
    for (const auto& [node, n] : seen)
      if (n > 1) out.push_back({route.truck, node, n});
  }
  return out;
}

}  // namespace platoon
