#pragma once

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "platoon/error.hpp"
#include "platoon/instance.hpp"
#include "platoon/network.hpp"
#include "platoon/solution.hpp"

namespace platoon {

/// Remaining load after departing each position of a closed tour
/// (0, c1, ..., cn, 0). Entry i is the load on leg i.
inline std::vector<double> compute_load_profile(std::span<const NodeId> sequence,
                                                const ProblemInstance& inst) {
  std::vector<double> legs;
  if (sequence.size() < 2) return legs;
  double load = 0.0;
  for (std::size_t i = 1; i + 1 < sequence.size(); ++i) load += inst.demand(sequence[i]);
  for (std::size_t i = 0; i + 1 < sequence.size(); ++i) {
    if (i > 0) load -= inst.demand(sequence[i]);
    legs.push_back(load);
  }
  legs.back() = 0.0;
  return legs;
}

/// Energy increase estimate for inserting r between tour positions j and h.
///
/// p_h is the load after departing h in the current tour. The leg entering
/// r is charged at p_h + q_r exactly as the construction rule is written.
inline double insertion_delta(NodeId j, NodeId r, NodeId h, double p_h,
                              const ProblemInstance& inst) {
  const Parameters& p = inst.params();
  const DistMatrix& d = inst.dist();
  const double q_r = inst.demand(r);
  return d(j, r) * (p.eta * p_h + p.eta * q_r + p.gamma) + d(r, h) * (p.eta * p_h + p.gamma) -
         d(j, h) * (p.eta * p_h + p.gamma);
}

/// Whether a truck driving the tour alone on shortest paths can serve every
/// customer inside its window. A truck may not arrive early; it waits at
/// an interior node of the leg, or at the previous stop when the leg is a
/// single arc, in which case that stop's deadline still binds.
inline bool tour_meets_windows(std::span<const NodeId> tour, const ProblemInstance& inst) {
  const DistMatrix& d = inst.dist();
  double t = 0.0;  // earliest departure from tour[i - 1]
  for (std::size_t i = 1; i + 1 < tour.size(); ++i) {
    const NodeId from = tour[i - 1], to = tour[i];
    const CustomerDemand& c = inst.customer(to);
    const double leg = d(from, to);
    if (from == kDepot || d.next_hop(from, to) != to) {
      t = std::max(t + leg, c.t_ea);
    } else {
      t = std::max(t, c.t_ea - leg);
      if (t > inst.customer(from).t_ld + 1e-9) return false;
      t += leg;
    }
    if (t > c.t_ld + 1e-9) return false;
  }
  return true;
}

/// Customer order for one truck by the weight-aware insertion heuristic.
///
/// Seed: smallest (eta Q + gamma - eta q_i) t_0i. Then repeatedly the
/// unrouted customer with smallest (eta Q + gamma - eta q_r - eta sum q_sub)
/// t_sub,r goes into the slot with the smallest insertion_delta among the
/// slots that keep tour_meets_windows true, or among all slots when none
/// does. Ties go to the smaller node id and the earlier slot. Returns
/// 0, c1, ..., cn, 0.
inline std::vector<NodeId> build_route(std::span<const NodeId> truck_customers,
                                       const ProblemInstance& inst) {
  const Parameters& p = inst.params();
  const DistMatrix& d = inst.dist();
  std::vector<NodeId> tour{kDepot};
  if (truck_customers.empty()) {
    tour.push_back(kDepot);
    return tour;
  }
  const double full = p.eta * p.Q + p.gamma;

  std::vector<NodeId> unrouted(truck_customers.begin(), truck_customers.end());
  auto take_best = [&](auto&& score) {
    std::size_t best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < unrouted.size(); ++i) {
      const double s = score(unrouted[i]);
      if (s < best_score || (s == best_score && unrouted[i] < unrouted[best])) {
        best_score = s;
        best = i;
      }
    }
    const NodeId n = unrouted[best];
    unrouted.erase(unrouted.begin() + static_cast<std::ptrdiff_t>(best));
    return n;
  };

  const NodeId seed =
      take_best([&](NodeId i) { return (full - p.eta * inst.demand(i)) * d(kDepot, i); });
  tour.push_back(seed);
  tour.push_back(kDepot);
  double routed_demand = inst.demand(seed);

  while (!unrouted.empty()) {
    const NodeId r = take_best([&](NodeId c) {
      double t_sub = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i + 1 < tour.size(); ++i) t_sub = std::min(t_sub, d(c, tour[i]));
      return (full - p.eta * inst.demand(c) - p.eta * routed_demand) * t_sub;
    });

    const std::vector<double> legs = compute_load_profile(tour, inst);
    // [0] over all slots, [1] over window-feasible slots.
    std::size_t best_slot[2] = {0, 0};
    double best_delta[2] = {std::numeric_limits<double>::infinity(),
                            std::numeric_limits<double>::infinity()};
    std::vector<NodeId> trial;
    for (std::size_t s = 0; s + 1 < tour.size(); ++s) {
      // Load after departing h = tour[s+1]: the load on the leg leaving it,
      // or zero when h is the closing depot.
      const double p_h = s + 1 < legs.size() ? legs[s + 1] : 0.0;
      const double delta = insertion_delta(tour[s], r, tour[s + 1], p_h, inst);
      trial = tour;
      trial.insert(trial.begin() + static_cast<std::ptrdiff_t>(s) + 1, r);
      const bool fits = tour_meets_windows(trial, inst);
      for (int k = 0; k < (fits ? 2 : 1); ++k)
        if (delta < best_delta[k]) {
          best_delta[k] = delta;
          best_slot[k] = s;
        }
    }
    const std::size_t slot = best_delta[1] < std::numeric_limits<double>::infinity() ? best_slot[1] : best_slot[0];
    tour.insert(tour.begin() + static_cast<std::ptrdiff_t>(slot) + 1, r);
    routed_demand += inst.demand(r);
  }
  return tour;
}

struct ExpandedPath {
  std::vector<NodeId> nodes;
  std::vector<std::size_t> serve_index;  // position of each interior sequence node
};

/// Concatenates minimum-cost paths under `costs` between consecutive
/// sequence nodes.
inline ExpandedPath expand_route(std::span<const NodeId> sequence, const ArcCosts& costs,
                                 const RoadNetwork& net) {
  ExpandedPath out;
  if (sequence.empty()) return out;
  out.nodes.push_back(sequence.front());
  for (std::size_t i = 0; i + 1 < sequence.size(); ++i) {
    const PathResult leg = shortest_path_under(net, costs, sequence[i], sequence[i + 1]);
    out.nodes.insert(out.nodes.end(), leg.nodes.begin() + 1, leg.nodes.end());
    if (i + 2 < sequence.size()) out.serve_index.push_back(out.nodes.size() - 1);
  }
  return out;
}

/// Full RoutePlan: expansion plus per-arc loads.
inline RoutePlan make_route_plan(TruckId truck, std::vector<NodeId> sequence,
                                 const ArcCosts& costs, const ProblemInstance& inst) {
  RoutePlan plan;
  plan.truck = truck;
  ExpandedPath path = expand_route(sequence, costs, inst.network());
  const std::vector<double> legs = compute_load_profile(sequence, inst);
  plan.loads.reserve(path.nodes.size());
  std::size_t leg = 0;
  for (std::size_t a = 0; a + 1 < path.nodes.size(); ++a) {
    while (leg < path.serve_index.size() && a >= path.serve_index[leg]) ++leg;
    plan.loads.push_back(legs[leg]);
  }
  plan.customer_sequence = std::move(sequence);
  plan.path = std::move(path.nodes);
  plan.serve_index = std::move(path.serve_index);
  return plan;
}

/// RoutePlan for an explicit node path. `served` lists the customers this
/// truck serves in service order; each is served at its first occurrence on
/// the path after the previous one.
inline RoutePlan route_from_path(TruckId truck, std::vector<NodeId> path,
                                 std::span<const NodeId> served, const ProblemInstance& inst) {
  RoutePlan plan;
  plan.truck = truck;
  plan.customer_sequence.push_back(kDepot);
  std::size_t from = 1;
  for (NodeId c : served) {
    std::size_t pos = from;
    while (pos + 1 < path.size() && path[pos] != c) ++pos;
    if (pos + 1 >= path.size())
      throw MalformedSolution("customer " + std::to_string(c) + " is not on the path of truck " +
                              std::to_string(truck));
    plan.serve_index.push_back(pos);
    plan.customer_sequence.push_back(c);
    from = pos + 1;
  }
  plan.customer_sequence.push_back(kDepot);
  const std::vector<double> legs = compute_load_profile(plan.customer_sequence, inst);
  std::size_t leg = 0;
  for (std::size_t a = 0; a + 1 < path.size(); ++a) {
    while (leg < plan.serve_index.size() && a >= plan.serve_index[leg]) ++leg;
    plan.loads.push_back(legs[leg]);
  }
  plan.path = std::move(path);
  return plan;
}

}  // namespace platoon
