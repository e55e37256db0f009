#pragma once

#include <vector>

#include "platoon/evaluate.hpp"
#include "platoon/networks.hpp"
#include "platoon/routing.hpp"

namespace fixtures {

using namespace platoon;

/// Times for a truck that never waits, every arc driven alone.
inline TruckTimes drive_through(const RoutePlan& r, const RoadNetwork& net, double start = 0.0) {
  TruckTimes t;
  t.arrival.push_back(0.0);
  t.wait.push_back(start);
  for (std::size_t i = 1; i < r.path.size(); ++i) {
    t.arrival.push_back(t.departure(i - 1) + net.arc(*net.find_arc(r.path[i - 1], r.path[i])).time);
    t.wait.push_back(0.0);
  }
  t.roles.assign(r.arc_count(), ArcRole{});
  return t;
}

/// Hand-built toy plans: each truck serves one customer, either direct
/// from the depot or through A.
inline std::vector<RoutePlan> toy_routes(const ProblemInstance& toy, bool via_a) {
  using namespace platoon::toy;
  std::vector<RoutePlan> routes;
  const std::vector<NodeId> b{B}, d{D};
  if (via_a) {
    routes.push_back(route_from_path(0, {O, A, B, A, O}, b, toy));
    routes.push_back(route_from_path(1, {O, A, D, A, O}, d, toy));
  } else {
    routes.push_back(route_from_path(0, {O, B, O}, b, toy));
    routes.push_back(route_from_path(1, {O, D, O}, d, toy));
  }
  return routes;
}

/// Toy plan through A with truck 1 following truck 0 on both shared arcs.
inline Solution toy_platoon_solution(const ProblemInstance& toy) {
  Solution s;
  s.routes = toy_routes(toy, true);
  for (const RoutePlan& r : s.routes) s.schedule.trucks.push_back(drive_through(r, toy.network()));
  s.schedule.trucks[0].roles[0] = {Role::leader, 0};
  s.schedule.trucks[1].roles[0] = {Role::follower, 0};
  s.schedule.trucks[0].roles[3] = {Role::leader, 0};
  s.schedule.trucks[1].roles[3] = {Role::follower, 0};
  s.cost = evaluate_solution(toy, s);
  return s;
}

}  // namespace fixtures
