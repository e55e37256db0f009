#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "platoon/evaluate.hpp"

using namespace platoon;

namespace {

bool has(const std::vector<Violation>& v, ViolationKind k, NodeId node = -1) {
  return std::any_of(v.begin(), v.end(),
                     [&](const Violation& x) { return x.kind == k && (node < 0 || x.node == node); });
}

Solution alone_solution(const ProblemInstance& inst, std::vector<RoutePlan> routes) {
  Solution s;
  s.routes = std::move(routes);
  for (const RoutePlan& r : s.routes) s.schedule.trucks.push_back(fixtures::drive_through(r, inst.network()));
  return s;
}

}  // namespace

TEST(ArcEnergy, TableValues) {
  const Parameters p;
  EXPECT_NEAR(arc_energy(1.0, 20.0, Role::alone, p), 36.84, 1e-9);
  EXPECT_NEAR(arc_energy(1.0, 0.0, Role::leader, p), 30.7, 1e-9);
  EXPECT_NEAR(arc_energy(1.0, 0.0, Role::follower, p), 27.63, 1e-9);
}

TEST(ArcEnergy, LinearInTimeAndLoad) {
  const Parameters p;
  for (double t : {0.5, 1.0, 3.0})
    for (double y : {0.0, 4.0, 19.0}) {
      EXPECT_NEAR(arc_energy(2 * t, y, Role::alone, p), 2 * arc_energy(t, y, Role::alone, p), 1e-9);
      const double slope = arc_energy(t, y + 1, Role::alone, p) - arc_energy(t, y, Role::alone, p);
      EXPECT_NEAR(slope, p.alpha / p.gamma * t * p.eta, 1e-9);
      EXPECT_NEAR(arc_energy(t, y, Role::follower, p), (1 - p.beta) * arc_energy(t, y, Role::leader, p), 1e-9);
    }
}

TEST(Evaluate, ToyWithoutPlatooning) {
  const ProblemInstance toy = toy_instance();
  const Solution s = alone_solution(toy, fixtures::toy_routes(toy, false));
  const CostBreakdown c = evaluate_solution(toy, s);
  EXPECT_NEAR(c.energy, 26.84, 1e-9);
  EXPECT_NEAR(c.dispatch, 2 * 271.0, 1e-12);
  EXPECT_DOUBLE_EQ(c.total, c.dispatch + toy.params().c2 * c.energy);
  EXPECT_EQ(c.ledger.size(), 4u);
}

TEST(Evaluate, ToyWithPlatooning) {
  const ProblemInstance toy = toy_instance();
  const Solution s = fixtures::toy_platoon_solution(toy);
  EXPECT_NEAR(s.cost.energy, 26.4, 1e-9);
  EXPECT_TRUE(check_feasibility(toy, s).empty());
}

TEST(Evaluate, BetaZeroNeverCheaper) {
  const ProblemInstance toy = toy_instance();
  Parameters p = toy.params();
  p.beta = 0.0;
  const Solution s = fixtures::toy_platoon_solution(toy);
  const double with = evaluate_solution(toy, s).energy;
  const double without = evaluate_solution(toy.with_params(p), s).energy;
  EXPECT_GT(without, with);
  const Solution plain = alone_solution(toy, fixtures::toy_routes(toy, true));
  EXPECT_DOUBLE_EQ(evaluate_solution(toy, plain).energy, evaluate_solution(toy.with_params(p), plain).energy);
}

TEST(Evaluate, EmptySolutionCostsNothing) {
  const ProblemInstance inst(toy_network(), {}, Parameters{});
  const CostBreakdown c = evaluate_solution(inst, Solution{});
  EXPECT_EQ(c.total, 0.0);
  EXPECT_TRUE(check_feasibility(inst, Solution{}).empty());
}

TEST(Evaluate, SelfFollowIsMalformed) {
  const ProblemInstance toy = toy_instance();
  Solution s = fixtures::toy_platoon_solution(toy);
  s.schedule.trucks[1].roles[0] = {Role::follower, 1};
  EXPECT_THROW(evaluate_solution(toy, s), MalformedSolution);
}

TEST(Evaluate, ShapeMismatchIsMalformed) {
  const ProblemInstance toy = toy_instance();
  Solution s = fixtures::toy_platoon_solution(toy);
  s.schedule.trucks.pop_back();
  EXPECT_THROW(evaluate_solution(toy, s), MalformedSolution);
}

TEST(Feasibility, GridReferencePlanIsFeasible) {
  const ProblemInstance grid = grid_instance();
  for (bool platooning : {true, false}) {
    const Solution s = alone_solution(grid, grid_reference_routes(grid, platooning));
    EXPECT_TRUE(check_feasibility(grid, s).empty());
  }
}

TEST(Feasibility, DoubleServe) {
  const ProblemInstance toy = toy_instance();
  std::vector<RoutePlan> routes = fixtures::toy_routes(toy, false);
  routes.push_back(routes[0]);
  routes.back().truck = 2;
  const auto v = check_feasibility(toy, alone_solution(toy, routes));
  EXPECT_TRUE(has(v, ViolationKind::single_serve, toy::B));
  EXPECT_FALSE(has(v, ViolationKind::single_serve, toy::D));
}

TEST(Feasibility, MissingCustomer) {
  const ProblemInstance toy = toy_instance();
  std::vector<RoutePlan> routes = fixtures::toy_routes(toy, false);
  routes.pop_back();
  EXPECT_TRUE(has(check_feasibility(toy, alone_solution(toy, routes)), ViolationKind::single_serve, toy::D));
}

TEST(Feasibility, PlatoonLargerThanL) {
  ProblemInstance toy = toy_instance();
  Parameters p = toy.params();
  p.L = 1;
  toy = toy.with_params(p);
  const Solution s = fixtures::toy_platoon_solution(toy);
  EXPECT_TRUE(has(check_feasibility(toy, s), ViolationKind::platoon_size));
}

TEST(Feasibility, UnsynchronisedPlatoon) {
  const ProblemInstance toy = toy_instance();
  Solution s = fixtures::toy_platoon_solution(toy);
  s.schedule.trucks[1] = fixtures::drive_through(s.routes[1], toy.network(), 1.0);
  s.schedule.trucks[1].roles[0] = {Role::follower, 0};
  EXPECT_TRUE(has(check_feasibility(toy, s), ViolationKind::sync_departure));
}

TEST(Feasibility, WindowMissed) {
  const ProblemInstance toy(toy_network(), {{toy::B, 20.0, 0.0, 6.1}}, Parameters{});
  const std::vector<NodeId> b{toy::B};
  // Through A the truck reaches B at 6.2.
  const Solution s = alone_solution(toy, {route_from_path(0, {0, 1, 2, 0}, b, toy)});
  EXPECT_TRUE(has(check_feasibility(toy, s), ViolationKind::time_window, toy::B));
  const Solution direct = alone_solution(toy, {route_from_path(0, {0, 2, 0}, b, toy)});
  EXPECT_TRUE(check_feasibility(toy, direct).empty());
}

TEST(Feasibility, EarlyArrival) {
  const ProblemInstance toy(toy_network(), {{toy::B, 20.0, 7.0, 20.0}}, Parameters{});
  const std::vector<NodeId> b{toy::B};
  Solution s = alone_solution(toy, {route_from_path(0, {0, 2, 0}, b, toy)});
  EXPECT_TRUE(has(check_feasibility(toy, s), ViolationKind::time_window));
  s.schedule.trucks[0] = fixtures::drive_through(s.routes[0], toy.network(), 1.0);
  EXPECT_TRUE(check_feasibility(toy, s).empty());
}

TEST(Feasibility, LoadAndTimeTampering) {
  const ProblemInstance grid = grid_instance();
  Solution s = alone_solution(grid, grid_reference_routes(grid, true));
  s.routes[1].loads[3] += 1.0;
  s.schedule.trucks[0].arrival[2] += 0.5;
  const auto v = check_feasibility(grid, s);
  EXPECT_TRUE(has(v, ViolationKind::load_decrement));
  EXPECT_TRUE(has(v, ViolationKind::time_propagation));
  s.routes[1].loads[0] = 25.0;
  EXPECT_TRUE(has(check_feasibility(grid, s), ViolationKind::capacity));
}

TEST(Feasibility, BrokenPath) {
  const ProblemInstance toy = toy_instance();
  Solution s = alone_solution(toy, fixtures::toy_routes(toy, false));
  s.routes[0].path = {0, 3, 2, 0};  // no arc (3,2)
  s.routes[0].serve_index = {2};
  EXPECT_TRUE(has(check_feasibility(toy, s), ViolationKind::flow_conservation));
}

TEST(Feasibility, GhostLeader) {
  const ProblemInstance toy = toy_instance();
  Solution s = fixtures::toy_platoon_solution(toy);
  s.schedule.trucks[1].roles[1] = {Role::follower, 0};  // truck 0 never drives (A,D)
  EXPECT_TRUE(has(check_feasibility(toy, s), ViolationKind::role_exclusivity));
}
