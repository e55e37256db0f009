#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "platoon/cost.hpp"
#include "platoon/network.hpp"

namespace platoon {

/// One truck's tour on the road network.
struct RoutePlan {
  TruckId truck = 0;
  std::vector<NodeId> customer_sequence;  // 0, c1, ..., cn, 0
  std::vector<NodeId> path;               // network nodes, depot to depot
  std::vector<std::size_t> serve_index;   // path position serving c1..cn
  std::vector<double> loads;              // per arc, load at the arc tail

  std::size_t arc_count() const { return path.empty() ? 0 : path.size() - 1; }
  bool dispatched() const { return path.size() >= 2; }
};

struct ArcRole {
  Role role = Role::alone;
  TruckId leader = -1;  // leading truck for a follower, self for a leader

  friend bool operator==(const ArcRole&, const ArcRole&) = default;
};

/// Timing of one truck along its path: arrival and wait per path position,
/// platoon role per arc.
struct TruckTimes {
  std::vector<double> arrival;
  std::vector<double> wait;
  std::vector<ArcRole> roles;

  double departure(std::size_t pos) const { return arrival[pos] + wait[pos]; }
};

/// Timetable aligned index-by-index with a list of RoutePlans.
struct Schedule {
  std::vector<TruckTimes> trucks;
  double energy = 0.0;           // unweighted energy of the scheduled routes
  bool exact_fallback = false;   // exact search hit its node budget
};

struct SolveStats {
  int iterations = 0;
  int feasible_iterations = 0;
  int shuffles = 0;
  double elapsed_s = 0.0;
  std::vector<double> incumbent_history;  // incumbent total after each iteration
  bool exact_fallback = false;
  std::string last_infeasibility;
};

struct Solution {
  std::vector<RoutePlan> routes;
  Schedule schedule;
  CostBreakdown cost;
  std::uint64_t seed = 0;
  SolveStats stats;
};

}  // namespace platoon
