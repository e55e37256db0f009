#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "platoon/error.hpp"
#include "platoon/instance.hpp"

namespace platoon {

/// Pairwise time-window compatibility: some visiting order of the two
/// customers can fit the travel time between them into their windows.
///
/// On symmetric networks this is max(LD_j - EA_i, LD_i - EA_j) >= t_ij; the
/// directional form keeps the test symmetric on asymmetric networks too.
inline bool tw_feasible(const CustomerDemand& a, const CustomerDemand& b, const DistMatrix& dist) {
  const bool a_then_b = b.t_ld - a.t_ea >= dist(a.node, b.node);
  const bool b_then_a = a.t_ld - b.t_ea >= dist(b.node, a.node);
  return a_then_b || b_then_a;
}

using CustomerGroup = std::vector<NodeId>;

/// Greedy first-fit partition of customers into mutually compatible groups,
/// scanning in the given order.
inline std::vector<CustomerGroup> group_customers(std::span<const NodeId> order,
                                                  const ProblemInstance& inst) {
  std::vector<CustomerGroup> groups;
  std::vector<bool> assigned(order.size(), false);
  std::size_t remaining = order.size();
  while (remaining > 0) {
    CustomerGroup group;
    // Membership only gets harder as the group grows, so one pass in order
    // accepts exactly what repeated rescans would.
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (assigned[i]) continue;
      const CustomerDemand& cand = inst.customer(order[i]);
      bool fits = true;
      for (NodeId m : group) {
        if (!tw_feasible(cand, inst.customer(m), inst.dist())) {
          fits = false;
          break;
        }
      }
      if (fits) {
        group.push_back(order[i]);
        assigned[i] = true;
        --remaining;
      }
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

/// Smallest power-of-ten scale (1, 10 or 100) that makes every demand and
/// the capacity integral. Capped at 100; rounding error is then <= 0.005 t.
inline int discretize_capacity(std::span<const double> demands, double Q) {
  auto integral = [](double v, int s) {
    const double x = v * s;
    return std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x));
  };
  for (int scale : {1, 10, 100}) {
    bool ok = integral(Q, scale);
    for (double d : demands) ok = ok && integral(d, scale);
    if (ok) return scale;
  }
  return 100;
}

struct TruckLoad {
  std::vector<NodeId> customers;
  double load = 0.0;
};

using TruckAssignment = std::vector<TruckLoad>;

/// Value table of one knapsack round over `items` (already in round order).
///
/// value[i][c] is the best value using the first i items with integral
/// capacity c; take[i][c] records whether item i is packed at that state.
struct KnapsackTable {
  std::vector<int> weight;
  std::vector<double> item_value;
  std::vector<std::vector<double>> value;
  std::vector<std::vector<bool>> take;
  int capacity = 0;

  /// Items chosen when backtracking from the full-capacity state.
  std::vector<std::size_t> selection() const {
    std::vector<std::size_t> chosen;
    int c = capacity;
    for (std::size_t i = weight.size(); i > 0; --i) {
      if (take[i][c]) {
        chosen.push_back(i - 1);
        c -= weight[i - 1];
      }
    }
    return {chosen.rbegin(), chosen.rend()};
  }
};

inline KnapsackTable knapsack_table(std::span<const NodeId> items, const ProblemInstance& inst) {
  const Parameters& p = inst.params();
  const DistMatrix& d = inst.dist();
  std::vector<double> demands;
  for (NodeId n : items) demands.push_back(inst.customer(n).q);
  const int scale = discretize_capacity(demands, p.Q);

  KnapsackTable t;
  t.capacity = static_cast<int>(std::lround(p.Q * scale));
  const std::size_t n = items.size();
  for (std::size_t i = 0; i < n; ++i) {
    t.weight.push_back(static_cast<int>(std::lround(demands[i] * scale)));
    // Closeness to the predecessor in the current order; the depot anchors
    // the first item.
    const NodeId prev = i == 0 ? kDepot : items[i - 1];
    t.item_value.push_back(d.t_max() + 1.0 - d(prev, items[i]));
  }
  t.value.assign(n + 1, std::vector<double>(t.capacity + 1, 0.0));
  t.take.assign(n + 1, std::vector<bool>(t.capacity + 1, false));
  for (std::size_t i = 1; i <= n; ++i) {
    const int w = t.weight[i - 1];
    for (int c = 0; c <= t.capacity; ++c) {
      t.value[i][c] = t.value[i - 1][c];
      if (c > 0 && w <= c) {
        const double with = t.value[i - 1][c - w] + t.item_value[i - 1];
        if (with > t.value[i][c]) {
          t.value[i][c] = with;
          t.take[i][c] = true;
        }
      }
    }
  }
  return t;
}

/// Fills trucks one after another: each round solves a knapsack over the
/// still-unserved members (re-indexed contiguously in their current order)
/// and dispatches the backtracked selection. Empty trucks never appear.
inline TruckAssignment knapsack_assign(const CustomerGroup& group, const ProblemInstance& inst) {
  for (NodeId n : group) {
    if (inst.customer(n).q > inst.params().Q)
      throw DemandExceedsCapacity("customer " + std::to_string(n) + " demand exceeds Q");
  }
  TruckAssignment trucks;
  std::vector<NodeId> left(group.begin(), group.end());
  while (!left.empty()) {
    const KnapsackTable table = knapsack_table(left, inst);
    const auto chosen = table.selection();
    if (chosen.empty())
      throw DemandExceedsCapacity("no remaining customer fits an empty truck");
    TruckLoad truck;
    std::vector<bool> picked(left.size(), false);
    auto selection = chosen;
    // Rounded weights can hide a small overload when demands need scale 100.
    auto real_load = [&] {
      double s = 0.0;
      for (std::size_t idx : selection) s += inst.customer(left[idx]).q;
      return s;
    };
    while (selection.size() > 1 && real_load() > inst.params().Q + 1e-9) selection.pop_back();
    for (std::size_t idx : selection) {
      picked[idx] = true;
      truck.customers.push_back(left[idx]);
      truck.load += inst.customer(left[idx]).q;
    }
    std::vector<NodeId> rest;
    for (std::size_t i = 0; i < left.size(); ++i)
      if (!picked[i]) rest.push_back(left[i]);
    left = std::move(rest);
    trucks.push_back(std::move(truck));
  }
  return trucks;
}

/// Groups in order, then trucks within each group in order.
inline TruckAssignment assign_trucks(std::span<const NodeId> order, const ProblemInstance& inst) {
  TruckAssignment all;
  for (const CustomerGroup& g : group_customers(order, inst)) {
    for (TruckLoad& t : knapsack_assign(g, inst)) all.push_back(std::move(t));
  }
  return all;
}

}  // namespace platoon
