#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "platoon/error.hpp"
#include "platoon/network.hpp"

namespace platoon {

/// Cost and physics parameters. Defaults are the base-case values used for
/// the delivery experiments (Class 8 truck, 20 t capacity).
struct Parameters {
  double c1 = 271.0;    // dispatch cost per truck
  double c2 = 1.0;      // weight of the energy term
  double alpha = 30.7;  // fuel cost per hour of an empty truck
  double gamma = 10.0;  // static truck weight, tons
  double eta = 0.1;     // marginal fuel coefficient per ton of load
  double beta = 0.1;    // follower saving ratio
  int L = 4;            // maximum platoon size
  double Q = 20.0;      // capacity, tons
  std::optional<double> big_M;  // scheduling horizon; derived when unset

  void validate() const {
    auto fail = [](const std::string& m) { throw InstanceInvalid("params: " + m); };
    if (!(beta >= 0.0 && beta < 1.0)) fail("beta must lie in [0, 1)");
    if (L < 1) fail("L must be at least 1");
    if (!(Q > 0.0)) fail("Q must be positive");
    if (!(gamma > 0.0)) fail("gamma must be positive");
    if (!(eta >= 0.0)) fail("eta must be nonnegative");
    if (!(c1 >= 0.0) || !(c2 >= 0.0) || !(alpha >= 0.0))
      fail("c1, c2 and alpha must be nonnegative");
    if (big_M && !(*big_M > 0.0)) fail("big_M must be positive");
  }

  /// Relative fuel rate of a truck carrying `load`: eta*load + gamma.
  double weight_factor(double load) const { return eta * load + gamma; }
};

enum class Role { alone, leader, follower };

inline std::string_view to_string(Role r) {
  switch (r) {
    case Role::alone: return "alone";
    case Role::leader: return "leader";
    case Role::follower: return "follower";
  }
  return "?";
}

inline std::optional<Role> role_from_string(std::string_view s) {
  if (s == "alone") return Role::alone;
  if (s == "leader") return Role::leader;
  if (s == "follower") return Role::follower;
  return std::nullopt;
}

/// Fuel cost of one truck on one arc: (alpha/gamma) t (eta load + gamma),
/// discounted by (1 - beta) for a follower.
inline double arc_energy(double t, double load, Role role, const Parameters& p) {
  const double base = p.alpha / p.gamma * t * p.weight_factor(load);
  return role == Role::follower ? (1.0 - p.beta) * base : base;
}

struct LedgerEntry {
  TruckId truck = 0;
  NodeId tail = 0;
  NodeId head = 0;
  Role role = Role::alone;
  double load = 0.0;
  double cost = 0.0;
};

struct CostBreakdown {
  double dispatch = 0.0;
  double energy = 0.0;  // unweighted; total = dispatch + c2 * energy
  double total = 0.0;
  std::vector<LedgerEntry> ledger;
};

}  // namespace platoon
