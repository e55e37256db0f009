#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "platoon/cost.hpp"
#include "platoon/error.hpp"
#include "platoon/network.hpp"

namespace platoon {

struct CustomerDemand {
  NodeId node = 0;
  double q = 0.0;     // tons
  double t_ea = 0.0;  // earliest arrival, h
  double t_ld = 0.0;  // latest departure, h
};

/// A validated problem: network, customers and parameters, together with
/// the all-pairs shortest-path matrix derived from them.
class ProblemInstance {
 public:
  ProblemInstance(RoadNetwork network, std::vector<CustomerDemand> customers,
                  Parameters params)
      : network_(std::move(network)),
        customers_(std::move(customers)),
        params_(params) {
    params_.validate();
    customer_index_.assign(network_.node_count(), -1);
    std::vector<NodeId> nodes;
    for (std::size_t c = 0; c < customers_.size(); ++c) {
      const CustomerDemand& cd = customers_[c];
      const auto where = "customers[" + std::to_string(c) + "]";
      if (!network_.valid(cd.node))
        throw InstanceInvalid(where + ".node: " + std::to_string(cd.node) +
                              " is not a network node");
      if (cd.node == kDepot)
        throw InstanceInvalid(where + ".node: the depot cannot be a customer");
      if (customer_index_[cd.node] >= 0)
        throw InstanceInvalid(where + ".node: duplicate customer " +
                              std::to_string(cd.node));
      if (!(cd.q > 0.0) || cd.q > params_.Q)
        throw InstanceInvalid(where + ".q: demand must lie in (0, Q]");
      if (!(cd.t_ea >= 0.0) || !(cd.t_ld >= cd.t_ea))
        throw InstanceInvalid(where + ": window must satisfy 0 <= t_ea <= t_ld");
      customer_index_[cd.node] = static_cast<int>(c);
      nodes.push_back(cd.node);
    }
    dist_ = all_pairs_shortest_paths(network_, nodes);
    for (std::size_t c = 0; c < customers_.size(); ++c) {
      const CustomerDemand& cd = customers_[c];
      if (cd.t_ld < dist_(kDepot, cd.node) - 1e-9)
        throw InstanceInvalid("customers[" + std::to_string(c) +
                              "].t_ld: earlier than the shortest depot travel time");
    }
    double max_ld = 0.0;
    for (const auto& cd : customers_) max_ld = std::max(max_ld, cd.t_ld);
    derived_big_M_ = max_ld + dist_.t_max() + 1.0;
    if (params_.big_M && *params_.big_M < derived_big_M_)
      throw InstanceInvalid("params.big_M: must be at least max t_ld + t_max + 1");
  }

  const RoadNetwork& network() const noexcept { return network_; }
  const std::vector<CustomerDemand>& customers() const noexcept { return customers_; }
  const Parameters& params() const noexcept { return params_; }
  const DistMatrix& dist() const noexcept { return dist_; }

  bool is_customer(NodeId n) const {
    return n >= 0 && n < static_cast<NodeId>(customer_index_.size()) &&
           customer_index_[n] >= 0;
  }
  const CustomerDemand& customer(NodeId n) const {
    if (!is_customer(n))
      throw InstanceInvalid("node " + std::to_string(n) + " is not a customer");
    return customers_[customer_index_[n]];
  }
  double demand(NodeId n) const { return is_customer(n) ? customer(n).q : 0.0; }

  std::vector<NodeId> customer_nodes() const {
    std::vector<NodeId> out;
    for (const auto& c : customers_) out.push_back(c.node);
    return out;
  }

  double big_M() const { return params_.big_M.value_or(derived_big_M_); }

  /// Copy with different parameters (same network and customers).
  ProblemInstance with_params(const Parameters& p) const {
    return ProblemInstance(network_, customers_, p);
  }

 private:
  RoadNetwork network_;
  std::vector<CustomerDemand> customers_;
  Parameters params_;
  DistMatrix dist_;
  std::vector<int> customer_index_;
  double derived_big_M_ = 0.0;
};

}  // namespace platoon
