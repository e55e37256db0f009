#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "platoon/error.hpp"

namespace platoon {

using NodeId = int;
using ArcId = int;
using TruckId = int;

inline constexpr NodeId kDepot = 0;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Arc {
  NodeId tail = 0;
  NodeId head = 0;
  double time = 0.0;  // hours
};

/// Per-arc cost vector indexed by ArcId.
using ArcCosts = std::vector<double>;

/// Directed road network. Node 0 is the depot.
class RoadNetwork {
 public:
  RoadNetwork() = default;

  RoadNetwork(int node_count, std::vector<Arc> arcs)
      : node_count_(node_count), arcs_(std::move(arcs)) {
    if (node_count_ <= 0) throw InstanceInvalid("network: node count must be positive");
    out_.resize(node_count_);
    in_.resize(node_count_);
    for (ArcId a = 0; a < static_cast<ArcId>(arcs_.size()); ++a) {
      const Arc& arc = arcs_[a];
      const auto where = "network: arc " + std::to_string(a) + " (" +
                         std::to_string(arc.tail) + "," +
                         std::to_string(arc.head) + ")";
      if (!valid(arc.tail) || !valid(arc.head))
        throw InstanceInvalid(where + " references an unknown node");
      if (arc.tail == arc.head) throw InstanceInvalid(where + " is a self-loop");
      if (!(arc.time > 0.0) || !std::isfinite(arc.time))
        throw InstanceInvalid(where + " must have a positive finite travel time");
      if (!index_.emplace(key(arc.tail, arc.head), a).second)
        throw InstanceInvalid(where + " is duplicated");
      out_[arc.tail].push_back(a);
      in_[arc.head].push_back(a);
    }
  }

  int node_count() const noexcept { return node_count_; }
  bool valid(NodeId n) const noexcept { return n >= 0 && n < node_count_; }

  std::span<const Arc> arcs() const noexcept { return arcs_; }
  std::size_t arc_count() const noexcept { return arcs_.size(); }
  const Arc& arc(ArcId a) const { return arcs_.at(a); }

  std::span<const ArcId> out_arcs(NodeId n) const { return out_.at(n); }
  std::span<const ArcId> in_arcs(NodeId n) const { return in_.at(n); }

  std::optional<ArcId> find_arc(NodeId tail, NodeId head) const {
    auto it = index_.find(key(tail, head));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  ArcCosts travel_times() const {
    ArcCosts t(arcs_.size());
    for (std::size_t a = 0; a < arcs_.size(); ++a) t[a] = arcs_[a].time;
    return t;
  }

 private:
  static std::uint64_t key(NodeId tail, NodeId head) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(tail)) << 32) |
           static_cast<std::uint32_t>(head);
  }

  int node_count_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::vector<ArcId>> out_;
  std::vector<std::vector<ArcId>> in_;
  std::unordered_map<std::uint64_t, ArcId> index_;
};

/// All-pairs shortest travel times with next-hop path reconstruction.
class DistMatrix {
 public:
  DistMatrix() = default;
  explicit DistMatrix(int n)
      : n_(n),
        dist_(static_cast<std::size_t>(n) * n, kInf),
        next_(static_cast<std::size_t>(n) * n, -1) {}

  int size() const noexcept { return n_; }
  double operator()(NodeId i, NodeId j) const { return dist_[idx(i, j)]; }
  double& at(NodeId i, NodeId j) { return dist_[idx(i, j)]; }
  NodeId next_hop(NodeId i, NodeId j) const { return next_[idx(i, j)]; }
  NodeId& next_hop_at(NodeId i, NodeId j) { return next_[idx(i, j)]; }

  /// Largest finite entry.
  double t_max() const noexcept { return t_max_; }
  void set_t_max(double v) noexcept { t_max_ = v; }

  /// Node sequence of a shortest path from `from` to `to`, both included.
  std::vector<NodeId> path(NodeId from, NodeId to) const {
    std::vector<NodeId> nodes{from};
    if (from == to) return nodes;
    if (!std::isfinite((*this)(from, to)))
      throw DisconnectedNetwork("no path from " + std::to_string(from) +
                                " to " + std::to_string(to));
    NodeId at = from;
    while (at != to) {
      at = next_hop(at, to);
      nodes.push_back(at);
    }
    return nodes;
  }

 private:
  std::size_t idx(NodeId i, NodeId j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }

  int n_ = 0;
  std::vector<double> dist_;
  std::vector<NodeId> next_;
  double t_max_ = 0.0;
};

/// Floyd-Warshall over arc travel times.
///
/// Only strict improvements replace an entry, so among equal-length paths
/// the one found through the lowest-numbered pivot is kept. Every pair in
/// `required` (plus the depot) must be mutually reachable.
inline DistMatrix all_pairs_shortest_paths(const RoadNetwork& net,
                                           std::span<const NodeId> required = {}) {
  const int n = net.node_count();
  DistMatrix d(n);
  for (NodeId i = 0; i < n; ++i) {
    d.at(i, i) = 0.0;
    d.next_hop_at(i, i) = i;
  }
  for (const Arc& arc : net.arcs()) {
    if (arc.time < d(arc.tail, arc.head)) {
      d.at(arc.tail, arc.head) = arc.time;
      d.next_hop_at(arc.tail, arc.head) = arc.head;
    }
  }
  for (NodeId k = 0; k < n; ++k) {
    for (NodeId i = 0; i < n; ++i) {
      const double dik = d(i, k);
      if (!std::isfinite(dik)) continue;
      for (NodeId j = 0; j < n; ++j) {
        const double via = dik + d(k, j);
        if (via < d(i, j)) {
          d.at(i, j) = via;
          d.next_hop_at(i, j) = d.next_hop(i, k);
        }
      }
    }
  }

  double t_max = 0.0;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (std::isfinite(d(i, j))) t_max = std::max(t_max, d(i, j));
  d.set_t_max(t_max);

  std::vector<NodeId> must{kDepot};
  must.insert(must.end(), required.begin(), required.end());
  for (NodeId a : must) {
    for (NodeId b : must) {
      if (!net.valid(a) || !net.valid(b))
        throw InstanceInvalid("node " + std::to_string(net.valid(a) ? b : a) +
                              " is not in the network");
      if (!std::isfinite(d(a, b)))
        throw DisconnectedNetwork("node " + std::to_string(b) +
                                  " is unreachable from node " +
                                  std::to_string(a));
    }
  }
  return d;
}

struct PathResult {
  std::vector<NodeId> nodes;  // from .. to, inclusive
  double cost = 0.0;
};

/// Minimum-cost path under arbitrary positive per-arc costs.
///
/// Among all minimum-cost paths the lexicographically smallest node
/// sequence is returned: distances to `to` are computed first, then the walk
/// from `from` always steps to the smallest node that stays on a tight arc.
inline PathResult shortest_path_under(const RoadNetwork& net,
                                      const ArcCosts& costs, NodeId from,
                                      NodeId to) {
  if (costs.size() != net.arc_count())
    throw InstanceInvalid("cost vector does not match the arc count");
  if (from == to) return {{from}, 0.0};

  const int n = net.node_count();
  std::vector<double> to_target(n, kInf);
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  to_target[to] = 0.0;
  heap.emplace(0.0, to);
  while (!heap.empty()) {
    auto [dv, v] = heap.top();
    heap.pop();
    if (dv > to_target[v]) continue;
    for (ArcId a : net.in_arcs(v)) {
      const NodeId u = net.arc(a).tail;
      const double cand = dv + costs[a];
      if (cand < to_target[u]) {
        to_target[u] = cand;
        heap.emplace(cand, u);
      }
    }
  }
  if (!std::isfinite(to_target[from]))
    throw DisconnectedNetwork("no path from " + std::to_string(from) + " to " +
                              std::to_string(to));

  PathResult result{{from}, to_target[from]};
  NodeId at = from;
  while (at != to) {
    const double tol = 1e-12 * std::max(1.0, to_target[at]);
    NodeId best = -1;
    for (ArcId a : net.out_arcs(at)) {
      const NodeId v = net.arc(a).head;
      if (!std::isfinite(to_target[v]) || to_target[v] >= to_target[at]) continue;
      if (std::abs(costs[a] + to_target[v] - to_target[at]) <= tol &&
          (best < 0 || v < best))
        best = v;
    }
    if (best < 0) {
      // Rounding left no arc within tolerance; fall back to the tightest one.
      double slack = kInf;
      for (ArcId a : net.out_arcs(at)) {
        const NodeId v = net.arc(a).head;
        if (to_target[v] >= to_target[at]) continue;
        const double s = costs[a] + to_target[v] - to_target[at];
        if (s < slack) {
          slack = s;
          best = v;
        }
      }
    }
    at = best;
    result.nodes.push_back(at);
  }
  return result;
}

}  // namespace platoon
