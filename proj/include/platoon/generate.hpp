#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "platoon/error.hpp"
#include "platoon/io.hpp"
#include "platoon/networks.hpp"
#include "platoon/rng.hpp"

namespace platoon {

enum class NetworkKind { yangtze, grid, random };

inline std::optional<NetworkKind> network_from_string(std::string_view s) {
  if (s == "yangtze") return NetworkKind::yangtze;
  if (s == "grid") return NetworkKind::grid;
  if (s == "random") return NetworkKind::random;
  return std::nullopt;
}

struct GenerateOptions {
  NetworkKind network = NetworkKind::yangtze;
  int nodes = 38;  // random networks only
  int customers = 10;
  std::uint64_t seed = 1;
  double tw_tolerance = 20.0;
  Parameters params;
};

namespace detail {

/// Random planar road graph: points in a 300 km square, each joined to its
/// three nearest neighbours, components bridged by their closest pair.
inline std::vector<NamedLink> random_links(int n, Rng& rng) {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform_real(0.0, 300.0);
    const double y = rng.uniform_real(0.0, 300.0);
    pts.emplace_back(x, y);
  }
  auto km = [&](int a, int b) {
    const double d = std::hypot(pts[a].first - pts[b].first, pts[a].second - pts[b].second);
    return std::max(1.0, std::round(d));
  };
  std::vector<std::vector<bool>> linked(n, std::vector<bool>(n, false));
  std::vector<NamedLink> links;
  auto link = [&](int a, int b) {
    if (a == b || linked[a][b]) return;
    linked[a][b] = linked[b][a] = true;
    links.push_back({std::min(a, b), std::max(a, b), km(a, b)});
  };
  for (int i = 0; i < n; ++i) {
    std::vector<int> others;
    for (int j = 0; j < n; ++j)
      if (j != i) others.push_back(j);
    std::stable_sort(others.begin(), others.end(), [&](int a, int b) { return km(i, a) < km(i, b); });
    for (std::size_t k = 0; k < std::min<std::size_t>(3, others.size()); ++k) link(i, others[k]);
  }
  std::vector<int> comp(n);
  auto label = [&] {
    std::iota(comp.begin(), comp.end(), 0);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const NamedLink& l : links) {
        const int m = std::min(comp[l.a], comp[l.b]);
        if (comp[l.a] != m || comp[l.b] != m) {
          comp[l.a] = comp[l.b] = m;
          changed = true;
        }
      }
    }
  };
  label();
  while (std::any_of(comp.begin(), comp.end(), [&](int c) { return c != comp[0]; })) {
    int ba = -1, bb = -1;
    double best = kInf;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (comp[a] == comp[0] && comp[b] != comp[0] && km(a, b) < best) {
          best = km(a, b);
          ba = a;
          bb = b;
        }
    link(ba, bb);
    label();
  }
  std::sort(links.begin(), links.end(),
            [](const NamedLink& x, const NamedLink& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  return links;
}

}  // namespace detail

/// Random instance document. Demands are whole tons in 1..10; every window
/// spans at least the tolerance and closes no earlier than the shortest
/// travel time from the depot. Identical options give identical documents.
inline Json generate_instance(const GenerateOptions& o) {
  Rng rng(o.seed);
  Json doc;
  std::vector<NamedLink> links;
  int n = 0;
  switch (o.network) {
    case NetworkKind::yangtze:
      links = yangtze_links();
      n = static_cast<int>(yangtze_cities().size());
      doc["name"] = "yangtze-c" + std::to_string(o.customers) + "-s" + std::to_string(o.seed);
      doc["note"] = "reconstructed Yangtze River Delta network, approximate distances";
      doc["nodes"] = yangtze_cities();
      break;
    case NetworkKind::grid:
      n = 16;
      doc["name"] = "grid-c" + std::to_string(o.customers) + "-s" + std::to_string(o.seed);
      doc["nodes"] = n;
      break;
    case NetworkKind::random:
      if (o.nodes < 2) throw InstanceInvalid("nodes: need at least 2");
      n = o.nodes;
      links = detail::random_links(n, rng);
      doc["name"] = "random-n" + std::to_string(n) + "-c" + std::to_string(o.customers) + "-s" +
                    std::to_string(o.seed);
      doc["nodes"] = n;
      break;
  }
  if (o.customers < 0 || o.customers >= n)
    throw InstanceInvalid("customers: must be below the node count " + std::to_string(n));
  if (!(o.tw_tolerance >= 0.0)) throw InstanceInvalid("tw_tolerance: must be nonnegative");

  doc["depot"] = kDepot;
  doc["undirected"] = true;
  Json arcs = Json::array();
  RoadNetwork net;
  if (o.network == NetworkKind::grid) {
    net = grid_network();
    for (const Arc& a : net.arcs())
      if (a.tail < a.head) arcs.push_back({{"from", a.tail}, {"to", a.head}, {"hours", a.time}});
  } else {
    doc["speed_kmh"] = kDefaultSpeedKmh;
    std::vector<Arc> list;
    for (const NamedLink& l : links) {
      arcs.push_back({{"from", l.a}, {"to", l.b}, {"km", l.km}});
      detail::add_link(list, l.a, l.b, l.km / kDefaultSpeedKmh);
    }
    net = RoadNetwork(n, std::move(list));
  }
  doc["arcs"] = std::move(arcs);

  const DistMatrix dist = all_pairs_shortest_paths(net);
  std::vector<NodeId> pool(static_cast<std::size_t>(n - 1));
  std::iota(pool.begin(), pool.end(), 1);
  rng.shuffle(std::span<NodeId>(pool));
  pool.resize(static_cast<std::size_t>(o.customers));
  std::sort(pool.begin(), pool.end());

  Json cs = Json::array();
  for (NodeId node : pool) {
    const auto q = rng.uniform_int(1, std::clamp<std::int64_t>(static_cast<std::int64_t>(o.params.Q), 1, 10));
    const auto t_ea = static_cast<double>(rng.uniform_int(0, 10));
    const double reach = std::ceil(dist(kDepot, node) * 10.0) / 10.0;
    const double t_ld = std::max(t_ea + o.tw_tolerance, reach);
    cs.push_back({{"node", node}, {"q", q}, {"t_ea", t_ea}, {"t_ld", t_ld}});
  }
  doc["customers"] = std::move(cs);
  doc["params"] = params_to_json(o.params);
  return doc;
}

}  // namespace platoon
