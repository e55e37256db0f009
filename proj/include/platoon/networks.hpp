#pragma once

#include <string>
#include <vector>

#include "platoon/instance.hpp"
#include "platoon/io.hpp"
#include "platoon/routing.hpp"

namespace platoon {

namespace detail {

inline void add_link(std::vector<Arc>& arcs, NodeId a, NodeId b, double hours) {
  arcs.push_back({a, b, hours});
  arcs.push_back({b, a, hours});
}

}  // namespace detail

// Toy network: depot O and nodes A, B, C, D.
namespace toy {
inline constexpr NodeId O = 0, A = 1, B = 2, C = 3, D = 4;
}

/// Five-node toy network. Links O-B, O-D, O-A, A-B and A-D carry the travel
/// times of the motivating example; the two links of node C (A-C 3 h, C-O
/// 5 h) are reconstructed and lie on no shortest path between the other
/// nodes.
inline RoadNetwork toy_network() {
  using namespace toy;
  std::vector<Arc> arcs;
  detail::add_link(arcs, O, B, 6.1);
  detail::add_link(arcs, O, D, 6.1);
  detail::add_link(arcs, O, A, 4.0);
  detail::add_link(arcs, A, B, 2.2);
  detail::add_link(arcs, A, D, 2.2);
  detail::add_link(arcs, A, C, 3.0);
  detail::add_link(arcs, C, O, 5.0);
  return RoadNetwork(5, std::move(arcs));
}

/// Two full-truckload customers at B and D with wide windows. alpha = 1 makes
/// the energy read directly in the example's units (1 per hour empty, 1.2 per
/// hour at full load).
inline ProblemInstance toy_instance() {
  Parameters p;
  p.alpha = 1.0;
  return ProblemInstance(toy_network(), {{toy::B, 20.0, 0.0, 100.0}, {toy::D, 20.0, 0.0, 100.0}}, p);
}

/// 4x4 grid, 3 h per edge, depot 0. Node layout (row-major):
///
///    5  1  2  3
///    4  0  6  7
///    8  9 10 11
///   12 13 14 15
///
/// The layout and demand split are reconstructed so that both published
/// operation plans run along grid edges: one truck serves 2, 1, 5, 4, 8, 12
/// (19 t), the other serves 10 and 14 (10 t). Nodes 6, 9 and 13 carry no
/// demand.
inline RoadNetwork grid_network() {
  static constexpr NodeId layout[4][4] = {{5, 1, 2, 3}, {4, 0, 6, 7}, {8, 9, 10, 11}, {12, 13, 14, 15}};
  std::vector<Arc> arcs;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      if (c + 1 < 4) detail::add_link(arcs, layout[r][c], layout[r][c + 1], 3.0);
      if (r + 1 < 4) detail::add_link(arcs, layout[r][c], layout[r + 1][c], 3.0);
    }
  return RoadNetwork(16, std::move(arcs));
}

inline ProblemInstance grid_instance() {
  const std::vector<std::pair<NodeId, double>> demand = {{1, 2}, {2, 3}, {4, 3},  {5, 2},
                                                         {8, 4}, {10, 6}, {12, 5}, {14, 4}};
  std::vector<CustomerDemand> cs;
  for (auto [n, q] : demand) cs.push_back({n, q, 0.0, 36.0});
  return ProblemInstance(grid_network(), std::move(cs), Parameters{});
}

/// Published grid operation plans on the reconstructed grid. Truck 0 (red)
/// runs 0-6-10-14-13-9-0 in both plans. Truck 1 (blue) runs
/// 0-6-2-1-5-4-8-12-13-9-0 with platooning and the reverse without.
inline std::vector<RoutePlan> grid_reference_routes(const ProblemInstance& grid, bool platooning) {
  std::vector<RoutePlan> routes;
  const std::vector<NodeId> red_served{10, 14};
  routes.push_back(route_from_path(0, {0, 6, 10, 14, 13, 9, 0}, red_served, grid));
  if (platooning) {
    const std::vector<NodeId> served{2, 1, 5, 4, 8, 12};
    routes.push_back(route_from_path(1, {0, 6, 2, 1, 5, 4, 8, 12, 13, 9, 0}, served, grid));
  } else {
    const std::vector<NodeId> served{12, 8, 4, 5, 1, 2};
    routes.push_back(route_from_path(1, {0, 9, 13, 12, 8, 4, 5, 1, 2, 6, 0}, served, grid));
  }
  return routes;
}

struct NamedLink {
  NodeId a;
  NodeId b;
  double km;
};

/// City names of the reconstructed Yangtze River Delta network; index is the
/// node id and Nanjing is the depot.
inline const std::vector<std::string>& yangtze_cities() {
  static const std::vector<std::string> names = {
      "Nanjing",   "Shanghai", "Suzhou",   "Wuxi",        "Changzhou", "Zhenjiang", "Yangzhou",
      "Taizhou JS", "Nantong", "Yancheng", "Huaian",      "Suqian",    "Xuzhou",    "Lianyungang",
      "Hangzhou",  "Jiaxing",  "Huzhou",   "Shaoxing",    "Ningbo",    "Zhoushan",  "Taizhou ZJ",
      "Wenzhou",   "Jinhua",   "Quzhou",   "Lishui",      "Hefei",     "Wuhu",      "Maanshan",
      "Chuzhou",   "Xuancheng", "Tongling", "Anqing",     "Chizhou",   "Huangshan", "Luan",
      "Bengbu",    "Huainan",  "Fuyang"};
  return names;
}

/// Reconstructed links of the 38-city network. Each city is joined to its
/// three nearest neighbours plus three trunk corridors; km are great-circle
/// distances between approximate city coordinates scaled by 1.25 for road
/// detours. This is an approximation, not the published map.
inline const std::vector<NamedLink>& yangtze_links() {
  static const std::vector<NamedLink> links = {
      {0, 5, 75},    {0, 6, 85},    {0, 27, 64},   {0, 28, 66},   {0, 25, 188},  {1, 2, 101},
      {1, 8, 125},   {1, 15, 108},  {1, 19, 193},  {2, 3, 45},    {2, 8, 100},   {2, 15, 78},
      {2, 16, 85},   {3, 4, 60},    {3, 8, 97},    {3, 16, 87},   {4, 5, 84},    {4, 7, 91},
      {4, 8, 111},   {5, 6, 28},    {5, 7, 70},    {6, 7, 61},    {6, 9, 160},   {6, 28, 129},
      {7, 9, 127},   {9, 10, 137},  {9, 13, 205},  {10, 11, 98},  {10, 13, 140}, {11, 12, 133},
      {11, 13, 140}, {12, 35, 188}, {12, 36, 228}, {14, 15, 99},  {14, 16, 86},  {14, 17, 64},
      {14, 33, 231}, {15, 16, 82},  {15, 17, 106}, {15, 18, 155}, {16, 29, 159}, {17, 18, 118},
      {17, 19, 196}, {17, 22, 170}, {18, 19, 82},  {18, 20, 169}, {20, 21, 130}, {20, 24, 185},
      {21, 22, 195}, {21, 24, 111}, {22, 23, 96},  {22, 24, 94},  {23, 24, 147}, {23, 33, 121},
      {25, 30, 140}, {25, 34, 85},  {25, 35, 154}, {25, 36, 116}, {26, 27, 48},  {26, 29, 67},
      {26, 30, 92},  {26, 32, 146}, {27, 28, 90},  {27, 29, 106}, {28, 35, 139}, {29, 30, 113},
      {29, 33, 178}, {30, 31, 105}, {30, 32, 55},  {31, 32, 54},  {31, 34, 177}, {32, 33, 167},
      {34, 36, 137}, {34, 37, 182}, {35, 36, 61},  {35, 37, 184}, {36, 37, 144}};
  return links;
}

inline RoadNetwork yangtze_network(double speed_kmh = kDefaultSpeedKmh) {
  std::vector<Arc> arcs;
  for (const NamedLink& l : yangtze_links()) detail::add_link(arcs, l.a, l.b, l.km / speed_kmh);
  return RoadNetwork(static_cast<int>(yangtze_cities().size()), std::move(arcs));
}

}  // namespace platoon
