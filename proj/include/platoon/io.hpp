#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "platoon/error.hpp"
#include "platoon/instance.hpp"
#include "platoon/orchestrator.hpp"
#include "platoon/solution.hpp"

namespace platoon {

using Json = nlohmann::ordered_json;

inline constexpr double kDefaultSpeedKmh = 88.5;

namespace detail {

/// 1-based line and column of a byte offset (1-based, as reported by the
/// JSON parser for the last character read).
inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ParseError("invalid JSON at line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ": " + e.what(),
                     line, col);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InstanceInvalid(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InstanceInvalid(where + "." + key + ": missing");
  return *it;
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InstanceInvalid(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InstanceInvalid(where + ": must be finite");
  return v;
}

inline int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw InstanceInvalid(where + ": expected an integer");
  return j.get<int>();
}

inline double number_or(const Json& j, const char* key, double dflt, const std::string& where) {
  auto it = j.find(key);
  return it == j.end() ? dflt : number(*it, where + "." + key);
}

}  // namespace detail

inline Parameters params_from_json(const Json& j, const std::string& where = "params") {
  using detail::number_or;
  Parameters p;
  if (j.is_null()) return p;
  if (!j.is_object()) throw InstanceInvalid(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const char* known[] = {"c1", "c2", "alpha", "gamma", "eta", "beta", "L", "Q", "big_M"};
    if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known))
      throw InstanceInvalid(where + "." + it.key() + ": unknown parameter");
  }
  p.c1 = number_or(j, "c1", p.c1, where);
  p.c2 = number_or(j, "c2", p.c2, where);
  p.alpha = number_or(j, "alpha", p.alpha, where);
  p.gamma = number_or(j, "gamma", p.gamma, where);
  p.eta = number_or(j, "eta", p.eta, where);
  p.beta = number_or(j, "beta", p.beta, where);
  if (j.contains("L")) p.L = detail::integer(j["L"], where + ".L");
  p.Q = number_or(j, "Q", p.Q, where);
  if (j.contains("big_M")) p.big_M = detail::number(j["big_M"], where + ".big_M");
  return p;
}

inline Json params_to_json(const Parameters& p) {
  Json j{{"c1", p.c1}, {"c2", p.c2}, {"alpha", p.alpha}, {"gamma", p.gamma},
         {"eta", p.eta}, {"beta", p.beta}, {"L", p.L},     {"Q", p.Q}};
  if (p.big_M) j["big_M"] = *p.big_M;
  return j;
}

/// Builds an instance from its JSON document.
///
/// `nodes` is a count or a list of labels; arcs carry `hours` or `km`
/// (converted at `speed_kmh`, hours win when both are present). With
/// `"undirected": true` every arc is added in both directions.
inline ProblemInstance instance_from_json(const Json& j) {
  using detail::field;
  using detail::integer;
  using detail::number;
  if (!j.is_object()) throw InstanceInvalid("instance: expected an object");

  const Json& nodes = field(j, "nodes", "instance");
  int node_count = 0;
  if (nodes.is_array())
    node_count = static_cast<int>(nodes.size());
  else
    node_count = integer(nodes, "nodes");
  if (j.contains("depot") && integer(j["depot"], "depot") != kDepot)
    throw InstanceInvalid("depot: must be node 0");

  const double speed = detail::number_or(j, "speed_kmh", kDefaultSpeedKmh, "instance");
  if (!(speed > 0.0)) throw InstanceInvalid("speed_kmh: must be positive");
  bool undirected = false;
  if (j.contains("undirected")) {
    if (!j["undirected"].is_boolean()) throw InstanceInvalid("undirected: expected true or false");
    undirected = j["undirected"].get<bool>();
  }

  const Json& arcs = field(j, "arcs", "instance");
  if (!arcs.is_array()) throw InstanceInvalid("arcs: expected a list");
  std::vector<Arc> list;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const std::string where = "arcs[" + std::to_string(i) + "]";
    const Json& a = arcs[i];
    const int from = integer(field(a, "from", where), where + ".from");
    const int to = integer(field(a, "to", where), where + ".to");
    double hours = 0.0;
    if (a.contains("hours"))
      hours = number(a["hours"], where + ".hours");
    else if (a.contains("km"))
      hours = number(a["km"], where + ".km") / speed;
    else
      throw InstanceInvalid(where + ": needs hours or km");
    list.push_back({from, to, hours});
    if (undirected) list.push_back({to, from, hours});
  }

  const Json& cs = field(j, "customers", "instance");
  if (!cs.is_array()) throw InstanceInvalid("customers: expected a list");
  std::vector<CustomerDemand> customers;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const std::string where = "customers[" + std::to_string(i) + "]";
    const Json& c = cs[i];
    customers.push_back({integer(field(c, "node", where), where + ".node"),
                         number(field(c, "q", where), where + ".q"),
                         number(field(c, "t_ea", where), where + ".t_ea"),
                         number(field(c, "t_ld", where), where + ".t_ld")});
  }
  const Parameters params = params_from_json(j.contains("params") ? j["params"] : Json(), "params");
  return ProblemInstance(RoadNetwork(node_count, std::move(list)), std::move(customers), params);
}

/// Directed, hours-only document of an instance.
inline Json instance_to_json(const ProblemInstance& inst) {
  Json arcs = Json::array();
  for (const Arc& a : inst.network().arcs()) arcs.push_back({{"from", a.tail}, {"to", a.head}, {"hours", a.time}});
  Json cs = Json::array();
  for (const auto& c : inst.customers())
    cs.push_back({{"node", c.node}, {"q", c.q}, {"t_ea", c.t_ea}, {"t_ld", c.t_ld}});
  return Json{{"nodes", inst.network().node_count()},
              {"depot", kDepot},
              {"arcs", std::move(arcs)},
              {"customers", std::move(cs)},
              {"params", params_to_json(inst.params())}};
}

inline ProblemInstance parse_instance(std::string_view text) {
  return instance_from_json(detail::parse_json(text));
}

inline ProblemInstance load_instance(const std::string& path) {
  return parse_instance(detail::read_file(path));
}

inline std::string_view to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::exact: return "exact";
    case SchedulerKind::greedy: return "greedy";
    case SchedulerKind::automatic: return "auto";
  }
  return "?";
}

inline std::optional<SchedulerKind> scheduler_from_string(std::string_view s) {
  if (s == "exact") return SchedulerKind::exact;
  if (s == "greedy") return SchedulerKind::greedy;
  if (s == "auto") return SchedulerKind::automatic;
  return std::nullopt;
}

inline Json config_to_json(const SolverConfig& c) {
  Json j{{"time_limit_s", c.time_limit_s},
         {"iteration_limit", c.iteration_limit ? Json(*c.iteration_limit) : Json()},
         {"streak_limit", c.streak_limit},
         {"shuffle_limit", c.shuffle_limit},
         {"seed", c.seed},
         {"platoon_size", c.platoon_size ? Json(*c.platoon_size) : Json()},
         {"scheduler", to_string(c.scheduler)}};
  return j;
}

inline Json cost_to_json(const CostBreakdown& c) {
  return Json{{"dispatch", c.dispatch}, {"energy", c.energy}, {"total", c.total}};
}

inline Json solution_to_json(const Solution& sol, const std::optional<SolverConfig>& config = std::nullopt) {
  Json trucks = Json::array();
  for (std::size_t r = 0; r < sol.routes.size(); ++r) {
    const RoutePlan& route = sol.routes[r];
    const TruckTimes& tt = sol.schedule.trucks.at(r);
    Json roles = Json::array();
    for (const ArcRole& role : tt.roles) {
      Json o{{"role", to_string(role.role)}};
      if (role.role == Role::follower) o["leader"] = role.leader;
      roles.push_back(std::move(o));
    }
    trucks.push_back(Json{{"truck", route.truck},
                          {"customers", route.customer_sequence},
                          {"path", route.path},
                          {"serve_index", route.serve_index},
                          {"loads", route.loads},
                          {"arrival", tt.arrival},
                          {"wait", tt.wait},
                          {"roles", std::move(roles)}});
  }
  Json j{{"seed", sol.seed}, {"cost", cost_to_json(sol.cost)}, {"trucks", std::move(trucks)}};
  if (config) j["config"] = config_to_json(*config);
  j["stats"] = Json{{"iterations", sol.stats.iterations},
                    {"feasible_iterations", sol.stats.feasible_iterations},
                    {"shuffles", sol.stats.shuffles},
                    {"elapsed_s", sol.stats.elapsed_s},
                    {"exact_fallback", sol.stats.exact_fallback}};
  return j;
}

/// Reads routes, schedule and the claimed cost back from a solution document.
/// Shape problems raise MalformedSolution; feasibility is left to
/// check_feasibility.
inline Solution solution_from_json(const Json& j) {
  auto bad = [](const std::string& m) { throw MalformedSolution("solution: " + m); };
  try {
    if (!j.is_object()) bad("expected an object");
    Solution sol;
    if (j.contains("seed")) sol.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("cost")) {
      const Json& c = j["cost"];
      sol.cost.dispatch = c.at("dispatch").get<double>();
      sol.cost.energy = c.at("energy").get<double>();
      sol.cost.total = c.at("total").get<double>();
    }
    if (!j.contains("trucks") || !j["trucks"].is_array()) bad("trucks: expected a list");
    for (const Json& t : j["trucks"]) {
      RoutePlan route;
      route.truck = t.at("truck").get<TruckId>();
      route.customer_sequence = t.at("customers").get<std::vector<NodeId>>();
      route.path = t.at("path").get<std::vector<NodeId>>();
      route.serve_index = t.at("serve_index").get<std::vector<std::size_t>>();
      route.loads = t.at("loads").get<std::vector<double>>();
      TruckTimes tt;
      tt.arrival = t.at("arrival").get<std::vector<double>>();
      tt.wait = t.at("wait").get<std::vector<double>>();
      for (const Json& r : t.at("roles")) {
        const auto role = role_from_string(r.at("role").get<std::string>());
        if (!role) bad("unknown role " + r.at("role").dump());
        ArcRole ar{*role, route.truck};
        if (*role == Role::follower) ar.leader = r.at("leader").get<TruckId>();
        tt.roles.push_back(ar);
      }
      sol.routes.push_back(std::move(route));
      sol.schedule.trucks.push_back(std::move(tt));
    }
    detail::require_shapes(sol.routes, sol.schedule);
    return sol;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedSolution(std::string("solution: ") + e.what());
  }
}

inline Solution parse_solution(std::string_view text) { return solution_from_json(detail::parse_json(text)); }

inline Solution load_solution(const std::string& path) { return parse_solution(detail::read_file(path)); }

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing " + path);
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace platoon
