#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "platoon/error.hpp"
#include "platoon/instance.hpp"
#include "platoon/solution.hpp"

namespace platoon {

enum class VarKind { binary, continuous };
enum class Sense { le, eq, ge };

struct Variable {
  std::string name;
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = kInf;
};

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::le;
  double rhs = 0.0;
};

/// Linear model in minimisation form.
class MilpModel {
 public:
  std::string name = "PLATOON";
  std::vector<Variable> vars;
  std::vector<Constraint> rows;
  std::vector<Term> objective;

  int add_var(std::string var_name, VarKind kind, double lower, double upper) {
    if (index_.count(var_name)) throw InstanceInvalid("duplicate variable " + var_name);
    const int id = static_cast<int>(vars.size());
    index_.emplace(var_name, id);
    vars.push_back({std::move(var_name), kind, lower, upper});
    return id;
  }

  /// Adds a row; repeated variables are merged and zero coefficients dropped.
  void add_row(std::string row_name, std::vector<Term> terms, Sense sense, double rhs) {
    std::map<int, double> merged;
    for (const Term& t : terms) {
      if (t.var < 0 || t.var >= static_cast<int>(vars.size()))
        throw InstanceInvalid("row " + row_name + " references an undeclared variable");
      merged[t.var] += t.coef;
    }
    Constraint c{std::move(row_name), {}, sense, rhs};
    for (auto [v, coef] : merged)
      if (coef != 0.0) c.terms.push_back({v, coef});
    rows.push_back(std::move(c));
  }

  std::optional<int> find(const std::string& var_name) const {
    auto it = index_.find(var_name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int var(const std::string& var_name) const {
    auto v = find(var_name);
    if (!v) throw InstanceInvalid("unknown variable " + var_name);
    return *v;
  }

  std::size_t count_prefix(const std::string& prefix) const {
    return static_cast<std::size_t>(std::count_if(vars.begin(), vars.end(), [&](const Variable& v) {
      return v.name.compare(0, prefix.size(), prefix) == 0;
    }));
  }

  void rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < vars.size(); ++i) index_.emplace(vars[i].name, static_cast<int>(i));
  }

 private:
  std::unordered_map<std::string, int> index_;
};

struct ModelOptions {
  std::optional<int> trucks;  // fleet size; defaults to the customer count
  // Apply the load-carrying row to every arc whose head is not the depot, so
  // loads are tracked through transit nodes as well as customers.
  bool transit_loads = true;
};

namespace detail {

inline std::string vname(const char* sym, std::initializer_list<int> idx) {
  std::string s = sym;
  for (int i : idx) s += "_" + std::to_string(i);
  return s;
}

}  // namespace detail

/// Fleet size used by build_full_model.
inline int model_truck_count(const ProblemInstance& inst, const ModelOptions& opts = {}) {
  const int k = opts.trucks.value_or(static_cast<int>(inst.customers().size()));
  if (k < 0) throw InstanceInvalid("trucks: must be non-negative");
  return k;
}

/// Mixed-integer linear model of the routing, loading, platooning and
/// time-window decisions with the linearised energy objective.
///
/// Variables (K trucks, A arcs, N nodes, C customers):
///   x_i_j_k, l_i_j_k   binary, |A||K| each
///   f_i_j_k1_k2        binary, |A||K|(|K|-1); k2 follows k1
///   g_i_k              binary, |C||K|
///   y_i_k, s_i_k, w_i_k continuous, |N||K| each
///   vl_i_j_k, vf_i_j_k continuous, |A||K| each
///
/// Rows:
///   flow, once         2|N||K|
///   serve              |C|
///   visit              |C||K|
///   load0, cap         |K| each
///   vol                |K| * arcs into customers (every non-depot head with transit_loads)
///   role, psize        |A||K| each
///   syncA, syncB       |A||K|(|K|-1) each
///   time               |K| * arcs into non-depot nodes
///   ea, ld             |C||K| each
///   vl_*, vf_*         6|A||K|
inline MilpModel build_full_model(const ProblemInstance& inst, const ModelOptions& opts = {}) {
  using detail::vname;
  const RoadNetwork& net = inst.network();
  const Parameters& p = inst.params();
  const int K = model_truck_count(inst, opts);
  const int N = net.node_count();
  const double M = inst.big_M();
  const double M_vol = std::max(M, 2.0 * p.Q);
  const double full = p.eta * p.Q + p.gamma;
  const auto customers = inst.customer_nodes();

  MilpModel m;
  std::vector<std::vector<int>> x(net.arc_count()), l(net.arc_count()), vl(net.arc_count()),
      vf(net.arc_count());
  // f[a][k1][k2]
  std::vector<std::vector<std::vector<int>>> f(net.arc_count());
  std::vector<std::vector<int>> y(N), s(N), w(N);
  std::map<NodeId, std::vector<int>> g;

  for (ArcId a = 0; a < static_cast<ArcId>(net.arc_count()); ++a) {
    const Arc& arc = net.arc(a);
    for (int k = 0; k < K; ++k)
      x[a].push_back(m.add_var(vname("x", {arc.tail, arc.head, k}), VarKind::binary, 0, 1));
  }
  for (NodeId c : customers)
    for (int k = 0; k < K; ++k) g[c].push_back(m.add_var(vname("g", {c, k}), VarKind::binary, 0, 1));
  for (ArcId a = 0; a < static_cast<ArcId>(net.arc_count()); ++a) {
    const Arc& arc = net.arc(a);
    for (int k = 0; k < K; ++k)
      l[a].push_back(m.add_var(vname("l", {arc.tail, arc.head, k}), VarKind::binary, 0, 1));
    f[a].assign(K, std::vector<int>(K, -1));
    for (int k1 = 0; k1 < K; ++k1)
      for (int k2 = 0; k2 < K; ++k2)
        if (k1 != k2)
          f[a][k1][k2] = m.add_var(vname("f", {arc.tail, arc.head, k1, k2}), VarKind::binary, 0, 1);
  }
  for (NodeId i = 0; i < N; ++i)
    for (int k = 0; k < K; ++k) {
      y[i].push_back(m.add_var(vname("y", {i, k}), VarKind::continuous, 0, kInf));
      s[i].push_back(m.add_var(vname("s", {i, k}), VarKind::continuous, 0, kInf));
      w[i].push_back(m.add_var(vname("w", {i, k}), VarKind::continuous, 0, kInf));
    }
  for (ArcId a = 0; a < static_cast<ArcId>(net.arc_count()); ++a) {
    const Arc& arc = net.arc(a);
    for (int k = 0; k < K; ++k) {
      vl[a].push_back(m.add_var(vname("vl", {arc.tail, arc.head, k}), VarKind::continuous, 0, kInf));
      vf[a].push_back(m.add_var(vname("vf", {arc.tail, arc.head, k}), VarKind::continuous, 0, kInf));
    }
  }

  // Objective: dispatch plus energy.
  for (ArcId a = 0; a < static_cast<ArcId>(net.arc_count()); ++a) {
    const Arc& arc = net.arc(a);
    const double e = p.c2 * p.alpha / p.gamma * arc.time;
    for (int k = 0; k < K; ++k) {
      if (arc.tail == kDepot) m.objective.push_back({x[a][k], p.c1});
      m.objective.push_back({vl[a][k], e});
      m.objective.push_back({vf[a][k], e * (1.0 - p.beta)});
    }
  }

  // Flow balance, at most one departure per node and truck.
  for (NodeId j = 0; j < N; ++j)
    for (int k = 0; k < K; ++k) {
      std::vector<Term> bal, out;
      for (ArcId a : net.in_arcs(j)) bal.push_back({x[a][k], 1.0});
      for (ArcId a : net.out_arcs(j)) {
        bal.push_back({x[a][k], -1.0});
        out.push_back({x[a][k], 1.0});
      }
      m.add_row(vname("flow", {j, k}), bal, Sense::eq, 0.0);
      m.add_row(vname("once", {j, k}), out, Sense::le, 1.0);
    }
  // Every customer served by exactly one truck that visits it.
  for (NodeId c : customers) {
    std::vector<Term> t;
    for (int k = 0; k < K; ++k) t.push_back({g[c][k], 1.0});
    m.add_row(vname("serve", {c}), t, Sense::eq, 1.0);
  }
  for (NodeId c : customers)
    for (int k = 0; k < K; ++k) {
      std::vector<Term> t;
      for (ArcId a : net.in_arcs(c)) t.push_back({x[a][k], 1.0});
      t.push_back({g[c][k], -1.0});
      m.add_row(vname("visit", {c, k}), t, Sense::ge, 0.0);
    }
  // Initial load and capacity.
  for (int k = 0; k < K; ++k) {
    std::vector<Term> t{{y[kDepot][k], 1.0}};
    for (NodeId c : customers) t.push_back({g[c][k], -inst.customer(c).q});
    m.add_row(vname("load0", {k}), t, Sense::eq, 0.0);
    m.add_row(vname("cap", {k}), {{y[kDepot][k], 1.0}}, Sense::le, p.Q);
  }
  // y_i - q_j g_j + M(1 - x) >= y_j.
  for (ArcId a = 0; a < static_cast<ArcId>(net.arc_count()); ++a) {
    const Arc& arc = net.arc(a);
    const bool cust = inst.is_customer(arc.head);
    if (!(cust || (opts.transit_loads && arc.head != kDepot))) continue;
    for (int k = 0; k < K; ++k) {
      std::vector<Term> t{{y[arc.tail][k], 1.0}, {x[a][k], -M_vol}, {y[arc.head][k], -1.0}};
      if (cust) t.push_back({g[arc.head][k], -inst.customer(arc.head).q});
      m.add_row(vname("vol", {arc.tail, arc.head, k}), t, Sense::ge, -M_vol);
    }
  }
  // Platoon roles and size.
  for (ArcId a = 0; a < static_cast<ArcId>(net.arc_count()); ++a) {
    const Arc& arc = net.arc(a);
    for (int k = 0; k < K; ++k) {
      std::vector<Term> t{{x[a][k], 1.0}, {l[a][k], -1.0}};
      for (int k1 = 0; k1 < K; ++k1)
        if (k1 != k) t.push_back({f[a][k1][k], -1.0});
      m.add_row(vname("role", {arc.tail, arc.head, k}), t, Sense::eq, 0.0);
    }
    for (int k1 = 0; k1 < K; ++k1) {
      std::vector<Term> t{{l[a][k1], -(p.L - 1.0)}};
      for (int k2 = 0; k2 < K; ++k2)
        if (k2 != k1) t.push_back({f[a][k1][k2], 1.0});
      m.add_row(vname("psize", {arc.tail, arc.head, k1}), t, Sense::le, 0.0);
    }
  }
  // Synchronised departures: |dep_k1 - dep_k2| <= M(1 - f).
  for (ArcId a = 0; a < static_cast<ArcId>(net.arc_count()); ++a) {
    const Arc& arc = net.arc(a);
    const NodeId i = arc.tail;
    for (int k1 = 0; k1 < K; ++k1)
      for (int k2 = 0; k2 < K; ++k2) {
        if (k1 == k2) continue;
        const std::vector<Term> diff{{s[i][k1], 1.0}, {w[i][k1], 1.0}, {s[i][k2], -1.0}, {w[i][k2], -1.0}};
        auto lo = diff, hi = diff;
        lo.push_back({f[a][k1][k2], -M});
        hi.push_back({f[a][k1][k2], M});
        m.add_row(vname("syncA", {arc.tail, arc.head, k1, k2}), lo, Sense::ge, -M);
        m.add_row(vname("syncB", {arc.tail, arc.head, k1, k2}), hi, Sense::le, M);
      }
  }
  // Time propagation into non-depot nodes.
  for (ArcId a = 0; a < static_cast<ArcId>(net.arc_count()); ++a) {
    const Arc& arc = net.arc(a);
    if (arc.head == kDepot) continue;
    for (int k = 0; k < K; ++k)
      m.add_row(vname("time", {arc.tail, arc.head, k}),
                {{s[arc.tail][k], 1.0}, {w[arc.tail][k], 1.0}, {x[a][k], M}, {s[arc.head][k], -1.0}},
                Sense::le, M - arc.time);
  }
  // Windows.
  for (NodeId c : customers) {
    const CustomerDemand& cd = inst.customer(c);
    for (int k = 0; k < K; ++k) {
      m.add_row(vname("ea", {c, k}), {{g[c][k], cd.t_ea}, {s[c][k], -1.0}}, Sense::le, 0.0);
      m.add_row(vname("ld", {c, k}), {{s[c][k], 1.0}, {w[c][k], 1.0}, {g[c][k], -cd.t_ld}}, Sense::le, 0.0);
    }
  }
  // Linearised energy terms.
  for (ArcId a = 0; a < static_cast<ArcId>(net.arc_count()); ++a) {
    const Arc& arc = net.arc(a);
    const NodeId i = arc.tail;
    for (int k = 0; k < K; ++k) {
      const int yi = y[i][k];
      const std::string idx = "_" + std::to_string(arc.tail) + "_" + std::to_string(arc.head) + "_" +
                              std::to_string(k);
      m.add_row("vl_cap" + idx, {{vl[a][k], 1.0}, {l[a][k], -full}}, Sense::le, 0.0);
      m.add_row("vl_ub" + idx, {{vl[a][k], 1.0}, {yi, -p.eta}}, Sense::le, p.gamma);
      m.add_row("vl_lb" + idx, {{vl[a][k], 1.0}, {yi, -p.eta}, {l[a][k], -full}}, Sense::ge,
                p.gamma - full);
      std::vector<Term> cap{{vf[a][k], 1.0}}, lb{{vf[a][k], 1.0}, {yi, -p.eta}};
      for (int k1 = 0; k1 < K; ++k1) {
        if (k1 == k) continue;
        cap.push_back({f[a][k1][k], -full});
        lb.push_back({f[a][k1][k], -full});
      }
      m.add_row("vf_cap" + idx, cap, Sense::le, 0.0);
      m.add_row("vf_ub" + idx, {{vf[a][k], 1.0}, {yi, -p.eta}}, Sense::le, p.gamma);
      m.add_row("vf_lb" + idx, lb, Sense::ge, p.gamma - full);
    }
  }
  std::map<int, double> obj;
  for (const Term& t : m.objective) obj[t.var] += t.coef;
  m.objective.clear();
  for (auto [v, c] : obj)
    if (c != 0.0) m.objective.push_back({v, c});
  return m;
}

/// Closed-form variable and row counts of build_full_model.
struct ModelCounts {
  std::size_t x = 0, l = 0, f = 0, g = 0, y = 0, s = 0, w = 0, vl = 0, vf = 0;
  std::size_t variables = 0;
  std::size_t rows = 0;
};

inline ModelCounts expected_counts(const ProblemInstance& inst, const ModelOptions& opts = {}) {
  const RoadNetwork& net = inst.network();
  const std::size_t K = static_cast<std::size_t>(model_truck_count(inst, opts));
  const std::size_t A = net.arc_count(), N = static_cast<std::size_t>(net.node_count());
  const std::size_t C = inst.customers().size();
  std::size_t into_customer = 0, into_non_depot = 0;
  for (const Arc& a : net.arcs()) {
    into_customer += inst.is_customer(a.head) ? 1 : 0;
    into_non_depot += a.head != kDepot ? 1 : 0;
  }
  ModelCounts c;
  c.x = c.l = c.vl = c.vf = A * K;
  c.f = A * K * (K > 0 ? K - 1 : 0);
  c.g = C * K;
  c.y = c.s = c.w = N * K;
  c.variables = c.x + c.l + c.f + c.g + c.y + c.s + c.w + c.vl + c.vf;
  const std::size_t vol = (opts.transit_loads ? into_non_depot : into_customer) * K;
  c.rows = 2 * N * K + C + C * K + 2 * K + vol + 2 * A * K + 2 * c.f + into_non_depot * K +
           2 * C * K + 6 * A * K;
  return c;
}

/// Objective value of a point.
inline double objective_value(const MilpModel& m, const std::vector<double>& values) {
  double z = 0.0;
  for (const Term& t : m.objective) z += t.coef * values.at(t.var);
  return z;
}

/// Names of rows and bounds the point violates by more than `tol`.
inline std::vector<std::string> violated_rows(const MilpModel& m, const std::vector<double>& values,
                                              double tol = 1e-6) {
  std::vector<std::string> bad;
  for (std::size_t v = 0; v < m.vars.size(); ++v) {
    const double x = values.at(v);
    if (x < m.vars[v].lower - tol || x > m.vars[v].upper + tol) bad.push_back(m.vars[v].name);
    if (m.vars[v].kind == VarKind::binary && std::abs(x - std::round(x)) > tol)
      bad.push_back(m.vars[v].name);
  }
  for (const Constraint& c : m.rows) {
    double lhs = 0.0;
    for (const Term& t : c.terms) lhs += t.coef * values.at(t.var);
    const bool ok = c.sense == Sense::le   ? lhs <= c.rhs + tol
                    : c.sense == Sense::ge ? lhs >= c.rhs - tol
                                           : std::abs(lhs - c.rhs) <= tol;
    if (!ok) bad.push_back(c.name);
  }
  return bad;
}

/// Model point representing a solution. Route r maps to truck index r.
///
/// Only meaningful for routes that visit each node at most once; throws
/// MalformedSolution otherwise or when the fleet is too small.
inline std::vector<double> encode_solution(const MilpModel& m, const ProblemInstance& inst,
                                           const std::vector<RoutePlan>& routes, const Schedule& sched) {
  using detail::vname;
  const Parameters& p = inst.params();
  std::vector<double> v(m.vars.size(), 0.0);
  auto set = [&](const std::string& name, double val) { v[m.var(name)] = val; };
  for (std::size_t r = 0; r < routes.size(); ++r) {
    const RoutePlan& route = routes[r];
    if (!route.dispatched()) continue;
    const int k = static_cast<int>(r);
    if (!m.find(vname("y", {kDepot, k})))
      throw MalformedSolution("model fleet is smaller than the number of routes");
    std::vector<bool> seen(inst.network().node_count(), false);
    for (std::size_t pos = 0; pos + 1 < route.path.size(); ++pos) {
      const NodeId n = route.path[pos];
      if (seen[n]) throw MalformedSolution("route revisits node " + std::to_string(n));
      seen[n] = true;
    }
    for (std::size_t pos : route.serve_index) set(vname("g", {route.path[pos], k}), 1.0);
    const TruckTimes& tt = sched.trucks[r];
    for (std::size_t a = 0; a < route.arc_count(); ++a) {
      const NodeId i = route.path[a], j = route.path[a + 1];
      const double y = route.loads[a];
      set(vname("x", {i, j, k}), 1.0);
      set(vname("y", {i, k}), y);
      set(vname("s", {i, k}), tt.arrival[a]);
      set(vname("w", {i, k}), tt.wait[a]);
      const ArcRole& role = tt.roles[a];
      const double weight = p.eta * y + p.gamma;
      if (role.role == Role::follower) {
        int leader = -1;
        for (std::size_t o = 0; o < routes.size(); ++o)
          if (routes[o].truck == role.leader) leader = static_cast<int>(o);
        set(vname("f", {i, j, leader, k}), 1.0);
        set(vname("vf", {i, j, k}), weight);
      } else {
        set(vname("l", {i, j, k}), 1.0);
        set(vname("vl", {i, j, k}), weight);
      }
    }
  }
  return v;
}

}  // namespace platoon
