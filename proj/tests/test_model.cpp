#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "fixtures.hpp"
#include "platoon/generate.hpp"
#include "platoon/mps.hpp"
#include "platoon/orchestrator.hpp"

using namespace platoon;

namespace {

std::size_t count_kind(const MilpModel& m, VarKind k) {
  return static_cast<std::size_t>(
      std::count_if(m.vars.begin(), m.vars.end(), [&](const Variable& v) { return v.kind == k; }));
}

void expect_same_model(const MilpModel& a, const MilpModel& b) {
  ASSERT_EQ(a.vars.size(), b.vars.size());
  for (std::size_t v = 0; v < a.vars.size(); ++v) {
    EXPECT_EQ(a.vars[v].name, b.vars[v].name);
    EXPECT_EQ(a.vars[v].kind, b.vars[v].kind);
    EXPECT_EQ(a.vars[v].lower, b.vars[v].lower);
    EXPECT_EQ(a.vars[v].upper, b.vars[v].upper);
  }
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    EXPECT_EQ(a.rows[r].name, b.rows[r].name);
    EXPECT_EQ(a.rows[r].sense, b.rows[r].sense);
    EXPECT_EQ(a.rows[r].rhs, b.rows[r].rhs);
    ASSERT_EQ(a.rows[r].terms.size(), b.rows[r].terms.size()) << a.rows[r].name;
    for (std::size_t t = 0; t < a.rows[r].terms.size(); ++t) {
      EXPECT_EQ(a.rows[r].terms[t].var, b.rows[r].terms[t].var);
      EXPECT_EQ(a.rows[r].terms[t].coef, b.rows[r].terms[t].coef);
    }
  }
  ASSERT_EQ(a.objective.size(), b.objective.size());
  for (std::size_t t = 0; t < a.objective.size(); ++t) {
    EXPECT_EQ(a.objective[t].var, b.objective[t].var);
    EXPECT_EQ(a.objective[t].coef, b.objective[t].coef);
  }
}

Solution alone(const ProblemInstance& inst, std::vector<RoutePlan> routes) {
  Solution s;
  s.routes = std::move(routes);
  for (const RoutePlan& r : s.routes) s.schedule.trucks.push_back(fixtures::drive_through(r, inst.network()));
  s.cost = evaluate_solution(inst, s);
  return s;
}

}  // namespace

TEST(Model, CountsMatchClosedForm) {
  const ProblemInstance toy = toy_instance();
  for (int K : {1, 2, 3}) {
    for (bool transit : {true, false}) {
      ModelOptions o;
      o.trucks = K;
      o.transit_loads = transit;
      const MilpModel m = build_full_model(toy, o);
      const ModelCounts c = expected_counts(toy, o);
      const std::size_t A = toy.network().arc_count();
      EXPECT_EQ(m.vars.size(), c.variables);
      EXPECT_EQ(m.rows.size(), c.rows);
      EXPECT_EQ(m.count_prefix("x_"), A * K);
      EXPECT_EQ(m.count_prefix("l_"), A * K);
      EXPECT_EQ(m.count_prefix("f_"), A * K * (K - 1));
      EXPECT_EQ(m.count_prefix("g_"), 2u * K);
      EXPECT_EQ(count_kind(m, VarKind::binary), c.x + c.l + c.f + c.g);
    }
  }
}

TEST(Model, FleetDefaultsToCustomerCount) {
  const ProblemInstance grid = grid_instance();
  EXPECT_EQ(model_truck_count(grid), static_cast<int>(grid.customers().size()));
  ModelOptions o;
  o.trucks = -1;
  EXPECT_THROW(model_truck_count(grid, o), InstanceInvalid);
}

TEST(Model, ObjectiveCoefficients) {
  const ProblemInstance toy = toy_instance();
  ModelOptions o;
  o.trucks = 2;
  const MilpModel m = build_full_model(toy, o);
  std::map<std::string, double> coef;
  for (const Term& t : m.objective) coef[m.vars[t.var].name] += t.coef;
  EXPECT_DOUBLE_EQ(coef["x_0_1_0"], 271.0);
  EXPECT_EQ(coef.count("x_1_0_0"), 0u);
  const double e = toy.params().alpha / toy.params().gamma * 4.0;
  EXPECT_NEAR(coef["vl_0_1_1"], e, 1e-12);
  EXPECT_NEAR(coef["vf_0_1_1"], e * 0.9, 1e-12);
}

TEST(Model, EncodedToyPlansSatisfyEveryRow) {
  const ProblemInstance toy = toy_instance();
  ModelOptions o;
  o.trucks = 2;
  const MilpModel m = build_full_model(toy, o);
  const Solution s = alone(toy, fixtures::toy_routes(toy, false));
  const auto point = encode_solution(m, toy, s.routes, s.schedule);
  EXPECT_TRUE(violated_rows(m, point).empty());
  EXPECT_NEAR(objective_value(m, point), s.cost.total, 1e-9);
  EXPECT_NEAR(s.cost.total, 542 + 26.84, 1e-9);
}

TEST(Model, EncodedPlatoonSatisfiesEveryRow) {
  // Without the revisit of A: both trucks share O->A and A->O on one-stop loops.
  std::vector<Arc> arcs;
  detail::add_link(arcs, 0, 1, 4.0);
  detail::add_link(arcs, 1, 2, 2.0);
  detail::add_link(arcs, 1, 3, 2.0);
  detail::add_link(arcs, 2, 0, 7.0);
  detail::add_link(arcs, 3, 0, 7.0);
  const ProblemInstance inst(RoadNetwork(4, arcs), {{2, 20, 0, 50}, {3, 10, 0, 50}}, Parameters{});
  const std::vector<NodeId> c2{2}, c3{3};
  const std::vector<RoutePlan> routes{route_from_path(0, {0, 1, 2, 0}, c2, inst),
                                      route_from_path(1, {0, 1, 3, 0}, c3, inst)};
  const Schedule sched = *schedule_exact(routes, inst, {}).schedule;
  ASSERT_EQ(sched.trucks[0].roles[0].role, Role::follower);
  const CostBreakdown cost = evaluate_solution(inst, routes, sched);
  ModelOptions o;
  o.trucks = 2;
  const MilpModel m = build_full_model(inst, o);
  const auto point = encode_solution(m, inst, routes, sched);
  EXPECT_TRUE(violated_rows(m, point).empty());
  EXPECT_NEAR(objective_value(m, point), cost.total, 1e-9);
  EXPECT_DOUBLE_EQ(point[m.var("f_0_1_1_0")], 1.0);
  // Breaking the synchronisation trips the coupling rows.
  auto broken = point;
  broken[m.var("w_0_0")] += 1.0;
  EXPECT_FALSE(violated_rows(m, broken).empty());
}

TEST(Model, EncodedHeuristicOutputs) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    GenerateOptions g;
    g.network = NetworkKind::random;
    g.nodes = 8;
    g.customers = 4;
    g.seed = seed;
    g.tw_tolerance = 60;
    const ProblemInstance inst = instance_from_json(generate_instance(g));
    const Solution s = solve(inst);
    if (!find_revisits(s.routes).empty()) continue;
    ModelOptions o;
    o.trucks = static_cast<int>(s.routes.size());
    const MilpModel m = build_full_model(inst, o);
    const auto point = encode_solution(m, inst, s.routes, s.schedule);
    const auto bad = violated_rows(m, point);
    EXPECT_TRUE(bad.empty()) << "seed " << seed << " first " << (bad.empty() ? "" : bad.front());
    EXPECT_NEAR(objective_value(m, point), s.cost.total, 1e-6) << "seed " << seed;
    ++checked;
  }
  EXPECT_GE(checked, 4);
}

TEST(Model, EncodeRejectsRevisits) {
  const ProblemInstance toy = toy_instance();
  ModelOptions o;
  o.trucks = 2;
  const MilpModel m = build_full_model(toy, o);
  const Solution s = fixtures::toy_platoon_solution(toy);
  EXPECT_THROW(encode_solution(m, toy, s.routes, s.schedule), MalformedSolution);
  o.trucks = 1;
  const Solution plain = alone(toy, fixtures::toy_routes(toy, false));
  EXPECT_THROW(encode_solution(build_full_model(toy, o), toy, plain.routes, plain.schedule),
               MalformedSolution);
}

TEST(Mps, RoundTripIsBitExact) {
  for (const ProblemInstance& inst : {toy_instance(), grid_instance()}) {
    ModelOptions o;
    o.trucks = 2;
    const MilpModel m = build_full_model(inst, o);
    const std::string text = write_mps(m);
    const MilpModel back = parse_mps(text);
    expect_same_model(m, back);
    EXPECT_EQ(write_mps(back), text);
  }
}

TEST(Mps, AwkwardNumbersSurvive) {
  MilpModel m;
  const int a = m.add_var("a", VarKind::continuous, -kInf, kInf);
  const int b = m.add_var("b", VarKind::binary, 0, 1);
  const int c = m.add_var("c", VarKind::continuous, 0.1, 0.1);
  const int d = m.add_var("d_with_a_rather_long_name", VarKind::continuous, -3.5, 1e300);
  m.add_row("r", {{a, 0.1 + 0.2}, {b, 1.0 / 3.0}, {c, -2.5e-17}, {d, 1.0}}, Sense::ge, 5e-324);
  m.add_row("e", {{a, 1}}, Sense::eq, -7);
  m.objective = {{b, 271}, {d, 3.07 * 2.2}};
  const std::string text = write_mps(m);
  const MilpModel back = parse_mps(text);
  expect_same_model(m, back);
  EXPECT_EQ(write_mps(back), text);
}

TEST(Mps, EmptyModel) {
  const MilpModel m;
  const std::string text = write_mps(m);
  EXPECT_EQ(text, "NAME          PLATOON\nROWS\n N  COST\nCOLUMNS\nRHS\nBOUNDS\nENDATA\n");
  const MilpModel back = parse_mps(text);
  EXPECT_TRUE(back.vars.empty());
  EXPECT_TRUE(back.rows.empty());
}

TEST(Mps, IntegerMarkersBracketBinaryColumns) {
  MilpModel m;
  m.add_var("y", VarKind::continuous, 0, kInf);
  m.add_var("x1", VarKind::binary, 0, 1);
  m.add_var("x2", VarKind::binary, 0, 1);
  m.add_var("z", VarKind::continuous, 0, kInf);
  m.add_var("x3", VarKind::binary, 0, 1);
  const std::string text = write_mps(m);
  std::vector<std::string> cols;
  std::istringstream in(text.substr(text.find("COLUMNS\n") + 8));
  for (std::string line; std::getline(in, line) && line != "RHS";) cols.push_back(line);
  ASSERT_EQ(cols.size(), 9u);
  EXPECT_NE(cols[0].find("y"), std::string::npos);
  EXPECT_NE(cols[1].find("'INTORG'"), std::string::npos);
  EXPECT_NE(cols[4].find("'INTEND'"), std::string::npos);
  EXPECT_NE(cols[6].find("'INTORG'"), std::string::npos);
  EXPECT_NE(cols[8].find("'INTEND'"), std::string::npos);
  // Fixed columns: name from 5, row from 15, value from 25.
  EXPECT_EQ(cols[0], "    y         COST      0");
}

TEST(Mps, ParseErrors) {
  auto line_of = [](const std::string& text) {
    try {
      parse_mps(text);
    } catch (const ParseError& e) {
      return static_cast<int>(e.line());
    }
    return -1;
  };
  EXPECT_EQ(line_of("NAME x\nROWS\n N COST\nCOLUMNS\n x COST abc\nENDATA\n"), 5);
  EXPECT_EQ(line_of("NAME x\nROWS\n N COST\nCOLUMNS\n x NOPE 1\nENDATA\n"), 5);
  EXPECT_EQ(line_of("NAME x\nROWS\n Q r\nENDATA\n"), 3);
  EXPECT_EQ(line_of("NAME x\nRANGES\nENDATA\n"), 2);
  EXPECT_GT(line_of("NAME x\nROWS\n N COST\n"), 0);
  EXPECT_EQ(line_of("NAME x\nROWS\n N COST\nCOLUMNS\nBOUNDS\n UP BND ghost 1\nENDATA\n"), 6);
}

TEST(Mps, FreeLayoutIsAccepted) {
  const std::string text =
      "NAME t\nROWS\n\tN obj\n\tL c1\nCOLUMNS\n\tx obj 1 c1 2\nRHS\n\trhs c1 4\nBOUNDS\n\tUP bnd x 3\nENDATA\n";
  const MilpModel m = parse_mps(text);
  ASSERT_EQ(m.vars.size(), 1u);
  EXPECT_EQ(m.vars[0].upper, 3.0);
  EXPECT_EQ(m.rows[0].rhs, 4.0);
  EXPECT_EQ(m.rows[0].terms[0].coef, 2.0);
  EXPECT_EQ(m.objective[0].coef, 1.0);
}
