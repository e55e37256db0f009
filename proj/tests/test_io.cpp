#include <gtest/gtest.h>

#include <set>
#include <tuple>

#include "fixtures.hpp"
#include "platoon/bench.hpp"

using namespace platoon;

namespace {

void expect_same_instance(const ProblemInstance& a, const ProblemInstance& b) {
  ASSERT_EQ(a.network().node_count(), b.network().node_count());
  ASSERT_EQ(a.network().arc_count(), b.network().arc_count());
  auto arcs = [](const ProblemInstance& inst) {
    std::set<std::tuple<NodeId, NodeId, double>> out;
    for (const Arc& x : inst.network().arcs()) out.emplace(x.tail, x.head, x.time);
    return out;
  };
  EXPECT_EQ(arcs(a), arcs(b));
  ASSERT_EQ(a.customers().size(), b.customers().size());
  for (std::size_t i = 0; i < a.customers().size(); ++i) {
    EXPECT_EQ(a.customers()[i].node, b.customers()[i].node);
    EXPECT_EQ(a.customers()[i].q, b.customers()[i].q);
    EXPECT_EQ(a.customers()[i].t_ea, b.customers()[i].t_ea);
    EXPECT_EQ(a.customers()[i].t_ld, b.customers()[i].t_ld);
  }
  EXPECT_EQ(params_to_json(a.params()), params_to_json(b.params()));
}

std::string invalid_message(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const InstanceInvalid& e) {
    return e.what();
  }
  return "";
}

const char* kMinimal = R"({"nodes": 2, "arcs": [{"from": 0, "to": 1, "hours": 2}, {"from": 1, "to": 0, "hours": 2}],
  "customers": [{"node": 1, "q": 5, "t_ea": 0, "t_ld": 10}]})";

}  // namespace

TEST(InstanceJson, RoundTrip) {
  for (const ProblemInstance& inst : {toy_instance(), grid_instance()}) {
    const std::string text = dump(instance_to_json(inst));
    expect_same_instance(inst, parse_instance(text));
    EXPECT_EQ(dump(instance_to_json(parse_instance(text))), text);
  }
}

TEST(InstanceJson, ShippedFilesLoad) {
  const std::string dir = PLATOON_DATA_DIR;
  expect_same_instance(load_instance(dir + "/toy.json"), toy_instance());
  expect_same_instance(load_instance(dir + "/grid.json"), grid_instance());
}

TEST(InstanceJson, DefaultsKilometresAndUndirected) {
  const ProblemInstance inst = parse_instance(
      R"({"nodes": ["depot", "x"], "speed_kmh": 50, "undirected": true,
          "arcs": [{"from": 0, "to": 1, "km": 100}], "customers": []})");
  ASSERT_EQ(inst.network().arc_count(), 2u);
  EXPECT_DOUBLE_EQ(inst.network().arcs()[1].time, 2.0);
  EXPECT_EQ(inst.network().arcs()[1].tail, 1);
  EXPECT_EQ(inst.params().c1, 271.0);
  EXPECT_EQ(inst.params().L, 4);
  const ProblemInstance default_speed =
      parse_instance(R"({"nodes": 2, "arcs": [{"from": 0, "to": 1, "km": 88.5, "hours": 3}], "customers": []})");
  EXPECT_DOUBLE_EQ(default_speed.network().arcs()[0].time, 3.0);
}

TEST(InstanceJson, FieldErrorsNameTheField) {
  EXPECT_NE(invalid_message(R"({"arcs": [], "customers": []})").find("nodes"), std::string::npos);
  EXPECT_NE(invalid_message(R"({"nodes": 2, "arcs": [{"from": 0, "to": 1}], "customers": []})").find("arcs[0]"),
            std::string::npos);
  EXPECT_NE(invalid_message(R"({"nodes": 2, "arcs": [{"from": 0, "to": 1, "hours": "x"}], "customers": []})")
                .find("arcs[0].hours"),
            std::string::npos);
  EXPECT_NE(invalid_message(R"({"nodes": 2, "depot": 1, "arcs": [], "customers": []})").find("depot"),
            std::string::npos);
  std::string bad = kMinimal;
  bad.insert(bad.size() - 1, R"(, "params": {"zeta": 1})");
  EXPECT_NE(invalid_message(bad).find("params.zeta"), std::string::npos);
  bad = kMinimal;
  bad.insert(bad.size() - 1, R"(, "params": {"L": 1.5})");
  EXPECT_NE(invalid_message(bad).find("params.L"), std::string::npos);
  EXPECT_NE(invalid_message(R"({"nodes": 2, "arcs": [{"from": 0, "to": 1, "hours": 1}],
      "customers": [{"node": 1, "q": 5, "t_ea": 0}]})").find("customers[0].t_ld"),
            std::string::npos);
}

TEST(InstanceJson, SemanticErrorsAreInvalid) {
  // Over capacity, unreachable customer, depot as customer.
  EXPECT_THROW(parse_instance(R"({"nodes": 2, "arcs": [{"from": 0, "to": 1, "hours": 1}, {"from": 1, "to": 0, "hours": 1}],
      "customers": [{"node": 1, "q": 25, "t_ea": 0, "t_ld": 10}]})"),
               InstanceInvalid);
  EXPECT_THROW(parse_instance(R"({"nodes": 3, "arcs": [{"from": 0, "to": 1, "hours": 1}, {"from": 1, "to": 0, "hours": 1}],
      "customers": [{"node": 2, "q": 5, "t_ea": 0, "t_ld": 10}]})"),
               DisconnectedNetwork);
  EXPECT_THROW(parse_instance(R"({"nodes": 2, "arcs": [{"from": 0, "to": 1, "hours": 1}, {"from": 1, "to": 0, "hours": 1}],
      "customers": [{"node": 0, "q": 5, "t_ea": 0, "t_ld": 10}]})"),
               InstanceInvalid);
}

TEST(InstanceJson, SyntaxErrorCarriesPosition) {
  try {
    parse_instance("{\n  \"nodes\": 2,\n  \"arcs\": [,]\n}");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 12u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(load_instance("/nonexistent/instance.json"), IoError);
}

TEST(SolutionJson, RoundTrip) {
  const ProblemInstance toy = toy_instance();
  const Solution s = solve(toy);
  SolverConfig c;
  c.iteration_limit = 7;
  const std::string text = dump(solution_to_json(s, c));
  const Solution back = parse_solution(text);
  ASSERT_EQ(back.routes.size(), s.routes.size());
  for (std::size_t r = 0; r < s.routes.size(); ++r) {
    EXPECT_EQ(back.routes[r].path, s.routes[r].path);
    EXPECT_EQ(back.routes[r].loads, s.routes[r].loads);
    EXPECT_EQ(back.routes[r].serve_index, s.routes[r].serve_index);
    EXPECT_EQ(back.schedule.trucks[r].arrival, s.schedule.trucks[r].arrival);
    EXPECT_EQ(back.schedule.trucks[r].wait, s.schedule.trucks[r].wait);
    for (std::size_t a = 0; a < s.routes[r].arc_count(); ++a) {
      EXPECT_EQ(back.schedule.trucks[r].roles[a].role, s.schedule.trucks[r].roles[a].role);
      EXPECT_EQ(back.schedule.trucks[r].roles[a].leader, s.schedule.trucks[r].roles[a].leader);
    }
  }
  EXPECT_EQ(back.cost.total, s.cost.total);
  EXPECT_TRUE(check_feasibility(toy, back).empty());
  EXPECT_EQ(evaluate_solution(toy, back).total, s.cost.total);
  const Json j = detail::parse_json(text);
  EXPECT_EQ(j["config"]["iteration_limit"], 7);
  EXPECT_EQ(j["config"]["scheduler"], "auto");
}

TEST(SolutionJson, ShapeErrorsAreMalformed) {
  EXPECT_THROW(parse_solution("[]"), MalformedSolution);
  EXPECT_THROW(parse_solution(R"({"trucks": [{"truck": 0}]})"), MalformedSolution);
  EXPECT_THROW(parse_solution(R"({"trucks": [{"truck": 0, "customers": [1], "path": [0, 1, 0], "serve_index": [1],
      "loads": [5, 0], "arrival": [0, 1, 2], "wait": [0, 0], "roles": [{"role": "captain"}, {"role": "alone"}]}]})"),
               MalformedSolution);
  // Arrival vector one short.
  EXPECT_THROW(parse_solution(R"({"trucks": [{"truck": 0, "customers": [1], "path": [0, 1, 0], "serve_index": [1],
      "loads": [5, 0], "arrival": [0, 1], "wait": [0, 0], "roles": [{"role": "alone"}, {"role": "alone"}]}]})"),
               MalformedSolution);
  EXPECT_THROW(parse_solution("{"), ParseError);
}

TEST(Generate, DeterministicPerSeed) {
  for (NetworkKind k : {NetworkKind::yangtze, NetworkKind::grid, NetworkKind::random}) {
    GenerateOptions g;
    g.network = k;
    g.nodes = 12;
    g.customers = 6;
    g.seed = 42;
    EXPECT_EQ(generate_instance(g), generate_instance(g));
    GenerateOptions h = g;
    h.seed = 43;
    EXPECT_NE(generate_instance(g)["customers"], generate_instance(h)["customers"]);
  }
}

TEST(Generate, WindowAndDemandRules) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    GenerateOptions g;
    g.customers = 15;
    g.seed = seed;
    g.tw_tolerance = seed % 3 == 0 ? 0.0 : 20.0;
    const ProblemInstance inst = instance_from_json(generate_instance(g));
    ASSERT_EQ(inst.customers().size(), 15u);
    for (const CustomerDemand& c : inst.customers()) {
      EXPECT_GE(c.q, 1.0);
      EXPECT_LE(c.q, 10.0);
      EXPECT_EQ(c.q, std::round(c.q));
      EXPECT_GE(c.t_ea, 0.0);
      EXPECT_LE(c.t_ea, 10.0);
      EXPECT_GE(c.t_ld - c.t_ea, g.tw_tolerance - 1e-12);
      EXPECT_GE(c.t_ld, inst.dist()(kDepot, c.node));
    }
  }
}

TEST(Generate, RejectsBadOptions) {
  GenerateOptions g;
  g.customers = 38;
  EXPECT_THROW(generate_instance(g), InstanceInvalid);
  g.customers = 3;
  g.tw_tolerance = -1;
  EXPECT_THROW(generate_instance(g), InstanceInvalid);
  g.tw_tolerance = 1;
  g.network = NetworkKind::random;
  g.nodes = 1;
  EXPECT_THROW(generate_instance(g), InstanceInvalid);
  EXPECT_FALSE(network_from_string("moon"));
}

TEST(Generate, RandomNetworksAreConnected) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GenerateOptions g;
    g.network = NetworkKind::random;
    g.nodes = 5 + static_cast<int>(seed);
    g.customers = 3;
    g.seed = seed;
    EXPECT_NO_THROW(all_pairs_shortest_paths(instance_from_json(generate_instance(g)).network()));
  }
}

TEST(Bench, SpecParsing) {
  const BenchSpec s = bench_spec_from_json(detail::parse_json(R"({"network": "grid", "customers": [4, 6],
      "seeds": [1, 2], "iterations": 5, "scheduler": "greedy",
      "sweeps": [{"parameter": "L", "values": [1, 2]}]})"));
  EXPECT_EQ(s.network, NetworkKind::grid);
  EXPECT_EQ(s.customers, (std::vector<int>{4, 6}));
  EXPECT_EQ(s.seeds, (std::vector<std::uint64_t>{1, 2}));
  EXPECT_EQ(*s.solver.iteration_limit, 5);
  EXPECT_EQ(s.solver.scheduler, SchedulerKind::greedy);
  ASSERT_EQ(s.sweeps.size(), 1u);
  EXPECT_EQ(s.sweeps[0].values, (std::vector<double>{1, 2}));
}

TEST(Bench, SpecErrors) {
  for (const char* text : {R"({"network": "moon"})", R"({"sweeps": [{"parameter": "zeta", "values": [1]}]})",
                           R"({"sweeps": [{"values": [1]}]})", R"({"seeds": ["a"]})", R"({"scheduler": 3})",
                           R"({"customers": 2.5})", R"({"sweeps": {"parameter": "L"}})", "[]"})
    EXPECT_THROW(bench_spec_from_json(detail::parse_json(text)), InstanceInvalid) << text;
}

TEST(Bench, RunsAndFormatsCsv) {
  BenchSpec s;
  s.network = NetworkKind::grid;
  s.customers = {3};
  s.seeds = {1, 2};
  s.solver.iteration_limit = 5;
  s.threads = 2;
  s.sweeps = {{"L", {1, 4}}, {"beta", {0.0}}};
  const auto rows = run_bench(s);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].parameter, "L");
  EXPECT_EQ(rows[0].value, 1.0);
  EXPECT_EQ(rows[2].parameter, "beta");
  for (const BenchRow& r : rows) {
    EXPECT_EQ(r.runs, 2);
    EXPECT_EQ(r.status, "OK");
  }
  EXPECT_NEAR(rows[0].mean_benefit, 0.0, 1e-9);
  EXPECT_NEAR(rows[2].mean_benefit, 0.0, 1e-9);
  const std::string csv = bench_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kBenchHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(csv.find("\nL,1,3,"), std::string::npos);
}

TEST(Bench, ShippedSpecParses) {
  EXPECT_NO_THROW(bench_spec_from_json(detail::parse_json(detail::read_file(std::string(PLATOON_DATA_DIR) +
                                                                            "/bench_example.json"))));
}
