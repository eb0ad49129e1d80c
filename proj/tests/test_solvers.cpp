#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "q2o/solvers.hpp"
#include "testutil.hpp"

using namespace q2o;

namespace {

std::vector<std::string> all_aliases(const JoinGraph& g) {
  std::vector<std::string> out;
  for (const auto& r : g.relations()) out.push_back(r.alias);
  return out;
}

bool is_permutation_of(const JoinGraph& g, std::vector<std::string> order) {
  std::vector<std::string> expected = all_aliases(g);
  std::sort(expected.begin(), expected.end());
  std::sort(order.begin(), order.end());
  return order == expected;
}

JoinGraph chain_of(int n) {
  std::vector<Relation> rels;
  std::vector<EdgeSpec> edges;
  for (int i = 0; i < n; ++i) {
    rels.push_back({"r" + std::to_string(i), "", 2.0 + i});
    if (i > 0) edges.emplace_back("r" + std::to_string(i - 1), "r" + std::to_string(i), 0.5);
  }
  return JoinGraph("chain" + std::to_string(n), rels, edges);
}

}  // namespace

TEST_CASE("default_solver_config scales sweeps with the instance") {
  SolverConfig c = default_solver_config(3);
  CHECK(c.restarts == 16);
  CHECK(c.sweeps == 600);
  CHECK(c.cooling_alpha == 0.95);
  CHECK(c.t_initial == 0.0);
  CHECK_FALSE(c.time_budget_ms.has_value());
  CHECK(default_solver_config(0).sweeps == 200);
}

TEST_CASE("solver config is validated") {
  JoinGraph g = testutil::chain3();
  PermutationModel model = build_nl_model(g, Objective::kCout);
  SolverConfig c = default_solver_config(3);

  c.restarts = 0;
  CHECK_THROWS_WITH_AS(solve_permutation_sa(model, c), doctest::Contains("ConfigError"),
                       Error);
  c = default_solver_config(3);
  c.sweeps = 0;
  CHECK_THROWS_AS(solve_permutation_sa(model, c), Error);
  c = default_solver_config(3);
  c.cooling_alpha = 1.0;
  CHECK_THROWS_AS(solve_permutation_sa(model, c), Error);
  c = default_solver_config(3);
  c.time_budget_ms = 0.0;
  CHECK_THROWS_AS(solve_permutation_sa(model, c), Error);
}

TEST_CASE("permutation annealer finds the chain optimum") {
  JoinGraph g = testutil::chain3();
  PermutationModel model = build_nl_model(g, Objective::kCout);
  SolverConfig c = default_solver_config(3);
  c.seed = 42;
  c.restarts = 4;
  c.sweeps = 100;

  Solution s = solve_permutation_sa(model, c);
  CHECK(s.objective == 200.0);
  CHECK(is_permutation_of(g, s.order));
  CHECK(s.objective == model.evaluate(s.order));
  CHECK(s.solver_id == "sa:nl");
  CHECK(s.valid);
  CHECK(s.restarts_used == 4);
  CHECK(s.wall_time_ms >= 0.0);
}

TEST_CASE("degenerate instances") {
  JoinGraph single("one", {{"A", "", 42.0}}, {});
  PermutationModel model = build_nl_model(single, Objective::kCout);
  Solution s = solve_permutation_sa(model, default_solver_config(1));
  CHECK(s.order == std::vector<std::string>{"A"});
  CHECK(s.objective == 0.0);
  CHECK(s.restarts_used == 16);

  JoinGraph two = testutil::two_rel();
  Solution s2 = solve_permutation_sa(build_nl_model(two, Objective::kCout),
                                     default_solver_config(2));
  CHECK(s2.objective == 100.0);
}

TEST_CASE("annealing is deterministic and thread-count independent") {
  JoinGraph g = testutil::random_graph(99, 7, testutil::Topology::kRandom);
  PermutationModel model = build_nl_model(g, Objective::kCout);
  SolverConfig c = default_solver_config(7);
  c.seed = 7;
  c.restarts = 8;
  c.sweeps = 60;

  Solution a = solve_permutation_sa(model, c);
  Solution b = solve_permutation_sa(model, c);
  Solution serial = solve_permutation_sa_serial(model, c);

  CHECK(a.order == b.order);
  CHECK(a.objective == b.objective);
  CHECK(a.restarts_used == b.restarts_used);
  CHECK(a.order == serial.order);
  CHECK(a.objective == serial.objective);
  CHECK(a.restarts_used == serial.restarts_used);
}

TEST_CASE("solution objective re-evaluates exactly") {
  for (std::uint64_t seed : {1, 2, 3}) {
    JoinGraph g = testutil::random_graph(seed, 6, testutil::Topology::kStar);
    PermutationModel model = build_nl_model(g, Objective::kCout);
    SolverConfig c = default_solver_config(6);
    c.seed = seed;
    Solution s = solve_permutation_sa(model, c);
    CHECK(s.objective == model.evaluate(s.order));
  }
}

TEST_CASE("qubo annealer reaches the one-hot optimum") {
  JoinGraph g = testutil::chain3();
  Qubo q = build_qubo(g);
  SolverConfig c = default_solver_config(3);
  c.seed = 5;

  QuboSample sample = solve_qubo_sa(q, c);
  CHECK(sample.energy == doctest::Approx(13.287712379549449).epsilon(1e-9));
  CHECK(sample.restarts_used == 16);

  DecodeResult d = decode(q, sample.assignment);
  REQUIRE(d.ok());
  CHECK(plan_cost_logproduct(g, *d.order) ==
        doctest::Approx(13.287712379549449).epsilon(1e-9));

  QuboSample again = solve_qubo_sa(q, c);
  QuboSample serial = solve_qubo_sa_serial(q, c);
  CHECK(sample.assignment == again.assignment);
  CHECK(sample.energy == again.energy);
  CHECK(sample.assignment == serial.assignment);
  CHECK(sample.energy == serial.energy);
}

TEST_CASE("repair always returns a valid permutation") {
  JoinGraph g = testutil::chain3();
  Qubo q = build_qubo(g);

  BinaryAssignment valid = encode_order(q, {"B", "C", "A"});
  CHECK(repair(q, valid) == std::vector<std::string>{"B", "C", "A"});

  BinaryAssignment zeros(q.n_vars, 0);
  CHECK(repair(q, zeros) == std::vector<std::string>{"A", "B", "C"});

  BinaryAssignment clash(q.n_vars, 0);
  clash[q.index(1, 0)] = 1;  // B at position 0
  clash[q.index(2, 0)] = 1;  // C also at position 0
  CHECK(repair(q, clash) == std::vector<std::string>{"B", "A", "C"});

  BinaryAssignment ones(q.n_vars, 1);
  CHECK(is_permutation_of(g, repair(q, ones)));

  CHECK_THROWS_WITH_AS(repair(q, BinaryAssignment(4)),
                       doctest::Contains("LengthMismatch"), Error);
}

TEST_CASE("left-deep oracle") {
  auto [order, cost] = dp_leftdeep(testutil::chain3());
  CHECK(order == std::vector<std::string>{"A", "B", "C"});
  CHECK(cost == 200.0);

  auto [order2, cost2] = dp_leftdeep(testutil::two_rel());
  CHECK(order2 == std::vector<std::string>{"A", "B"});
  CHECK(cost2 == 100.0);

  JoinGraph single("one", {{"A", "", 9.0}}, {});
  auto [order3, cost3] = dp_leftdeep(single);
  CHECK(order3 == std::vector<std::string>{"A"});
  CHECK(cost3 == 0.0);

  CHECK_THROWS_WITH_AS(dp_leftdeep(chain_of(21)),
                       doctest::Contains("oracle unavailable above n=20"), Error);
}

TEST_CASE("left-deep oracle under the no-cross-product rule") {
  auto [order, cost] = dp_leftdeep(testutil::chain3(), true);
  CHECK(order == std::vector<std::string>{"A", "B", "C"});
  CHECK(cost == 200.0);

  JoinGraph split("split", {{"A", "", 4.0}, {"B", "", 5.0}}, {});
  CHECK_THROWS_WITH_AS(dp_leftdeep(split, true),
                       doctest::Contains("no cross-product-free order"), Error);
  auto [order2, cost2] = dp_leftdeep(split, false);
  CHECK(cost2 == 20.0);
  CHECK(order2 == std::vector<std::string>{"A", "B"});
}

TEST_CASE("exhaustive oracle agrees with the left-deep DP") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    int n = 2 + static_cast<int>(seed % 6);
    auto topo = static_cast<testutil::Topology>(seed % 4);
    JoinGraph g = testutil::random_graph(seed * 131, n, topo);
    auto [dp_order, dp_cost] = dp_leftdeep(g);
    auto [ex_order, ex_cost] = exhaustive(g);
    CHECK(dp_cost == ex_cost);
    CHECK(dp_order == ex_order);
  }

  CHECK_THROWS_WITH_AS(exhaustive(chain_of(9)),
                       doctest::Contains("oracle unavailable above n=8"), Error);
}

TEST_CASE("exhaustive tie-break picks the lexicographically smallest optimum") {
  auto [order, cost] = exhaustive(testutil::chain3());
  CHECK(order == std::vector<std::string>{"A", "B", "C"});
  CHECK(cost == 200.0);

  JoinGraph split("split", {{"A", "", 4.0}, {"B", "", 5.0}}, {});
  CHECK_THROWS_AS(exhaustive(split, true), Error);
}

TEST_CASE("bushy oracle") {
  auto [tree, cost] = dp_bushy(testutil::chain3());
  CHECK(cost == 200.0);
  CHECK(tree.leaf_count() == 3);

  auto [tree2, cost2] = dp_bushy(testutil::two_rel());
  CHECK(cost2 == 100.0);
  CHECK(tree2.leaves() == std::vector<std::string>{"A", "B"});

  JoinGraph single("one", {{"A", "", 9.0}}, {});
  CHECK_THROWS_WITH_AS(dp_bushy(single), doctest::Contains("TooSmall"), Error);
  CHECK_THROWS_WITH_AS(dp_bushy(chain_of(17)),
                       doctest::Contains("oracle unavailable above n=16"), Error);
}

TEST_CASE("bushy optimum never loses to the left-deep optimum") {
  for (std::uint64_t seed = 20; seed < 30; ++seed) {
    int n = 4 + static_cast<int>(seed % 4);
    JoinGraph g = testutil::random_graph(seed, n, testutil::Topology::kRandom);
    double leftdeep = dp_leftdeep(g).second;
    double bushy = dp_bushy(g).second;
    CHECK(bushy <= leftdeep * (1 + 1e-12));
  }
}

TEST_CASE("local remote endpoint anneals within the budget") {
  JoinGraph g = testutil::chain3();
  PermutationModel model = build_nl_model(g, Objective::kCout);
  SolverConfig base = default_solver_config(3);
  base.seed = 3;
  LocalRemoteSolver local(base);

  Solution s = remote_solve(model, 5000.0, local);
  CHECK(s.objective == 200.0);
  CHECK(s.solver_id == "remote:local");
  CHECK(s.wall_time_ms >= 0.0);
}

TEST_CASE("stub endpoint replays canned solutions") {
  JoinGraph g = testutil::chain3();
  PermutationModel model = build_nl_model(g, Objective::kCout);

  std::map<std::string, ReplayEntry> entries;
  entries["chain3"] = ReplayEntry{{"B", "C", "A"}, 123.0, 7.5};
  StubRemoteSolver stub(std::move(entries), 2800.0, false);

  Solution s = remote_solve(model, 0.0, stub);
  CHECK(s.order == std::vector<std::string>{"B", "C", "A"});
  CHECK(s.objective == 200.0);  // re-evaluated, not the recorded number
  CHECK(s.wall_time_ms == 7.5);
  CHECK(s.solver_id == "remote:stub");

  JoinGraph two = testutil::two_rel();
  PermutationModel other = build_nl_model(two, Objective::kCout);
  CHECK_THROWS_WITH_AS(remote_solve(other, 0.0, stub),
                       doctest::Contains("ReplayMissing"), Error);
}

TEST_CASE("stub endpoint loads replay files") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "q2o_replay_test.json";
  {
    std::ofstream out(path);
    out << R"({"chain3": {"order": ["C", "B", "A"], "objective": 200.0,
                "simulated_latency_ms": 3.25},
               "bare": {"order": ["X", "Y"]}})";
  }

  StubRemoteSolver stub = StubRemoteSolver::from_file(path.string(), false);
  JoinGraph g = testutil::chain3();
  PermutationModel model = build_nl_model(g, Objective::kCout);
  Solution s = stub.solve(model, 0.0);
  CHECK(s.order == std::vector<std::string>{"C", "B", "A"});
  CHECK(s.wall_time_ms == 3.25);
  fs::remove(path);

  CHECK_THROWS_WITH_AS(StubRemoteSolver::from_file("/nonexistent/replay.json"),
                       doctest::Contains("cannot open replay file"), Error);

  fs::path bad = fs::temp_directory_path() / "q2o_replay_bad.json";
  {
    std::ofstream out(bad);
    out << R"({"chain3": {"objective": 1.0}})";
  }
  CHECK_THROWS_WITH_AS(StubRemoteSolver::from_file(bad.string()),
                       doctest::Contains("lacks an order array"), Error);
  fs::remove(bad);
}
