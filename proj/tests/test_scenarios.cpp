#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "csnet/analysis.hpp"
#include "csnet/engine.hpp"
#include "csnet/errors.hpp"
#include "csnet/scenarios.hpp"
#include "doctest.h"

using namespace csnet;

namespace {

SwarmConfig small_swarm(int drones, int tasks, HumanPolicyKind kind) {
  SwarmConfig config;
  config.width = 4;
  config.height = 4;
  config.drones = drones;
  for (int i = 0; i < tasks; ++i) config.tasks.push_back({i, 3 - (i % 4), (i + 1) % 4});
  config.human_policy.kind = kind;
  return config;
}

LamConfig lam_config(std::vector<std::string> alphabet, std::vector<std::string> demo,
                     int repetitions) {
  LamConfig config;
  config.action_alphabet = ColorSet::enumeration("action", std::move(alphabet));
  config.demonstrations = {std::move(demo)};
  config.repetitions = repetitions;
  return config;
}

bool approx(double a, double b) { return std::fabs(a - b) < 1e-12; }

}  // namespace

TEST_CASE("swarm config validation names the offending field") {
  SwarmConfig config = small_swarm(2, 2, HumanPolicyKind::ApproveAll);
  CHECK_NOTHROW(validate_swarm_config(config));

  SwarmConfig bad = config;
  bad.width = 0;
  CHECK_THROWS_WITH_AS(validate_swarm_config(bad),
                       "invalid config field 'grid': width and height must be at least 1",
                       InvalidConfigError);

  bad = config;
  bad.drones = 0;
  CHECK_THROWS_AS(validate_swarm_config(bad), InvalidConfigError);

  bad = config;
  bad.tasks.push_back({0, 1, 1});  // duplicate id
  CHECK_THROWS_AS(validate_swarm_config(bad), InvalidConfigError);

  bad = config;
  bad.tasks.push_back({9, 4, 0});  // off the 4x4 grid
  CHECK_THROWS_AS(validate_swarm_config(bad), InvalidConfigError);

  bad = config;
  bad.obstacles.push_back({3, -1, 0});
  CHECK_THROWS_AS(validate_swarm_config(bad), InvalidConfigError);

  bad = config;
  bad.mode_schedule = {{5, 10, CouplingMode::Mas}};  // must start at 0
  CHECK_THROWS_AS(validate_swarm_config(bad), InvalidConfigError);
  bad.mode_schedule = {{0, 5, CouplingMode::Mas}, {6, 9, CouplingMode::Centaurian}};  // gap
  CHECK_THROWS_AS(validate_swarm_config(bad), InvalidConfigError);
  bad.mode_schedule = {{0, 0, CouplingMode::Mas}};  // empty range
  CHECK_THROWS_AS(validate_swarm_config(bad), InvalidConfigError);
  bad.mode_schedule = {{0, 5, CouplingMode::Mas}, {5, 9, CouplingMode::Centaurian}};
  CHECK_NOTHROW(validate_swarm_config(bad));
}

TEST_CASE("drone start cells tile the grid row-major") {
  SwarmConfig config = small_swarm(1, 0, HumanPolicyKind::ApproveAll);
  config.width = 4;
  config.height = 3;
  CHECK(drone_start_cell(config, 0) == std::pair{0, 0});
  CHECK(drone_start_cell(config, 3) == std::pair{3, 0});
  CHECK(drone_start_cell(config, 4) == std::pair{0, 1});
  CHECK(drone_start_cell(config, 11) == std::pair{3, 2});
  CHECK(drone_start_cell(config, 12) == std::pair{0, 0});  // wraps
}

TEST_CASE("grid distance equals Manhattan distance on an open grid") {
  WorldState world;
  world.width = 6;
  world.height = 6;
  CHECK(grid_distance(world, {0, 0}, {2, 3}) == 5);
  CHECK(grid_distance(world, {2, 3}, {0, 0}) == 5);
  CHECK(grid_distance(world, {4, 4}, {4, 4}) == 0);
}

TEST_CASE("grid distance routes around obstacles or gives up") {
  WorldState world;
  world.width = 3;
  world.height = 3;
  world.blocked = {{1, 0}, {1, 1}};
  CHECK(grid_distance(world, {0, 0}, {2, 0}) == 6);  // detour over the top
  CHECK(grid_distance(world, {0, 0}, {1, 0}) == -1);  // blocked target
  CHECK(grid_distance(world, {1, 1}, {0, 0}) == -1);  // blocked source

  world.blocked = {{1, 0}, {1, 1}, {1, 2}};  // full wall
  CHECK(grid_distance(world, {0, 0}, {2, 2}) == -1);
}

TEST_CASE("planner pairs each task with the nearest idle drone") {
  WorldState world;
  world.width = 8;
  world.height = 8;

  SUBCASE("single drone, single task") {
    world.idle_drones = {{0, {0, 0}}};
    world.pending_tasks = {{4, {2, 3}}};
    auto plan = llm_stub_plan(world);
    REQUIRE(plan.size() == 1);
    CHECK(plan[0] == std::pair{0, 4});
  }
  SUBCASE("no idle drones, no plan") {
    world.pending_tasks = {{0, {1, 1}}};
    CHECK(llm_stub_plan(world).empty());
  }
  SUBCASE("equidistant drones tie to the lower id") {
    world.idle_drones = {{3, {0, 2}}, {7, {2, 0}}};
    world.pending_tasks = {{5, {1, 1}}};
    auto plan = llm_stub_plan(world);
    REQUIRE(plan.size() == 1);
    CHECK(plan[0] == std::pair{3, 5});
  }
  SUBCASE("equidistant tasks tie to the lower id") {
    world.idle_drones = {{2, {0, 0}}};
    world.pending_tasks = {{6, {1, 1}}, {4, {1, 1}}};
    auto plan = llm_stub_plan(world);
    REQUIRE(plan.size() == 1);
    CHECK(plan[0] == std::pair{2, 4});
  }
  SUBCASE("globally closest pair goes first") {
    world.idle_drones = {{0, {0, 0}}, {1, {5, 5}}};
    world.pending_tasks = {{0, {5, 4}}, {1, {0, 1}}};
    auto plan = llm_stub_plan(world);
    REQUIRE(plan.size() == 2);
    CHECK(plan[0] == std::pair{0, 1});
    CHECK(plan[1] == std::pair{1, 0});
  }
  SUBCASE("unreachable tasks stay unplanned") {
    world.blocked = {{1, 1}};
    world.idle_drones = {{0, {0, 0}}};
    world.pending_tasks = {{0, {1, 1}}};
    CHECK(llm_stub_plan(world).empty());
  }
}

TEST_CASE("assign gate fires only on matching planning and approval tokens") {
  Net net;
  net.colorsets["drone"] = ColorSet::int_range("drone", 0, 3);
  net.colorsets["task"] = ColorSet::int_range("task", 0, 3);
  net.colorsets["pair"] = ColorSet::product("pair", {"drone", "task"});
  net.places["plan_pending"] = {"plan_pending", "Plans", "pair"};
  net.places["approval_ready"] = {"approval_ready", "Approvals", "task"};
  net.places["assigned"] = {"assigned", "Assigned", "pair"};
  net.transitions["assign_gate"] = build_assign_gate();

  auto pair_token = [](int d, int t) {
    return ColorValue::tuple({ColorValue::of_int(d), ColorValue::of_int(t)});
  };

  SUBCASE("planning token alone is not enough") {
    net.initial.add("plan_pending", pair_token(0, 2));
    REQUIRE(validate_net(net).empty());
    CHECK(enabled_bindings(net, net.initial, "assign_gate").empty());
  }
  SUBCASE("matching ids fire once") {
    net.initial.add("plan_pending", pair_token(0, 2));
    net.initial.add("approval_ready", ColorValue::of_int(2));
    REQUIRE(validate_net(net).empty());
    auto bs = enabled_bindings(net, net.initial, "assign_gate");
    REQUIRE(bs.size() == 1);
    Marking after = fire(net, net.initial, "assign_gate", bs[0]);
    CHECK(after.at("assigned").contains(pair_token(0, 2)));
    CHECK(after.at("plan_pending").empty());
    CHECK(after.at("approval_ready").empty());
  }
  SUBCASE("mismatched ids stay blocked") {
    net.initial.add("plan_pending", pair_token(0, 2));
    net.initial.add("approval_ready", ColorValue::of_int(1));
    REQUIRE(validate_net(net).empty());
    CHECK(enabled_bindings(net, net.initial, "assign_gate").empty());
  }
}

TEST_CASE("swarm net validates and assigns its task under approve-all") {
  SwarmConfig config = small_swarm(1, 1, HumanPolicyKind::ApproveAll);
  CommSpaceNet cs = build_swarm_net(config);
  REQUIRE(validate_net(cs.net).empty());
  REQUIRE(validate_layering(cs).empty());

  ReachabilityGraph g = explore(cs.net);
  REQUIRE_FALSE(g.truncated);

  // Liveness: every terminal marking has the task assigned.
  auto terminals = find_deadlocks(g);
  REQUIRE_FALSE(terminals.empty());
  for (const auto& digest : terminals) {
    CHECK(g.nodes.at(digest).at("assigned").size() == 1);
  }

  // Safety: the gate only fires with an approval banked.
  auto v = verify_edge_property(g, "assign_gate", [](const Marking& m) {
    return !m.at("approval_ready").empty();
  });
  CHECK(v.outcome == Outcome::Holds);
}

TEST_CASE("swarm net with no tasks leaves the assignment machinery dead") {
  SwarmConfig config = small_swarm(2, 0, HumanPolicyKind::ApproveAll);
  CommSpaceNet cs = build_swarm_net(config);
  REQUIRE(validate_net(cs.net).empty());
  REQUIRE(validate_layering(cs).empty());

  ReachabilityGraph g = explore(cs.net);
  REQUIRE_FALSE(g.truncated);
  auto dead = dead_transitions(g, cs.net);
  CHECK(std::find(dead.begin(), dead.end(), "assign_gate") != dead.end());
  // No planning transitions were generated at all.
  for (const auto& [tid, t] : cs.net.transitions) {
    CHECK(tid.find("plan_") == std::string::npos);
  }
}

TEST_CASE("deny-all exploration shows the gate is dead") {
  SwarmConfig config = small_swarm(1, 1, HumanPolicyKind::DenyAll);
  CommSpaceNet cs = build_swarm_net(config);
  REQUIRE(validate_net(cs.net).empty());
  CHECK(cs.net.transitions.count("approve_request") == 0);  // deny-all net

  ReachabilityGraph g = explore(cs.net);
  REQUIRE_FALSE(g.truncated);
  auto dead = dead_transitions(g, cs.net);
  CHECK(std::find(dead.begin(), dead.end(), "assign_gate") != dead.end());
}

TEST_CASE("approve-all structurally removes denial") {
  SwarmConfig config = small_swarm(1, 1, HumanPolicyKind::ApproveAll);
  CommSpaceNet cs = build_swarm_net(config);
  CHECK(cs.net.transitions.count("deny_request") == 0);
  CHECK(cs.net.transitions.count("approve_request") == 1);
}

TEST_CASE("human_decide policies") {
  std::size_t pos = 0;

  HumanPolicy approve{HumanPolicyKind::ApproveAll, {}};
  CHECK(human_decide(approve, "(0, 1)", pos, nullptr, nullptr));

  HumanPolicy deny{HumanPolicyKind::DenyAll, {}};
  CHECK_FALSE(human_decide(deny, "(0, 1)", pos, nullptr, nullptr));

  HumanPolicy script{HumanPolicyKind::Script, {true, false}};
  pos = 0;
  CHECK(human_decide(script, "(0, 1)", pos, nullptr, nullptr));
  CHECK_FALSE(human_decide(script, "(0, 2)", pos, nullptr, nullptr));
  CHECK_THROWS_AS(human_decide(script, "(0, 3)", pos, nullptr, nullptr),
                  ScriptExhaustedError);

  HumanPolicy interactive{HumanPolicyKind::Interactive, {}};
  std::istringstream in("y\nmaybe\nno\n");
  std::ostringstream err;
  pos = 0;
  CHECK(human_decide(interactive, "(0, 1)", pos, &in, &err));
  CHECK(err.str() == "approve (0, 1)? [y/n] ");
  CHECK_FALSE(human_decide(interactive, "(0, 2)", pos, &in, &err));
  CHECK(err.str().find("please answer y or n") != std::string::npos);

  std::istringstream empty_in("");
  CHECK_THROWS_AS(human_decide(interactive, "(0, 1)", pos, &empty_in, &err),
                  InputClosedError);
  CHECK_THROWS_AS(human_decide(interactive, "(0, 1)", pos, nullptr, &err), InputClosedError);

  std::istringstream padded("yes \nn\r\n");
  CHECK(human_decide(interactive, "(0, 1)", pos, &padded, nullptr));
  CHECK_FALSE(human_decide(interactive, "(0, 1)", pos, &padded, nullptr));
}

TEST_CASE("approve-all run assigns every task") {
  SwarmConfig config = small_swarm(3, 3, HumanPolicyKind::ApproveAll);
  CommSpaceNet cs = build_swarm_net(config);
  ScenarioReport report = run_scenario(cs, config, FiringPolicy::LexicographicFirst, 0);
  CHECK(report.tasks_assigned == 3);
  CHECK(report.approvals_requested == 3);
  CHECK(report.approvals_granted == 3);
  CHECK(report.approvals_denied == 0);
  CHECK(report.trace.terminal == TerminalReason::Quiescent);

  // Seeded-random runs land on the same counters.
  for (std::uint64_t seed : {1ULL, 7ULL, 99ULL}) {
    ScenarioReport r = run_scenario(cs, config, FiringPolicy::SeededUniformRandom, seed);
    CHECK(r.tasks_assigned == 3);
    CHECK(r.approvals_granted == 3);
    CHECK(r.trace.terminal == TerminalReason::Quiescent);
  }
}

TEST_CASE("deny-all run assigns nothing and denies every request") {
  SwarmConfig config = small_swarm(3, 3, HumanPolicyKind::DenyAll);
  CommSpaceNet cs = build_swarm_net(config);
  ScenarioReport report = run_scenario(cs, config, FiringPolicy::SeededUniformRandom, 5);
  CHECK(report.tasks_assigned == 0);
  CHECK(report.approvals_requested == 3);
  CHECK(report.approvals_denied == report.approvals_requested);
  CHECK(report.approvals_granted == 0);
  CHECK(report.trace.terminal == TerminalReason::Quiescent);
}

TEST_CASE("scripted approvals are consumed in request order") {
  SwarmConfig config = small_swarm(2, 2, HumanPolicyKind::Script);
  config.human_policy.script = {true, false};
  CommSpaceNet cs = build_swarm_net(config);
  ScenarioReport report = run_scenario(cs, config, FiringPolicy::LexicographicFirst, 0);
  CHECK(report.tasks_assigned == 1);
  CHECK(report.approvals_granted == 1);
  CHECK(report.approvals_denied == 1);
  CHECK(report.trace.terminal == TerminalReason::Quiescent);

  // A short script runs dry.
  config.human_policy.script = {true};
  CHECK_THROWS_AS(run_scenario(cs, config, FiringPolicy::LexicographicFirst, 0),
                  ScriptExhaustedError);
}

TEST_CASE("interactive decisions come from the input stream") {
  SwarmConfig config = small_swarm(2, 2, HumanPolicyKind::Interactive);
  CommSpaceNet cs = build_swarm_net(config);

  std::istringstream in("y\nn\n");
  std::ostringstream err;
  ScenarioReport report =
      run_scenario(cs, config, FiringPolicy::LexicographicFirst, 0, &in, &err);
  CHECK(report.tasks_assigned == 1);
  CHECK(report.approvals_granted == 1);
  CHECK(report.approvals_denied == 1);
  CHECK(err.str().find("approve (") != std::string::npos);
  CHECK(err.str().find("? [y/n] ") != std::string::npos);

  std::istringstream closed("y\n");  // second request hits EOF
  CHECK_THROWS_AS(run_scenario(cs, config, FiringPolicy::LexicographicFirst, 0, &closed, &err),
                  InputClosedError);
}

TEST_CASE("MAS assigns in no more steps than Centaurian on the same seed") {
  SwarmConfig mas = small_swarm(2, 2, HumanPolicyKind::ApproveAll);
  mas.mode_schedule = {{0, 100000, CouplingMode::Mas}};
  SwarmConfig cent = small_swarm(2, 2, HumanPolicyKind::ApproveAll);
  cent.mode_schedule = {{0, 100000, CouplingMode::Centaurian}};

  for (std::uint64_t seed : {0ULL, 3ULL, 11ULL}) {
    ScenarioReport rm =
        run_scenario(build_swarm_net(mas), mas, FiringPolicy::SeededUniformRandom, seed);
    ScenarioReport rc =
        run_scenario(build_swarm_net(cent), cent, FiringPolicy::SeededUniformRandom, seed);
    CHECK(rm.tasks_assigned == 2);
    CHECK(rc.tasks_assigned == 2);
    CHECK(rm.steps <= rc.steps);
    CHECK(rm.approvals_requested == 0);  // no approval machinery in MAS nets
    CHECK(rc.approvals_requested == 2);
  }
}

TEST_CASE("mode switch mid-run files missing approval paperwork") {
  // The plan lands at step 2, still unassigned when the switch hits at step
  // 3; the switch must file its approval request so the gate can fire.
  SwarmConfig config = small_swarm(1, 1, HumanPolicyKind::ApproveAll);
  config.mode_schedule = {{0, 3, CouplingMode::Mas}, {3, 100000, CouplingMode::Centaurian}};
  CommSpaceNet cs = build_swarm_net(config);
  REQUIRE(validate_net(cs.net).empty());
  REQUIRE(validate_layering(cs).empty());
  CHECK(cs.net.transitions.count("plan_mas_0_0") == 1);
  CHECK(cs.net.transitions.count("plan_cent_0_0") == 1);

  ScenarioReport report = run_scenario(cs, config, FiringPolicy::LexicographicFirst, 0);
  CHECK(report.tasks_assigned == 1);
  CHECK(report.approvals_requested == 1);  // filed by the switch, not the planner
  CHECK(report.approvals_granted == 1);
  CHECK(report.trace.terminal == TerminalReason::Quiescent);
}

TEST_CASE("an obstacle on the task cell forces an unassignable replan") {
  SwarmConfig config;
  config.width = 2;
  config.height = 1;
  config.drones = 1;
  config.tasks = {{0, 1, 0}};
  config.human_policy.kind = HumanPolicyKind::ApproveAll;
  config.obstacles = {{2, 1, 0}};  // task cell becomes unreachable at step 2
  CommSpaceNet cs = build_swarm_net(config);

  ScenarioReport report = run_scenario(cs, config, FiringPolicy::LexicographicFirst, 0);
  CHECK(report.tasks_assigned == 0);
  CHECK(report.trace.terminal == TerminalReason::Quiescent);
  const Marking& final = report.trace.final_marking;
  CHECK(final.at("plan_epoch").contains(ColorValue::of_int(1)));  // epoch advanced
  CHECK(final.at("task_pending").contains(ColorValue::of_int(0)));  // task abandoned
}

TEST_CASE("a harmless obstacle replans to the same assignment") {
  SwarmConfig config;
  config.width = 3;
  config.height = 1;
  config.drones = 1;
  config.tasks = {{0, 1, 0}};
  config.human_policy.kind = HumanPolicyKind::ApproveAll;
  config.obstacles = {{2, 2, 0}};  // off the drone-task path
  CommSpaceNet cs = build_swarm_net(config);

  ScenarioReport report = run_scenario(cs, config, FiringPolicy::LexicographicFirst, 0);
  CHECK(report.tasks_assigned == 1);
  CHECK(report.trace.terminal == TerminalReason::Quiescent);
  CHECK(report.trace.final_marking.at("plan_epoch").contains(ColorValue::of_int(1)));
}

TEST_CASE("lam config validation") {
  CHECK_NOTHROW(validate_lam_config(lam_config({"a", "b"}, {"a", "b"}, 2)));

  LamConfig bad = lam_config({"a"}, {"a"}, 1);
  bad.action_alphabet = ColorSet::int_range("action", 0, 3);
  CHECK_THROWS_AS(validate_lam_config(bad), InvalidConfigError);

  bad = lam_config({"a", "a"}, {"a"}, 1);
  CHECK_THROWS_AS(validate_lam_config(bad), InvalidConfigError);

  bad = lam_config({"a"}, {"a"}, 1);
  bad.demonstrations.clear();
  CHECK_THROWS_AS(validate_lam_config(bad), InvalidConfigError);

  bad = lam_config({"a"}, {}, 1);
  CHECK_THROWS_AS(validate_lam_config(bad), InvalidConfigError);

  bad = lam_config({"a"}, {"a", "z"}, 1);
  CHECK_THROWS_WITH_AS(validate_lam_config(bad),
                       "invalid config field 'demonstrations': action 'z' is not in the alphabet",
                       InvalidConfigError);

  bad = lam_config({"a"}, {"a"}, 0);
  CHECK_THROWS_AS(validate_lam_config(bad), InvalidConfigError);
}

TEST_CASE("lam model predicts the argmax with alphabet-order ties") {
  const std::vector<std::string> alphabet = {"a", "b", "c"};
  LamModel model;
  CHECK(model.predict("START", alphabet) == "a");  // empty: first symbol

  model.update("START", "b");
  CHECK(model.predict("START", alphabet) == "b");
  model.update("START", "c");
  CHECK(model.predict("START", alphabet) == "b");  // 1-1 tie: alphabet order
  model.update("START", "c");
  CHECK(model.predict("START", alphabet) == "c");
  CHECK(model.predict("unseen", alphabet) == "a");
}

TEST_CASE("single-symbol alphabet predicts perfectly from the start") {
  LamConfig config = lam_config({"ping"}, {"ping", "ping", "ping"}, 3);
  auto reference = lam_accuracy_reference(config);
  REQUIRE(reference.size() == 3);
  for (double r : reference) CHECK(approx(r, 1.0));

  CommSpaceNet cs = build_lam_net(config);
  REQUIRE(validate_net(cs.net).empty());
  REQUIRE(validate_layering(cs).empty());
  ScenarioReport report = run_scenario(cs, config, FiringPolicy::LexicographicFirst, 0);
  REQUIRE(report.prediction_accuracy.size() == 3);
  for (double r : report.prediction_accuracy) CHECK(approx(r, 1.0));
  CHECK(report.trace.terminal == TerminalReason::Quiescent);
}

TEST_CASE("the repeated four-step demonstration locks in after one pass") {
  // Hand-checked frequency table: first pass has one hit (the very first
  // prediction defaults to 'a'), every later pass is perfect.
  const std::vector<double> expected = {0.25, 1.0, 1.0, 1.0, 1.0, 1.0};

  LamConfig config = lam_config({"a", "b", "c"}, {"a", "b", "c", "b"}, 6);
  auto reference = lam_accuracy_reference(config);
  REQUIRE(reference.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(approx(reference[i], expected[i]));

  CommSpaceNet cs = build_lam_net(config);
  REQUIRE(validate_net(cs.net).empty());
  REQUIRE(validate_layering(cs).empty());

  for (auto policy : {FiringPolicy::LexicographicFirst, FiringPolicy::SeededUniformRandom}) {
    ScenarioReport report = run_scenario(cs, config, policy, 17);
    REQUIRE(report.prediction_accuracy.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(approx(report.prediction_accuracy[i], expected[i]));
    }
    CHECK(report.trace.terminal == TerminalReason::Quiescent);
    // Each action costs six firings: emit, parse, predict, compare, update, ack.
    CHECK(report.steps == 6 * 4 * 6);
  }
}

TEST_CASE("accuracy is non-decreasing for repeated single demonstrations") {
  for (const auto& demo : {std::vector<std::string>{"a", "b", "c", "b"},
                           std::vector<std::string>{"a", "b", "a", "c"},
                           std::vector<std::string>{"c", "a", "a"}}) {
    LamConfig config = lam_config({"a", "b", "c"}, demo, 6);
    auto reference = lam_accuracy_reference(config);
    for (std::size_t i = 1; i < reference.size(); ++i) {
      CHECK(reference[i] + 1e-12 >= reference[i - 1]);
    }
    ScenarioReport report =
        run_scenario(build_lam_net(config), config, FiringPolicy::SeededUniformRandom, 3);
    REQUIRE(report.prediction_accuracy.size() == reference.size());
    for (std::size_t i = 0; i < reference.size(); ++i) {
      CHECK(approx(report.prediction_accuracy[i], reference[i]));
    }
  }
}

TEST_CASE("exactly one model token exists in every reachable marking") {
  LamConfig config = lam_config({"a", "b"}, {"a", "b"}, 1);
  CommSpaceNet cs = build_lam_net(config);
  ReachabilityGraph g = explore(cs.net);
  REQUIRE_FALSE(g.truncated);
  REQUIRE(g.nodes.size() > 1);
  for (const auto& [digest, marking] : g.nodes) {
    CHECK(marking.at("model").size() == 1);
  }
}

TEST_CASE("scenario reports satisfy their counter invariants") {
  SwarmConfig config = small_swarm(2, 2, HumanPolicyKind::Script);
  config.human_policy.script = {false, true};
  CommSpaceNet cs = build_swarm_net(config);
  ScenarioReport report = run_scenario(cs, config, FiringPolicy::SeededUniformRandom, 21);
  CHECK(report.approvals_granted + report.approvals_denied <= report.approvals_requested);
  CHECK(report.steps == report.trace.steps.size());
  for (double r : report.prediction_accuracy) {
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
  }
}
