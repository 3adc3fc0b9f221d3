#include "csnet/scenarios.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <ostream>
#include <set>

#include "csnet/digest.hpp"
#include "csnet/errors.hpp"

namespace csnet {

namespace {

constexpr std::size_t kStepCap = 100000;

}  // namespace

std::string to_string(HumanPolicyKind kind) {
  switch (kind) {
    case HumanPolicyKind::ApproveAll:
      return "approve-all";
    case HumanPolicyKind::DenyAll:
      return "deny-all";
    case HumanPolicyKind::Script:
      return "script";
    case HumanPolicyKind::Interactive:
      return "interactive";
  }
  return "unknown";
}

std::optional<HumanPolicyKind> parse_human_policy(const std::string& text) {
  if (text == "approve-all") return HumanPolicyKind::ApproveAll;
  if (text == "deny-all") return HumanPolicyKind::DenyAll;
  if (text == "script") return HumanPolicyKind::Script;
  if (text == "interactive") return HumanPolicyKind::Interactive;
  return std::nullopt;
}

std::string to_string(CouplingMode mode) {
  return mode == CouplingMode::Mas ? "mas" : "centaurian";
}

std::optional<CouplingMode> parse_coupling(const std::string& text) {
  if (text == "mas") return CouplingMode::Mas;
  if (text == "centaurian") return CouplingMode::Centaurian;
  return std::nullopt;
}

void validate_swarm_config(const SwarmConfig& config) {
  if (config.width < 1 || config.height < 1) {
    throw InvalidConfigError("grid", "width and height must be at least 1");
  }
  if (config.drones < 1) throw InvalidConfigError("drones", "at least one drone is required");
  std::set<int> task_ids;
  for (const auto& task : config.tasks) {
    if (task.id < 0) throw InvalidConfigError("tasks", "task ids must be nonnegative");
    if (!task_ids.insert(task.id).second) {
      throw InvalidConfigError("tasks", "duplicate task id " + std::to_string(task.id));
    }
    if (task.x < 0 || task.x >= config.width || task.y < 0 || task.y >= config.height) {
      throw InvalidConfigError("tasks", "task " + std::to_string(task.id) + " is off the grid");
    }
  }
  for (const auto& obstacle : config.obstacles) {
    if (obstacle.x < 0 || obstacle.x >= config.width || obstacle.y < 0 ||
        obstacle.y >= config.height) {
      throw InvalidConfigError("obstacles", "obstacle cell is off the grid");
    }
  }
  std::size_t expected_from = 0;
  for (std::size_t i = 0; i < config.mode_schedule.size(); ++i) {
    const ModePhase& phase = config.mode_schedule[i];
    if (i == 0 && phase.from != 0) {
      throw InvalidConfigError("mode_schedule", "first phase must start at step 0");
    }
    if (i > 0 && phase.from != expected_from) {
      throw InvalidConfigError("mode_schedule", "phases must be contiguous");
    }
    if (phase.to <= phase.from) {
      throw InvalidConfigError("mode_schedule", "phase ranges must be nonempty");
    }
    expected_from = phase.to;
  }
}

std::pair<int, int> drone_start_cell(const SwarmConfig& config, int drone) {
  int cell = drone % (config.width * config.height);
  return {cell % config.width, cell / config.width};
}

int grid_distance(const WorldState& world, std::pair<int, int> from, std::pair<int, int> to) {
  if (world.blocked.count(from) || world.blocked.count(to)) return -1;
  if (from == to) return 0;
  std::map<std::pair<int, int>, int> dist{{from, 0}};
  std::deque<std::pair<int, int>> queue{from};
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    int d = dist[{x, y}];
    for (auto [nx, ny] : {std::pair{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}}) {
      if (nx < 0 || nx >= world.width || ny < 0 || ny >= world.height) continue;
      std::pair<int, int> cell{nx, ny};
      if (world.blocked.count(cell) || dist.count(cell)) continue;
      if (cell == to) return d + 1;
      dist[cell] = d + 1;
      queue.push_back(cell);
    }
  }
  return -1;
}

std::vector<std::pair<int, int>> llm_stub_plan(const WorldState& world) {
  auto idle = world.idle_drones;
  auto pending = world.pending_tasks;
  std::vector<std::pair<int, int>> out;
  for (;;) {
    // Globally closest reachable pair; ties fall to lower drone then task id.
    std::optional<std::tuple<int, int, int>> best;
    for (const auto& [drone, dcell] : idle) {
      for (const auto& [task, tcell] : pending) {
        int dist = grid_distance(world, dcell, tcell);
        if (dist < 0) continue;
        std::tuple<int, int, int> candidate{dist, drone, task};
        if (!best || candidate < *best) best = candidate;
      }
    }
    if (!best) break;
    auto [dist, drone, task] = *best;
    out.emplace_back(drone, task);
    idle.erase(drone);
    pending.erase(task);
  }
  return out;
}

Transition build_assign_gate() {
  Transition t;
  t.id = "assign_gate";
  t.name = "Assign Task";
  t.inputs.push_back(
      {"plan_pending", ArcPattern::tuple({ArcPattern::variable("d"), ArcPattern::variable("t")})});
  t.inputs.push_back({"approval_ready", ArcPattern::variable("a")});
  t.guard =
      GuardExpr::cmp(GuardExpr::CmpOp::Eq, GuardOperand::variable("t"), GuardOperand::variable("a"));
  t.outputs.push_back(
      {"assigned", ArcExpr::tuple({ArcExpr::variable("d"), ArcExpr::variable("t")})});
  return t;
}

namespace {

const char* kModeSymbols[] = {"mas", "centaurian"};

std::set<CouplingMode> modes_used(const SwarmConfig& config) {
  if (config.mode_schedule.empty()) return {CouplingMode::Centaurian};
  std::set<CouplingMode> out;
  for (const auto& phase : config.mode_schedule) out.insert(phase.mode);
  return out;
}

CouplingMode mode_at_step(const SwarmConfig& config, std::size_t step) {
  if (config.mode_schedule.empty()) return CouplingMode::Centaurian;
  for (const auto& phase : config.mode_schedule) {
    if (step >= phase.from && step < phase.to) return phase.mode;
  }
  return config.mode_schedule.back().mode;
}

WorldState initial_world(const SwarmConfig& config) {
  WorldState world;
  world.width = config.width;
  world.height = config.height;
  for (const auto& obstacle : config.obstacles) {
    if (obstacle.step == 0) world.blocked.insert({obstacle.x, obstacle.y});
  }
  for (int d = 0; d < config.drones; ++d) world.idle_drones[d] = drone_start_cell(config, d);
  for (const auto& task : config.tasks) world.pending_tasks[task.id] = {task.x, task.y};
  return world;
}

ColorValue pair_value(int drone, int task) {
  return ColorValue::tuple({ColorValue::of_int(drone), ColorValue::of_int(task)});
}

// Planning transition for one proposed pair, valid for the build-time epoch
// only. `request` adds the approval-request output, `mode_sym` (when present)
// restricts the transition to one coupling mode via a read arc.
Transition make_plan_transition(const std::string& id, int drone, int task, bool request,
                                const ColorValue* mode_sym) {
  Transition t;
  t.id = id;
  t.name = "Plan " + std::to_string(drone) + "->" + std::to_string(task);
  t.inputs.push_back({"parsed_state", ArcPattern::literal(ColorValue::of_int(drone))});
  t.inputs.push_back({"task_pending", ArcPattern::literal(ColorValue::of_int(task))});
  t.inputs.push_back({"plan_epoch", ArcPattern::literal(ColorValue::of_int(0))});
  t.outputs.push_back({"plan_epoch", ArcExpr::literal(ColorValue::of_int(0))});
  t.outputs.push_back({"plan_pending", ArcExpr::literal(pair_value(drone, task))});
  if (request) {
    t.outputs.push_back({"plan_request", ArcExpr::literal(pair_value(drone, task))});
  }
  if (mode_sym) {
    t.inputs.push_back({"mode", ArcPattern::literal(*mode_sym)});
    t.outputs.push_back({"mode", ArcExpr::literal(*mode_sym)});
  }
  return t;
}

}  // namespace

CommSpaceNet build_swarm_net(const SwarmConfig& config) {
  validate_swarm_config(config);

  std::set<CouplingMode> modes = modes_used(config);
  bool cent = modes.count(CouplingMode::Centaurian) > 0;
  bool mas = modes.count(CouplingMode::Mas) > 0;
  bool mixed = cent && mas;
  bool has_approve = config.human_policy.kind != HumanPolicyKind::DenyAll;
  bool has_deny = config.human_policy.kind != HumanPolicyKind::ApproveAll;

  CommSpaceNet out;
  Net& net = out.net;

  int max_task = 0;
  for (const auto& task : config.tasks) max_task = std::max(max_task, task.id);
  net.colorsets.emplace("drone", ColorSet::int_range("drone", 0, config.drones - 1));
  net.colorsets.emplace("task", ColorSet::int_range("task", 0, max_task));
  net.colorsets.emplace("pair", ColorSet::product("pair", {"drone", "task"}));
  ColorSet mode_cs = ColorSet::enumeration("mode", {kModeSymbols[0], kModeSymbols[1]});
  net.colorsets.emplace("mode", mode_cs);
  net.colorsets.emplace(
      "epoch", ColorSet::int_range("epoch", 0, static_cast<std::int64_t>(config.obstacles.size())));

  auto add_place = [&](const std::string& id, const std::string& name, const std::string& cs,
                       SpaceKind space) {
    net.places.emplace(id, Place{id, name, cs});
    out.spaces.places.emplace(id, space);
  };
  add_place("drone_idle", "Idle Drones", "drone", SpaceKind::Surface);
  add_place("sensor_ping", "Sensor Pings", "drone", SpaceKind::Surface);
  add_place("parsed_state", "Parsed Drone State", "drone", SpaceKind::Observation);
  add_place("task_pending", "Pending Tasks", "task", SpaceKind::Computation);
  add_place("plan_epoch", "Plan Epoch", "epoch", SpaceKind::Computation);
  add_place("mode", "Coupling Mode", "mode", SpaceKind::Computation);
  add_place("plan_pending", "Planned Proposals", "pair", SpaceKind::Computation);
  add_place("assigned", "Assigned Tasks", "pair", SpaceKind::Computation);
  if (cent) {
    add_place("plan_request", "Approval Requests", "pair", SpaceKind::Observation);
    add_place("operator_request", "Operator Queue", "pair", SpaceKind::Surface);
    add_place("operator_decision", "Operator Decisions", "pair", SpaceKind::Surface);
    add_place("approval_ready", "Approvals", "task", SpaceKind::Computation);
  }

  for (int d = 0; d < config.drones; ++d) net.initial.add("drone_idle", ColorValue::of_int(d));
  for (const auto& task : config.tasks) net.initial.add("task_pending", ColorValue::of_int(task.id));
  net.initial.add("plan_epoch", ColorValue::of_int(0));
  net.initial.add("mode", mode_cs.sym_value(to_string(mode_at_step(config, 0))));

  auto add_transition = [&](Transition t, SpaceKind space) {
    out.spaces.transitions.emplace(t.id, space);
    net.transitions.emplace(t.id, std::move(t));
  };

  {
    Transition t;
    t.id = "emit_status";
    t.name = "Emit Status";
    t.inputs.push_back({"drone_idle", ArcPattern::variable("d")});
    t.outputs.push_back({"sensor_ping", ArcExpr::variable("d")});
    add_transition(std::move(t), SpaceKind::Surface);
  }
  {
    Transition t;
    t.id = "parse_status";
    t.name = "Parse Status";
    t.inputs.push_back({"sensor_ping", ArcPattern::variable("d")});
    t.outputs.push_back({"parsed_state", ArcExpr::variable("d")});
    add_transition(std::move(t), SpaceKind::Observation);
  }

  ColorValue mas_sym = mode_cs.sym_value("mas");
  ColorValue cent_sym = mode_cs.sym_value("centaurian");
  for (auto [drone, task] : llm_stub_plan(initial_world(config))) {
    std::string suffix = std::to_string(drone) + "_" + std::to_string(task);
    if (mixed) {
      add_transition(make_plan_transition("plan_mas_" + suffix, drone, task, false, &mas_sym),
                     SpaceKind::Computation);
      add_transition(make_plan_transition("plan_cent_" + suffix, drone, task, true, &cent_sym),
                     SpaceKind::Computation);
    } else {
      add_transition(make_plan_transition("plan_" + suffix, drone, task, cent, nullptr),
                     SpaceKind::Computation);
    }
  }

  if (cent) {
    {
      Transition t;
      t.id = "route_request";
      t.name = "Route Request";
      t.inputs.push_back({"plan_request", ArcPattern::variable("r")});
      t.outputs.push_back({"operator_request", ArcExpr::variable("r")});
      add_transition(std::move(t), SpaceKind::Observation);
    }
    if (has_approve) {
      Transition t;
      t.id = "approve_request";
      t.name = "Approve Request";
      t.inputs.push_back({"operator_request", ArcPattern::variable("r")});
      t.outputs.push_back({"operator_decision", ArcExpr::variable("r")});
      add_transition(std::move(t), SpaceKind::Surface);
    }
    if (has_deny) {
      Transition t;
      t.id = "deny_request";
      t.name = "Deny Request";
      t.inputs.push_back({"operator_request", ArcPattern::variable("r")});
      add_transition(std::move(t), SpaceKind::Surface);
    }
    if (has_approve) {
      Transition t;
      t.id = "route_decision";
      t.name = "Route Decision";
      t.inputs.push_back({"operator_decision", ArcPattern::tuple({ArcPattern::variable("d"),
                                                                  ArcPattern::variable("t")})});
      t.outputs.push_back({"approval_ready", ArcExpr::variable("t")});
      add_transition(std::move(t), SpaceKind::Observation);
    }
    Transition gate = build_assign_gate();
    if (mixed) {
      gate.inputs.push_back({"mode", ArcPattern::literal(cent_sym)});
      gate.outputs.push_back({"mode", ArcExpr::literal(cent_sym)});
    }
    add_transition(std::move(gate), SpaceKind::Computation);
  }

  if (mas) {
    Transition t;
    t.id = "assign_direct";
    t.name = "Assign Directly";
    t.inputs.push_back(
        {"plan_pending", ArcPattern::tuple({ArcPattern::variable("d"), ArcPattern::variable("t")})});
    t.outputs.push_back(
        {"assigned", ArcExpr::tuple({ArcExpr::variable("d"), ArcExpr::variable("t")})});
    if (mixed) {
      t.inputs.push_back({"mode", ArcPattern::literal(mas_sym)});
      t.outputs.push_back({"mode", ArcExpr::literal(mas_sym)});
    }
    add_transition(std::move(t), SpaceKind::Computation);
  }

  return out;
}

bool human_decide(const HumanPolicy& policy, const std::string& request_text,
                  std::size_t& script_pos, std::istream* in, std::ostream* err) {
  switch (policy.kind) {
    case HumanPolicyKind::ApproveAll:
      return true;
    case HumanPolicyKind::DenyAll:
      return false;
    case HumanPolicyKind::Script:
      if (script_pos >= policy.script.size()) throw ScriptExhaustedError();
      return policy.script[script_pos++];
    case HumanPolicyKind::Interactive:
      break;
  }
  if (!in) throw InputClosedError();
  for (;;) {
    if (err) *err << "approve " << request_text << "? [y/n] " << std::flush;
    std::string line;
    if (!std::getline(*in, line)) throw InputClosedError();
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line == "y" || line == "yes") return true;
    if (line == "n" || line == "no") return false;
    if (err) *err << "please answer y or n\n";
  }
}

namespace {

// Removes a drone's token from whichever pipeline stage holds it.
bool consume_drone(Marking& m, int drone) {
  ColorValue v = ColorValue::of_int(drone);
  return m.remove("drone_idle", v) || m.remove("sensor_ping", v) || m.remove("parsed_state", v);
}

// Withdraws a proposal's in-flight approval paperwork, wherever it got to.
void withdraw_request(Marking& m, bool has_request_place, const ColorValue& pair, int task) {
  if (!has_request_place) return;
  if (m.remove("plan_request", pair)) return;
  if (m.remove("operator_request", pair)) return;
  if (m.remove("operator_decision", pair)) return;
  m.remove("approval_ready", ColorValue::of_int(task));
}

struct SwarmRunState {
  std::set<std::pair<int, int>> blocked;
  std::int64_t epoch = 0;
  std::size_t script_pos = 0;
  CouplingMode current_mode = CouplingMode::Centaurian;
};

void apply_replan(const SwarmConfig& config, const Net& net, Marking& m, SwarmRunState& state) {
  bool has_request_place = net.places.count("plan_request") > 0;

  std::set<int> freed_drones;
  std::set<int> freed_tasks;
  for (const ColorValue& pair : m.at("plan_pending").values()) {
    int drone = static_cast<int>(pair.elements()[0].int_value());
    int task = static_cast<int>(pair.elements()[1].int_value());
    freed_drones.insert(drone);
    freed_tasks.insert(task);
  }
  for (int drone : freed_drones) {
    // one proposal per drone, so removal by reconstructed pair is exact
    for (const ColorValue& pair : m.at("plan_pending").values()) {
      if (static_cast<int>(pair.elements()[0].int_value()) != drone) continue;
      int task = static_cast<int>(pair.elements()[1].int_value());
      ColorValue copy = pair;
      m.remove("plan_pending", copy);
      withdraw_request(m, has_request_place, copy, task);
      break;
    }
  }

  WorldState world;
  world.width = config.width;
  world.height = config.height;
  world.blocked = state.blocked;
  for (const char* place : {"drone_idle", "sensor_ping", "parsed_state"}) {
    for (const ColorValue& v : m.at(place).values()) {
      int drone = static_cast<int>(v.int_value());
      world.idle_drones[drone] = drone_start_cell(config, drone);
    }
  }
  for (int drone : freed_drones) world.idle_drones[drone] = drone_start_cell(config, drone);
  std::map<int, std::pair<int, int>> task_cells;
  for (const auto& task : config.tasks) task_cells[task.id] = {task.x, task.y};
  for (const ColorValue& v : m.at("task_pending").values()) {
    int task = static_cast<int>(v.int_value());
    world.pending_tasks[task] = task_cells.at(task);
  }
  for (int task : freed_tasks) world.pending_tasks[task] = task_cells.at(task);

  std::set<int> matched_drones;
  std::set<int> matched_tasks;
  for (auto [drone, task] : llm_stub_plan(world)) {
    consume_drone(m, drone);
    m.remove("task_pending", ColorValue::of_int(task));
    m.add("plan_pending", pair_value(drone, task));
    if (state.current_mode == CouplingMode::Centaurian && has_request_place) {
      m.add("plan_request", pair_value(drone, task));
    }
    matched_drones.insert(drone);
    matched_tasks.insert(task);
  }
  for (int drone : freed_drones) {
    if (!matched_drones.count(drone)) m.add("parsed_state", ColorValue::of_int(drone));
  }
  for (int task : freed_tasks) {
    if (!matched_tasks.count(task)) m.add("task_pending", ColorValue::of_int(task));
  }

  // Retire the epoch so stale build-time plan transitions stay disabled.
  m.remove("plan_epoch", ColorValue::of_int(state.epoch));
  state.epoch += 1;
  m.add("plan_epoch", ColorValue::of_int(state.epoch));
}

void apply_mode_switch(const Net& net, Marking& m, CouplingMode to_mode, SwarmRunState& state) {
  const ColorSet& mode_cs = net.colorsets.at("mode");
  std::vector<ColorValue> current = m.at("mode").values();
  for (const ColorValue& v : current) m.remove("mode", v);
  m.add("mode", mode_cs.sym_value(to_string(to_mode)));
  state.current_mode = to_mode;

  // Proposals planned during a MAS phase have no approval paperwork yet;
  // entering a Centaurian phase files the missing requests.
  if (to_mode != CouplingMode::Centaurian || !net.places.count("plan_request")) return;
  for (const ColorValue& pair : m.at("plan_pending").values()) {
    int task = static_cast<int>(pair.elements()[1].int_value());
    bool in_flight = m.at("plan_request").count(pair) || m.at("operator_request").count(pair) ||
                     m.at("operator_decision").count(pair) ||
                     m.at("approval_ready").count(ColorValue::of_int(task));
    if (!in_flight) m.add("plan_request", pair);
  }
}

}  // namespace

ScenarioReport run_scenario(const CommSpaceNet& csnet, const SwarmConfig& config,
                            FiringPolicy policy, std::uint64_t seed, std::istream* interactive_in,
                            std::ostream* interactive_err) {
  validate_swarm_config(config);
  const Net& net = csnet.net;

  SwarmRunState state;
  for (const auto& obstacle : config.obstacles) {
    if (obstacle.step == 0) state.blocked.insert({obstacle.x, obstacle.y});
  }
  state.current_mode = mode_at_step(config, 0);

  std::map<std::size_t, std::vector<ObstacleSpec>> due_obstacles;
  for (const auto& obstacle : config.obstacles) {
    if (obstacle.step > 0) due_obstacles[obstacle.step].push_back(obstacle);
  }
  std::map<std::size_t, CouplingMode> switches;
  for (const auto& phase : config.mode_schedule) {
    if (phase.from > 0) switches.emplace(phase.from, phase.mode);
  }

  bool intercept = config.human_policy.kind == HumanPolicyKind::Script ||
                   config.human_policy.kind == HumanPolicyKind::Interactive;

  Trace trace;
  trace.seed = seed;
  trace.policy = policy;
  Marking m = net.initial;
  Rng rng(seed);
  trace.terminal = TerminalReason::MaxSteps;

  for (std::size_t steps = 0; steps < kStepCap; ++steps) {
    auto sw = switches.find(steps);
    if (sw != switches.end() && sw->second != state.current_mode) {
      apply_mode_switch(net, m, sw->second, state);
    }
    auto ob = due_obstacles.find(steps);
    if (ob != due_obstacles.end()) {
      for (const auto& obstacle : ob->second) state.blocked.insert({obstacle.x, obstacle.y});
      apply_replan(config, net, m, state);
    }

    auto events = enabled_transitions(net, m);
    if (events.empty()) {
      trace.terminal = TerminalReason::Quiescent;
      break;
    }

    std::string tid;
    Binding binding;
    bool picked = false;
    if (intercept) {
      for (const auto& [etid, ebinding] : events) {
        if (etid != "approve_request" && etid != "deny_request") continue;
        const ColorValue& request = ebinding.at("r");
        bool approved = human_decide(config.human_policy, request.to_text(), state.script_pos,
                                     interactive_in, interactive_err);
        tid = approved ? "approve_request" : "deny_request";
        binding = ebinding;
        picked = true;
        break;
      }
    }
    if (!picked) {
      std::size_t pick = 0;
      if (policy == FiringPolicy::SeededUniformRandom) {
        pick = static_cast<std::size_t>(rng.uniform_index(events.size()));
      }
      tid = events[pick].first;
      binding = events[pick].second;
    }

    m = fire(net, m, tid, binding);
    trace.steps.push_back({steps, tid, binding, marking_digest(m)});
  }
  if (trace.terminal == TerminalReason::MaxSteps && enabled_transitions(net, m).empty()) {
    trace.terminal = TerminalReason::Quiescent;
  }
  trace.final_marking = m;

  ScenarioReport report;
  report.steps = trace.steps.size();
  report.tasks_assigned = m.at("assigned").size();
  for (const auto& step : trace.steps) {
    if (step.transition == "route_request") report.approvals_requested += 1;
    if (step.transition == "approve_request") report.approvals_granted += 1;
    if (step.transition == "deny_request") report.approvals_denied += 1;
  }
  report.trace = std::move(trace);
  return report;
}

void validate_lam_config(const LamConfig& config) {
  if (config.action_alphabet.kind != ColorSet::Kind::Enum ||
      config.action_alphabet.symbols.empty()) {
    throw InvalidConfigError("action_alphabet", "must be a nonempty enum colorset");
  }
  std::set<std::string> symbols(config.action_alphabet.symbols.begin(),
                                config.action_alphabet.symbols.end());
  if (symbols.size() != config.action_alphabet.symbols.size()) {
    throw InvalidConfigError("action_alphabet", "duplicate symbols");
  }
  if (config.demonstrations.empty()) {
    throw InvalidConfigError("demonstrations", "at least one sequence is required");
  }
  for (const auto& sequence : config.demonstrations) {
    if (sequence.empty()) throw InvalidConfigError("demonstrations", "sequences must be nonempty");
    for (const auto& action : sequence) {
      if (!symbols.count(action)) {
        throw InvalidConfigError("demonstrations", "action '" + action + "' is not in the alphabet");
      }
    }
  }
  if (config.repetitions < 1) throw InvalidConfigError("repetitions", "must be at least 1");
}

std::string LamModel::predict(const std::string& context,
                              const std::vector<std::string>& alphabet) const {
  auto row = counts.find(context);
  std::string best = alphabet.front();
  int best_count = 0;
  if (row == counts.end()) return best;
  for (const auto& action : alphabet) {
    auto cell = row->second.find(action);
    int count = cell == row->second.end() ? 0 : cell->second;
    if (count > best_count) {
      best = action;
      best_count = count;
    }
  }
  return best;
}

void LamModel::update(const std::string& context, const std::string& action) {
  counts[context][action] += 1;
}

namespace {

struct BakedStep {
  std::string actual;
  std::string predicted;
};

// Replays the model over the demonstration stream, recording what it would
// predict at each step. The net bakes these values into its transitions.
std::vector<BakedStep> bake_lam_stream(const LamConfig& config) {
  std::vector<BakedStep> out;
  LamModel model;
  for (int rep = 0; rep < config.repetitions; ++rep) {
    for (const auto& sequence : config.demonstrations) {
      std::string context = LamModel::kStart;
      for (const auto& action : sequence) {
        out.push_back({action, model.predict(context, config.action_alphabet.symbols)});
        model.update(context, action);
        context = action;
      }
    }
  }
  return out;
}

}  // namespace

std::vector<double> lam_accuracy_reference(const LamConfig& config) {
  std::vector<BakedStep> stream = bake_lam_stream(config);
  std::size_t per_rep = stream.size() / static_cast<std::size_t>(config.repetitions);
  std::vector<double> out;
  for (int rep = 0; rep < config.repetitions; ++rep) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < per_rep; ++i) {
      const BakedStep& step = stream[static_cast<std::size_t>(rep) * per_rep + i];
      if (step.actual == step.predicted) hits += 1;
    }
    out.push_back(static_cast<double>(hits) / static_cast<double>(per_rep));
  }
  return out;
}

CommSpaceNet build_lam_net(const LamConfig& config) {
  validate_lam_config(config);
  std::vector<BakedStep> stream = bake_lam_stream(config);
  auto n = static_cast<std::int64_t>(stream.size());

  CommSpaceNet out;
  Net& net = out.net;

  ColorSet action_cs = config.action_alphabet;
  std::string action_name = action_cs.name.empty() ? "action" : action_cs.name;
  action_cs.name = action_name;
  net.colorsets.emplace(action_name, action_cs);
  net.colorsets.emplace("turn", ColorSet::int_range("turn", 0, n));
  net.colorsets.emplace("stamped", ColorSet::product("stamped", {"turn", action_name}));
  ColorSet phase_cs = ColorSet::enumeration("phase", {"ready", "predicted"});
  net.colorsets.emplace("phase", phase_cs);
  net.colorsets.emplace("model_state", ColorSet::product("model_state", {"turn", "phase"}));

  auto add_place = [&](const std::string& id, const std::string& name, const std::string& cs,
                       SpaceKind space) {
    net.places.emplace(id, Place{id, name, cs});
    out.spaces.places.emplace(id, space);
  };
  add_place("user_ready", "User Turn", "turn", SpaceKind::Surface);
  add_place("user_action", "User Actions", "stamped", SpaceKind::Surface);
  add_place("observed", "Observed Actions", "stamped", SpaceKind::Observation);
  add_place("prediction", "Predictions", "stamped", SpaceKind::Computation);
  add_place("model", "Model", "model_state", SpaceKind::Computation);
  add_place("compare_done", "Compared", "turn", SpaceKind::Computation);
  add_place("hits", "Hits", "turn", SpaceKind::Computation);
  add_place("misses", "Misses", "turn", SpaceKind::Computation);
  add_place("feedback", "Acknowledgements", "turn", SpaceKind::Observation);

  ColorValue ready_sym = phase_cs.sym_value("ready");
  ColorValue predicted_sym = phase_cs.sym_value("predicted");
  net.initial.add("user_ready", ColorValue::of_int(0));
  net.initial.add("model", ColorValue::tuple({ColorValue::of_int(0), ready_sym}));

  auto add_transition = [&](Transition t, SpaceKind space) {
    out.spaces.transitions.emplace(t.id, space);
    net.transitions.emplace(t.id, std::move(t));
  };

  for (std::int64_t i = 0; i < n; ++i) {
    const BakedStep& baked = stream[static_cast<std::size_t>(i)];
    ColorValue actual = action_cs.sym_value(baked.actual);
    ColorValue predicted = action_cs.sym_value(baked.predicted);
    std::string suffix = std::to_string(i);
    {
      Transition t;
      t.id = "emit_" + suffix;
      t.name = "Emit Action " + suffix;
      t.inputs.push_back({"user_ready", ArcPattern::literal(ColorValue::of_int(i))});
      t.outputs.push_back(
          {"user_action", ArcExpr::literal(ColorValue::tuple({ColorValue::of_int(i), actual}))});
      add_transition(std::move(t), SpaceKind::Surface);
    }
    {
      Transition t;
      t.id = "predict_" + suffix;
      t.name = "Predict " + suffix;
      t.inputs.push_back(
          {"model", ArcPattern::literal(ColorValue::tuple({ColorValue::of_int(i), ready_sym}))});
      t.outputs.push_back({"model", ArcExpr::literal(ColorValue::tuple(
                                        {ColorValue::of_int(i), predicted_sym}))});
      t.outputs.push_back({"prediction", ArcExpr::literal(ColorValue::tuple(
                                             {ColorValue::of_int(i), predicted}))});
      add_transition(std::move(t), SpaceKind::Computation);
    }
    {
      Transition t;
      t.id = "update_" + suffix;
      t.name = "Update Model " + suffix;
      t.inputs.push_back({"model", ArcPattern::literal(
                                       ColorValue::tuple({ColorValue::of_int(i), predicted_sym}))});
      t.inputs.push_back({"compare_done", ArcPattern::literal(ColorValue::of_int(i))});
      t.outputs.push_back({"model", ArcExpr::literal(
                                        ColorValue::tuple({ColorValue::of_int(i + 1), ready_sym}))});
      t.outputs.push_back({"feedback", ArcExpr::literal(ColorValue::of_int(i + 1))});
      add_transition(std::move(t), SpaceKind::Computation);
    }
  }
  {
    Transition t;
    t.id = "parse_action";
    t.name = "Parse Action";
    t.inputs.push_back({"user_action", ArcPattern::variable("m")});
    t.outputs.push_back({"observed", ArcExpr::variable("m")});
    add_transition(std::move(t), SpaceKind::Observation);
  }
  {
    Transition t;
    t.id = "compare_hit";
    t.name = "Compare (hit)";
    t.inputs.push_back(
        {"observed", ArcPattern::tuple({ArcPattern::variable("i"), ArcPattern::variable("x")})});
    t.inputs.push_back(
        {"prediction", ArcPattern::tuple({ArcPattern::variable("i"), ArcPattern::variable("y")})});
    t.guard = GuardExpr::cmp(GuardExpr::CmpOp::Eq, GuardOperand::variable("x"),
                             GuardOperand::variable("y"));
    t.outputs.push_back({"hits", ArcExpr::variable("i")});
    t.outputs.push_back({"compare_done", ArcExpr::variable("i")});
    add_transition(std::move(t), SpaceKind::Computation);
  }
  {
    Transition t;
    t.id = "compare_miss";
    t.name = "Compare (miss)";
    t.inputs.push_back(
        {"observed", ArcPattern::tuple({ArcPattern::variable("i"), ArcPattern::variable("x")})});
    t.inputs.push_back(
        {"prediction", ArcPattern::tuple({ArcPattern::variable("i"), ArcPattern::variable("y")})});
    t.guard = GuardExpr::cmp(GuardExpr::CmpOp::Ne, GuardOperand::variable("x"),
                             GuardOperand::variable("y"));
    t.outputs.push_back({"misses", ArcExpr::variable("i")});
    t.outputs.push_back({"compare_done", ArcExpr::variable("i")});
    add_transition(std::move(t), SpaceKind::Computation);
  }
  {
    Transition t;
    t.id = "route_ack";
    t.name = "Route Acknowledgement";
    t.inputs.push_back({"feedback", ArcPattern::variable("j")});
    t.outputs.push_back({"user_ready", ArcExpr::variable("j")});
    add_transition(std::move(t), SpaceKind::Observation);
  }

  return out;
}

ScenarioReport run_scenario(const CommSpaceNet& csnet, const LamConfig& config,
                            FiringPolicy policy, std::uint64_t seed) {
  validate_lam_config(config);
  Trace trace = run(csnet.net, policy, seed, kStepCap);

  ScenarioReport report;
  report.steps = trace.steps.size();

  std::size_t per_rep = 0;
  for (const auto& sequence : config.demonstrations) per_rep += sequence.size();
  const Multiset& hits = trace.final_marking.at("hits");
  for (int rep = 0; rep < config.repetitions; ++rep) {
    auto lo = static_cast<std::int64_t>(rep) * static_cast<std::int64_t>(per_rep);
    std::size_t count = 0;
    for (const ColorValue& v : hits.values()) {
      if (v.int_value() >= lo && v.int_value() < lo + static_cast<std::int64_t>(per_rep)) {
        count += 1;
      }
    }
    report.prediction_accuracy.push_back(static_cast<double>(count) /
                                         static_cast<double>(per_rep));
  }
  report.trace = std::move(trace);
  return report;
}

}  // namespace csnet
