#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "csnet/comm_space.hpp"
#include "csnet/engine.hpp"

namespace csnet {

// ---------------------------------------------------------------------------
// Drone swarm with human approval gating.

struct TaskSpec {
  int id = 0;
  int x = 0;
  int y = 0;
};

struct ObstacleSpec {
  std::size_t step = 0;  // trace step from which the cell is untraversable
  int x = 0;
  int y = 0;
};

enum class HumanPolicyKind { ApproveAll, DenyAll, Script, Interactive };

std::string to_string(HumanPolicyKind kind);
std::optional<HumanPolicyKind> parse_human_policy(const std::string& text);

struct HumanPolicy {
  HumanPolicyKind kind = HumanPolicyKind::ApproveAll;
  std::vector<bool> script;  // per-request decisions, consumed in order
};

enum class CouplingMode { Mas, Centaurian };

std::string to_string(CouplingMode mode);
std::optional<CouplingMode> parse_coupling(const std::string& text);

// Half-open step range [from, to) running under one coupling mode.
struct ModePhase {
  std::size_t from = 0;
  std::size_t to = 0;
  CouplingMode mode = CouplingMode::Centaurian;
};

struct SwarmConfig {
  int width = 8;
  int height = 8;
  int drones = 1;
  std::vector<TaskSpec> tasks;
  std::vector<ObstacleSpec> obstacles;
  HumanPolicy human_policy;
  std::uint64_t seed = 0;
  // Empty schedule means Centaurian throughout. The last phase's mode
  // persists beyond its end.
  std::vector<ModePhase> mode_schedule;
};

// Throws InvalidConfigError naming the offending field.
void validate_swarm_config(const SwarmConfig& config);

// Drones do not move in this model; each starts at a fixed derived cell.
std::pair<int, int> drone_start_cell(const SwarmConfig& config, int drone);

struct WorldState {
  int width = 0;
  int height = 0;
  std::set<std::pair<int, int>> blocked;
  std::map<int, std::pair<int, int>> idle_drones;    // id -> cell
  std::map<int, std::pair<int, int>> pending_tasks;  // id -> cell
};

// Shortest 4-neighbor path length avoiding blocked cells; -1 if unreachable.
// Equals Manhattan distance on an unobstructed grid.
int grid_distance(const WorldState& world, std::pair<int, int> from, std::pair<int, int> to);

// Deterministic greedy planner standing in for the LLM: repeatedly proposes
// the reachable (drone, task) pair with minimal distance, ties broken by
// lower drone id then lower task id.
std::vector<std::pair<int, int>> llm_stub_plan(const WorldState& world);

// Joint-token gate template: consumes a planning token and an approval token
// with matching task ids, producing an assigned-task token. Conventional
// place names: plan_pending, approval_ready, assigned.
Transition build_assign_gate();

// Layering-valid net for the swarm scenario. The human policy and mode
// schedule shape the structure: approve-all nets have no denial transition,
// deny-all nets no approval transition, and only schedules that use a mode
// get that mode's assignment machinery.
CommSpaceNet build_swarm_net(const SwarmConfig& config);

// Resolves one approval request. Scripted policies consume decisions in
// order via `script_pos`; interactive policies prompt on `err` and read
// y/n lines from `in`. Throws ScriptExhaustedError or InputClosedError.
bool human_decide(const HumanPolicy& policy, const std::string& request_text,
                  std::size_t& script_pos, std::istream* in, std::ostream* err);

// ---------------------------------------------------------------------------
// Action-prediction feedback loop.

struct LamConfig {
  ColorSet action_alphabet;  // enum colorset
  std::vector<std::vector<std::string>> demonstrations;
  int repetitions = 1;
};

void validate_lam_config(const LamConfig& config);

// First-order frequency model: counts (previous action -> next action) and
// predicts the argmax, ties broken by alphabet order. Sequences start from
// the reserved start context.
struct LamModel {
  static constexpr const char* kStart = "START";

  std::map<std::string, std::map<std::string, int>> counts;

  std::string predict(const std::string& context, const std::vector<std::string>& alphabet) const;
  void update(const std::string& context, const std::string& action);
};

// Per-repetition prediction accuracy computed directly on the model, without
// the net. Used as the reference for the net-based run.
std::vector<double> lam_accuracy_reference(const LamConfig& config);

// Layering-valid feedback-loop net: action emission (surface), parsing
// (observation), predict/compare/update around a unique model token
// (computation), and an acknowledgement that hands the turn back to the
// user. One cycle per demonstrated action.
CommSpaceNet build_lam_net(const LamConfig& config);

// ---------------------------------------------------------------------------
// Running and reporting.

struct ScenarioReport {
  std::size_t tasks_assigned = 0;
  std::size_t approvals_requested = 0;
  std::size_t approvals_granted = 0;
  std::size_t approvals_denied = 0;
  std::size_t steps = 0;
  std::vector<double> prediction_accuracy;  // per repetition, LAM only
  Trace trace;
};

// Swarm runner: drives the net under the firing policy, applying the mode
// schedule, obstacle replanning, and the human policy between steps.
ScenarioReport run_scenario(const CommSpaceNet& csnet, const SwarmConfig& config,
                            FiringPolicy policy, std::uint64_t seed,
                            std::istream* interactive_in = nullptr,
                            std::ostream* interactive_err = nullptr);

// Feedback-loop runner: plain run to quiescence plus accuracy readout.
ScenarioReport run_scenario(const CommSpaceNet& csnet, const LamConfig& config,
                            FiringPolicy policy, std::uint64_t seed);

}  // namespace csnet
