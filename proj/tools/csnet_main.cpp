#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csnet/analysis.hpp"
#include "csnet/comm_space.hpp"
#include "csnet/digest.hpp"
#include "csnet/engine.hpp"
#include "csnet/errors.hpp"
#include "csnet/netfile.hpp"
#include "csnet/scenarios.hpp"

namespace {

using namespace csnet;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
}

std::vector<Violation> all_violations(const NetDocument& doc) {
  std::vector<Violation> out = validate_net(doc.csnet.net);
  std::vector<Violation> layering = validate_layering(doc.csnet);
  out.insert(out.end(), layering.begin(), layering.end());
  try {
    if (doc.swarm) validate_swarm_config(*doc.swarm);
    if (doc.lam) validate_lam_config(*doc.lam);
  } catch (const InvalidConfigError& e) {
    out.push_back({"CONFIG", e.what()});
  }
  return out;
}

// Shared by run/analyze: a net must be clean before simulation makes sense.
// Prints one violation per line and reports whether any were found.
bool report_violations(const NetDocument& doc) {
  std::vector<Violation> violations = all_violations(doc);
  for (const Violation& v : violations) std::cout << v.code << "\t" << v.detail << "\n";
  return !violations.empty();
}

int cmd_validate(const std::string& path) {
  NetDocument doc = parse_net_file(read_file(path));
  if (report_violations(doc)) return 1;
  std::cout << "OK\n";
  return 0;
}

std::string binding_text(const Binding& binding) {
  if (binding.size() == 1) return binding.begin()->second.to_text();
  std::string out = "{";
  bool first = true;
  for (const auto& [name, value] : binding) {
    if (!first) out += ", ";
    out += name + "=" + value.to_text();
    first = false;
  }
  return out + "}";
}

// Batch loop with operator interception: approval transitions prompt on
// standard error and read decisions from standard input.
Trace interactive_run(const Net& net, FiringPolicy policy, std::uint64_t seed,
                      std::size_t max_steps) {
  HumanPolicy prompt_policy;
  prompt_policy.kind = HumanPolicyKind::Interactive;
  std::size_t script_pos = 0;

  Trace trace;
  trace.seed = seed;
  trace.policy = policy;
  trace.terminal = TerminalReason::MaxSteps;
  Marking m = net.initial;
  Rng rng(seed);

  for (std::size_t i = 0; i < max_steps; ++i) {
    auto events = enabled_transitions(net, m);
    if (events.empty()) {
      trace.terminal = TerminalReason::Quiescent;
      break;
    }
    std::string tid;
    Binding binding;
    bool picked = false;
    for (const auto& [etid, ebinding] : events) {
      if (etid != "approve_request" && etid != "deny_request") continue;
      bool approved = human_decide(prompt_policy, binding_text(ebinding), script_pos, &std::cin,
                                   &std::cerr);
      tid = approved ? "approve_request" : "deny_request";
      binding = ebinding;
      picked = true;
      break;
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
    trace.steps.push_back({i, tid, binding, marking_digest(m)});
  }
  if (trace.terminal == TerminalReason::MaxSteps && enabled_transitions(net, m).empty()) {
    trace.terminal = TerminalReason::Quiescent;
  }
  trace.final_marking = m;
  return trace;
}

int cmd_run(const std::string& path, std::uint64_t seed, FiringPolicy policy,
            std::size_t max_steps, const std::string& trace_out, bool interactive) {
  NetDocument doc = parse_net_file(read_file(path));
  if (report_violations(doc)) return 1;
  Trace trace = interactive ? interactive_run(doc.csnet.net, policy, seed, max_steps)
                            : run(doc.csnet.net, policy, seed, max_steps);
  if (!trace_out.empty()) write_file(trace_out, trace_to_jsonl(trace, net_digest(doc)));
  std::cout << "steps: " << trace.steps.size() << "\n";
  std::cout << "terminal: " << to_string(trace.terminal) << "\n";
  return 0;
}

struct CheckSpec {
  enum class Kind { Bounded, Live, Deadlock, Gate };
  Kind kind = Kind::Live;
  std::size_t k = 0;
  std::string transition;
  std::string place;
  std::string raw;
};

CheckSpec parse_check(const std::string& text) {
  CheckSpec spec;
  spec.raw = text;
  if (text == "live") {
    spec.kind = CheckSpec::Kind::Live;
    return spec;
  }
  if (text == "deadlock") {
    spec.kind = CheckSpec::Kind::Deadlock;
    return spec;
  }
  if (text.rfind("bounded:", 0) == 0) {
    spec.kind = CheckSpec::Kind::Bounded;
    try {
      spec.k = std::stoul(text.substr(8));
    } catch (const std::exception&) {
      throw Error("malformed check '" + text + "': expected bounded:<k>");
    }
    return spec;
  }
  if (text.rfind("gate:", 0) == 0) {
    std::string rest = text.substr(5);
    auto colon = rest.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == rest.size()) {
      throw Error("malformed check '" + text + "': expected gate:<transition>:<place>");
    }
    spec.kind = CheckSpec::Kind::Gate;
    spec.transition = rest.substr(0, colon);
    spec.place = rest.substr(colon + 1);
    return spec;
  }
  throw Error("unknown check '" + text + "'");
}

void print_path(const std::vector<Edge>& path) {
  for (std::size_t i = 0; i < path.size(); ++i) {
    std::cout << "  " << i << ": " << path[i].transition << " " << binding_text(path[i].binding)
              << "\n";
  }
}

int cmd_analyze(const std::string& path, const std::vector<std::string>& check_texts,
                std::size_t max_nodes, unsigned threads, const std::string& dot_out) {
  NetDocument doc = parse_net_file(read_file(path));
  if (report_violations(doc)) return 1;
  const Net& net = doc.csnet.net;

  std::vector<CheckSpec> checks;
  for (const std::string& text : check_texts) checks.push_back(parse_check(text));
  for (const CheckSpec& check : checks) {
    if (!check.transition.empty() && !net.transitions.count(check.transition)) {
      throw UnknownTransitionError(check.transition);
    }
    if (!check.place.empty() && !net.places.count(check.place)) {
      throw UnknownPlaceError(check.place);
    }
  }

  ExploreLimits limits;
  limits.max_nodes = max_nodes;
  limits.threads = threads;
  ReachabilityGraph graph = explore(net, limits);
  std::cout << "nodes: " << graph.nodes.size() << "\n";
  std::cout << "edges: " << graph.edges.size() << "\n";
  if (graph.truncated) std::cout << "truncated: yes\n";

  if (!dot_out.empty()) write_file(dot_out, to_dot(graph, net));

  bool any_failed = false;
  for (const CheckSpec& check : checks) {
    switch (check.kind) {
      case CheckSpec::Kind::Bounded: {
        AnalysisVerdict verdict = check_boundedness(graph, check.k);
        if (verdict.outcome == Outcome::UnknownTruncated) {
          std::cerr << check.raw << ": unknown, " << verdict.detail << "\n";
          return 4;
        }
        if (verdict.outcome == Outcome::Holds) {
          std::cout << check.raw << ": holds\n";
        } else {
          any_failed = true;
          std::cout << check.raw << ": fails, " << verdict.detail << "\n";
          print_path(verdict.counterexample);
        }
        break;
      }
      case CheckSpec::Kind::Live: {
        std::vector<std::string> dead = dead_transitions(graph, net);
        if (dead.empty()) {
          std::cout << "live: holds\n";
        } else {
          any_failed = true;
          std::cout << "live: fails, dead transitions:";
          for (const std::string& id : dead) std::cout << " " << id;
          std::cout << "\n";
        }
        break;
      }
      case CheckSpec::Kind::Deadlock: {
        if (graph.truncated) throw TruncatedGraphError("deadlock");
        std::vector<std::string> deadlocks = find_deadlocks(graph);
        if (deadlocks.empty()) {
          std::cout << "deadlock: holds\n";
        } else {
          any_failed = true;
          std::cout << "deadlock: fails, " << deadlocks.size() << " deadlocked marking(s), first "
                    << deadlocks.front() << "\n";
          print_path(path_from_root(graph, deadlocks.front()));
        }
        break;
      }
      case CheckSpec::Kind::Gate: {
        std::string place = check.place;
        AnalysisVerdict verdict = verify_edge_property(
            graph, check.transition,
            [&place](const Marking& m) { return !m.at(place).empty(); });
        if (verdict.outcome == Outcome::Holds) {
          std::cout << check.raw << ": holds\n";
        } else {
          any_failed = true;
          std::cout << check.raw << ": fails, " << verdict.detail << "\n";
          print_path(verdict.counterexample);
        }
        break;
      }
    }
  }
  return any_failed ? 1 : 0;
}

int cmd_scenario(const std::string& name, const std::string& config_path,
                 std::optional<std::uint64_t> seed_flag, FiringPolicy policy,
                 const std::string& report_out) {
  NetDocument doc = parse_net_file(read_file(config_path));
  ScenarioReport report;
  if (name == "swarm") {
    if (!doc.swarm) {
      std::cerr << "invalid config field 'scenario': no swarm section in " << config_path << "\n";
      return 1;
    }
    SwarmConfig config = *doc.swarm;
    std::uint64_t seed = seed_flag.value_or(config.seed);
    CommSpaceNet csnet = build_swarm_net(config);
    report = run_scenario(csnet, config, policy, seed, &std::cin, &std::cerr);
    if (!report_out.empty()) write_file(report_out, report_to_json(report));
    std::cout << "steps: " << report.steps << "\n";
    std::cout << "terminal: " << to_string(report.trace.terminal) << "\n";
    std::cout << "tasks_assigned: " << report.tasks_assigned << "\n";
    std::cout << "approvals_requested: " << report.approvals_requested << "\n";
    std::cout << "approvals_granted: " << report.approvals_granted << "\n";
    std::cout << "approvals_denied: " << report.approvals_denied << "\n";
  } else {
    if (!doc.lam) {
      std::cerr << "invalid config field 'scenario': no lam section in " << config_path << "\n";
      return 1;
    }
    LamConfig config = *doc.lam;
    std::uint64_t seed = seed_flag.value_or(0);
    CommSpaceNet csnet = build_lam_net(config);
    report = run_scenario(csnet, config, policy, seed);
    if (!report_out.empty()) write_file(report_out, report_to_json(report));
    std::cout << "steps: " << report.steps << "\n";
    std::cout << "terminal: " << to_string(report.trace.terminal) << "\n";
    std::cout << "accuracy:";
    for (double value : report.prediction_accuracy) std::cout << " " << value;
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Colored Petri net tool for layered human-agent interaction models"};
  app.require_subcommand(1);

  std::string path;
  std::uint64_t seed = 0;
  std::string policy_text = "seeded-uniform-random";
  std::size_t max_steps = 100000;
  std::string trace_out;
  bool interactive = false;
  std::vector<std::string> checks;
  std::size_t max_nodes = 100000;
  unsigned threads = 1;
  std::string dot_out;
  std::string scenario_name;
  std::string config_path;
  std::string report_out;

  const std::vector<std::string> policies{"lexicographic-first", "seeded-uniform-random"};

  CLI::App* validate = app.add_subcommand("validate", "Check a net file and report violations");
  validate->add_option("path", path, "net file")->required();

  CLI::App* run_cmd = app.add_subcommand("run", "Simulate a net file");
  run_cmd->add_option("path", path, "net file")->required();
  run_cmd->add_option("--seed", seed, "RNG seed (default 0)");
  run_cmd->add_option("--policy", policy_text, "firing policy")->check(CLI::IsMember(policies));
  run_cmd->add_option("--max-steps", max_steps, "step cap (default 100000)");
  run_cmd->add_option("--trace", trace_out, "write a JSONL trace file");
  run_cmd->add_flag("--interactive", interactive, "prompt for approval decisions");

  CLI::App* analyze = app.add_subcommand("analyze", "Explore the state space and run checks");
  analyze->add_option("path", path, "net file")->required();
  analyze->add_option("--check", checks,
                      "bounded:<k> | live | deadlock | gate:<transition>:<place>");
  analyze->add_option("--max-nodes", max_nodes, "node cap (default 100000)");
  analyze->add_option("--threads", threads, "exploration worker threads");
  analyze->add_option("--dot", dot_out, "write the reachability graph as DOT");

  CLI::App* scenario = app.add_subcommand("scenario", "Build and run a packaged scenario");
  scenario->add_option("name", scenario_name, "swarm | lam")
      ->required()
      ->check(CLI::IsMember({"swarm", "lam"}));
  scenario->add_option("--config", config_path, "scenario config file")->required();
  CLI::Option* seed_opt = scenario->add_option("--seed", seed, "overrides the config seed");
  scenario->add_option("--policy", policy_text, "firing policy")->check(CLI::IsMember(policies));
  scenario->add_option("--report", report_out, "write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  FiringPolicy policy = parse_policy(policy_text).value_or(FiringPolicy::SeededUniformRandom);

  try {
    if (validate->parsed()) return cmd_validate(path);
    if (run_cmd->parsed()) {
      return cmd_run(path, seed, policy, max_steps, trace_out, interactive);
    }
    if (analyze->parsed()) return cmd_analyze(path, checks, max_nodes, threads, dot_out);
    if (scenario->parsed()) {
      std::optional<std::uint64_t> seed_flag;
      if (seed_opt->count() > 0) seed_flag = seed;
      return cmd_scenario(scenario_name, config_path, seed_flag, policy, report_out);
    }
  } catch (const NetParseError& e) {
    std::cerr << "parse error at line " << e.line() << ", column " << e.column() << ": "
              << e.what() << "\n";
    return 2;
  } catch (const InputClosedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const TruncatedGraphError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
