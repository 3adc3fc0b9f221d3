// Python bindings: a thin text-level facade over the net library. Documents,
// traces, and reports cross the boundary as the same JSON strings the CLI
// reads and writes, so Python callers never see engine internals.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "csnet/analysis.hpp"
#include "csnet/comm_space.hpp"
#include "csnet/engine.hpp"
#include "csnet/errors.hpp"
#include "csnet/netfile.hpp"
#include "csnet/scenarios.hpp"

namespace py = pybind11;

namespace {

using namespace csnet;

FiringPolicy policy_from(const std::string& text) {
  auto policy = parse_policy(text);
  if (!policy) throw Error("unknown policy '" + text + "'");
  return *policy;
}

std::vector<std::pair<std::string, std::string>> validate_text(const std::string& text) {
  NetDocument doc = parse_net_file(text);
  std::vector<std::pair<std::string, std::string>> out;
  for (const Violation& v : validate_net(doc.csnet.net)) out.emplace_back(v.code, v.detail);
  for (const Violation& v : validate_layering(doc.csnet)) out.emplace_back(v.code, v.detail);
  try {
    if (doc.swarm) validate_swarm_config(*doc.swarm);
    if (doc.lam) validate_lam_config(*doc.lam);
  } catch (const InvalidConfigError& e) {
    out.emplace_back("CONFIG", e.what());
  }
  return out;
}

std::string run_text(const std::string& text, const std::string& policy, std::uint64_t seed,
                     std::size_t max_steps) {
  NetDocument doc = parse_net_file(text);
  Trace trace = run(doc.csnet.net, policy_from(policy), seed, max_steps);
  return trace_to_jsonl(trace, net_digest(doc));
}

py::dict explore_text(const std::string& text, std::size_t max_nodes, unsigned threads) {
  NetDocument doc = parse_net_file(text);
  ExploreLimits limits;
  limits.max_nodes = max_nodes;
  limits.threads = threads;
  ReachabilityGraph graph = explore(doc.csnet.net, limits);

  py::dict out;
  out["nodes"] = graph.nodes.size();
  out["edges"] = graph.edges.size();
  out["truncated"] = graph.truncated;
  out["root"] = graph.root;
  out["dot"] = to_dot(graph, doc.csnet.net);
  std::vector<std::string> dead;
  if (!graph.truncated) dead = dead_transitions(graph, doc.csnet.net);
  out["dead_transitions"] = dead;
  return out;
}

std::string scenario_text(const std::string& text, const std::string& policy,
                          std::uint64_t seed) {
  NetDocument doc = parse_net_file(text);
  if (doc.swarm) {
    ScenarioReport report =
        run_scenario(build_swarm_net(*doc.swarm), *doc.swarm, policy_from(policy), seed);
    return report_to_json(report);
  }
  if (doc.lam) {
    ScenarioReport report =
        run_scenario(build_lam_net(*doc.lam), *doc.lam, policy_from(policy), seed);
    return report_to_json(report);
  }
  throw Error("document has no scenario section");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Colored Petri net engine for layered human-agent interaction models";

  // Translators run newest-first, so the derived parse error is registered
  // after its base to take precedence.
  auto engine_error = py::register_exception<Error>(m, "EngineError");
  py::register_exception<NetParseError>(m, "ParseError", engine_error.ptr());

  m.def("validate", &validate_text, py::arg("text"),
        "Parse a net document and return (code, detail) violation pairs.");
  m.def("canonicalize", [](const std::string& text) {
    return serialize_net_file(parse_net_file(text));
  }, py::arg("text"), "Reserialize a net document in canonical form.");
  m.def("digest", [](const std::string& text) {
    return net_digest(parse_net_file(text));
  }, py::arg("text"), "Content digest of a net document's canonical form.");
  m.def("run", &run_text, py::arg("text"), py::arg("policy") = "lexicographic-first",
        py::arg("seed") = 0, py::arg("max_steps") = 100000,
        "Simulate a net document; returns the trace as JSON Lines.");
  m.def("explore", &explore_text, py::arg("text"), py::arg("max_nodes") = 100000,
        py::arg("threads") = 1,
        "Explore the state space; returns summary fields and a DOT rendering.");
  m.def("scenario", &scenario_text, py::arg("text"), py::arg("policy") = "lexicographic-first",
        py::arg("seed") = 0,
        "Run the scenario section of a document; returns the report as JSON.");
}
