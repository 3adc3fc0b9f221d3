#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csnet/comm_space.hpp"
#include "csnet/engine.hpp"
#include "csnet/group_agent.hpp"
#include "csnet/scenarios.hpp"

namespace csnet {

// One parsed net file: the net itself plus the optional group and scenario
// sections. Every section except the version marker may be absent, so a
// file can also be a pure scenario config.
struct NetDocument {
  CommSpaceNet csnet;
  std::vector<GroupAgent> groups;
  AgentDirectory agents;
  std::optional<SwarmConfig> swarm;
  std::optional<LamConfig> lam;
};

// Token value text: "()", "42", "'red", "(1, 'red)". Throws NetParseError.
ColorValue parse_value_text(const std::string& text);

// Pattern/expression text is the value grammar plus bare identifiers for
// variables, e.g. "x", "(d, t)", "(0, 'red)".
ArcPattern parse_pattern_text(const std::string& text);
std::string pattern_to_text(const ArcPattern& pattern);
ArcExpr parse_expr_text(const std::string& text);
std::string expr_to_text(const ArcExpr& expr);

// Guards are prefix s-expressions: "true", "(= x 'red)",
// "(and (= x y) (< x 3))", "(not (= x y))".
GuardExpr parse_guard_text(const std::string& text);
std::string guard_to_text(const GuardExpr& guard);

// Parses a "csnet-1" JSON document. Unknown fields are rejected. Throws
// NetParseError with line/column for syntax errors (0/0 when the position
// is not attributable).
NetDocument parse_net_file(const std::string& json_text);

// Canonical serialization: fixed field order, sections sorted by id, token
// lists in multiset order. parse(serialize(doc)) yields an equal document.
std::string serialize_net_file(const NetDocument& doc);

// Digest of the canonical serialization; identifies the net in trace headers.
std::string net_digest(const NetDocument& doc);

// Trace files are JSON Lines: one header record, then one record per event.
std::string trace_to_jsonl(const Trace& trace, const std::string& net_digest);

struct TraceFileData {
  std::uint64_t seed = 0;
  FiringPolicy policy = FiringPolicy::LexicographicFirst;
  std::string net_digest;
  std::vector<TraceStep> steps;
};

// Parses and checks a trace file (contiguous steps, lowercase hex digests).
TraceFileData parse_trace_jsonl(const std::string& text);

// Scenario report as a JSON document; accuracy appears only when present.
std::string report_to_json(const ScenarioReport& report);

}  // namespace csnet
