#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "csnet/net.hpp"

namespace csnet {

struct ExploreLimits {
  std::size_t max_nodes = 100000;
  std::size_t max_tokens_per_place = std::numeric_limits<std::size_t>::max();
  unsigned threads = 1;
};

struct Edge {
  std::string source;
  std::string transition;
  Binding binding;
  std::string target;

  bool operator==(const Edge&) const = default;
  auto operator<=>(const Edge&) const = default;
};

struct ReachabilityGraph {
  std::map<std::string, Marking> nodes;  // digest -> marking
  std::vector<Edge> edges;               // sorted (source, transition, binding, target)
  std::string root;
  bool truncated = false;
  ExploreLimits limits;
};

// Breadth-first closure of fire from the initial marking, deduplicating by
// canonical marking. truncated is set when a limit cuts the search short.
// Node and edge order are canonical regardless of thread count.
ReachabilityGraph explore(const Net& net, const ExploreLimits& limits = {});

enum class Outcome { Holds, Fails, UnknownTruncated };

std::string to_string(Outcome outcome);

struct AnalysisVerdict {
  std::string property;
  Outcome outcome = Outcome::Holds;
  std::vector<Edge> counterexample;  // replayable path from the root
  std::string detail;
};

// Shortest edge path from the root to the target node. Deterministic; throws
// if the target is not in the graph.
std::vector<Edge> path_from_root(const ReachabilityGraph& graph, const std::string& target);

// Holds iff every place in every node holds at most k tokens. A found
// violation is definite even on truncated graphs.
AnalysisVerdict check_boundedness(const ReachabilityGraph& graph, std::size_t k);

// Transitions appearing on no edge. Throws TruncatedGraphError.
std::vector<std::string> dead_transitions(const ReachabilityGraph& graph, const Net& net);

// Digests of nodes with no outgoing edges, sorted.
std::vector<std::string> find_deadlocks(const ReachabilityGraph& graph);

using MarkingPredicate = std::function<bool(const Marking&)>;

// Holds iff every edge labeled with the transition originates from a marking
// satisfying the predicate. Throws TruncatedGraphError.
AnalysisVerdict verify_edge_property(const ReachabilityGraph& graph,
                                     const std::string& transition_id,
                                     const MarkingPredicate& predicate);

// DOT export with stable ordering; byte-reproducible for equal graphs.
std::string to_dot(const ReachabilityGraph& graph, const Net& net);

}  // namespace csnet
