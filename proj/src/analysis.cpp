#include "csnet/analysis.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <thread>

#include "csnet/digest.hpp"
#include "csnet/engine.hpp"
#include "csnet/errors.hpp"

namespace csnet {

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Holds:
      return "holds";
    case Outcome::Fails:
      return "fails";
    case Outcome::UnknownTruncated:
      return "unknown-truncated";
  }
  return "unknown";
}

namespace {

struct Successor {
  std::string transition;
  Binding binding;
  Marking marking;
};

std::vector<Successor> successors_of(const Net& net, const Marking& marking) {
  std::vector<Successor> out;
  for (auto& [tid, binding] : enabled_transitions(net, marking)) {
    out.push_back({tid, binding, fire(net, marking, tid, binding)});
  }
  return out;
}

bool within_token_cap(const Marking& marking, std::size_t cap) {
  for (const auto& [_, tokens] : marking.places()) {
    if (tokens.size() > cap) return false;
  }
  return true;
}

}  // namespace

ReachabilityGraph explore(const Net& net, const ExploreLimits& limits) {
  ReachabilityGraph graph;
  graph.limits = limits;

  Marking init = net.initial;
  std::string canon = canonical_marking(init);
  graph.root = sha256_hex(canon);
  graph.nodes.emplace(graph.root, init);

  // Dedup by the full canonical text; the digest is only the exposed key.
  std::map<std::string, std::string> seen;
  seen.emplace(std::move(canon), graph.root);

  std::vector<std::pair<std::string, Marking>> frontier;
  if (within_token_cap(init, limits.max_tokens_per_place)) {
    frontier.emplace_back(graph.root, init);
  } else {
    graph.truncated = true;
  }

  unsigned threads = std::max(1u, limits.threads);
  while (!frontier.empty()) {
    // Successor computation is parallel per frontier slot; the merge below
    // walks slots in order, so the result is independent of interleaving.
    std::vector<std::vector<Successor>> results(frontier.size());
    if (threads == 1 || frontier.size() == 1) {
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        results[i] = successors_of(net, frontier[i].second);
      }
    } else {
      std::vector<std::thread> pool;
      std::size_t chunk = (frontier.size() + threads - 1) / threads;
      for (unsigned w = 0; w < threads; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(frontier.size(), lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
          for (std::size_t i = lo; i < hi; ++i) {
            results[i] = successors_of(net, frontier[i].second);
          }
        });
      }
      for (auto& t : pool) t.join();
    }

    std::vector<std::pair<std::string, Marking>> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const std::string& source = frontier[i].first;
      for (auto& succ : results[i]) {
        std::string succ_canon = canonical_marking(succ.marking);
        auto it = seen.find(succ_canon);
        if (it != seen.end()) {
          graph.edges.push_back({source, succ.transition, succ.binding, it->second});
          continue;
        }
        if (graph.nodes.size() >= limits.max_nodes) {
          graph.truncated = true;
          continue;
        }
        if (!within_token_cap(succ.marking, limits.max_tokens_per_place)) {
          graph.truncated = true;
          continue;
        }
        std::string digest = sha256_hex(succ_canon);
        seen.emplace(std::move(succ_canon), digest);
        graph.nodes.emplace(digest, succ.marking);
        graph.edges.push_back({source, succ.transition, succ.binding, digest});
        next.emplace_back(std::move(digest), std::move(succ.marking));
      }
    }
    frontier = std::move(next);
  }

  std::sort(graph.edges.begin(), graph.edges.end());
  return graph;
}

std::vector<Edge> path_from_root(const ReachabilityGraph& graph, const std::string& target) {
  if (!graph.nodes.count(target)) throw Error("node " + target + " is not in the graph");
  if (target == graph.root) return {};

  std::map<std::string, std::vector<const Edge*>> adjacency;
  for (const auto& edge : graph.edges) adjacency[edge.source].push_back(&edge);

  std::map<std::string, const Edge*> parent;
  std::deque<std::string> queue{graph.root};
  parent[graph.root] = nullptr;
  while (!queue.empty()) {
    std::string node = std::move(queue.front());
    queue.pop_front();
    for (const Edge* edge : adjacency[node]) {
      if (parent.count(edge->target)) continue;
      parent[edge->target] = edge;
      if (edge->target == target) {
        std::vector<Edge> path;
        for (const Edge* e = edge; e != nullptr; e = parent[e->source]) path.push_back(*e);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(edge->target);
    }
  }
  throw Error("node " + target + " is unreachable from the root");
}

AnalysisVerdict check_boundedness(const ReachabilityGraph& graph, std::size_t k) {
  AnalysisVerdict verdict;
  verdict.property = "bounded:" + std::to_string(k);
  for (const auto& [digest, marking] : graph.nodes) {
    for (const auto& [place, tokens] : marking.places()) {
      if (tokens.size() > k) {
        verdict.outcome = Outcome::Fails;
        verdict.counterexample = path_from_root(graph, digest);
        verdict.detail = "place " + place + " holds " + std::to_string(tokens.size()) +
                         " tokens in marking " + digest;
        return verdict;
      }
    }
  }
  verdict.outcome = graph.truncated ? Outcome::UnknownTruncated : Outcome::Holds;
  if (graph.truncated) verdict.detail = "graph truncated before a violation was found";
  return verdict;
}

std::vector<std::string> dead_transitions(const ReachabilityGraph& graph, const Net& net) {
  if (graph.truncated) throw TruncatedGraphError("dead_transitions");
  std::set<std::string> fired;
  for (const auto& edge : graph.edges) fired.insert(edge.transition);
  std::vector<std::string> out;
  for (const auto& [tid, _] : net.transitions) {
    if (!fired.count(tid)) out.push_back(tid);
  }
  return out;
}

std::vector<std::string> find_deadlocks(const ReachabilityGraph& graph) {
  std::set<std::string> with_out;
  for (const auto& edge : graph.edges) with_out.insert(edge.source);
  std::vector<std::string> out;
  for (const auto& [digest, _] : graph.nodes) {
    if (!with_out.count(digest)) out.push_back(digest);
  }
  return out;
}

AnalysisVerdict verify_edge_property(const ReachabilityGraph& graph,
                                     const std::string& transition_id,
                                     const MarkingPredicate& predicate) {
  if (graph.truncated) throw TruncatedGraphError("edge-origin:" + transition_id);
  AnalysisVerdict verdict;
  verdict.property = "edge-origin:" + transition_id;
  for (const auto& edge : graph.edges) {
    if (edge.transition != transition_id) continue;
    if (!predicate(graph.nodes.at(edge.source))) {
      verdict.outcome = Outcome::Fails;
      verdict.counterexample = path_from_root(graph, edge.source);
      verdict.detail = transition_id + " fires from marking " + edge.source +
                       " which fails the predicate";
      return verdict;
    }
  }
  verdict.outcome = Outcome::Holds;
  return verdict;
}

std::string to_dot(const ReachabilityGraph& graph, const Net& net) {
  std::ostringstream out;
  out << "digraph reachability {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=box, fontname=\"monospace\"];\n";
  for (const auto& [digest, marking] : graph.nodes) {
    std::string prefix = digest.substr(0, 8);
    std::ostringstream label;
    label << prefix;
    for (const auto& [place, tokens] : marking.places()) {
      label << "\\n" << place << "=" << tokens.size();
    }
    out << "  \"" << prefix << "\" [label=\"" << label.str() << "\"";
    if (digest == graph.root) out << ", penwidth=2";
    out << "];\n";
  }
  for (const auto& edge : graph.edges) {
    std::string label = edge.transition;
    auto t = net.transitions.find(edge.transition);
    if (t != net.transitions.end() && !t->second.name.empty()) label = t->second.name;
    out << "  \"" << edge.source.substr(0, 8) << "\" -> \"" << edge.target.substr(0, 8)
        << "\" [label=\"" << label << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace csnet
