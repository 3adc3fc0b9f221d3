#include "csnet/comm_space.hpp"

#include <cstdlib>

#include "csnet/errors.hpp"

namespace csnet {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Surface:
      return "surface";
    case SpaceKind::Observation:
      return "observation";
    case SpaceKind::Computation:
      return "computation";
  }
  return "unknown";
}

std::optional<SpaceKind> parse_space(const std::string& text) {
  if (text == "surface") return SpaceKind::Surface;
  if (text == "observation") return SpaceKind::Observation;
  if (text == "computation") return SpaceKind::Computation;
  return std::nullopt;
}

int space_rank(SpaceKind kind) { return static_cast<int>(kind); }

bool spaces_adjacent(SpaceKind a, SpaceKind b) {
  return std::abs(space_rank(a) - space_rank(b)) <= 1;
}

std::string to_string(FlowKind kind) {
  return kind == FlowKind::Horizontal ? "horizontal" : "vertical";
}

namespace {

// Looks up the space of an arc's place; reports the bypass when the place
// sits two layers away from the transition. `from` and `to` follow the data
// direction so the violation reads as the offending hop.
void check_arc(const CommSpaceNet& csnet, const std::string& tid, SpaceKind tspace,
               const std::string& place, bool is_output, std::vector<Violation>& out) {
  auto it = csnet.spaces.places.find(place);
  if (it == csnet.spaces.places.end()) return;  // reported once as UNASSIGNED
  if (spaces_adjacent(tspace, it->second)) return;
  std::string from = to_string(is_output ? tspace : it->second);
  std::string to = to_string(is_output ? it->second : tspace);
  out.push_back({"BYPASS", tid + " " + from + "->" + to});
}

}  // namespace

std::vector<Violation> validate_layering(const CommSpaceNet& csnet) {
  std::vector<Violation> out;

  for (const auto& [pid, _] : csnet.net.places) {
    if (!csnet.spaces.places.count(pid)) {
      out.push_back({"UNASSIGNED", "place " + pid});
    }
  }
  for (const auto& [tid, _] : csnet.net.transitions) {
    if (!csnet.spaces.transitions.count(tid)) {
      out.push_back({"UNASSIGNED", "transition " + tid});
    }
  }
  for (const auto& [pid, _] : csnet.spaces.places) {
    if (!csnet.net.places.count(pid)) {
      out.push_back({"SPACE_DANGLING_REF", "assignment names unknown place " + pid});
    }
  }
  for (const auto& [tid, _] : csnet.spaces.transitions) {
    if (!csnet.net.transitions.count(tid)) {
      out.push_back({"SPACE_DANGLING_REF", "assignment names unknown transition " + tid});
    }
  }

  for (const auto& [tid, t] : csnet.net.transitions) {
    auto ts = csnet.spaces.transitions.find(tid);
    if (ts == csnet.spaces.transitions.end()) continue;
    for (const auto& arc : t.inputs) check_arc(csnet, tid, ts->second, arc.place, false, out);
    for (const auto& arc : t.outputs) check_arc(csnet, tid, ts->second, arc.place, true, out);
  }

  return out;
}

FlowKind flow_classify(const CommSpaceNet& csnet, const std::string& transition_id) {
  auto t = csnet.net.transitions.find(transition_id);
  if (t == csnet.net.transitions.end()) throw UnknownTransitionError(transition_id);
  auto ts = csnet.spaces.transitions.find(transition_id);
  if (ts == csnet.spaces.transitions.end()) {
    throw Error("transition " + transition_id + " has no space assignment");
  }

  auto same_space = [&](const std::string& place) {
    auto ps = csnet.spaces.places.find(place);
    return ps != csnet.spaces.places.end() && ps->second == ts->second;
  };
  for (const auto& arc : t->second.inputs) {
    if (!same_space(arc.place)) return FlowKind::Vertical;
  }
  for (const auto& arc : t->second.outputs) {
    if (!same_space(arc.place)) return FlowKind::Vertical;
  }
  return FlowKind::Horizontal;
}

Net space_projection(const CommSpaceNet& csnet, SpaceKind space) {
  Net out;
  out.colorsets = csnet.net.colorsets;
  for (const auto& [pid, place] : csnet.net.places) {
    auto ps = csnet.spaces.places.find(pid);
    if (ps != csnet.spaces.places.end() && ps->second == space) {
      out.places.emplace(pid, place);
      const Multiset& tokens = csnet.net.initial.at(pid);
      if (!tokens.empty()) out.initial.set(pid, tokens);
    }
  }
  for (const auto& [tid, t] : csnet.net.transitions) {
    auto ts = csnet.spaces.transitions.find(tid);
    if (ts != csnet.spaces.transitions.end() && ts->second == space &&
        flow_classify(csnet, tid) == FlowKind::Horizontal) {
      out.transitions.emplace(tid, t);
    }
  }
  return out;
}

}  // namespace csnet
