#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csnet/net.hpp"

namespace csnet {

// The three interaction layers. Surface touches the outside world,
// computation holds the decision core, observation mediates between them.
enum class SpaceKind { Surface, Observation, Computation };

std::string to_string(SpaceKind kind);
std::optional<SpaceKind> parse_space(const std::string& text);

// Layers are ordered; two spaces are adjacent when their ranks differ by at
// most one, so surface and computation are never adjacent.
int space_rank(SpaceKind kind);
bool spaces_adjacent(SpaceKind a, SpaceKind b);

struct SpaceAssignment {
  std::map<std::string, SpaceKind> places;
  std::map<std::string, SpaceKind> transitions;

  bool operator==(const SpaceAssignment&) const = default;
};

struct CommSpaceNet {
  Net net;
  SpaceAssignment spaces;

  bool operator==(const CommSpaceNet&) const = default;
};

// Checks that the assignment is total and that every arc connects a
// transition to a place in the same or an adjacent space. Raw data must not
// jump from surface to computation (or back) in one hop.
std::vector<Violation> validate_layering(const CommSpaceNet& csnet);

enum class FlowKind { Horizontal, Vertical };

std::string to_string(FlowKind kind);

// Horizontal iff every arc endpoint shares the transition's space.
// Throws UnknownTransitionError.
FlowKind flow_classify(const CommSpaceNet& csnet, const std::string& transition_id);

// Subnet induced by the space's places and its horizontal transitions.
Net space_projection(const CommSpaceNet& csnet, SpaceKind space);

}  // namespace csnet
