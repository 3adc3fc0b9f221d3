#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "csnet/colors.hpp"
#include "csnet/comm_space.hpp"

namespace csnet {

struct Message {
  std::int64_t seq = 0;
  std::string sender;
  std::string topic;
  ColorValue payload;

  bool operator==(const Message&) const = default;
};

// A plain agent as seen by group-agents: identity, activity status, declared
// topic interests, and the inbox buffer deliveries append to.
struct AgentRef {
  std::string id;
  bool on = true;
  std::set<std::string> topics;
  std::vector<Message> buffer;
};

using AgentDirectory = std::map<std::string, AgentRef>;

struct DropRecord {
  std::string sender;
  std::string topic;
  ColorValue payload;
  std::string reason;
};

// Membership registry for one topic. Members sit in exactly one compartment;
// only active members receive deliveries.
struct GroupAgent {
  std::string id;
  bool on = true;
  std::string topic;
  std::set<std::string> cmp_active;
  std::set<std::string> cmp_nonactive;
  std::int64_t next_seq = 0;
  std::vector<DropRecord> drops;
};

bool is_member(const GroupAgent& group, const std::string& agent_id);

enum class RegisterOutcome { AddedActive, AddedNonactive, NotConcerned };

// Adds a concerned agent to the compartment matching its status; agents not
// concerned with the group's topic are left out. Throws AlreadyMemberError.
RegisterOutcome register_agent(GroupAgent& group, const AgentRef& agent);

enum class DeliverOutcome { Delivered, DroppedGroupOff, DroppedTopicMismatch };

struct DeliverResult {
  DeliverOutcome outcome = DeliverOutcome::Delivered;
  std::optional<std::int64_t> seq;
  std::vector<std::string> recipients;
};

// Sends a message through the group: when the group is on and the topic
// matches, every active member's buffer grows by one sequenced copy.
// Anything else is dropped and recorded. Throws SenderNotMemberError.
DeliverResult deliver(GroupAgent& group, AgentDirectory& directory, const std::string& sender,
                      const std::string& topic, const ColorValue& payload);

enum class DeregisterOutcome { Removed, NoEffect };

// Removes an active member. Non-active members cannot be deregistered.
DeregisterOutcome deregister(GroupAgent& group, const std::string& agent_id);

enum class SwitchOutcome { MovedToActive, MovedToNonactive, NoChange };

// Realigns a member's compartment with its current status.
// Throws NotMemberError.
SwitchOutcome switch_cmp(GroupAgent& group, const AgentRef& agent);

// Net fragment equivalent to deliver: a publish place (surface) feeding one
// inbox place per member (observation) through one delivery transition per
// active member. The published token carries a delivery stage so each active
// member receives exactly one copy. A group that is off compiles to no
// delivery transitions at all.
CommSpaceNet compile_group_to_net(const GroupAgent& group, const AgentDirectory& directory,
                                  const ColorSet& payload_colorset);

}  // namespace csnet
