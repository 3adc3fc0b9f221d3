#include "csnet/group_agent.hpp"

#include <algorithm>

#include "csnet/errors.hpp"

namespace csnet {

bool is_member(const GroupAgent& group, const std::string& agent_id) {
  return group.cmp_active.count(agent_id) || group.cmp_nonactive.count(agent_id);
}

RegisterOutcome register_agent(GroupAgent& group, const AgentRef& agent) {
  if (is_member(group, agent.id)) throw AlreadyMemberError(group.id, agent.id);
  if (!agent.topics.count(group.topic)) return RegisterOutcome::NotConcerned;
  if (agent.on) {
    group.cmp_active.insert(agent.id);
    return RegisterOutcome::AddedActive;
  }
  group.cmp_nonactive.insert(agent.id);
  return RegisterOutcome::AddedNonactive;
}

DeliverResult deliver(GroupAgent& group, AgentDirectory& directory, const std::string& sender,
                      const std::string& topic, const ColorValue& payload) {
  if (!is_member(group, sender)) throw SenderNotMemberError(group.id, sender);

  DeliverResult result;
  if (!group.on) {
    result.outcome = DeliverOutcome::DroppedGroupOff;
    group.drops.push_back({sender, topic, payload, "group-off"});
    return result;
  }
  if (topic != group.topic) {
    result.outcome = DeliverOutcome::DroppedTopicMismatch;
    group.drops.push_back({sender, topic, payload, "topic-mismatch"});
    return result;
  }

  Message message{group.next_seq++, sender, topic, payload};
  result.seq = message.seq;
  for (const auto& id : group.cmp_active) {
    auto it = directory.find(id);
    if (it == directory.end()) throw Error("group " + group.id + " lists unknown agent " + id);
    it->second.buffer.push_back(message);
    result.recipients.push_back(id);
  }
  return result;
}

DeregisterOutcome deregister(GroupAgent& group, const std::string& agent_id) {
  if (group.cmp_active.erase(agent_id)) return DeregisterOutcome::Removed;
  return DeregisterOutcome::NoEffect;
}

SwitchOutcome switch_cmp(GroupAgent& group, const AgentRef& agent) {
  if (!is_member(group, agent.id)) throw NotMemberError(group.id, agent.id);
  if (!agent.on && group.cmp_active.count(agent.id)) {
    group.cmp_active.erase(agent.id);
    group.cmp_nonactive.insert(agent.id);
    return SwitchOutcome::MovedToNonactive;
  }
  if (agent.on && group.cmp_nonactive.count(agent.id)) {
    group.cmp_nonactive.erase(agent.id);
    group.cmp_active.insert(agent.id);
    return SwitchOutcome::MovedToActive;
  }
  return SwitchOutcome::NoChange;
}

CommSpaceNet compile_group_to_net(const GroupAgent& group, const AgentDirectory& directory,
                                  const ColorSet& payload_colorset) {
  CommSpaceNet out;

  std::vector<std::string> members(group.cmp_active.begin(), group.cmp_active.end());
  members.insert(members.end(), group.cmp_nonactive.begin(), group.cmp_nonactive.end());
  std::sort(members.begin(), members.end());

  // The sender domain covers the group itself so the enum is never empty.
  std::vector<std::string> senders = members;
  senders.push_back(group.id);
  std::sort(senders.begin(), senders.end());
  senders.erase(std::unique(senders.begin(), senders.end()), senders.end());

  std::set<std::string> topic_set{group.topic};
  for (const auto& id : members) {
    auto it = directory.find(id);
    if (it == directory.end()) throw Error("group " + group.id + " lists unknown agent " + id);
    topic_set.insert(it->second.topics.begin(), it->second.topics.end());
  }
  std::vector<std::string> topics(topic_set.begin(), topic_set.end());

  std::vector<std::string> active(group.cmp_active.begin(), group.cmp_active.end());
  std::int64_t stages = group.on ? static_cast<std::int64_t>(active.size()) : 0;

  ColorSet agent_cs = ColorSet::enumeration("agent", senders);
  ColorSet topic_cs = ColorSet::enumeration("topic", topics);
  out.net.colorsets.emplace(agent_cs.name, agent_cs);
  out.net.colorsets.emplace(topic_cs.name, topic_cs);
  out.net.colorsets.emplace(payload_colorset.name, payload_colorset);
  out.net.colorsets.emplace("stage", ColorSet::int_range("stage", 0, stages));
  out.net.colorsets.emplace(
      "envelope", ColorSet::product("envelope", {"agent", "topic", payload_colorset.name, "stage"}));
  out.net.colorsets.emplace("delivery",
                            ColorSet::product("delivery", {"agent", "topic", payload_colorset.name}));

  out.net.places.emplace("pub", Place{"pub", "Published", "envelope"});
  out.spaces.places.emplace("pub", SpaceKind::Surface);
  for (const auto& id : members) {
    std::string pid = "inbox_" + id;
    out.net.places.emplace(pid, Place{pid, "Inbox " + id, "delivery"});
    out.spaces.places.emplace(pid, SpaceKind::Observation);
  }

  if (!group.on) return out;

  // Stage i hands the message to the i-th active member and passes the
  // envelope on; the stage-k envelope has no consumer and rests in pub.
  for (std::size_t i = 0; i < active.size(); ++i) {
    Transition t;
    t.id = "deliver_" + active[i];
    t.name = "Deliver to " + active[i];
    ArcPattern pattern = ArcPattern::tuple(
        {ArcPattern::variable("s"), ArcPattern::variable("t"), ArcPattern::variable("p"),
         ArcPattern::literal(ColorValue::of_int(static_cast<std::int64_t>(i)))});
    t.inputs.push_back({"pub", pattern});
    t.guard = GuardExpr::cmp(GuardExpr::CmpOp::Eq, GuardOperand::variable("t"),
                             GuardOperand::literal(topic_cs.sym_value(group.topic)));
    t.outputs.push_back(
        {"inbox_" + active[i],
         ArcExpr::tuple({ArcExpr::variable("s"), ArcExpr::variable("t"), ArcExpr::variable("p")})});
    t.outputs.push_back(
        {"pub", ArcExpr::tuple({ArcExpr::variable("s"), ArcExpr::variable("t"),
                                ArcExpr::variable("p"),
                                ArcExpr::literal(ColorValue::of_int(static_cast<std::int64_t>(i) + 1))})});
    out.spaces.transitions.emplace(t.id, SpaceKind::Observation);
    out.net.transitions.emplace(t.id, std::move(t));
  }

  return out;
}

}  // namespace csnet
