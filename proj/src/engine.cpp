#include "csnet/engine.hpp"

#include <algorithm>
#include <set>

#include "csnet/digest.hpp"
#include "csnet/errors.hpp"

namespace csnet {

std::string to_string(FiringPolicy policy) {
  switch (policy) {
    case FiringPolicy::LexicographicFirst:
      return "lexicographic-first";
    case FiringPolicy::SeededUniformRandom:
      return "seeded-uniform-random";
  }
  return "unknown";
}

std::optional<FiringPolicy> parse_policy(const std::string& text) {
  if (text == "lexicographic-first") return FiringPolicy::LexicographicFirst;
  if (text == "seeded-uniform-random") return FiringPolicy::SeededUniformRandom;
  return std::nullopt;
}

std::string to_string(TerminalReason reason) {
  switch (reason) {
    case TerminalReason::Quiescent:
      return "quiescent";
    case TerminalReason::MaxSteps:
      return "max-steps";
    case TerminalReason::Halted:
      return "halted";
  }
  return "unknown";
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw Error("uniform_index over empty range");
  // Reject the low remainder band so every index is equally likely.
  std::uint64_t threshold = (-n) % n;
  for (;;) {
    std::uint64_t r = engine_();
    if (r >= threshold) return r % n;
  }
}

namespace {

// Attempts to match value against pattern, extending binding. Newly bound
// names are appended to trail so the caller can backtrack.
bool unify(const ArcPattern& pattern, const ColorValue& value, Binding& binding,
           std::vector<std::string>& trail) {
  switch (pattern.kind) {
    case ArcPattern::Kind::Var: {
      auto it = binding.find(pattern.var);
      if (it != binding.end()) return it->second == value;
      binding.emplace(pattern.var, value);
      trail.push_back(pattern.var);
      return true;
    }
    case ArcPattern::Kind::Lit:
      return pattern.lit == value;
    case ArcPattern::Kind::Tuple: {
      if (value.kind() != ColorValue::Kind::Tuple) return false;
      const auto& elems = value.elements();
      if (elems.size() != pattern.elements.size()) return false;
      for (std::size_t i = 0; i < elems.size(); ++i) {
        if (!unify(pattern.elements[i], elems[i], binding, trail)) return false;
      }
      return true;
    }
  }
  return false;
}

ColorValue operand_value(const GuardOperand& operand, const Binding& binding) {
  if (!operand.is_var) return operand.lit;
  auto it = binding.find(operand.var);
  if (it == binding.end()) throw Error("guard references unbound variable " + operand.var);
  return it->second;
}

bool guard_eval(const GuardExpr& guard, const Binding& binding) {
  switch (guard.kind) {
    case GuardExpr::Kind::True:
      return true;
    case GuardExpr::Kind::Cmp: {
      ColorValue lhs = operand_value(guard.lhs, binding);
      ColorValue rhs = operand_value(guard.rhs, binding);
      switch (guard.op) {
        case GuardExpr::CmpOp::Eq:
          return lhs == rhs;
        case GuardExpr::CmpOp::Ne:
          return !(lhs == rhs);
        default:
          break;
      }
      if (lhs.kind() != ColorValue::Kind::Int || rhs.kind() != ColorValue::Kind::Int) {
        throw Error("ordering comparison on non-integer values");
      }
      switch (guard.op) {
        case GuardExpr::CmpOp::Lt:
          return lhs.int_value() < rhs.int_value();
        case GuardExpr::CmpOp::Le:
          return lhs.int_value() <= rhs.int_value();
        case GuardExpr::CmpOp::Gt:
          return lhs.int_value() > rhs.int_value();
        case GuardExpr::CmpOp::Ge:
          return lhs.int_value() >= rhs.int_value();
        default:
          break;
      }
      return false;
    }
    case GuardExpr::Kind::And:
      return std::all_of(guard.children.begin(), guard.children.end(),
                         [&](const GuardExpr& g) { return guard_eval(g, binding); });
    case GuardExpr::Kind::Or:
      return std::any_of(guard.children.begin(), guard.children.end(),
                         [&](const GuardExpr& g) { return guard_eval(g, binding); });
    case GuardExpr::Kind::Not:
      return !guard_eval(guard.children.front(), binding);
  }
  return false;
}

// Value a fully bound pattern consumes. Patterns destructure completely, so
// the binding determines the token.
ColorValue pattern_value(const ArcPattern& pattern, const Binding& binding) {
  switch (pattern.kind) {
    case ArcPattern::Kind::Var: {
      auto it = binding.find(pattern.var);
      if (it == binding.end()) throw Error("pattern references unbound variable " + pattern.var);
      return it->second;
    }
    case ArcPattern::Kind::Lit:
      return pattern.lit;
    case ArcPattern::Kind::Tuple: {
      std::vector<ColorValue> elems;
      elems.reserve(pattern.elements.size());
      for (const auto& e : pattern.elements) elems.push_back(pattern_value(e, binding));
      return ColorValue::tuple(std::move(elems));
    }
  }
  throw Error("malformed pattern");
}

ColorValue expr_value(const ArcExpr& expr, const Binding& binding) {
  switch (expr.kind) {
    case ArcExpr::Kind::Var: {
      auto it = binding.find(expr.var);
      if (it == binding.end()) throw Error("expression references unbound variable " + expr.var);
      return it->second;
    }
    case ArcExpr::Kind::Lit:
      return expr.lit;
    case ArcExpr::Kind::Tuple: {
      std::vector<ColorValue> elems;
      elems.reserve(expr.elements.size());
      for (const auto& e : expr.elements) elems.push_back(expr_value(e, binding));
      return ColorValue::tuple(std::move(elems));
    }
  }
  throw Error("malformed expression");
}

const Transition& find_transition(const Net& net, const std::string& transition_id) {
  auto it = net.transitions.find(transition_id);
  if (it == net.transitions.end()) throw UnknownTransitionError(transition_id);
  return it->second;
}

// Depth-first search over input arcs. `remaining` tracks tokens not yet
// claimed by earlier arcs, so shared places account for multiplicity.
void search(const Transition& t, std::size_t arc_index, Marking& remaining, Binding& binding,
            std::set<Binding>& out) {
  if (arc_index == t.inputs.size()) {
    if (guard_eval(t.guard, binding)) out.insert(binding);
    return;
  }
  const InputArc& arc = t.inputs[arc_index];
  // Iterate distinct values only; equal tokens are interchangeable.
  std::vector<ColorValue> candidates = remaining.at(arc.place).values();
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (const ColorValue& value : candidates) {
    std::vector<std::string> trail;
    if (unify(arc.pattern, value, binding, trail)) {
      remaining.remove(arc.place, value);
      search(t, arc_index + 1, remaining, binding, out);
      remaining.add(arc.place, value);
    }
    for (const auto& name : trail) binding.erase(name);
  }
}

}  // namespace

std::vector<Binding> enabled_bindings(const Net& net, const Marking& marking,
                                      const std::string& transition_id) {
  const Transition& t = find_transition(net, transition_id);
  std::set<Binding> found;
  Marking remaining = marking;
  Binding binding;
  search(t, 0, remaining, binding, found);
  return {found.begin(), found.end()};
}

std::vector<std::pair<std::string, Binding>> enabled_transitions(const Net& net,
                                                                 const Marking& marking) {
  std::vector<std::pair<std::string, Binding>> out;
  for (const auto& [tid, _] : net.transitions) {
    for (auto& b : enabled_bindings(net, marking, tid)) {
      out.emplace_back(tid, std::move(b));
    }
  }
  return out;
}

Marking fire(const Net& net, const Marking& marking, const std::string& transition_id,
             const Binding& binding) {
  const Transition& t = find_transition(net, transition_id);

  std::vector<std::string> expected = transition_variables(t);
  std::vector<std::string> given;
  given.reserve(binding.size());
  for (const auto& [name, _] : binding) given.push_back(name);
  if (given != expected) {
    throw NotEnabledError(transition_id, "binding does not cover the transition variables");
  }
  if (!guard_eval(t.guard, binding)) {
    throw NotEnabledError(transition_id, "guard is false under the binding");
  }

  Marking next = marking;
  for (const auto& arc : t.inputs) {
    ColorValue needed = pattern_value(arc.pattern, binding);
    // Literal patterns may carry unresolved enum indices; canonicalize so
    // the ordered-multiset removal finds the token.
    auto place = net.places.find(arc.place);
    if (place != net.places.end()) {
      auto cs = net.colorsets.find(place->second.colorset);
      if (cs != net.colorsets.end()) {
        if (auto canon = canonicalize(needed, cs->second, net.colorsets)) needed = *canon;
      }
    }
    if (!next.remove(arc.place, needed)) {
      throw NotEnabledError(transition_id,
                            "missing token " + needed.to_text() + " in place " + arc.place);
    }
  }
  for (const auto& arc : t.outputs) {
    ColorValue produced = expr_value(arc.expr, binding);
    auto place = net.places.find(arc.place);
    if (place == net.places.end()) throw UnknownPlaceError(arc.place);
    auto cs = net.colorsets.find(place->second.colorset);
    if (cs != net.colorsets.end()) {
      auto canon = canonicalize(produced, cs->second, net.colorsets);
      if (canon) produced = *canon;
    }
    next.add(arc.place, std::move(produced));
  }
  return next;
}

std::optional<StepResult> step(const Net& net, const Marking& marking, FiringPolicy policy,
                               Rng& rng) {
  std::vector<std::pair<std::string, Binding>> events = enabled_transitions(net, marking);
  if (events.empty()) return std::nullopt;

  std::size_t pick = 0;
  if (policy == FiringPolicy::SeededUniformRandom) {
    pick = static_cast<std::size_t>(rng.uniform_index(events.size()));
  }
  auto& [tid, binding] = events[pick];
  Marking next = fire(net, marking, tid, binding);
  return StepResult{tid, std::move(binding), std::move(next)};
}

Trace run(const Net& net, FiringPolicy policy, std::uint64_t seed, std::size_t max_steps,
          const StepObserver& observer) {
  Trace trace;
  trace.seed = seed;
  trace.policy = policy;
  Rng rng(seed);
  Marking marking = net.initial;
  trace.terminal = TerminalReason::MaxSteps;
  for (std::size_t i = 0; i < max_steps; ++i) {
    auto result = step(net, marking, policy, rng);
    if (!result) {
      trace.terminal = TerminalReason::Quiescent;
      break;
    }
    marking = std::move(result->marking);
    TraceStep record{i, std::move(result->transition), std::move(result->binding),
                     marking_digest(marking)};
    trace.steps.push_back(record);
    if (observer && !observer(trace.steps.back(), marking)) {
      trace.terminal = TerminalReason::Halted;
      break;
    }
  }
  if (trace.terminal == TerminalReason::MaxSteps) {
    // max_steps reached; report quiescent instead if nothing is enabled.
    Rng probe(seed + 1);
    if (!step(net, marking, FiringPolicy::LexicographicFirst, probe)) {
      trace.terminal = TerminalReason::Quiescent;
    }
  }
  trace.final_marking = std::move(marking);
  return trace;
}

}  // namespace csnet
