#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "csnet/net.hpp"

namespace csnet {

enum class FiringPolicy {
  LexicographicFirst,
  SeededUniformRandom,
};

std::string to_string(FiringPolicy policy);
std::optional<FiringPolicy> parse_policy(const std::string& text);

// Deterministic RNG. uniform_index uses rejection sampling so results do not
// depend on the standard library's distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t uniform_index(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

// All bindings under which the transition may fire, sorted by variable name
// then value. Throws UnknownTransitionError.
std::vector<Binding> enabled_bindings(const Net& net, const Marking& marking,
                                      const std::string& transition_id);

// Every enabled event, ordered by transition id then binding order.
std::vector<std::pair<std::string, Binding>> enabled_transitions(const Net& net,
                                                                 const Marking& marking);

// Fires the transition under the binding, returning the successor marking.
// Output values are canonicalized against the target place's colorset.
// Throws NotEnabledError (with a reason) or UnknownTransitionError.
Marking fire(const Net& net, const Marking& marking, const std::string& transition_id,
             const Binding& binding);

struct StepResult {
  std::string transition;
  Binding binding;
  Marking marking;
};

// Selects and fires one enabled event per the policy; absent on quiescence.
std::optional<StepResult> step(const Net& net, const Marking& marking, FiringPolicy policy,
                               Rng& rng);

enum class TerminalReason { Quiescent, MaxSteps, Halted };

std::string to_string(TerminalReason reason);

struct TraceStep {
  std::size_t index = 0;
  std::string transition;
  Binding binding;
  std::string marking_digest;

  bool operator==(const TraceStep&) const = default;
};

struct Trace {
  std::uint64_t seed = 0;
  FiringPolicy policy = FiringPolicy::LexicographicFirst;
  std::vector<TraceStep> steps;
  TerminalReason terminal = TerminalReason::Quiescent;
  Marking final_marking;
};

// Step observer: called after each firing; returning false halts the run.
using StepObserver = std::function<bool(const TraceStep&, const Marking&)>;

// Runs from the initial marking until quiescence or max_steps. Identical
// (net, policy, seed, max_steps) yields identical traces.
Trace run(const Net& net, FiringPolicy policy, std::uint64_t seed, std::size_t max_steps,
          const StepObserver& observer = nullptr);

}  // namespace csnet
