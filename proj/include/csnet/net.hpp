#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "csnet/colors.hpp"

namespace csnet {

// Multiset of token values, kept sorted so iteration order is canonical.
class Multiset {
 public:
  Multiset() = default;
  explicit Multiset(std::vector<ColorValue> values);

  void add(ColorValue value);
  // Removes one occurrence; returns false if the value is absent.
  bool remove(const ColorValue& value);
  std::size_t count(const ColorValue& value) const;
  bool contains(const ColorValue& value) const { return count(value) > 0; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::vector<ColorValue>& values() const { return values_; }

  bool operator==(const Multiset&) const = default;

 private:
  std::vector<ColorValue> values_;  // sorted
};

// Global net state: place id -> multiset. Places with empty multisets are
// not stored, so equal markings compare equal structurally.
class Marking {
 public:
  Marking() = default;

  void add(const std::string& place, ColorValue value);
  bool remove(const std::string& place, const ColorValue& value);
  const Multiset& at(const std::string& place) const;
  std::size_t total_tokens() const;
  const std::map<std::string, Multiset>& places() const { return places_; }
  void set(const std::string& place, Multiset tokens);

  bool operator==(const Marking&) const = default;

 private:
  std::map<std::string, Multiset> places_;
};

struct Place {
  std::string id;
  std::string name;
  std::string colorset;
  bool operator==(const Place&) const = default;
};

// Input arc pattern: destructures one token. A variable may repeat across a
// transition's inputs; repeated occurrences must bind equal values.
struct ArcPattern {
  enum class Kind { Var, Lit, Tuple };
  Kind kind = Kind::Var;
  std::string var;
  ColorValue lit;
  std::vector<ArcPattern> elements;

  static ArcPattern variable(std::string name);
  static ArcPattern literal(ColorValue value);
  static ArcPattern tuple(std::vector<ArcPattern> elements);
  bool operator==(const ArcPattern&) const = default;
};

// Output arc expression: rebuilds a token from bound variables and literals.
struct ArcExpr {
  enum class Kind { Var, Lit, Tuple };
  Kind kind = Kind::Var;
  std::string var;
  ColorValue lit;
  std::vector<ArcExpr> elements;

  static ArcExpr variable(std::string name);
  static ArcExpr literal(ColorValue value);
  static ArcExpr tuple(std::vector<ArcExpr> elements);
  bool operator==(const ArcExpr&) const = default;
};

// Guard leaves are variables or literals; comparisons other than =/!= are
// integer-only. No arithmetic.
struct GuardOperand {
  bool is_var = false;
  std::string var;
  ColorValue lit;

  static GuardOperand variable(std::string name);
  static GuardOperand literal(ColorValue value);
  bool operator==(const GuardOperand&) const = default;
};

struct GuardExpr {
  enum class Kind { True, Cmp, And, Or, Not };
  enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

  Kind kind = Kind::True;
  CmpOp op = CmpOp::Eq;
  GuardOperand lhs;
  GuardOperand rhs;
  std::vector<GuardExpr> children;  // And/Or: >=1, Not: exactly 1

  static GuardExpr truth();
  static GuardExpr cmp(CmpOp op, GuardOperand lhs, GuardOperand rhs);
  static GuardExpr conj(std::vector<GuardExpr> children);
  static GuardExpr disj(std::vector<GuardExpr> children);
  static GuardExpr negate(GuardExpr child);
  bool operator==(const GuardExpr&) const = default;
};

struct InputArc {
  std::string place;
  ArcPattern pattern;
  bool operator==(const InputArc&) const = default;
};

struct OutputArc {
  std::string place;
  ArcExpr expr;
  bool operator==(const OutputArc&) const = default;
};

struct Transition {
  std::string id;
  std::string name;
  std::vector<InputArc> inputs;
  std::vector<OutputArc> outputs;
  GuardExpr guard;
  bool operator==(const Transition&) const = default;
};

struct Net {
  ColorSetRegistry colorsets;
  std::map<std::string, Place> places;
  std::map<std::string, Transition> transitions;
  Marking initial;

  const ColorSet& colorset_of(const Place& place) const;
  bool operator==(const Net&) const = default;
};

// An assignment of values to a transition's variables, keyed by name.
using Binding = std::map<std::string, ColorValue>;

// Every structural and typing problem in the net; empty means well-formed.
// fire/enabled_bindings assume a validated net.
std::vector<Violation> validate_net(const Net& net);

// Variables bound by a transition's input patterns, sorted.
std::vector<std::string> transition_variables(const Transition& t);

}  // namespace csnet
