#include "csnet/net.hpp"

#include <algorithm>
#include <set>

#include "csnet/errors.hpp"

namespace csnet {

Multiset::Multiset(std::vector<ColorValue> values) : values_(std::move(values)) {
  std::sort(values_.begin(), values_.end());
}

void Multiset::add(ColorValue value) {
  auto it = std::upper_bound(values_.begin(), values_.end(), value);
  values_.insert(it, std::move(value));
}

bool Multiset::remove(const ColorValue& value) {
  auto it = std::lower_bound(values_.begin(), values_.end(), value);
  for (; it != values_.end() && !(value < *it); ++it) {
    if (*it == value) {
      values_.erase(it);
      return true;
    }
  }
  // Equal values can still order apart: enum symbols carry an optional
  // declaration index that ordering uses but equality ignores.
  it = std::find(values_.begin(), values_.end(), value);
  if (it == values_.end()) return false;
  values_.erase(it);
  return true;
}

std::size_t Multiset::count(const ColorValue& value) const {
  return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), value));
}

void Marking::add(const std::string& place, ColorValue value) {
  places_[place].add(std::move(value));
}

bool Marking::remove(const std::string& place, const ColorValue& value) {
  auto it = places_.find(place);
  if (it == places_.end()) return false;
  if (!it->second.remove(value)) return false;
  if (it->second.empty()) places_.erase(it);
  return true;
}

const Multiset& Marking::at(const std::string& place) const {
  static const Multiset empty;
  auto it = places_.find(place);
  return it == places_.end() ? empty : it->second;
}

std::size_t Marking::total_tokens() const {
  std::size_t n = 0;
  for (const auto& [_, ms] : places_) n += ms.size();
  return n;
}

void Marking::set(const std::string& place, Multiset tokens) {
  if (tokens.empty()) {
    places_.erase(place);
  } else {
    places_[place] = std::move(tokens);
  }
}

ArcPattern ArcPattern::variable(std::string name) {
  ArcPattern p;
  p.kind = Kind::Var;
  p.var = std::move(name);
  return p;
}

ArcPattern ArcPattern::literal(ColorValue value) {
  ArcPattern p;
  p.kind = Kind::Lit;
  p.lit = std::move(value);
  return p;
}

ArcPattern ArcPattern::tuple(std::vector<ArcPattern> elements) {
  ArcPattern p;
  p.kind = Kind::Tuple;
  p.elements = std::move(elements);
  return p;
}

ArcExpr ArcExpr::variable(std::string name) {
  ArcExpr e;
  e.kind = Kind::Var;
  e.var = std::move(name);
  return e;
}

ArcExpr ArcExpr::literal(ColorValue value) {
  ArcExpr e;
  e.kind = Kind::Lit;
  e.lit = std::move(value);
  return e;
}

ArcExpr ArcExpr::tuple(std::vector<ArcExpr> elements) {
  ArcExpr e;
  e.kind = Kind::Tuple;
  e.elements = std::move(elements);
  return e;
}

GuardOperand GuardOperand::variable(std::string name) {
  GuardOperand o;
  o.is_var = true;
  o.var = std::move(name);
  return o;
}

GuardOperand GuardOperand::literal(ColorValue value) {
  GuardOperand o;
  o.is_var = false;
  o.lit = std::move(value);
  return o;
}

GuardExpr GuardExpr::truth() { return GuardExpr{}; }

GuardExpr GuardExpr::cmp(CmpOp op, GuardOperand lhs, GuardOperand rhs) {
  GuardExpr g;
  g.kind = Kind::Cmp;
  g.op = op;
  g.lhs = std::move(lhs);
  g.rhs = std::move(rhs);
  return g;
}

GuardExpr GuardExpr::conj(std::vector<GuardExpr> children) {
  GuardExpr g;
  g.kind = Kind::And;
  g.children = std::move(children);
  return g;
}

GuardExpr GuardExpr::disj(std::vector<GuardExpr> children) {
  GuardExpr g;
  g.kind = Kind::Or;
  g.children = std::move(children);
  return g;
}

GuardExpr GuardExpr::negate(GuardExpr child) {
  GuardExpr g;
  g.kind = Kind::Not;
  g.children.push_back(std::move(child));
  return g;
}

const ColorSet& Net::colorset_of(const Place& place) const {
  auto it = colorsets.find(place.colorset);
  if (it == colorsets.end()) throw Error("place " + place.id + " references unknown colorset");
  return it->second;
}

std::vector<std::string> transition_variables(const Transition& t) {
  std::set<std::string> names;
  std::vector<const ArcPattern*> stack;
  for (const auto& arc : t.inputs) stack.push_back(&arc.pattern);
  while (!stack.empty()) {
    const ArcPattern* p = stack.back();
    stack.pop_back();
    switch (p->kind) {
      case ArcPattern::Kind::Var:
        names.insert(p->var);
        break;
      case ArcPattern::Kind::Lit:
        break;
      case ArcPattern::Kind::Tuple:
        for (const auto& e : p->elements) stack.push_back(&e);
        break;
    }
  }
  return {names.begin(), names.end()};
}

namespace {

// Where a variable may be bound: the set of colorset names of its input
// occurrences. Used to type output expressions and guards.
using VarTypes = std::map<std::string, std::set<std::string>>;

void check_pattern(const ArcPattern& pattern, const std::string& cs_name,
                   const ColorSetRegistry& registry, const std::string& tid, VarTypes& vars,
                   std::vector<Violation>& out) {
  auto cs = registry.find(cs_name);
  if (cs == registry.end()) return;  // reported as a colorset violation
  switch (pattern.kind) {
    case ArcPattern::Kind::Var:
      vars[pattern.var].insert(cs_name);
      return;
    case ArcPattern::Kind::Lit:
      if (!conforms(pattern.lit, cs->second, registry)) {
        out.push_back({"PATTERN_TYPE", tid + " literal " + pattern.lit.to_text() +
                                           " does not conform to " + cs_name});
      }
      return;
    case ArcPattern::Kind::Tuple: {
      if (cs->second.kind != ColorSet::Kind::Product ||
          cs->second.components.size() != pattern.elements.size()) {
        out.push_back({"PATTERN_TYPE", tid + " tuple pattern does not match shape of " + cs_name});
        return;
      }
      for (std::size_t i = 0; i < pattern.elements.size(); ++i) {
        check_pattern(pattern.elements[i], cs->second.components[i], registry, tid, vars, out);
      }
      return;
    }
  }
}

void check_expr(const ArcExpr& expr, const std::string& cs_name, const ColorSetRegistry& registry,
                const std::string& tid, const VarTypes& vars, std::vector<Violation>& out) {
  auto cs = registry.find(cs_name);
  if (cs == registry.end()) return;
  switch (expr.kind) {
    case ArcExpr::Kind::Var: {
      auto it = vars.find(expr.var);
      if (it == vars.end()) {
        out.push_back({"UNBOUND_VARIABLE", tid + " output uses unbound variable " + expr.var});
        return;
      }
      // Values flow between identically named colorsets only; this keeps
      // runtime conformance a static guarantee.
      if (!it->second.count(cs_name)) {
        out.push_back({"EXPR_TYPE", tid + " variable " + expr.var + " is not bound at colorset " +
                                        cs_name});
      }
      return;
    }
    case ArcExpr::Kind::Lit:
      if (!conforms(expr.lit, cs->second, registry)) {
        out.push_back({"EXPR_TYPE", tid + " literal " + expr.lit.to_text() +
                                        " does not conform to " + cs_name});
      }
      return;
    case ArcExpr::Kind::Tuple: {
      if (cs->second.kind != ColorSet::Kind::Product ||
          cs->second.components.size() != expr.elements.size()) {
        out.push_back({"EXPR_TYPE", tid + " tuple expression does not match shape of " + cs_name});
        return;
      }
      for (std::size_t i = 0; i < expr.elements.size(); ++i) {
        check_expr(expr.elements[i], cs->second.components[i], registry, tid, vars, out);
      }
      return;
    }
  }
}

bool var_has_int_occurrence(const std::set<std::string>& types, const ColorSetRegistry& registry) {
  for (const auto& name : types) {
    auto it = registry.find(name);
    if (it != registry.end() && it->second.kind == ColorSet::Kind::IntRange) return true;
  }
  return false;
}

void check_guard(const GuardExpr& guard, const ColorSetRegistry& registry, const std::string& tid,
                 const VarTypes& vars, std::vector<Violation>& out) {
  switch (guard.kind) {
    case GuardExpr::Kind::True:
      return;
    case GuardExpr::Kind::Cmp: {
      bool integer_only = guard.op != GuardExpr::CmpOp::Eq && guard.op != GuardExpr::CmpOp::Ne;
      for (const GuardOperand* operand : {&guard.lhs, &guard.rhs}) {
        if (operand->is_var) {
          auto it = vars.find(operand->var);
          if (it == vars.end()) {
            out.push_back(
                {"UNBOUND_VARIABLE", tid + " guard uses unbound variable " + operand->var});
          } else if (integer_only && !var_has_int_occurrence(it->second, registry)) {
            out.push_back({"GUARD_TYPE", tid + " orders non-integer variable " + operand->var});
          }
        } else if (integer_only && operand->lit.kind() != ColorValue::Kind::Int) {
          out.push_back({"GUARD_TYPE", tid + " orders non-integer literal " +
                                           operand->lit.to_text()});
        }
      }
      return;
    }
    case GuardExpr::Kind::And:
    case GuardExpr::Kind::Or:
      if (guard.children.empty()) {
        out.push_back({"GUARD_TYPE", tid + " has an and/or guard without operands"});
      }
      for (const auto& child : guard.children) check_guard(child, registry, tid, vars, out);
      return;
    case GuardExpr::Kind::Not:
      if (guard.children.size() != 1) {
        out.push_back({"GUARD_TYPE", tid + " has a not guard without exactly one operand"});
        return;
      }
      check_guard(guard.children[0], registry, tid, vars, out);
      return;
  }
}

}  // namespace

std::vector<Violation> validate_net(const Net& net) {
  std::vector<Violation> out = validate_colorsets(net.colorsets);

  for (const auto& [pid, place] : net.places) {
    if (place.id != pid) {
      out.push_back({"PLACE_ID", pid + " registered under a different key"});
    }
    if (!net.colorsets.count(place.colorset)) {
      out.push_back({"PLACE_DANGLING_COLORSET", pid + " references unknown colorset " +
                                                    place.colorset});
    }
  }

  for (const auto& [tid, t] : net.transitions) {
    if (t.id != tid) {
      out.push_back({"TRANSITION_ID", tid + " registered under a different key"});
    }
    VarTypes vars;
    for (const auto& arc : t.inputs) {
      auto place = net.places.find(arc.place);
      if (place == net.places.end()) {
        out.push_back({"ARC_DANGLING_PLACE", tid + " input references unknown place " + arc.place});
        continue;
      }
      check_pattern(arc.pattern, place->second.colorset, net.colorsets, tid, vars, out);
    }
    for (const auto& arc : t.outputs) {
      auto place = net.places.find(arc.place);
      if (place == net.places.end()) {
        out.push_back(
            {"ARC_DANGLING_PLACE", tid + " output references unknown place " + arc.place});
        continue;
      }
      check_expr(arc.expr, place->second.colorset, net.colorsets, tid, vars, out);
    }
    check_guard(t.guard, net.colorsets, tid, vars, out);
  }

  for (const auto& [pid, tokens] : net.initial.places()) {
    auto place = net.places.find(pid);
    if (place == net.places.end()) {
      out.push_back({"MARKING_DANGLING_PLACE", "initial marking references unknown place " + pid});
      continue;
    }
    auto cs = net.colorsets.find(place->second.colorset);
    if (cs == net.colorsets.end()) continue;
    for (const auto& value : tokens.values()) {
      if (!conforms(value, cs->second, net.colorsets)) {
        out.push_back({"MARKING_TYPE", pid + " holds nonconforming token " + value.to_text()});
      }
    }
  }

  return out;
}

}  // namespace csnet
