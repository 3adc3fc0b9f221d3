#include "csnet/netfile.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>

#include "csnet/digest.hpp"
#include "csnet/errors.hpp"
#include "json.hpp"

namespace csnet {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& what) { throw NetParseError(what, 0, 0); }

// ---------------------------------------------------------------------------
// Token value / pattern / guard text grammar.

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool symbol_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

struct TextCursor {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  char peek() const { return pos < text.size() ? text[pos] : '\0'; }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos;
    return true;
  }
  [[noreturn]] void fail_here(const std::string& what) const {
    fail(what + " at offset " + std::to_string(pos) + " in \"" + text + "\"");
  }
  std::string ident() {
    std::size_t start = pos;
    while (pos < text.size() && ident_char(text[pos])) ++pos;
    return text.substr(start, pos - start);
  }
};

// Patterns are the most general term shape; values and expressions are
// derived from them. A tuple whose elements are all literals collapses to a
// single literal, so equal tokens always parse to equal terms.
ArcPattern parse_term(TextCursor& cur) {
  cur.skip_ws();
  char c = cur.peek();
  if (c == '(') {
    ++cur.pos;
    cur.skip_ws();
    if (cur.eat(')')) return ArcPattern::literal(ColorValue::unit());
    std::vector<ArcPattern> elements;
    elements.push_back(parse_term(cur));
    cur.skip_ws();
    while (cur.eat(',')) {
      elements.push_back(parse_term(cur));
      cur.skip_ws();
    }
    if (!cur.eat(')')) cur.fail_here("expected ')' or ','");
    bool all_literal = std::all_of(elements.begin(), elements.end(), [](const ArcPattern& p) {
      return p.kind == ArcPattern::Kind::Lit;
    });
    if (all_literal) {
      std::vector<ColorValue> values;
      for (const ArcPattern& p : elements) values.push_back(p.lit);
      return ArcPattern::literal(ColorValue::tuple(std::move(values)));
    }
    return ArcPattern::tuple(std::move(elements));
  }
  if (c == '\'') {
    ++cur.pos;
    std::size_t start = cur.pos;
    while (cur.pos < cur.text.size() && symbol_char(cur.text[cur.pos])) ++cur.pos;
    if (cur.pos == start) cur.fail_here("expected symbol name after '");
    return ArcPattern::literal(ColorValue::sym(cur.text.substr(start, cur.pos - start)));
  }
  if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
    std::size_t start = cur.pos;
    if (c == '-') ++cur.pos;
    std::size_t digits = cur.pos;
    while (cur.pos < cur.text.size() && std::isdigit(static_cast<unsigned char>(cur.text[cur.pos])))
      ++cur.pos;
    if (cur.pos == digits) cur.fail_here("expected digits");
    return ArcPattern::literal(
        ColorValue::of_int(std::stoll(cur.text.substr(start, cur.pos - start))));
  }
  if (ident_start(c)) return ArcPattern::variable(cur.ident());
  cur.fail_here("expected a value, variable, or tuple");
}

ArcPattern parse_whole_term(const std::string& text) {
  TextCursor cur{text};
  ArcPattern term = parse_term(cur);
  cur.skip_ws();
  if (cur.pos != text.size()) cur.fail_here("trailing characters");
  return term;
}

ColorValue term_to_value(const ArcPattern& term, const std::string& text) {
  switch (term.kind) {
    case ArcPattern::Kind::Lit:
      return term.lit;
    case ArcPattern::Kind::Var:
      fail("expected a value, found variable '" + term.var + "' in \"" + text + "\"");
    case ArcPattern::Kind::Tuple:
      break;
  }
  std::vector<ColorValue> values;
  for (const ArcPattern& p : term.elements) values.push_back(term_to_value(p, text));
  return ColorValue::tuple(std::move(values));
}

ArcExpr term_to_expr(const ArcPattern& term) {
  switch (term.kind) {
    case ArcPattern::Kind::Var:
      return ArcExpr::variable(term.var);
    case ArcPattern::Kind::Lit:
      return ArcExpr::literal(term.lit);
    case ArcPattern::Kind::Tuple:
      break;
  }
  std::vector<ArcExpr> elements;
  for (const ArcPattern& p : term.elements) elements.push_back(term_to_expr(p));
  return ArcExpr::tuple(std::move(elements));
}

const std::pair<GuardExpr::CmpOp, const char*> kCmpOps[] = {
    {GuardExpr::CmpOp::Eq, "="},  {GuardExpr::CmpOp::Ne, "!="}, {GuardExpr::CmpOp::Lt, "<"},
    {GuardExpr::CmpOp::Le, "<="}, {GuardExpr::CmpOp::Gt, ">"},  {GuardExpr::CmpOp::Ge, ">="},
};

GuardOperand parse_operand(TextCursor& cur) {
  ArcPattern term = parse_term(cur);
  if (term.kind == ArcPattern::Kind::Var) return GuardOperand::variable(term.var);
  return GuardOperand::literal(term_to_value(term, cur.text));
}

GuardExpr parse_guard_node(TextCursor& cur) {
  cur.skip_ws();
  if (ident_start(cur.peek())) {
    std::string word = cur.ident();
    if (word == "true") return GuardExpr::truth();
    cur.fail_here("unknown guard atom '" + word + "'");
  }
  if (!cur.eat('(')) cur.fail_here("expected '(' or 'true'");
  cur.skip_ws();
  std::size_t start = cur.pos;
  while (cur.pos < cur.text.size() &&
         !std::isspace(static_cast<unsigned char>(cur.text[cur.pos])) && cur.text[cur.pos] != '(' &&
         cur.text[cur.pos] != ')') {
    ++cur.pos;
  }
  std::string op = cur.text.substr(start, cur.pos - start);
  if (op.empty()) cur.fail_here("expected an operator");

  for (const auto& [cmp, name] : kCmpOps) {
    if (op != name) continue;
    GuardOperand lhs = parse_operand(cur);
    GuardOperand rhs = parse_operand(cur);
    cur.skip_ws();
    if (!cur.eat(')')) cur.fail_here("expected ')'");
    return GuardExpr::cmp(cmp, std::move(lhs), std::move(rhs));
  }
  if (op == "and" || op == "or") {
    std::vector<GuardExpr> children;
    for (;;) {
      cur.skip_ws();
      if (cur.eat(')')) break;
      if (cur.peek() == '\0') cur.fail_here("unterminated guard");
      children.push_back(parse_guard_node(cur));
    }
    if (children.empty()) cur.fail_here("'" + op + "' needs at least one operand");
    return op == "and" ? GuardExpr::conj(std::move(children))
                       : GuardExpr::disj(std::move(children));
  }
  if (op == "not") {
    GuardExpr child = parse_guard_node(cur);
    cur.skip_ws();
    if (!cur.eat(')')) cur.fail_here("'not' takes exactly one operand");
    return GuardExpr::negate(std::move(child));
  }
  cur.fail_here("unknown guard operator '" + op + "'");
}

std::string operand_to_text(const GuardOperand& operand) {
  return operand.is_var ? operand.var : operand.lit.to_text();
}

// ---------------------------------------------------------------------------
// JSON helpers.

void check_fields(const Json& obj, const std::string& context,
                  std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(context + " must be an object");
  for (const auto& item : obj.items()) {
    bool known = std::any_of(allowed.begin(), allowed.end(),
                             [&](const char* name) { return item.key() == name; });
    if (!known) fail("unknown field '" + item.key() + "' in " + context);
  }
}

const Json& require(const Json& obj, const std::string& context, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(context + " is missing field '" + key + "'");
  return *it;
}

std::string require_string(const Json& obj, const std::string& context, const char* key) {
  const Json& value = require(obj, context, key);
  if (!value.is_string()) fail("field '" + std::string(key) + "' in " + context + " must be a string");
  return value.get<std::string>();
}

std::int64_t as_int(const Json& value, const std::string& what) {
  if (!value.is_number_integer()) fail(what + " must be an integer");
  return value.get<std::int64_t>();
}

std::int64_t require_int(const Json& obj, const std::string& context, const char* key) {
  return as_int(require(obj, context, key), "field '" + std::string(key) + "' in " + context);
}

const Json* find(const Json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

bool parse_st(const Json& value, const std::string& context) {
  if (value.is_string()) {
    std::string text = value.get<std::string>();
    if (text == "on") return true;
    if (text == "off") return false;
  }
  fail("field 'st' in " + context + " must be \"on\" or \"off\"");
}

std::pair<int, int> parse_cell(const Json& value, const std::string& context) {
  if (!value.is_array() || value.size() != 2) fail("'cell' in " + context + " must be [x, y]");
  return {static_cast<int>(as_int(value[0], "cell x in " + context)),
          static_cast<int>(as_int(value[1], "cell y in " + context))};
}

// ---------------------------------------------------------------------------
// Section parsers.

void parse_colorsets(const Json& section, ColorSetRegistry& registry) {
  if (!section.is_array()) fail("'colorsets' must be an array");
  for (const Json& entry : section) {
    std::string context = "colorset";
    std::string name = require_string(entry, context, "name");
    context = "colorset '" + name + "'";
    std::string kind = require_string(entry, context, "kind");
    ColorSet cs;
    if (kind == "unit") {
      check_fields(entry, context, {"name", "kind"});
      cs = ColorSet::unit(name);
    } else if (kind == "int-range") {
      check_fields(entry, context, {"name", "kind", "min", "max"});
      cs = ColorSet::int_range(name, require_int(entry, context, "min"),
                               require_int(entry, context, "max"));
    } else if (kind == "enum") {
      check_fields(entry, context, {"name", "kind", "symbols"});
      const Json& symbols = require(entry, context, "symbols");
      if (!symbols.is_array()) fail("'symbols' in " + context + " must be an array");
      std::vector<std::string> names;
      for (const Json& s : symbols) {
        if (!s.is_string()) fail("'symbols' in " + context + " must contain strings");
        names.push_back(s.get<std::string>());
      }
      cs = ColorSet::enumeration(name, std::move(names));
    } else if (kind == "product") {
      check_fields(entry, context, {"name", "kind", "components"});
      const Json& components = require(entry, context, "components");
      if (!components.is_array()) fail("'components' in " + context + " must be an array");
      std::vector<std::string> names;
      for (const Json& s : components) {
        if (!s.is_string()) fail("'components' in " + context + " must contain strings");
        names.push_back(s.get<std::string>());
      }
      cs = ColorSet::product(name, std::move(names));
    } else {
      fail("unknown colorset kind '" + kind + "' in " + context);
    }
    if (!registry.emplace(name, std::move(cs)).second) fail("duplicate colorset '" + name + "'");
  }
}

void parse_places(const Json& section, CommSpaceNet& csnet) {
  if (!section.is_array()) fail("'places' must be an array");
  for (const Json& entry : section) {
    std::string id = require_string(entry, "place", "id");
    std::string context = "place '" + id + "'";
    check_fields(entry, context, {"id", "name", "colorset", "space"});
    Place place;
    place.id = id;
    place.name = entry.contains("name") ? require_string(entry, context, "name") : id;
    place.colorset = require_string(entry, context, "colorset");
    if (!csnet.net.places.emplace(id, std::move(place)).second) {
      fail("duplicate place '" + id + "'");
    }
    if (const Json* space = find(entry, "space")) {
      if (!space->is_string()) fail("'space' in " + context + " must be a string");
      auto kind = parse_space(space->get<std::string>());
      if (!kind) fail("unknown space '" + space->get<std::string>() + "' in " + context);
      csnet.spaces.places.emplace(id, *kind);
    }
  }
}

void parse_transitions(const Json& section, CommSpaceNet& csnet) {
  if (!section.is_array()) fail("'transitions' must be an array");
  for (const Json& entry : section) {
    std::string id = require_string(entry, "transition", "id");
    std::string context = "transition '" + id + "'";
    check_fields(entry, context, {"id", "name", "space", "inputs", "outputs", "guard"});
    Transition t;
    t.id = id;
    t.name = entry.contains("name") ? require_string(entry, context, "name") : id;
    if (const Json* inputs = find(entry, "inputs")) {
      if (!inputs->is_array()) fail("'inputs' in " + context + " must be an array");
      for (const Json& arc : *inputs) {
        check_fields(arc, "input arc of " + context, {"place", "pattern"});
        InputArc in;
        in.place = require_string(arc, "input arc of " + context, "place");
        in.pattern = parse_pattern_text(require_string(arc, "input arc of " + context, "pattern"));
        t.inputs.push_back(std::move(in));
      }
    }
    if (const Json* outputs = find(entry, "outputs")) {
      if (!outputs->is_array()) fail("'outputs' in " + context + " must be an array");
      for (const Json& arc : *outputs) {
        check_fields(arc, "output arc of " + context, {"place", "expr"});
        OutputArc out;
        out.place = require_string(arc, "output arc of " + context, "place");
        out.expr = parse_expr_text(require_string(arc, "output arc of " + context, "expr"));
        t.outputs.push_back(std::move(out));
      }
    }
    if (entry.contains("guard")) {
      t.guard = parse_guard_text(require_string(entry, context, "guard"));
    }
    if (const Json* space = find(entry, "space")) {
      if (!space->is_string()) fail("'space' in " + context + " must be a string");
      auto kind = parse_space(space->get<std::string>());
      if (!kind) fail("unknown space '" + space->get<std::string>() + "' in " + context);
      csnet.spaces.transitions.emplace(id, *kind);
    }
    if (!csnet.net.transitions.emplace(id, std::move(t)).second) {
      fail("duplicate transition '" + id + "'");
    }
  }
}

void parse_initial_marking(const Json& section, Net& net) {
  if (!section.is_object()) fail("'initial_marking' must map place ids to token arrays");
  for (const auto& item : section.items()) {
    if (!item.value().is_array()) {
      fail("tokens of place '" + item.key() + "' must be an array");
    }
    const ColorSet* cs = nullptr;
    auto place = net.places.find(item.key());
    if (place != net.places.end()) {
      auto found = net.colorsets.find(place->second.colorset);
      if (found != net.colorsets.end()) cs = &found->second;
    }
    for (const Json& token : item.value()) {
      if (!token.is_string()) fail("tokens of place '" + item.key() + "' must be strings");
      ColorValue value = parse_value_text(token.get<std::string>());
      // Resolve enum indices now so marking order is canonical from the
      // start; nonconforming values stay raw for validate_net to flag.
      if (cs) {
        if (auto canon = canonicalize(value, *cs, net.colorsets)) value = *canon;
      }
      net.initial.add(item.key(), std::move(value));
    }
  }
}

void parse_groups(const Json& section, NetDocument& doc) {
  if (!section.is_array()) fail("'groups' must be an array");
  std::set<std::string> group_ids;
  for (const Json& entry : section) {
    std::string id = require_string(entry, "group", "id");
    std::string context = "group '" + id + "'";
    check_fields(entry, context, {"id", "topic", "st", "members"});
    if (!group_ids.insert(id).second) fail("duplicate group '" + id + "'");

    GroupAgent group;
    group.id = id;
    group.topic = require_string(entry, context, "topic");
    if (const Json* st = find(entry, "st")) group.on = parse_st(*st, context);

    if (const Json* members = find(entry, "members")) {
      if (!members->is_array()) fail("'members' in " + context + " must be an array");
      for (const Json& member : *members) {
        std::string agent_id = require_string(member, "member of " + context, "id");
        std::string mcontext = "member '" + agent_id + "' of " + context;
        check_fields(member, mcontext, {"id", "st", "topics"});
        AgentRef agent;
        agent.id = agent_id;
        if (const Json* st = find(member, "st")) agent.on = parse_st(*st, mcontext);
        const Json& topics = require(member, mcontext, "topics");
        if (!topics.is_array()) fail("'topics' in " + mcontext + " must be an array");
        for (const Json& topic : topics) {
          if (!topic.is_string()) fail("'topics' in " + mcontext + " must contain strings");
          agent.topics.insert(topic.get<std::string>());
        }

        auto existing = doc.agents.find(agent_id);
        if (existing == doc.agents.end()) {
          doc.agents.emplace(agent_id, agent);
        } else if (existing->second.on != agent.on || existing->second.topics != agent.topics) {
          fail("agent '" + agent_id + "' is declared twice with conflicting st or topics");
        }
        try {
          register_agent(group, doc.agents.at(agent_id));
        } catch (const AlreadyMemberError&) {
          fail("agent '" + agent_id + "' is listed twice in " + context);
        }
      }
    }
    doc.groups.push_back(std::move(group));
  }
}

void parse_swarm_section(const Json& section, NetDocument& doc) {
  std::string context = "swarm scenario";
  check_fields(section, context,
               {"kind", "grid", "drones", "tasks", "obstacles", "human_policy", "seed",
                "mode_schedule"});
  SwarmConfig config;
  if (const Json* grid = find(section, "grid")) {
    check_fields(*grid, "'grid'", {"width", "height"});
    config.width = static_cast<int>(require_int(*grid, "'grid'", "width"));
    config.height = static_cast<int>(require_int(*grid, "'grid'", "height"));
  }
  if (section.contains("drones")) {
    config.drones = static_cast<int>(require_int(section, context, "drones"));
  }
  if (const Json* tasks = find(section, "tasks")) {
    if (!tasks->is_array()) fail("'tasks' must be an array");
    for (const Json& entry : *tasks) {
      check_fields(entry, "task", {"id", "cell"});
      TaskSpec task;
      task.id = static_cast<int>(require_int(entry, "task", "id"));
      std::tie(task.x, task.y) = parse_cell(require(entry, "task", "cell"), "task");
      config.tasks.push_back(task);
    }
  }
  if (const Json* obstacles = find(section, "obstacles")) {
    if (!obstacles->is_array()) fail("'obstacles' must be an array");
    for (const Json& entry : *obstacles) {
      check_fields(entry, "obstacle", {"step", "cell"});
      ObstacleSpec obstacle;
      std::int64_t step = require_int(entry, "obstacle", "step");
      if (step < 0) fail("obstacle 'step' must be nonnegative");
      obstacle.step = static_cast<std::size_t>(step);
      std::tie(obstacle.x, obstacle.y) = parse_cell(require(entry, "obstacle", "cell"), "obstacle");
      config.obstacles.push_back(obstacle);
    }
  }
  if (const Json* policy = find(section, "human_policy")) {
    if (policy->is_string()) {
      auto kind = parse_human_policy(policy->get<std::string>());
      if (!kind || *kind == HumanPolicyKind::Script) {
        fail("unknown human policy '" + policy->get<std::string>() + "'");
      }
      config.human_policy.kind = *kind;
    } else if (policy->is_object()) {
      check_fields(*policy, "'human_policy'", {"script"});
      const Json& script = require(*policy, "'human_policy'", "script");
      if (!script.is_array()) fail("'script' must be an array of booleans");
      config.human_policy.kind = HumanPolicyKind::Script;
      for (const Json& decision : script) {
        if (!decision.is_boolean()) fail("'script' must be an array of booleans");
        config.human_policy.script.push_back(decision.get<bool>());
      }
    } else {
      fail("'human_policy' must be a string or a script object");
    }
  }
  if (const Json* seed = find(section, "seed")) {
    if (!seed->is_number_integer() || as_int(*seed, "'seed'") < 0) {
      fail("'seed' must be a nonnegative integer");
    }
    config.seed = seed->get<std::uint64_t>();
  }
  if (const Json* schedule = find(section, "mode_schedule")) {
    if (!schedule->is_array()) fail("'mode_schedule' must be an array");
    for (const Json& entry : *schedule) {
      check_fields(entry, "mode phase", {"from", "to", "mode"});
      ModePhase phase;
      std::int64_t from = require_int(entry, "mode phase", "from");
      std::int64_t to = require_int(entry, "mode phase", "to");
      if (from < 0 || to < 0) fail("mode phase bounds must be nonnegative");
      phase.from = static_cast<std::size_t>(from);
      phase.to = static_cast<std::size_t>(to);
      std::string mode = require_string(entry, "mode phase", "mode");
      auto parsed = parse_coupling(mode);
      if (!parsed) fail("unknown coupling mode '" + mode + "'");
      phase.mode = *parsed;
      config.mode_schedule.push_back(phase);
    }
  }
  doc.swarm = std::move(config);
}

void parse_lam_section(const Json& section, NetDocument& doc) {
  std::string context = "lam scenario";
  check_fields(section, context, {"kind", "alphabet", "demonstrations", "repetitions"});
  LamConfig config;
  const Json& alphabet = require(section, context, "alphabet");
  if (!alphabet.is_array()) fail("'alphabet' must be an array");
  std::vector<std::string> symbols;
  for (const Json& s : alphabet) {
    if (!s.is_string()) fail("'alphabet' must contain strings");
    symbols.push_back(s.get<std::string>());
  }
  config.action_alphabet = ColorSet::enumeration("action", std::move(symbols));
  const Json& demos = require(section, context, "demonstrations");
  if (!demos.is_array()) fail("'demonstrations' must be an array of sequences");
  for (const Json& sequence : demos) {
    if (!sequence.is_array()) fail("'demonstrations' must be an array of sequences");
    std::vector<std::string> actions;
    for (const Json& action : sequence) {
      if (!action.is_string()) fail("demonstration sequences must contain strings");
      actions.push_back(action.get<std::string>());
    }
    config.demonstrations.push_back(std::move(actions));
  }
  if (section.contains("repetitions")) {
    config.repetitions = static_cast<int>(require_int(section, context, "repetitions"));
  }
  doc.lam = std::move(config);
}

// ---------------------------------------------------------------------------
// Serialization.

Json colorset_to_json(const ColorSet& cs) {
  Json out;
  out["name"] = cs.name;
  switch (cs.kind) {
    case ColorSet::Kind::Unit:
      out["kind"] = "unit";
      break;
    case ColorSet::Kind::IntRange:
      out["kind"] = "int-range";
      out["min"] = cs.lo;
      out["max"] = cs.hi;
      break;
    case ColorSet::Kind::Enum:
      out["kind"] = "enum";
      out["symbols"] = cs.symbols;
      break;
    case ColorSet::Kind::Product:
      out["kind"] = "product";
      out["components"] = cs.components;
      break;
  }
  return out;
}

Json swarm_to_json(const SwarmConfig& config) {
  Json out;
  out["kind"] = "swarm";
  out["grid"] = Json{{"width", config.width}, {"height", config.height}};
  out["drones"] = config.drones;
  if (!config.tasks.empty()) {
    Json tasks = Json::array();
    for (const TaskSpec& task : config.tasks) {
      tasks.push_back(Json{{"id", task.id}, {"cell", Json::array({task.x, task.y})}});
    }
    out["tasks"] = std::move(tasks);
  }
  if (!config.obstacles.empty()) {
    Json obstacles = Json::array();
    for (const ObstacleSpec& obstacle : config.obstacles) {
      obstacles.push_back(
          Json{{"step", obstacle.step}, {"cell", Json::array({obstacle.x, obstacle.y})}});
    }
    out["obstacles"] = std::move(obstacles);
  }
  if (config.human_policy.kind == HumanPolicyKind::Script) {
    Json script = Json::array();
    for (bool decision : config.human_policy.script) script.push_back(decision);
    out["human_policy"] = Json{{"script", std::move(script)}};
  } else {
    out["human_policy"] = to_string(config.human_policy.kind);
  }
  out["seed"] = config.seed;
  if (!config.mode_schedule.empty()) {
    Json schedule = Json::array();
    for (const ModePhase& phase : config.mode_schedule) {
      schedule.push_back(
          Json{{"from", phase.from}, {"to", phase.to}, {"mode", to_string(phase.mode)}});
    }
    out["mode_schedule"] = std::move(schedule);
  }
  return out;
}

Json lam_to_json(const LamConfig& config) {
  Json out;
  out["kind"] = "lam";
  out["alphabet"] = config.action_alphabet.symbols;
  out["demonstrations"] = config.demonstrations;
  out["repetitions"] = config.repetitions;
  return out;
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  std::size_t limit = std::min(byte > 0 ? byte - 1 : 0, text.size());
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < limit; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

bool is_hex_digest(const std::string& text) {
  return text.size() == 64 && std::all_of(text.begin(), text.end(), [](char c) {
           return std::isdigit(static_cast<unsigned char>(c)) || (c >= 'a' && c <= 'f');
         });
}

}  // namespace

ColorValue parse_value_text(const std::string& text) {
  return term_to_value(parse_whole_term(text), text);
}

ArcPattern parse_pattern_text(const std::string& text) { return parse_whole_term(text); }

std::string pattern_to_text(const ArcPattern& pattern) {
  switch (pattern.kind) {
    case ArcPattern::Kind::Var:
      return pattern.var;
    case ArcPattern::Kind::Lit:
      return pattern.lit.to_text();
    case ArcPattern::Kind::Tuple:
      break;
  }
  std::string out = "(";
  for (std::size_t i = 0; i < pattern.elements.size(); ++i) {
    if (i > 0) out += ", ";
    out += pattern_to_text(pattern.elements[i]);
  }
  return out + ")";
}

ArcExpr parse_expr_text(const std::string& text) { return term_to_expr(parse_whole_term(text)); }

std::string expr_to_text(const ArcExpr& expr) {
  switch (expr.kind) {
    case ArcExpr::Kind::Var:
      return expr.var;
    case ArcExpr::Kind::Lit:
      return expr.lit.to_text();
    case ArcExpr::Kind::Tuple:
      break;
  }
  std::string out = "(";
  for (std::size_t i = 0; i < expr.elements.size(); ++i) {
    if (i > 0) out += ", ";
    out += expr_to_text(expr.elements[i]);
  }
  return out + ")";
}

GuardExpr parse_guard_text(const std::string& text) {
  TextCursor cur{text};
  GuardExpr guard = parse_guard_node(cur);
  cur.skip_ws();
  if (cur.pos != text.size()) cur.fail_here("trailing characters");
  return guard;
}

std::string guard_to_text(const GuardExpr& guard) {
  switch (guard.kind) {
    case GuardExpr::Kind::True:
      return "true";
    case GuardExpr::Kind::Cmp: {
      const char* op = "=";
      for (const auto& [cmp, name] : kCmpOps) {
        if (cmp == guard.op) op = name;
      }
      return std::string("(") + op + " " + operand_to_text(guard.lhs) + " " +
             operand_to_text(guard.rhs) + ")";
    }
    case GuardExpr::Kind::And:
    case GuardExpr::Kind::Or:
    case GuardExpr::Kind::Not:
      break;
  }
  std::string out = "(";
  out += guard.kind == GuardExpr::Kind::And  ? "and"
         : guard.kind == GuardExpr::Kind::Or ? "or"
                                             : "not";
  for (const GuardExpr& child : guard.children) out += " " + guard_to_text(child);
  return out + ")";
}

NetDocument parse_net_file(const std::string& json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_col(json_text, e.byte);
    throw NetParseError(e.what(), line, col);
  }
  check_fields(root, "document",
               {"version", "colorsets", "places", "transitions", "initial_marking", "groups",
                "scenario"});
  std::string version = require_string(root, "document", "version");
  if (version != "csnet-1") fail("unsupported version '" + version + "'");

  NetDocument doc;
  if (const Json* section = find(root, "colorsets")) {
    parse_colorsets(*section, doc.csnet.net.colorsets);
  }
  if (const Json* section = find(root, "places")) parse_places(*section, doc.csnet);
  if (const Json* section = find(root, "transitions")) parse_transitions(*section, doc.csnet);
  if (const Json* section = find(root, "initial_marking")) {
    parse_initial_marking(*section, doc.csnet.net);
  }
  if (const Json* section = find(root, "groups")) parse_groups(*section, doc);
  if (const Json* section = find(root, "scenario")) {
    std::string kind = require_string(*section, "scenario", "kind");
    if (kind == "swarm") {
      parse_swarm_section(*section, doc);
    } else if (kind == "lam") {
      parse_lam_section(*section, doc);
    } else {
      fail("unknown scenario kind '" + kind + "'");
    }
  }
  return doc;
}

std::string serialize_net_file(const NetDocument& doc) {
  const Net& net = doc.csnet.net;
  Json out;
  out["version"] = "csnet-1";

  if (!net.colorsets.empty()) {
    Json section = Json::array();
    for (const auto& [name, cs] : net.colorsets) section.push_back(colorset_to_json(cs));
    out["colorsets"] = std::move(section);
  }
  if (!net.places.empty()) {
    Json section = Json::array();
    for (const auto& [id, place] : net.places) {
      Json entry;
      entry["id"] = id;
      entry["name"] = place.name;
      entry["colorset"] = place.colorset;
      auto space = doc.csnet.spaces.places.find(id);
      if (space != doc.csnet.spaces.places.end()) entry["space"] = to_string(space->second);
      section.push_back(std::move(entry));
    }
    out["places"] = std::move(section);
  }
  if (!net.transitions.empty()) {
    Json section = Json::array();
    for (const auto& [id, t] : net.transitions) {
      Json entry;
      entry["id"] = id;
      entry["name"] = t.name;
      auto space = doc.csnet.spaces.transitions.find(id);
      if (space != doc.csnet.spaces.transitions.end()) entry["space"] = to_string(space->second);
      if (!t.inputs.empty()) {
        Json arcs = Json::array();
        for (const InputArc& arc : t.inputs) {
          arcs.push_back(Json{{"place", arc.place}, {"pattern", pattern_to_text(arc.pattern)}});
        }
        entry["inputs"] = std::move(arcs);
      }
      if (!t.outputs.empty()) {
        Json arcs = Json::array();
        for (const OutputArc& arc : t.outputs) {
          arcs.push_back(Json{{"place", arc.place}, {"expr", expr_to_text(arc.expr)}});
        }
        entry["outputs"] = std::move(arcs);
      }
      if (t.guard.kind != GuardExpr::Kind::True) entry["guard"] = guard_to_text(t.guard);
      section.push_back(std::move(entry));
    }
    out["transitions"] = std::move(section);
  }
  if (!net.initial.places().empty()) {
    Json section;
    for (const auto& [place, tokens] : net.initial.places()) {
      Json values = Json::array();
      for (const ColorValue& value : tokens.values()) values.push_back(value.to_text());
      section[place] = std::move(values);
    }
    out["initial_marking"] = std::move(section);
  }
  if (!doc.groups.empty()) {
    std::vector<const GroupAgent*> groups;
    for (const GroupAgent& group : doc.groups) groups.push_back(&group);
    std::sort(groups.begin(), groups.end(),
              [](const GroupAgent* a, const GroupAgent* b) { return a->id < b->id; });
    Json section = Json::array();
    for (const GroupAgent* group : groups) {
      Json entry;
      entry["id"] = group->id;
      entry["topic"] = group->topic;
      entry["st"] = group->on ? "on" : "off";
      std::set<std::string> member_ids = group->cmp_active;
      member_ids.insert(group->cmp_nonactive.begin(), group->cmp_nonactive.end());
      Json members = Json::array();
      for (const std::string& id : member_ids) {
        Json member;
        member["id"] = id;
        auto agent = doc.agents.find(id);
        member["st"] = (agent == doc.agents.end() || agent->second.on) ? "on" : "off";
        Json topics = Json::array();
        if (agent != doc.agents.end()) {
          for (const std::string& topic : agent->second.topics) topics.push_back(topic);
        }
        member["topics"] = std::move(topics);
        members.push_back(std::move(member));
      }
      entry["members"] = std::move(members);
      section.push_back(std::move(entry));
    }
    out["groups"] = std::move(section);
  }
  if (doc.swarm) out["scenario"] = swarm_to_json(*doc.swarm);
  if (doc.lam) out["scenario"] = lam_to_json(*doc.lam);

  return out.dump(2) + "\n";
}

std::string net_digest(const NetDocument& doc) { return sha256_hex(serialize_net_file(doc)); }

std::string trace_to_jsonl(const Trace& trace, const std::string& net_digest) {
  std::ostringstream out;
  Json header;
  header["seed"] = trace.seed;
  header["policy"] = to_string(trace.policy);
  header["net_digest"] = net_digest;
  out << header.dump() << "\n";
  for (const TraceStep& step : trace.steps) {
    Json record;
    record["step"] = step.index;
    record["transition"] = step.transition;
    Json binding = Json::object();
    for (const auto& [name, value] : step.binding) binding[name] = value.to_text();
    record["binding"] = std::move(binding);
    record["marking_digest"] = step.marking_digest;
    out << record.dump() << "\n";
  }
  return out.str();
}

TraceFileData parse_trace_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  TraceFileData data;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json record;
    try {
      record = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw NetParseError(e.what(), lineno, static_cast<int>(e.byte));
    }
    if (!have_header) {
      check_fields(record, "trace header", {"seed", "policy", "net_digest"});
      data.seed = require(record, "trace header", "seed").get<std::uint64_t>();
      auto policy = parse_policy(require_string(record, "trace header", "policy"));
      if (!policy) fail("unknown policy in trace header");
      data.policy = *policy;
      data.net_digest = require_string(record, "trace header", "net_digest");
      have_header = true;
      continue;
    }
    check_fields(record, "trace record", {"step", "transition", "binding", "marking_digest"});
    TraceStep step;
    std::int64_t index = require_int(record, "trace record", "step");
    if (index != static_cast<std::int64_t>(data.steps.size())) {
      fail("trace steps are not contiguous at line " + std::to_string(lineno));
    }
    step.index = static_cast<std::size_t>(index);
    step.transition = require_string(record, "trace record", "transition");
    const Json& binding = require(record, "trace record", "binding");
    if (!binding.is_object()) fail("trace 'binding' must be an object");
    for (const auto& item : binding.items()) {
      if (!item.value().is_string()) fail("trace binding values must be strings");
      step.binding.emplace(item.key(), parse_value_text(item.value().get<std::string>()));
    }
    step.marking_digest = require_string(record, "trace record", "marking_digest");
    if (!is_hex_digest(step.marking_digest)) {
      fail("trace marking_digest must be lowercase hex at line " + std::to_string(lineno));
    }
    data.steps.push_back(std::move(step));
  }
  if (!have_header) fail("trace file has no header record");
  return data;
}

std::string report_to_json(const ScenarioReport& report) {
  Json out;
  out["steps"] = report.steps;
  out["terminal"] = to_string(report.trace.terminal);
  out["tasks_assigned"] = report.tasks_assigned;
  out["approvals_requested"] = report.approvals_requested;
  out["approvals_granted"] = report.approvals_granted;
  out["approvals_denied"] = report.approvals_denied;
  if (!report.prediction_accuracy.empty()) {
    out["prediction_accuracy"] = report.prediction_accuracy;
  }
  return out.dump(2) + "\n";
}

}  // namespace csnet
