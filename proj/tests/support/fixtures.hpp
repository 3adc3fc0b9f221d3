#pragma once

// Small hand-checked nets shared by the unit and acceptance suites.

#include <string>
#include <vector>

#include "csnet/net.hpp"

namespace csnet::testing {

// Two places, one transition, one unit token: P1 -> T -> P2.
inline Net handoff_net() {
  Net net;
  net.colorsets["unit"] = ColorSet::unit();
  net.places["P1"] = {"P1", "Source", "unit"};
  net.places["P2"] = {"P2", "Sink", "unit"};
  Transition t;
  t.id = "T";
  t.name = "Handoff";
  t.inputs.push_back({"P1", ArcPattern::literal(ColorValue::unit())});
  t.outputs.push_back({"P2", ArcExpr::literal(ColorValue::unit())});
  net.transitions["T"] = t;
  net.initial.add("P1", ColorValue::unit());
  return net;
}

// One place holding {1,2,3}, transition picks x with guard x < 3.
inline Net int_pick_net() {
  Net net;
  net.colorsets["num"] = ColorSet::int_range("num", 0, 9);
  net.places["P"] = {"P", "Pool", "num"};
  net.places["Q"] = {"Q", "Picked", "num"};
  Transition t;
  t.id = "T";
  t.name = "Pick";
  t.inputs.push_back({"P", ArcPattern::variable("x")});
  t.outputs.push_back({"Q", ArcExpr::variable("x")});
  t.guard = GuardExpr::cmp(GuardExpr::CmpOp::Lt, GuardOperand::variable("x"),
                           GuardOperand::literal(ColorValue::of_int(3)));
  net.transitions["T"] = t;
  net.initial.add("P", ColorValue::of_int(1));
  net.initial.add("P", ColorValue::of_int(2));
  net.initial.add("P", ColorValue::of_int(3));
  return net;
}

// T consumes and reproduces the same unit token forever.
inline Net self_loop_net() {
  Net net;
  net.colorsets["unit"] = ColorSet::unit();
  net.places["P"] = {"P", "Loop", "unit"};
  Transition t;
  t.id = "T";
  t.name = "Spin";
  t.inputs.push_back({"P", ArcPattern::literal(ColorValue::unit())});
  t.outputs.push_back({"P", ArcExpr::literal(ColorValue::unit())});
  net.transitions["T"] = t;
  net.initial.add("P", ColorValue::unit());
  return net;
}

// Bounded producer/consumer: `slots` starts with `capacity` unit tokens,
// produce moves slot -> buffer, consume moves buffer -> slot. Reachable
// markings are exactly buffer = 0..capacity.
inline Net producer_consumer_net(int capacity = 2) {
  Net net;
  net.colorsets["unit"] = ColorSet::unit();
  net.places["slots"] = {"slots", "Free Slots", "unit"};
  net.places["buffer"] = {"buffer", "Buffer", "unit"};
  Transition produce;
  produce.id = "produce";
  produce.name = "Produce";
  produce.inputs.push_back({"slots", ArcPattern::literal(ColorValue::unit())});
  produce.outputs.push_back({"buffer", ArcExpr::literal(ColorValue::unit())});
  Transition consume;
  consume.id = "consume";
  consume.name = "Consume";
  consume.inputs.push_back({"buffer", ArcPattern::literal(ColorValue::unit())});
  consume.outputs.push_back({"slots", ArcExpr::literal(ColorValue::unit())});
  net.transitions["produce"] = produce;
  net.transitions["consume"] = consume;
  for (int i = 0; i < capacity; ++i) net.initial.add("slots", ColorValue::unit());
  return net;
}

// Two transitions with disjoint places, both enabled initially.
inline Net two_independent_net() {
  Net net;
  net.colorsets["unit"] = ColorSet::unit();
  net.places["A1"] = {"A1", "A in", "unit"};
  net.places["A2"] = {"A2", "A out", "unit"};
  net.places["B1"] = {"B1", "B in", "unit"};
  net.places["B2"] = {"B2", "B out", "unit"};
  Transition ta;
  ta.id = "TA";
  ta.name = "Move A";
  ta.inputs.push_back({"A1", ArcPattern::literal(ColorValue::unit())});
  ta.outputs.push_back({"A2", ArcExpr::literal(ColorValue::unit())});
  Transition tb;
  tb.id = "TB";
  tb.name = "Move B";
  tb.inputs.push_back({"B1", ArcPattern::literal(ColorValue::unit())});
  tb.outputs.push_back({"B2", ArcExpr::literal(ColorValue::unit())});
  net.transitions["TA"] = ta;
  net.transitions["TB"] = tb;
  net.initial.add("A1", ColorValue::unit());
  net.initial.add("B1", ColorValue::unit());
  return net;
}

}  // namespace csnet::testing
