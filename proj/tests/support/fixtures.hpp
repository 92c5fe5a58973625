#pragma once

#include "rtdc/dtnu.hpp"
#include "rtdc/gen.hpp"

namespace fixtures {

using namespace rtdc;

inline Interval iv(TimeValue lo, TimeValue hi) { return {lo, hi}; }

// ({a}, {}, {a in [0,10]}, {})
inline Dtnu t0() {
  Dtnu d({"a"}, {});
  d.add_constraint({{Conjunct::unary(d.ref("a"), iv(0, 10))}});
  return d;
}

// perroquet with three maneuver pairs
inline Dtnu t1() { return make_perroquet(3); }

// ({a1,a2}, {u1}, {a2 - u1 in [1,1]}, {(a1,[1,2],u1)})
inline Dtnu t2() {
  Dtnu d({"a1", "a2"}, {"u1"});
  d.add_constraint({{Conjunct::binary(d.ref("a2"), d.ref("u1"), iv(1, 1))}});
  d.add_link({d.ref("a1"), {iv(1, 2)}, d.ref("u1")});
  return d;
}

// ({a1,a2}, {u1}, {u1 - a2 in [0,0]}, {(a1,[1,2],u1)})
inline Dtnu t3() {
  Dtnu d({"a1", "a2"}, {"u1"});
  d.add_constraint({{Conjunct::binary(d.ref("u1"), d.ref("a2"), iv(0, 0))}});
  d.add_link({d.ref("a1"), {iv(1, 2)}, d.ref("u1")});
  return d;
}

// v2 - v1 in [1,2], v3 - v2 in [3,5], v3 in [9,10]
inline Dtnu wait_chain() {
  Dtnu d({"v1", "v2", "v3"}, {});
  d.add_constraint({{Conjunct::binary(d.ref("v2"), d.ref("v1"), iv(1, 2))}});
  d.add_constraint({{Conjunct::binary(d.ref("v3"), d.ref("v2"), iv(3, 5))}});
  d.add_constraint({{Conjunct::unary(d.ref("v3"), iv(9, 10))}});
  return d;
}

// First timed decision along the strategy's leftmost path.
template <typename Node>
const Node* first_schedule_node(const Node& n) {
  if (!n.schedule_now.empty()) return &n;
  if (n.children.empty()) return nullptr;
  return first_schedule_node(n.children.front());
}

}  // namespace fixtures
