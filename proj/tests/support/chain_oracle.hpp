#pragma once

// Plain recursion over backward chains, no memo; meant for acyclic inputs.

#include <set>
#include <vector>

#include "rtdc/dtnu.hpp"

namespace oracle {

inline void chain(rtdc::TimepointRef tp, const rtdc::TimeValue& value, const std::vector<rtdc::Disjunct>& cs,
                  const rtdc::TimeValue& floor, std::set<rtdc::TimeValue>& out, int depth = 0) {
  if (depth > 32 || value <= floor) return;
  for (const auto& d : cs)
    for (const auto& c : d.conjuncts) {
      if (!c.is_open() || c.is_unary() || c.v != tp || c.iv.lo() < rtdc::TimeValue(0)) continue;
      for (const auto& b : {c.iv.lo(), c.iv.hi()}) {
        if (!b.is_finite()) continue;
        const auto next = value - b;
        out.insert(next);
        chain(c.vi, next, cs, floor, out, depth + 1);
      }
    }
}

}  // namespace oracle
