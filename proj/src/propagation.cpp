#include "rtdc/propagation.hpp"

#include <algorithm>
#include <optional>

namespace rtdc {

namespace {

void resolve(Conjunct& c, bool ok) { c.status = ok ? ConjunctStatus::satisfied : ConjunctStatus::violated; }

// Rewrites c into a unary conjunct on `v`, or false when the interval is empty.
void restrict_to(Conjunct& c, TimepointRef v, const TimeValue& lo, const TimeValue& hi) {
  auto iv = Interval::checked(lo, hi);
  if (!iv) {
    c.status = ConjunctStatus::violated;
    return;
  }
  c = Conjunct::unary(v, *iv);
  if (iv->lo().is_neg_inf() && iv->hi().is_pos_inf()) c.status = ConjunctStatus::satisfied;
}

// Drops satisfied disjuncts; reports whether one is violated.
bool settle(std::vector<Disjunct>& constraints) {
  std::erase_if(constraints, [](const Disjunct& d) { return d.satisfied(); });
  return any_violated(constraints);
}

std::optional<TimepointRef> reactive_group(TimepointRef tp, const ReactivePairs& reactive) {
  for (const auto& [u, phi] : reactive)
    if (u == tp || phi == tp) return u;
  return std::nullopt;
}

}  // namespace

bool any_violated(const std::vector<Disjunct>& constraints) {
  return std::any_of(constraints.begin(), constraints.end(), [](const Disjunct& d) { return d.violated(); });
}

bool apply_exact(std::vector<Disjunct>& constraints, TimepointRef tp, const TimeValue& t) {
  for (auto& d : constraints) {
    for (auto& c : d.conjuncts) {
      if (!c.is_open() || !c.mentions(tp)) continue;
      if (c.is_unary()) resolve(c, c.iv.contains(t));
      else if (c.vi == tp) restrict_to(c, c.v, t + c.iv.lo(), t + c.iv.hi());
      else restrict_to(c, c.vi, t - c.iv.hi(), t - c.iv.lo());
    }
  }
  return settle(constraints);
}

bool apply_bounded(std::vector<Disjunct>& constraints, TimepointRef tp, const Interval& window,
                   const ReactivePairs& reactive) {
  const auto group = reactive_group(tp, reactive);
  for (auto& d : constraints) {
    for (auto& c : d.conjuncts) {
      if (!c.is_open() || !c.mentions(tp)) continue;
      if (c.is_unary()) {
        resolve(c, window.subset_of(c.iv));
        continue;
      }
      const TimepointRef other = c.v == tp ? c.vi : c.v;
      if (group && reactive_group(other, reactive) == group) {
        resolve(c, c.iv.contains(0));
        continue;
      }
      if (c.vi == tp) restrict_to(c, c.v, window.hi() + c.iv.lo(), window.lo() + c.iv.hi());
      else restrict_to(c, c.vi, window.hi() - c.iv.hi(), window.lo() - c.iv.lo());
    }
  }
  return settle(constraints);
}

bool apply_expire(std::vector<Disjunct>& constraints, const TimeValue& now, const std::vector<bool>& executed) {
  for (auto& d : constraints) {
    for (auto& c : d.conjuncts) {
      if (!c.is_open() || !c.is_unary() || !(c.iv.hi() < now)) continue;
      if (c.v.value < executed.size() && executed[c.v.value]) continue;
      c.status = ConjunctStatus::violated;
    }
  }
  return settle(constraints);
}

PropagationStatus propagate_exact(std::vector<Disjunct> constraints, TimepointRef tp, const TimeValue& t) {
  const bool bad = apply_exact(constraints, tp, t);
  return {bad ? PropagationStatus::Verdict::violated : PropagationStatus::Verdict::open, std::move(constraints)};
}

PropagationStatus propagate_bounded(std::vector<Disjunct> constraints, TimepointRef tp, const Interval& window,
                                    const ReactivePairs& reactive) {
  const bool bad = apply_bounded(constraints, tp, window, reactive);
  return {bad ? PropagationStatus::Verdict::violated : PropagationStatus::Verdict::open, std::move(constraints)};
}

PropagationStatus expire_unary(std::vector<Disjunct> constraints, const TimeValue& now,
                               const std::vector<bool>& executed) {
  const bool bad = apply_expire(constraints, now, executed);
  return {bad ? PropagationStatus::Verdict::violated : PropagationStatus::Verdict::open, std::move(constraints)};
}

}  // namespace rtdc
