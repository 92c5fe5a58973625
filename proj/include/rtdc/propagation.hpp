#pragma once

#include <span>
#include <utility>
#include <vector>

#include "rtdc/dtnu.hpp"

namespace rtdc {

/// Updated constraint list C' plus whether some disjunct became violated.
/// Satisfied disjuncts are dropped from `updated`.
struct PropagationStatus {
  enum class Verdict : std::uint8_t { open, violated };

  Verdict verdict = Verdict::open;
  std::vector<Disjunct> updated;

  bool violated() const { return verdict == Verdict::violated; }
};

/// (uncontrollable, controllable) pairs: the controllable executes at the
/// very instant the uncontrollable occurs.
using ReactivePairs = std::vector<std::pair<TimepointRef, TimepointRef>>;

PropagationStatus propagate_exact(std::vector<Disjunct> constraints, TimepointRef tp, const TimeValue& t);

/// `tp` executed somewhere inside `window`; every rewrite must hold for all
/// execution times in it. Conjuncts relating two timepoints that coincide
/// through `reactive` are decided exactly (difference 0).
PropagationStatus propagate_bounded(std::vector<Disjunct> constraints, TimepointRef tp, const Interval& window,
                                    const ReactivePairs& reactive = {});

/// Open unary conjuncts whose upper bound lies before `now` become false.
/// Timepoints flagged in `executed` are left alone.
PropagationStatus expire_unary(std::vector<Disjunct> constraints, const TimeValue& now,
                               const std::vector<bool>& executed = {});

// In-place forms used by the search. Each returns true when some disjunct is
// violated afterwards.
bool apply_exact(std::vector<Disjunct>& constraints, TimepointRef tp, const TimeValue& t);
bool apply_bounded(std::vector<Disjunct>& constraints, TimepointRef tp, const Interval& window,
                   const ReactivePairs& reactive = {});
bool apply_expire(std::vector<Disjunct>& constraints, const TimeValue& now, const std::vector<bool>& executed = {});

bool any_violated(const std::vector<Disjunct>& constraints);

}  // namespace rtdc
