#include "rtdc/search_tree.hpp"

#include <algorithm>

namespace rtdc {

std::vector<bool> DtnuState::executed_mask() const {
  std::vector<bool> out(memory.size());
  for (std::size_t i = 0; i < memory.size(); ++i) out[i] = memory[i].has_value();
  return out;
}

DtnuState initial_state(const Dtnu& dtnu) {
  DtnuState s;
  s.now = 0;
  s.memory.resize(dtnu.size());
  s.constraints = dtnu.constraints();
  s.epoch_scheduled.assign(dtnu.num_controllables(), false);
  std::erase_if(s.constraints, [](const Disjunct& d) { return d.satisfied(); });
  s.violated = apply_expire(s.constraints, s.now);
  return s;
}

OutcomeSets classify_outcomes(const ActivationSet& activated, const TimeValue& t, const TimeValue& delta) {
  OutcomeSets out;
  const TimeValue end = t + delta;
  for (const auto& [u, windows] : activated) {
    std::optional<Interval> hull;
    for (const auto& w : windows) {
      if (!(w.lo() < end || w.hi() == end) || w.hi() < t) continue;
      Interval part(max(w.lo(), t), min(w.hi(), end));
      hull = hull ? Interval(hull->lo(), part.hi()) : part;
    }
    if (!hull) continue;
    if (windows.back().hi() <= end) {
      out.certain.push_back(u);
      out.certain_windows.push_back(*hull);
    } else {
      out.possible.push_back(u);
      out.possible_windows.push_back(*hull);
    }
  }
  return out;
}

std::vector<std::vector<TimepointRef>> enumerate_outcomes(const ActivationSet& activated, const TimeValue& t,
                                                          const TimeValue& delta) {
  const auto sets = classify_outcomes(activated, t, delta);
  std::vector<std::vector<TimepointRef>> combos;
  SubsetOrder order(sets.possible.size());
  std::vector<std::size_t> pick;
  while (order.next(pick)) {
    auto combo = sets.certain;
    for (auto i : pick) combo.push_back(sets.possible[i]);
    std::sort(combo.begin(), combo.end());
    combos.push_back(std::move(combo));
  }
  return combos;
}

bool SubsetOrder::next(std::vector<std::size_t>& out) {
  if (!started_) {
    started_ = true;
    cur_.clear();
    out = cur_;
    return true;
  }
  // Advance to the next combination of the same size, else grow.
  const std::size_t k = cur_.size();
  std::size_t i = k;
  while (i > 0 && cur_[i - 1] == n_ - k + (i - 1)) --i;
  if (i == 0) {
    if (k == n_) return false;
    cur_.resize(k + 1);
    for (std::size_t j = 0; j <= k; ++j) cur_[j] = j;
  } else {
    ++cur_[i - 1];
    for (std::size_t j = i; j < k; ++j) cur_[j] = cur_[j - 1] + 1;
  }
  out = cur_;
  return true;
}

ReactivePairs reactive_candidates(const Dtnu& dtnu, const DtnuState& state, const OutcomeSets& outcomes,
                                  const TimeValue& wait_end) {
  std::vector<std::pair<TimepointRef, TimeValue>> triggers;  // u with earliest occurrence
  for (std::size_t i = 0; i < outcomes.certain.size(); ++i)
    triggers.emplace_back(outcomes.certain[i], outcomes.certain_windows[i].lo());
  for (std::size_t i = 0; i < outcomes.possible.size(); ++i)
    triggers.emplace_back(outcomes.possible[i], outcomes.possible_windows[i].lo());
  std::sort(triggers.begin(), triggers.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  ReactivePairs out;
  for (std::size_t a = 0; a < dtnu.num_controllables(); ++a) {
    const TimepointRef phi = dtnu.controllable(a);
    if (state.executed(phi)) continue;
    for (const auto& [u, earliest] : triggers) {
      bool justified = false;
      for (const auto& d : state.constraints) {
        for (const auto& c : d.conjuncts) {
          if (c.is_open() && !c.is_unary() && c.v == u && c.vi == phi && c.iv.lo() == TimeValue(0)) justified = true;
        }
      }
      if (!justified) continue;
      // Whatever phi activates must not be able to occur inside this wait.
      bool safe = true;
      for (const auto& link : dtnu.links())
        if (link.trigger == phi && earliest + link.intervals.front().lo() < wait_end) safe = false;
      if (!safe) continue;
      out.emplace_back(u, phi);
      break;
    }
  }
  return out;
}

std::vector<ReactivePairs> enumerate_reactive(const Dtnu& dtnu, const DtnuState& state, const OutcomeSets& outcomes,
                                              const TimeValue& wait_end) {
  const auto candidates = reactive_candidates(dtnu, state, outcomes, wait_end);
  std::vector<ReactivePairs> out;
  SubsetOrder order(candidates.size());
  std::vector<std::size_t> pick;
  while (order.next(pick)) {
    ReactivePairs r;
    for (auto i : pick) r.push_back(candidates[i]);
    out.push_back(std::move(r));
  }
  return out;
}

void propagate_truth(SearchNode& node) {
  SearchNode* child = &node;
  for (SearchNode* p = node.parent; p != nullptr; child = p, p = p->parent) {
    if (p->truth != Truth::unknown) return;
    const bool yes = child->truth == Truth::yes;
    if (yes) ++p->true_count;
    else ++p->false_count;
    switch (p->kind) {
      case NodeKind::dtnu:
      case NodeKind::wait:
        p->truth = child->truth;
        break;
      case NodeKind::d_or:
      case NodeKind::w_or:
        if (yes) p->truth = Truth::yes;
        else if (p->false_count == p->total_children) p->truth = Truth::no;
        else return;
        break;
      case NodeKind::and_:
        if (!yes) p->truth = Truth::no;
        else if (p->true_count == p->total_children) p->truth = Truth::yes;
        else return;
        break;
    }
  }
}

bool truth_check_skip(const SearchNode& node) { return node.parent != nullptr && node.parent->truth != Truth::unknown; }

Truth leaf_check(const Dtnu& dtnu, const DtnuState& state, LeafInfo* info, Deadline deadline) {
  if (state.violated) return Truth::no;
  for (const auto& d : state.constraints) {
    for (const auto& c : d.conjuncts) {
      if (!c.is_open()) continue;
      if (!dtnu.is_controllable(c.v) && !state.executed(c.v)) return Truth::unknown;
      if (!c.is_unary() && !dtnu.is_controllable(c.vi) && !state.executed(c.vi)) return Truth::unknown;
    }
  }
  std::vector<TimepointRef> remaining;
  for (std::size_t a = 0; a < dtnu.num_controllables(); ++a)
    if (!state.executed(dtnu.controllable(a))) remaining.push_back(dtnu.controllable(a));
  if (remaining.empty()) return state.constraints.empty() ? Truth::yes : Truth::no;
  if (info) info->dtn_called = true;
  auto found = solve_dtn(make_dtn_problem(std::move(remaining), state.constraints, state.now), deadline);
  if (!found) return Truth::no;
  if (info) info->witness = std::move(found);
  return Truth::yes;
}

}  // namespace rtdc
