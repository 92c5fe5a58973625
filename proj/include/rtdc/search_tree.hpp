#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "rtdc/dtn.hpp"
#include "rtdc/dtnu.hpp"
#include "rtdc/propagation.hpp"

namespace rtdc {

enum class Truth : std::uint8_t { unknown, yes, no };

enum class NodeKind : std::uint8_t { dtnu, d_or, wait, w_or, and_ };

/// Payload of a DTNU node: O, P and S live in `memory`, B in `activated`,
/// C' in `constraints`.
struct DtnuState {
  TimeValue now;
  std::vector<std::optional<ExecutionRecord>> memory;  // indexed by TimepointRef::value
  ActivationSet activated;
  std::vector<Disjunct> constraints;
  bool violated = false;
  std::vector<bool> epoch_scheduled;  // controllables scheduled since the last wait
  std::size_t epoch = 0;

  bool executed(TimepointRef tp) const { return memory[tp.value].has_value(); }
  std::vector<bool> executed_mask() const;
};

DtnuState initial_state(const Dtnu& dtnu);

/// H (certain) and Z (possible) for one wait.
struct OutcomeSets {
  std::vector<TimepointRef> certain;
  std::vector<TimepointRef> possible;
  std::vector<Interval> certain_windows;   // hull of the wait span and the windows
  std::vector<Interval> possible_windows;
};

OutcomeSets classify_outcomes(const ActivationSet& activated, const TimeValue& t, const TimeValue& delta);

/// All combinations H u Y, Y a subset of Z, in subset order.
std::vector<std::vector<TimepointRef>> enumerate_outcomes(const ActivationSet& activated, const TimeValue& t,
                                                          const TimeValue& delta);

/// Subsets of {0..n-1}: empty first, then by size, ties lexicographic.
class SubsetOrder {
public:
  explicit SubsetOrder(std::size_t n) : n_(n) {}
  /// Next subset, or false when exhausted.
  bool next(std::vector<std::size_t>& out);
  static std::uint64_t count(std::size_t n) { return n >= 63 ? UINT64_MAX : (std::uint64_t{1} << n); }

private:
  std::size_t n_;
  std::vector<std::size_t> cur_;
  bool started_ = false;
};

/// Controllables that may react to an overlapping uncontrollable, each
/// paired with its first matching trigger.
ReactivePairs reactive_candidates(const Dtnu& dtnu, const DtnuState& state, const OutcomeSets& outcomes,
                                  const TimeValue& wait_end);

/// Every reactive wait strategy in subset order, empty first.
std::vector<ReactivePairs> enumerate_reactive(const Dtnu& dtnu, const DtnuState& state, const OutcomeSets& outcomes,
                                              const TimeValue& wait_end);

struct WaitPlan {
  TimeValue start;
  TimeValue delta;
  OutcomeSets outcomes;
  ReactivePairs candidates;
};

struct SearchNode {
  NodeKind kind = NodeKind::dtnu;
  Truth truth = Truth::unknown;
  SearchNode* parent = nullptr;
  std::vector<std::unique_ptr<SearchNode>> children;
  std::uint64_t total_children = 0;
  std::uint64_t true_count = 0;
  std::uint64_t false_count = 0;
  int dor_depth = 0;

  // dtnu
  std::unique_ptr<DtnuState> state;
  std::optional<TimepointRef> decision;   // controllable scheduled to reach this node
  std::vector<TimepointRef> occurred;     // outcome combination that led here
  std::optional<Assignment> witness;      // DTN leaf schedule

  // wait
  std::unique_ptr<WaitPlan> plan;

  // and
  ReactivePairs reactive;

  // lazy expansion cursor
  std::vector<std::size_t> order;
  std::size_t next_child = 0;
  std::unique_ptr<SubsetOrder> subsets;
};

/// Pushes a freshly decided truth towards the root.
void propagate_truth(SearchNode& node);

/// True when the node must not be developed because its parent is decided.
bool truth_check_skip(const SearchNode& node);

struct LeafInfo {
  std::optional<Assignment> witness;
  bool dtn_called = false;
};

/// Verdict for a freshly built DTNU node, or unknown when it is not a leaf.
/// A node is a leaf once no pending uncontrollable appears in an open
/// conjunct; remaining controllables are then scheduled by solve_dtn.
Truth leaf_check(const Dtnu& dtnu, const DtnuState& state, LeafInfo* info = nullptr, Deadline deadline = {});

}  // namespace rtdc
