#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rtdc/dtnu.hpp"
#include "rtdc/propagation.hpp"
#include "rtdc/search_tree.hpp"

namespace rtdc {

struct Occurrence {
  TimepointRef tp;
  Interval window;
  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

struct TimedDecision {
  TimepointRef tp;
  TimeValue time;
  friend bool operator==(const TimedDecision&, const TimedDecision&) = default;
};

struct StrategyWait {
  TimeValue end;
  ReactivePairs reactive;  // (uncontrollable, controllable run the instant it occurs)
  friend bool operator==(const StrategyWait&, const StrategyWait&) = default;
};

/// One step of a reactive strategy: what is assumed to have happened during
/// the previous wait, what to schedule now, then either a wait whose outcomes
/// are the children or a final schedule.
struct StrategyNode {
  TimeValue start;
  std::vector<Occurrence> assumed_occurred;
  std::vector<Occurrence> reactive_executed;
  std::vector<TimedDecision> schedule_now;
  std::optional<StrategyWait> wait;
  std::vector<StrategyNode> children;
  std::vector<TimedDecision> leaf_schedule;

  bool is_leaf() const { return !wait.has_value(); }
  std::size_t size() const;
  friend bool operator==(const StrategyNode&, const StrategyNode&) = default;
};

struct MalformedTree : std::logic_error {
  using std::logic_error::logic_error;
};

/// Strategy subtree of a solved search tree. Throws MalformedTree.
StrategyNode extract(const SearchNode& root);

struct VerifyConfig {
  bool endpoint_exhaustive = true;
  std::size_t random_samples = 1000;
  std::uint64_t seed = 0;
  std::size_t max_endpoint_combinations = std::size_t{1} << 16;
};

struct Violation {
  std::vector<std::size_t> path;  // child indices from the root
  std::vector<std::pair<TimepointRef, TimeValue>> times;
  std::optional<std::size_t> disjunct;  // index into the original constraints
  std::string message;
};

struct VerificationReport {
  bool structural_ok = true;
  std::vector<std::string> structural_issues;
  std::size_t samples_run = 0;
  bool endpoints_complete = true;
  std::uint64_t seed = 0;
  std::size_t violation_count = 0;
  std::vector<Violation> violations;  // the first few, for diagnostics

  bool valid() const { return structural_ok && violation_count == 0; }
};

VerificationReport verify(const StrategyNode& strategy, const Dtnu& dtnu, const VerifyConfig& cfg = {});

std::string render_text(const StrategyNode& strategy, const Dtnu& dtnu);

nlohmann::json strategy_to_json(const StrategyNode& strategy, const Dtnu& dtnu);
/// Throws std::invalid_argument on schema errors.
StrategyNode strategy_from_json(const nlohmann::json& j, const Dtnu& dtnu);

}  // namespace rtdc
