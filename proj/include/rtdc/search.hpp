#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "rtdc/dtnu.hpp"
#include "rtdc/heuristic.hpp"
#include "rtdc/search_tree.hpp"
#include "rtdc/strategy.hpp"

namespace rtdc {

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SolveConfig {
  std::optional<std::chrono::duration<double>> timeout;
  HeuristicProvider* heuristic = nullptr;  // not owned
  int heuristic_max_dor_depth = 15;
  bool strict_heuristic = false;           // rethrow heuristic failures instead of falling back
  bool symmetry_pruning = true;
  std::optional<std::uint64_t> random_order_seed;  // shuffle d-OR children
  /// Restricts the root d-OR to one decision: controllable index, or
  /// num_controllables() for WAIT.
  std::optional<std::size_t> root_decision;
  bool retain_tree = false;  // keep refuted subtrees for inspection
};

struct SolveStats {
  std::uint64_t expanded = 0;
  std::uint64_t waits = 0;
  std::uint64_t dtn_calls = 0;
  std::uint64_t heuristic_calls = 0;
  std::uint64_t heuristic_failures = 0;
  double wall_seconds = 0.0;
};

struct Verdict {
  enum class Outcome : std::uint8_t { rtdc, not_rtdc, timeout };

  Outcome outcome = Outcome::timeout;
  std::optional<StrategyNode> strategy;
  SolveStats stats;
  std::shared_ptr<SearchNode> tree;  // set when retain_tree
};

const char* to_string(Verdict::Outcome o);

/// Depth-first AND-OR search. One instance explores one tree.
class Search {
public:
  /// Throws InvalidInput when the DTNU is malformed.
  Search(const Dtnu& dtnu, SolveConfig config = {});

  SearchNode& root() { return *root_; }

  /// Materializes every child of the node's d-OR, creating the d-OR if
  /// needed. Children are returned in visiting order.
  std::vector<SearchNode*> expand_dor(SearchNode& dtnu_node);

  Verdict run();

private:
  static constexpr std::size_t kWaitDecision = SIZE_MAX;

  void explore(SearchNode& n);
  void tick();
  SearchNode* next_child(SearchNode& n);
  SearchNode& attach(SearchNode& parent, std::unique_ptr<SearchNode> child);
  void ensure_dor(SearchNode& dtnu_node);
  std::vector<std::size_t> dor_order(const SearchNode& dtnu_node, int depth);
  std::unique_ptr<SearchNode> schedule_child(const SearchNode& src, TimepointRef a, int depth);
  std::unique_ptr<SearchNode> wait_child(const SearchNode& src, int depth);
  std::unique_ptr<SearchNode> and_child(const SearchNode& w_or, const std::vector<std::size_t>& pick);
  std::unique_ptr<SearchNode> outcome_child(const SearchNode& and_node, const std::vector<std::size_t>& pick);
  void settle_leaf(SearchNode& n);
  std::size_t new_epoch();

  const Dtnu& dtnu_;
  SolveConfig cfg_;
  std::unique_ptr<SearchNode> root_;
  std::vector<std::unordered_set<std::vector<bool>>> epochs_;
  SolveStats stats_;
  std::mt19937_64 rng_;
  Deadline deadline_;
  std::uint64_t ticks_ = 0;
  bool warned_ = false;
};

/// Returns RTdc with its strategy, NotRTdc, or Timeout.
Verdict solve(const Dtnu& dtnu, const SolveConfig& config = {});

}  // namespace rtdc
