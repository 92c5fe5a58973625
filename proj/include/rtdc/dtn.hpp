#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rtdc/dtnu.hpp"

namespace rtdc {

/// Disjunctive temporal network over controllables only.
struct DtnProblem {
  std::vector<TimepointRef> variables;
  std::vector<Disjunct> disjuncts;
};

using Assignment = std::vector<std::pair<TimepointRef, TimeValue>>;
using Deadline = std::optional<std::chrono::steady_clock::time_point>;

struct DeadlineExceeded : std::runtime_error {
  DeadlineExceeded() : std::runtime_error("deadline exceeded") {}
};

/// Adds `a >= now` for every variable.
DtnProblem make_dtn_problem(std::vector<TimepointRef> variables, std::vector<Disjunct> disjuncts,
                            const TimeValue& now);

/// First consistent conjunct choice found by backtracking, as earliest times
/// in variable order; nullopt when every choice is inconsistent.
/// Throws DeadlineExceeded once `deadline` has passed.
std::optional<Assignment> solve_dtn(const DtnProblem& p, Deadline deadline = {});

}  // namespace rtdc
