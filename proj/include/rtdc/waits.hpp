#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rtdc/dtnu.hpp"

namespace rtdc {

enum class WaitRule : std::uint8_t {
  activation = 1,      // bounds of activation windows
  unary_bound = 2,     // bounds of open unary conjuncts
  backward_chain = 4,  // unary bounds chained back through binary conjuncts
};

struct WaitDuration {
  TimeValue delta;
  std::uint8_t contributors = 0;  // WaitRule bits reaching the minimum

  bool from(WaitRule r) const { return (contributors & static_cast<std::uint8_t>(r)) != 0; }
};

struct NoPositiveCandidate : std::runtime_error {
  NoPositiveCandidate() : std::runtime_error("no positive wait duration candidate") {}
};

/// Some activated uncontrollable is pending, or some unary conjunct is open.
bool wait_eligible(const std::vector<Disjunct>& constraints, const ActivationSet& activated);

/// Throws NoPositiveCandidate when no rule proposes a duration > 0.
WaitDuration wait_duration(const TimeValue& t, const std::vector<Disjunct>& constraints,
                           const ActivationSet& activated);
std::optional<WaitDuration> try_wait_duration(const TimeValue& t, const std::vector<Disjunct>& constraints,
                                              const ActivationSet& activated);

/// Absolute candidate times reached by chaining `(tp, value)` backwards over
/// open binary conjuncts `tp - v' in [x', y']` with x' >= 0. Values at or
/// below `floor` are reported but not expanded further.
std::vector<TimeValue> backward_chain(TimepointRef tp, const TimeValue& value, const std::vector<Disjunct>& constraints,
                                      const TimeValue& floor = TimeValue::neg_infinity());

/// Upper bound on (timepoint, value) states one backward_chain call explores.
inline constexpr std::size_t kChainStateLimit = 20000;

}  // namespace rtdc
