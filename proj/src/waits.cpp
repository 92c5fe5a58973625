#include "rtdc/waits.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace rtdc {

namespace {

struct Best {
  std::optional<TimeValue> delta;
  std::uint8_t rules = 0;

  void offer(const TimeValue& candidate, WaitRule rule) {
    if (!candidate.is_finite() || candidate <= TimeValue(0)) return;
    const auto bit = static_cast<std::uint8_t>(rule);
    if (!delta || candidate < *delta) {
      delta = candidate;
      rules = bit;
    } else if (candidate == *delta) {
      rules |= bit;
    }
  }
};

struct ChainEdge {
  TimepointRef to;
  TimeValue lo;
  TimeValue hi;
};

using ChainGraph = std::unordered_map<TimepointRef, std::vector<ChainEdge>>;

ChainGraph chain_graph(const std::vector<Disjunct>& constraints) {
  ChainGraph g;
  for (const auto& d : constraints)
    for (const auto& c : d.conjuncts)
      if (c.is_open() && !c.is_unary() && c.iv.lo() >= TimeValue(0)) g[c.v].push_back({c.vi, c.iv.lo(), c.iv.hi()});
  return g;
}

// Depth-first expansion with a memo shared by every seed of one call.
class Chainer {
public:
  Chainer(const ChainGraph& g, TimeValue floor) : g_(g), floor_(std::move(floor)) {}

  template <typename Emit>
  void run(TimepointRef tp, const TimeValue& value, Emit&& emit) {
    if (!seen_.emplace(tp.value, value).second) return;
    std::vector<std::pair<TimepointRef, TimeValue>> stack{{tp, value}};
    while (!stack.empty()) {
      auto [v, val] = stack.back();
      stack.pop_back();
      if (val <= floor_) continue;
      auto it = g_.find(v);
      if (it == g_.end()) continue;
      for (const auto& e : it->second) {
        for (const auto* bound : {&e.lo, &e.hi}) {
          if (!bound->is_finite()) continue;
          TimeValue next = val - *bound;
          emit(next);
          if (seen_.size() < kChainStateLimit && seen_.emplace(e.to.value, next).second) stack.emplace_back(e.to, next);
        }
      }
    }
  }

private:
  const ChainGraph& g_;
  TimeValue floor_;
  std::set<std::pair<std::uint32_t, TimeValue>> seen_;
};

}  // namespace

bool wait_eligible(const std::vector<Disjunct>& constraints, const ActivationSet& activated) {
  if (!activated.empty()) return true;
  for (const auto& d : constraints)
    for (const auto& c : d.conjuncts)
      if (c.is_open() && c.is_unary()) return true;
  return false;
}

std::vector<TimeValue> backward_chain(TimepointRef tp, const TimeValue& value, const std::vector<Disjunct>& constraints,
                                      const TimeValue& floor) {
  const auto g = chain_graph(constraints);
  std::vector<TimeValue> out;
  Chainer(g, floor).run(tp, value, [&](const TimeValue& v) { out.push_back(v); });
  return out;
}

std::optional<WaitDuration> try_wait_duration(const TimeValue& t, const std::vector<Disjunct>& constraints,
                                              const ActivationSet& activated) {
  Best best;
  for (const auto& [u, windows] : activated) {
    for (const auto& w : windows) {
      best.offer(w.lo() - t, WaitRule::activation);
      best.offer(w.hi() - t, WaitRule::activation);
    }
  }
  const auto g = chain_graph(constraints);
  Chainer chainer(g, t);
  for (const auto& d : constraints) {
    for (const auto& c : d.conjuncts) {
      if (!c.is_open() || !c.is_unary()) continue;
      for (const auto* bound : {&c.iv.lo(), &c.iv.hi()}) {
        if (!bound->is_finite()) continue;
        best.offer(*bound - t, WaitRule::unary_bound);
        chainer.run(c.v, *bound, [&](const TimeValue& v) { best.offer(v - t, WaitRule::backward_chain); });
      }
    }
  }
  if (!best.delta) return std::nullopt;
  return WaitDuration{*best.delta, best.rules};
}

WaitDuration wait_duration(const TimeValue& t, const std::vector<Disjunct>& constraints,
                           const ActivationSet& activated) {
  if (auto w = try_wait_duration(t, constraints, activated)) return *w;
  throw NoPositiveCandidate();
}

}  // namespace rtdc
