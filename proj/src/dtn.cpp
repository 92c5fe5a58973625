#include "rtdc/dtn.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace rtdc {

namespace {

struct Edge {
  std::size_t from;
  std::size_t to;
  TimeValue weight;
};

// Bellman-Ford from a virtual source joined to every node with weight 0.
// Returns the potentials, or nullopt on a negative cycle.
std::optional<std::vector<TimeValue>> potentials(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<TimeValue> dist(n, TimeValue(0));
  for (std::size_t round = 0; round <= n; ++round) {
    bool changed = false;
    for (const auto& e : edges) {
      TimeValue cand = dist[e.from] + e.weight;
      if (cand < dist[e.to]) {
        dist[e.to] = std::move(cand);
        changed = true;
      }
    }
    if (!changed) return dist;
  }
  return std::nullopt;
}

// Shortest distance from every node to `target`; +inf when unreachable.
std::vector<TimeValue> distances_to(std::size_t n, std::size_t target, const std::vector<Edge>& edges) {
  std::vector<TimeValue> dist(n, TimeValue::infinity());
  dist[target] = 0;
  for (std::size_t round = 0; round < n; ++round) {
    bool changed = false;
    for (const auto& e : edges) {
      if (!dist[e.to].is_finite()) continue;
      TimeValue cand = dist[e.to] + e.weight;
      if (cand < dist[e.from]) {
        dist[e.from] = std::move(cand);
        changed = true;
      }
    }
    if (!changed) break;
  }
  return dist;
}

class Backtracker {
public:
  Backtracker(const DtnProblem& p, Deadline deadline)
      : n_(p.variables.size() + 1), zero_(p.variables.size()), deadline_(deadline) {
    for (std::size_t i = 0; i < p.variables.size(); ++i) local_.emplace(p.variables[i], i);
    for (const auto& d : p.disjuncts) {
      if (d.satisfied()) continue;
      std::vector<const Conjunct*> open;
      for (const auto& c : d.conjuncts)
        if (c.is_open()) open.push_back(&c);
      if (open.empty()) infeasible_ = true;
      choices_.push_back(std::move(open));
    }
    std::stable_sort(choices_.begin(), choices_.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
  }

  std::optional<std::vector<TimeValue>> run() {
    if (infeasible_ || !potentials(n_, edges_)) return std::nullopt;
    if (!descend(0)) return std::nullopt;
    return witness();
  }

private:
  std::size_t node(TimepointRef r) const {
    auto it = local_.find(r);
    if (it == local_.end()) throw std::invalid_argument("DTN conjunct references a non-variable timepoint");
    return it->second;
  }

  // Edges for v - vi in [lo, hi]; returns how many were pushed.
  std::size_t push(const Conjunct& c) {
    const std::size_t vj = node(c.v);
    const std::size_t vi = c.is_unary() ? zero_ : node(c.vi);
    std::size_t pushed = 0;
    if (c.iv.hi().is_finite()) {
      edges_.push_back({vi, vj, c.iv.hi()});
      ++pushed;
    }
    if (c.iv.lo().is_finite()) {
      edges_.push_back({vj, vi, -c.iv.lo()});
      ++pushed;
    }
    return pushed;
  }

  bool descend(std::size_t depth) {
    if (depth == choices_.size()) return true;
    if (deadline_ && (steps_++ & 63) == 0 && std::chrono::steady_clock::now() > *deadline_) throw DeadlineExceeded();
    for (const Conjunct* c : choices_[depth]) {
      const std::size_t pushed = push(*c);
      if (potentials(n_, edges_) && descend(depth + 1)) return true;
      edges_.resize(edges_.size() - pushed);
    }
    return false;
  }

  std::vector<TimeValue> witness() const {
    const auto to_zero = distances_to(n_, zero_, edges_);
    std::vector<TimeValue> times(n_ - 1);
    if (std::all_of(to_zero.begin(), to_zero.end(), [](const TimeValue& d) { return d.is_finite(); })) {
      for (std::size_t v = 0; v + 1 < n_; ++v) times[v] = -to_zero[v];
      return times;
    }
    const auto p = *potentials(n_, edges_);
    for (std::size_t v = 0; v + 1 < n_; ++v) times[v] = p[v] - p[zero_];
    return times;
  }

  std::size_t n_;
  std::size_t zero_;
  Deadline deadline_;
  std::uint64_t steps_ = 0;
  bool infeasible_ = false;
  std::unordered_map<TimepointRef, std::size_t> local_;
  std::vector<std::vector<const Conjunct*>> choices_;
  std::vector<Edge> edges_;
};

}  // namespace

DtnProblem make_dtn_problem(std::vector<TimepointRef> variables, std::vector<Disjunct> disjuncts,
                            const TimeValue& now) {
  for (const auto& v : variables)
    disjuncts.push_back(Disjunct{{Conjunct::unary(v, Interval(now, TimeValue::infinity()))}});
  return {std::move(variables), std::move(disjuncts)};
}

std::optional<Assignment> solve_dtn(const DtnProblem& p, Deadline deadline) {
  auto times = Backtracker(p, deadline).run();
  if (!times) return std::nullopt;
  Assignment out;
  out.reserve(p.variables.size());
  for (std::size_t i = 0; i < p.variables.size(); ++i) out.emplace_back(p.variables[i], (*times)[i]);
  return out;
}

}  // namespace rtdc
