#pragma once

// Brute force: every conjunct choice, each STN closed with Floyd-Warshall.

#include <random>
#include <vector>

#include "rtdc/dtn.hpp"

namespace oracle {

using rtdc::Conjunct;
using rtdc::Disjunct;
using rtdc::TimepointRef;
using rtdc::TimeValue;

inline TimeValue add(const TimeValue& a, const TimeValue& b) {
  if (a.is_pos_inf() || b.is_pos_inf()) return TimeValue::infinity();
  return a + b;
}

// Node 0 is the zero reference; variable k is node k + 1.
inline bool stn_consistent(std::size_t nodes, const std::vector<std::vector<TimeValue>>& w) {
  auto d = w;
  for (std::size_t k = 0; k < nodes; ++k)
    for (std::size_t i = 0; i < nodes; ++i)
      for (std::size_t j = 0; j < nodes; ++j)
        if (auto via = add(d[i][k], d[k][j]); via < d[i][j]) d[i][j] = via;
  for (std::size_t i = 0; i < nodes; ++i)
    if (d[i][i] < TimeValue(0)) return false;
  return true;
}

inline bool dtn_feasible(const rtdc::DtnProblem& p) {
  const std::size_t n = p.variables.size() + 1;
  auto node = [&](rtdc::TimepointRef r) {
    for (std::size_t k = 0; k < p.variables.size(); ++k)
      if (p.variables[k] == r) return k + 1;
    return std::size_t{0};
  };
  std::vector<std::size_t> choice(p.disjuncts.size(), 0);
  while (true) {
    std::vector<std::vector<TimeValue>> w(n, std::vector<TimeValue>(n, TimeValue::infinity()));
    for (std::size_t i = 0; i < n; ++i) w[i][i] = 0;
    auto tighten = [&](std::size_t from, std::size_t to, const TimeValue& bound) {
      if (bound < w[from][to]) w[from][to] = bound;
    };
    for (std::size_t k = 0; k < p.disjuncts.size(); ++k) {
      const auto& c = p.disjuncts[k].conjuncts[choice[k]];
      const std::size_t j = node(c.v);
      const std::size_t i = c.is_unary() ? 0 : node(c.vi);
      // x_j - x_i <= hi and x_i - x_j <= -lo
      if (c.iv.hi().is_finite()) tighten(i, j, c.iv.hi());
      if (c.iv.lo().is_finite()) tighten(j, i, -c.iv.lo());
    }
    if (stn_consistent(n, w)) return true;
    std::size_t k = 0;
    while (k < choice.size() && ++choice[k] == p.disjuncts[k].conjuncts.size()) choice[k++] = 0;
    if (k == choice.size()) return false;
  }
}

// Up to 5 variables and 3 disjuncts; some bounds infinite, half anchored at a random now.
inline rtdc::DtnProblem random_problem(std::mt19937_64& rng) {
  const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng() % 5);
  std::vector<TimepointRef> vars;
  for (std::uint32_t i = 0; i < n; ++i) vars.push_back({i});
  std::vector<Disjunct> ds;
  const int k = static_cast<int>(rng() % 4);
  for (int d = 0; d < k; ++d) {
    Disjunct dj;
    const int m = 1 + static_cast<int>(rng() % 3);
    for (int c = 0; c < m; ++c) {
      const TimepointRef v{static_cast<std::uint32_t>(rng() % n)};
      int lo = static_cast<int>(rng() % 21) - 10, hi = lo + static_cast<int>(rng() % 8);
      TimeValue l = lo, h = hi;
      if (rng() % 10 == 0) h = TimeValue::infinity();
      if (rng() % 10 == 0) l = TimeValue::neg_infinity();
      if (n == 1 || rng() % 2) {
        dj.conjuncts.push_back(Conjunct::unary(v, {l, h}));
      } else {
        TimepointRef w{static_cast<std::uint32_t>(rng() % n)};
        while (w == v) w = {static_cast<std::uint32_t>(rng() % n)};
        dj.conjuncts.push_back(Conjunct::binary(v, w, {l, h}));
      }
    }
    ds.push_back(dj);
  }
  if (rng() % 2) return rtdc::make_dtn_problem(vars, ds, static_cast<std::int64_t>(rng() % 5));
  return {vars, ds};
}

inline bool satisfies(const rtdc::DtnProblem& p, const rtdc::Assignment& a) {
  std::vector<TimeValue> times(8, TimeValue(0));
  for (const auto& [tp, t] : a) times[tp.value] = t;
  for (const auto& d : p.disjuncts)
    if (!rtdc::holds(d, times)) return false;
  return a.size() == p.variables.size();
}

}  // namespace oracle
