#include "rtdc/gen.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "rtdc/search.hpp"

namespace rtdc {

void check_params(const GenParams& p) {
  auto range = [](const std::pair<int, int>& r, const char* name, int min) {
    if (r.first > r.second || r.first < min)
      throw std::invalid_argument(std::string(name) + " range [" + std::to_string(r.first) + ", " +
                                  std::to_string(r.second) + "] is invalid");
  };
  range(p.controllables_range, "controllables", 1);
  range(p.uncontrollables_range, "uncontrollables", 0);
  range(p.bound_range, "bound", INT32_MIN);
  if (p.bound_range.first < 0) throw std::invalid_argument("bound range must be non-negative");
  if (p.max_conjuncts_per_disjunct < 1) throw std::invalid_argument("max conjuncts per disjunct must be >= 1");
  for (double q : {p.constrain_probability_if_present, p.unary_vs_binary_probability})
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("probabilities must lie in [0, 1]");
}

nlohmann::json params_to_json(const GenParams& p) {
  return {{"controllables_range", {p.controllables_range.first, p.controllables_range.second}},
          {"uncontrollables_range", {p.uncontrollables_range.first, p.uncontrollables_range.second}},
          {"bound_range", {p.bound_range.first, p.bound_range.second}},
          {"max_conjuncts_per_disjunct", p.max_conjuncts_per_disjunct},
          {"constrain_probability_if_present", p.constrain_probability_if_present},
          {"unary_vs_binary_probability", p.unary_vs_binary_probability},
          {"seed", p.seed}};
}

namespace {

class Draw {
public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

  // Two-decimal value in [lo, hi].
  TimeValue hundredths(int lo, int hi) {
    const auto k = std::uniform_int_distribution<std::int64_t>(std::int64_t{lo} * 100, std::int64_t{hi} * 100)(rng_);
    return TimeValue(k, 100);
  }

  Interval interval(const std::pair<int, int>& r) {
    TimeValue x = hundredths(r.first, r.second), y = hundredths(r.first, r.second);
    if (y < x) std::swap(x, y);
    return {x, y};
  }

  std::mt19937_64& rng() { return rng_; }

private:
  std::mt19937_64 rng_;
};

}  // namespace

Dtnu generate(const GenParams& params) {
  check_params(params);
  Draw draw(params.seed);
  const int n1 = draw.integer(params.controllables_range.first, params.controllables_range.second);
  const int n2 = std::min(n1, draw.integer(params.uncontrollables_range.first, params.uncontrollables_range.second));

  std::vector<std::string> a_ids, u_ids;
  for (int i = 1; i <= n1; ++i) a_ids.push_back("a" + std::to_string(i));
  for (int i = 1; i <= n2; ++i) u_ids.push_back("u" + std::to_string(i));
  Dtnu d(std::move(a_ids), std::move(u_ids));
  const std::size_t n = d.size();

  std::vector<std::uint32_t> triggers(static_cast<std::size_t>(n1));
  std::iota(triggers.begin(), triggers.end(), 0U);
  std::shuffle(triggers.begin(), triggers.end(), draw.rng());
  std::vector<bool> present(n, false);
  for (int j = 0; j < n2; ++j) {
    const TimepointRef a{triggers[static_cast<std::size_t>(j)]};
    const TimepointRef u = d.uncontrollable(static_cast<std::size_t>(j));
    d.add_link({a, {draw.interval(params.bound_range)}, u});
    present[a.value] = present[u.value] = true;
  }

  for (std::uint32_t v = 0; v < n; ++v) {
    if (present[v] && !draw.chance(params.constrain_probability_if_present)) continue;
    Disjunct disjunct;
    const int k = draw.integer(1, params.max_conjuncts_per_disjunct);
    for (int c = 0; c < k; ++c) {
      const Interval iv = draw.interval(params.bound_range);
      if (n == 1 || draw.chance(params.unary_vs_binary_probability)) {
        disjunct.conjuncts.push_back(Conjunct::unary({v}, iv));
      } else {
        auto partner = static_cast<std::uint32_t>(draw.integer(0, static_cast<int>(n) - 2));
        if (partner >= v) ++partner;
        disjunct.conjuncts.push_back(Conjunct::binary({v}, {partner}, iv));
        present[partner] = true;
      }
    }
    present[v] = true;
    d.add_constraint(std::move(disjunct));
  }
  return d;
}

Dtnu make_perroquet(int n, const PerroquetParams& p) {
  if (n < 1) throw std::invalid_argument("perroquet needs at least one maneuver pair");
  std::vector<std::string> a_ids, u_ids;
  for (int i = 1; i <= n; ++i) {
    a_ids.push_back("a" + std::to_string(i));
    u_ids.push_back("u" + std::to_string(i));
  }
  Dtnu d(std::move(a_ids), std::move(u_ids));
  const Interval before(p.t, p.t + p.delta1 - p.delta);
  const Interval after(p.t + p.delta2, TimeValue::infinity());
  for (int i = 0; i < n; ++i) {
    const TimepointRef a = d.controllable(static_cast<std::size_t>(i));
    if (i == 0) d.add_constraint({{Conjunct::unary(a, before)}});
    else d.add_constraint({{Conjunct::unary(a, before), Conjunct::unary(a, after)}});
  }
  for (int i = 0; i + 1 < n; ++i)
    d.add_constraint({{Conjunct::binary(d.controllable(static_cast<std::size_t>(i) + 1),
                                        d.uncontrollable(static_cast<std::size_t>(i)), Interval(p.delta, p.h_max))}});
  for (int i = 0; i < n; ++i)
    d.add_link({d.controllable(static_cast<std::size_t>(i)), {Interval(p.delta, p.d_max)},
                d.uncontrollable(static_cast<std::size_t>(i))});
  return d;
}

LabeledExample label_root_decisions(const Dtnu& dtnu, int nu, double tau, std::uint64_t seed, unsigned jobs) {
  LabeledExample ex;
  ex.graph = to_graph(dtnu);
  const std::size_t k = dtnu.num_controllables() + 1;
  ex.labels.assign(k, 0);
  ex.wall_times.assign(k, 0.0);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < k;) {
      const auto t0 = std::chrono::steady_clock::now();
      for (int r = 0; r < nu; ++r) {
        SolveConfig cfg;
        cfg.timeout = std::chrono::duration<double>(tau);
        cfg.root_decision = i;
        cfg.random_order_seed = seed * 0x9E3779B97F4A7C15ULL + i * static_cast<std::uint64_t>(nu) + static_cast<std::uint64_t>(r);
        const auto v = solve(dtnu, cfg);
        if (v.outcome == Verdict::Outcome::timeout) continue;
        ex.labels[i] = v.outcome == Verdict::Outcome::rtdc ? 1 : 0;
        break;
      }
      ex.wall_times[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const unsigned n_threads = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(k)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return ex;
}

nlohmann::json dataset_header(const GenParams& params, int nu, double tau) {
  return {{"layout", kGraphLayout},
          {"node_features", kNodeFeatures},
          {"edge_features", kEdgeFeatures},
          {"nu", nu},
          {"tau", tau},
          {"params", params_to_json(params)}};
}

nlohmann::json dataset_record(const LabeledExample& ex, std::uint64_t seed, const GenParams& params,
                              bool with_wall_times) {
  nlohmann::json meta{{"seed", seed}, {"params", params_to_json(params)}};
  if (with_wall_times) meta["wall_times"] = ex.wall_times;
  return {{"graph", to_json(ex.graph)}, {"labels", ex.labels}, {"meta", meta}};
}

}  // namespace rtdc
