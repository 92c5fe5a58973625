#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rtdc/dtnu.hpp"
#include "rtdc/encode.hpp"

namespace rtdc {

struct GenParams {
  std::pair<int, int> controllables_range{10, 20};
  std::pair<int, int> uncontrollables_range{1, 3};
  std::pair<int, int> bound_range{0, 100};
  int max_conjuncts_per_disjunct = 5;
  double constrain_probability_if_present = 0.2;
  double unary_vs_binary_probability = 0.5;  // probability of a unary conjunct
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument on empty ranges or out-of-range probabilities.
void check_params(const GenParams& p);
nlohmann::json params_to_json(const GenParams& p);

/// Random DTNU; a pure function of the params (seed included). Bounds are
/// two-decimal rationals.
Dtnu generate(const GenParams& params);

struct PerroquetParams {
  TimeValue delta = 10;
  TimeValue delta1 = 25;  // exposure start
  TimeValue delta2 = 65;  // exposure end
  TimeValue d_max = 40;
  TimeValue h_max = 40;
  TimeValue t = 0;
};

/// n successive maneuver pairs a1..an / u1..un.
Dtnu make_perroquet(int n, const PerroquetParams& p = {});

struct LabeledExample {
  EncodedGraph graph;
  std::vector<int> labels;  // one per active node
  std::vector<double> wall_times;
};

/// Labels each root decision (controllables, then WAIT) by up to `nu` seeded
/// randomized explorations of `tau` seconds each. Runs children on up to
/// `jobs` threads.
LabeledExample label_root_decisions(const Dtnu& dtnu, int nu, double tau, std::uint64_t seed, unsigned jobs = 1);

nlohmann::json dataset_header(const GenParams& params, int nu, double tau);
nlohmann::json dataset_record(const LabeledExample& ex, std::uint64_t seed, const GenParams& params,
                              bool with_wall_times);

}  // namespace rtdc
