#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "rtdc/bench.hpp"
#include "rtdc/gen.hpp"
#include "rtdc/heuristic.hpp"
#include "rtdc/io.hpp"
#include "rtdc/search.hpp"
#include "rtdc/strategy.hpp"

using namespace rtdc;
using nlohmann::json;

namespace {

constexpr int kExitInputError = 3;
constexpr int kExitHeuristicError = 4;
constexpr int kExitInternalError = 5;

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("RTDC_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    std::cerr << "warning: ignoring malformed RTDC_SEED '" << s << "'\n";
    return std::nullopt;
  }
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed range '" + text + "' (expected N or LO:HI)");
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) std::cout << text;
  else write_text_file(out_path, text);
}

struct GenFlags {
  std::string controllables = "10:20";
  std::string uncontrollables = "1:3";
  std::string bounds = "0:100";
  int max_conjuncts = 5;
  double p_constrain = 0.2;
  double p_unary = 0.5;

  void add(CLI::App* app) {
    app->add_option("--controllables", controllables, "Controllable count range LO:HI")->capture_default_str();
    app->add_option("--uncontrollables", uncontrollables, "Uncontrollable count range LO:HI")->capture_default_str();
    app->add_option("--bounds", bounds, "Bound range LO:HI")->capture_default_str();
    app->add_option("--max-conjuncts", max_conjuncts, "Max conjuncts per disjunct")->capture_default_str();
    app->add_option("--p-constrain", p_constrain, "Chance to constrain an already present timepoint")->capture_default_str();
    app->add_option("--p-unary", p_unary, "Chance a conjunct is unary")->capture_default_str();
  }

  GenParams params(std::uint64_t seed) const {
    GenParams p;
    p.controllables_range = parse_range(controllables);
    p.uncontrollables_range = parse_range(uncontrollables);
    p.bound_range = parse_range(bounds);
    p.max_conjuncts_per_disjunct = max_conjuncts;
    p.constrain_probability_if_present = p_constrain;
    p.unary_vs_binary_probability = p_unary;
    p.seed = seed;
    check_params(p);
    return p;
  }
};

std::string fixed(double x, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

json stats_json(const SolveStats& s) {
  return {{"expanded", s.expanded},     {"waits", s.waits},
          {"dtn_calls", s.dtn_calls},   {"heuristic_calls", s.heuristic_calls},
          {"heuristic_failures", s.heuristic_failures}, {"wall_seconds", s.wall_seconds}};
}

// ---------------------------------------------------------------- subcommands

struct SolveCmd {
  std::string input;
  double timeout = 0.0;
  std::string heuristic = "none";
  int heuristic_depth = 15;
  bool strict = false;
  bool no_symmetry = false;
  std::optional<std::uint64_t> seed;
  std::string output = "text";
  std::string out_path;

  int run() {
    const Dtnu d = load_dtnu(input);
    SolveConfig cfg;
    if (timeout > 0) cfg.timeout = std::chrono::duration<double>(timeout);
    cfg.heuristic_max_dor_depth = heuristic_depth;
    cfg.strict_heuristic = strict;
    cfg.symmetry_pruning = !no_symmetry;
    if (!seed) seed = env_seed();
    cfg.random_order_seed = seed;

    std::unique_ptr<SubprocessHeuristic> provider;
    if (heuristic.rfind("subprocess:", 0) == 0) {
      provider = std::make_unique<SubprocessHeuristic>(heuristic.substr(11));
      try {
        provider->start();
        cfg.heuristic = provider.get();
      } catch (const HeuristicError& e) {
        if (strict) throw;
        std::cerr << "warning: heuristic unavailable (" << e.what() << "); using creation order\n";
      }
    } else if (heuristic != "none") {
      throw std::invalid_argument("--heuristic must be 'none' or 'subprocess:<command>'");
    }

    const Verdict v = solve(d, cfg);
    if (output == "json") {
      json j{{"verdict", to_string(v.outcome)}, {"stats", stats_json(v.stats)}};
      j["strategy"] = v.strategy ? strategy_to_json(*v.strategy, d) : json(nullptr);
      emit(j.dump(2) + "\n", out_path);
    } else {
      std::string text;
      switch (v.outcome) {
        case Verdict::Outcome::rtdc: text = "Strategy found\n"; break;
        case Verdict::Outcome::not_rtdc: text = "No R-TDC strategy exists\n"; break;
        case Verdict::Outcome::timeout: text = "Timeout\n"; break;
      }
      text += "Compute time: " + fixed(v.stats.wall_seconds, 3) + " s\n";
      if (v.strategy) text += render_text(*v.strategy, d);
      emit(text, out_path);
    }
    switch (v.outcome) {
      case Verdict::Outcome::rtdc: return 0;
      case Verdict::Outcome::not_rtdc: return 1;
      case Verdict::Outcome::timeout: return 2;
    }
    return kExitInternalError;
  }
};

struct VerifyCmd {
  std::string dtnu_path;
  std::string strategy_path;
  std::size_t samples = 1000;
  std::optional<std::uint64_t> seed;
  bool no_endpoints = false;
  std::size_t max_endpoint_combinations = std::size_t{1} << 16;

  int run() {
    const Dtnu d = load_dtnu(dtnu_path);
    const json doc = read_json_file(strategy_path);
    const json& sj = doc.is_object() && doc.contains("verdict") ? doc.at("strategy") : doc;
    if (sj.is_null()) throw FormatError(strategy_path + ": document carries no strategy");
    StrategyNode s;
    try {
      s = strategy_from_json(sj, d);
    } catch (const std::invalid_argument& e) {
      throw FormatError(strategy_path + ": " + e.what());
    }
    VerifyConfig cfg;
    cfg.random_samples = samples;
    cfg.seed = seed ? *seed : env_seed().value_or(0);
    cfg.endpoint_exhaustive = !no_endpoints;
    cfg.max_endpoint_combinations = max_endpoint_combinations;
    const auto r = verify(s, d, cfg);

    std::cout << (r.valid() ? "valid" : "invalid") << "\n";
    std::cout << "samples: " << r.samples_run << (r.endpoints_complete ? "" : " (endpoint enumeration capped)")
              << ", seed: " << r.seed << "\n";
    for (const auto& issue : r.structural_issues) std::cout << "structure " << issue << "\n";
    if (r.violation_count) std::cout << "violations: " << r.violation_count << "\n";
    for (const auto& v : r.violations) {
      std::cout << "violation at /";
      for (std::size_t i = 0; i < v.path.size(); ++i) std::cout << (i ? "/" : "") << v.path[i];
      std::cout << ": " << v.message;
      if (v.disjunct) {
        std::cout << " [";
        const auto& dj = d.constraints()[*v.disjunct];
        for (std::size_t k = 0; k < dj.conjuncts.size(); ++k) {
          const auto& c = dj.conjuncts[k];
          std::cout << (k ? " or " : "") << d.id(c.v);
          if (!c.is_unary()) std::cout << " - " << d.id(c.vi);
          std::cout << " in " << c.iv;
        }
        std::cout << "]";
      }
      std::cout << " with";
      for (const auto& [tp, t] : v.times) std::cout << " " << d.id(tp) << "=" << t;
      std::cout << "\n";
    }
    return r.valid() ? 0 : 1;
  }
};

struct GenCmd {
  GenFlags flags;
  std::size_t count = 1;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  int perroquet = 0;

  int run() {
    if (perroquet > 0) {
      write_text_file(std::filesystem::path(out_dir) / ("perroquet_" + std::to_string(perroquet) + ".json"),
                      serialize_dtnu(make_perroquet(perroquet)));
      return 0;
    }
    for (std::size_t i = 0; i < count; ++i) {
      const auto p = flags.params(seed + i);
      std::ostringstream name;
      name << "gen_" << seed << "_" << std::setw(4) << std::setfill('0') << i << ".json";
      write_text_file(std::filesystem::path(out_dir) / name.str(), serialize_dtnu(generate(p)));
    }
    return 0;
  }
};

struct DatagenCmd {
  GenFlags flags;
  std::size_t count = 1;
  std::uint64_t seed = 0;
  int nu = 25;
  double tau = 3.0;
  unsigned jobs = 1;
  bool wall_times = false;
  std::string out = "dataset.jsonl";

  int run() {
    const auto base = flags.params(seed);
    std::string text = dataset_header(base, nu, tau).dump() + "\n";
    for (std::size_t i = 0; i < count; ++i) {
      const auto p = flags.params(seed + i);
      const Dtnu d = generate(p);
      const auto ex = label_root_decisions(d, nu, tau, p.seed, jobs);
      text += dataset_record(ex, p.seed, p, wall_times).dump() + "\n";
    }
    write_text_file(out, text);
    return 0;
  }
};

struct BenchCmd {
  std::string dir;
  std::vector<double> budgets{1, 5, 10};
  std::vector<std::string> configs{"ts"};
  int heuristic_depth = 15;
  unsigned jobs = 1;
  std::string out_path;
  std::string records_path;

  int run() {
    std::vector<BenchConfig> cfgs;
    for (const auto& c : configs) cfgs.push_back(BenchConfig::parse(c, heuristic_depth));
    const auto result = run_bench(list_instances(dir), budgets, cfgs, jobs);
    std::ostringstream csv;
    write_csv(csv, result.rows);
    emit(csv.str(), out_path);
    if (!records_path.empty()) {
      std::ostringstream rec;
      write_records_csv(rec, result.records);
      write_text_file(records_path, rec.str());
    }
    for (const auto& r : result.records)
      if (r.verdict == "error") std::cerr << "warning: " << r.instance << ": " << r.error << "\n";
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"R-TDC solver for disjunctive temporal networks with uncertainty"};
  app.require_subcommand(1);

  SolveCmd solve_cmd;
  auto* solve_app = app.add_subcommand("solve", "Decide R-TDC and print a strategy (exit 0 rtdc, 1 not, 2 timeout)");
  solve_app->add_option("input", solve_cmd.input, "DTNU JSON file")->required();
  solve_app->add_option("--timeout", solve_cmd.timeout, "Budget in seconds (0 = none)");
  solve_app->add_option("--heuristic", solve_cmd.heuristic, "none | subprocess:<command>")->capture_default_str();
  solve_app->add_option("--heuristic-depth", solve_cmd.heuristic_depth, "Use the heuristic up to this d-OR depth")
      ->capture_default_str();
  solve_app->add_flag("--strict-heuristic", solve_cmd.strict, "Fail instead of falling back when the heuristic breaks");
  solve_app->add_flag("--no-symmetry", solve_cmd.no_symmetry, "Disable symmetric subtree pruning");
  solve_app->add_option("--seed", solve_cmd.seed, "Shuffle decision order with this seed (default: $RTDC_SEED)");
  solve_app->add_option("--output", solve_cmd.output, "text | json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  solve_app->add_option("-o,--out", solve_cmd.out_path, "Write to a file instead of stdout");

  VerifyCmd verify_cmd;
  auto* verify_app = app.add_subcommand("verify", "Check a strategy against a DTNU (exit 0 iff valid)");
  verify_app->add_option("dtnu", verify_cmd.dtnu_path, "DTNU JSON file")->required();
  verify_app->add_option("strategy", verify_cmd.strategy_path, "Strategy JSON (or solve --output json)")->required();
  verify_app->add_option("--samples", verify_cmd.samples, "Random samples")->capture_default_str();
  verify_app->add_option("--seed", verify_cmd.seed, "Sampling seed (default: $RTDC_SEED or 0)");
  verify_app->add_flag("--no-endpoints", verify_cmd.no_endpoints, "Skip endpoint enumeration");
  verify_app->add_option("--max-endpoint-combinations", verify_cmd.max_endpoint_combinations)->capture_default_str();

  GenCmd gen_cmd;
  auto* gen_app = app.add_subcommand("gen", "Write random DTNU instances");
  gen_cmd.flags.add(gen_app);
  gen_app->add_option("--count", gen_cmd.count)->capture_default_str();
  gen_app->add_option("--seed", gen_cmd.seed)->capture_default_str();
  gen_app->add_option("--out", gen_cmd.out_dir, "Output directory")->capture_default_str();
  gen_app->add_option("--perroquet", gen_cmd.perroquet, "Write the perroquet instance with N maneuver pairs instead");

  DatagenCmd datagen_cmd;
  auto* datagen_app = app.add_subcommand("datagen", "Write labeled graphs for heuristic training");
  datagen_cmd.flags.add(datagen_app);
  datagen_app->add_option("--count", datagen_cmd.count)->capture_default_str();
  datagen_app->add_option("--seed", datagen_cmd.seed)->capture_default_str();
  datagen_app->add_option("--nu", datagen_cmd.nu, "Explorations per root decision")->capture_default_str();
  datagen_app->add_option("--tau", datagen_cmd.tau, "Seconds per exploration")->capture_default_str();
  datagen_app->add_option("--jobs", datagen_cmd.jobs)->capture_default_str();
  datagen_app->add_flag("--wall-times", datagen_cmd.wall_times, "Record labeling wall times (output no longer reproducible)");
  datagen_app->add_option("--out", datagen_cmd.out, "Output file")->capture_default_str();

  BenchCmd bench_cmd;
  auto* bench_app = app.add_subcommand("bench", "Budget vs. solved CSV over an instance directory");
  bench_app->add_option("dir", bench_cmd.dir, "Directory of DTNU JSON files")->required()->check(CLI::ExistingDirectory);
  bench_app->add_option("--budgets", bench_cmd.budgets, "Budgets in seconds")->delimiter(',')->capture_default_str();
  bench_app->add_option("--configs", bench_cmd.configs, "ts | ts-nosym | subprocess:<command>")
      ->delimiter(',')
      ->capture_default_str();
  bench_app->add_option("--heuristic-depth", bench_cmd.heuristic_depth)->capture_default_str();
  bench_app->add_option("--jobs", bench_cmd.jobs)->capture_default_str();
  bench_app->add_option("-o,--out", bench_cmd.out_path, "CSV output file");
  bench_app->add_option("--records", bench_cmd.records_path, "Per-instance CSV output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (*solve_app) return solve_cmd.run();
    if (*verify_app) return verify_cmd.run();
    if (*gen_app) return gen_cmd.run();
    if (*datagen_app) return datagen_cmd.run();
    if (*bench_app) return bench_cmd.run();
  } catch (const HeuristicError& e) {
    std::cerr << "error: heuristic: " << e.what() << "\n";
    return kExitHeuristicError;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternalError;
  }
  return kExitInternalError;
}
