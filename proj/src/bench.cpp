#include "rtdc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <stdexcept>
#include <thread>

#include "rtdc/heuristic.hpp"
#include "rtdc/io.hpp"
#include "rtdc/search.hpp"

namespace rtdc {

BenchConfig BenchConfig::parse(const std::string& spec, int heuristic_depth) {
  BenchConfig c;
  c.name = spec;
  c.heuristic_depth = heuristic_depth;
  if (spec == "ts") return c;
  if (spec == "ts-nosym") {
    c.symmetry_pruning = false;
    return c;
  }
  if (spec.rfind("subprocess:", 0) == 0 && spec.size() > 11) {
    c.heuristic_command = spec.substr(11);
    return c;
  }
  throw std::invalid_argument("unknown bench config '" + spec + "' (expected ts, ts-nosym or subprocess:<command>)");
}

std::string BenchConfig::hash() const {
  const std::string key = name + "|" + (symmetry_pruning ? "sym" : "nosym") + "|" + std::to_string(heuristic_depth);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016zx", std::hash<std::string>{}(key));
  return buf;
}

std::vector<std::filesystem::path> list_instances(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

BenchRecord run_one(const std::filesystem::path& path, const BenchConfig& cfg, double budget,
                    HeuristicProvider* heuristic) {
  BenchRecord r;
  r.instance = path.filename().string();
  r.config = cfg.name;
  r.config_hash = cfg.hash();
  try {
    const Dtnu d = load_dtnu(path);
    SolveConfig sc;
    sc.timeout = std::chrono::duration<double>(budget);
    sc.symmetry_pruning = cfg.symmetry_pruning;
    sc.heuristic = heuristic;
    sc.heuristic_max_dor_depth = cfg.heuristic_depth;
    const Verdict v = solve(d, sc);
    r.verdict = to_string(v.outcome);
    r.wall_seconds = v.stats.wall_seconds;
    r.expanded = v.stats.expanded;
    r.waits = v.stats.waits;
  } catch (const std::exception& e) {
    r.verdict = "error";
    r.error = e.what();
  }
  return r;
}

}  // namespace

BenchResult run_bench(const std::vector<std::filesystem::path>& instances, std::vector<double> budgets,
                      const std::vector<BenchConfig>& configs, unsigned jobs) {
  std::sort(budgets.begin(), budgets.end());
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());
  if (budgets.empty()) throw std::invalid_argument("at least one budget is required");
  if (budgets.front() <= 0.0) throw std::invalid_argument("budgets must be positive");
  const double max_budget = budgets.back();

  BenchResult result;
  if (instances.empty()) return result;
  for (const auto& cfg : configs) {
    std::vector<BenchRecord> records(instances.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      std::unique_ptr<SubprocessHeuristic> heuristic;
      if (cfg.heuristic_command) {
        heuristic = std::make_unique<SubprocessHeuristic>(*cfg.heuristic_command);
        try {
          heuristic->start();
        } catch (const HeuristicError&) {
          heuristic.reset();
        }
      }
      for (std::size_t i; (i = next.fetch_add(1)) < instances.size();) {
        records[i] = run_one(instances[i], cfg, max_budget, heuristic.get());
        if (cfg.heuristic_command && !heuristic && records[i].error.empty())
          records[i].error = "heuristic unavailable; creation order used";
      }
    };
    const unsigned n = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, instances.size()))));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (double b : budgets) {
      BenchRow row{cfg.name, b, 0, 0, 0};
      for (const auto& r : records) {
        if (r.wall_seconds > b) continue;
        if (r.verdict == "rtdc") ++row.strategies_found;
        else if (r.verdict == "not_rtdc") ++row.proven_not_rtdc;
        else continue;
        ++row.solved_count;
      }
      result.rows.push_back(row);
    }
    result.records.insert(result.records.end(), records.begin(), records.end());
  }
  return result;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "config,budget,solved_count,strategies_found,proven_not_rtdc\n";
  for (const auto& r : rows)
    out << csv_field(r.config) << ',' << number(r.budget) << ',' << r.solved_count << ',' << r.strategies_found << ','
        << r.proven_not_rtdc << '\n';
}

void write_records_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "instance,config,config_hash,verdict,wall_seconds,expanded,waits,error\n";
  for (const auto& r : records) {
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.6f", r.wall_seconds);
    out << csv_field(r.instance) << ',' << csv_field(r.config) << ',' << r.config_hash << ',' << r.verdict << ','
        << wall << ',' << r.expanded << ',' << r.waits << ',' << csv_field(r.error) << '\n';
  }
}

}  // namespace rtdc
