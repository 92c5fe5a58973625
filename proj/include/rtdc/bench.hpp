#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rtdc {

/// "ts", "ts-nosym" or "subprocess:<command>".
struct BenchConfig {
  std::string name;
  bool symmetry_pruning = true;
  std::optional<std::string> heuristic_command;
  int heuristic_depth = 15;

  /// Throws std::invalid_argument for unknown specs.
  static BenchConfig parse(const std::string& spec, int heuristic_depth = 15);
  std::string hash() const;
};

struct BenchRecord {
  std::string instance;
  std::string config;
  std::string config_hash;
  std::string verdict;  // rtdc, not_rtdc, timeout or error
  double wall_seconds = 0.0;
  unsigned long long expanded = 0;
  unsigned long long waits = 0;
  std::string error;
};

struct BenchRow {
  std::string config;
  double budget = 0.0;
  std::size_t solved_count = 0;
  std::size_t strategies_found = 0;
  std::size_t proven_not_rtdc = 0;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  std::vector<BenchRow> rows;
};

/// *.json files of a directory, sorted by name.
std::vector<std::filesystem::path> list_instances(const std::filesystem::path& dir);

/// Solves every instance once per config with the largest budget; an instance
/// counts as solved at budget b when its verdict arrived within b seconds.
BenchResult run_bench(const std::vector<std::filesystem::path>& instances, std::vector<double> budgets,
                      const std::vector<BenchConfig>& configs, unsigned jobs = 1);

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void write_records_csv(std::ostream& out, const std::vector<BenchRecord>& records);

}  // namespace rtdc
