#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "rtdc/bench.hpp"
#include "rtdc/io.hpp"
#include "support/fixtures.hpp"

using namespace rtdc;
namespace fs = std::filesystem;

namespace {

const char* kHeader = "config,budget,solved_count,strategies_found,proven_not_rtdc\n";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(RTDC_SCRATCH) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string csv(const BenchResult& r) {
  std::ostringstream out;
  write_csv(out, r.rows);
  return out.str();
}

}  // namespace

TEST_CASE("configs") {
  CHECK(BenchConfig::parse("ts").symmetry_pruning);
  CHECK_FALSE(BenchConfig::parse("ts-nosym").symmetry_pruning);
  const auto s = BenchConfig::parse("subprocess:python3 serve.py", 7);
  CHECK(s.heuristic_command == std::optional<std::string>("python3 serve.py"));
  CHECK(s.heuristic_depth == 7);
  CHECK(s.name == "subprocess:python3 serve.py");
  CHECK_THROWS_AS(BenchConfig::parse("mcts"), std::invalid_argument);
  CHECK_THROWS_AS(BenchConfig::parse("subprocess:"), std::invalid_argument);
  CHECK(BenchConfig::parse("ts").hash() == BenchConfig::parse("ts").hash());
  CHECK(BenchConfig::parse("ts").hash() != BenchConfig::parse("ts-nosym").hash());
}

TEST_CASE("empty directory") {
  const auto dir = scratch("bench_empty");
  CHECK(list_instances(dir).empty());
  const auto r = run_bench(list_instances(dir), {1, 5}, {BenchConfig::parse("ts")});
  CHECK(csv(r) == kHeader);
}

TEST_CASE("single T0") {
  const auto dir = scratch("bench_t0");
  write_text_file(dir / "t0.json", serialize_dtnu(fixtures::t0()));
  const auto r = run_bench(list_instances(dir), {5, 1}, {BenchConfig::parse("ts")});
  REQUIRE(r.rows.size() == 2);
  CHECK(csv(r) == std::string(kHeader) + "ts,1,1,1,0\nts,5,1,1,0\n");
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].verdict == "rtdc");
  CHECK(r.records[0].instance == "t0.json");
}

TEST_CASE("failures are recorded, counts are cumulative") {
  const auto dir = scratch("bench_mixed");
  write_text_file(dir / "a_t0.json", serialize_dtnu(fixtures::t0()));
  write_text_file(dir / "b_t2.json", serialize_dtnu(fixtures::t2()));
  write_text_file(dir / "c_broken.json", "{\"controllables\": [");
  write_text_file(dir / "notes.txt", "ignored");
  GenParams p;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    p.seed = seed;
    write_text_file(dir / ("g" + std::to_string(seed) + ".json"), serialize_dtnu(generate(p)));
  }
  const auto files = list_instances(dir);
  REQUIRE(files.size() == 9);
  const auto r = run_bench(files, {0.05, 0.2, 0.5}, {BenchConfig::parse("ts"), BenchConfig::parse("ts-nosym")}, 2);
  REQUIRE(r.rows.size() == 6);
  REQUIRE(r.records.size() == 18);
  CHECK(r.records[2].verdict == "error");
  CHECK(r.records[2].error.find("line 1") != std::string::npos);
  CHECK(r.records[1].verdict == "not_rtdc");
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    CHECK(row.solved_count == row.strategies_found + row.proven_not_rtdc);
    CHECK(row.solved_count <= 8);
    if (i % 3 != 0) {
      CHECK(row.config == r.rows[i - 1].config);
      CHECK(row.solved_count >= r.rows[i - 1].solved_count);
      CHECK(row.strategies_found >= r.rows[i - 1].strategies_found);
    }
  }
  std::ostringstream rec;
  write_records_csv(rec, r.records);
  CHECK(rec.str().rfind("instance,config,config_hash,verdict,wall_seconds,expanded,waits,error\n", 0) == 0);
}

TEST_CASE("unreachable heuristic") {
  const auto dir = scratch("bench_heuristic");
  write_text_file(dir / "t0.json", serialize_dtnu(fixtures::t0()));
  const auto r = run_bench(list_instances(dir), {1}, {BenchConfig::parse("subprocess:/nonexistent/model")});
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].verdict == "rtdc");
  CHECK_FALSE(r.records[0].error.empty());
  CHECK_THROWS_AS(run_bench(list_instances(dir), {}, {BenchConfig::parse("ts")}), std::invalid_argument);
  CHECK_THROWS_AS(run_bench(list_instances(dir), {0}, {BenchConfig::parse("ts")}), std::invalid_argument);
}
