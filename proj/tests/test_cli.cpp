#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support/process.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli(const std::string& args) { return quoted(RTDC_CLI) + " " + args; }
std::string data(const std::string& name) { return quoted((fs::path(RTDC_TEST_DATA) / name).string()); }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(RTDC_SCRATCH) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("solve") {
  SUBCASE("T0 text") {
    const auto r = run_command(cli("solve " + data("t0.json")));
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("Strategy found\nCompute time: ", 0) == 0);
    CHECK(has(r.out, "Schedule [a] at current time t = 0.00,"));
    CHECK(has(r.out, "Problem solved"));
  }
  SUBCASE("perroquet json") {
    const auto r = run_command(cli("solve --output json " + data("perroquet.json")));
    REQUIRE(r.exit_code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["verdict"] == "rtdc");
    const json* n = &j["strategy"];
    while ((*n)["schedule_now"].empty() && !(*n)["children"].empty()) n = &(*n)["children"][0];
    REQUIRE_FALSE((*n)["schedule_now"].empty());
    CHECK((*n)["schedule_now"][0]["tp"] == "a1");
    CHECK((*n)["schedule_now"][0]["time"] == "15");
  }
  SUBCASE("T2") {
    const auto r = run_command(cli("solve " + data("t2.json")));
    CHECK(r.exit_code == 1);
    CHECK(has(r.out, "No R-TDC strategy exists"));
  }
  SUBCASE("timeout") {
    const auto r = run_command(cli("solve --timeout 0.2 " + data("hard.json")));
    CHECK(r.exit_code == 2);
    CHECK(has(r.out, "Timeout"));
  }
  SUBCASE("input errors") {
    const auto dir = scratch("cli_errors");
    std::ofstream(dir / "syntax.json") << "{\n  \"controllables\": [\"a\",]\n}";
    std::ofstream(dir / "schema.json")
        << R"({"controllables":["a"],"uncontrollables":[],"constraints":[[{"kind":"unary","v":"b","lo":"0","hi":"1"}]],"links":[]})";
    auto r = run_command(cli("solve " + quoted((dir / "syntax.json").string())));
    CHECK(r.exit_code == 3);
    CHECK(has(r.out, "line 2, column"));
    r = run_command(cli("solve " + quoted((dir / "schema.json").string())));
    CHECK(r.exit_code == 3);
    CHECK(has(r.out, "/constraints/0/0/v"));
    r = run_command(cli("solve " + quoted((dir / "missing.json").string())));
    CHECK(r.exit_code == 3);
    r = run_command(cli("solve"));
    CHECK(r.exit_code > 2);
    r = run_command(cli("solve --output yaml " + data("t0.json")));
    CHECK(r.exit_code > 2);
  }
  SUBCASE("heuristic") {
    const std::string h = quoted(std::string("subprocess:") + RTDC_MOCK_HEURISTIC + " reverse");
    auto r = run_command(cli("solve --heuristic " + h + " " + data("perroquet.json")));
    CHECK(r.exit_code == 0);
    const std::string bad = quoted(std::string("subprocess:") + RTDC_MOCK_HEURISTIC + " garbage");
    r = run_command(cli("solve --heuristic " + bad + " " + data("perroquet.json")));
    CHECK(r.exit_code == 0);
    CHECK(has(r.out, "warning: heuristic failed"));
    r = run_command(cli("solve --strict-heuristic --heuristic " + bad + " " + data("perroquet.json")));
    CHECK(r.exit_code == 4);
  }
}

TEST_CASE("verify") {
  const auto dir = scratch("cli_verify");
  const auto strategy = dir / "t0.json";
  REQUIRE(run_command(cli("solve --output json -o " + quoted(strategy.string()) + " " + data("t0.json"))).exit_code ==
          0);
  auto r = run_command(cli("verify " + data("t0.json") + " " + quoted(strategy.string())));
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("valid\n", 0) == 0);

  auto doc = json::parse(slurp(strategy));
  doc["strategy"]["leaf_schedule"][0]["time"] = "20";
  std::ofstream(dir / "tampered.json") << doc.dump();
  r = run_command(cli("verify " + data("t0.json") + " " + quoted((dir / "tampered.json").string())));
  CHECK(r.exit_code == 1);
  CHECK(has(r.out, "invalid"));
  CHECK(has(r.out, "constraint 0 violated [a in [0, 10]]"));

  const auto p = dir / "perroquet.json";
  REQUIRE(run_command(cli("solve --output json -o " + quoted(p.string()) + " " + data("perroquet.json"))).exit_code ==
          0);
  r = run_command(cli("verify --samples 10000 " + data("perroquet.json") + " " + quoted(p.string())));
  CHECK(r.exit_code == 0);
  CHECK(has(r.out, "valid\n"));

  std::ofstream(dir / "broken.json") << R"({"start": "0", "schedule_now": 5})";
  r = run_command(cli("verify " + data("t0.json") + " " + quoted((dir / "broken.json").string())));
  CHECK(r.exit_code == 3);
}

TEST_CASE("gen") {
  const auto a = scratch("cli_gen_a"), b = scratch("cli_gen_b");
  REQUIRE(run_command(cli("gen --count 3 --seed 7 --out " + quoted(a.string()))).exit_code == 0);
  REQUIRE(run_command(cli("gen --count 3 --seed 7 --out " + quoted(b.string()))).exit_code == 0);
  for (const char* name : {"gen_7_0000.json", "gen_7_0001.json", "gen_7_0002.json"}) {
    REQUIRE(fs::exists(a / name));
    CHECK(slurp(a / name) == slurp(b / name));
  }
  CHECK(slurp(a / "gen_7_0000.json") != slurp(a / "gen_7_0001.json"));
  REQUIRE(run_command(cli("gen --perroquet 3 --out " + quoted(a.string()))).exit_code == 0);
  CHECK(slurp(a / "perroquet_3.json") == slurp(fs::path(RTDC_TEST_DATA) / "perroquet.json"));
  CHECK(run_command(cli("gen --controllables 5:2 --out " + quoted(a.string()))).exit_code == 3);
}

TEST_CASE("datagen") {
  SUBCASE("defaults") {
    const auto r = run_command(cli("datagen --help"));
    CHECK(r.exit_code == 0);
    CHECK(has(r.out, "--nu INT [25]"));
    CHECK(has(r.out, "--tau FLOAT [3]"));
  }
  SUBCASE("records") {
    const auto dir = scratch("cli_datagen");
    const std::string args = "datagen --controllables 2:3 --uncontrollables 1:1 --count 3 --seed 11 --nu 2 --tau 1 ";
    REQUIRE(run_command(cli(args + "--out " + quoted((dir / "a.jsonl").string()))).exit_code == 0);
    REQUIRE(run_command(cli(args + "--jobs 2 --out " + quoted((dir / "b.jsonl").string()))).exit_code == 0);
    CHECK(slurp(dir / "a.jsonl") == slurp(dir / "b.jsonl"));
    std::istringstream in(slurp(dir / "a.jsonl"));
    std::string line;
    REQUIRE(std::getline(in, line));
    const auto header = json::parse(line);
    CHECK(header["layout"] == "rtdc-graph-v1");
    CHECK(header["nu"] == 2);
    int records = 0;
    while (std::getline(in, line)) {
      const auto rec = json::parse(line);
      ++records;
      REQUIRE(rec.contains("graph"));
      REQUIRE(rec.contains("labels"));
      REQUIRE(rec.contains("meta"));
      CHECK(rec["graph"]["layout"] == "rtdc-graph-v1");
      const auto& g = rec["graph"];
      CHECK(g["nodes"].size() == g["num_nodes"]);
      for (const auto& n : g["nodes"]) CHECK(n["features"].size() == header["node_features"]);
      for (const auto& e : g["edges"]) {
        CHECK(e["features"].size() == header["edge_features"]);
        CHECK(e["from"].get<int>() < g["num_nodes"].get<int>());
        CHECK(e["to"].get<int>() < g["num_nodes"].get<int>());
      }
      CHECK(rec["labels"].size() == g["active"].size());
      for (const auto& l : rec["labels"]) CHECK((l == 0 || l == 1));
      CHECK(g["nodes"][g["active"].back().get<int>()]["kind"] == "wait");
      CHECK(rec["meta"]["seed"] == 11 + records - 1);
    }
    CHECK(records == 3);
  }
}

TEST_CASE("bench") {
  const auto empty = scratch("cli_bench_empty");
  auto r = run_command(cli("bench " + quoted(empty.string())));
  CHECK(r.exit_code == 0);
  CHECK(r.out == "config,budget,solved_count,strategies_found,proven_not_rtdc\n");

  const auto dir = scratch("cli_bench");
  fs::copy_file(fs::path(RTDC_TEST_DATA) / "t0.json", dir / "t0.json");
  const auto out = dir / "out.csv";
  r = run_command(cli("bench --budgets 1,5 -o " + quoted(out.string()) + " " + quoted(dir.string())));
  CHECK(r.exit_code == 0);
  CHECK(slurp(out) == "config,budget,solved_count,strategies_found,proven_not_rtdc\nts,1,1,1,0\nts,5,1,1,0\n");
  CHECK(run_command(cli("bench --configs mcts " + quoted(dir.string()))).exit_code == 3);
}
