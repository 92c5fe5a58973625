// Scripted stand-in for a learned heuristic process.
//   mock_heuristic ok | reverse | bad-version | garbage | wrong-length | die-after N
#include <cstdlib>
#include <iostream>
#include <string>

#include "json.hpp"

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "ok";
  const long limit = mode == "die-after" && argc > 2 ? std::atol(argv[2]) : -1;
  long answered = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    const auto req = nlohmann::json::parse(line, nullptr, false);
    if (req.is_discarded()) {
      std::cout << R"({"error":"unparsable request"})" << std::endl;
      continue;
    }
    if (req.contains("handshake")) {
      const auto& h = req["handshake"];
      if (mode == "bad-version" || h.value("protocol", 0) != 1 || h.value("layout", "") != "rtdc-graph-v1")
        std::cout << R"({"error":"unsupported protocol"})" << std::endl;
      else
        std::cout << R"({"ok":true,"model":"mock"})" << std::endl;
      continue;
    }
    if (limit >= 0 && answered >= limit) return 1;
    ++answered;
    if (mode == "garbage") {
      std::cout << "not json at all" << std::endl;
      continue;
    }
    const auto n = req.at("active").size();
    nlohmann::json probs = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i + 1) / static_cast<double>(n + 1);
      probs.push_back(mode == "reverse" ? x : 1.0 - x);
    }
    if (mode == "wrong-length") probs.push_back(0.5);
    std::cout << nlohmann::json{{"probs", probs}}.dump() << std::endl;
  }
}
