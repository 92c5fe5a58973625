#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <sys/types.h>

#include "rtdc/encode.hpp"

namespace rtdc {

inline constexpr int kProtocolVersion = 1;

struct HeuristicError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scores the active nodes of a graph; higher is tried first.
class HeuristicProvider {
public:
  virtual ~HeuristicProvider() = default;
  /// One value in [0, 1] per active node. Throws HeuristicError.
  virtual std::vector<double> rank(const EncodedGraph& g) = 0;
  virtual std::string name() const = 0;
};

/// Strictly decreasing scores, i.e. plain creation order.
class CreationOrderHeuristic final : public HeuristicProvider {
public:
  std::vector<double> rank(const EncodedGraph& g) override;
  std::string name() const override { return "creation-order"; }
};

/// Talks the line protocol to a child process started with /bin/sh -c.
///   -> {"handshake": {"protocol": 1, "layout": "rtdc-graph-v1"}}
///   <- {"ok": true, ...} | {"error": "..."}
///   -> {"graph": {...}, "active": [...]}
///   <- {"probs": [...]}
class SubprocessHeuristic final : public HeuristicProvider {
public:
  explicit SubprocessHeuristic(std::string command);
  ~SubprocessHeuristic() override;
  SubprocessHeuristic(const SubprocessHeuristic&) = delete;
  SubprocessHeuristic& operator=(const SubprocessHeuristic&) = delete;

  /// Starts the child and performs the handshake. Throws HeuristicError.
  void start();
  std::vector<double> rank(const EncodedGraph& g) override;
  std::string name() const override { return "subprocess:" + command_; }

private:
  nlohmann::json exchange(const nlohmann::json& request);
  void stop();

  std::string command_;
  pid_t pid_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
};

}  // namespace rtdc
