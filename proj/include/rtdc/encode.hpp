#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "rtdc/dtnu.hpp"
#include "rtdc/search_tree.hpp"

namespace rtdc {

inline constexpr const char* kGraphLayout = "rtdc-graph-v1";
inline constexpr int kDistanceClasses = 10;
inline constexpr int kNodeFeatures = 4;
inline constexpr int kEdgeFeatures = 16;

enum class GraphNodeKind : std::uint8_t { controllable, uncontrollable, intermediary, wait };

// Edge feature slots.
inline constexpr int kEdgeConstraint = 10;
inline constexpr int kEdgeMembership = 11;
inline constexpr int kEdgeContingency = 12;
inline constexpr int kEdgeLower = 13;
inline constexpr int kEdgeUpper = 14;
inline constexpr int kEdgeNegative = 15;

/// Relative, normalized graph view of a DTNU (or of a search node's residual
/// problem). Node features are one-hot kinds; edges are listed as (from, to)
/// pairs with one edge_features row each.
struct EncodedGraph {
  Eigen::MatrixXf node_features;   // nodes x kNodeFeatures
  Eigen::MatrixXf adjacency;       // nodes x nodes, 1 where an edge exists
  Eigen::MatrixXf edge_features;   // edges x kEdgeFeatures
  std::vector<std::pair<int, int>> edges;
  std::vector<GraphNodeKind> kinds;
  std::vector<std::string> labels;
  std::vector<int> active_nodes;   // remaining controllables, then the wait node
  double d_max = 1.0;
  bool degenerate = false;          // no finite time value; d_max forced to 1

  int num_nodes() const { return static_cast<int>(kinds.size()); }
  int wait_node() const { return active_nodes.back(); }
};

/// floor(10 x) clamped to 9; throws std::out_of_range outside [0, 1].
int distance_class(double x);

EncodedGraph to_graph(const Dtnu& dtnu);
EncodedGraph to_graph(const Dtnu& dtnu, const DtnuState& state);

nlohmann::json to_json(const EncodedGraph& g);

}  // namespace rtdc
