#include "rtdc/encode.hpp"

#include <cmath>
#include <stdexcept>

namespace rtdc {

namespace {

struct RawEdge {
  int from;
  int to;
  int type;                 // kEdgeConstraint / kEdgeMembership / kEdgeContingency
  int role = -1;            // kEdgeLower / kEdgeUpper, -1 for membership
  TimeValue value{0};
};

class Builder {
public:
  Builder(const Dtnu& dtnu, const DtnuState* state) : dtnu_(dtnu), state_(state) {
    now_ = state ? state->now : TimeValue(0);
    node_of_.assign(dtnu.size(), -1);
    for (std::size_t i = 0; i < dtnu.size(); ++i) {
      const TimepointRef r{static_cast<std::uint32_t>(i)};
      if (executed(r)) continue;
      node_of_[i] = add_node(dtnu.is_controllable(r) ? GraphNodeKind::controllable : GraphNodeKind::uncontrollable,
                             dtnu.id(r));
      if (dtnu.is_controllable(r)) active_.push_back(node_of_[i]);
    }
    wait_ = add_node(GraphNodeKind::wait, "wait");
    active_.push_back(wait_);
  }

  EncodedGraph build() {
    const auto& constraints = state_ ? state_->constraints : dtnu_.constraints();
    for (const auto& d : constraints) add_disjunct(d);
    for (const auto& link : dtnu_.links()) add_link(link);
    if (state_)
      for (const auto& [u, windows] : state_->activated) add_windows(u, windows);
    return finish();
  }

private:
  bool executed(TimepointRef r) const { return state_ && state_->executed(r); }

  int add_node(GraphNodeKind kind, std::string label) {
    kinds_.push_back(kind);
    labels_.push_back(std::move(label));
    return static_cast<int>(kinds_.size()) - 1;
  }

  int node(TimepointRef r) const { return node_of_[r.value]; }

  // v - from in [lo, hi]: upper edge from -> v carries hi, lower edge v -> from carries -lo.
  void bound_edges(int from, int v, const Interval& iv, int type) {
    edges_.push_back({from, v, type, kEdgeUpper, iv.hi()});
    edges_.push_back({v, from, type, kEdgeLower, -iv.lo()});
  }

  void add_disjunct(const Disjunct& d) {
    std::vector<const Conjunct*> open;
    for (const auto& c : d.conjuncts)
      if (c.is_open()) open.push_back(&c);
    if (open.empty()) return;
    const int hub = open.size() >= 2 ? add_node(GraphNodeKind::intermediary, "or" + std::to_string(hubs_++)) : -1;
    for (const Conjunct* c : open) {
      const int v = node(c->v);
      const int from = c->is_unary() ? wait_ : node(c->vi);
      if (v < 0 || from < 0) continue;
      const Interval iv = c->is_unary() ? c->iv.shifted(-now_) : c->iv;
      bound_edges(from, v, iv, kEdgeConstraint);
      if (hub >= 0) {
        membership(hub, v);
        if (from != wait_) membership(hub, from);
      }
    }
  }

  void membership(int hub, int v) {
    edges_.push_back({hub, v, kEdgeMembership});
    edges_.push_back({v, hub, kEdgeMembership});
  }

  void add_link(const ContingencyLink& link) {
    if (executed(link.trigger) || executed(link.target)) return;
    const int a = node(link.trigger);
    const int u = node(link.target);
    const int hub = link.intervals.size() >= 2 ? add_node(GraphNodeKind::intermediary, "or" + std::to_string(hubs_++)) : -1;
    for (const auto& iv : link.intervals) bound_edges(a, u, iv, kEdgeContingency);
    if (hub >= 0) {
      membership(hub, a);
      membership(hub, u);
    }
  }

  void add_windows(TimepointRef r, const std::vector<Interval>& windows) {
    const int u = node(r);
    if (u < 0) return;
    const int hub = windows.size() >= 2 ? add_node(GraphNodeKind::intermediary, "or" + std::to_string(hubs_++)) : -1;
    for (const auto& w : windows) bound_edges(wait_, u, w.shifted(-now_), kEdgeContingency);
    if (hub >= 0) membership(hub, u);
  }

  EncodedGraph finish() {
    EncodedGraph g;
    TimeValue d_max(0);
    for (const auto& e : edges_) {
      if (e.role < 0 || !e.value.is_finite()) continue;
      const TimeValue mag = e.value < TimeValue(0) ? -e.value : e.value;
      if (d_max < mag) d_max = mag;
    }
    g.degenerate = d_max == TimeValue(0);
    g.d_max = g.degenerate ? 1.0 : d_max.to_double();

    const int n = static_cast<int>(kinds_.size());
    g.node_features = Eigen::MatrixXf::Zero(n, kNodeFeatures);
    for (int i = 0; i < n; ++i) g.node_features(i, static_cast<int>(kinds_[i])) = 1.0f;
    g.adjacency = Eigen::MatrixXf::Zero(n, n);
    g.edge_features = Eigen::MatrixXf::Zero(static_cast<Eigen::Index>(edges_.size()), kEdgeFeatures);
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      const auto& e = edges_[k];
      const auto row = static_cast<Eigen::Index>(k);
      g.edges.emplace_back(e.from, e.to);
      g.adjacency(e.from, e.to) = 1.0f;
      g.edge_features(row, e.type) = 1.0f;
      if (e.role < 0) continue;
      g.edge_features(row, e.role) = 1.0f;
      int cls = kDistanceClasses - 1;
      if (e.value.is_finite()) {
        const double mag = std::abs(e.value.to_double()) / g.d_max;
        cls = distance_class(std::min(mag, 1.0));
      }
      g.edge_features(row, cls) = 1.0f;
      if (e.value < TimeValue(0)) g.edge_features(row, kEdgeNegative) = 1.0f;
    }
    g.kinds = std::move(kinds_);
    g.labels = std::move(labels_);
    g.active_nodes = std::move(active_);
    return g;
  }

  const Dtnu& dtnu_;
  const DtnuState* state_;
  TimeValue now_;
  std::vector<int> node_of_;
  std::vector<GraphNodeKind> kinds_;
  std::vector<std::string> labels_;
  std::vector<int> active_;
  std::vector<RawEdge> edges_;
  int wait_ = -1;
  int hubs_ = 0;
};

const char* kind_name(GraphNodeKind k) {
  switch (k) {
    case GraphNodeKind::controllable: return "controllable";
    case GraphNodeKind::uncontrollable: return "uncontrollable";
    case GraphNodeKind::intermediary: return "intermediary";
    case GraphNodeKind::wait: return "wait";
  }
  return "?";
}

}  // namespace

int distance_class(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::out_of_range("distance_class expects a value in [0, 1]");
  return std::min(static_cast<int>(std::floor(x * kDistanceClasses)), kDistanceClasses - 1);
}

EncodedGraph to_graph(const Dtnu& dtnu) { return Builder(dtnu, nullptr).build(); }

EncodedGraph to_graph(const Dtnu& dtnu, const DtnuState& state) { return Builder(dtnu, &state).build(); }

nlohmann::json to_json(const EncodedGraph& g) {
  nlohmann::json j;
  j["layout"] = kGraphLayout;
  j["num_nodes"] = g.num_nodes();
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (int i = 0; i < g.num_nodes(); ++i) {
    std::vector<int> f(kNodeFeatures);
    for (int k = 0; k < kNodeFeatures; ++k) f[k] = static_cast<int>(g.node_features(i, k));
    nodes.push_back({{"label", g.labels[i]}, {"kind", kind_name(g.kinds[i])}, {"features", f}});
  }
  auto& edges = j["edges"] = nlohmann::json::array();
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    std::vector<int> f(kEdgeFeatures);
    for (int c = 0; c < kEdgeFeatures; ++c) f[c] = static_cast<int>(g.edge_features(static_cast<Eigen::Index>(k), c));
    edges.push_back({{"from", g.edges[k].first}, {"to", g.edges[k].second}, {"features", f}});
  }
  j["active"] = g.active_nodes;
  j["d_max"] = g.d_max;
  j["degenerate"] = g.degenerate;
  return j;
}

}  // namespace rtdc
