#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rsclust/errors.hpp"

namespace rsclust {

struct Edge {
  std::uint32_t u;
  std::uint32_t v;
  double w = 1.0;
};

// Undirected simple graph; edges stored once with u < v.
class Graph {
 public:
  Graph(std::size_t n, std::vector<Edge> edges) : n_(n) {
    adj_.resize(n);
    edges_.reserve(edges.size());
    for (auto e : edges) {
      if (e.u == e.v) throw SelfLoop("Graph: self-loop");
      if (!(e.w > 0.0)) throw NonPositiveWeight("Graph: edge weight <= 0");
      if (e.u >= n || e.v >= n) throw Error("Graph: endpoint out of range");
      if (e.u > e.v) std::swap(e.u, e.v);
      edges_.push_back(e);
      adj_[e.u].push_back({e.v, e.w});
      adj_[e.v].push_back({e.u, e.w});
    }
  }

  std::size_t n() const { return n_; }
  std::size_t m() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::pair<std::uint32_t, double>>& neighbors(
      std::uint32_t v) const {
    return adj_[v];
  }

  double strength(std::uint32_t v) const {
    double s = 0.0;
    for (const auto& [u, w] : adj_[v]) s += w;
    return s;
  }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj_;
};

// Connected-component label per node, labels dense from 0.
std::vector<std::uint32_t> connected_components(const Graph& g);

}  // namespace rsclust
