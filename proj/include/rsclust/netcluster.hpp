#pragma once

#include <Eigen/Dense>

#include "rsclust/distance.hpp"
#include "rsclust/graph.hpp"
#include "rsclust/hierarchy.hpp"
#include "rsclust/metrics.hpp"

namespace rsclust {

// L = D - A with (weighted) degrees on the diagonal.
Eigen::MatrixXd laplacian(const Graph& g);

// Moore-Penrose inverse of a connected-graph Laplacian, via
// (L + J/n)^-1 - J/n. Throws DisconnectedGraph when L has more than one
// zero eigenvalue (more than one component).
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& L);

// Commute-time distance oracle: adjacent pairs get
// sqrt(V_G * (l+_ii + l+_jj - 2 l+_ij)), disadjacent pairs +inf.
// Disconnected graphs are handled per component (V_G per component).
std::shared_ptr<const DistanceOracle> commute_distance(const Graph& g);

// RS in metric-only mode over commute distances, stopping when every
// inter-root distance is infinite, followed by absorb_small.
Partition detect_communities(const Graph& g, const RsConfig& cfg);

// Dissolves communities of size < 3 node-by-node into the nearest community
// of size >= 3 (eligibility frozen before any absorption); nodes with no
// finite distance to an eligible community stay on their own.
Partition absorb_small(const Graph& g, const Partition& p,
                       const DistanceOracle& d);

struct CommunitySeries {
  Partition initial;
  std::vector<std::pair<Edge, Partition>> merges;
};

// Repeatedly merges the two communities bridged by the inter-community edge
// of smallest betweenness (recomputed each step; ties by edge id order).
CommunitySeries resolution_scan(const Graph& g, const Partition& p);

struct GnResult {
  std::vector<Edge> removals;        // every edge, in removal order
  std::vector<Partition> partitions; // recorded when the component count grows
};

// Divisive baseline: remove the max-betweenness edge (ties by edge id),
// recompute, record the component partition whenever the count grows.
GnResult girvan_newman(const Graph& g);

}  // namespace rsclust
