#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rsclust/distance.hpp"
#include "rsclust/point_set.hpp"

namespace rsclust {

using NodeId = std::uint32_t;

// Where a root sits relative to the entities of the level below it:
// directly on one entity (special SCT) or at the midpoint of the two
// supporting nodes.
struct Placement {
  enum class Kind { AtEntity, Midpoint };
  Kind kind;
  NodeId a;
  NodeId b = 0;  // Midpoint only

  static Placement at(NodeId e) { return {Kind::AtEntity, e, 0}; }
  static Placement midpoint(NodeId x, NodeId y) {
    return {Kind::Midpoint, x, y};
  }
};

struct Root {
  NodeId id;
  Placement placement;
  int iteration;  // 1-based pass that created this root
};

// Multi-iteration clustering tree. Node ids 0..n_leaves-1 are data points;
// roots follow in creation order. parent[v] is the root directly above v,
// or -1 for a top-level node.
struct Dendrogram {
  std::size_t n_leaves = 0;
  std::vector<Root> roots;
  std::vector<std::int64_t> parent;
  int iterations = 0;

  std::size_t n_nodes() const { return n_leaves + roots.size(); }
  bool is_leaf(NodeId v) const { return v < n_leaves; }
  const Root& root_of(NodeId v) const { return roots[v - n_leaves]; }
  int iteration_of(NodeId v) const {
    return is_leaf(v) ? 0 : root_of(v).iteration;
  }
};

struct Partition {
  std::vector<std::uint32_t> labels;  // entity id -> dense cluster label
  std::uint32_t k = 0;

  std::size_t size() const { return labels.size(); }
};

// Renumbers arbitrary labels to 0..k-1 (first-seen order) and fills k.
Partition make_partition(std::vector<std::uint32_t> raw_labels);

enum class Mode { coordinate, metric_only };

struct RsConfig {
  double alpha = 1.5;
  std::uint64_t seed = 0;
  JitterConfig jitter{};
  Mode mode = Mode::coordinate;
  std::optional<int> max_iterations;
};

// One-level root distances. Placement ids index the PointSet / oracle of the
// level the placements refer to.
double root_distance_coordinate(const Placement& r1, const Placement& r2,
                                const PointSet& ps);

// Metric-only root distance from pairwise values alone:
//   (i)   point a vs point c:            |ac|
//   (ii)  midpoint(a,b) vs point c:      sqrt((|ac|^2+|bc|^2)/2 - |ab|^2/4)
//   (iii) midpoint(a,b) vs midpoint(c,d):
//         sqrt(|ac|^2+|ad|^2+|bc|^2+|bd|^2-|ab|^2-|cd|^2)/2
// Negative radicands (non-Euclidean input) clamp to 0. Throws
// InfiniteBaseDistance when a required base value is +inf.
double root_distance_metric(const Placement& r1, const Placement& r2,
                            const DistanceOracle& base);

// Full RS loop over coordinate data: construct SCTs, prune, replace each SCT
// by its root at the stated location, repeat on the roots.
Dendrogram cluster_points(const PointSet& ps, const RsConfig& cfg);

// Same loop driven purely by pairwise distances; root distances come from the
// three-case formulas and +inf propagates (graph mode stops when every
// inter-root distance is infinite).
Dendrogram cluster_metric(const DistanceOracle& base, const RsConfig& cfg);

// Flat clusters as of the end of pass t; t = 0 is all singletons.
Partition partition_at_iteration(const Dendrogram& d, int t);

}  // namespace rsclust
