#pragma once

#include <map>
#include <utility>
#include <vector>

#include "rsclust/graph.hpp"
#include "rsclust/hierarchy.hpp"

namespace rsclust {

struct PairCounts {
  // same/same, diff/diff, same/diff, diff/same
  std::uint64_t a = 0, b = 0, c = 0, d = 0;
};

// Pair-agreement counts between two partitions over the same entities,
// computed from the k_x * k_y contingency table.
PairCounts pair_counts(const Partition& x, const Partition& y);

// (a + b) / (a + b + c + d).
double rand_index(const Partition& x, const Partition& y);

enum class PathLength {
  hops,            // unweighted shortest paths (default; matches GN usage)
  inverse_weight,  // edge length 1/w
};

// Fractional shortest-path load per node, summed over unordered {s,t} pairs.
std::vector<double> betweenness_node(const Graph& g,
                                     PathLength lengths = PathLength::hops);

// Same for edges, keyed like g.edges() (index-aligned).
std::vector<double> betweenness_edge(const Graph& g,
                                     PathLength lengths = PathLength::hops);

// Mean over communities of the fraction of members sitting in an
// intra-community triangle.
double tpr(const Graph& g, const Partition& p);

}  // namespace rsclust
