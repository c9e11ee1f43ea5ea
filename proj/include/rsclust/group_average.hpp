#pragma once

#include <cstdint>
#include <vector>

#include "rsclust/distance.hpp"
#include "rsclust/hierarchy.hpp"

namespace rsclust {

struct Merge {
  std::uint32_t left;   // surviving cluster id (an original entity index)
  std::uint32_t right;  // absorbed cluster id
  double distance;      // average-linkage value at merge time
  int step;
};

// Full agglomeration: n-1 merges, always picking the cluster pair with the
// minimum mean inter-cluster distance. Lance-Williams updates over a
// condensed matrix with a lazily validated candidate heap. Ties break by the
// lexicographically smallest cluster-id pair.
std::vector<Merge> group_average_merges(const DistanceOracle& oracle);

// Partition after applying the first n-k merges.
Partition cut_merges(const std::vector<Merge>& merges, std::size_t n,
                     std::size_t k);

Partition group_average(const DistanceOracle& oracle, std::size_t k);

}  // namespace rsclust
