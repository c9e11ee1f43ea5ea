#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rsclust/distance.hpp"
#include "rsclust/graph.hpp"
#include "rsclust/hierarchy.hpp"
#include "rsclust/point_set.hpp"

namespace rsclust {

// Comma-separated numeric rows, one point per row. label_col picks a column
// holding ground-truth class ids (-1 = last); label values may be arbitrary
// strings and are mapped to dense ints. A first row whose coordinate fields
// fail to parse is treated as a header.
PointSet load_points(const std::string& path,
                     std::optional<int> label_col = std::nullopt);

struct LoadedGraph {
  Graph graph;
  std::vector<std::string> names;  // dense index -> original node id
  std::size_t duplicates = 0;      // collapsed repeat edges (first weight kept)
};

// Whitespace-separated "u v [w]" lines; '#' starts a comment.
LoadedGraph load_graph(const std::string& path);

std::shared_ptr<const DistanceOracle> load_distance_matrix(
    const std::string& path);

// Tree document: {leaves, iterations, roots: [{id, iteration, placement}],
// edges: [{child, parent}]}.
std::string dendrogram_to_json(const Dendrogram& d);
Dendrogram dendrogram_from_json(const std::string& text);

std::string dendrogram_to_newick(const Dendrogram& d);

// Two columns "entity_id,cluster_label", header required.
void write_partition_csv(const std::string& path, const Partition& p,
                         const std::vector<std::string>* names = nullptr);

struct PartitionFile {
  std::vector<std::string> entities;
  std::vector<std::string> labels;
};

PartitionFile read_partition_csv(const std::string& path);

// Joins two partition files on entity id; throws MismatchedEntities when the
// id sets differ.
std::pair<Partition, Partition> align_partitions(const PartitionFile& x,
                                                 const PartitionFile& y);

}  // namespace rsclust
