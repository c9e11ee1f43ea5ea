// Test-only reference implementations, kept independent of the library code
// paths they validate.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "rsclust/distance.hpp"
#include "rsclust/graph.hpp"
#include "rsclust/hierarchy.hpp"
#include "rsclust/sct.hpp"

namespace oracles {

// Nearest neighbor by exhaustive scan.
inline std::int64_t brute_nn(const rsclust::DistanceOracle& d, std::size_t i) {
  std::int64_t best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (j == i) continue;
    if (d(i, j) < best_d) {
      best_d = d(i, j);
      best = static_cast<std::int64_t>(j);
    }
  }
  return best;
}

// All-pairs hop distances over the SCT edge set (parent links plus the
// supporting edge), by repeated relaxation.
inline std::map<std::pair<rsclust::EntityId, rsclust::EntityId>, int>
sct_hop_distances(const rsclust::Sct& sct) {
  std::vector<rsclust::EntityId> nodes = sct.members;
  std::vector<std::pair<rsclust::EntityId, rsclust::EntityId>> edges;
  for (const auto& [c, p] : sct.parent) edges.push_back({c, p});
  if (sct.supporting)
    edges.push_back({sct.supporting->first, sct.supporting->second});

  const int inf = 1 << 20;
  std::map<std::pair<rsclust::EntityId, rsclust::EntityId>, int> dist;
  for (auto u : nodes)
    for (auto v : nodes) dist[{u, v}] = u == v ? 0 : inf;
  for (auto [u, v] : edges) {
    dist[{u, v}] = 1;
    dist[{v, u}] = 1;
  }
  for (std::size_t k = 0; k < nodes.size(); ++k)  // Floyd-Warshall
    for (auto u : nodes)
      for (auto v : nodes)
        dist[{u, v}] = std::min(dist[{u, v}],
                                dist[{u, nodes[k]}] + dist[{nodes[k], v}]);
  return dist;
}

// Rand index by explicit pair enumeration.
inline double rand_by_pairs(const rsclust::Partition& x,
                            const rsclust::Partition& y) {
  std::uint64_t agree = 0, total = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const bool same_x = x.labels[i] == x.labels[j];
      const bool same_y = y.labels[i] == y.labels[j];
      if (same_x == same_y) ++agree;
      ++total;
    }
  return static_cast<double>(agree) / static_cast<double>(total);
}

// Shortest-path counts by exhaustive simple-path enumeration (tiny graphs).
struct PathCensus {
  int shortest = 1 << 20;
  std::vector<std::vector<std::uint32_t>> paths;  // all shortest s-t paths
};

inline PathCensus enumerate_paths(const rsclust::Graph& g, std::uint32_t s,
                                  std::uint32_t t) {
  PathCensus census;
  std::vector<std::uint32_t> path{s};
  std::vector<char> used(g.n(), 0);
  used[s] = 1;
  auto dfs = [&](auto&& self, std::uint32_t u) -> void {
    if (u == t) {
      const int len = static_cast<int>(path.size()) - 1;
      if (len < census.shortest) {
        census.shortest = len;
        census.paths.clear();
      }
      if (len == census.shortest) census.paths.push_back(path);
      return;
    }
    for (const auto& [v, w] : g.neighbors(u)) {
      if (used[v]) continue;
      used[v] = 1;
      path.push_back(v);
      self(self, v);
      path.pop_back();
      used[v] = 0;
    }
  };
  dfs(dfs, s);
  return census;
}

inline std::vector<double> node_betweenness_by_enumeration(
    const rsclust::Graph& g) {
  std::vector<double> bc(g.n(), 0.0);
  for (std::uint32_t s = 0; s < g.n(); ++s)
    for (std::uint32_t t = s + 1; t < g.n(); ++t) {
      const auto census = enumerate_paths(g, s, t);
      if (census.paths.empty()) continue;
      for (const auto& path : census.paths)
        for (std::size_t k = 1; k + 1 < path.size(); ++k)
          bc[path[k]] += 1.0 / static_cast<double>(census.paths.size());
    }
  return bc;
}

inline std::vector<double> edge_betweenness_by_enumeration(
    const rsclust::Graph& g) {
  std::vector<double> eb(g.m(), 0.0);
  auto edge_idx = [&](std::uint32_t a, std::uint32_t b) -> std::size_t {
    if (a > b) std::swap(a, b);
    for (std::size_t e = 0; e < g.m(); ++e)
      if (g.edges()[e].u == a && g.edges()[e].v == b) return e;
    return g.m();
  };
  for (std::uint32_t s = 0; s < g.n(); ++s)
    for (std::uint32_t t = s + 1; t < g.n(); ++t) {
      const auto census = enumerate_paths(g, s, t);
      if (census.paths.empty()) continue;
      for (const auto& path : census.paths)
        for (std::size_t k = 0; k + 1 < path.size(); ++k)
          eb[edge_idx(path[k], path[k + 1])] +=
              1.0 / static_cast<double>(census.paths.size());
    }
  return eb;
}

// Mean cross-pair distance between two point groups.
inline double mean_linkage(const rsclust::DistanceOracle& d,
                           const std::vector<std::uint32_t>& a,
                           const std::vector<std::uint32_t>& b) {
  double sum = 0.0;
  for (auto i : a)
    for (auto j : b) sum += d(i, j);
  return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

inline rsclust::PointSet random_points(std::size_t n, std::size_t dim,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::vector<double> coords(n * dim);
  for (auto& c : coords) c = coord(rng);
  return rsclust::PointSet(std::move(coords), dim);
}

inline rsclust::Partition random_partition(std::size_t n, std::uint32_t k_max,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> label(0, k_max - 1);
  std::vector<std::uint32_t> raw(n);
  for (auto& l : raw) l = label(rng);
  return rsclust::make_partition(std::move(raw));
}

// Random connected graph: a random spanning tree plus extra random edges.
inline rsclust::Graph random_connected_graph(std::size_t n, std::size_t extra,
                                             std::uint64_t seed,
                                             bool weighted = false) {
  std::mt19937_64 rng(seed);
  std::vector<rsclust::Edge> edges;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  std::uniform_real_distribution<double> weight(0.5, 3.0);
  auto w = [&]() { return weighted ? weight(rng) : 1.0; };
  for (std::uint32_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::uint32_t> pick(0, v - 1);
    const auto u = pick(rng);
    edges.push_back({u, v, w()});
    seen.insert({u, v});
  }
  std::uniform_int_distribution<std::uint32_t> any(0, static_cast<std::uint32_t>(n - 1));
  for (std::size_t e = 0; e < extra; ++e) {
    const auto a = any(rng), b = any(rng);
    const auto key = std::minmax(a, b);
    if (a == b || seen.count(key)) continue;
    seen.insert(key);
    edges.push_back({key.first, key.second, w()});
  }
  return rsclust::Graph(n, std::move(edges));
}

}  // namespace oracles
