#include "rsclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "rsclust/errors.hpp"

namespace rsclust {

PairCounts pair_counts(const Partition& x, const Partition& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw MismatchedEntities("pair_counts: partitions must cover the same entities, n >= 2");
  const std::uint64_t n = x.size();

  // Contingency table n_ij plus marginals.
  std::unordered_map<std::uint64_t, std::uint64_t> cells;
  std::vector<std::uint64_t> row(x.k, 0), col(y.k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    cells[static_cast<std::uint64_t>(x.labels[i]) << 32 | y.labels[i]]++;
    row[x.labels[i]]++;
    col[y.labels[i]]++;
  }
  auto choose2 = [](std::uint64_t v) { return v * (v - 1) / 2; };
  std::uint64_t sum_cells = 0, sum_row = 0, sum_col = 0;
  for (const auto& [key, v] : cells) sum_cells += choose2(v);
  for (auto v : row) sum_row += choose2(v);
  for (auto v : col) sum_col += choose2(v);

  PairCounts pc;
  pc.a = sum_cells;                       // same in x, same in y
  pc.c = sum_row - sum_cells;             // same in x, diff in y
  pc.d = sum_col - sum_cells;             // diff in x, same in y
  pc.b = choose2(n) - pc.a - pc.c - pc.d; // diff in both
  return pc;
}

double rand_index(const Partition& x, const Partition& y) {
  const PairCounts pc = pair_counts(x, y);
  return static_cast<double>(pc.a + pc.b) /
         static_cast<double>(pc.a + pc.b + pc.c + pc.d);
}

namespace {

struct ShortestPaths {
  std::vector<double> sigma;          // path counts
  std::vector<std::uint32_t> order;   // nodes in nondecreasing distance
  std::vector<std::vector<std::uint32_t>> preds;
};

ShortestPaths sssp(const Graph& g, std::uint32_t s, PathLength lengths) {
  const std::size_t n = g.n();
  ShortestPaths sp;
  sp.sigma.assign(n, 0.0);
  sp.preds.assign(n, {});
  sp.sigma[s] = 1.0;

  if (lengths == PathLength::hops) {
    std::vector<std::int64_t> dist(n, -1);
    dist[s] = 0;
    std::deque<std::uint32_t> queue{s};
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      sp.order.push_back(u);
      for (const auto& [v, w] : g.neighbors(u)) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
        if (dist[v] == dist[u] + 1) {
          sp.sigma[v] += sp.sigma[u];
          sp.preds[v].push_back(u);
        }
      }
    }
    return sp;
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<char> done(n, 0);
  dist[s] = 0.0;
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  heap.push({0.0, s});
  while (!heap.empty()) {
    const auto [du, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = 1;
    sp.order.push_back(u);
    for (const auto& [v, w] : g.neighbors(u)) {
      const double len = 1.0 / w;
      const double cand = du + len;
      const double tol = 1e-12 * std::max(1.0, std::abs(cand));
      if (cand < dist[v] - tol) {
        dist[v] = cand;
        sp.sigma[v] = sp.sigma[u];
        sp.preds[v] = {u};
        heap.push({cand, v});
      } else if (std::abs(cand - dist[v]) <= tol && !done[v]) {
        sp.sigma[v] += sp.sigma[u];
        sp.preds[v].push_back(u);
      }
    }
  }
  return sp;
}

}  // namespace

std::vector<double> betweenness_node(const Graph& g, PathLength lengths) {
  const std::size_t n = g.n();
  std::vector<double> bc(n, 0.0);
  std::vector<double> delta(n);
  for (std::uint32_t s = 0; s < n; ++s) {
    const auto sp = sssp(g, s, lengths);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto it = sp.order.rbegin(); it != sp.order.rend(); ++it) {
      const auto w = *it;
      for (auto v : sp.preds[w])
        delta[v] += sp.sigma[v] / sp.sigma[w] * (1.0 + delta[w]);
      if (w != s) bc[w] += delta[w];
    }
  }
  // Each unordered {s,t} pair was visited from both endpoints.
  for (auto& v : bc) v /= 2.0;
  return bc;
}

std::vector<double> betweenness_edge(const Graph& g, PathLength lengths) {
  const std::size_t n = g.n();
  std::unordered_map<std::uint64_t, std::size_t> edge_index;
  edge_index.reserve(g.m());
  for (std::size_t e = 0; e < g.m(); ++e) {
    const auto& ed = g.edges()[e];
    edge_index[static_cast<std::uint64_t>(ed.u) * n + ed.v] = e;
  }
  auto index_of = [&](std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return edge_index.at(static_cast<std::uint64_t>(a) * n + b);
  };

  std::vector<double> eb(g.m(), 0.0);
  std::vector<double> delta(n);
  for (std::uint32_t s = 0; s < n; ++s) {
    const auto sp = sssp(g, s, lengths);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto it = sp.order.rbegin(); it != sp.order.rend(); ++it) {
      const auto w = *it;
      for (auto v : sp.preds[w]) {
        const double c = sp.sigma[v] / sp.sigma[w] * (1.0 + delta[w]);
        eb[index_of(v, w)] += c;
        delta[v] += c;
      }
    }
  }
  for (auto& v : eb) v /= 2.0;
  return eb;
}

double tpr(const Graph& g, const Partition& p) {
  const std::size_t n = g.n();
  if (p.size() != n)
    throw MismatchedEntities("tpr: partition does not cover the graph");

  std::unordered_set<std::uint64_t> adj;
  adj.reserve(2 * g.m());
  for (const auto& e : g.edges())
    adj.insert(static_cast<std::uint64_t>(e.u) * n + e.v);
  auto adjacent = [&](std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return adj.count(static_cast<std::uint64_t>(a) * n + b) > 0;
  };

  std::vector<std::uint64_t> comm_size(p.k, 0), in_triangle(p.k, 0);
  for (std::uint32_t u = 0; u < n; ++u) {
    const auto label = p.labels[u];
    ++comm_size[label];
    const auto& nbrs = g.neighbors(u);
    bool found = false;
    for (std::size_t i = 0; i < nbrs.size() && !found; ++i) {
      const auto v = nbrs[i].first;
      if (p.labels[v] != label) continue;
      for (std::size_t j = i + 1; j < nbrs.size() && !found; ++j) {
        const auto w = nbrs[j].first;
        if (p.labels[w] == label && adjacent(v, w)) found = true;
      }
    }
    if (found) ++in_triangle[label];
  }

  double sum = 0.0;
  for (std::uint32_t c = 0; c < p.k; ++c)
    sum += static_cast<double>(in_triangle[c]) / static_cast<double>(comm_size[c]);
  return sum / static_cast<double>(p.k);
}

}  // namespace rsclust
