#include "rsclust/netcluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <vector>

#include "rsclust/errors.hpp"

namespace rsclust {

Eigen::MatrixXd laplacian(const Graph& g) {
  if (g.n() == 0) throw Error("laplacian: empty graph");
  const auto n = static_cast<Eigen::Index>(g.n());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    L(e.u, e.u) += e.w;
    L(e.v, e.v) += e.w;
    L(e.u, e.v) -= e.w;
    L(e.v, e.u) -= e.w;
  }
  return L;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& L) {
  const Eigen::Index n = L.rows();
  if (n == 0 || L.cols() != n) throw Error("pseudo_inverse: not square");

  // A Laplacian of a connected graph loses exactly one pivot; a second
  // near-zero pivot means more than one component.
  const double tol = 1e-10 * std::max(L.norm(), 1.0);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(L);
  const auto pivots = ldlt.vectorD();
  Eigen::Index deficient = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(pivots(i)) <= tol) ++deficient;
  if (deficient > 1)
    throw DisconnectedGraph("pseudo_inverse: Laplacian has more than one zero pivot");

  const Eigen::MatrixXd J =
      Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  return (L + J).inverse() - J;
}

std::shared_ptr<const DistanceOracle> commute_distance(const Graph& g) {
  const std::size_t n = g.n();
  if (n == 0) throw Error("commute_distance: empty graph");
  const auto comp = connected_components(g);
  const std::uint32_t n_comp = *std::max_element(comp.begin(), comp.end()) + 1;

  std::vector<std::vector<std::uint32_t>> members(n_comp);
  for (std::uint32_t v = 0; v < n; ++v) members[comp[v]].push_back(v);

  std::vector<double> table(n * n, kInf);
  for (std::size_t i = 0; i < n; ++i) table[i * n + i] = 0.0;

  for (std::uint32_t c = 0; c < n_comp; ++c) {
    const auto& nodes = members[c];
    std::vector<std::uint32_t> local(n, 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = i;

    const auto ln = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(ln, ln);
    double volume = 0.0;
    for (auto v : nodes) volume += g.strength(v);
    for (const auto& e : g.edges()) {
      if (comp[e.u] != c) continue;
      const auto lu = local[e.u], lv = local[e.v];
      L(lu, lu) += e.w;
      L(lv, lv) += e.w;
      L(lu, lv) -= e.w;
      L(lv, lu) -= e.w;
    }
    const Eigen::MatrixXd M = pseudo_inverse(L);
    for (const auto& e : g.edges()) {
      if (comp[e.u] != c) continue;
      const auto lu = local[e.u], lv = local[e.v];
      const double resistance =
          std::max(M(lu, lu) + M(lv, lv) - 2.0 * M(lu, lv), 0.0);
      const double dist = std::sqrt(volume * resistance);
      table[static_cast<std::size_t>(e.u) * n + e.v] = dist;
      table[static_cast<std::size_t>(e.v) * n + e.u] = dist;
    }
  }
  return matrix_oracle(std::move(table), n);
}

Partition absorb_small(const Graph& g, const Partition& p,
                       const DistanceOracle& d) {
  if (p.size() != g.n())
    throw MismatchedEntities("absorb_small: partition does not cover the graph");
  std::vector<std::uint64_t> sizes(p.k, 0);
  for (auto label : p.labels) ++sizes[label];

  // Eligible targets and their membership are frozen at stop time.
  std::vector<char> eligible(p.k, 0);
  for (std::uint32_t c = 0; c < p.k; ++c) eligible[c] = sizes[c] >= 3;
  std::vector<std::vector<std::uint32_t>> frozen(p.k);
  for (std::uint32_t v = 0; v < p.size(); ++v)
    if (eligible[p.labels[v]]) frozen[p.labels[v]].push_back(v);

  std::vector<std::uint32_t> labels = p.labels;
  for (std::uint32_t v = 0; v < p.size(); ++v) {
    if (eligible[p.labels[v]]) continue;
    double best = kInf;
    std::int64_t target = -1;
    for (std::uint32_t c = 0; c < p.k; ++c) {
      if (!eligible[c]) continue;
      for (auto j : frozen[c]) {
        const double dist = d(v, j);
        if (dist < best) {
          best = dist;
          target = c;
        }
      }
    }
    if (target >= 0) labels[v] = static_cast<std::uint32_t>(target);
    // otherwise the node keeps its original (small) community
  }
  return make_partition(std::move(labels));
}

Partition detect_communities(const Graph& g, const RsConfig& cfg) {
  const auto oracle = commute_distance(g);
  RsConfig metric_cfg = cfg;
  metric_cfg.mode = Mode::metric_only;
  const Dendrogram dend = cluster_metric(*oracle, metric_cfg);
  const Partition p = partition_at_iteration(dend, dend.iterations);
  return absorb_small(g, p, *oracle);
}

namespace {

// Smallest (largest) betweenness among the given edge indices; ties by the
// (u, v) order of the edge itself.
std::int64_t select_edge(const Graph& g, const std::vector<double>& eb,
                         const std::vector<std::size_t>& candidates,
                         bool smallest) {
  std::int64_t best = -1;
  for (auto e : candidates) {
    if (best < 0) {
      best = static_cast<std::int64_t>(e);
      continue;
    }
    const auto& cur = g.edges()[e];
    const auto& sel = g.edges()[best];
    const auto cur_key = std::make_tuple(eb[e], cur.u, cur.v);
    const auto sel_key = std::make_tuple(eb[best], sel.u, sel.v);
    const bool better = smallest ? cur_key < sel_key
                                 : eb[e] > eb[best] ||
                                       (eb[e] == eb[best] &&
                                        std::make_tuple(cur.u, cur.v) <
                                            std::make_tuple(sel.u, sel.v));
    if (better) best = static_cast<std::int64_t>(e);
  }
  return best;
}

}  // namespace

CommunitySeries resolution_scan(const Graph& g, const Partition& p) {
  if (p.size() != g.n())
    throw MismatchedEntities("resolution_scan: partition does not cover the graph");
  CommunitySeries series;
  series.initial = make_partition(p.labels);

  std::vector<std::uint32_t> labels = series.initial.labels;
  while (true) {
    const auto eb = betweenness_edge(g);
    std::vector<std::size_t> inter;
    for (std::size_t e = 0; e < g.m(); ++e) {
      const auto& ed = g.edges()[e];
      if (labels[ed.u] != labels[ed.v]) inter.push_back(e);
    }
    if (inter.empty()) break;
    const auto pick = select_edge(g, eb, inter, /*smallest=*/true);
    const auto& ed = g.edges()[pick];
    const auto from = labels[ed.v];
    const auto into = labels[ed.u];
    for (auto& label : labels)
      if (label == from) label = into;
    series.merges.emplace_back(ed, make_partition(labels));
  }
  return series;
}

GnResult girvan_newman(const Graph& g) {
  if (g.n() == 0) throw Error("girvan_newman: empty graph");
  GnResult result;
  std::vector<Edge> active = g.edges();

  auto components_of = [&](const std::vector<Edge>& edges) {
    return make_partition(connected_components(Graph(g.n(), edges)));
  };
  std::uint32_t last_k = components_of(active).k;

  while (!active.empty()) {
    const Graph current(g.n(), active);
    const auto eb = betweenness_edge(current);
    std::vector<std::size_t> all(current.m());
    for (std::size_t e = 0; e < current.m(); ++e) all[e] = e;
    const auto pick = select_edge(current, eb, all, /*smallest=*/false);
    result.removals.push_back(current.edges()[pick]);
    active.erase(active.begin() + pick);

    const Partition p = components_of(active);
    if (p.k > last_k) {
      result.partitions.push_back(p);
      last_k = p.k;
    }
  }
  return result;
}

}  // namespace rsclust
