#include "rsclust/hierarchy.hpp"

#include <cmath>
#include <memory>
#include <unordered_map>

#include "rsclust/errors.hpp"
#include "rsclust/sct.hpp"

namespace rsclust {

namespace {

// Non-owning view over a dense row-major distance table.
class DenseView final : public DistanceOracle {
 public:
  DenseView(const double* values, std::size_t n) : values_(values), n_(n) {}
  std::size_t size() const override { return n_; }
  double operator()(std::size_t i, std::size_t j) const override {
    return values_[i * n_ + j];
  }

 private:
  const double* values_;
  std::size_t n_;
};

// Metric root distance with +inf propagation instead of throwing.
double placement_distance(const Placement& r1, const Placement& r2,
                          const DistanceOracle& d) {
  const bool m1 = r1.kind == Placement::Kind::Midpoint;
  const bool m2 = r2.kind == Placement::Kind::Midpoint;
  if (!m1 && !m2) return d(r1.a, r2.a);
  if (m1 != m2) {
    const auto& mid = m1 ? r1 : r2;
    const NodeId c = m1 ? r2.a : r1.a;
    const double ac = d(mid.a, c), bc = d(mid.b, c), ab = d(mid.a, mid.b);
    if (!std::isfinite(ac) || !std::isfinite(bc) || !std::isfinite(ab))
      return kInf;
    const double rad = (ac * ac + bc * bc) / 2.0 - ab * ab / 4.0;
    return std::sqrt(std::max(rad, 0.0));
  }
  const double ac = d(r1.a, r2.a), ad = d(r1.a, r2.b);
  const double bc = d(r1.b, r2.a), bd = d(r1.b, r2.b);
  const double ab = d(r1.a, r1.b), cd = d(r2.a, r2.b);
  if (!std::isfinite(ac) || !std::isfinite(ad) || !std::isfinite(bc) ||
      !std::isfinite(bd) || !std::isfinite(ab) || !std::isfinite(cd))
    return kInf;
  const double rad =
      ac * ac + ad * ad + bc * bc + bd * bd - ab * ab - cd * cd;
  return 0.5 * std::sqrt(std::max(rad, 0.0));
}

struct PassResult {
  std::vector<Placement> new_roots;   // placements in previous-level indices
  std::vector<std::uint32_t> assign;  // old unit -> index into new_roots
  bool merged_any = false;
};

PassResult run_pass(std::size_t m, const DistanceOracle& jittered,
                    std::uint64_t sct_seed, double alpha,
                    IsolatedPolicy isolated) {
  PassResult pass;
  pass.assign.assign(m, 0);
  const auto forest =
      construct_scts(m, jittered, sct_seed, isolated);
  for (const auto& sct : forest) {
    if (sct.is_special()) {
      const auto idx = static_cast<std::uint32_t>(pass.new_roots.size());
      pass.new_roots.push_back(Placement::at(sct.members[0]));
      pass.assign[sct.members[0]] = idx;
      continue;
    }
    auto pruned = prune(sct, alpha);
    const auto [p, q] = *pruned.trimmed.supporting;
    const auto idx = static_cast<std::uint32_t>(pass.new_roots.size());
    pass.new_roots.push_back(Placement::midpoint(p, q));
    for (EntityId e : pruned.trimmed.members) pass.assign[e] = idx;
    pass.merged_any = true;
    for (const auto& single : pruned.singletons) {
      const auto sidx = static_cast<std::uint32_t>(pass.new_roots.size());
      pass.new_roots.push_back(Placement::at(single.members[0]));
      pass.assign[single.members[0]] = sidx;
    }
  }
  return pass;
}

// Appends the pass to the dendrogram; returns the new-unit node ids.
std::vector<NodeId> commit_pass(Dendrogram& d, const PassResult& pass,
                                const std::vector<NodeId>& unit_ids, int t) {
  std::vector<NodeId> new_ids;
  new_ids.reserve(pass.new_roots.size());
  for (const auto& local : pass.new_roots) {
    const auto id = static_cast<NodeId>(d.n_nodes());
    Placement global = local;
    global.a = unit_ids[local.a];
    if (global.kind == Placement::Kind::Midpoint)
      global.b = unit_ids[local.b];
    d.roots.push_back({id, global, t});
    d.parent.push_back(-1);
    new_ids.push_back(id);
  }
  for (std::size_t u = 0; u < unit_ids.size(); ++u)
    d.parent[unit_ids[u]] = new_ids[pass.assign[u]];
  d.iterations = t;
  return new_ids;
}

}  // namespace

Partition make_partition(std::vector<std::uint32_t> raw_labels) {
  Partition p;
  p.labels.resize(raw_labels.size());
  std::unordered_map<std::uint32_t, std::uint32_t> dense;
  for (std::size_t i = 0; i < raw_labels.size(); ++i) {
    auto [it, inserted] =
        dense.try_emplace(raw_labels[i], static_cast<std::uint32_t>(dense.size()));
    p.labels[i] = it->second;
  }
  p.k = static_cast<std::uint32_t>(dense.size());
  return p;
}

double root_distance_coordinate(const Placement& r1, const Placement& r2,
                                const PointSet& ps) {
  auto resolve = [&](const Placement& r) {
    std::vector<double> loc(ps.dim());
    if (r.kind == Placement::Kind::AtEntity) {
      const auto pt = ps.point(r.a);
      loc.assign(pt.begin(), pt.end());
    } else {
      const auto pa = ps.point(r.a);
      const auto pb = ps.point(r.b);
      for (std::size_t k = 0; k < ps.dim(); ++k)
        loc[k] = 0.5 * (pa[k] + pb[k]);
    }
    return loc;
  };
  const auto l1 = resolve(r1);
  const auto l2 = resolve(r2);
  return euclidean(l1, l2);
}

double root_distance_metric(const Placement& r1, const Placement& r2,
                            const DistanceOracle& base) {
  const double result = placement_distance(r1, r2, base);
  if (!std::isfinite(result))
    throw InfiniteBaseDistance(
        "root_distance_metric: a required base distance is infinite");
  return result;
}

Dendrogram cluster_points(const PointSet& ps, const RsConfig& cfg) {
  if (ps.size() == 0) throw Error("cluster_points: empty point set");
  if (!(cfg.alpha > 1.0)) throw BadAlpha("cluster_points: alpha must exceed 1");
  const std::size_t dim = ps.dim();

  Dendrogram d;
  d.n_leaves = ps.size();
  d.parent.assign(ps.size(), -1);

  std::vector<NodeId> unit_ids(ps.size());
  std::vector<double> locations;
  locations.reserve(ps.size() * dim);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    unit_ids[i] = static_cast<NodeId>(i);
    const auto pt = ps.point(i);
    locations.insert(locations.end(), pt.begin(), pt.end());
  }

  for (int t = 1;; ++t) {
    const std::size_t m = unit_ids.size();
    if (m <= 1) break;
    if (cfg.max_iterations && t > *cfg.max_iterations) break;

    auto level_ps = std::make_shared<PointSet>(locations, dim);
    const JitterConfig jc{mix_seed(cfg.jitter.seed, static_cast<std::uint64_t>(t)),
                          cfg.jitter.relative_scale};
    const auto jit = jitter(euclidean_oracle(level_ps), jc);
    const auto pass =
        run_pass(m, *jit, mix_seed(cfg.seed, 0x5c7000 + static_cast<std::uint64_t>(t)),
                 cfg.alpha, IsolatedPolicy::Throw);
    if (!pass.merged_any) break;

    unit_ids = commit_pass(d, pass, unit_ids, t);

    std::vector<double> next(pass.new_roots.size() * dim);
    for (std::size_t r = 0; r < pass.new_roots.size(); ++r) {
      const auto& pl = pass.new_roots[r];
      for (std::size_t k = 0; k < dim; ++k) {
        next[r * dim + k] =
            pl.kind == Placement::Kind::AtEntity
                ? locations[pl.a * dim + k]
                : 0.5 * (locations[pl.a * dim + k] + locations[pl.b * dim + k]);
      }
    }
    locations = std::move(next);
  }
  return d;
}

Dendrogram cluster_metric(const DistanceOracle& base, const RsConfig& cfg) {
  const std::size_t n = base.size();
  if (n == 0) throw Error("cluster_metric: empty entity set");
  if (!(cfg.alpha > 1.0)) throw BadAlpha("cluster_metric: alpha must exceed 1");

  Dendrogram d;
  d.n_leaves = n;
  d.parent.assign(n, -1);

  std::vector<NodeId> unit_ids(n);
  for (std::size_t i = 0; i < n; ++i) unit_ids[i] = static_cast<NodeId>(i);
  std::vector<double> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i * n + j] = base(i, j);

  for (int t = 1;; ++t) {
    const std::size_t m = unit_ids.size();
    if (m <= 1) break;
    if (cfg.max_iterations && t > *cfg.max_iterations) break;

    bool any_finite = false;
    for (std::size_t i = 0; i < m && !any_finite; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (std::isfinite(table[i * m + j])) {
          any_finite = true;
          break;
        }
    if (!any_finite) break;  // every inter-root distance is infinite

    const auto view = std::make_shared<DenseView>(table.data(), m);
    const JitterConfig jc{mix_seed(cfg.jitter.seed, static_cast<std::uint64_t>(t)),
                          cfg.jitter.relative_scale};
    const JitteredOracle jit(view, jc);
    const auto pass =
        run_pass(m, jit, mix_seed(cfg.seed, 0x5c7000 + static_cast<std::uint64_t>(t)),
                 cfg.alpha, IsolatedPolicy::Singleton);
    if (!pass.merged_any) break;

    unit_ids = commit_pass(d, pass, unit_ids, t);

    const std::size_t mm = pass.new_roots.size();
    std::vector<double> next(mm * mm, 0.0);
    const DenseView prev(table.data(), m);
    for (std::size_t a = 0; a < mm; ++a)
      for (std::size_t b = a + 1; b < mm; ++b) {
        const double dist =
            placement_distance(pass.new_roots[a], pass.new_roots[b], prev);
        next[a * mm + b] = dist;
        next[b * mm + a] = dist;
      }
    table = std::move(next);
  }
  return d;
}

Partition partition_at_iteration(const Dendrogram& d, int t) {
  if (t < 0 || t > d.iterations)
    throw IterationOutOfRange("partition_at_iteration: t out of range");
  std::vector<std::uint32_t> raw(d.n_leaves);
  for (std::size_t leaf = 0; leaf < d.n_leaves; ++leaf) {
    NodeId v = static_cast<NodeId>(leaf);
    while (d.parent[v] >= 0 &&
           d.iteration_of(static_cast<NodeId>(d.parent[v])) <= t)
      v = static_cast<NodeId>(d.parent[v]);
    raw[leaf] = v;
  }
  return make_partition(std::move(raw));
}

}  // namespace rsclust
