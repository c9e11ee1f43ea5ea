#include "rsclust/sct.hpp"

#include <cmath>
#include <deque>
#include <random>
#include <sstream>

#include "rsclust/errors.hpp"

namespace rsclust {

ChainOutcome build_chain(EntityId start, const std::vector<char>& in_candidates,
                         const DistanceOracle& oracle) {
  const std::size_t n = oracle.size();
  std::vector<EntityId> chain{start};
  // Distances strictly decrease along the chain after jitter, so 2n steps
  // is a generous cycle guard.
  for (std::size_t step = 0; step <= 2 * n + 2; ++step) {
    const EntityId tip = chain.back();
    const std::int64_t nn = oracle.nearest(tip);
    if (nn < 0) {
      if (chain.size() == 1) {
        std::ostringstream msg;
        msg << "build_chain: entity " << start << " has no finite neighbor";
        throw IsolatedEntity(msg.str());
      }
      // Unreachable: a non-initial tip was reached through a finite distance.
      throw Error("build_chain: chain tip lost all finite neighbors");
    }
    const EntityId next = static_cast<EntityId>(nn);
    if (chain.size() >= 2 && next == chain[chain.size() - 2])
      return {ChainOutcome::Variant::NewSct, std::move(chain), 0};
    if (!in_candidates[next])
      return {ChainOutcome::Variant::Attach, std::move(chain), next};
    chain.push_back(next);
  }
  throw Error("build_chain: no RNN pair found within the step bound");
}

std::vector<Sct> construct_scts(std::size_t n_entities,
                                const DistanceOracle& oracle,
                                std::uint64_t rng_seed,
                                IsolatedPolicy isolated) {
  std::vector<Sct> forest;
  std::vector<char> in_candidates(n_entities, 1);
  std::vector<EntityId> candidates(n_entities);
  std::vector<std::size_t> pos(n_entities);
  for (std::size_t i = 0; i < n_entities; ++i) {
    candidates[i] = static_cast<EntityId>(i);
    pos[i] = i;
  }
  std::vector<std::int64_t> owner(n_entities, -1);  // entity -> forest index
  std::mt19937_64 rng(rng_seed);

  auto remove_candidate = [&](EntityId e) {
    const std::size_t p = pos[e];
    const EntityId last = candidates.back();
    candidates[p] = last;
    pos[last] = p;
    candidates.pop_back();
    in_candidates[e] = 0;
  };

  while (!candidates.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    const EntityId start = candidates[pick(rng)];

    ChainOutcome outcome;
    try {
      outcome = build_chain(start, in_candidates, oracle);
    } catch (const IsolatedEntity&) {
      if (isolated == IsolatedPolicy::Throw) throw;
      Sct special;
      special.members.push_back(start);
      owner[start] = static_cast<std::int64_t>(forest.size());
      forest.push_back(std::move(special));
      remove_candidate(start);
      continue;
    }

    const auto& chain = outcome.chain;
    if (outcome.variant == ChainOutcome::Variant::NewSct) {
      Sct sct;
      sct.members = chain;
      for (std::size_t k = 0; k + 2 < chain.size(); ++k)
        sct.parent[chain[k]] = chain[k + 1];
      sct.supporting = {chain[chain.size() - 2], chain.back()};
      const auto idx = static_cast<std::int64_t>(forest.size());
      for (EntityId e : chain) owner[e] = idx;
      forest.push_back(std::move(sct));
    } else {
      Sct& sct = forest[owner[outcome.attach_target]];
      for (std::size_t k = 0; k + 1 < chain.size(); ++k)
        sct.parent[chain[k]] = chain[k + 1];
      sct.parent[chain.back()] = outcome.attach_target;
      for (EntityId e : chain) {
        sct.members.push_back(e);
        owner[e] = owner[outcome.attach_target];
      }
    }
    for (EntityId e : chain) remove_candidate(e);
  }
  return forest;
}

std::unordered_map<EntityId, int> all_depths(const Sct& sct) {
  if (sct.is_special())
    throw Error("all_depths: special SCT has no supporting pair");
  // Tree edges: every parent link, plus the supporting pair treated as
  // directly connected.
  std::unordered_map<EntityId, std::vector<EntityId>> adj;
  for (const auto& [child, par] : sct.parent) {
    adj[child].push_back(par);
    adj[par].push_back(child);
  }
  const auto [p, q] = *sct.supporting;
  adj[p].push_back(q);
  adj[q].push_back(p);

  auto bfs = [&](EntityId src) {
    std::unordered_map<EntityId, int> dist;
    dist[src] = 0;
    std::deque<EntityId> queue{src};
    while (!queue.empty()) {
      const EntityId u = queue.front();
      queue.pop_front();
      for (EntityId v : adj[u])
        if (!dist.count(v)) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
    }
    return dist;
  };
  const auto from_p = bfs(p);
  const auto from_q = bfs(q);

  std::unordered_map<EntityId, int> depths;
  depths.reserve(sct.members.size());
  for (EntityId m : sct.members)
    depths[m] = (from_p.at(m) + from_q.at(m) + 1) / 2;
  return depths;
}

int depth(EntityId node, const Sct& sct) {
  const auto depths = all_depths(sct);
  const auto it = depths.find(node);
  if (it == depths.end()) {
    std::ostringstream msg;
    msg << "depth: entity " << node << " is not a member of this SCT";
    throw NotAMember(msg.str());
  }
  return it->second;
}

int prune_threshold(std::size_t size, double alpha) {
  if (size < 1) throw Error("prune_threshold: size must be positive");
  if (!(alpha > 1.0)) throw BadAlpha("prune_threshold: alpha must exceed 1");
  const double target = static_cast<double>(size) + 1.0;
  const double r = std::log(target) / std::log(alpha);
  // alpha^t >= size+1, with slack against log/pow rounding.
  auto reaches = [&](long long k) {
    return std::pow(alpha, static_cast<double>(k)) * (1.0 + 1e-12) >= target;
  };
  long long t = static_cast<long long>(std::ceil(r));
  if (t < 1) t = 1;
  while (t > 1 && reaches(t - 1)) --t;
  while (!reaches(t)) ++t;
  return static_cast<int>(t);
}

PruneResult prune(const Sct& sct, double alpha) {
  if (sct.is_special()) return {sct, {}};
  const int phi = prune_threshold(sct.members.size(), alpha);
  const auto depths = all_depths(sct);

  PruneResult result;
  result.trimmed.supporting = sct.supporting;
  for (EntityId m : sct.members) {
    if (depths.at(m) > phi) {
      Sct special;
      special.members.push_back(m);
      result.singletons.push_back(std::move(special));
    } else {
      result.trimmed.members.push_back(m);
    }
  }
  // A kept node's parent sits one step closer to the root, hence is kept too.
  for (const auto& [child, par] : sct.parent)
    if (depths.at(child) <= phi) result.trimmed.parent[child] = par;
  return result;
}

}  // namespace rsclust
