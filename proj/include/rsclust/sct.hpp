#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rsclust/distance.hpp"

namespace rsclust {

using EntityId = std::uint32_t;

// Chain-shaped sub-clustering tree. Every member follows `parent` links
// toward the supporting pair; the supporting nodes themselves carry no
// parent (the artificial root sits above both). A special SCT has a single
// member and no supporting pair.
struct Sct {
  std::vector<EntityId> members;
  std::unordered_map<EntityId, EntityId> parent;
  std::optional<std::pair<EntityId, EntityId>> supporting;

  bool is_special() const { return !supporting.has_value(); }
};

struct ChainOutcome {
  enum class Variant { NewSct, Attach };
  Variant variant;
  std::vector<EntityId> chain;  // NewSct: ends with the RNN pair
  EntityId attach_target = 0;   // Attach only: existing node the chain hangs on
};

enum class IsolatedPolicy {
  Throw,      // coordinate/matrix data: an isolated entity is a caller bug
  Singleton,  // graph data: isolated entities become special SCTs
};

// Grows a nearest-neighbor chain from `start`. The NN search ranges over all
// entities of the iteration, not just the candidates; a tip outside the
// candidate set ends the chain with an Attach outcome.
ChainOutcome build_chain(EntityId start, const std::vector<char>& in_candidates,
                         const DistanceOracle& oracle);

// Draws random candidates, runs build_chain, links outcomes until the
// candidate set is empty. Every entity ends up in exactly one SCT.
std::vector<Sct> construct_scts(std::size_t n_entities,
                                const DistanceOracle& oracle,
                                std::uint64_t rng_seed,
                                IsolatedPolicy isolated = IsolatedPolicy::Throw);

// h = (l_ip + l_iq + 1) / 2 with the supporting pair treated as directly
// connected; equals the node's hop distance to the artificial root.
int depth(EntityId node, const Sct& sct);

// Depths of all members in one traversal, keyed by entity id.
std::unordered_map<EntityId, int> all_depths(const Sct& sct);

// Smallest integer >= log_alpha(size + 1).
int prune_threshold(std::size_t size, double alpha);

struct PruneResult {
  Sct trimmed;
  std::vector<Sct> singletons;  // one special SCT per pruned node
};

// Removes every node deeper than prune_threshold(|C|, alpha), threshold
// taken on the pre-prune member count. Special SCTs are exempt.
PruneResult prune(const Sct& sct, double alpha);

}  // namespace rsclust
