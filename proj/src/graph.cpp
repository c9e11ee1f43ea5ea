#include "rsclust/graph.hpp"

#include <deque>

namespace rsclust {

std::vector<std::uint32_t> connected_components(const Graph& g) {
  const std::size_t n = g.n();
  std::vector<std::uint32_t> comp(n, UINT32_MAX);
  std::uint32_t next = 0;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (comp[s] != UINT32_MAX) continue;
    comp[s] = next;
    std::deque<std::uint32_t> queue{s};
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (const auto& [v, w] : g.neighbors(u))
        if (comp[v] == UINT32_MAX) {
          comp[v] = next;
          queue.push_back(v);
        }
    }
    ++next;
  }
  return comp;
}

}  // namespace rsclust
