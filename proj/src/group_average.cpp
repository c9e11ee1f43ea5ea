#include "rsclust/group_average.hpp"

#include <cmath>
#include <numeric>
#include <queue>
#include <tuple>

#include "rsclust/errors.hpp"

namespace rsclust {

namespace {

// Condensed upper-triangle index for i < j over n slots.
inline std::size_t condensed(std::size_t i, std::size_t j, std::size_t n) {
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

}  // namespace

std::vector<Merge> group_average_merges(const DistanceOracle& oracle) {
  const std::size_t n = oracle.size();
  std::vector<Merge> merges;
  if (n < 2) return merges;

  std::vector<double> dist(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = oracle(i, j);
      if (!std::isfinite(d))
        throw InfiniteDistance("group_average: infinite pairwise distance");
      dist[condensed(i, j, n)] = d;
    }

  std::vector<char> active(n, 1);
  std::vector<std::size_t> size(n, 1);

  // Per-row nearest candidate among higher-indexed active slots. Stored keys
  // are lower bounds on the current row minimum (average linkage is
  // reducible), so entries are validated on pop and re-pushed when stale.
  using Item = std::tuple<double, std::uint32_t, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;

  auto row_min = [&](std::size_t i) -> std::pair<double, std::int64_t> {
    double best = kInf;
    std::int64_t arg = -1;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!active[j]) continue;
      const double d = dist[condensed(i, j, n)];
      if (d < best) {
        best = d;
        arg = static_cast<std::int64_t>(j);
      }
    }
    return {best, arg};
  };

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto [d, j] = row_min(i);
    if (j >= 0) heap.push({d, static_cast<std::uint32_t>(i),
                           static_cast<std::uint32_t>(j)});
  }

  int step = 0;
  std::size_t clusters = n;
  while (clusters > 1) {
    const auto [d0, i, j0] = heap.top();
    heap.pop();
    if (!active[i]) continue;
    const auto [d, j] = row_min(i);
    if (j < 0) continue;
    if (!(d == d0 && static_cast<std::uint32_t>(j) == j0 && active[j0])) {
      heap.push({d, i, static_cast<std::uint32_t>(j)});
      continue;
    }

    // Merge j into i (i < j).
    const std::size_t si = size[i], sj = size[j];
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == i || static_cast<std::int64_t>(k) == j) continue;
      const std::size_t ik = k < i ? condensed(k, i, n) : condensed(i, k, n);
      const std::size_t jk = k < static_cast<std::size_t>(j)
                                 ? condensed(k, j, n)
                                 : condensed(j, k, n);
      dist[ik] = (static_cast<double>(si) * dist[ik] +
                  static_cast<double>(sj) * dist[jk]) /
                 static_cast<double>(si + sj);
    }
    active[j] = 0;
    size[i] = si + sj;
    merges.push_back({i, static_cast<std::uint32_t>(j), d, step++});
    --clusters;

    const auto [nd, nj] = row_min(i);
    if (nj >= 0) heap.push({nd, i, static_cast<std::uint32_t>(nj)});
  }
  return merges;
}

Partition cut_merges(const std::vector<Merge>& merges, std::size_t n,
                     std::size_t k) {
  if (k < 1 || k > n) throw BadK("cut_merges: k must be in [1, n]");
  std::vector<std::uint32_t> label(n);
  std::iota(label.begin(), label.end(), 0);
  // Union-find over entity slots; merges reference surviving slot ids.
  std::vector<std::uint32_t> up(n);
  std::iota(up.begin(), up.end(), 0);
  auto find = [&](std::uint32_t x) {
    while (up[x] != x) {
      up[x] = up[up[x]];
      x = up[x];
    }
    return x;
  };
  const std::size_t wanted = n - k;
  if (wanted > merges.size())
    throw BadK("cut_merges: not enough merges for the requested k");
  for (std::size_t t = 0; t < wanted; ++t)
    up[find(merges[t].right)] = find(merges[t].left);
  std::vector<std::uint32_t> raw(n);
  for (std::size_t v = 0; v < n; ++v) raw[v] = find(static_cast<std::uint32_t>(v));
  return make_partition(std::move(raw));
}

Partition group_average(const DistanceOracle& oracle, std::size_t k) {
  const std::size_t n = oracle.size();
  if (k < 1 || k > n) throw BadK("group_average: k must be in [1, n]");
  return cut_merges(group_average_merges(oracle), n, k);
}

}  // namespace rsclust
