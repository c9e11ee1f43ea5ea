#include "rsclust/distance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "rsclust/errors.hpp"

namespace rsclust {

namespace detail {

// Uniform cells over the bounding box, ~1 point per cell on average; point
// ids are bucketed in counting-sort (CSR) layout.
struct NnGrid {
  double x0 = 0.0, y0 = 0.0, h = 1.0;
  std::size_t gw = 1, gh = 1;
  std::vector<std::uint32_t> cell_start;
  std::vector<std::uint32_t> order;

  std::size_t cell_x(double x) const {
    const auto g = static_cast<std::size_t>(std::max(0.0, (x - x0) / h));
    return std::min(g, gw - 1);
  }
  std::size_t cell_y(double y) const {
    const auto g = static_cast<std::size_t>(std::max(0.0, (y - y0) / h));
    return std::min(g, gh - 1);
  }
};

}  // namespace detail

namespace {

std::shared_ptr<const detail::NnGrid> build_grid(const PointSet& ps) {
  const std::size_t n = ps.size();
  const double* c = ps.point(0).data();
  double xmin = c[0], xmax = c[0], ymin = c[1], ymax = c[1];
  for (std::size_t i = 1; i < n; ++i) {
    xmin = std::min(xmin, c[i * 2]);
    xmax = std::max(xmax, c[i * 2]);
    ymin = std::min(ymin, c[i * 2 + 1]);
    ymax = std::max(ymax, c[i * 2 + 1]);
  }
  auto g = std::make_shared<detail::NnGrid>();
  g->x0 = xmin;
  g->y0 = ymin;
  const double ext = std::max(xmax - xmin, ymax - ymin);
  const auto target = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::sqrt(static_cast<double>(n))));
  g->h = ext > 0.0 ? ext / static_cast<double>(target) : 1.0;
  g->gw = static_cast<std::size_t>((xmax - xmin) / g->h) + 1;
  g->gh = static_cast<std::size_t>((ymax - ymin) / g->h) + 1;

  const std::size_t cells = g->gw * g->gh;
  std::vector<std::uint32_t> counts(cells, 0);
  std::vector<std::size_t> cell_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    cell_of[i] = g->cell_y(c[i * 2 + 1]) * g->gw + g->cell_x(c[i * 2]);
    ++counts[cell_of[i]];
  }
  g->cell_start.assign(cells + 1, 0);
  for (std::size_t cell = 0; cell < cells; ++cell)
    g->cell_start[cell + 1] = g->cell_start[cell] + counts[cell];
  g->order.resize(n);
  std::vector<std::uint32_t> cursor(g->cell_start.begin(),
                                    g->cell_start.end() - 1);
  for (std::size_t i = 0; i < n; ++i)
    g->order[cursor[cell_of[i]]++] = static_cast<std::uint32_t>(i);
  return g;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::int64_t DistanceOracle::nearest(std::size_t from) const {
  const std::size_t n = size();
  std::int64_t best = -1;
  double best_d = kInf;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == from) continue;
    const double d = (*this)(from, j);
    if (d < best_d) {
      best_d = d;
      best = static_cast<std::int64_t>(j);
    }
  }
  return best;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64(splitmix64(seed) ^ salt);
}

double pair_uniform(std::uint64_t seed, std::uint64_t x, std::uint64_t y) {
  if (x > y) std::swap(x, y);
  std::uint64_t z = splitmix64(splitmix64(splitmix64(seed) ^ x) ^ y);
  // 53 mantissa bits; shift into (0,1) by offsetting half an ulp.
  return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

JitteredOracle::JitteredOracle(std::shared_ptr<const DistanceOracle> base,
                               JitterConfig cfg)
    : base_(std::move(base)), cfg_(cfg) {
  if (!(cfg_.relative_scale > 0.0) || cfg_.relative_scale >= 1e-3)
    throw Error("jitter: relative_scale must be in (0, 1e-3)");
}

double JitteredOracle::zero_floor() const {
  // Only duplicate entities ever need the floor, so the O(n^2) mean is
  // deferred until a zero off-diagonal distance is actually queried.
  std::call_once(floor_once_, [&] {
    const std::size_t n = base_->size();
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = (*base_)(i, j);
        if (std::isfinite(d)) {
          sum += d;
          ++count;
        }
      }
    if (count > 0) zero_floor_ = cfg_.relative_scale * (sum / count);
  });
  return zero_floor_;
}

double JitteredOracle::operator()(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  double d = (*base_)(i, j);
  if (!std::isfinite(d)) return d;
  const double u = pair_uniform(cfg_.seed, i, j);
  if (d == 0.0) d = zero_floor();
  return d * (1.0 + u * cfg_.relative_scale);
}

std::int64_t JitteredOracle::nearest(std::size_t from) const {
  const auto* euclid = dynamic_cast<const EuclideanOracle*>(base_.get());
  if (!euclid) return DistanceOracle::nearest(from);
  const PointSet& ps = euclid->points();
  const std::size_t n = ps.size();
  if (n < 2) return -1;
  const std::size_t dim = ps.dim();
  const double* coords = ps.point(0).data();
  const double* origin = coords + from * dim;

  // Squared margin factor: jitter scales values by at most
  // (1 + relative_scale); the extra term absorbs sqrt rounding.
  const double f = (1.0 + cfg_.relative_scale) * (1.0 + 1e-12);
  const double f_sq = f * f;

  // Shared scan state: the running minimum positive squared distance, every
  // index whose squared distance could still be within the jitter margin of
  // that minimum (entries kept against a stale minimum are filtered in
  // finish()), and indices at exactly zero (duplicates of `from`).
  double min_sq = kInf;
  std::vector<std::pair<double, std::size_t>> near;
  std::vector<std::size_t> zeros;

  const auto consider = [&](std::size_t j, double s) {
    if (s == 0.0) {
      zeros.push_back(j);
      return;
    }
    if (s < min_sq) {
      min_sq = s;
      if (near.size() >= 32)
        std::erase_if(near,
                      [&](const auto& e) { return e.first > min_sq * f_sq; });
      near.emplace_back(s, j);
    } else if (s <= min_sq * f_sq) {
      near.emplace_back(s, j);
    }
  };

  const auto finish = [&]() -> std::int64_t {
    // Smallest pre-jitter value, with zero distances mapped to the floor.
    double base_min = std::sqrt(min_sq);
    if (!zeros.empty()) base_min = std::min(base_min, zero_floor());
    const double margin = base_min * f;
    const double margin_sq = margin * margin;

    std::vector<std::size_t> candidates = std::move(zeros);
    for (const auto& [s, j] : near)
      if (s <= margin_sq) candidates.push_back(j);
    std::sort(candidates.begin(), candidates.end());  // ties to lowest index

    std::int64_t best = -1;
    double best_d = kInf;
    for (std::size_t j : candidates) {
      const double d = (*this)(from, j);
      if (d < best_d) {
        best_d = d;
        best = static_cast<std::int64_t>(j);
      }
    }
    return best;
  };

  if (dim == 2 && n >= 64) {
    // Grid walk: scan cells ring by ring; a point in a cell at Chebyshev
    // cell-distance >= r+1 is at least r*h away, so once (r*h)^2 clears the
    // margin around the running minimum nothing unscanned can qualify.
    std::call_once(grid_once_, [&] { grid_ = build_grid(ps); });
    const auto& g = *grid_;
    const auto cx = static_cast<std::int64_t>(g.cell_x(origin[0]));
    const auto cy = static_cast<std::int64_t>(g.cell_y(origin[1]));

    const auto scan_cell = [&](std::int64_t gx, std::int64_t gy) {
      if (gx < 0 || gy < 0 || gx >= static_cast<std::int64_t>(g.gw) ||
          gy >= static_cast<std::int64_t>(g.gh))
        return;
      const std::size_t cell =
          static_cast<std::size_t>(gy) * g.gw + static_cast<std::size_t>(gx);
      for (auto idx = g.cell_start[cell]; idx < g.cell_start[cell + 1];
           ++idx) {
        const std::size_t j = g.order[idx];
        if (j == from) continue;
        const double dx = origin[0] - coords[j * 2];
        const double dy = origin[1] - coords[j * 2 + 1];
        consider(j, dx * dx + dy * dy);
      }
    };

    const std::size_t r_max = std::max(g.gw, g.gh);
    for (std::size_t r = 0; r <= r_max; ++r) {
      if (r == 0) {
        scan_cell(cx, cy);
      } else {
        const auto ri = static_cast<std::int64_t>(r);
        for (std::int64_t gx = cx - ri; gx <= cx + ri; ++gx) {
          scan_cell(gx, cy - ri);
          scan_cell(gx, cy + ri);
        }
        for (std::int64_t gy = cy - ri + 1; gy <= cy + ri - 1; ++gy) {
          scan_cell(cx - ri, gy);
          scan_cell(cx + ri, gy);
        }
      }
      const double reach = static_cast<double>(r) * g.h;
      if (reach * reach > min_sq * f_sq) break;
    }
    return finish();
  }

  // Linear scan; fixed-width inner loops vectorize.
  const auto run = [&](auto sq_dist) -> std::int64_t {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == from) continue;
      consider(j, sq_dist(j));
    }
    return finish();
  };
  switch (dim) {
    case 2:
      return run([&](std::size_t j) {
        const double dx = origin[0] - coords[j * 2];
        const double dy = origin[1] - coords[j * 2 + 1];
        return dx * dx + dy * dy;
      });
    case 3:
      return run([&](std::size_t j) {
        const double dx = origin[0] - coords[j * 3];
        const double dy = origin[1] - coords[j * 3 + 1];
        const double dz = origin[2] - coords[j * 3 + 2];
        return dx * dx + dy * dy + dz * dz;
      });
    default:
      return run([&](std::size_t j) {
        const double* pt = coords + j * dim;
        double s = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
          const double diff = origin[k] - pt[k];
          s += diff * diff;
        }
        return s;
      });
  }
}

std::shared_ptr<const DistanceOracle> euclidean_oracle(
    std::shared_ptr<const PointSet> ps) {
  return std::make_shared<EuclideanOracle>(std::move(ps));
}

std::shared_ptr<const DistanceOracle> jitter(
    std::shared_ptr<const DistanceOracle> oracle, JitterConfig cfg) {
  return std::make_shared<JitteredOracle>(std::move(oracle), cfg);
}

std::shared_ptr<const DistanceOracle> matrix_oracle(std::vector<double> m,
                                                    std::size_t n) {
  if (m.size() != n * n) throw Error("matrix_oracle: buffer is not n x n");
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i * n + i] != 0.0) {
      std::ostringstream msg;
      msg << "matrix_oracle: nonzero diagonal at " << i;
      throw NonzeroDiagonal(msg.str());
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = m[i * n + j];
      const double b = m[j * n + i];
      if (a < 0.0 || b < 0.0) {
        std::ostringstream msg;
        msg << "matrix_oracle: negative distance at (" << i << "," << j << ")";
        throw NegativeDistance(msg.str());
      }
      const double tol = 1e-12 * std::max({std::abs(a), std::abs(b), 1.0});
      if (std::isfinite(a) != std::isfinite(b) ||
          (std::isfinite(a) && std::abs(a - b) > tol)) {
        std::ostringstream msg;
        msg << "matrix_oracle: asymmetric entry at (" << i << "," << j << ")";
        throw AsymmetricMatrix(msg.str());
      }
      m[j * n + i] = a;  // canonicalize to bit-exact symmetry
    }
  }
  return std::make_shared<MatrixOracle>(std::move(m), n);
}

}  // namespace rsclust
