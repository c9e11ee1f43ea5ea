#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <vector>

#include "rsclust/point_set.hpp"

namespace rsclust {

namespace detail {
struct NnGrid;  // uniform-cell spatial index for 2-D nearest queries
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Read-only pairwise distance provider. d(i,i) = 0, d(i,j) = d(j,i),
// d(i,j) >= 0; +inf marks disadjacency (graph-backed oracles only).
// Immutable after construction, safe for concurrent queries.
class DistanceOracle {
 public:
  virtual ~DistanceOracle() = default;
  virtual std::size_t size() const = 0;
  virtual double operator()(std::size_t i, std::size_t j) const = 0;

  // Index of the entity nearest to `from` (ties to the lowest index), or -1
  // when no other entity is at finite distance. Overridable so oracles with
  // structure can beat the linear scan.
  virtual std::int64_t nearest(std::size_t from) const;
};

class EuclideanOracle final : public DistanceOracle {
 public:
  explicit EuclideanOracle(std::shared_ptr<const PointSet> ps)
      : ps_(std::move(ps)) {}

  std::size_t size() const override { return ps_->size(); }
  double operator()(std::size_t i, std::size_t j) const override {
    return euclidean(ps_->point(i), ps_->point(j));
  }

  const PointSet& points() const { return *ps_; }

 private:
  std::shared_ptr<const PointSet> ps_;
};

// Dense symmetric matrix, row-major.
class MatrixOracle final : public DistanceOracle {
 public:
  MatrixOracle(std::vector<double> values, std::size_t n)
      : values_(std::move(values)), n_(n) {}

  std::size_t size() const override { return n_; }
  double operator()(std::size_t i, std::size_t j) const override {
    return values_[i * n_ + j];
  }

 private:
  std::vector<double> values_;
  std::size_t n_;
};

struct JitterConfig {
  std::uint64_t seed = 0;
  double relative_scale = 1e-9;  // must stay well below 1
};

// Multiplicative tie-breaking perturbation, keyed by (seed, unordered pair):
//   d'(x,y) = d(x,y) * (1 + u_xy * relative_scale),  u_xy in (0,1).
// Zero off-diagonal distances (duplicate entities) get an absolute floor of
// relative_scale * mean finite distance so they still order uniquely.
// Infinite entries pass through untouched.
class JitteredOracle final : public DistanceOracle {
 public:
  JitteredOracle(std::shared_ptr<const DistanceOracle> base, JitterConfig cfg);

  std::size_t size() const override { return base_->size(); }
  double operator()(std::size_t i, std::size_t j) const override;

  // Euclidean bases get a squared-distance scan with an exact jitter-aware
  // candidate margin; the result is identical to the generic scan.
  std::int64_t nearest(std::size_t from) const override;

 private:
  double zero_floor() const;  // lazily averaged over the base distances

  std::shared_ptr<const DistanceOracle> base_;
  JitterConfig cfg_;
  mutable std::once_flag floor_once_;
  mutable double zero_floor_ = 0.0;
  mutable std::once_flag grid_once_;
  mutable std::shared_ptr<const detail::NnGrid> grid_;  // 2-D bases only
};

std::shared_ptr<const DistanceOracle> euclidean_oracle(
    std::shared_ptr<const PointSet> ps);

std::shared_ptr<const DistanceOracle> jitter(
    std::shared_ptr<const DistanceOracle> oracle, JitterConfig cfg);

// Validates symmetry (tolerance 1e-12 relative), nonnegativity and a zero
// diagonal, then wraps the matrix. `m` is row-major, n x n.
std::shared_ptr<const DistanceOracle> matrix_oracle(std::vector<double> m,
                                                    std::size_t n);

// Uniform in (0,1), deterministic in (seed, min(x,y), max(x,y)).
double pair_uniform(std::uint64_t seed, std::uint64_t x, std::uint64_t y);

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace rsclust
