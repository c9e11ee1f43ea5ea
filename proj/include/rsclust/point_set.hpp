#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsclust/errors.hpp"

namespace rsclust {

// Fixed-dimension point collection with optional ground-truth labels.
class PointSet {
 public:
  PointSet(std::vector<double> coords, std::size_t dim,
           std::optional<std::vector<int>> labels = std::nullopt)
      : coords_(std::move(coords)), dim_(dim), labels_(std::move(labels)) {
    if (dim_ == 0) throw Error("PointSet: dim must be positive");
    if (coords_.size() % dim_ != 0)
      throw Error("PointSet: coordinate buffer not a multiple of dim");
    for (double c : coords_)
      if (!std::isfinite(c)) throw Error("PointSet: non-finite coordinate");
    if (labels_ && labels_->size() != size())
      throw Error("PointSet: label count does not match point count");
  }

  std::size_t size() const { return coords_.size() / dim_; }
  std::size_t dim() const { return dim_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }

  const std::optional<std::vector<int>>& labels() const { return labels_; }

 private:
  std::vector<double> coords_;
  std::size_t dim_;
  std::optional<std::vector<int>> labels_;
};

inline double euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace rsclust
