#pragma once

#include "varicurve/geometry.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace varicurve {

/// Exact fixed-radius neighbor search on a uniform grid of cubic buckets.
///
/// The index keeps its own copy of the points, so it stays valid independently
/// of the caller's storage. Immutable after construction.
class FixedRadiusIndex {
 public:
  static constexpr int kMaxDim = 8;

  /// Throws EmptyCloud on zero points and BadData on a nonpositive hint.
  FixedRadiusIndex(const Mat& points, double radius_hint);

  /// Indices j with |x_j - x| < eps, ascending. `out` is cleared first.
  void radius_query(const Vec& x, double eps, std::vector<std::size_t>& out) const;
  std::vector<std::size_t> radius_query(const Vec& x, double eps) const;

  /// Size of the radius_query result without building it.
  std::size_t count_within(const Vec& x, double eps) const;

  std::size_t bucket_count() const noexcept { return buckets_.size(); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(points_.cols()); }
  double cell_size() const noexcept { return cell_; }
  const Mat& points() const noexcept { return points_; }

 private:
  using Key = std::array<std::int64_t, kMaxDim>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  Key key_of(const double* x) const;
  template <typename Visit>
  void for_each_bucket(const Vec& x, double eps, Visit&& visit) const;

  Mat points_;
  double cell_;
  int dim_;
  std::unordered_map<Key, std::vector<std::uint32_t>, KeyHash> buckets_;
};

}  // namespace varicurve
