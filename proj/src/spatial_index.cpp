#include "varicurve/spatial_index.hpp"

#include "varicurve/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace varicurve {

std::size_t FixedRadiusIndex::KeyHash::operator()(const Key& k) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (std::int64_t c : k) {
    h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

FixedRadiusIndex::FixedRadiusIndex(const Mat& points, double radius_hint)
    : points_(points), cell_(radius_hint), dim_(static_cast<int>(points.rows())) {
  if (points_.cols() == 0) throw Error(ErrorCode::EmptyCloud, "cannot index an empty point set");
  if (!(radius_hint > 0.0) || !std::isfinite(radius_hint)) {
    throw Error(ErrorCode::BadData, "radius hint must be positive");
  }
  if (dim_ < 1 || dim_ > kMaxDim) {
    throw Error(ErrorCode::DimensionMismatch, "spatial index supports 1 <= n <= 8");
  }
  if (points_.cols() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::TooLarge, "too many points for the index");
  }
  buckets_.reserve(static_cast<std::size_t>(points_.cols()));
  for (Eigen::Index j = 0; j < points_.cols(); ++j) {
    buckets_[key_of(points_.col(j).data())].push_back(static_cast<std::uint32_t>(j));
  }
}

FixedRadiusIndex::Key FixedRadiusIndex::key_of(const double* x) const {
  Key k{};
  for (int i = 0; i < dim_; ++i) k[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor(x[i] / cell_));
  return k;
}

namespace {

// Squared distances from x to the listed points, calling keep(j) for those
// strictly inside eps2. The dimension is a template parameter for the common
// cases so the inner loop unrolls.
template <int N, typename Keep>
void scan_fixed(const Mat& points, const std::vector<std::uint32_t>& bucket, const double* x, double eps2,
                Keep&& keep) {
  for (std::uint32_t j : bucket) {
    const double* p = points.data() + static_cast<std::size_t>(j) * N;
    double dist2 = 0.0;
    for (int i = 0; i < N; ++i) {
      const double diff = p[i] - x[i];
      dist2 += diff * diff;
    }
    if (dist2 < eps2) keep(j);
  }
}

template <typename Keep>
void scan_any(const Mat& points, const std::vector<std::uint32_t>& bucket, const double* x, double eps2, int dim,
              Keep&& keep) {
  switch (dim) {
    case 2: scan_fixed<2>(points, bucket, x, eps2, keep); return;
    case 3: scan_fixed<3>(points, bucket, x, eps2, keep); return;
    default: break;
  }
  for (std::uint32_t j : bucket) {
    const double* p = points.col(j).data();
    double dist2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double diff = p[i] - x[i];
      dist2 += diff * diff;
    }
    if (dist2 < eps2) keep(j);
  }
}

}  // namespace

template <typename Visit>
void FixedRadiusIndex::for_each_bucket(const Vec& x, double eps, Visit&& visit) const {
  const double reach = eps * (1.0 + 1e-12);
  Key lo{};
  Key hi{};
  double cells_to_scan = 1.0;
  for (int i = 0; i < dim_; ++i) {
    const auto s = static_cast<std::size_t>(i);
    lo[s] = static_cast<std::int64_t>(std::floor((x(i) - reach) / cell_));
    hi[s] = static_cast<std::int64_t>(std::floor((x(i) + reach) / cell_));
    cells_to_scan *= static_cast<double>(hi[s] - lo[s] + 1);
  }
  if (cells_to_scan > static_cast<double>(buckets_.size())) {
    for (const auto& [key, bucket] : buckets_) {
      bool inside = true;
      for (int i = 0; i < dim_ && inside; ++i) {
        const auto s = static_cast<std::size_t>(i);
        inside = key[s] >= lo[s] && key[s] <= hi[s];
      }
      if (inside) visit(bucket);
    }
    return;
  }
  Key cur = lo;
  while (true) {
    if (auto it = buckets_.find(cur); it != buckets_.end()) visit(it->second);
    int i = 0;
    for (; i < dim_; ++i) {
      const auto s = static_cast<std::size_t>(i);
      if (cur[s] < hi[s]) {
        ++cur[s];
        break;
      }
      cur[s] = lo[s];
    }
    if (i == dim_) break;
  }
}

void FixedRadiusIndex::radius_query(const Vec& x, double eps, std::vector<std::size_t>& out) const {
  out.clear();
  if (x.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "query point has wrong dimension");
  if (!(eps > 0.0)) return;
  const double eps2 = eps * eps;
  // Every bucket holds ascending indices, so the result is a list of sorted
  // runs; merging them is much cheaper than sorting.
  std::vector<std::size_t> runs;
  for_each_bucket(x, eps, [&](const std::vector<std::uint32_t>& bucket) {
    runs.push_back(out.size());
    scan_any(points_, bucket, x.data(), eps2, dim_, [&](std::uint32_t j) { out.push_back(j); });
  });
  runs.push_back(out.size());
  for (std::size_t width = 1; width + 1 < runs.size(); width *= 2) {
    for (std::size_t k = 0; k + width + 1 < runs.size(); k += 2 * width) {
      const std::size_t last = std::min(k + 2 * width, runs.size() - 1);
      std::inplace_merge(out.begin() + static_cast<std::ptrdiff_t>(runs[k]),
                         out.begin() + static_cast<std::ptrdiff_t>(runs[k + width]),
                         out.begin() + static_cast<std::ptrdiff_t>(runs[last]));
    }
  }
}

std::size_t FixedRadiusIndex::count_within(const Vec& x, double eps) const {
  if (x.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "query point has wrong dimension");
  if (!(eps > 0.0)) return 0;
  const double eps2 = eps * eps;
  std::size_t count = 0;
  for_each_bucket(x, eps, [&](const std::vector<std::uint32_t>& bucket) {
    scan_any(points_, bucket, x.data(), eps2, dim_, [&](std::uint32_t) { ++count; });
  });
  return count;
}

std::vector<std::size_t> FixedRadiusIndex::radius_query(const Vec& x, double eps) const {
  std::vector<std::size_t> out;
  radius_query(x, eps, out);
  return out;
}

}  // namespace varicurve
