#include "varicurve/tangents.hpp"

#include "varicurve/error.hpp"
#include "varicurve/parallel.hpp"

#include <cmath>

namespace varicurve {

namespace {

// Flip so the first component that is clearly nonzero is positive.
void canonical_sign(Eigen::Ref<Vec> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

std::optional<Plane> plane_at(const Mat& points, const std::vector<std::size_t>& nbrs, int d) {
  const Eigen::Index n = points.rows();
  if (nbrs.size() < static_cast<std::size_t>(d) + 1) return std::nullopt;

  Vec mean = Vec::Zero(n);
  for (std::size_t j : nbrs) mean += points.col(static_cast<Eigen::Index>(j));
  mean /= static_cast<double>(nbrs.size());

  Mat cov = Mat::Zero(n, n);
  for (std::size_t j : nbrs) {
    const Vec c = points.col(static_cast<Eigen::Index>(j)) - mean;
    cov.selfadjointView<Eigen::Lower>().rankUpdate(c);
  }
  cov = cov.selfadjointView<Eigen::Lower>();

  Eigen::SelfAdjointEigenSolver<Mat> eig(cov);
  if (eig.info() != Eigen::Success) return std::nullopt;
  const Vec& lambda = eig.eigenvalues();  // ascending
  const double top = lambda(n - 1);
  // The d-th largest direction must carry real variance.
  if (!(top > 0.0) || lambda(n - d) <= 1e-12 * top) return std::nullopt;

  Mat basis = eig.eigenvectors().rightCols(d);
  for (Eigen::Index c = 0; c < d; ++c) canonical_sign(basis.col(c));
  return Plane::from_orthonormal(basis, 1e-8);
}

}  // namespace

std::vector<std::optional<Plane>> estimate_planes(const FixedRadiusIndex& index, double radius, int d,
                                                  unsigned threads) {
  const Mat& points = index.points();
  if (!(radius > 0.0)) throw Error(ErrorCode::BadData, "regression radius must be positive");
  if (d < 1 || d >= points.rows()) throw Error(ErrorCode::DimensionMismatch, "need 1 <= d < n");
  std::vector<std::optional<Plane>> planes(index.size());
  parallel_for(index.size(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> nbrs;
    Vec x(points.rows());
    for (std::size_t i = begin; i < end; ++i) {
      x = points.col(static_cast<Eigen::Index>(i));
      index.radius_query(x, radius, nbrs);
      planes[i] = plane_at(points, nbrs, d);
    }
  });
  return planes;
}

std::vector<std::optional<Plane>> estimate_planes(const Mat& points, double radius, int d, unsigned threads) {
  const FixedRadiusIndex index(points, radius);
  return estimate_planes(index, radius, d, threads);
}

}  // namespace varicurve
