#pragma once

#include "varicurve/geometry.hpp"
#include "varicurve/spatial_index.hpp"

#include <optional>
#include <vector>

namespace varicurve {

/// Local PCA tangent plane at every point: covariance of the neighbors in the
/// open ball B_R(x_i) (self included) centered at their mean, spanned by the d
/// eigenvectors of largest eigenvalue.
///
/// A point gets std::nullopt when its ball holds fewer than d + 1 points or the
/// neighborhood does not span d directions (e.g. all neighbors coincident).
std::vector<std::optional<Plane>> estimate_planes(const Mat& points, double radius, int d, unsigned threads = 1);

/// Same, reusing an index built over `points`.
std::vector<std::optional<Plane>> estimate_planes(const FixedRadiusIndex& index, double radius, int d,
                                                  unsigned threads = 1);

}  // namespace varicurve
