#pragma once

#include "varicurve/geometry.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace varicurve {

/// Nonnegative weights on a finite metric space given by its distance matrix.
struct DiscreteMeasure {
  Mat distances;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  /// Symmetry, zero diagonal, nonnegative weights and (optionally, O(M^3))
  /// the triangle inequality within 1e-9. Throws BadData.
  void validate(bool check_triangle = false) const;
};

inline constexpr std::size_t kMaxBlSupport = 2000;

/// Optimum of the bounded-Lipschitz program together with its certificate.
struct BlSolution {
  double value = 0.0;
  Vec potential;               // optimal phi, |phi| <= 1, phi_k - phi_l <= D_kl
  double primal_residual = 0.0;
  double dual_violation = 0.0;
  double duality_gap = 0.0;
};

/// max sum_k (mu_k - nu_k) phi_k over |phi_k| <= 1, |phi_k - phi_l| <= D_kl,
/// solved exactly as the dual min-cost flow. Throws TooLarge beyond
/// kMaxBlSupport atoms and NumericFailure if the certificate fails.
BlSolution solve_bl(const Mat& distances, const std::vector<double>& mu, const std::vector<double>& nu);

/// Both measures must live on the same support (identical distance matrices).
double bl_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Product metric |x - y| + plane_distance(P, S) on the merged support.
double bl_distance_varifolds(const PointCloudVarifold& v, const PointCloudVarifold& w);

/// Same with the planes forgotten, i.e. between the mass measures.
double bl_distance_masses(const PointCloudVarifold& v, const PointCloudVarifold& w);

/// Axis-aligned cubes of edge delta / sqrt(n), so every cell has diameter
/// delta. Cells are half-open and tile [lo, lo + count * edge).
struct Grid {
  Vec origin;
  double edge = 0.0;
  double delta = 0.0;
  std::vector<long> counts;

  int ambient() const { return static_cast<int>(origin.size()); }
  std::size_t cell_count() const;
  Box cell(std::size_t flat) const;
  std::optional<std::size_t> locate(const Vec& x) const;
};

Grid build_grid(const Box& bbox, double delta);

/// Smallest box containing the cloud, grown by `pad` on every side.
Box bounding_box(const PointCloudVarifold& v, double pad);

/// Per nonempty cell: m_K = cloud mass in K and P_K = best rank-d projector
/// to the mass-weighted mean of the cell's projectors. Throws OutsideGrid.
VolumetricVarifold to_volumetric(const PointCloudVarifold& v, const Grid& grid);

/// Same masses and planes, placed at each cell's mass centroid.
PointCloudVarifold to_pointcloud(const PointCloudVarifold& v, const Grid& grid);

/// Point cloud with k^n equal atoms per cell at the sub-cell midpoints.
PointCloudVarifold sample_volumetric(const VolumetricVarifold& v, int k);

}  // namespace varicurve
