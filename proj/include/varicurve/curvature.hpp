#pragma once

#include "varicurve/geometry.hpp"
#include "varicurve/kernels.hpp"
#include "varicurve/spatial_index.hpp"

#include <optional>

namespace varicurve {

struct CurvatureRequest {
  double eps = 0.0;
  KernelPair pair;
  bool orth = false;
  std::optional<double> average_radius;
  /// Apply the C_xi / C_rho prefactor. Off reproduces the bare ratio used by the
  /// point-cloud formulas, which is only equivalent for matched profile scalings.
  bool include_constants = true;
  unsigned threads = 1;

  void validate() const;
};

/// delta V * rho_eps (x) for a point cloud:
///   eps^-(n+1) sum_{0 < |x_j - x| < eps} m_j rho'(|x_j - x| / eps) Pi_{P_j}((x_j - x) / |x_j - x|).
Vec regularized_first_variation(const PointCloudVarifold& v, const KernelProfile& rho, double eps, const Vec& x);
Vec regularized_first_variation(const PointCloudVarifold& v, const FixedRadiusIndex& index,
                                const KernelProfile& rho, double eps, const Vec& x);

/// Volumetric analogue: per-cell tensor 3-point Gauss quadrature of
/// (m_K / |K|) int_K grad^{P_K} rho_eps(y - x) dy; cells cut by the sphere
/// |y - x| = eps are bisected once along every axis first.
Vec regularized_first_variation(const VolumetricVarifold& v, const KernelProfile& rho, double eps, const Vec& x);

/// ||V|| * xi_eps (x) = eps^-n sum_{|x_j - x| < eps} m_j xi(|x_j - x| / eps), self-term included.
double regularized_mass(const PointCloudVarifold& v, const KernelProfile& xi, double eps, const Vec& x);
double regularized_mass(const PointCloudVarifold& v, const FixedRadiusIndex& index, const KernelProfile& xi,
                        double eps, const Vec& x);
double regularized_mass(const VolumetricVarifold& v, const KernelProfile& xi, double eps, const Vec& x);

/// Approximate mean curvature -(C_xi / C_rho) (delta V * rho_eps) / (||V|| * xi_eps).
/// std::nullopt when the regularized mass vanishes (< 1e-300).
std::optional<Vec> amc(const PointCloudVarifold& v, const CurvatureRequest& req, const Vec& x);
std::optional<Vec> amc(const PointCloudVarifold& v, const FixedRadiusIndex& index, const CurvatureRequest& req,
                       const Vec& x);
std::optional<Vec> amc(const VolumetricVarifold& v, const CurvatureRequest& req, const Vec& x);

/// Orthogonal variant at cloud point j0: every numerator term is projected onto
/// P_{j0}^perp. Terms whose plane equals P_{j0} contribute exactly zero.
std::optional<Vec> amc_orth(const PointCloudVarifold& v, const CurvatureRequest& req, std::size_t j0);
std::optional<Vec> amc_orth(const PointCloudVarifold& v, const FixedRadiusIndex& index,
                            const CurvatureRequest& req, std::size_t j0);

/// amc or amc_orth (per req.orth) at every cloud point, then averaged over
/// req.average_radius when set.
CurvatureField amc_field(const PointCloudVarifold& v, const CurvatureRequest& req);

/// Unweighted mean of valid vectors over the open ball of `radius` around each
/// valid point (self included). Invalid points stay invalid.
CurvatureField average_field(const CurvatureField& field, const PointCloudVarifold& v, double radius,
                             unsigned threads = 1);

/// Midpoint-rule estimate of int_box |delta V * rho_eps|. Throws StepTooCoarse
/// when grid_step >= eps.
double fv_l1_norm(const PointCloudVarifold& v, const KernelProfile& rho, double eps, const Box& bbox,
                  double grid_step);
double fv_l1_norm(const VolumetricVarifold& v, const KernelProfile& rho, double eps, const Box& bbox,
                  double grid_step);

/// Mean number of cloud points in B_eps(x_j) over all j (self included).
double mean_neighbor_count(const PointCloudVarifold& v, double eps);

}  // namespace varicurve
