#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace varicurve {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;

/// An unoriented d-plane through the origin of R^n, held as its orthogonal
/// projector together with one orthonormal basis of its range.
///
/// The projector is the canonical datum: two planes are equal iff their
/// projectors are. The basis exists for serialization only.
class Plane {
 public:
  /// Orthogonal projector onto span(columns). Throws DegenerateBasis when the
  /// smallest singular value is <= 1e-10.
  static Plane from_basis(const Mat& columns);

  /// Like from_basis but trusts `basis` to be orthonormal (checked to `tol`),
  /// so the projector is built from exactly these columns.
  static Plane from_orthonormal(const Mat& basis, double tol = 1e-10);

  /// Hyperplane with the given (not necessarily unit) normal.
  static Plane from_normal(const Vec& normal);

  const Mat& proj() const noexcept { return proj_; }
  const Mat& basis() const noexcept { return basis_; }
  int dim() const noexcept { return static_cast<int>(basis_.cols()); }
  int ambient() const noexcept { return static_cast<int>(proj_.rows()); }

  /// Bitwise equality of projectors.
  bool same_as(const Plane& other) const noexcept;

 private:
  Plane(Mat basis);

  Mat basis_;
  Mat proj_;
};

Plane plane_from_basis(std::span<const Vec> vectors);

/// Operator norm of proj(P) - proj(S).
double plane_distance(const Plane& p, const Plane& s);

Vec project(const Plane& p, const Vec& v);
Vec project_orth(const Plane& p, const Vec& v);

/// sum_j m_j delta_{x_j} (x) delta_{P_j}. Points are the columns of an n x N
/// matrix.
class PointCloudVarifold {
 public:
  PointCloudVarifold(Mat points, std::vector<double> masses, std::vector<Plane> planes);

  int ambient() const noexcept { return static_cast<int>(points_.rows()); }
  int dim() const noexcept { return planes_.front().dim(); }
  std::size_t size() const noexcept { return masses_.size(); }

  const Mat& points() const noexcept { return points_; }
  auto point(std::size_t j) const { return points_.col(static_cast<Eigen::Index>(j)); }
  const std::vector<double>& masses() const noexcept { return masses_; }
  const std::vector<Plane>& planes() const noexcept { return planes_; }
  double total_mass() const;

  /// Column-major n x n projector of point j, stored contiguously for all points.
  const double* projector(std::size_t j) const noexcept {
    const auto nn = static_cast<std::size_t>(ambient() * ambient());
    return packed_.data() + j * nn;
  }

 private:
  Mat points_;
  std::vector<double> masses_;
  std::vector<Plane> planes_;
  std::vector<double> packed_;
};

struct Box {
  Vec lo;
  Vec hi;

  double volume() const { return (hi - lo).prod(); }
  double diameter() const { return (hi - lo).norm(); }
  bool contains(const Vec& x) const;  // half-open [lo, hi)
};

/// Cellwise-constant density m_K / |K| on each box K with one plane per box.
class VolumetricVarifold {
 public:
  VolumetricVarifold(std::vector<Box> cells, std::vector<double> masses, std::vector<Plane> planes);

  int ambient() const noexcept { return static_cast<int>(cells_.front().lo.size()); }
  int dim() const noexcept { return planes_.front().dim(); }
  std::size_t size() const noexcept { return cells_.size(); }

  const std::vector<Box>& cells() const noexcept { return cells_; }
  const std::vector<double>& masses() const noexcept { return masses_; }
  const std::vector<Plane>& planes() const noexcept { return planes_; }
  double total_mass() const;

 private:
  std::vector<Box> cells_;
  std::vector<double> masses_;
  std::vector<Plane> planes_;
};

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;

  /// Throws on out-of-range indices or faces of area <= 1e-14.
  void validate() const;
  double face_area(std::size_t f) const;
};

/// Per-point curvature vectors (columns of `vectors`).
struct CurvatureField {
  Mat vectors;
  std::vector<double> magnitudes;
  std::vector<std::uint8_t> valid;

  static CurvatureField zeros(int n, std::size_t count);
  std::size_t size() const noexcept { return valid.size(); }
  std::size_t valid_count() const;
  void set(std::size_t i, const Vec& h);
  void set_invalid(std::size_t i);
};

}  // namespace varicurve
