#include "varicurve/geometry.hpp"

#include "varicurve/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>

namespace varicurve {

namespace {

// B B^T, filled so the result is exactly symmetric.
Mat outer_projector(const Mat& basis) {
  const Eigen::Index n = basis.rows();
  const Eigen::Index k = basis.cols();
  Mat proj(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index c = 0; c < k; ++c) s += basis(i, c) * basis(j, c);
      proj(i, j) = s;
      proj(j, i) = s;
    }
  }
  return proj;
}

}  // namespace

Plane::Plane(Mat basis) : basis_(std::move(basis)), proj_(outer_projector(basis_)) {}

Plane Plane::from_basis(const Mat& columns) {
  const Eigen::Index n = columns.rows();
  const Eigen::Index k = columns.cols();
  if (k < 1 || k >= n) {
    throw Error(ErrorCode::DimensionMismatch,
                "plane dimension " + std::to_string(k) + " not in [1, " + std::to_string(n) + ")");
  }
  Eigen::JacobiSVD<Mat> svd(columns, Eigen::ComputeThinU);
  if (svd.singularValues()(k - 1) <= 1e-10) {
    throw Error(ErrorCode::DegenerateBasis, "basis vectors are linearly dependent");
  }
  return Plane(svd.matrixU());
}

Plane Plane::from_orthonormal(const Mat& basis, double tol) {
  const Eigen::Index n = basis.rows();
  const Eigen::Index k = basis.cols();
  if (k < 1 || k >= n) {
    throw Error(ErrorCode::DimensionMismatch, "plane dimension out of range");
  }
  const Mat gram = basis.transpose() * basis;
  if ((gram - Mat::Identity(k, k)).cwiseAbs().maxCoeff() > tol) {
    throw Error(ErrorCode::DegenerateBasis, "basis is not orthonormal");
  }
  return Plane(basis);
}

Plane Plane::from_normal(const Vec& normal) {
  const Eigen::Index n = normal.size();
  const double len = normal.norm();
  if (n < 2 || !(len > 1e-300)) {
    throw Error(ErrorCode::DegenerateBasis, "zero normal");
  }
  const Vec u = normal / len;
  // Householder reflector H with H e_0 = -sign(u_0) u; its other columns span u^perp.
  Vec w = u;
  w(0) += (u(0) >= 0.0 ? 1.0 : -1.0);
  const double ww = w.squaredNorm();
  Mat basis(n, n - 1);
  for (Eigen::Index c = 1; c < n; ++c) {
    Vec col = Vec::Unit(n, c) - (2.0 * w(c) / ww) * w;
    basis.col(c - 1) = col;
  }
  return Plane(basis);
}

bool Plane::same_as(const Plane& other) const noexcept {
  if (proj_.rows() != other.proj_.rows()) return false;
  return std::memcmp(proj_.data(), other.proj_.data(),
                     sizeof(double) * static_cast<std::size_t>(proj_.size())) == 0;
}

Plane plane_from_basis(std::span<const Vec> vectors) {
  if (vectors.empty()) throw Error(ErrorCode::DegenerateBasis, "empty basis");
  const Eigen::Index n = vectors.front().size();
  Mat columns(n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t c = 0; c < vectors.size(); ++c) {
    if (vectors[c].size() != n) throw Error(ErrorCode::DimensionMismatch, "basis vectors differ in size");
    columns.col(static_cast<Eigen::Index>(c)) = vectors[c];
  }
  return Plane::from_basis(columns);
}

double plane_distance(const Plane& p, const Plane& s) {
  if (p.ambient() != s.ambient()) {
    throw Error(ErrorCode::DimensionMismatch, "planes live in different ambient spaces");
  }
  const Mat diff = p.proj() - s.proj();
  if (diff.rows() == 2) {
    const double a = diff(0, 0), b = diff(0, 1), c = diff(1, 1);
    const double half = 0.5 * (a - c);
    return std::abs(0.5 * (a + c)) + std::hypot(half, b);
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(diff, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

Vec project(const Plane& p, const Vec& v) {
  if (p.ambient() != v.size()) throw Error(ErrorCode::DimensionMismatch, "vector/plane size mismatch");
  return p.proj() * v;
}

Vec project_orth(const Plane& p, const Vec& v) { return v - project(p, v); }

PointCloudVarifold::PointCloudVarifold(Mat points, std::vector<double> masses, std::vector<Plane> planes)
    : points_(std::move(points)), masses_(std::move(masses)), planes_(std::move(planes)) {
  const auto count = static_cast<std::size_t>(points_.cols());
  if (count == 0) throw Error(ErrorCode::EmptyCloud, "point cloud varifold needs at least one point");
  if (masses_.size() != count || planes_.size() != count) {
    throw Error(ErrorCode::DimensionMismatch, "points, masses and planes differ in length");
  }
  const int d = planes_.front().dim();
  for (std::size_t j = 0; j < count; ++j) {
    if (!(masses_[j] > 0.0) || !std::isfinite(masses_[j])) {
      throw Error(ErrorCode::BadData, "mass " + std::to_string(j) + " is not positive");
    }
    if (planes_[j].ambient() != points_.rows() || planes_[j].dim() != d) {
      throw Error(ErrorCode::DimensionMismatch, "plane " + std::to_string(j) + " has wrong dimension");
    }
  }
  const auto nn = static_cast<std::size_t>(points_.rows() * points_.rows());
  packed_.resize(count * nn);
  for (std::size_t j = 0; j < count; ++j) {
    std::copy_n(planes_[j].proj().data(), nn, packed_.begin() + static_cast<std::ptrdiff_t>(j * nn));
  }
}

double PointCloudVarifold::total_mass() const {
  return std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

bool Box::contains(const Vec& x) const {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x(i) >= lo(i) && x(i) < hi(i))) return false;
  }
  return true;
}

VolumetricVarifold::VolumetricVarifold(std::vector<Box> cells, std::vector<double> masses,
                                       std::vector<Plane> planes)
    : cells_(std::move(cells)), masses_(std::move(masses)), planes_(std::move(planes)) {
  if (cells_.empty()) throw Error(ErrorCode::EmptyCloud, "volumetric varifold needs at least one cell");
  if (masses_.size() != cells_.size() || planes_.size() != cells_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "cells, masses and planes differ in length");
  }
  const auto n = cells_.front().lo.size();
  const int d = planes_.front().dim();
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    const Box& b = cells_[k];
    if (b.lo.size() != n || b.hi.size() != n || planes_[k].ambient() != n || planes_[k].dim() != d) {
      throw Error(ErrorCode::DimensionMismatch, "cell " + std::to_string(k) + " has wrong dimension");
    }
    if (!((b.hi - b.lo).minCoeff() > 0.0)) {
      throw Error(ErrorCode::BadData, "cell " + std::to_string(k) + " has no volume");
    }
    if (!(masses_[k] >= 0.0)) throw Error(ErrorCode::BadData, "negative cell mass");
  }
}

double VolumetricVarifold::total_mass() const {
  return std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

double TriMesh::face_area(std::size_t f) const {
  const auto& t = faces[f];
  const Vec3& a = vertices[static_cast<std::size_t>(t[0])];
  const Vec3& b = vertices[static_cast<std::size_t>(t[1])];
  const Vec3& c = vertices[static_cast<std::size_t>(t[2])];
  return 0.5 * (b - a).cross(c - a).norm();
}

void TriMesh::validate() const {
  const auto nv = static_cast<int>(vertices.size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    for (int idx : faces[f]) {
      if (idx < 0 || idx >= nv) {
        throw Error(ErrorCode::BadData, "face " + std::to_string(f) + " references a missing vertex");
      }
    }
    if (!(face_area(f) > 1e-14)) {
      throw Error(ErrorCode::DegenerateFace, "face " + std::to_string(f) + " has zero area");
    }
  }
}

CurvatureField CurvatureField::zeros(int n, std::size_t count) {
  CurvatureField field;
  field.vectors = Mat::Zero(n, static_cast<Eigen::Index>(count));
  field.magnitudes.assign(count, 0.0);
  field.valid.assign(count, 0);
  return field;
}

std::size_t CurvatureField::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

void CurvatureField::set(std::size_t i, const Vec& h) {
  const auto c = static_cast<Eigen::Index>(i);
  vectors.col(c) = h;
  magnitudes[i] = h.norm();
  valid[i] = 1;
}

void CurvatureField::set_invalid(std::size_t i) {
  vectors.col(static_cast<Eigen::Index>(i)).setZero();
  magnitudes[i] = 0.0;
  valid[i] = 0;
}

}  // namespace varicurve
