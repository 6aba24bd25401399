#include "support.hpp"

#include "varicurve/error.hpp"
#include "varicurve/geometry.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace varicurve;
using Catch::Matchers::WithinAbs;

namespace {

Mat column(double x, double y) {
  Mat m(2, 1);
  m << x, y;
  return m;
}

Plane line_at(double theta) { return Plane::from_basis(column(std::cos(theta), std::sin(theta))); }

}  // namespace

TEST_CASE("axis projector") {
  const Plane p = Plane::from_basis(column(1, 0));
  CHECK(p.dim() == 1);
  CHECK(p.ambient() == 2);
  CHECK(p.proj().isApprox(Eigen::Matrix2d{{1, 0}, {0, 0}}));
}

TEST_CASE("diagonal projector") {
  const Plane p = Plane::from_basis(column(1 / std::sqrt(2.0), 1 / std::sqrt(2.0)));
  CHECK((p.proj() - Mat::Constant(2, 2, 0.5)).norm() < 1e-15);
}

TEST_CASE("rank deficient basis is rejected") {
  Mat b(3, 2);
  b << 1, 2, 1, 2, 0, 0;
  REQUIRE_THROWS_AS(Plane::from_basis(b), Error);
  try {
    Plane::from_basis(b);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateBasis);
  }
}

TEST_CASE("projector invariants on random planes") {
  testing::Draws draws(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(draws.bits() % 5);
    const int d = 1 + static_cast<int>(draws.bits() % static_cast<std::uint64_t>(n - 1));
    const Plane p = Plane::from_basis(draws.gaussian(n, d));
    const Mat& q = p.proj();
    REQUIRE((q * q - q).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE((q - q.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(std::abs(q.trace() - d) < 1e-12);
  }
}

TEST_CASE("projector ignores the choice of basis") {
  testing::Draws draws(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(draws.bits() % 3);
    const int d = 1 + static_cast<int>(draws.bits() % static_cast<std::uint64_t>(n - 1));
    const Mat b = draws.orthonormal(n, d);
    const Mat q = draws.orthonormal(d, d);
    const Plane p = Plane::from_basis(b);
    const Plane s = Plane::from_basis(b * q);
    REQUIRE((p.proj() - s.proj()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("plane distance examples") {
  const Plane x = line_at(0.0);
  CHECK(plane_distance(x, x) == 0.0);
  CHECK_THAT(plane_distance(x, line_at(std::numbers::pi / 2)), WithinAbs(1.0, 1e-14));
  // Two lines at angle theta: the difference of projectors has eigenvalues +-sin(theta).
  for (int k = 0; k <= 90; ++k) {
    const double theta = k * std::numbers::pi / 90;
    REQUIRE_THAT(plane_distance(x, line_at(theta)), WithinAbs(std::abs(std::sin(theta)), 1e-13));
  }
}

TEST_CASE("plane distance is a metric") {
  testing::Draws draws(3);
  for (int trial = 0; trial < 300; ++trial) {
    const Plane a = Plane::from_basis(draws.gaussian(4, 2));
    const Plane b = Plane::from_basis(draws.gaussian(4, 2));
    const Plane c = Plane::from_basis(draws.gaussian(4, 2));
    REQUIRE(std::abs(plane_distance(a, b) - plane_distance(b, a)) < 1e-12);
    REQUIRE(plane_distance(a, c) <= plane_distance(a, b) + plane_distance(b, c) + 1e-12);
    REQUIRE(plane_distance(a, a) < 1e-12);
  }
}

TEST_CASE("projection splits a vector") {
  const Plane x = line_at(0.0);
  Vec v(2);
  v << 3, 4;
  CHECK((project(x, v) - Eigen::Vector2d(3, 0)).norm() == 0.0);
  CHECK((project_orth(x, v) - Eigen::Vector2d(0, 4)).norm() == 0.0);
  const Vec on = Eigen::Vector2d(2, 0);
  CHECK(project(x, on) == on);

  testing::Draws draws(4);
  for (int trial = 0; trial < 100; ++trial) {
    const Plane p = Plane::from_basis(draws.gaussian(5, 3));
    const Vec w = draws.gaussian(5, 1);
    REQUIRE((project(p, w) + project_orth(p, w) - w).norm() < 1e-13);
  }
}

TEST_CASE("orthonormal constructor keeps the basis") {
  const Mat b = column(0.6, 0.8);
  const Plane p = Plane::from_orthonormal(b);
  CHECK(p.basis() == b);
  REQUIRE_THROWS_AS(Plane::from_orthonormal(column(1.0, 1.0)), Error);
}

TEST_CASE("hyperplane from a normal") {
  const Plane p = Plane::from_normal(Eigen::Vector3d(0, 0, 2));
  CHECK(p.dim() == 2);
  CHECK((p.proj() - Eigen::Matrix3d{{1, 0, 0}, {0, 1, 0}, {0, 0, 0}}).norm() < 1e-15);
}

TEST_CASE("point cloud varifold validation") {
  const Plane x = line_at(0.0);
  Mat pts(2, 2);
  pts << 0, 1, 0, 0;
  const PointCloudVarifold v(pts, {1.0, 2.0}, {x, x});
  CHECK(v.size() == 2);
  CHECK(v.total_mass() == 3.0);
  CHECK(std::equal(x.proj().data(), x.proj().data() + 4, v.projector(1)));
  CHECK_THROWS_AS(PointCloudVarifold(pts, {1.0, 0.0}, {x, x}), Error);
  CHECK_THROWS_AS(PointCloudVarifold(pts, {1.0}, {x}), Error);
  CHECK_THROWS_AS(PointCloudVarifold(Mat(2, 0), {}, {}), Error);
  const Plane z = Plane::from_normal(Eigen::Vector3d(0, 0, 1));
  CHECK_THROWS_AS(PointCloudVarifold(pts, {1.0, 1.0}, {x, z}), Error);
}

TEST_CASE("box containment is half open") {
  const Box b{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)};
  CHECK(b.contains(Eigen::Vector2d(0, 0)));
  CHECK_FALSE(b.contains(Eigen::Vector2d(1, 0.5)));
  CHECK(b.volume() == 1.0);
}

TEST_CASE("mesh validation") {
  TriMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  m.faces = {{0, 1, 2}};
  CHECK_NOTHROW(m.validate());
  CHECK_THAT(m.face_area(0), WithinAbs(0.5, 1e-15));
  m.faces = {{0, 1, 3}};
  CHECK_THROWS_AS(m.validate(), Error);
  m.vertices.push_back({2, 0, 0});
  m.faces = {{0, 1, 3}};
  CHECK_THROWS_AS(m.validate(), Error);
}

TEST_CASE("curvature field bookkeeping") {
  CurvatureField f = CurvatureField::zeros(2, 3);
  f.set(1, Eigen::Vector2d(3, 4));
  f.set_invalid(2);
  CHECK(f.magnitudes[1] == 5.0);
  CHECK(f.valid_count() == 1);
}
