#include "support.hpp"

#include "varicurve/error.hpp"
#include "varicurve/shapes.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace varicurve;
using Catch::Matchers::WithinAbs;
using Vec2d = Eigen::Vector2d;

namespace {

// Curvature vector from a 5-point stencil on the parametrization.
Vec fd_curvature(const ShapeSpec& shape, std::size_t piece, double t) {
  const double h = 1e-3;
  const Vec m2 = shape_point(shape, piece, t - 2 * h);
  const Vec m1 = shape_point(shape, piece, t - h);
  const Vec p1 = shape_point(shape, piece, t + h);
  const Vec p2 = shape_point(shape, piece, t + 2 * h);
  const Vec c = shape_point(shape, piece, t);
  const Vec v = (m2 - 8 * m1 + 8 * p1 - p2) / (12 * h);
  const Vec a = (-m2 + 16 * m1 - 30 * c + 16 * p1 - p2) / (12 * h * h);
  const double s2 = v.squaredNorm();
  return (a - (a.dot(v) / s2) * v) / s2;
}


}  // namespace

TEST_CASE("four points on a circle") {
  SamplingSpec s;
  s.count = 4;
  const ShapeSample smp = sample(ShapeSpec::circle(0.5), s);
  const double expected[4][2] = {{0.5, 0}, {0, 0.5}, {-0.5, 0}, {0, -0.5}};
  for (std::size_t j = 0; j < 4; ++j) {
    REQUIRE_THAT(smp.cloud.point(j)(0), WithinAbs(expected[j][0], 1e-15));
    REQUIRE_THAT(smp.cloud.point(j)(1), WithinAbs(expected[j][1], 1e-15));
    const Vec h = smp.curvature.col(static_cast<Eigen::Index>(j));
    REQUIRE_THAT(h.norm(), WithinAbs(2.0, 1e-14));
    REQUIRE((h / 2.0 + smp.cloud.point(j) / 0.5).norm() < 1e-14);
  }
  CHECK(smp.h_max == 2.0);
}

TEST_CASE("ellipse curvature at the vertex") {
  const Vec h = exact_curvature(ShapeSpec::ellipse(1.0, 0.5), 0, 0.0);
  CHECK_THAT(h(0), WithinAbs(-4.0, 1e-13));
  CHECK_THAT(h(1), WithinAbs(0.0, 1e-13));
  CHECK_THAT(max_curvature(ShapeSpec::ellipse(1.0, 0.5)), WithinAbs(4.0, 1e-13));
}

TEST_CASE("flower curvature matches the polar formula") {
  testing::Draws draws(30);
  const ShapeSpec flower = ShapeSpec::flower();
  for (int k = 0; k < 100; ++k) {
    const double t = draws.uniform(0.0, 2 * std::numbers::pi);
    const double r = 0.5 * (1 + 0.5 * std::sin(6 * t + std::numbers::pi / 2));
    const double dr = 1.5 * std::cos(6 * t + std::numbers::pi / 2);
    const double ddr = -9.0 * std::sin(6 * t + std::numbers::pi / 2);
    const double kappa = (r * r + 2 * dr * dr - r * ddr) / std::pow(r * r + dr * dr, 1.5);
    REQUIRE_THAT(exact_curvature(flower, 0, t).norm(), WithinAbs(std::abs(kappa), 1e-9));
  }
}

TEST_CASE("oracle agrees with finite differences") {
  testing::Draws draws(31);
  for (const ShapeSpec& shape : {ShapeSpec::circle(0.5), ShapeSpec::ellipse(1.0, 0.5), ShapeSpec::flower(),
                                 ShapeSpec::eight(), ShapeSpec::two_circles()}) {
    for (std::size_t piece = 0; piece < piece_count(shape); ++piece) {
      for (int k = 0; k < 100; ++k) {
        const double t = draws.uniform(0.0, 2 * std::numbers::pi);
        REQUIRE((exact_curvature(shape, piece, t) - fd_curvature(shape, piece, t)).cwiseAbs().maxCoeff() <= 1e-6);
      }
    }
  }
}

TEST_CASE("two circles cross with |H| = sqrt(3) on average") {
  const ShapeSpec shape = ShapeSpec::two_circles(0.5, 0.5);
  const Vec p(Eigen::Vector2d(0.0, std::sqrt(0.25 - 0.0625)));
  // Parameters of p on each circle, centers at (-0.25, 0) and (0.25, 0).
  const double t0 = std::atan2(p(1), p(0) + 0.25);
  const double t1 = std::atan2(p(1), p(0) - 0.25);
  REQUIRE((shape_point(shape, 0, t0) - p).norm() < 1e-14);
  REQUIRE((shape_point(shape, 1, t1) - p).norm() < 1e-14);
  const Vec mean = 0.5 * (exact_curvature(shape, 0, t0) + exact_curvature(shape, 1, t1));
  CHECK_THAT(mean.norm(), WithinAbs(std::sqrt(3.0), 1e-12));
}

TEST_CASE("double bubble construction") {
  const DoubleBubble db2 = double_bubble(2, 1.0, 0.6);
  CHECK_THAT(db2.r0, WithinAbs(1.5, 1e-12));
  CHECK_FALSE(db2.flat);
  const Vec target = db2.junction_mean_curvature();
  CHECK_THAT(target(0), WithinAbs(0.0, 1e-12));
  CHECK_THAT(target(1), WithinAbs(-0.839, 5e-4));

  const DoubleBubble flat = double_bubble(3, 1.0, 1.0);
  CHECK(flat.flat);
  CHECK(std::isinf(flat.r0));
  CHECK_THROWS_AS(double_bubble(2, 0.5, 1.0), Error);

  // The three arcs meet at 120 degrees: tangents at the junction are the
  // perpendiculars of the radii through it.
  for (const DoubleBubble& db : {db2, double_bubble(2, 1.0, 0.7), double_bubble(2, 1.0, 0.9)}) {
    const Vec2d p(db.px, db.py);
    const Vec2d n1 = (p - Vec2d(0, 0)).normalized();
    const Vec2d n2 = (p - Vec2d(db.d, 0)).normalized();
    const Vec2d n0 = (p - Vec2d(db.c0x, 0)).normalized();
    const double a12 = std::acos(std::clamp(n1.dot(n2), -1.0, 1.0));
    const double a10 = std::acos(std::clamp(n1.dot(n0), -1.0, 1.0));
    const double a20 = std::acos(std::clamp(n2.dot(n0), -1.0, 1.0));
    CHECK_THAT(a12, WithinAbs(std::numbers::pi / 3, 1e-9));
    CHECK_THAT(std::min(a10, std::numbers::pi - a10), WithinAbs(std::numbers::pi / 3, 1e-9));
    CHECK_THAT(std::min(a20, std::numbers::pi - a20), WithinAbs(std::numbers::pi / 3, 1e-9));
  }
}

TEST_CASE("sampled bubbles carry the piecewise oracle") {
  SamplingSpec s;
  s.count = 3000;
  const ShapeSample smp = sample(double_bubble(3, 1.0, 0.7).spec(), s);
  CHECK(smp.cloud.size() == 3000);
  CHECK(smp.piece_counts.size() == 3);
  for (std::size_t j = 0; j < smp.cloud.size(); ++j) {
    const double m = smp.curvature.col(static_cast<Eigen::Index>(j)).norm();
    REQUIRE((std::abs(m - 2.0) < 1e-12 || std::abs(m - 2.0 / 0.7) < 1e-12 || std::abs(m - 2.0 * (1 / 0.7 - 1)) < 1e-12));
  }
}

TEST_CASE("generated planes are valid and generation is reproducible") {
  SamplingSpec s;
  s.count = 2000;
  s.mode = SamplingMode::NonuniformGaussian;
  s.noise_variance = 1e-6;
  s.seed = 99;
  const ShapeSample a = sample(ShapeSpec::flower(), s);
  const ShapeSample b = sample(ShapeSpec::flower(), s);
  CHECK(a.cloud.points() == b.cloud.points());
  for (const Plane& p : a.cloud.planes()) {
    REQUIRE((p.proj() * p.proj() - p.proj()).norm() < 1e-12);
    REQUIRE(std::abs(p.proj().trace() - 1.0) < 1e-12);
  }
  s.seed = 100;
  CHECK(sample(ShapeSpec::flower(), s).cloud.points() != a.cloud.points());
}

TEST_CASE("regression sampling reports dropped points") {
  SamplingSpec s;
  s.count = 50;
  s.tangents = TangentMode::Regression;
  s.regression_radius = 0.07;  // spacing is 2 pi 0.5 / 50 = 0.0628
  const ShapeSample smp = sample(ShapeSpec::circle(0.5), s);
  CHECK(smp.dropped == 0);
  CHECK(smp.cloud.size() == 50);
  s.regression_radius = 1e-4;  // every point alone in its ball
  CHECK_THROWS_AS(sample(ShapeSpec::circle(0.5), s), Error);
}

TEST_CASE("shape validation") {
  CHECK_THROWS_AS(sample(ShapeSpec::two_circles(0.5, 2.0), SamplingSpec{}), Error);
  CHECK_THROWS_AS(shape_kind_from_string("torus"), Error);
  CHECK(shape_kind_from_string("flower") == ShapeKind::Flower);
}
