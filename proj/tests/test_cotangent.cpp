#include "support.hpp"

#include "varicurve/cotangent.hpp"
#include "varicurve/error.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <numbers>

using namespace varicurve;
using Catch::Matchers::WithinAbs;

namespace {

TriMesh fan(const Vec3& apex, const std::vector<Vec3>& ring) {
  TriMesh mesh;
  mesh.vertices.push_back(apex);
  mesh.vertices.insert(mesh.vertices.end(), ring.begin(), ring.end());
  const int k = static_cast<int>(ring.size());
  for (int i = 0; i < k; ++i) mesh.faces.push_back({0, 1 + i, 1 + (i + 1) % k});
  return mesh;
}

double star_area(const TriMesh& mesh, int v) {
  double area = 0.0;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& face = mesh.faces[f];
    if (face[0] == v || face[1] == v || face[2] == v) area += mesh.face_area(f);
  }
  return area;
}

// Central-difference gradient of the star area with respect to the vertex.
Vec3 area_gradient(TriMesh mesh, int v) {
  Vec3 g;
  const double h = 1e-6;
  for (int i = 0; i < 3; ++i) {
    const Vec3 x = mesh.vertices[static_cast<std::size_t>(v)];
    mesh.vertices[static_cast<std::size_t>(v)](i) = x(i) + h;
    const double plus = star_area(mesh, v);
    mesh.vertices[static_cast<std::size_t>(v)](i) = x(i) - h;
    const double minus = star_area(mesh, v);
    mesh.vertices[static_cast<std::size_t>(v)] = x;
    g(i) = (plus - minus) / (2 * h);
  }
  return g;
}

std::optional<ErrorCode> code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

double diameter(const TriMesh& mesh) {
  double d = 0.0;
  for (const Vec3& a : mesh.vertices) {
    for (const Vec3& b : mesh.vertices) d = std::max(d, (a - b).norm());
  }
  return d;
}

}  // namespace

TEST_CASE("flat regular fan has zero curvature") {
  std::vector<Vec3> ring;
  for (int k = 0; k < 6; ++k) {
    const double t = k * std::numbers::pi / 3;
    ring.emplace_back(std::cos(t), std::sin(t), 0.0);
  }
  const TriMesh mesh = fan(Vec3::Zero(), ring);
  CHECK(is_interior_vertex(mesh, 0));
  CHECK(cotangent_curvature(mesh, 0).norm() <= 1e-12 * diameter(mesh));
  CHECK(first_variation_nodal(mesh, 0).norm() <= 1e-12 * diameter(mesh));
}

TEST_CASE("perturbed planar fans stay flat") {
  testing::Draws draws(60);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vec3> ring;
    const int k = 5 + static_cast<int>(draws.bits() % 5);
    for (int i = 0; i < k; ++i) {
      const double t = (i + draws.uniform(-0.3, 0.3)) * 2 * std::numbers::pi / k;
      const double r = draws.uniform(0.5, 1.5);
      ring.emplace_back(r * std::cos(t), r * std::sin(t), 0.0);
    }
    const TriMesh mesh = fan(Vec3(draws.uniform(-0.1, 0.1), draws.uniform(-0.1, 0.1), 0.0), ring);
    REQUIRE(cotangent_curvature(mesh, 0).norm() <= 1e-10);
  }
}

TEST_CASE("square pyramid apex") {
  const double h = 0.7;
  const std::vector<Vec3> ring{{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}};
  const TriMesh mesh = fan(Vec3(0, 0, h), ring);
  const Vec3 cot = cotangent_curvature(mesh, 0);
  // Each face has area sqrt(1 + 2 h^2) / 2, so the star area is 2 sqrt(1 + 2 h^2).
  const double expected_z = -4 * h / std::sqrt(1 + 2 * h * h);
  CHECK_THAT(cot(0), WithinAbs(0.0, 1e-14));
  CHECK_THAT(cot(1), WithinAbs(0.0, 1e-14));
  CHECK_THAT(cot(2), WithinAbs(expected_z, 1e-12));
  CHECK((cot + area_gradient(mesh, 0)).norm() <= 1e-8);
  CHECK((first_variation_nodal(mesh, 0) + cot).norm() <= 1e-12);
}

TEST_CASE("right isosceles triangle corner") {
  TriMesh mesh;
  mesh.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  mesh.faces = {{0, 1, 2}};
  CHECK_FALSE(is_interior_vertex(mesh, 0));
  const Vec3 cot = cotangent_curvature(mesh, 0, false);
  CHECK((cot - Vec3(0.5, 0.5, 0.0)).norm() <= 1e-14);
  CHECK(code_of([&] { (void)cotangent_curvature(mesh, 0); }) == ErrorCode::BoundaryVertex);
}

TEST_CASE("random stars: first variation equals minus the cotangent sum") {
  for (std::uint64_t k = 0; k < 100; ++k) {
    const TriMesh mesh = random_star(7, k);
    const Vec3 cot = cotangent_curvature(mesh, 0);
    const Vec3 fv = first_variation_nodal(mesh, 0);
    REQUIRE((fv + cot).norm() <= 1e-12 * std::max(cot.norm(), diameter(mesh)));
    REQUIRE((cot + area_gradient(mesh, 0)).norm() <= 1e-6 * std::max(1.0, cot.norm()));
  }
}

TEST_CASE("rigid motions and scaling") {
  testing::Draws draws(61);
  for (std::uint64_t k = 0; k < 20; ++k) {
    const TriMesh mesh = random_star(11, k);
    const Vec3 cot = cotangent_curvature(mesh, 0);
    const Vec3 h = vertex_mean_curvature(mesh, 0);
    const Eigen::Matrix3d q = draws.rotation(3);
    const Vec3 shift(draws.uniform(-5, 5), draws.uniform(-5, 5), draws.uniform(-5, 5));
    const double lambda = draws.uniform(0.3, 4.0);
    TriMesh moved = mesh;
    TriMesh scaled = mesh;
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
      moved.vertices[i] = q * mesh.vertices[i] + shift;
      scaled.vertices[i] = lambda * mesh.vertices[i];
    }
    REQUIRE((cotangent_curvature(moved, 0) - q * cot).norm() <= 1e-10 * std::max(1.0, cot.norm()));
    REQUIRE((cotangent_curvature(scaled, 0) - lambda * cot).norm() <= 1e-12 * lambda * std::max(1.0, cot.norm()));
    REQUIRE((vertex_mean_curvature(scaled, 0) - h / lambda).norm() <= 1e-12 * std::max(1.0, h.norm()) / lambda);
  }
}

TEST_CASE("regular icosahedron") {
  const double radius = 1.7;
  const TriMesh mesh = icosphere(0, radius);
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const Vec3 h = vertex_mean_curvature(mesh, static_cast<int>(v));
    REQUIRE(h.dot(-mesh.vertices[v]) > 0.0);
    REQUIRE(std::abs(h.norm() - 2.0 / radius) <= 0.15 * 2.0 / radius);
  }
}

// With the hat-function mass as denominator, the twelve valence-5 vertices keep
// an O(1) bias under midpoint subdivision, so refinement is judged on the mean.
TEST_CASE("sphere refinement") {
  const double radius = 1.7;
  double previous = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= 3; ++level) {
    const TriMesh mesh = icosphere(level, radius);
    double total = 0.0;
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
      const Vec3 h = vertex_mean_curvature(mesh, static_cast<int>(v));
      REQUIRE(h.dot(-mesh.vertices[v]) > 0.0);
      total += std::abs(h.norm() - 2.0 / radius);
    }
    const double mean = total / static_cast<double>(mesh.vertices.size());
    CHECK(mean < previous);
    previous = mean;
  }
  CHECK(previous <= 0.01 * 2.0 / radius);
}

TEST_CASE("degenerate input") {
  TriMesh sliver = fan(Vec3::Zero(), {{1, 0, 0}, {2, 0, 0}, {0, 1, 0}});
  CHECK(code_of([&] { (void)cotangent_curvature(sliver, 0); }) == ErrorCode::DegenerateFace);

  TriMesh lonely;
  lonely.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(5, 5, 5)};
  lonely.faces = {{0, 1, 2}};
  CHECK(code_of([&] { (void)cotangent_curvature(lonely, 3, false); }) == ErrorCode::DegenerateStar);
}
