#include "varicurve/cotangent.hpp"

#include "varicurve/error.hpp"
#include "varicurve/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace varicurve {

namespace {

constexpr double kMinAngle = 1e-6;

// A star face seen from x: the two other corners in face order.
struct Wedge {
  std::size_t face;
  Vec3 a;
  Vec3 b;
};

double angle_between(const Vec3& u, const Vec3& w) { return std::atan2(u.cross(w).norm(), u.dot(w)); }

double cot_between(const Vec3& u, const Vec3& w) { return u.dot(w) / u.cross(w).norm(); }

std::vector<Wedge> star_of(const TriMesh& mesh, int v, bool require_interior) {
  if (v < 0 || static_cast<std::size_t>(v) >= mesh.vertices.size()) {
    throw Error(ErrorCode::BadData, "vertex index " + std::to_string(v) + " out of range");
  }
  const Vec3& x = mesh.vertices[static_cast<std::size_t>(v)];
  std::vector<Wedge> star;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& t = mesh.faces[f];
    for (int corner = 0; corner < 3; ++corner) {
      if (t[static_cast<std::size_t>(corner)] != v) continue;
      const int ia = t[static_cast<std::size_t>((corner + 1) % 3)];
      const int ib = t[static_cast<std::size_t>((corner + 2) % 3)];
      for (int idx : {ia, ib}) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= mesh.vertices.size()) {
          throw Error(ErrorCode::BadData, "face " + std::to_string(f) + " references a missing vertex");
        }
      }
      star.push_back({f, mesh.vertices[static_cast<std::size_t>(ia)], mesh.vertices[static_cast<std::size_t>(ib)]});
    }
  }
  if (star.empty()) throw Error(ErrorCode::DegenerateStar, "vertex " + std::to_string(v) + " has no faces");
  if (require_interior && !is_interior_vertex(mesh, v)) {
    throw Error(ErrorCode::BoundaryVertex, "vertex " + std::to_string(v) + " is on the boundary");
  }
  for (const Wedge& w : star) {
    const Vec3 ea = w.a - x;
    const Vec3 eb = w.b - x;
    const double area = 0.5 * ea.cross(eb).norm();
    const double smallest = std::min({angle_between(ea, eb), angle_between(x - w.a, w.b - w.a),
                                      angle_between(x - w.b, w.a - w.b)});
    if (!(area > 1e-14) || !(smallest >= kMinAngle)) {
      throw Error(ErrorCode::DegenerateFace, "face " + std::to_string(w.face) + " in the star is degenerate");
    }
  }
  return star;
}

}  // namespace

bool is_interior_vertex(const TriMesh& mesh, int v) {
  std::map<int, int> edge_faces;
  for (const auto& t : mesh.faces) {
    for (std::size_t corner = 0; corner < 3; ++corner) {
      if (t[corner] != v) continue;
      ++edge_faces[t[(corner + 1) % 3]];
      ++edge_faces[t[(corner + 2) % 3]];
    }
  }
  if (edge_faces.empty()) return false;
  return std::all_of(edge_faces.begin(), edge_faces.end(), [](const auto& e) { return e.second == 2; });
}

Vec3 cotangent_curvature(const TriMesh& mesh, int v, bool require_interior) {
  const auto star = star_of(mesh, v, require_interior);
  const Vec3& x = mesh.vertices[static_cast<std::size_t>(v)];
  Vec3 sum = Vec3::Zero();
  for (const Wedge& w : star) {
    // The angle at a faces edge x-b and vice versa.
    const double cot_a = cot_between(x - w.a, w.b - w.a);
    const double cot_b = cot_between(x - w.b, w.a - w.b);
    sum += cot_a * (w.b - x) + cot_b * (w.a - x);
  }
  return 0.5 * sum;
}

Vec3 first_variation_nodal(const TriMesh& mesh, int v, bool require_interior) {
  const auto star = star_of(mesh, v, require_interior);
  const Vec3& x = mesh.vertices[static_cast<std::size_t>(v)];
  Vec3 sum = Vec3::Zero();
  for (const Wedge& w : star) {
    const Vec3 edge = w.b - w.a;
    const Vec3 foot = w.a + ((x - w.a).dot(edge) / edge.squaredNorm()) * edge;
    const Vec3 up = x - foot;
    const double height = up.norm();
    const double area = 0.5 * (w.a - x).cross(w.b - x).norm();
    // The hat function rises from 0 on the opposite edge to 1 at x.
    sum += area * (up / height) / height;
  }
  return sum;
}

Vec3 vertex_mean_curvature(const TriMesh& mesh, int v, bool require_interior) {
  const auto star = star_of(mesh, v, require_interior);
  const Vec3& x = mesh.vertices[static_cast<std::size_t>(v)];
  double area = 0.0;
  for (const Wedge& w : star) area += 0.5 * (w.a - x).cross(w.b - x).norm();
  if (!(area > 0.0)) throw Error(ErrorCode::DegenerateStar, "star has zero area");
  return -3.0 * first_variation_nodal(mesh, v, require_interior) / area;
}

TriMesh icosphere(int levels, double radius) {
  if (levels < 0 || !(radius > 0.0)) throw Error(ErrorCode::BadShape, "icosphere needs levels >= 0, radius > 0");
  const double phi = std::numbers::phi;
  TriMesh mesh;
  mesh.vertices = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
                   {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  mesh.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (auto& p : mesh.vertices) p = radius * p.normalized();
  for (int level = 0; level < levels; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int i, int j) {
      const auto key = std::minmax(i, j);
      const auto [it, inserted] = midpoint.try_emplace(key, static_cast<int>(mesh.vertices.size()));
      if (inserted) {
        const Vec3 m = 0.5 * (mesh.vertices[static_cast<std::size_t>(i)] + mesh.vertices[static_cast<std::size_t>(j)]);
        mesh.vertices.push_back(radius * m.normalized());
      }
      return it->second;
    };
    std::vector<std::array<int, 3>> faces;
    faces.reserve(4 * mesh.faces.size());
    for (const auto& [a, b, c] : mesh.faces) {
      const int ab = mid(a, b);
      const int bc = mid(b, c);
      const int ca = mid(c, a);
      faces.push_back({a, ab, ca});
      faces.push_back({b, bc, ab});
      faces.push_back({c, ca, bc});
      faces.push_back({ab, bc, ca});
    }
    mesh.faces = std::move(faces);
  }
  return mesh;
}

TriMesh random_star(std::uint64_t seed, std::uint64_t index) {
  const CounterRng rng(seed, 0x5747a12ULL + index);
  std::uint64_t counter = 0;
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(counter++); };
  const int ring = 4 + static_cast<int>(rng.bits(counter++) % 6);
  TriMesh mesh;
  Vec3 center;
  for (int i = 0; i < 3; ++i) center(i) = uniform(-1, 1);
  const double scale = uniform(0.2, 3.0);
  mesh.vertices.push_back(center);
  const double sector = 2.0 * std::numbers::pi / ring;
  for (int k = 0; k < ring; ++k) {
    const double angle = (k + uniform(-0.3, 0.3)) * sector;
    const double r = scale * uniform(0.5, 1.5);
    const double lift = scale * uniform(-0.8, 0.8);
    mesh.vertices.push_back(center + Vec3(r * std::cos(angle), r * std::sin(angle), lift));
  }
  for (int k = 0; k < ring; ++k) mesh.faces.push_back({0, 1 + k, 1 + (k + 1) % ring});
  return mesh;
}

}  // namespace varicurve
