#pragma once

#include "varicurve/geometry.hpp"

#include <cstdint>

namespace varicurve {

/// True when every edge from v lies on exactly two faces of its star.
bool is_interior_vertex(const TriMesh& mesh, int v);

/// (1/2) sum over one-ring edges of (cot alpha + cot beta) (w - x).
/// Throws BoundaryVertex (unless require_interior is false), DegenerateFace
/// for star faces with area <= 1e-14 or an angle below 1e-6 rad, and
/// DegenerateStar for an isolated vertex.
Vec3 cotangent_curvature(const TriMesh& mesh, int v, bool require_interior = true);

/// First variation of the mesh varifold tested against the hat function of
/// v, summed face by face from the altitude geometry: area times
/// (x - y_F) / h_F^2, with y_F the foot of the altitude from x.
Vec3 first_variation_nodal(const TriMesh& mesh, int v, bool require_interior = true);

/// -first variation / mass of the hat function, i.e. 3 * cotangent sum / star area.
Vec3 vertex_mean_curvature(const TriMesh& mesh, int v, bool require_interior = true);

/// Geodesic sphere: regular icosahedron with `levels` midpoint subdivisions,
/// all vertices on the sphere of the given radius about the origin.
TriMesh icosphere(int levels, double radius = 1.0);

/// Closed fan around vertex 0 with 4 to 9 jittered ring vertices and a random
/// out-of-plane offset; every face keeps all angles well above 1e-6 rad.
TriMesh random_star(std::uint64_t seed, std::uint64_t index);

}  // namespace varicurve
