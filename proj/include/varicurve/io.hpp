#pragma once

#include "varicurve/geometry.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace varicurve {

/// Point-cloud text format. First line `# varicurve n=<n> d=<d> N=<N>`, then
/// one record per point: n coordinates, the mass, and the d x n row-major
/// orthonormal tangent basis. Numbers are written with 17 significant digits,
/// so a write/read round trip is exact.
void write_cloud(std::ostream& out, const PointCloudVarifold& v);
void write_cloud(const std::filesystem::path& path, const PointCloudVarifold& v);
PointCloudVarifold read_cloud(std::istream& in);
PointCloudVarifold read_cloud(const std::filesystem::path& path);

/// ASCII OFF; polygons with more than three corners are fanned into triangles.
TriMesh read_off(std::istream& in);
TriMesh read_off(const std::filesystem::path& path);
void write_off(std::ostream& out, const TriMesh& mesh);

/// CSV columns: index, coordinates, curvature components, |H|, valid.
void write_field_csv(std::ostream& out, const Mat& points, const CurvatureField& field);

/// 17 significant digits, which reads back to the same double.
std::string format_double(double x);

}  // namespace varicurve
