#pragma once

#include "varicurve/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace varicurve {

enum class ShapeKind { Circle, Ellipse, Flower, Eight, TwoCircles, DoubleBubble2D, DoubleBubble3D };

std::string_view to_string(ShapeKind kind);
ShapeKind shape_kind_from_string(std::string_view name);

/// Test shape. Parameter meaning by kind:
///   circle: a = radius; ellipse: a, b semi-axes; two_circles: a = radius,
///   b = center separation; double bubbles: a = r_outer_1, b = r_outer_2.
/// Flower and eight are fixed curves (their parameters are ignored).
struct ShapeSpec {
  ShapeKind kind = ShapeKind::Circle;
  double a = 0.5;
  double b = 0.5;

  static ShapeSpec circle(double radius = 0.5);
  static ShapeSpec ellipse(double a = 1.0, double b = 0.5);
  static ShapeSpec flower();
  static ShapeSpec eight();
  /// Default separation equals the radius, so the circles cross at 60 degrees.
  static ShapeSpec two_circles(double radius = 0.5, double separation = 0.5);

  int ambient() const { return kind == ShapeKind::DoubleBubble3D ? 3 : 2; }
  int dim() const { return kind == ShapeKind::DoubleBubble3D ? 2 : 1; }
  void validate() const;
};

/// Planar construction shared by both double bubbles (the 3D one is its
/// surface of revolution about the x-axis). Outer centers at (0, 0) and (d, 0);
/// the junction is (px, +-py).
struct DoubleBubble {
  int dim = 2;
  double r1 = 1.0;
  double r2 = 0.6;
  double r0 = 0.0;     // interface radius, +inf when flat
  bool flat = false;   // r1 == r2
  double d = 0.0;      // distance between outer centers
  double px = 0.0;
  double py = 0.0;
  double c0x = 0.0;    // interface center (unused when flat)

  ShapeSpec spec() const;
  /// Mean of the three pieces' curvature vectors at the upper junction
  /// (px, py[, 0]); curves use 1/R, spheres 2/R.
  Vec junction_mean_curvature() const;
};

/// Standard double bubble; throws BadShape unless r_outer_1 >= r_outer_2 > 0.
DoubleBubble double_bubble(int dim, double r_outer_1, double r_outer_2);

enum class SamplingMode { UniformParameter, NonuniformGaussian };
enum class TangentMode { Exact, Regression };

struct SamplingSpec {
  std::size_t count = 1000;
  SamplingMode mode = SamplingMode::UniformParameter;
  TangentMode tangents = TangentMode::Exact;
  std::optional<double> regression_radius;  // required for regression
  std::optional<double> noise_variance;
  bool noise_is_stddev = false;             // read noise_variance as a standard deviation
  std::uint64_t seed = 7;

  void validate() const;
};

/// Point cloud plus the exact oracle at every point.
struct ShapeSample {
  PointCloudVarifold cloud;
  Mat curvature;                    // exact H at each point's parameter
  std::vector<double> parameter;    // t_j (curves) or polar angle (caps)
  std::vector<int> piece;           // arc / cap index per point
  std::vector<std::size_t> piece_counts;
  std::size_t dropped = 0;          // points without a regression plane
  Mat dropped_curvature;            // exact H at the dropped points
  double h_max = 0.0;               // analytic sup of |H| over the shape
};

ShapeSample sample(const ShapeSpec& shape, const SamplingSpec& s);

/// Point on a curve piece (2D shapes only).
Vec shape_point(const ShapeSpec& shape, std::size_t piece, double t);

/// Exact curvature vector of a curve piece at parameter t. Throws
/// JunctionPoint at the end of an open piece.
Vec exact_curvature(const ShapeSpec& shape, std::size_t piece, double t);

/// Curvature vector of a 3D bubble cap at the cap point with polar angle phi
/// and azimuth theta (2/R times the inward normal; zero on a flat interface).
Vec exact_curvature(const ShapeSpec& shape, std::size_t piece, double phi, double theta);

/// Number of curve pieces / caps.
std::size_t piece_count(const ShapeSpec& shape);

/// Analytic sup of |H| over the whole shape.
double max_curvature(const ShapeSpec& shape);

}  // namespace varicurve
