#include "varicurve/shapes.hpp"

#include "varicurve/error.hpp"
#include "varicurve/kernels.hpp"
#include "varicurve/random.hpp"
#include "varicurve/tangents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace varicurve {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Vec2 = Eigen::Vector2d;

// RNG streams.
constexpr std::uint64_t kStreamParameter = 1;
constexpr std::uint64_t kStreamNoise = 2;
constexpr std::uint64_t kStreamBands = 3;

struct Curve {
  enum class Type { Circle, Ellipse, Flower, Eight, Segment };
  Type type = Type::Circle;
  Vec2 center = Vec2::Zero();
  double radius = 1.0;
  double a = 1.0;
  double b = 1.0;
  Vec2 p0 = Vec2::Zero();
  Vec2 p1 = Vec2::Zero();
  double t0 = 0.0;
  double t1 = kTwoPi;
  bool closed = true;

  Vec2 pos(double t) const {
    switch (type) {
      case Type::Circle: return center + radius * Vec2(std::cos(t), std::sin(t));
      case Type::Ellipse: return {a * std::cos(t), b * std::sin(t)};
      case Type::Flower: {
        const double r = flower_r(t);
        return r * Vec2(std::cos(t), std::sin(t));
      }
      case Type::Eight:
        return {0.5 * std::sin(t) * (std::cos(t) + 1.0), 0.5 * std::sin(t) * (std::cos(t) - 1.0)};
      case Type::Segment: return p0 + t * (p1 - p0);
    }
    return Vec2::Zero();
  }

  Vec2 d1(double t) const {
    switch (type) {
      case Type::Circle: return radius * Vec2(-std::sin(t), std::cos(t));
      case Type::Ellipse: return {-a * std::sin(t), b * std::cos(t)};
      case Type::Flower: {
        const double r = flower_r(t);
        const double dr = flower_dr(t);
        return dr * Vec2(std::cos(t), std::sin(t)) + r * Vec2(-std::sin(t), std::cos(t));
      }
      case Type::Eight:
        return {0.5 * (std::cos(2.0 * t) + std::cos(t)), 0.5 * (std::cos(2.0 * t) - std::cos(t))};
      case Type::Segment: return p1 - p0;
    }
    return Vec2::Zero();
  }

  Vec2 d2(double t) const {
    switch (type) {
      case Type::Circle: return -radius * Vec2(std::cos(t), std::sin(t));
      case Type::Ellipse: return {-a * std::cos(t), -b * std::sin(t)};
      case Type::Flower: {
        const double r = flower_r(t);
        const double dr = flower_dr(t);
        const double ddr = flower_ddr(t);
        const Vec2 radial(std::cos(t), std::sin(t));
        const Vec2 normal(-std::sin(t), std::cos(t));
        return (ddr - r) * radial + 2.0 * dr * normal;
      }
      case Type::Eight:
        return {0.5 * (-2.0 * std::sin(2.0 * t) - std::sin(t)), 0.5 * (-2.0 * std::sin(2.0 * t) + std::sin(t))};
      case Type::Segment: return Vec2::Zero();
    }
    return Vec2::Zero();
  }

  // Component of c'' normal to c', divided by |c'|^2.
  Vec2 curvature(double t) const {
    const Vec2 v = d1(t);
    const Vec2 acc = d2(t);
    const double speed2 = v.squaredNorm();
    return (acc - (acc.dot(v) / speed2) * v) / speed2;
  }

  double length() const {
    switch (type) {
      case Type::Circle: return radius * std::abs(t1 - t0);
      case Type::Segment: return (p1 - p0).norm() * std::abs(t1 - t0);
      default: return integrate([this](double t) { return d1(t).norm(); }, t0, t1, 1e-10);
    }
  }

  static double flower_r(double t) { return 0.5 * (1.0 + 0.5 * std::sin(6.0 * t + kPi / 2.0)); }
  static double flower_dr(double t) { return 1.5 * std::cos(6.0 * t + kPi / 2.0); }
  static double flower_ddr(double t) { return -9.0 * std::sin(6.0 * t + kPi / 2.0); }
};

struct Cap {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
  double axis_sign = 1.0;  // polar angle measured from axis_sign * e_x
  double phi_max = kPi;
  bool disk = false;       // flat interface: x = center.x, polar radius in [0, radius]

  double area() const {
    if (disk) return kPi * radius * radius;
    return kTwoPi * radius * radius * (1.0 - std::cos(phi_max));
  }
  // For disks `phi` is the polar radius.
  Vec3 point(double phi, double theta) const {
    if (disk) return center + Vec3(0.0, phi * std::cos(theta), phi * std::sin(theta));
    return center + radius * Vec3(axis_sign * std::cos(phi), std::sin(phi) * std::cos(theta),
                                  std::sin(phi) * std::sin(theta));
  }
  Vec3 normal(const Vec3& x) const {
    if (disk) return Vec3::UnitX();
    return (x - center) / radius;
  }
  Vec3 curvature(const Vec3& x) const {
    if (disk) return Vec3::Zero();
    return 2.0 * (center - x) / (radius * radius);
  }
};

std::vector<Curve> build_curves(const ShapeSpec& shape) {
  std::vector<Curve> curves;
  switch (shape.kind) {
    case ShapeKind::Circle: {
      Curve c;
      c.radius = shape.a;
      curves.push_back(c);
      break;
    }
    case ShapeKind::Ellipse: {
      Curve c;
      c.type = Curve::Type::Ellipse;
      c.a = shape.a;
      c.b = shape.b;
      curves.push_back(c);
      break;
    }
    case ShapeKind::Flower: {
      Curve c;
      c.type = Curve::Type::Flower;
      curves.push_back(c);
      break;
    }
    case ShapeKind::Eight: {
      Curve c;
      c.type = Curve::Type::Eight;
      curves.push_back(c);
      break;
    }
    case ShapeKind::TwoCircles: {
      Curve c;
      c.radius = shape.a;
      c.center = Vec2(-0.5 * shape.b, 0.0);
      curves.push_back(c);
      c.center = Vec2(0.5 * shape.b, 0.0);
      curves.push_back(c);
      break;
    }
    case ShapeKind::DoubleBubble2D: {
      const DoubleBubble db = double_bubble(2, shape.a, shape.b);
      Curve outer1;
      outer1.radius = db.r1;
      const double alpha1 = std::atan2(db.py, db.px);
      outer1.t0 = alpha1;
      outer1.t1 = kTwoPi - alpha1;
      outer1.closed = false;
      curves.push_back(outer1);

      Curve outer2;
      outer2.radius = db.r2;
      outer2.center = Vec2(db.d, 0.0);
      const double beta = std::atan2(db.py, db.px - db.d);
      outer2.t0 = -beta;
      outer2.t1 = beta;
      outer2.closed = false;
      curves.push_back(outer2);

      Curve inner;
      inner.closed = false;
      if (db.flat) {
        inner.type = Curve::Type::Segment;
        inner.p0 = Vec2(db.px, -db.py);
        inner.p1 = Vec2(db.px, db.py);
        inner.t0 = 0.0;
        inner.t1 = 1.0;
      } else {
        inner.radius = db.r0;
        inner.center = Vec2(db.c0x, 0.0);
        const double gamma = std::atan2(db.py, db.px - db.c0x);
        inner.t0 = gamma;
        inner.t1 = kTwoPi - gamma;
      }
      curves.push_back(inner);
      break;
    }
    case ShapeKind::DoubleBubble3D:
      throw Error(ErrorCode::BadShape, "3D bubble has no curve pieces");
  }
  return curves;
}

std::vector<Cap> build_caps(const ShapeSpec& shape) {
  if (shape.kind != ShapeKind::DoubleBubble3D) throw Error(ErrorCode::BadShape, "shape has no caps");
  const DoubleBubble db = double_bubble(3, shape.a, shape.b);
  std::vector<Cap> caps(3);
  caps[0].radius = db.r1;
  caps[0].axis_sign = -1.0;
  caps[0].phi_max = std::acos(std::clamp(-db.px / db.r1, -1.0, 1.0));

  caps[1].center = Vec3(db.d, 0.0, 0.0);
  caps[1].radius = db.r2;
  caps[1].axis_sign = 1.0;
  caps[1].phi_max = std::acos(std::clamp((db.px - db.d) / db.r2, -1.0, 1.0));

  if (db.flat) {
    caps[2].disk = true;
    caps[2].center = Vec3(db.px, 0.0, 0.0);
    caps[2].radius = db.py;
  } else {
    caps[2].center = Vec3(db.c0x, 0.0, 0.0);
    caps[2].radius = db.r0;
    caps[2].axis_sign = -1.0;
    caps[2].phi_max = std::asin(std::clamp(db.py / db.r0, -1.0, 1.0));
  }
  return caps;
}

// Largest-remainder apportionment of `total` by `weights`; ties go to the lower index.
std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> counts(weights.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = static_cast<double>(total) * weights[i] / sum;
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    assigned += counts[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& l, const auto& r) { return l.first > r.first; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++counts[remainders[k % remainders.size()].second];
  return counts;
}

double wrap_into(double t, double t0, double period) {
  double u = std::fmod(t - t0, period);
  if (u < 0.0) u += period;
  return t0 + u;
}

double golden_max(const std::function<double(double)>& f, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15; ++it) {
    if (fc > fd) {
      b = d; d = c; fd = fc; c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd; d = a + g * (b - a); fd = f(d);
    }
  }
  return std::max(fc, fd);
}

}  // namespace

std::string_view to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Circle: return "circle";
    case ShapeKind::Ellipse: return "ellipse";
    case ShapeKind::Flower: return "flower";
    case ShapeKind::Eight: return "eight";
    case ShapeKind::TwoCircles: return "two_circles";
    case ShapeKind::DoubleBubble2D: return "double_bubble_2d";
    case ShapeKind::DoubleBubble3D: return "double_bubble_3d";
  }
  return "unknown";
}

ShapeKind shape_kind_from_string(std::string_view name) {
  for (ShapeKind k : {ShapeKind::Circle, ShapeKind::Ellipse, ShapeKind::Flower, ShapeKind::Eight,
                      ShapeKind::TwoCircles, ShapeKind::DoubleBubble2D, ShapeKind::DoubleBubble3D}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::ParseError, "unknown shape '" + std::string(name) + "'");
}

ShapeSpec ShapeSpec::circle(double radius) { return {ShapeKind::Circle, radius, radius}; }
ShapeSpec ShapeSpec::ellipse(double a, double b) { return {ShapeKind::Ellipse, a, b}; }
ShapeSpec ShapeSpec::flower() { return {ShapeKind::Flower, 0.5, 0.5}; }
ShapeSpec ShapeSpec::eight() { return {ShapeKind::Eight, 0.5, 0.5}; }
ShapeSpec ShapeSpec::two_circles(double radius, double separation) {
  return {ShapeKind::TwoCircles, radius, separation};
}

void ShapeSpec::validate() const {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::BadShape, "shape radii must be positive");
  }
  if (kind == ShapeKind::TwoCircles && !(b < 2.0 * a)) {
    throw Error(ErrorCode::BadShape, "circles do not intersect");
  }
  if ((kind == ShapeKind::DoubleBubble2D || kind == ShapeKind::DoubleBubble3D) && a < b) {
    throw Error(ErrorCode::BadShape, "double bubble expects r_outer_1 >= r_outer_2");
  }
}

ShapeSpec DoubleBubble::spec() const {
  return {dim == 3 ? ShapeKind::DoubleBubble3D : ShapeKind::DoubleBubble2D, r1, r2};
}

Vec DoubleBubble::junction_mean_curvature() const {
  const double scale = dim == 3 ? 2.0 : 1.0;
  const Eigen::Vector2d p(px, py);
  Eigen::Vector2d sum = scale * (Eigen::Vector2d(0.0, 0.0) - p) / (r1 * r1) +
                        scale * (Eigen::Vector2d(d, 0.0) - p) / (r2 * r2);
  if (!flat) sum += scale * (Eigen::Vector2d(c0x, 0.0) - p) / (r0 * r0);
  sum /= 3.0;
  Vec out = Vec::Zero(dim);
  out(0) = sum(0);
  out(1) = sum(1);
  return out;
}

DoubleBubble double_bubble(int dim, double r_outer_1, double r_outer_2) {
  if (dim != 2 && dim != 3) throw Error(ErrorCode::BadShape, "double bubble dimension must be 2 or 3");
  if (!(r_outer_2 > 0.0) || !(r_outer_1 >= r_outer_2) || !std::isfinite(r_outer_1)) {
    throw Error(ErrorCode::BadShape, "double bubble expects r_outer_1 >= r_outer_2 > 0");
  }
  DoubleBubble db;
  db.dim = dim;
  db.r1 = r_outer_1;
  db.r2 = r_outer_2;
  // Outer radii at the junction meet at 60 degrees for 120-degree interfaces.
  db.d = std::sqrt(db.r1 * db.r1 + db.r2 * db.r2 - db.r1 * db.r2);
  db.px = (db.r1 * db.r1 - db.r2 * db.r2 + db.d * db.d) / (2.0 * db.d);
  db.py = std::sqrt(std::max(0.0, db.r1 * db.r1 - db.px * db.px));
  db.flat = db.r1 == db.r2;
  if (db.flat) {
    db.r0 = std::numeric_limits<double>::infinity();
    db.c0x = std::numeric_limits<double>::infinity();
  } else {
    db.r0 = 1.0 / (1.0 / db.r2 - 1.0 / db.r1);
    db.c0x = db.px + std::sqrt(db.r0 * db.r0 - db.py * db.py);
  }
  return db;
}

void SamplingSpec::validate() const {
  if (count < 4) throw Error(ErrorCode::BadData, "need at least 4 sample points");
  if (noise_variance && !(*noise_variance >= 0.0)) throw Error(ErrorCode::BadData, "noise variance must be >= 0");
  if (tangents == TangentMode::Regression && !(regression_radius && *regression_radius > 0.0)) {
    throw Error(ErrorCode::BadData, "regression tangents need a positive regression radius");
  }
}

std::size_t piece_count(const ShapeSpec& shape) {
  switch (shape.kind) {
    case ShapeKind::TwoCircles: return 2;
    case ShapeKind::DoubleBubble2D:
    case ShapeKind::DoubleBubble3D: return 3;
    default: return 1;
  }
}

Vec shape_point(const ShapeSpec& shape, std::size_t piece, double t) {
  shape.validate();
  const auto curves = build_curves(shape);
  if (piece >= curves.size()) throw Error(ErrorCode::BadData, "piece index out of range");
  return curves[piece].pos(t);
}

Vec exact_curvature(const ShapeSpec& shape, std::size_t piece, double t) {
  shape.validate();
  const auto curves = build_curves(shape);
  if (piece >= curves.size()) throw Error(ErrorCode::BadData, "piece index out of range");
  const Curve& c = curves[piece];
  if (!c.closed) {
    const double tol = 1e-12 * std::max(1.0, std::abs(c.t1 - c.t0));
    if (std::abs(t - c.t0) <= tol || std::abs(t - c.t1) <= tol) {
      throw Error(ErrorCode::JunctionPoint, "curvature at a junction is not a pointwise quantity");
    }
  }
  return c.curvature(t);
}

Vec exact_curvature(const ShapeSpec& shape, std::size_t piece, double phi, double theta) {
  shape.validate();
  const auto caps = build_caps(shape);
  if (piece >= caps.size()) throw Error(ErrorCode::BadData, "piece index out of range");
  const Cap& cap = caps[piece];
  const double edge = cap.disk ? cap.radius : cap.phi_max;
  if (std::abs(phi - edge) <= 1e-12) throw Error(ErrorCode::JunctionPoint, "point lies on the singular circle");
  return cap.curvature(cap.point(phi, theta));
}

double max_curvature(const ShapeSpec& shape) {
  shape.validate();
  switch (shape.kind) {
    case ShapeKind::Circle:
    case ShapeKind::TwoCircles: return 1.0 / shape.a;
    case ShapeKind::Ellipse: {
      const double big = std::max(shape.a, shape.b);
      const double small = std::min(shape.a, shape.b);
      return big / (small * small);
    }
    case ShapeKind::DoubleBubble2D: return 1.0 / shape.b;
    case ShapeKind::DoubleBubble3D: return 2.0 / shape.b;
    case ShapeKind::Flower:
    case ShapeKind::Eight: {
      const Curve c = build_curves(shape).front();
      auto mag = [&c](double t) { return c.curvature(t).norm(); };
      constexpr int kScan = 20000;
      const double h = kTwoPi / kScan;
      double best = 0.0;
      int arg = 0;
      for (int i = 0; i < kScan; ++i) {
        const double m = mag(i * h);
        if (m > best) {
          best = m;
          arg = i;
        }
      }
      return std::max(best, golden_max(mag, (arg - 1) * h, (arg + 1) * h));
    }
  }
  return 0.0;
}

ShapeSample sample(const ShapeSpec& shape, const SamplingSpec& s) {
  shape.validate();
  s.validate();
  const int n = shape.ambient();
  const int d = shape.dim();
  const CounterRng param_rng(s.seed, kStreamParameter);
  const CounterRng noise_rng(s.seed, kStreamNoise);
  const CounterRng band_rng(s.seed, kStreamBands);

  Mat points(n, static_cast<Eigen::Index>(s.count));
  Mat curvature(n, static_cast<Eigen::Index>(s.count));
  std::vector<Plane> planes;
  planes.reserve(s.count);
  std::vector<double> parameter;
  std::vector<int> piece;
  std::vector<std::size_t> counts;
  std::size_t j = 0;

  if (shape.kind != ShapeKind::DoubleBubble3D) {
    const auto curves = build_curves(shape);
    std::vector<double> lengths;
    for (const Curve& c : curves) lengths.push_back(c.length());
    counts = curves.size() == 1 ? std::vector<std::size_t>{s.count} : apportion(s.count, lengths);
    for (std::size_t p = 0; p < curves.size(); ++p) {
      const Curve& c = curves[p];
      const std::size_t m = counts[p];
      const double span = c.t1 - c.t0;
      if (s.mode == SamplingMode::NonuniformGaussian && !c.closed) {
        throw Error(ErrorCode::BadShape, "nonuniform parameter sampling needs closed curves");
      }
      for (std::size_t k = 0; k < m; ++k, ++j) {
        double t = 0.0;
        if (c.closed) {
          const double h = span / static_cast<double>(m);
          double offset = 0.0;
          if (s.mode == SamplingMode::NonuniformGaussian) offset = param_rng.normal(j);
          t = c.t0 + (static_cast<double>(k) + offset) * h;
          if (offset != 0.0) t = wrap_into(t, c.t0, span);
        } else {
          t = c.t0 + (static_cast<double>(k) + 0.5) * span / static_cast<double>(m);
        }
        const auto col = static_cast<Eigen::Index>(j);
        points.col(col) = c.pos(t);
        curvature.col(col) = c.curvature(t);
        const Vec tangent = c.d1(t).normalized();
        planes.push_back(Plane::from_orthonormal(tangent, 1e-9));
        parameter.push_back(t);
        piece.push_back(static_cast<int>(p));
      }
    }
  } else {
    if (s.mode == SamplingMode::NonuniformGaussian) {
      throw Error(ErrorCode::BadShape, "nonuniform parameter sampling is defined for curves only");
    }
    const auto caps = build_caps(shape);
    std::vector<double> areas;
    for (const Cap& c : caps) areas.push_back(c.area());
    counts = apportion(s.count, areas);
    for (std::size_t p = 0; p < caps.size(); ++p) {
      const Cap& cap = caps[p];
      const std::size_t m = counts[p];
      if (m == 0) continue;
      // Stratified bands of roughly square cells of the target spacing.
      const double spacing = std::sqrt(cap.area() / static_cast<double>(m));
      const double extent = cap.disk ? cap.radius : cap.radius * cap.phi_max;
      const auto bands = static_cast<std::size_t>(std::max(1.0, std::round(extent / spacing)));
      const double top = cap.disk ? cap.radius : cap.phi_max;
      std::vector<double> band_area(bands);
      for (std::size_t k = 0; k < bands; ++k) {
        const double lo = top * static_cast<double>(k) / static_cast<double>(bands);
        const double hi = top * static_cast<double>(k + 1) / static_cast<double>(bands);
        band_area[k] = cap.disk ? (hi * hi - lo * lo) : (std::cos(lo) - std::cos(hi));
      }
      const auto band_counts = apportion(m, band_area);
      for (std::size_t k = 0; k < bands; ++k) {
        const double lo = top * static_cast<double>(k) / static_cast<double>(bands);
        const double hi = top * static_cast<double>(k + 1) / static_cast<double>(bands);
        // Area-median latitude of the band.
        const double phi = cap.disk ? std::sqrt(0.5 * (lo * lo + hi * hi))
                                    : std::acos(0.5 * (std::cos(lo) + std::cos(hi)));
        const double rotation = band_rng.uniform(p * 1000003ULL + k);
        for (std::size_t i = 0; i < band_counts[k]; ++i, ++j) {
          const double theta = kTwoPi * (static_cast<double>(i) + rotation) / static_cast<double>(band_counts[k]);
          const Vec3 x = cap.point(phi, theta);
          const auto col = static_cast<Eigen::Index>(j);
          points.col(col) = x;
          curvature.col(col) = cap.curvature(x);
          planes.push_back(Plane::from_normal(cap.normal(x)));
          parameter.push_back(phi);
          piece.push_back(static_cast<int>(p));
        }
      }
    }
  }

  if (s.noise_variance && *s.noise_variance > 0.0) {
    const double sigma = s.noise_is_stddev ? *s.noise_variance : std::sqrt(*s.noise_variance);
    for (Eigen::Index c = 0; c < points.cols(); ++c) {
      for (int i = 0; i < n; ++i) {
        points(i, c) += sigma * noise_rng.normal(static_cast<std::uint64_t>(c) * n + static_cast<std::uint64_t>(i));
      }
    }
  }

  std::size_t dropped = 0;
  Mat dropped_curvature(n, 0);
  if (s.tangents == TangentMode::Regression) {
    const auto estimated = estimate_planes(points, *s.regression_radius, d);
    std::vector<Eigen::Index> keep;
    for (std::size_t i = 0; i < estimated.size(); ++i) {
      if (estimated[i]) keep.push_back(static_cast<Eigen::Index>(i));
    }
    dropped = estimated.size() - keep.size();
    dropped_curvature.resize(n, static_cast<Eigen::Index>(dropped));
    for (std::size_t i = 0, k = 0; i < estimated.size(); ++i) {
      if (!estimated[i]) dropped_curvature.col(static_cast<Eigen::Index>(k++)) = curvature.col(static_cast<Eigen::Index>(i));
    }
    if (keep.empty()) throw Error(ErrorCode::BadData, "no point has a regression plane");
    Mat kept_points(n, static_cast<Eigen::Index>(keep.size()));
    Mat kept_curv(n, static_cast<Eigen::Index>(keep.size()));
    std::vector<Plane> kept_planes;
    std::vector<double> kept_param;
    std::vector<int> kept_piece;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      const Eigen::Index i = keep[k];
      kept_points.col(static_cast<Eigen::Index>(k)) = points.col(i);
      kept_curv.col(static_cast<Eigen::Index>(k)) = curvature.col(i);
      kept_planes.push_back(*estimated[static_cast<std::size_t>(i)]);
      kept_param.push_back(parameter[static_cast<std::size_t>(i)]);
      kept_piece.push_back(piece[static_cast<std::size_t>(i)]);
    }
    points = std::move(kept_points);
    curvature = std::move(kept_curv);
    planes = std::move(kept_planes);
    parameter = std::move(kept_param);
    piece = std::move(kept_piece);
  }

  std::vector<double> masses(static_cast<std::size_t>(points.cols()), 1.0);
  ShapeSample out{PointCloudVarifold(std::move(points), std::move(masses), std::move(planes)),
                  std::move(curvature),
                  std::move(parameter),
                  std::move(piece),
                  std::move(counts),
                  dropped,
                  std::move(dropped_curvature),
                  max_curvature(shape)};
  return out;
}

}  // namespace varicurve
