#include "varicurve/acceptance.hpp"

#include "varicurve/cotangent.hpp"
#include "varicurve/curvature.hpp"
#include "varicurve/error.hpp"
#include "varicurve/harness.hpp"
#include "varicurve/kernels.hpp"
#include "varicurve/metrics.hpp"
#include "varicurve/random.hpp"
#include "varicurve/shapes.hpp"
#include "varicurve/spatial_index.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

namespace varicurve {

namespace {

std::string num(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.4g", x);
  return buffer;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) out += (k ? ", " : "") + num(values[k]);
  return out;
}

bool strictly_decreasing(const std::vector<double>& values) {
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (!(values[k] < values[k - 1])) return false;
  }
  return true;
}

std::vector<double> errors_of(const std::vector<ResultRow>& rows, const std::string& pair) {
  std::vector<double> out;
  for (const ResultRow& r : rows) {
    if (r.pair == pair) out.push_back(r.rel_error);
  }
  return out;
}

std::size_t nearest_point(const PointCloudVarifold& v, const Vec& p) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double dist = (v.point(j) - p).norm();
    if (dist < best_d) {
      best_d = dist;
      best = j;
    }
  }
  return best;
}

// Haar-ish random rotation: QR of a Gaussian matrix, signs fixed so det = +1.
Mat random_rotation(const CounterRng& rng, std::uint64_t& counter, int n) {
  Mat g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) g(i, k) = rng.normal(counter++);
  }
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR();
  for (int k = 0; k < n; ++k) {
    if (r(k, k) < 0.0) q.col(k) = -q.col(k);
  }
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

PointCloudVarifold transformed(const PointCloudVarifold& v, const Mat& q, const Vec& shift) {
  Mat pts = q * v.points();
  pts.colwise() += shift;
  std::vector<Plane> planes;
  planes.reserve(v.size());
  for (const Plane& p : v.planes()) planes.push_back(Plane::from_orthonormal(q * p.basis(), 1e-9));
  return {std::move(pts), v.masses(), std::move(planes)};
}

PointCloudVarifold with_masses(const PointCloudVarifold& v, double factor) {
  std::vector<double> masses = v.masses();
  for (double& m : masses) m *= factor;
  return {v.points(), std::move(masses), v.planes()};
}

// Noisy ellipse with exact tangents: curvature varies and the cloud is irregular.
ShapeSample property_cloud(std::uint64_t seed, std::size_t count) {
  SamplingSpec s;
  s.count = count;
  s.seed = seed;
  s.noise_variance = 1e-6;
  return sample(ShapeSpec::ellipse(0.7, 0.4), s);
}

double relative_gap(const Vec& a, const Vec& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

CriterionResult make_result(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

ConvergenceConfig base_config(const AcceptanceOptions& opts, ShapeSpec shape) {
  ConvergenceConfig cfg;
  cfg.shape = shape;
  cfg.seed = opts.seed;
  cfg.threads = opts.threads;
  cfg.pairs = {"exp-nkp"};
  cfg.orth = true;
  return cfg;
}

CriterionResult circle_consistency(const AcceptanceOptions& opts) {
  CriterionResult r = make_result(1, "circle consistency");
  ConvergenceConfig cfg = base_config(opts, ShapeSpec::circle(0.5));
  cfg.counts = {10000};
  cfg.eps = {EpsRule::Kind::Fixed, 0.01};
  const double small = run_convergence(cfg).front().rel_error;

  std::vector<double> trend;
  cfg.counts = {100000};
  for (double eps : {0.1, 0.05, 0.02, 0.01}) {
    cfg.eps = {EpsRule::Kind::Fixed, eps};
    trend.push_back(run_convergence(cfg).front().rel_error);
  }
  r.measured = small;
  r.threshold = 0.02;
  r.passed = small < r.threshold && strictly_decreasing(trend);
  r.detail = "E(N=1e4, eps=0.01)=" + num(small) + "; N=1e5 over eps 0.1..0.01: " + join(trend) +
             (strictly_decreasing(trend) ? " (decreasing)" : " (NOT decreasing)");
  return r;
}

CriterionResult flower_order(const AcceptanceOptions& opts) {
  CriterionResult r = make_result(2, "flower convergence order");
  ConvergenceConfig cfg = base_config(opts, ShapeSpec::flower());
  cfg.counts = {1000, 10000, 100000};
  cfg.eps = {EpsRule::Kind::Pow34, 0.0};
  const auto rows = run_convergence(cfg);
  r.measured = slope(rows, SlopeAxis::InvNEps);
  r.threshold = 0.9;
  const auto errors = errors_of(rows, "exp-nkp");
  r.passed = r.measured >= r.threshold && strictly_decreasing(errors);
  r.detail = "E_rel " + join(errors) + ", slope vs 1/(N eps)";
  return r;
}

CriterionResult constant_neps(const AcceptanceOptions& opts) {
  CriterionResult r = make_result(3, "constant N*eps convergence");
  ConvergenceConfig cfg = base_config(opts, ShapeSpec::flower());
  cfg.counts = {1000, 10000, 100000};
  cfg.eps = {EpsRule::Kind::Inv100, 0.0};
  cfg.pairs = {"tent-nkp", "exp-nkp", "tent"};
  const auto rows = run_convergence(cfg);
  const auto tent_nkp = errors_of(rows, "tent-nkp");
  const auto exp_nkp = errors_of(rows, "exp-nkp");
  const auto tent = errors_of(rows, "tent");
  r.passed = strictly_decreasing(tent_nkp) && strictly_decreasing(exp_nkp);
  r.measured = std::max(tent_nkp.back() / tent_nkp.front(), exp_nkp.back() / exp_nkp.front());
  r.threshold = 1.0;
  r.detail = "tent-nkp " + join(tent_nkp) + "; exp-nkp " + join(exp_nkp) + "; tent (may stall) " + join(tent) +
             "; measured = worst last/first ratio";
  return r;
}

CriterionResult projection_necessity(const AcceptanceOptions& opts) {
  CriterionResult r = make_result(4, "projection necessity");
  ConvergenceConfig cfg = base_config(opts, ShapeSpec::flower());
  cfg.counts = {1000, 10000, 100000};
  cfg.eps = {EpsRule::Kind::Pow34, 0.0};
  cfg.mode = SamplingMode::NonuniformGaussian;
  const auto orth = errors_of(run_convergence(cfg), "exp-nkp");
  cfg.orth = false;
  const auto plain = errors_of(run_convergence(cfg), "exp-nkp");
  r.measured = plain.back() / orth.back();
  r.threshold = 3.0;
  r.passed = r.measured >= r.threshold && strictly_decreasing(orth);
  r.detail = "amc " + join(plain) + "; amc_orth " + join(orth) + "; measured = ratio at largest N";
  return r;
}

CriterionResult crossing_average(const AcceptanceOptions& opts) {
  CriterionResult r = make_result(5, "crossing average");
  const ShapeSpec shape = ShapeSpec::two_circles(0.5, 0.5);
  SamplingSpec s;
  s.count = 10000;
  s.seed = opts.seed;
  const ShapeSample smp = sample(shape, s);
  CurvatureRequest req;
  req.eps = 0.01;
  req.pair = kernel_pair_from_token("exp-nkp", 1, 2);
  req.threads = opts.threads;
  Vec crossing(2);
  crossing << 0.0, std::sqrt(shape.a * shape.a - 0.25 * shape.b * shape.b);
  const std::size_t j = nearest_point(smp.cloud, crossing);
  const auto h = amc(smp.cloud, req, Vec(smp.cloud.point(j)));
  if (!h) throw Error(ErrorCode::NoValidPoints, "no curvature at the crossing");
  r.measured = h->norm();
  r.threshold = 0.15;
  r.passed = std::abs(r.measured - std::sqrt(3.0)) <= r.threshold;
  r.detail = "|amc| at the point nearest the crossing, target sqrt(3) = " + num(std::sqrt(3.0)) +
             ", distance to crossing " + num((smp.cloud.point(j) - crossing).norm());
  return r;
}

CriterionResult eight_crossing(const AcceptanceOptions& opts) {
  CriterionResult r = make_result(6, "eight crossing");
  SamplingSpec s;
  s.count = 10000;
  s.seed = opts.seed;
  const ShapeSample smp = sample(ShapeSpec::eight(), s);
  CurvatureRequest req;
  req.eps = 0.01;
  req.pair = kernel_pair_from_token("exp-nkp", 1, 2);
  req.orth = true;
  req.threads = opts.threads;
  const CurvatureField field = amc_field(smp.cloud, req);
  const std::size_t j = nearest_point(smp.cloud, Vec::Zero(2));
  const double peak = *std::max_element(field.magnitudes.begin(), field.magnitudes.end());
  r.measured = field.magnitudes[j] / peak;
  r.threshold = 0.05;
  r.passed = field.valid[j] && r.measured <= r.threshold;
  r.detail = "|amc_orth| at crossing " + num(field.magnitudes[j]) + ", field max " + num(peak) +
             "; measured = ratio";
  return r;
}

double bubble_2d_error(std::size_t count, double eps, const AcceptanceOptions& opts) {
  const DoubleBubble db = double_bubble(2, 1.0, 0.6);
  SamplingSpec s;
  s.count = count;
  s.seed = opts.seed;
  s.tangents = TangentMode::Regression;
  s.regression_radius = 0.5 * eps;
  const ShapeSample smp = sample(db.spec(), s);
  CurvatureRequest req;
  req.eps = eps;
  req.pair = kernel_pair_from_token("exp-nkp", 1, 2);
  req.average_radius = 2.0 * eps;
  req.threads = opts.threads;
  const CurvatureField field = amc_field(smp.cloud, req);
  Vec junction(2);
  junction << db.px, db.py;
  const std::size_t j = nearest_point(smp.cloud, junction);
  if (!field.valid[j]) return std::numeric_limits<double>::infinity();
  const Vec target = db.junction_mean_curvature();
  return (field.vectors.col(static_cast<Eigen::Index>(j)) - target).norm() / target.norm();
}

CriterionResult bubble_2d(const AcceptanceOptions& opts) {
  CriterionResult r = make_result(7, "2D double bubble");
  const double coarse = bubble_2d_error(800, 0.15, opts);
  const double fine = bubble_2d_error(1600, 0.075, opts);
  const Vec target = double_bubble(2, 1.0, 0.6).junction_mean_curvature();
  r.measured = fine;
  r.threshold = 0.12;
  r.passed = coarse <= 0.20 && fine <= 0.12 && fine < coarse;
  r.detail = "relative error N=800: " + num(coarse) + " (limit 0.2), N=1600: " + num(fine) +
             " (limit 0.12); target (" + num(target(0)) + ", " + num(target(1)) + ")";
  return r;
}

CriterionResult bubble_3d(const AcceptanceOptions& opts) {
  CriterionResult r = make_result(8, "3D double bubble");
  const DoubleBubble db = double_bubble(3, 1.0, 0.7);
  const double eps = 0.111;
  SamplingSpec s;
  s.count = 34378;
  s.seed = opts.seed;
  s.tangents = TangentMode::Regression;
  s.regression_radius = eps;
  const ShapeSample smp = sample(db.spec(), s);
  CurvatureRequest req;
  req.eps = eps;
  req.pair = kernel_pair_from_token("exp-nkp", 2, 3);
  req.average_radius = 2.0 * eps;
  req.threads = opts.threads;
  const CurvatureField field = amc_field(smp.cloud, req);
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t j = 0; j < smp.cloud.size(); ++j) {
    const auto x = smp.cloud.point(j);
    const double dist = std::hypot(x(0) - db.px, std::hypot(x(1), x(2)) - db.py);
    if (dist < eps && field.valid[j]) {
      total += field.magnitudes[j];
      ++used;
    }
  }
  if (used == 0) throw Error(ErrorCode::NoValidPoints, "no valid point near the singular circle");
  r.measured = total / static_cast<double>(used);
  r.threshold = 1.56;
  r.passed = r.measured >= 1.36 && r.measured <= 1.56;
  r.detail = "mean |H| over " + std::to_string(used) + " points within eps of the singular circle, band [1.36, 1.56], "
             "junction value " + num(db.junction_mean_curvature().norm());
  return r;
}

CriterionResult cotangent_identity(const AcceptanceOptions& opts) {
  CriterionResult r = make_result(9, "cotangent identity");
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const TriMesh star = random_star(opts.seed, k);
    double diameter = 0.0;
    for (const Vec3& a : star.vertices) {
      for (const Vec3& b : star.vertices) diameter = std::max(diameter, (a - b).norm());
    }
    const Vec3 cot = cotangent_curvature(star, 0);
    const Vec3 fv = first_variation_nodal(star, 0);
    worst = std::max(worst, (fv + cot).norm() / std::max(cot.norm(), diameter));
  }
  r.measured = worst;
  r.threshold = 1e-12;
  r.passed = worst <= r.threshold;
  r.detail = "max |fv + cot| / max(|cot|, diameter) over 100 random stars";
  return r;
}

// One random arc cloud with total mass 1 and at most 200 points.
PointCloudVarifold random_arc_cloud(const CounterRng& rng) {
  std::uint64_t counter = 0;
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(counter++); };
  const auto count = static_cast<std::size_t>(uniform(20.0, 200.0));
  Eigen::Vector2d center;
  for (int i = 0; i < 2; ++i) center(i) = uniform(0.3, 0.7);
  const double radius = uniform(0.1, 0.3);
  const double start = uniform(0.0, 2.0 * std::numbers::pi);
  const double span = uniform(0.5, 4.0);
  Mat pts(2, static_cast<Eigen::Index>(count));
  std::vector<double> masses(count);
  std::vector<Plane> planes;
  for (std::size_t j = 0; j < count; ++j) {
    const double t = start + span * uniform(0.0, 1.0);
    const double rr = radius + uniform(-0.01, 0.01);
    pts.col(static_cast<Eigen::Index>(j)) = center + rr * Eigen::Vector2d(std::cos(t), std::sin(t));
    masses[j] = uniform(0.5, 1.5);
    Mat tangent(2, 1);
    tangent << -std::sin(t), std::cos(t);
    planes.push_back(Plane::from_orthonormal(tangent, 1e-9));
  }
  const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
  for (double& m : masses) m /= total;
  return {std::move(pts), std::move(masses), std::move(planes)};
}

CriterionResult discretization_bound(const AcceptanceOptions& opts) {
  CriterionResult r = make_result(10, "discretization bound");
  double worst = 0.0;  // largest value / (delta * mass)
  double worst_change = 0.0;
  int unconverged = 0;
  for (std::uint64_t c = 0; c < 50; ++c) {
    const PointCloudVarifold cloud = random_arc_cloud(CounterRng(opts.seed, 0xd15c0 + c));
    for (double delta : {0.3, 0.1}) {
      const Grid grid = build_grid(bounding_box(cloud, 1e-6), delta);
      const VolumetricVarifold vol = to_volumetric(cloud, grid);
      const PointCloudVarifold centroids = to_pointcloud(cloud, grid);
      const double bound = delta * std::min(vol.total_mass(), centroids.total_mass());
      double previous = -1.0;
      double value = 0.0;
      bool converged = false;
      for (int k = 1;; ++k) {
        const std::size_t atoms = vol.size() * static_cast<std::size_t>(k * k) + centroids.size();
        if (atoms > kMaxBlSupport) break;
        value = bl_distance_varifolds(sample_volumetric(vol, k), centroids);
        if (previous >= 0.0 && std::abs(value - previous) < 1e-3) {
          converged = true;
          worst_change = std::max(worst_change, std::abs(value - previous));
          break;
        }
        previous = value;
      }
      if (!converged) ++unconverged;
      worst = std::max(worst, value / bound);
    }
  }
  r.measured = worst;
  r.threshold = 1.0;
  r.passed = worst <= 1.0 && unconverged == 0;
  r.detail = "max LP value / (delta * min mass) over 50 clouds x 2 grids; " + std::to_string(unconverged) +
             " refinements not converged to 1e-3";
  return r;
}

CriterionResult nkp_identity(const AcceptanceOptions&) {
  CriterionResult r = make_result(11, "NKP identity");
  double worst = nkp_residual(kernel_pair_from_token("tent-nkp", 1, 2));
  for (int d : {1, 2}) {
    for (int n : {2, 3}) {
      if (d < n) worst = std::max(worst, nkp_residual(kernel_pair_from_token("exp-nkp", d, n)));
    }
  }
  const double tent = nkp_residual(kernel_pair_from_token("tent", 1, 2));
  r.measured = worst;
  r.threshold = 1e-10;
  r.passed = worst <= r.threshold && tent > 0.1;
  r.detail = "max natural-pair residual; tent/tent residual " + num(tent) + " (must exceed 0.1)";
  return r;
}

CriterionResult property_suites(const AcceptanceOptions& opts) {
  CriterionResult r = make_result(12, "property suites");
  const auto props = run_property_suite(opts.seed);
  int failed = 0;
  for (const PropertyResult& p : props) {
    if (!p.passed) {
      ++failed;
      r.detail += (r.detail.empty() ? "failed: " : ", ") + p.name + " (" + num(p.worst) + " > " + num(p.tolerance) +
                  ")";
    }
  }
  r.measured = failed;
  r.threshold = 0.0;
  r.passed = failed == 0;
  if (failed == 0) r.detail = std::to_string(props.size()) + " properties hold";
  return r;
}

PropertyResult check(std::string name, double worst, double tolerance) {
  return {std::move(name), worst <= tolerance, worst, tolerance};
}

PropertyResult kernel_scale_property(const ShapeSample& smp) {
  const KernelPair base = kernel_pair_from_token("exp-nkp", 1, 2);
  const KernelPair scaled_pair =
      make_kernel_pair(scaled(base.rho, 2.5), scaled(base.xi, 0.4), 1, 2, true, "scaled");
  CurvatureRequest a;
  a.eps = 0.05;
  a.pair = base;
  CurvatureRequest b = a;
  b.pair = scaled_pair;
  const FixedRadiusIndex index(smp.cloud.points(), a.eps);
  double worst = 0.0;
  for (std::size_t j = 0; j < smp.cloud.size(); j += 97) {
    const Vec x = smp.cloud.point(j);
    worst = std::max(worst, relative_gap(*amc(smp.cloud, index, b, x), *amc(smp.cloud, index, a, x)));
    worst = std::max(worst, relative_gap(*amc_orth(smp.cloud, index, b, j), *amc_orth(smp.cloud, index, a, j)));
  }
  return check("kernel-scale invariance", worst, 1e-10);
}

PropertyResult rigid_motion_property(const ShapeSample& smp, std::uint64_t seed) {
  const CounterRng rng(seed, 0x1a1);
  std::uint64_t counter = 0;
  CurvatureRequest req;
  req.eps = 0.05;
  req.pair = kernel_pair_from_token("exp-nkp", 1, 2);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const Mat q = random_rotation(rng, counter, 2);
    Vec shift(2);
    for (int i = 0; i < 2; ++i) shift(i) = 4.0 * rng.uniform(counter++) - 2.0;
    const PointCloudVarifold moved = transformed(smp.cloud, q, shift);
    for (std::size_t j = 11; j < smp.cloud.size(); j += 211) {
      const Vec expected = q * *amc(smp.cloud, req, Vec(smp.cloud.point(j)));
      worst = std::max(worst, (*amc(moved, req, Vec(moved.point(j))) - expected).norm());
      const Vec expected_orth = q * *amc_orth(smp.cloud, req, j);
      worst = std::max(worst, (*amc_orth(moved, req, j) - expected_orth).norm());
    }
  }
  return check("rigid-motion equivariance", worst, 1e-9);
}

PropertyResult mass_scaling_property(const ShapeSample& smp) {
  CurvatureRequest req;
  req.eps = 0.05;
  req.pair = kernel_pair_from_token("exp-nkp", 1, 2);
  double worst = 0.0;
  for (double factor : {1e-3, 3.7, 250.0}) {
    const PointCloudVarifold heavy = with_masses(smp.cloud, factor);
    for (std::size_t j = 5; j < smp.cloud.size(); j += 173) {
      const Vec x = smp.cloud.point(j);
      worst = std::max(worst, relative_gap(*amc(heavy, req, x), *amc(smp.cloud, req, x)));
    }
  }
  return check("mass-scaling invariance", worst, 1e-12);
}

PropertyResult perpendicularity_property(const ShapeSample& smp) {
  CurvatureRequest req;
  req.eps = 0.05;
  req.pair = kernel_pair_from_token("tent-nkp", 1, 2);
  double worst = 0.0;
  for (std::size_t j = 0; j < smp.cloud.size(); j += 37) {
    const Vec h = *amc_orth(smp.cloud, req, j);
    const double along = (smp.cloud.planes()[j].proj() * h).norm();
    worst = std::max(worst, along / std::max(h.norm(), std::numeric_limits<double>::min()));
  }
  return check("perpendicularity of amc_orth", worst, 1e-12);
}

PropertyResult collinear_property(std::uint64_t seed) {
  const CounterRng rng(seed, 0xc011);
  std::uint64_t counter = 0;
  double worst = 0.0;
  for (int n : {2, 3}) {
    const std::size_t count = 400;
    Vec direction(n);
    for (int i = 0; i < n; ++i) direction(i) = rng.normal(counter++);
    direction.normalize();
    Mat basis = direction;
    const Plane line = Plane::from_basis(basis);
    Mat pts(n, static_cast<Eigen::Index>(count));
    std::vector<double> masses(count);
    for (std::size_t j = 0; j < count; ++j) {
      // Off-line scatter too: only the shared plane matters.
      Vec x = rng.uniform(counter++) * direction;
      for (int i = 0; i < n; ++i) x(i) += 0.01 * rng.normal(counter++);
      pts.col(static_cast<Eigen::Index>(j)) = x;
      masses[j] = 0.5 + rng.uniform(counter++);
    }
    const PointCloudVarifold v(std::move(pts), std::move(masses), std::vector<Plane>(count, line));
    CurvatureRequest req;
    req.eps = 0.1;
    req.pair = kernel_pair_from_token("exp-nkp", 1, n);
    for (std::size_t j = 0; j < count; j += 13) {
      if (const auto h = amc_orth(v, req, j)) worst = std::max(worst, h->cwiseAbs().maxCoeff());
    }
  }
  return check("collinear exactness", worst, 0.0);
}

PropertyResult bl_metric_property(std::uint64_t seed) {
  const CounterRng rng(seed, 0xb1);
  std::uint64_t counter = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 5 + static_cast<int>(rng.bits(counter++) % 40);
    Mat pts(2, m);
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i < 2; ++i) pts(i, k) = 2.0 * rng.uniform(counter++);
    }
    Mat dist(m, m);
    for (int k = 0; k < m; ++k) {
      for (int l = 0; l < m; ++l) dist(k, l) = (pts.col(k) - pts.col(l)).norm();
    }
    std::array<DiscreteMeasure, 3> measures;
    for (auto& mu : measures) {
      mu.distances = dist;
      for (int k = 0; k < m; ++k) mu.weights.push_back(rng.uniform(counter++) < 0.3 ? 0.0 : rng.uniform(counter++));
    }
    const double ab = bl_distance(measures[0], measures[1]);
    const double ba = bl_distance(measures[1], measures[0]);
    const double bc = bl_distance(measures[1], measures[2]);
    const double ac = bl_distance(measures[0], measures[2]);
    worst = std::max(worst, std::abs(ab - ba) > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    worst = std::max(worst, ac - (ab + bc) - 1e-8 > 0.0 ? ac - (ab + bc) : 0.0);
    if (bl_distance(measures[0], measures[0]) != 0.0) worst = std::numeric_limits<double>::infinity();
    if (measures[0].weights != measures[1].weights && !(ab > 0.0)) worst = std::numeric_limits<double>::infinity();
  }
  return check("BL metric axioms", worst, 1e-8);
}

PropertyResult index_property(std::uint64_t seed) {
  const CounterRng rng(seed, 0x1d);
  std::uint64_t counter = 0;
  std::size_t mismatches = 0;
  std::vector<std::size_t> got;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng.bits(counter++) % 2);
    const auto count = 1 + static_cast<std::size_t>(rng.bits(counter++) % 5000);
    Mat pts(n, static_cast<Eigen::Index>(count));
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
      for (int i = 0; i < n; ++i) pts(i, j) = rng.uniform(counter++);
    }
    const double eps = 0.01 + 0.2 * rng.uniform(counter++);
    const FixedRadiusIndex index(pts, eps);
    for (int q = 0; q < 3; ++q) {
      // Queries on a cloud point exercise ties; others land anywhere nearby.
      Vec x = q == 0 ? Vec(pts.col(static_cast<Eigen::Index>(rng.bits(counter++) % count))) : Vec(n);
      if (q != 0) {
        for (int i = 0; i < n; ++i) x(i) = 1.2 * rng.uniform(counter++) - 0.1;
      }
      index.radius_query(x, eps, got);
      std::vector<std::size_t> expected;
      for (std::size_t j = 0; j < count; ++j) {
        if ((pts.col(static_cast<Eigen::Index>(j)) - x).squaredNorm() < eps * eps) expected.push_back(j);
      }
      if (got != expected) ++mismatches;
    }
  }
  return check("spatial index matches brute force", static_cast<double>(mismatches), 0.0);
}

}  // namespace

std::vector<PropertyResult> run_property_suite(std::uint64_t seed) {
  const ShapeSample smp = property_cloud(seed, 3000);
  return {kernel_scale_property(smp),      rigid_motion_property(smp, seed), mass_scaling_property(smp),
          perpendicularity_property(smp), collinear_property(seed),         bl_metric_property(seed),
          index_property(seed)};
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  using Runner = CriterionResult (*)(const AcceptanceOptions&);
  static constexpr std::array<Runner, kCriterionCount> kRunners{
      circle_consistency, flower_order,   constant_neps,        projection_necessity,
      crossing_average,   eight_crossing, bubble_2d,            bubble_3d,
      cotangent_identity, discretization_bound, nkp_identity, property_suites};
  static constexpr std::array<const char*, kCriterionCount> kNames{
      "circle consistency", "flower convergence order", "constant N*eps convergence", "projection necessity",
      "crossing average",   "eight crossing",           "2D double bubble",           "3D double bubble",
      "cotangent identity", "discretization bound",     "NKP identity",               "property suites"};
  if (id < 1 || id > kCriterionCount) throw Error(ErrorCode::BadData, "no criterion " + std::to_string(id));
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = kRunners[static_cast<std::size_t>(id - 1)](opts);
  } catch (const Error& e) {
    r = make_result(id, kNames[static_cast<std::size_t>(id - 1)]);
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, const AcceptanceOptions& opts) {
  std::vector<CriterionResult> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(run_criterion(id, opts));
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream out;
  out << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name << ": measured=" << num(r.measured)
      << " threshold=" << num(r.threshold) << " (" << r.detail << ") " << num(r.seconds) << "s";
  return out.str();
}

}  // namespace varicurve
