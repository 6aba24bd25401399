#pragma once

#include "varicurve/geometry.hpp"
#include "varicurve/shapes.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace varicurve {

/// Mean over all points of |H_j - oracle_j| / h_max. Invalid points, and the
/// extra `missing` oracle columns (points that never got a value), count as
/// |oracle_j| / h_max. Throws NoValidPoints when nothing is valid.
double rel_error(const CurvatureField& field, const Mat& oracle, double h_max, const Mat& missing = Mat());

/// eps as a function of N: 100/N, (10/N)^(3/4) or a constant.
struct EpsRule {
  enum class Kind { Inv100, Pow34, Fixed };
  Kind kind = Kind::Pow34;
  double value = 0.0;

  double at(std::size_t count) const;
  std::string describe() const;
  /// Accepts inv100, pow34, "100/N", "(10/N)^(3/4)" or a positive literal.
  static EpsRule parse(std::string_view text);
};

/// Regression radius as a function of eps: eps/2, eps, eps^0.9 or a literal.
struct RadiusRule {
  enum class Kind { HalfEps, Eps, EpsPow09, Fixed };
  Kind kind = Kind::HalfEps;
  double value = 0.0;

  double at(double eps) const;
  std::string describe() const;
  static RadiusRule parse(std::string_view text);
};

/// Averaging radius as a multiple of eps ("2eps") or a literal; "none" gives nullopt.
std::optional<std::pair<bool, double>> parse_average(std::string_view text);

struct ConvergenceConfig {
  ShapeSpec shape;
  std::vector<std::size_t> counts;
  EpsRule eps;
  std::vector<std::string> pairs{"exp-nkp"};
  TangentMode tangents = TangentMode::Exact;
  RadiusRule regression;
  bool orth = true;
  std::optional<double> average_factor;  // averaging radius = factor * eps
  SamplingMode mode = SamplingMode::UniformParameter;
  std::optional<double> noise_variance;   // when noise_over_n, variance = value / N
  bool noise_over_n = false;
  bool noise_is_stddev = false;
  bool include_constants = true;
  std::uint64_t seed = 7;
  unsigned threads = 1;

  void validate() const;
};

struct ResultRow {
  std::size_t count = 0;
  double eps = 0.0;
  double neighbors = 0.0;  // mean |B_eps(x_j)| over the cloud
  std::string pair;
  bool orth = false;
  bool averaged = false;
  bool regression = false;
  bool nonuniform = false;
  bool noisy = false;
  double rel_error = 0.0;
  std::size_t invalid = 0;  // invalid or dropped points
  double wall_time = 0.0;   // seconds
};

/// One row per (N, pair) in config order; deterministic given the seed.
std::vector<ResultRow> run_convergence(const ConvergenceConfig& cfg);

/// CSV with a `#` header block recording the full configuration. Wall times
/// are only written when requested, so default output is byte-reproducible.
void write_convergence_csv(std::ostream& out, const ConvergenceConfig& cfg, const std::vector<ResultRow>& rows,
                           bool with_timing = false);

enum class SlopeAxis { N, InvNEps };

/// Least-squares slope of log(E_rel) against log(x), x = N or 1/(N eps), so
/// E_rel ~ (1/(N eps))^p reports p. Throws BadData for fewer than 3 rows or
/// non-positive values.
double slope(const std::vector<ResultRow>& rows, SlopeAxis axis);

/// Plain log-log least-squares slope of y against x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace varicurve
