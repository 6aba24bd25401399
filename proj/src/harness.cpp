#include "varicurve/harness.hpp"

#include "varicurve/curvature.hpp"
#include "varicurve/error.hpp"
#include "varicurve/io.hpp"
#include "varicurve/kernels.hpp"

#include <chrono>
#include <charconv>
#include <cmath>
#include <ostream>

namespace varicurve {

namespace {

std::optional<double> parse_positive(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(value > 0.0) || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string compact(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c != ' ') out += c;
  }
  return out;
}

}  // namespace

double rel_error(const CurvatureField& field, const Mat& oracle, double h_max, const Mat& missing) {
  if (static_cast<std::size_t>(oracle.cols()) != field.size() || oracle.rows() != field.vectors.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "field and oracle sizes differ");
  }
  if (!(h_max > 0.0)) throw Error(ErrorCode::BadData, "h_max must be positive");
  if (field.valid_count() == 0) throw Error(ErrorCode::NoValidPoints, "no valid curvature value");
  double total = 0.0;
  for (std::size_t j = 0; j < field.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    total += field.valid[j] ? (field.vectors.col(col) - oracle.col(col)).norm() : oracle.col(col).norm();
  }
  for (Eigen::Index j = 0; j < missing.cols(); ++j) total += missing.col(j).norm();
  return total / (h_max * static_cast<double>(field.size() + static_cast<std::size_t>(missing.cols())));
}

double EpsRule::at(std::size_t count) const {
  const auto n = static_cast<double>(count);
  switch (kind) {
    case Kind::Inv100: return 100.0 / n;
    case Kind::Pow34: return std::pow(10.0 / n, 0.75);
    case Kind::Fixed: return value;
  }
  return value;
}

std::string EpsRule::describe() const {
  switch (kind) {
    case Kind::Inv100: return "100/N";
    case Kind::Pow34: return "(10/N)^(3/4)";
    case Kind::Fixed: return format_double(value);
  }
  return "";
}

EpsRule EpsRule::parse(std::string_view text) {
  const std::string t = compact(text);
  if (t == "inv100" || t == "100/N") return {Kind::Inv100, 0.0};
  if (t == "pow34" || t == "(10/N)^(3/4)" || t == "(10/N)^0.75") return {Kind::Pow34, 0.0};
  if (const auto v = parse_positive(t)) return {Kind::Fixed, *v};
  throw Error(ErrorCode::ParseError, "cannot parse eps '" + std::string(text) + "'");
}

double RadiusRule::at(double eps) const {
  switch (kind) {
    case Kind::HalfEps: return 0.5 * eps;
    case Kind::Eps: return eps;
    case Kind::EpsPow09: return std::pow(eps, 0.9);
    case Kind::Fixed: return value;
  }
  return value;
}

std::string RadiusRule::describe() const {
  switch (kind) {
    case Kind::HalfEps: return "eps/2";
    case Kind::Eps: return "eps";
    case Kind::EpsPow09: return "eps^0.9";
    case Kind::Fixed: return format_double(value);
  }
  return "";
}

RadiusRule RadiusRule::parse(std::string_view text) {
  const std::string t = compact(text);
  if (t == "eps/2") return {Kind::HalfEps, 0.0};
  if (t == "eps") return {Kind::Eps, 0.0};
  if (t == "eps^0.9" || t == "eps^(9/10)") return {Kind::EpsPow09, 0.0};
  if (const auto v = parse_positive(t)) return {Kind::Fixed, *v};
  throw Error(ErrorCode::ParseError, "cannot parse regression radius '" + std::string(text) + "'");
}

std::optional<std::pair<bool, double>> parse_average(std::string_view text) {
  const std::string t = compact(text);
  if (t.empty() || t == "none" || t == "off") return std::nullopt;
  if (t.size() > 3 && t.ends_with("eps")) {
    std::string factor = t.substr(0, t.size() - 3);
    if (factor.ends_with('*')) factor.pop_back();
    if (const auto v = parse_positive(factor)) return std::make_pair(true, *v);
  } else if (t == "eps") {
    return std::make_pair(true, 1.0);
  } else if (const auto v = parse_positive(t)) {
    return std::make_pair(false, *v);
  }
  throw Error(ErrorCode::ParseError, "cannot parse averaging radius '" + std::string(text) + "'");
}

void ConvergenceConfig::validate() const {
  shape.validate();
  if (counts.empty()) throw Error(ErrorCode::BadData, "no point counts");
  for (std::size_t k = 1; k < counts.size(); ++k) {
    if (counts[k] <= counts[k - 1]) throw Error(ErrorCode::BadData, "point counts must be strictly increasing");
  }
  for (std::size_t count : counts) {
    if (!(eps.at(count) > 0.0) || !std::isfinite(eps.at(count))) {
      throw Error(ErrorCode::BadData, "eps schedule must be positive");
    }
  }
  if (pairs.empty()) throw Error(ErrorCode::BadData, "no kernel pair");
  if (average_factor && !(*average_factor > 0.0)) throw Error(ErrorCode::BadData, "averaging factor must be > 0");
}

std::vector<ResultRow> run_convergence(const ConvergenceConfig& cfg) {
  cfg.validate();
  std::vector<ResultRow> rows;
  for (std::size_t count : cfg.counts) {
    const double eps = cfg.eps.at(count);
    SamplingSpec spec;
    spec.count = count;
    spec.mode = cfg.mode;
    spec.tangents = cfg.tangents;
    spec.seed = cfg.seed;
    spec.noise_is_stddev = cfg.noise_is_stddev;
    if (cfg.tangents == TangentMode::Regression) spec.regression_radius = cfg.regression.at(eps);
    if (cfg.noise_variance) {
      spec.noise_variance = cfg.noise_over_n ? *cfg.noise_variance / static_cast<double>(count) : *cfg.noise_variance;
    }
    const auto sample_start = std::chrono::steady_clock::now();
    const ShapeSample s = sample(cfg.shape, spec);
    const double sample_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - sample_start).count();
    const double neighbors = mean_neighbor_count(s.cloud, eps);

    for (const std::string& token : cfg.pairs) {
      const auto start = std::chrono::steady_clock::now();
      CurvatureRequest req;
      req.eps = eps;
      req.pair = kernel_pair_from_token(token, cfg.shape.dim(), cfg.shape.ambient());
      req.orth = cfg.orth;
      if (cfg.average_factor) req.average_radius = *cfg.average_factor * eps;
      req.include_constants = cfg.include_constants;
      req.threads = cfg.threads;
      const CurvatureField field = amc_field(s.cloud, req);

      ResultRow row;
      row.count = count;
      row.eps = eps;
      row.neighbors = neighbors;
      row.pair = token;
      row.orth = cfg.orth;
      row.averaged = cfg.average_factor.has_value();
      row.regression = cfg.tangents == TangentMode::Regression;
      row.nonuniform = cfg.mode == SamplingMode::NonuniformGaussian;
      row.noisy = spec.noise_variance.has_value() && *spec.noise_variance > 0.0;
      row.rel_error = rel_error(field, s.curvature, s.h_max, s.dropped_curvature);
      row.invalid = field.size() - field.valid_count() + s.dropped;
      row.wall_time = sample_time + std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_convergence_csv(std::ostream& out, const ConvergenceConfig& cfg, const std::vector<ResultRow>& rows,
                           bool with_timing) {
  out << "# varicurve converge\n";
  out << "# shape=" << to_string(cfg.shape.kind) << " a=" << format_double(cfg.shape.a)
      << " b=" << format_double(cfg.shape.b) << '\n';
  out << "# N=";
  for (std::size_t k = 0; k < cfg.counts.size(); ++k) out << (k ? "," : "") << cfg.counts[k];
  out << " eps=" << cfg.eps.describe() << " pairs=";
  for (std::size_t k = 0; k < cfg.pairs.size(); ++k) out << (k ? "," : "") << cfg.pairs[k];
  out << '\n';
  out << "# tangents=" << (cfg.tangents == TangentMode::Regression ? "regression" : "exact");
  if (cfg.tangents == TangentMode::Regression) out << " regression_radius=" << cfg.regression.describe();
  out << " orth=" << (cfg.orth ? "on" : "off") << " avg=";
  if (cfg.average_factor) {
    out << format_double(*cfg.average_factor) << "eps";
  } else {
    out << "none";
  }
  out << " constants=" << (cfg.include_constants ? "on" : "off") << '\n';
  out << "# sampling=" << (cfg.mode == SamplingMode::NonuniformGaussian ? "nonuniform" : "uniform") << " noise=";
  if (cfg.noise_variance) {
    out << format_double(*cfg.noise_variance) << (cfg.noise_over_n ? "/N" : "")
        << (cfg.noise_is_stddev ? " (stddev)" : " (variance)");
  } else {
    out << "none";
  }
  out << " seed=" << cfg.seed << '\n';
  out << "N,eps,N_neigh_avg,pair,orth,avg,tangents,sampling,noise,E_rel,invalid";
  if (with_timing) out << ",wall_time";
  out << '\n';
  for (const ResultRow& r : rows) {
    out << r.count << ',' << format_double(r.eps) << ',' << format_double(r.neighbors) << ',' << r.pair << ','
        << (r.orth ? 1 : 0) << ',' << (r.averaged ? 1 : 0) << ',' << (r.regression ? "regression" : "exact") << ','
        << (r.nonuniform ? "nonuniform" : "uniform") << ',' << (r.noisy ? 1 : 0) << ','
        << format_double(r.rel_error) << ',' << r.invalid;
    if (with_timing) out << ',' << format_double(r.wall_time);
    out << '\n';
  }
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::BadData, "slope needs equal-length data");
  if (x.size() < 3) throw Error(ErrorCode::BadData, "slope needs at least 3 points");
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw Error(ErrorCode::BadData, "slope needs positive values");
    lx.push_back(std::log(x[k]));
    ly.push_back(std::log(y[k]));
    sx += lx.back();
    sy += ly.back();
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::BadData, "slope needs distinct abscissae");
  return sxy / sxx;
}

double slope(const std::vector<ResultRow>& rows, SlopeAxis axis) {
  std::vector<double> x, y;
  for (const ResultRow& r : rows) {
    const auto n = static_cast<double>(r.count);
    x.push_back(axis == SlopeAxis::N ? n : 1.0 / (n * r.eps));
    y.push_back(r.rel_error);
  }
  return loglog_slope(x, y);
}

}  // namespace varicurve
