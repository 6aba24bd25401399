#include "support.hpp"

#include "varicurve/curvature.hpp"
#include "varicurve/error.hpp"
#include "varicurve/harness.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

using namespace varicurve;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ResultRow row(std::size_t count, double eps, double error) {
  ResultRow r;
  r.count = count;
  r.eps = eps;
  r.rel_error = error;
  return r;
}

}  // namespace

TEST_CASE("relative error") {
  Mat oracle(2, 3);
  oracle << 1, 0, 2, 0, 1, 0;
  CurvatureField exact = CurvatureField::zeros(2, 3);
  for (std::size_t j = 0; j < 3; ++j) exact.set(j, oracle.col(static_cast<Eigen::Index>(j)));
  CHECK(rel_error(exact, oracle, 2.0) == 0.0);

  CurvatureField zero = CurvatureField::zeros(2, 3);
  for (std::size_t j = 0; j < 3; ++j) zero.set(j, Eigen::Vector2d::Zero());
  CHECK_THAT(rel_error(zero, oracle, 2.0), WithinAbs(4.0 / 6.0, 1e-15));

  CurvatureField partial = exact;
  partial.set_invalid(2);
  CHECK_THAT(rel_error(partial, oracle, 2.0), WithinAbs(2.0 / 6.0, 1e-15));
  Mat missing(2, 1);
  missing << 0, 4;
  CHECK_THAT(rel_error(partial, oracle, 2.0, missing), WithinAbs(6.0 / 8.0, 1e-15));

  CurvatureField none = CurvatureField::zeros(2, 3);
  for (std::size_t j = 0; j < 3; ++j) none.set_invalid(j);
  CHECK_THROWS_AS(rel_error(none, oracle, 2.0), Error);
}

TEST_CASE("log-log slope") {
  std::vector<ResultRow> exact;
  for (std::size_t n : {100, 1000, 10000, 100000}) exact.push_back(row(n, 0.1, 3.0 / std::pow(double(n), 1.5)));
  CHECK_THAT(slope(exact, SlopeAxis::N), WithinAbs(-1.5, 1e-12));

  std::vector<ResultRow> flat{row(10, 0.1, 0.2), row(20, 0.1, 0.2), row(40, 0.1, 0.2)};
  CHECK_THAT(slope(flat, SlopeAxis::N), WithinAbs(0.0, 1e-14));

  testing::Draws draws(80);
  std::vector<ResultRow> noisy;
  for (int k = 0; k < 40; ++k) {
    const double n = std::pow(10.0, 2 + 3 * k / 39.0);
    const double eps = std::pow(10.0 / n, 0.75);
    const double x = 1.0 / (n * eps);
    noisy.push_back(row(static_cast<std::size_t>(n), eps, x * x * std::exp(0.05 * draws.normal())));
  }
  CHECK_THAT(slope(noisy, SlopeAxis::InvNEps), WithinAbs(2.0, 0.05));

  CHECK_THROWS_AS(slope({row(10, 0.1, 0.2), row(20, 0.1, 0.1)}, SlopeAxis::N), Error);
  CHECK_THROWS_AS(slope({row(10, 0.1, 0.2), row(20, 0.1, 0.0), row(30, 0.1, 0.1)}, SlopeAxis::N), Error);
}

TEST_CASE("rule parsing") {
  CHECK(EpsRule::parse("inv100").at(1000) == 0.1);
  CHECK(EpsRule::parse("100/N").kind == EpsRule::Kind::Inv100);
  CHECK_THAT(EpsRule::parse("pow34").at(10000), WithinRel(std::pow(1e-3, 0.75), 1e-15));
  CHECK(EpsRule::parse("(10/N)^(3/4)").kind == EpsRule::Kind::Pow34);
  CHECK(EpsRule::parse("0.02").at(5) == 0.02);
  CHECK_THROWS_AS(EpsRule::parse("-1"), Error);
  CHECK_THROWS_AS(EpsRule::parse("soon"), Error);

  CHECK(RadiusRule::parse("eps/2").at(0.2) == 0.1);
  CHECK(RadiusRule::parse("eps").at(0.2) == 0.2);
  CHECK(RadiusRule::parse("eps^0.9").at(0.5) == std::pow(0.5, 0.9));
  CHECK(RadiusRule::parse("0.03").at(0.5) == 0.03);
  CHECK_THROWS_AS(RadiusRule::parse("2eps"), Error);

  CHECK_FALSE(parse_average("none").has_value());
  CHECK(parse_average("2eps") == std::make_pair(true, 2.0));
  CHECK(parse_average("2*eps") == std::make_pair(true, 2.0));
  CHECK(parse_average("eps") == std::make_pair(true, 1.0));
  CHECK(parse_average("0.05") == std::make_pair(false, 0.05));
  CHECK_THROWS_AS(parse_average("x"), Error);
}

TEST_CASE("convergence CSV is reproducible") {
  ConvergenceConfig cfg;
  cfg.shape = ShapeSpec::flower();
  cfg.counts = {500, 1000, 2000};
  cfg.eps = EpsRule::parse("pow34");
  cfg.pairs = {"exp-nkp", "tent"};
  cfg.mode = SamplingMode::NonuniformGaussian;
  cfg.noise_variance = 1e-6;
  auto render = [&](unsigned threads) {
    ConvergenceConfig c = cfg;
    c.threads = threads;
    std::ostringstream out;
    write_convergence_csv(out, c, run_convergence(c));
    return out.str();
  };
  const std::string first = render(1);
  CHECK(first == render(1));
  CHECK(first == render(3));
  CHECK(first.find("wall") == std::string::npos);
}

TEST_CASE("relative error is invariant under rigid motion") {
  SamplingSpec s;
  s.count = 3000;
  const ShapeSample smp = sample(ShapeSpec::flower(), s);
  CurvatureRequest req;
  req.eps = 0.05;
  req.pair = kernel_pair_from_token("exp-nkp", 1, 2);
  req.orth = true;
  const double base = rel_error(amc_field(smp.cloud, req), smp.curvature, smp.h_max);

  testing::Draws draws(81);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat q = draws.rotation(2);
    const Vec shift = 3.0 * draws.gaussian(2, 1);
    Mat pts = q * smp.cloud.points();
    pts.colwise() += shift;
    std::vector<Plane> planes;
    for (const Plane& p : smp.cloud.planes()) planes.push_back(Plane::from_basis(q * p.basis()));
    const PointCloudVarifold moved(pts, smp.cloud.masses(), planes);
    const double value = rel_error(amc_field(moved, req), q * smp.curvature, smp.h_max);
    REQUIRE_THAT(value, WithinRel(base, 1e-8));
  }
}

TEST_CASE("the 100/N schedule keeps the neighbor count steady") {
  ConvergenceConfig cfg;
  cfg.shape = ShapeSpec::flower();
  cfg.counts = {1000, 4000, 16000};
  cfg.eps = EpsRule::parse("inv100");
  const auto rows = run_convergence(cfg);
  for (const ResultRow& r : rows) CHECK_THAT(r.neighbors, WithinRel(rows.front().neighbors, 0.2));
}
