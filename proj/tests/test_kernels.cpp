#include "varicurve/error.hpp"
#include "varicurve/kernels.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace varicurve;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("profile values") {
  const KernelProfile tent = make_profile(ProfileKind::Tent);
  const KernelProfile ex = make_profile(ProfileKind::Exp);
  CHECK(tent(0.0) == 1.0);
  CHECK(tent(1.0) == 0.0);
  CHECK(tent(1.5) == 0.0);
  CHECK(tent(-0.25) == tent(0.25));
  CHECK_THAT(ex(0.0), WithinAbs(0.3678794411714423, 1e-15));
  CHECK(ex.derivative(0.0) == 0.0);
  CHECK(ex(1.0) == 0.0);
  CHECK(tent.derivative(0.5) == -1.0);
}

TEST_CASE("exp derivatives agree with finite differences") {
  const KernelProfile ex = make_profile(ProfileKind::Exp);
  const double h = 1e-5;
  for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double fd = (ex(s + h) - ex(s - h)) / (2 * h);
    REQUIRE_THAT(ex.derivative(s), WithinAbs(fd, 1e-8));
    REQUIRE(ex.has_second_derivative());
    const double fd2 = (ex.derivative(s + h) - ex.derivative(s - h)) / (2 * h);
    REQUIRE_THAT(ex.second_derivative(s), WithinAbs(fd2, 1e-6));
  }
}

TEST_CASE("natural partner of the tent") {
  const KernelProfile xi = nkp(make_profile(ProfileKind::Tent), 2);
  for (double s : {0.0, 0.1, 0.5, 0.9, 1.0}) REQUIRE_THAT(xi(s), WithinAbs(s / 2, 1e-15));
  CHECK(xi(0.0) == 0.0);
  CHECK(xi(1.2) == 0.0);
}

TEST_CASE("natural partner of the exp profile") {
  const KernelProfile xi = nkp(make_profile(ProfileKind::Exp), 3);
  const double s = 0.5;
  const double g = 1 - s * s;
  const double expected = 2 * s * s / (3 * g * g) * std::exp(-1 / g);
  CHECK_THAT(xi(s), WithinRel(expected, 1e-14));
}

TEST_CASE("increasing profiles have no natural partner") {
  KernelProfile up;
  up.name = "up";
  up.value = [](double r) { return std::abs(r) <= 1 ? std::abs(r) : 0.0; };
  up.derivative = [](double r) { return std::abs(r) <= 1 ? (r < 0 ? -1.0 : 1.0) : 0.0; };
  try {
    nkp(up, 2);
    FAIL("expected NotNKPEligible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotNKPEligible);
  }
}

TEST_CASE("unit ball volumes") {
  CHECK_THAT(unit_ball_volume(1), WithinAbs(2.0, 1e-15));
  CHECK_THAT(unit_ball_volume(2), WithinAbs(std::numbers::pi, 1e-15));
  CHECK_THAT(unit_ball_volume(3), WithinAbs(4 * std::numbers::pi / 3, 1e-14));
}

TEST_CASE("adaptive quadrature") {
  CHECK_THAT(integrate([](double x) { return std::sin(x); }, 0, std::numbers::pi), WithinAbs(2.0, 1e-10));
  CHECK_THAT(integrate([](double x) { return std::sqrt(x); }, 0, 1, 1e-6), WithinAbs(2.0 / 3, 1e-6));
  CHECK_THROWS_AS(integrate([](double x) { return std::sqrt(x); }, 0, 1, 1e-14, 10), Error);
}

TEST_CASE("kernel constants in closed form") {
  const KernelProfile tent = make_profile(ProfileKind::Tent);
  const KernelProfile xi = nkp(tent, 2);
  const KernelConstants c1 = kernel_constants(tent, xi, 1);
  CHECK_THAT(c1.c_rho, WithinAbs(1.0, 1e-10));
  CHECK_THAT(c1.c_xi, WithinAbs(0.5, 1e-10));
  const KernelConstants c2 = kernel_constants(tent, tent, 2);
  CHECK_THAT(c2.c_rho, WithinAbs(std::numbers::pi / 3, 1e-10));
}

TEST_CASE("scaling a profile scales its constant") {
  const KernelProfile ex = make_profile(ProfileKind::Exp);
  const KernelConstants base = kernel_constants(ex, ex, 2);
  const KernelConstants scaled_c = kernel_constants(scaled(ex, 3.5), ex, 2);
  CHECK_THAT(scaled_c.c_rho, WithinRel(3.5 * base.c_rho, 1e-9));
  CHECK_THAT(scaled_c.c_xi, WithinRel(base.c_xi, 1e-14));
}

TEST_CASE("natural pairs satisfy C_rho / C_xi = n / d") {
  for (const char* token : {"tent-nkp", "exp-nkp"}) {
    for (int n = 2; n <= 4; ++n) {
      for (int d = 1; d < n; ++d) {
        const KernelPair p = kernel_pair_from_token(token, d, n);
        REQUIRE(p.is_nkp);
        REQUIRE(p.nkp_partner_of == n);
        REQUIRE_THAT(d * p.c_rho / p.c_xi, WithinAbs(static_cast<double>(n), 1e-8));
      }
    }
  }
}

TEST_CASE("NKP residual") {
  CHECK(nkp_residual(kernel_pair_from_token("tent-nkp", 1, 2)) <= 1e-10);
  CHECK(nkp_residual(kernel_pair_from_token("exp-nkp", 2, 3)) <= 1e-10);
  CHECK(nkp_residual(kernel_pair_from_token("tent", 1, 2)) > 0.1);
  CHECK(nkp_residual(kernel_pair_from_token("exp", 1, 2)) > 0.01);
}

TEST_CASE("pair tokens") {
  CHECK_FALSE(kernel_pair_from_token("tent", 1, 2).is_nkp);
  CHECK_FALSE(kernel_pair_from_token("exp", 1, 2).nkp_partner_of.has_value());
  CHECK_THROWS_AS(kernel_pair_from_token("gauss", 1, 2), Error);
}
