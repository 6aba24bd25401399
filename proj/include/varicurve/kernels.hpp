#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace varicurve {

enum class Regularity { Lipschitz, W1inf, W2inf };

std::string_view to_string(Regularity r);

/// Radial profile on [0, 1] (left limits at r = 1), extended by zero for r > 1
/// and evenly for r < 0.
/// Derivatives are analytic; finite differences only appear in tests.
struct KernelProfile {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::function<double(double)> second_derivative;  // empty when unavailable
  Regularity regularity = Regularity::Lipschitz;

  double operator()(double r) const { return value(r); }
  bool has_second_derivative() const { return static_cast<bool>(second_derivative); }
};

enum class ProfileKind { Tent, Exp };

/// tent: r -> 1 - r.  exp: r -> exp(-1 / (1 - r^2)).
KernelProfile make_profile(ProfileKind kind);

/// The natural partner xi(s) = -s rho'(s) / n. Throws NotNKPEligible when rho
/// is not nonincreasing on a 1001-node grid.
KernelProfile nkp(const KernelProfile& rho, int n);

/// lambda * profile, lambda > 0.
KernelProfile scaled(const KernelProfile& profile, double lambda);

/// Volume of the unit d-ball.
double unit_ball_volume(int d);

/// Adaptive Simpson with interval bisection. Throws QuadratureFailure if some
/// subinterval still misses its share of `abs_tol` at `max_depth`.
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-10,
                 int max_depth = 40);

struct KernelConstants {
  double c_rho;
  double c_xi;
};

/// C = d * omega_d * int_0^1 profile(r) r^(d-1) dr for both profiles.
KernelConstants kernel_constants(const KernelProfile& rho, const KernelProfile& xi, int d);

struct KernelPair {
  std::string token;
  KernelProfile rho;
  KernelProfile xi;
  double c_rho = 0.0;
  double c_xi = 0.0;
  int d = 1;
  int n = 2;
  bool is_nkp = false;
  /// Set when xi(s) = -s rho'(s) / nkp_partner_of exactly, letting callers
  /// reuse one rho' evaluation for both profiles.
  std::optional<int> nkp_partner_of;
};

/// Assembles a pair and computes its constants.
KernelPair make_kernel_pair(KernelProfile rho, KernelProfile xi, int d, int n, bool is_nkp,
                            std::string token = "custom");

/// CLI tokens: tent, tent-nkp, exp, exp-nkp.
KernelPair kernel_pair_from_token(std::string_view token, int d, int n);

/// max over a 1001-node grid of |s rho'(s) + d (C_rho / C_xi) xi(s)| s^(d-1).
double nkp_residual(const KernelPair& pair);

}  // namespace varicurve
