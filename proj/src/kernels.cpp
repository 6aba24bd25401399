#include "varicurve/kernels.hpp"

#include "varicurve/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace varicurve {

std::string_view to_string(Regularity r) {
  switch (r) {
    case Regularity::Lipschitz: return "Lipschitz";
    case Regularity::W1inf: return "W1inf";
    case Regularity::W2inf: return "W2inf";
  }
  return "Unknown";
}

namespace {

constexpr int kGridNodes = 1001;

double exp_value(double r) {
  r = std::abs(r);
  if (r >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r * r));
}

double exp_derivative(double r) {
  const double sign = r < 0.0 ? -1.0 : 1.0;
  r = std::abs(r);
  if (r >= 1.0) return 0.0;
  const double inv_g = 1.0 / (1.0 - r * r);
  const double rho = std::exp(-inv_g);
  if (rho == 0.0) return 0.0;
  return sign * rho * (-2.0 * r * inv_g * inv_g);
}

double exp_second_derivative(double r) {
  r = std::abs(r);
  if (r >= 1.0) return 0.0;
  const double rho = exp_value(r);
  if (rho == 0.0) return 0.0;
  const double g = 1.0 - r * r;
  const double g2 = g * g;
  return rho * (4.0 * r * r / (g2 * g2) - 2.0 / g2 - 8.0 * r * r / (g2 * g));
}

struct SimpsonState {
  const std::function<double(double)>& f;
  int max_depth;
  bool failed = false;
};

double simpson_step(SimpsonState& st, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= st.max_depth) {
    st.failed = true;
    return left + right + delta / 15.0;
  }
  return simpson_step(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_step(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

KernelProfile make_profile(ProfileKind kind) {
  KernelProfile p;
  switch (kind) {
    case ProfileKind::Tent:
      p.name = "tent";
      p.value = [](double r) { r = std::abs(r); return r >= 1.0 ? 0.0 : 1.0 - r; };
      // Left limit at |r| = 1, so the natural partner -s rho'(s) / n keeps
      // its value s / n on the closed unit interval.
      p.derivative = [](double r) {
        if (std::abs(r) > 1.0) return 0.0;
        return r < 0.0 ? 1.0 : -1.0;
      };
      p.second_derivative = [](double) { return 0.0; };
      p.regularity = Regularity::W1inf;
      break;
    case ProfileKind::Exp:
      p.name = "exp";
      p.value = exp_value;
      p.derivative = exp_derivative;
      p.second_derivative = exp_second_derivative;
      p.regularity = Regularity::W2inf;
      break;
  }
  return p;
}

KernelProfile nkp(const KernelProfile& rho, int n) {
  if (n < 1) throw Error(ErrorCode::DimensionMismatch, "ambient dimension must be positive");
  if (!rho.derivative) throw Error(ErrorCode::NotNKPEligible, "profile has no derivative");
  double prev = rho.value(0.0);
  for (int i = 1; i < kGridNodes; ++i) {
    const double s = static_cast<double>(i) / (kGridNodes - 1);
    const double cur = rho.value(s);
    if (cur > prev + 1e-14 * std::max(1.0, std::abs(prev))) {
      throw Error(ErrorCode::NotNKPEligible, rho.name + " is not nonincreasing on [0, 1]");
    }
    prev = cur;
  }

  KernelProfile xi;
  xi.name = rho.name + "-nkp";
  const double inv_n = 1.0 / n;
  auto drho = rho.derivative;
  xi.value = [drho, inv_n](double s) {
    s = std::abs(s);
    if (s > 1.0) return 0.0;
    return -s * drho(s) * inv_n;
  };
  if (rho.second_derivative) {
    auto d2rho = rho.second_derivative;
    xi.derivative = [drho, d2rho, inv_n](double s) {
      const double sign = s < 0.0 ? -1.0 : 1.0;
      s = std::abs(s);
      if (s > 1.0) return 0.0;
      return sign * -(drho(s) + s * d2rho(s)) * inv_n;
    };
  }
  // xi inherits one order less smoothness than rho.
  switch (rho.regularity) {
    case Regularity::W2inf: xi.regularity = Regularity::W1inf; break;
    default: xi.regularity = Regularity::Lipschitz; break;
  }
  return xi;
}

KernelProfile scaled(const KernelProfile& profile, double lambda) {
  KernelProfile p = profile;
  p.name = profile.name + "*" + std::to_string(lambda);
  auto v = profile.value;
  p.value = [v, lambda](double r) { return lambda * v(r); };
  if (profile.derivative) {
    auto d = profile.derivative;
    p.derivative = [d, lambda](double r) { return lambda * d(r); };
  }
  if (profile.second_derivative) {
    auto d2 = profile.second_derivative;
    p.second_derivative = [d2, lambda](double r) { return lambda * d2(r); };
  }
  return p;
}

double unit_ball_volume(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi / 3.0;
    default: return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
  }
}

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol, int max_depth) {
  SimpsonState st{f, max_depth};
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  // Split once up front so symmetric integrands cannot fool the first error estimate.
  const double m = 0.5 * (a + b);
  const double fl = f(0.5 * (a + m));
  const double fr = f(0.5 * (m + b));
  const double left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
  const double result = simpson_step(st, a, m, fa, fl, fm, left, 0.5 * abs_tol, 1) +
                        simpson_step(st, m, b, fm, fr, fb, right, 0.5 * abs_tol, 1);
  if (st.failed) throw Error(ErrorCode::QuadratureFailure, "adaptive Simpson hit its depth limit");
  return result;
}

KernelConstants kernel_constants(const KernelProfile& rho, const KernelProfile& xi, int d) {
  if (d < 1) throw Error(ErrorCode::DimensionMismatch, "d must be >= 1");
  const double factor = d * unit_ball_volume(d);
  auto moment = [d](const KernelProfile& p) {
    return integrate([&p, d](double r) { return p.value(r) * std::pow(r, d - 1); }, 0.0, 1.0);
  };
  return {factor * moment(rho), factor * moment(xi)};
}

KernelPair make_kernel_pair(KernelProfile rho, KernelProfile xi, int d, int n, bool is_nkp, std::string token) {
  if (d < 1 || d >= n) throw Error(ErrorCode::DimensionMismatch, "need 1 <= d < n");
  const KernelConstants c = kernel_constants(rho, xi, d);
  if (!(c.c_rho > 0.0) || !(c.c_xi > 0.0)) {
    throw Error(ErrorCode::BadData, "kernel constants must be positive");
  }
  KernelPair pair;
  pair.token = std::move(token);
  pair.rho = std::move(rho);
  pair.xi = std::move(xi);
  pair.c_rho = c.c_rho;
  pair.c_xi = c.c_xi;
  pair.d = d;
  pair.n = n;
  pair.is_nkp = is_nkp;
  return pair;
}

KernelPair kernel_pair_from_token(std::string_view token, int d, int n) {
  if (token == "tent") {
    auto t = make_profile(ProfileKind::Tent);
    return make_kernel_pair(t, t, d, n, false, "tent");
  }
  if (token == "tent-nkp") {
    auto t = make_profile(ProfileKind::Tent);
    auto pair = make_kernel_pair(t, nkp(t, n), d, n, true, "tent-nkp");
    pair.nkp_partner_of = n;
    return pair;
  }
  if (token == "exp") {
    auto e = make_profile(ProfileKind::Exp);
    return make_kernel_pair(e, e, d, n, false, "exp");
  }
  if (token == "exp-nkp") {
    auto e = make_profile(ProfileKind::Exp);
    auto pair = make_kernel_pair(e, nkp(e, n), d, n, true, "exp-nkp");
    pair.nkp_partner_of = n;
    return pair;
  }
  throw Error(ErrorCode::ParseError, "unknown kernel pair '" + std::string(token) + "'");
}

double nkp_residual(const KernelPair& pair) {
  const double ratio = pair.c_rho / pair.c_xi;
  double worst = 0.0;
  for (int i = 0; i < kGridNodes; ++i) {
    const double s = static_cast<double>(i) / (kGridNodes - 1);
    const double term = s * pair.rho.derivative(s) + pair.d * ratio * pair.xi.value(s);
    worst = std::max(worst, std::abs(term) * std::pow(s, pair.d - 1));
  }
  return worst;
}

}  // namespace varicurve
