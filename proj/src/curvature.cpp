#include "varicurve/curvature.hpp"

#include "varicurve/error.hpp"
#include "varicurve/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <vector>

namespace varicurve {

namespace {

constexpr double kMassFloor = 1e-300;

struct Accumulated {
  Vec first_variation;  // eps^-(n+1) sum ...
  double mass = 0.0;    // eps^-n sum ...
};

// One pass over B_eps(x): numerator (self excluded) and denominator (self included).
// When `skip` is set, numerator terms carrying exactly that plane are dropped;
// they would vanish under the projection onto skip's orthogonal complement.
// N > 0 fixes the ambient dimension at compile time; N == 0 reads it from v.
template <int N>
Accumulated accumulate_in(const PointCloudVarifold& v, const std::vector<std::size_t>& nbrs,
                          const KernelProfile* rho, const KernelProfile* xi, double eps, const Vec& x,
                          const Plane* skip, std::optional<int> nkp_n) {
  const int n = N > 0 ? N : v.ambient();
  const Mat& pts = v.points();
  const auto& masses = v.masses();
  const auto nn = static_cast<std::size_t>(n * n);
  const double* skip_proj = skip != nullptr ? skip->proj().data() : nullptr;
  auto skipped = [&](std::size_t j) {
    return skip_proj != nullptr && std::memcmp(v.projector(j), skip_proj, nn * sizeof(double)) == 0;
  };
  Accumulated acc;
  acc.first_variation = Vec::Zero(n);
  double* fv = acc.first_variation.data();
  std::array<double, FixedRadiusIndex::kMaxDim> u{};
  const double inv_eps = 1.0 / eps;
  const bool fused = nkp_n.has_value() && rho != nullptr && xi != nullptr;
  const double inv_n = fused ? 1.0 / *nkp_n : 0.0;
  auto add_term = [&](std::size_t j, double w) {
    const double* proj = v.projector(j);
    for (int b = 0; b < n; ++b) {
      const double wu = w * u[static_cast<std::size_t>(b)];
      for (int a = 0; a < n; ++a) fv[a] += proj[b * n + a] * wu;
    }
  };
  for (std::size_t j : nbrs) {
    const double* p = pts.col(static_cast<Eigen::Index>(j)).data();
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      u[static_cast<std::size_t>(i)] = p[i] - x(i);
      r2 += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
    }
    const double r = std::sqrt(r2);
    const double s = r * inv_eps;
    if (fused) {
      const double drho = rho->derivative(s);
      acc.mass += masses[j] * (-s * drho * inv_n);
      if (r == 0.0 || skipped(j)) continue;
      add_term(j, masses[j] * drho / r);
      continue;
    }
    if (xi != nullptr) acc.mass += masses[j] * xi->value(s);
    if (rho == nullptr || r == 0.0) continue;
    if (skipped(j)) continue;
    add_term(j, masses[j] * rho->derivative(s) / r);
  }
  const double scale_n = std::pow(inv_eps, n);
  acc.first_variation *= scale_n * inv_eps;
  acc.mass *= scale_n;
  return acc;
}

Accumulated accumulate(const PointCloudVarifold& v, const std::vector<std::size_t>& nbrs,
                       const KernelProfile* rho, const KernelProfile* xi, double eps, const Vec& x,
                       const Plane* skip, std::optional<int> nkp_n = std::nullopt) {
  switch (v.ambient()) {
    case 2: return accumulate_in<2>(v, nbrs, rho, xi, eps, x, skip, nkp_n);
    case 3: return accumulate_in<3>(v, nbrs, rho, xi, eps, x, skip, nkp_n);
    default: return accumulate_in<0>(v, nbrs, rho, xi, eps, x, skip, nkp_n);
  }
}

double prefactor(const CurvatureRequest& req) {
  return req.include_constants ? req.pair.c_xi / req.pair.c_rho : 1.0;
}

std::optional<Vec> finish(const Accumulated& acc, const CurvatureRequest& req) {
  if (!(acc.mass >= kMassFloor)) return std::nullopt;
  return Vec(-prefactor(req) * acc.first_variation / acc.mass);
}

// Gauss-Legendre 3-point rule on [-1, 1].
constexpr std::array<double, 3> kGaussNodes{-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr std::array<double, 3> kGaussWeights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

double box_min_distance(const Box& b, const Vec& x) {
  double d2 = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double c = std::clamp(x(i), b.lo(i), b.hi(i));
    d2 += (c - x(i)) * (c - x(i));
  }
  return std::sqrt(d2);
}

double box_max_distance(const Box& b, const Vec& x) {
  double d2 = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double far = std::max(std::abs(x(i) - b.lo(i)), std::abs(x(i) - b.hi(i)));
    d2 += far * far;
  }
  return std::sqrt(d2);
}

// Tensor Gauss rule of f over box b; f(y, weight) accumulates.
template <typename F>
void gauss_box(const Box& b, F&& f) {
  const auto n = static_cast<int>(b.lo.size());
  const Vec half = 0.5 * (b.hi - b.lo);
  const Vec mid = 0.5 * (b.hi + b.lo);
  const double jac = half.prod();
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  Vec y(n);
  while (true) {
    double w = jac;
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(idx[static_cast<std::size_t>(i)]);
      y(i) = mid(i) + half(i) * kGaussNodes[k];
      w *= kGaussWeights[k];
    }
    f(y, w);
    int i = 0;
    for (; i < n; ++i) {
      auto& c = idx[static_cast<std::size_t>(i)];
      if (++c < 3) break;
      c = 0;
    }
    if (i == n) break;
  }
}

// Applies `rule` to b, or to its 2^n halves when the sphere |y - x| = eps cuts it.
template <typename F>
void integrate_cell(const Box& b, const Vec& x, double eps, F&& f) {
  const double dmin = box_min_distance(b, x);
  if (dmin >= eps) return;
  const double dmax = box_max_distance(b, x);
  if (dmax <= eps) {
    gauss_box(b, f);
    return;
  }
  const auto n = static_cast<int>(b.lo.size());
  const Vec mid = 0.5 * (b.lo + b.hi);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Box sub{b.lo, b.hi};
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        sub.lo(i) = mid(i);
      } else {
        sub.hi(i) = mid(i);
      }
    }
    gauss_box(sub, f);
  }
}

}  // namespace

void CurvatureRequest::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorCode::BadData, "eps must be positive");
  if (average_radius && !(*average_radius > 0.0)) {
    throw Error(ErrorCode::BadData, "average radius must be positive");
  }
  if (!(pair.c_rho > 0.0) || !(pair.c_xi > 0.0)) throw Error(ErrorCode::BadData, "kernel pair has no constants");
}

Vec regularized_first_variation(const PointCloudVarifold& v, const FixedRadiusIndex& index,
                                const KernelProfile& rho, double eps, const Vec& x) {
  if (x.size() != v.ambient()) throw Error(ErrorCode::DimensionMismatch, "query point has wrong dimension");
  const auto nbrs = index.radius_query(x, eps);
  return accumulate(v, nbrs, &rho, nullptr, eps, x, nullptr).first_variation;
}

Vec regularized_first_variation(const PointCloudVarifold& v, const KernelProfile& rho, double eps, const Vec& x) {
  const FixedRadiusIndex index(v.points(), eps);
  return regularized_first_variation(v, index, rho, eps, x);
}

double regularized_mass(const PointCloudVarifold& v, const FixedRadiusIndex& index, const KernelProfile& xi,
                        double eps, const Vec& x) {
  if (x.size() != v.ambient()) throw Error(ErrorCode::DimensionMismatch, "query point has wrong dimension");
  const auto nbrs = index.radius_query(x, eps);
  return accumulate(v, nbrs, nullptr, &xi, eps, x, nullptr).mass;
}

double regularized_mass(const PointCloudVarifold& v, const KernelProfile& xi, double eps, const Vec& x) {
  const FixedRadiusIndex index(v.points(), eps);
  return regularized_mass(v, index, xi, eps, x);
}

Vec regularized_first_variation(const VolumetricVarifold& v, const KernelProfile& rho, double eps, const Vec& x) {
  const int n = v.ambient();
  if (x.size() != n) throw Error(ErrorCode::DimensionMismatch, "query point has wrong dimension");
  Vec total = Vec::Zero(n);
  Vec u(n);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Box& cell = v.cells()[k];
    const double density = v.masses()[k] / cell.volume();
    if (density == 0.0) continue;
    const Mat& proj = v.planes()[k].proj();
    Vec cell_sum = Vec::Zero(n);
    integrate_cell(cell, x, eps, [&](const Vec& y, double w) {
      u = y - x;
      const double r = u.norm();
      if (r == 0.0 || r >= eps) return;
      cell_sum += (w * rho.derivative(r / eps) / r) * (proj * u);
    });
    total += density * cell_sum;
  }
  return total / std::pow(eps, n + 1);
}

double regularized_mass(const VolumetricVarifold& v, const KernelProfile& xi, double eps, const Vec& x) {
  const int n = v.ambient();
  if (x.size() != n) throw Error(ErrorCode::DimensionMismatch, "query point has wrong dimension");
  double total = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Box& cell = v.cells()[k];
    const double density = v.masses()[k] / cell.volume();
    if (density == 0.0) continue;
    double cell_sum = 0.0;
    integrate_cell(cell, x, eps, [&](const Vec& y, double w) {
      const double r = (y - x).norm();
      if (r < eps) cell_sum += w * xi.value(r / eps);
    });
    total += density * cell_sum;
  }
  return total / std::pow(eps, n);
}

std::optional<Vec> amc(const PointCloudVarifold& v, const FixedRadiusIndex& index, const CurvatureRequest& req,
                       const Vec& x) {
  req.validate();
  if (x.size() != v.ambient()) throw Error(ErrorCode::DimensionMismatch, "query point has wrong dimension");
  const auto nbrs = index.radius_query(x, req.eps);
  return finish(accumulate(v, nbrs, &req.pair.rho, &req.pair.xi, req.eps, x, nullptr, req.pair.nkp_partner_of), req);
}

std::optional<Vec> amc(const PointCloudVarifold& v, const CurvatureRequest& req, const Vec& x) {
  req.validate();
  const FixedRadiusIndex index(v.points(), req.eps);
  return amc(v, index, req, x);
}

std::optional<Vec> amc(const VolumetricVarifold& v, const CurvatureRequest& req, const Vec& x) {
  req.validate();
  const double mass = regularized_mass(v, req.pair.xi, req.eps, x);
  if (!(mass >= kMassFloor)) return std::nullopt;
  return Vec(-prefactor(req) * regularized_first_variation(v, req.pair.rho, req.eps, x) / mass);
}

std::optional<Vec> amc_orth(const PointCloudVarifold& v, const FixedRadiusIndex& index,
                            const CurvatureRequest& req, std::size_t j0) {
  req.validate();
  if (j0 >= v.size()) throw Error(ErrorCode::BadData, "point index out of range");
  const Vec x = v.point(j0);
  const Plane& own = v.planes()[j0];
  const auto nbrs = index.radius_query(x, req.eps);
  const auto h = finish(accumulate(v, nbrs, &req.pair.rho, &req.pair.xi, req.eps, x, &own, req.pair.nkp_partner_of), req);
  if (!h) return std::nullopt;
  return Vec(*h - own.proj() * *h);
}

std::optional<Vec> amc_orth(const PointCloudVarifold& v, const CurvatureRequest& req, std::size_t j0) {
  req.validate();
  const FixedRadiusIndex index(v.points(), req.eps);
  return amc_orth(v, index, req, j0);
}

CurvatureField amc_field(const PointCloudVarifold& v, const CurvatureRequest& req) {
  req.validate();
  const FixedRadiusIndex index(v.points(), req.eps);
  CurvatureField field = CurvatureField::zeros(v.ambient(), v.size());
  parallel_for(v.size(), req.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> nbrs;
    Vec x(v.ambient());
    for (std::size_t j = begin; j < end; ++j) {
      x = v.point(j);
      index.radius_query(x, req.eps, nbrs);
      const Plane* own = req.orth ? &v.planes()[j] : nullptr;
      auto h = finish(accumulate(v, nbrs, &req.pair.rho, &req.pair.xi, req.eps, x, own, req.pair.nkp_partner_of), req);
      if (!h) {
        field.set_invalid(j);
        continue;
      }
      if (own != nullptr) *h -= own->proj() * *h;
      field.set(j, *h);
    }
  });
  if (req.average_radius) return average_field(field, v, *req.average_radius, req.threads);
  return field;
}

CurvatureField average_field(const CurvatureField& field, const PointCloudVarifold& v, double radius,
                             unsigned threads) {
  if (!(radius > 0.0)) throw Error(ErrorCode::BadData, "averaging radius must be positive");
  if (field.size() != v.size()) throw Error(ErrorCode::DimensionMismatch, "field and cloud differ in length");
  const FixedRadiusIndex index(v.points(), radius);
  CurvatureField out = CurvatureField::zeros(v.ambient(), v.size());
  parallel_for(v.size(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> nbrs;
    Vec x(v.ambient());
    Vec sum(v.ambient());
    for (std::size_t i = begin; i < end; ++i) {
      if (!field.valid[i]) {
        out.set_invalid(i);
        continue;
      }
      x = v.point(i);
      index.radius_query(x, radius, nbrs);
      sum.setZero();
      std::size_t count = 0;
      for (std::size_t j : nbrs) {
        if (!field.valid[j]) continue;
        sum += field.vectors.col(static_cast<Eigen::Index>(j));
        ++count;
      }
      out.set(i, sum / static_cast<double>(count));
    }
  });
  return out;
}

namespace {

// Midpoint rule over a uniform grid of step `grid_step` covering `bbox`.
template <typename Integrand>
double midpoint_l1(int n, double eps, const Box& bbox, double grid_step, Integrand&& fv_norm_at) {
  if (!(eps > 0.0)) throw Error(ErrorCode::BadData, "eps must be positive");
  if (!(grid_step > 0.0)) throw Error(ErrorCode::BadData, "grid step must be positive");
  if (grid_step >= eps) throw Error(ErrorCode::StepTooCoarse, "grid step must be smaller than eps");
  if (bbox.lo.size() != n || bbox.hi.size() != n) throw Error(ErrorCode::DimensionMismatch, "box dimension");

  std::vector<long> counts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    counts[static_cast<std::size_t>(i)] =
        std::max(1L, static_cast<long>(std::ceil((bbox.hi(i) - bbox.lo(i)) / grid_step)));
  }
  const double cell_volume = std::pow(grid_step, n);
  std::vector<long> idx(static_cast<std::size_t>(n), 0);
  Vec x(n);
  double total = 0.0;
  while (true) {
    for (int i = 0; i < n; ++i) {
      x(i) = bbox.lo(i) + (static_cast<double>(idx[static_cast<std::size_t>(i)]) + 0.5) * grid_step;
    }
    total += fv_norm_at(x);
    int i = 0;
    for (; i < n; ++i) {
      auto& c = idx[static_cast<std::size_t>(i)];
      if (++c < counts[static_cast<std::size_t>(i)]) break;
      c = 0;
    }
    if (i == n) break;
  }
  return total * cell_volume;
}

}  // namespace

double fv_l1_norm(const PointCloudVarifold& v, const KernelProfile& rho, double eps, const Box& bbox,
                  double grid_step) {
  if (!(eps > 0.0)) throw Error(ErrorCode::BadData, "eps must be positive");
  const FixedRadiusIndex index(v.points(), eps);
  std::vector<std::size_t> nbrs;
  return midpoint_l1(v.ambient(), eps, bbox, grid_step, [&](const Vec& x) {
    index.radius_query(x, eps, nbrs);
    if (nbrs.empty()) return 0.0;
    return accumulate(v, nbrs, &rho, nullptr, eps, x, nullptr).first_variation.norm();
  });
}

double fv_l1_norm(const VolumetricVarifold& v, const KernelProfile& rho, double eps, const Box& bbox,
                  double grid_step) {
  if (v.total_mass() == 0.0) {
    midpoint_l1(v.ambient(), eps, bbox, grid_step, [](const Vec&) { return 0.0; });
    return 0.0;
  }
  return midpoint_l1(v.ambient(), eps, bbox, grid_step,
                     [&](const Vec& x) { return regularized_first_variation(v, rho, eps, x).norm(); });
}

double mean_neighbor_count(const PointCloudVarifold& v, double eps) {
  const FixedRadiusIndex index(v.points(), eps);
  Vec x(v.ambient());
  double total = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    x = v.point(j);
    total += static_cast<double>(index.count_within(x, eps));
  }
  return total / static_cast<double>(v.size());
}

}  // namespace varicurve
