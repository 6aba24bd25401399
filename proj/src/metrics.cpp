#include "varicurve/metrics.hpp"

#include "varicurve/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace varicurve {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Min-cost flow on the complete graph over the support plus a ground node g.
// Arc costs are D_kl between atoms and 1 to or from g; node k must emit
// c_k = mu_k - nu_k and g absorbs the mass imbalance. The node potentials
// of the optimal flow are the optimal test function (phi_g = 0).
class BlFlowSolver {
 public:
  BlFlowSolver(const Mat& distances, std::vector<double> supply)
      : dist_(distances), size_(static_cast<std::size_t>(distances.rows()) + 1), supply_(std::move(supply)) {
    const double imbalance = std::accumulate(supply_.begin(), supply_.end(), 0.0);
    supply_.push_back(-imbalance);
    scale_ = 0.0;
    for (double c : supply_) scale_ += std::abs(c);
    tol_ = 1e-14 * std::max(1.0, scale_);
    flow_ = Mat::Zero(static_cast<Eigen::Index>(size_), static_cast<Eigen::Index>(size_));
    potential_ = Vec::Zero(static_cast<Eigen::Index>(size_));
    excess_ = supply_;
  }

  BlSolution solve() {
    const std::size_t max_rounds = 20 * size_ + 100;
    std::size_t rounds = 0;
    while (has_excess()) {
      if (++rounds > max_rounds) throw Error(ErrorCode::NumericFailure, "flow solver did not converge");
      shortest_paths();
      if (!augment_tree()) throw Error(ErrorCode::NumericFailure, "flow solver stalled");
    }
    return certify();
  }

 private:
  double cost(std::size_t u, std::size_t v) const {
    if (u == v) return 0.0;
    const std::size_t g = size_ - 1;
    if (u == g || v == g) return 1.0;
    return dist_(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
  }
  double& flow(std::size_t u, std::size_t v) {
    return flow_(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
  }
  double& h(std::size_t u) { return potential_(static_cast<Eigen::Index>(u)); }

  bool has_excess() const {
    return std::any_of(excess_.begin(), excess_.end(), [this](double e) { return e > tol_; });
  }

  // Dense Dijkstra on reduced costs from every node with positive excess.
  void shortest_paths() {
    label_.assign(size_, kInf);
    pred_.assign(size_, kNone);
    via_reverse_.assign(size_, 0);
    std::vector<std::uint8_t> done(size_, 0);
    for (std::size_t u = 0; u < size_; ++u) {
      if (excess_[u] > tol_) label_[u] = 0.0;
    }
    for (std::size_t step = 0; step < size_; ++step) {
      std::size_t u = kNone;
      double best = kInf;
      for (std::size_t v = 0; v < size_; ++v) {
        if (!done[v] && label_[v] < best) {
          best = label_[v];
          u = v;
        }
      }
      if (u == kNone) break;
      done[u] = 1;
      const double hu = h(u);
      for (std::size_t v = 0; v < size_; ++v) {
        if (done[v]) continue;
        const double hv = h(v);
        double rc = std::max(0.0, cost(u, v) + hu - hv);
        bool reverse = false;
        if (flow(v, u) > 0.0) {
          const double rc_rev = std::max(0.0, -cost(v, u) + hu - hv);
          if (rc_rev < rc) {
            rc = rc_rev;
            reverse = true;
          }
        }
        if (best + rc < label_[v]) {
          label_[v] = best + rc;
          pred_[v] = u;
          via_reverse_[v] = reverse ? 1 : 0;
        }
      }
    }
    for (std::size_t u = 0; u < size_; ++u) h(u) += label_[u];
  }

  // Push flow along tree paths to every deficit node, nearest first. All tree
  // arcs have zero reduced cost, so each push keeps the flow optimal.
  bool augment_tree() {
    std::vector<std::size_t> sinks;
    for (std::size_t t = 0; t < size_; ++t) {
      if (excess_[t] < -tol_) sinks.push_back(t);
    }
    std::stable_sort(sinks.begin(), sinks.end(), [this](std::size_t a, std::size_t b) { return label_[a] < label_[b]; });
    bool pushed = false;
    for (std::size_t t : sinks) {
      double amount = -excess_[t];
      std::size_t v = t;
      while (pred_[v] != kNone) {
        const std::size_t u = pred_[v];
        if (via_reverse_[v]) amount = std::min(amount, flow(v, u));
        v = u;
      }
      const std::size_t root = v;
      amount = std::min(amount, excess_[root]);
      if (!(amount > tol_)) continue;
      for (v = t; pred_[v] != kNone; v = pred_[v]) {
        const std::size_t u = pred_[v];
        if (via_reverse_[v]) {
          double& f = flow(v, u);
          f -= amount;
          if (f < tol_) f = 0.0;
        } else {
          flow(u, v) += amount;
        }
      }
      excess_[root] -= amount;
      excess_[t] += amount;
      pushed = true;
    }
    return pushed;
  }

  BlSolution certify() {
    const std::size_t g = size_ - 1;
    BlSolution out;
    out.potential.resize(static_cast<Eigen::Index>(g));
    Vec phi(static_cast<Eigen::Index>(size_));
    for (std::size_t u = 0; u < size_; ++u) phi(static_cast<Eigen::Index>(u)) = h(g) - h(u);

    double primal_cost = 0.0;
    double residual = 0.0;
    double violation = 0.0;
    for (std::size_t u = 0; u < size_; ++u) {
      double net = 0.0;
      for (std::size_t v = 0; v < size_; ++v) {
        const double f = flow(u, v);
        if (f < 0.0) residual = std::max(residual, -f);
        primal_cost += f * cost(u, v);
        net += f - flow(v, u);
        const double slack = phi(static_cast<Eigen::Index>(u)) - phi(static_cast<Eigen::Index>(v)) - cost(u, v);
        violation = std::max(violation, slack);
      }
      residual = std::max(residual, std::abs(net - supply_[u]));
    }
    double dual_value = 0.0;
    for (std::size_t u = 0; u < g; ++u) {
      dual_value += supply_[u] * phi(static_cast<Eigen::Index>(u));
      out.potential(static_cast<Eigen::Index>(u)) = phi(static_cast<Eigen::Index>(u));
    }
    out.value = primal_cost;
    out.primal_residual = residual;
    out.dual_violation = violation;
    out.duality_gap = std::abs(primal_cost - dual_value);

    const double norm = std::max(1.0, scale_);
    if (residual > 1e-9 * norm || violation > 1e-9 || out.duality_gap > 1e-8 * norm) {
      throw Error(ErrorCode::NumericFailure,
                  "bounded-Lipschitz certificate failed: residual " + std::to_string(residual) + ", violation " +
                      std::to_string(violation) + ", gap " + std::to_string(out.duality_gap));
    }
    return out;
  }

  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  const Mat& dist_;
  std::size_t size_;
  std::vector<double> supply_;
  std::vector<double> excess_;
  double scale_ = 0.0;
  double tol_ = 0.0;
  Mat flow_;
  Vec potential_;
  std::vector<double> label_;
  std::vector<std::size_t> pred_;
  std::vector<std::uint8_t> via_reverse_;
};

struct MergedSupport {
  std::vector<std::size_t> atom_of_v;
  std::vector<std::size_t> atom_of_w;
  std::vector<Vec> points;
  std::vector<std::size_t> plane_id;
  std::vector<const Plane*> planes;  // unique planes
};

std::vector<double> key_of(const Vec& x, const Plane* plane) {
  std::vector<double> key(x.data(), x.data() + x.size());
  if (plane) key.insert(key.end(), plane->proj().data(), plane->proj().data() + plane->proj().size());
  return key;
}

// Identical atoms (same point, same plane bits) are merged into one.
MergedSupport merge(const PointCloudVarifold& v, const PointCloudVarifold& w, bool with_planes) {
  if (v.ambient() != w.ambient()) throw Error(ErrorCode::DimensionMismatch, "varifolds live in different spaces");
  if (with_planes && v.dim() != w.dim()) throw Error(ErrorCode::DimensionMismatch, "varifolds have different d");
  MergedSupport s;
  std::map<std::vector<double>, std::size_t> atom_index;
  std::map<std::vector<double>, std::size_t> plane_index;
  auto add = [&](const PointCloudVarifold& cloud, std::vector<std::size_t>& ids) {
    for (std::size_t j = 0; j < cloud.size(); ++j) {
      const Vec x = cloud.point(j);
      const Plane* plane = with_planes ? &cloud.planes()[j] : nullptr;
      const auto [it, inserted] = atom_index.try_emplace(key_of(x, plane), s.points.size());
      if (inserted) {
        s.points.push_back(x);
        std::size_t pid = 0;
        if (plane) {
          const auto [pit, fresh] = plane_index.try_emplace(key_of(Vec(), plane), s.planes.size());
          if (fresh) s.planes.push_back(plane);
          pid = pit->second;
        }
        s.plane_id.push_back(pid);
      }
      ids.push_back(it->second);
    }
  };
  add(v, s.atom_of_v);
  add(w, s.atom_of_w);
  if (s.points.size() > kMaxBlSupport) {
    throw Error(ErrorCode::TooLarge, "combined support has " + std::to_string(s.points.size()) +
                                         " atoms (limit " + std::to_string(kMaxBlSupport) + "); subsample first");
  }
  return s;
}

double bl_between(const PointCloudVarifold& v, const PointCloudVarifold& w, bool with_planes) {
  const MergedSupport s = merge(v, w, with_planes);
  const std::size_t m = s.points.size();
  Mat plane_dist = Mat::Zero(static_cast<Eigen::Index>(s.planes.size()), static_cast<Eigen::Index>(s.planes.size()));
  for (std::size_t a = 0; a < s.planes.size(); ++a) {
    for (std::size_t b = a + 1; b < s.planes.size(); ++b) {
      const double pd = plane_distance(*s.planes[a], *s.planes[b]);
      plane_dist(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = pd;
      plane_dist(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = pd;
    }
  }
  Mat dist = Mat::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      double dab = (s.points[a] - s.points[b]).norm();
      if (with_planes) {
        dab += plane_dist(static_cast<Eigen::Index>(s.plane_id[a]), static_cast<Eigen::Index>(s.plane_id[b]));
      }
      dist(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = dab;
      dist(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = dab;
    }
  }
  std::vector<double> mu(m, 0.0), nu(m, 0.0);
  for (std::size_t j = 0; j < v.size(); ++j) mu[s.atom_of_v[j]] += v.masses()[j];
  for (std::size_t j = 0; j < w.size(); ++j) nu[s.atom_of_w[j]] += w.masses()[j];
  return solve_bl(dist, mu, nu).value;
}

struct CellSummary {
  std::size_t flat = 0;
  double mass = 0.0;
  Vec centroid;
  Plane plane;
};

Plane mean_plane(const PointCloudVarifold& v, const std::vector<std::size_t>& members) {
  const Plane& first = v.planes()[members.front()];
  const bool uniform = std::all_of(members.begin(), members.end(),
                                   [&](std::size_t j) { return v.planes()[j].same_as(first); });
  if (uniform) return first;
  const int n = v.ambient();
  const int d = v.dim();
  Mat mean = Mat::Zero(n, n);
  double mass = 0.0;
  for (std::size_t j : members) {
    mean += v.masses()[j] * v.planes()[j].proj();
    mass += v.masses()[j];
  }
  mean /= mass;
  const Eigen::SelfAdjointEigenSolver<Mat> eig(mean);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::NumericFailure, "eigen solver failed on a cell");
  Mat basis = eig.eigenvectors().rightCols(d);
  for (int c = 0; c < d; ++c) {
    for (int i = 0; i < n; ++i) {
      if (std::abs(basis(i, c)) > 1e-12) {
        if (basis(i, c) < 0.0) basis.col(c) *= -1.0;
        break;
      }
    }
  }
  return Plane::from_orthonormal(basis, 1e-8);
}

std::vector<CellSummary> summarize(const PointCloudVarifold& v, const Grid& grid) {
  if (v.ambient() != grid.ambient()) throw Error(ErrorCode::DimensionMismatch, "grid and cloud dimensions differ");
  std::map<std::size_t, std::vector<std::size_t>> members;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const Vec x = v.point(j);
    const auto cell = grid.locate(x);
    if (!cell) throw Error(ErrorCode::OutsideGrid, "point " + std::to_string(j) + " is outside the grid");
    members[*cell].push_back(j);
  }
  std::vector<CellSummary> out;
  out.reserve(members.size());
  for (const auto& [flat, ids] : members) {
    double mass = 0.0;
    Vec centroid = Vec::Zero(v.ambient());
    for (std::size_t j : ids) {
      mass += v.masses()[j];
      centroid += v.masses()[j] * v.point(j);
    }
    if (ids.size() == 1) {
      centroid = v.point(ids.front());
    } else {
      centroid /= mass;
    }
    out.push_back({flat, mass, std::move(centroid), mean_plane(v, ids)});
  }
  return out;
}

}  // namespace

void DiscreteMeasure::validate(bool check_triangle) const {
  const auto m = static_cast<Eigen::Index>(weights.size());
  if (distances.rows() != m || distances.cols() != m) throw Error(ErrorCode::BadData, "distance matrix size");
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::BadData, "weights must be finite and >= 0");
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (distances(i, i) != 0.0) throw Error(ErrorCode::BadData, "distance matrix diagonal must be zero");
    for (Eigen::Index j = 0; j < m; ++j) {
      if (distances(i, j) != distances(j, i) || !(distances(i, j) >= 0.0)) {
        throw Error(ErrorCode::BadData, "distance matrix must be symmetric and nonnegative");
      }
    }
  }
  if (!check_triangle) return;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index k = 0; k < m; ++k) {
        if (distances(i, k) > distances(i, j) + distances(j, k) + 1e-9) {
          throw Error(ErrorCode::BadData, "distance matrix violates the triangle inequality");
        }
      }
    }
  }
}

BlSolution solve_bl(const Mat& distances, const std::vector<double>& mu, const std::vector<double>& nu) {
  const std::size_t m = mu.size();
  if (nu.size() != m || static_cast<std::size_t>(distances.rows()) != m ||
      static_cast<std::size_t>(distances.cols()) != m) {
    throw Error(ErrorCode::DimensionMismatch, "measure and distance sizes differ");
  }
  if (m > kMaxBlSupport) {
    throw Error(ErrorCode::TooLarge, "support has " + std::to_string(m) + " atoms (limit " +
                                         std::to_string(kMaxBlSupport) + "); subsample first");
  }
  std::vector<double> supply(m);
  bool zero = true;
  for (std::size_t k = 0; k < m; ++k) {
    supply[k] = mu[k] - nu[k];
    zero = zero && supply[k] == 0.0;
  }
  if (zero) {
    BlSolution trivial;
    trivial.potential = Vec::Zero(static_cast<Eigen::Index>(m));
    return trivial;
  }
  // Solve with the first nonzero supply positive; swapping mu and nu then
  // gives the bitwise-identical problem, so the distance is exactly symmetric.
  const bool flip = *std::find_if(supply.begin(), supply.end(), [](double s) { return s != 0.0; }) < 0.0;
  if (flip) {
    for (double& s : supply) s = -s;
  }
  BlSolution sol = BlFlowSolver(distances, std::move(supply)).solve();
  if (flip) sol.potential = -sol.potential;
  return sol;
}

double bl_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  mu.validate();
  nu.validate();
  if (mu.distances.rows() != nu.distances.rows() || mu.distances != nu.distances) {
    throw Error(ErrorCode::DimensionMismatch, "measures must share one support");
  }
  return solve_bl(mu.distances, mu.weights, nu.weights).value;
}

double bl_distance_varifolds(const PointCloudVarifold& v, const PointCloudVarifold& w) {
  return bl_between(v, w, true);
}

double bl_distance_masses(const PointCloudVarifold& v, const PointCloudVarifold& w) {
  return bl_between(v, w, false);
}

std::size_t Grid::cell_count() const {
  std::size_t total = 1;
  for (long c : counts) total *= static_cast<std::size_t>(c);
  return total;
}

Box Grid::cell(std::size_t flat) const {
  const int n = ambient();
  Box box{Vec(n), Vec(n)};
  for (int i = 0; i < n; ++i) {
    const auto count = static_cast<std::size_t>(counts[static_cast<std::size_t>(i)]);
    const auto k = static_cast<double>(flat % count);
    flat /= count;
    box.lo(i) = origin(i) + k * edge;
    box.hi(i) = origin(i) + (k + 1.0) * edge;
  }
  return box;
}

std::optional<std::size_t> Grid::locate(const Vec& x) const {
  const int n = ambient();
  if (x.size() != n) throw Error(ErrorCode::DimensionMismatch, "point dimension differs from grid");
  std::size_t flat = 0;
  std::size_t stride = 1;
  for (int i = 0; i < n; ++i) {
    const long count = counts[static_cast<std::size_t>(i)];
    const double u = (x(i) - origin(i)) / edge;
    if (!(u > -1.0) || !(u < static_cast<double>(count) + 1.0)) return std::nullopt;
    auto k = static_cast<long>(std::floor(u));
    // Agree bitwise with the cell boxes' half-open comparisons.
    while (k > 0 && x(i) < origin(i) + static_cast<double>(k) * edge) --k;
    while (x(i) >= origin(i) + static_cast<double>(k + 1) * edge) ++k;
    if (k < 0 || k >= count || x(i) < origin(i) + static_cast<double>(k) * edge) return std::nullopt;
    flat += static_cast<std::size_t>(k) * stride;
    stride *= static_cast<std::size_t>(count);
  }
  return flat;
}

Grid build_grid(const Box& bbox, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw Error(ErrorCode::BadData, "delta must be positive");
  const auto n = static_cast<int>(bbox.lo.size());
  if (n < 1 || bbox.hi.size() != n) throw Error(ErrorCode::DimensionMismatch, "box dimension");
  Grid grid;
  grid.origin = bbox.lo;
  grid.delta = delta;
  grid.edge = delta / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    const double cells = (bbox.hi(i) - bbox.lo(i)) / grid.edge;
    grid.counts.push_back(std::max(1L, static_cast<long>(std::ceil(cells - 1e-9))));
  }
  return grid;
}

Box bounding_box(const PointCloudVarifold& v, double pad) {
  const Mat& p = v.points();
  Box box{p.rowwise().minCoeff(), p.rowwise().maxCoeff()};
  box.lo.array() -= pad;
  box.hi.array() += pad;
  return box;
}

VolumetricVarifold to_volumetric(const PointCloudVarifold& v, const Grid& grid) {
  auto cells = summarize(v, grid);
  std::vector<Box> boxes;
  std::vector<double> masses;
  std::vector<Plane> planes;
  for (auto& c : cells) {
    boxes.push_back(grid.cell(c.flat));
    masses.push_back(c.mass);
    planes.push_back(std::move(c.plane));
  }
  return {std::move(boxes), std::move(masses), std::move(planes)};
}

PointCloudVarifold to_pointcloud(const PointCloudVarifold& v, const Grid& grid) {
  auto cells = summarize(v, grid);
  Mat points(v.ambient(), static_cast<Eigen::Index>(cells.size()));
  std::vector<double> masses;
  std::vector<Plane> planes;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    points.col(static_cast<Eigen::Index>(k)) = cells[k].centroid;
    masses.push_back(cells[k].mass);
    planes.push_back(std::move(cells[k].plane));
  }
  return {std::move(points), std::move(masses), std::move(planes)};
}

PointCloudVarifold sample_volumetric(const VolumetricVarifold& v, int k) {
  if (k < 1) throw Error(ErrorCode::BadData, "sub-sampling factor must be >= 1");
  const int n = v.ambient();
  std::size_t per_cell = 1;
  for (int i = 0; i < n; ++i) per_cell *= static_cast<std::size_t>(k);
  std::vector<Vec> points;
  std::vector<double> masses;
  std::vector<Plane> planes;
  for (std::size_t c = 0; c < v.size(); ++c) {
    const double mass = v.masses()[c];
    if (mass == 0.0) continue;
    const Box& box = v.cells()[c];
    const Vec step = (box.hi - box.lo) / static_cast<double>(k);
    for (std::size_t s = 0; s < per_cell; ++s) {
      Vec x(n);
      std::size_t rest = s;
      for (int i = 0; i < n; ++i) {
        x(i) = box.lo(i) + (static_cast<double>(rest % static_cast<std::size_t>(k)) + 0.5) * step(i);
        rest /= static_cast<std::size_t>(k);
      }
      points.push_back(std::move(x));
      masses.push_back(mass / static_cast<double>(per_cell));
      planes.push_back(v.planes()[c]);
    }
  }
  if (points.empty()) throw Error(ErrorCode::EmptyCloud, "volumetric varifold has no mass");
  Mat cols(n, static_cast<Eigen::Index>(points.size()));
  for (std::size_t j = 0; j < points.size(); ++j) cols.col(static_cast<Eigen::Index>(j)) = points[j];
  return {std::move(cols), std::move(masses), std::move(planes)};
}

}  // namespace varicurve
