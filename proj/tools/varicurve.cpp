#include "varicurve/acceptance.hpp"
#include "varicurve/cotangent.hpp"
#include "varicurve/curvature.hpp"
#include "varicurve/error.hpp"
#include "varicurve/harness.hpp"
#include "varicurve/io.hpp"
#include "varicurve/kernels.hpp"
#include "varicurve/metrics.hpp"
#include "varicurve/shapes.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace varicurve;

constexpr int kExitParse = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitAcceptance = 4;

struct Global {
  std::uint64_t seed = 7;
  unsigned threads = 1;
  std::string out;  // empty or "-" means stdout
};

// Writes to the --out file or to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw Error(ErrorCode::ParseError, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

bool parse_switch(const std::string& text, const std::string& flag) {
  if (text == "on" || text == "true" || text == "1") return true;
  if (text == "off" || text == "false" || text == "0") return false;
  throw Error(ErrorCode::ParseError, flag + " expects on or off, got '" + text + "'");
}

SamplingMode parse_mode(const std::string& text) {
  if (text == "uniform") return SamplingMode::UniformParameter;
  if (text == "nonuniform") return SamplingMode::NonuniformGaussian;
  throw Error(ErrorCode::ParseError, "--mode expects uniform or nonuniform");
}

TangentMode parse_tangents(const std::string& text) {
  if (text == "exact") return TangentMode::Exact;
  if (text == "regression") return TangentMode::Regression;
  throw Error(ErrorCode::ParseError, "--tangents expects exact or regression");
}

std::vector<std::size_t> parse_counts(const std::string& text) {
  std::vector<std::size_t> counts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const double value = std::stod(item, &used);
      if (used != item.size() || !(value >= 1.0)) throw std::invalid_argument(item);
      counts.push_back(static_cast<std::size_t>(value));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "cannot parse point count '" + item + "'");
    }
  }
  if (counts.empty()) throw Error(ErrorCode::ParseError, "no point counts given");
  return counts;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ShapeSpec make_shape(const std::string& name, std::optional<double> a, std::optional<double> b) {
  const ShapeKind kind = shape_kind_from_string(name);
  ShapeSpec shape;
  switch (kind) {
    case ShapeKind::Circle: shape = ShapeSpec::circle(); break;
    case ShapeKind::Ellipse: shape = ShapeSpec::ellipse(); break;
    case ShapeKind::Flower: shape = ShapeSpec::flower(); break;
    case ShapeKind::Eight: shape = ShapeSpec::eight(); break;
    case ShapeKind::TwoCircles: shape = ShapeSpec::two_circles(); break;
    case ShapeKind::DoubleBubble2D: shape = double_bubble(2, 1.0, 0.6).spec(); break;
    case ShapeKind::DoubleBubble3D: shape = double_bubble(3, 1.0, 0.7).spec(); break;
  }
  if (a) shape.a = *a;
  if (b) shape.b = *b;
  if (kind == ShapeKind::Circle && a && !b) shape.b = *a;
  shape.validate();
  return shape;
}

struct GenerateArgs {
  std::string shape = "circle";
  std::optional<double> a, b;
  std::size_t count = 1000;
  std::string mode = "uniform";
  std::string tangents = "exact";
  std::string regression = "eps/2";
  std::optional<double> eps;
  std::optional<double> noise;
  bool noise_stddev = false;
  std::string oracle;
};

int run_generate(const GenerateArgs& args, const Global& g) {
  const ShapeSpec shape = make_shape(args.shape, args.a, args.b);
  SamplingSpec s;
  s.count = args.count;
  s.mode = parse_mode(args.mode);
  s.tangents = parse_tangents(args.tangents);
  s.seed = g.seed;
  s.noise_variance = args.noise;
  s.noise_is_stddev = args.noise_stddev;
  if (s.tangents == TangentMode::Regression) {
    const RadiusRule rule = RadiusRule::parse(args.regression);
    if (rule.kind != RadiusRule::Kind::Fixed && !args.eps) {
      throw Error(ErrorCode::ParseError, "--regression-radius " + args.regression + " needs --eps");
    }
    s.regression_radius = rule.at(args.eps.value_or(0.0));
  }
  const ShapeSample smp = sample(shape, s);
  Output out(g.out);
  write_cloud(out.stream(), smp.cloud);
  if (!args.oracle.empty()) {
    CurvatureField field = CurvatureField::zeros(shape.ambient(), smp.cloud.size());
    for (std::size_t j = 0; j < smp.cloud.size(); ++j) field.set(j, smp.curvature.col(static_cast<Eigen::Index>(j)));
    std::ofstream oracle(args.oracle);
    if (!oracle) throw Error(ErrorCode::ParseError, "cannot write " + args.oracle);
    write_field_csv(oracle, smp.cloud.points(), field);
  }
  if (smp.dropped > 0) std::cerr << smp.dropped << " points had no regression plane and were dropped\n";
  return 0;
}

struct CurvatureArgs {
  std::string in;
  std::string eps = "pow34";
  std::string pair = "exp-nkp";
  bool orth = false;
  std::string avg = "none";
  std::string constants = "on";
};

int run_curvature(const CurvatureArgs& args, const Global& g) {
  const PointCloudVarifold cloud = read_cloud(args.in);
  CurvatureRequest req;
  req.eps = EpsRule::parse(args.eps).at(cloud.size());
  req.pair = kernel_pair_from_token(args.pair, cloud.dim(), cloud.ambient());
  req.orth = args.orth;
  if (const auto avg = parse_average(args.avg)) req.average_radius = avg->first ? avg->second * req.eps : avg->second;
  req.include_constants = parse_switch(args.constants, "--constants");
  req.threads = g.threads;
  const CurvatureField field = amc_field(cloud, req);
  Output out(g.out);
  write_field_csv(out.stream(), cloud.points(), field);
  return 0;
}

struct ConvergeArgs {
  std::string shape = "circle";
  std::optional<double> a, b;
  std::string counts = "1000,10000,100000";
  std::string eps = "pow34";
  std::string pairs = "exp-nkp";
  std::string tangents = "exact";
  std::string regression = "eps/2";
  std::string orth = "on";
  std::string avg = "none";
  std::string mode = "uniform";
  std::optional<double> noise;
  bool noise_over_n = false;
  bool noise_stddev = false;
  std::string constants = "on";
  bool timing = false;
  bool report_slope = false;
};

int run_converge(const ConvergeArgs& args, const Global& g) {
  ConvergenceConfig cfg;
  cfg.shape = make_shape(args.shape, args.a, args.b);
  cfg.counts = parse_counts(args.counts);
  cfg.eps = EpsRule::parse(args.eps);
  cfg.pairs = split_list(args.pairs);
  cfg.tangents = parse_tangents(args.tangents);
  cfg.regression = RadiusRule::parse(args.regression);
  cfg.orth = parse_switch(args.orth, "--orth");
  if (const auto avg = parse_average(args.avg)) {
    if (!avg->first) throw Error(ErrorCode::ParseError, "converge needs --avg as a multiple of eps, e.g. 2eps");
    cfg.average_factor = avg->second;
  }
  cfg.mode = parse_mode(args.mode);
  cfg.noise_variance = args.noise;
  cfg.noise_over_n = args.noise_over_n;
  cfg.noise_is_stddev = args.noise_stddev;
  cfg.include_constants = parse_switch(args.constants, "--constants");
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  const auto rows = run_convergence(cfg);
  Output out(g.out);
  write_convergence_csv(out.stream(), cfg, rows, args.timing);
  if (args.report_slope && rows.size() >= 3) {
    for (const std::string& pair : cfg.pairs) {
      std::vector<ResultRow> subset;
      for (const ResultRow& r : rows) {
        if (r.pair == pair) subset.push_back(r);
      }
      if (subset.size() >= 3) {
        std::cerr << pair << ": slope vs N " << slope(subset, SlopeAxis::N) << ", vs 1/(N eps) "
                  << slope(subset, SlopeAxis::InvNEps) << '\n';
      }
    }
  }
  return 0;
}

int run_bl(const std::string& a, const std::string& b, bool masses_only, const Global& g) {
  const PointCloudVarifold va = read_cloud(a);
  const PointCloudVarifold vb = read_cloud(b);
  const double value = masses_only ? bl_distance_masses(va, vb) : bl_distance_varifolds(va, vb);
  Output out(g.out);
  out.stream() << format_double(value) << '\n';
  return 0;
}

void write_cells_csv(std::ostream& out, const VolumetricVarifold& vol) {
  const int n = vol.ambient();
  const int d = vol.dim();
  out << "cell";
  for (int i = 0; i < n; ++i) out << ",lo" << i;
  for (int i = 0; i < n; ++i) out << ",hi" << i;
  out << ",mass";
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < n; ++c) out << ",t" << r << '_' << c;
  }
  out << '\n';
  for (std::size_t k = 0; k < vol.size(); ++k) {
    const Box& box = vol.cells()[k];
    out << k;
    for (int i = 0; i < n; ++i) out << ',' << format_double(box.lo(i));
    for (int i = 0; i < n; ++i) out << ',' << format_double(box.hi(i));
    out << ',' << format_double(vol.masses()[k]);
    const Mat& basis = vol.planes()[k].basis();
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < n; ++c) out << ',' << format_double(basis(c, r));
    }
    out << '\n';
  }
}

int run_discretize(const std::string& in, double delta, const std::string& kind, double pad, const Global& g) {
  const PointCloudVarifold cloud = read_cloud(in);
  const Grid grid = build_grid(bounding_box(cloud, pad), delta);
  Output out(g.out);
  if (kind == "pointcloud") {
    write_cloud(out.stream(), to_pointcloud(cloud, grid));
  } else if (kind == "volumetric") {
    write_cells_csv(out.stream(), to_volumetric(cloud, grid));
  } else {
    throw Error(ErrorCode::ParseError, "--kind expects volumetric or pointcloud");
  }
  return 0;
}

int run_cotan(const std::string& path, const Global& g) {
  const TriMesh mesh = read_off(path);
  mesh.validate();
  Output out(g.out);
  std::ostream& os = out.stream();
  os << "index,Hx,Hy,Hz,norm\n";
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const int id = static_cast<int>(v);
    if (!is_interior_vertex(mesh, id)) continue;
    const Vec3 h = vertex_mean_curvature(mesh, id);
    os << v << ',' << format_double(h.x()) << ',' << format_double(h.y()) << ',' << format_double(h.z()) << ','
       << format_double(h.norm()) << '\n';
  }
  return 0;
}

int run_selftest(bool acceptance, const std::vector<int>& only, const Global& g) {
  AcceptanceOptions opts;
  opts.seed = g.seed;
  opts.threads = g.threads;
  std::vector<int> ids = only;
  if (ids.empty()) {
    if (acceptance) {
      for (int id = 1; id <= kCriterionCount; ++id) ids.push_back(id);
    } else {
      ids = {9, 11, 12};
    }
  }
  Output out(g.out);
  bool all = true;
  if (!acceptance && only.empty()) {
    for (const PropertyResult& p : run_property_suite(opts.seed)) {
      out.stream() << (p.passed ? "[PASS] " : "[FAIL] ") << "property " << p.name << ": worst=" << p.worst
                   << " tolerance=" << p.tolerance << '\n';
    }
  }
  for (int id : ids) {
    const CriterionResult r = run_criterion(id, opts);
    all = all && r.passed;
    out.stream() << format_result(r) << std::endl;
  }
  return all ? 0 : kExitAcceptance;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::BadData:
    case ErrorCode::BadShape:
    case ErrorCode::NotNKPEligible:
      return kExitParse;
    default:
      return kExitNumeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"varicurve: varifold mean curvature of point clouds"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.fallthrough();

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Sample a test shape into a point cloud");
  generate->add_option("--shape", gen.shape, "circle, ellipse, flower, eight, two_circles, double_bubble_2d, double_bubble_3d")
      ->capture_default_str();
  generate->add_option("--a", gen.a, "First shape parameter");
  generate->add_option("--b", gen.b, "Second shape parameter");
  generate->add_option("--n", gen.count, "Number of points")->capture_default_str();
  generate->add_option("--mode", gen.mode, "uniform or nonuniform")->capture_default_str();
  generate->add_option("--tangents", gen.tangents, "exact or regression")->capture_default_str();
  generate->add_option("--regression-radius", gen.regression, "eps/2, eps, eps^0.9 or a number")->capture_default_str();
  generate->add_option("--eps", gen.eps, "Scale used by --regression-radius expressions");
  generate->add_option("--noise", gen.noise, "Gaussian noise variance");
  generate->add_flag("--noise-stddev", gen.noise_stddev, "Read --noise as a standard deviation");
  generate->add_option("--oracle", gen.oracle, "Also write the exact curvature as CSV");

  CurvatureArgs cur;
  auto* curvature = app.add_subcommand("curvature", "Approximate mean curvature of a cloud");
  curvature->add_option("--in", cur.in, "Input cloud")->required();
  curvature->add_option("--eps", cur.eps, "Number, inv100 or pow34")->capture_default_str();
  curvature->add_option("--pair", cur.pair, "tent, tent-nkp, exp, exp-nkp")->capture_default_str();
  curvature->add_flag("--orth", cur.orth, "Project onto the normal space");
  curvature->add_option("--avg", cur.avg, "Averaging radius: none, 2eps or a number")->capture_default_str();
  curvature->add_option("--constants", cur.constants, "on or off")->capture_default_str();

  ConvergeArgs conv;
  auto* converge = app.add_subcommand("converge", "Convergence study against the exact curvature");
  converge->add_option("--shape", conv.shape, "Test shape")->capture_default_str();
  converge->add_option("--a", conv.a, "First shape parameter");
  converge->add_option("--b", conv.b, "Second shape parameter");
  converge->add_option("--n", conv.counts, "Comma separated point counts")->capture_default_str();
  converge->add_option("--eps", conv.eps, "inv100, pow34 or a number")->capture_default_str();
  converge->add_option("--pairs", conv.pairs, "Comma separated kernel pairs")->capture_default_str();
  converge->add_option("--tangents", conv.tangents, "exact or regression")->capture_default_str();
  converge->add_option("--regression-radius", conv.regression, "eps/2, eps, eps^0.9 or a number")
      ->capture_default_str();
  converge->add_option("--orth", conv.orth, "on or off")->capture_default_str();
  converge->add_option("--avg", conv.avg, "none or a multiple of eps such as 2eps")->capture_default_str();
  converge->add_option("--mode", conv.mode, "uniform or nonuniform")->capture_default_str();
  converge->add_option("--noise", conv.noise, "Gaussian noise variance");
  converge->add_flag("--noise-over-n", conv.noise_over_n, "Divide the noise variance by N");
  converge->add_flag("--noise-stddev", conv.noise_stddev, "Read --noise as a standard deviation");
  converge->add_option("--constants", conv.constants, "on or off")->capture_default_str();
  converge->add_flag("--timing", conv.timing, "Add a wall_time column");
  converge->add_flag("--slope", conv.report_slope, "Print log-log slopes to stderr");

  std::string bl_a, bl_b;
  bool masses_only = false;
  auto* bl = app.add_subcommand("bl", "Bounded Lipschitz distance between two clouds");
  bl->add_option("--a", bl_a, "First cloud")->required();
  bl->add_option("--b", bl_b, "Second cloud")->required();
  bl->add_flag("--masses", masses_only, "Ignore the tangent planes");

  std::string disc_in, disc_kind = "pointcloud";
  double delta = 0.1;
  double pad = 1e-9;
  auto* discretize = app.add_subcommand("discretize", "Project a cloud onto a cubic grid");
  discretize->add_option("--in", disc_in, "Input cloud")->required();
  discretize->add_option("--delta", delta, "Cell diameter")->check(CLI::PositiveNumber)->capture_default_str();
  discretize->add_option("--kind", disc_kind, "volumetric (CSV of cells) or pointcloud")->capture_default_str();
  discretize->add_option("--pad", pad, "Grid padding around the bounding box")->capture_default_str();

  std::string mesh_path;
  auto* cotan = app.add_subcommand("cotan", "Vertex mean curvature of a triangle mesh");
  cotan->add_option("--mesh", mesh_path, "OFF file")->required();

  bool acceptance = false;
  std::vector<int> only;
  auto* selftest = app.add_subcommand("selftest", "Property checks, or the full acceptance suite");
  selftest->add_flag("--acceptance", acceptance, "Run all twelve acceptance criteria");
  selftest->add_option("--criteria", only, "Run only these criteria")->check(CLI::Range(1, kCriterionCount));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (*generate) return run_generate(gen, g);
    if (*curvature) return run_curvature(cur, g);
    if (*converge) return run_converge(conv, g);
    if (*bl) return run_bl(bl_a, bl_b, masses_only, g);
    if (*discretize) return run_discretize(disc_in, delta, disc_kind, pad, g);
    if (*cotan) return run_cotan(mesh_path, g);
    if (*selftest) return run_selftest(acceptance, only, g);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
