#include "varicurve/io.hpp"

#include "varicurve/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace varicurve {

namespace {

std::string at_line(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

std::vector<std::string_view> split(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < text.size() && text[i] != ' ' && text[i] != '\t' && text[i] != '\r') ++i;
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  return tokens;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line) {
  T value{};
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && token.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::ParseError, at_line(line, "cannot parse number '" + std::string(token) + "'"));
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  return in;
}

// Next line that is neither blank nor an OFF comment.
bool next_content_line(std::istream& in, std::string& line, std::size_t& number) {
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (!split(line).empty()) return true;
  }
  return false;
}

}  // namespace

std::string format_double(double x) {
  char buffer[40];
  const int len = std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return {buffer, static_cast<std::size_t>(len)};
}

void write_cloud(std::ostream& out, const PointCloudVarifold& v) {
  const int n = v.ambient();
  const int d = v.dim();
  out << "# varicurve n=" << n << " d=" << d << " N=" << v.size() << '\n';
  for (std::size_t j = 0; j < v.size(); ++j) {
    std::string record;
    for (int i = 0; i < n; ++i) record += format_double(v.point(j)(i)) + ' ';
    record += format_double(v.masses()[j]);
    const Mat& basis = v.planes()[j].basis();
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < n; ++c) record += ' ' + format_double(basis(c, r));
    }
    out << record << '\n';
  }
}

void write_cloud(const std::filesystem::path& path, const PointCloudVarifold& v) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  write_cloud(out, v);
}

PointCloudVarifold read_cloud(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, at_line(1, "empty file"));
  ++number;
  const auto head = split(line);
  if (head.size() != 5 || head[0] != "#" || head[1] != "varicurve" || !head[2].starts_with("n=") ||
      !head[3].starts_with("d=") || !head[4].starts_with("N=")) {
    throw Error(ErrorCode::ParseError, at_line(1, "expected '# varicurve n=<n> d=<d> N=<N>'"));
  }
  const int n = parse_number<int>(head[2].substr(2), 1);
  const int d = parse_number<int>(head[3].substr(2), 1);
  const auto count = parse_number<std::size_t>(head[4].substr(2), 1);
  if (n < 2 || d < 1 || d >= n) throw Error(ErrorCode::ParseError, at_line(1, "need 1 <= d < n"));
  if (count == 0) throw Error(ErrorCode::ParseError, at_line(1, "cloud has no points"));

  const auto width = static_cast<std::size_t>(n + 1 + d * n);
  Mat points(n, static_cast<Eigen::Index>(count));
  std::vector<double> masses;
  std::vector<Plane> planes;
  masses.reserve(count);
  planes.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    if (!std::getline(in, line)) {
      throw Error(ErrorCode::ParseError, at_line(number + 1, "expected " + std::to_string(count) + " records"));
    }
    ++number;
    const auto tokens = split(line);
    if (tokens.size() != width) {
      throw Error(ErrorCode::ParseError, at_line(number, "expected " + std::to_string(width) + " fields, found " +
                                                             std::to_string(tokens.size())));
    }
    for (int i = 0; i < n; ++i) points(i, static_cast<Eigen::Index>(j)) = parse_number<double>(tokens[static_cast<std::size_t>(i)], number);
    const double mass = parse_number<double>(tokens[static_cast<std::size_t>(n)], number);
    if (!(mass > 0.0)) throw Error(ErrorCode::ParseError, at_line(number, "mass must be positive"));
    masses.push_back(mass);
    Mat basis(n, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < n; ++c) {
        basis(c, r) = parse_number<double>(tokens[static_cast<std::size_t>(n + 1 + r * n + c)], number);
      }
    }
    try {
      planes.push_back(Plane::from_orthonormal(basis, 1e-8));
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, at_line(number, e.what()));
    }
  }
  while (std::getline(in, line)) {
    ++number;
    if (!split(line).empty()) throw Error(ErrorCode::ParseError, at_line(number, "unexpected data after last record"));
  }
  return {std::move(points), std::move(masses), std::move(planes)};
}

PointCloudVarifold read_cloud(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_cloud(in);
}

TriMesh read_off(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  if (!next_content_line(in, line, number)) throw Error(ErrorCode::ParseError, at_line(1, "empty file"));
  auto tokens = split(line);
  if (tokens.front() != "OFF") throw Error(ErrorCode::ParseError, at_line(number, "missing OFF header"));
  tokens.erase(tokens.begin());
  if (tokens.empty()) {
    if (!next_content_line(in, line, number)) throw Error(ErrorCode::ParseError, at_line(number, "missing counts"));
    tokens = split(line);
  }
  if (tokens.size() < 2) throw Error(ErrorCode::ParseError, at_line(number, "expected vertex and face counts"));
  const auto nv = parse_number<std::size_t>(tokens[0], number);
  const auto nf = parse_number<std::size_t>(tokens[1], number);

  TriMesh mesh;
  mesh.vertices.reserve(nv);
  for (std::size_t k = 0; k < nv; ++k) {
    if (!next_content_line(in, line, number)) throw Error(ErrorCode::ParseError, at_line(number, "missing vertices"));
    const auto t = split(line);
    if (t.size() < 3) throw Error(ErrorCode::ParseError, at_line(number, "vertex needs 3 coordinates"));
    mesh.vertices.emplace_back(parse_number<double>(t[0], number), parse_number<double>(t[1], number),
                               parse_number<double>(t[2], number));
  }
  for (std::size_t k = 0; k < nf; ++k) {
    if (!next_content_line(in, line, number)) throw Error(ErrorCode::ParseError, at_line(number, "missing faces"));
    const auto t = split(line);
    const auto corners = parse_number<std::size_t>(t[0], number);
    if (corners < 3 || t.size() < corners + 1) throw Error(ErrorCode::ParseError, at_line(number, "bad face record"));
    std::vector<int> ids;
    for (std::size_t c = 0; c < corners; ++c) {
      const int id = parse_number<int>(t[c + 1], number);
      if (id < 0 || static_cast<std::size_t>(id) >= nv) {
        throw Error(ErrorCode::ParseError, at_line(number, "vertex index out of range"));
      }
      ids.push_back(id);
    }
    for (std::size_t c = 1; c + 1 < corners; ++c) mesh.faces.push_back({ids[0], ids[c], ids[c + 1]});
  }
  return mesh;
}

TriMesh read_off(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_off(in);
}

void write_off(std::ostream& out, const TriMesh& mesh) {
  out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.faces.size() << " 0\n";
  for (const Vec3& p : mesh.vertices) {
    out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
  }
  for (const auto& f : mesh.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

void write_field_csv(std::ostream& out, const Mat& points, const CurvatureField& field) {
  if (static_cast<std::size_t>(points.cols()) != field.size() || points.rows() != field.vectors.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "points and field sizes differ");
  }
  const auto n = points.rows();
  static constexpr const char* kAxes[] = {"x", "y", "z", "w"};
  out << "index";
  for (Eigen::Index i = 0; i < n; ++i) out << ',' << (i < 4 ? kAxes[i] : "x" + std::to_string(i));
  for (Eigen::Index i = 0; i < n; ++i) out << ",H" << (i < 4 ? kAxes[i] : std::to_string(i));
  out << ",norm,valid\n";
  for (std::size_t j = 0; j < field.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    out << j;
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double(points(i, col));
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double(field.vectors(i, col));
    out << ',' << format_double(field.magnitudes[j]) << ',' << (field.valid[j] ? 1 : 0) << '\n';
  }
}

}  // namespace varicurve
