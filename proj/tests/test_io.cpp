#include "support.hpp"

#include "varicurve/error.hpp"
#include "varicurve/io.hpp"
#include "varicurve/shapes.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>
#include <string>

using namespace varicurve;

namespace {

std::string parse_failure(const std::string& text) {
  std::istringstream in(text);
  try {
    (void)read_cloud(in);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ParseError) return "wrong code";
    return e.what();
  }
  return "no error";
}

}  // namespace

TEST_CASE("cloud round trip is exact") {
  SamplingSpec s;
  s.count = 500;
  s.mode = SamplingMode::NonuniformGaussian;
  s.noise_variance = 1e-5;
  SamplingSpec surface;
  surface.count = 500;
  for (const PointCloudVarifold& v : {sample(ShapeSpec::flower(), s).cloud,
                                      sample(double_bubble(3, 1.0, 0.7).spec(), surface).cloud}) {
    std::stringstream buffer;
    write_cloud(buffer, v);
    const PointCloudVarifold w = read_cloud(buffer);
    REQUIRE(w.size() == v.size());
    CHECK(w.points() == v.points());
    CHECK(w.masses() == v.masses());
    for (std::size_t j = 0; j < v.size(); ++j) REQUIRE(w.planes()[j].basis() == v.planes()[j].basis());
  }
}

TEST_CASE("cloud parse errors") {
  CHECK(parse_failure("").find("empty file") != std::string::npos);
  CHECK(parse_failure("# something else\n").find("line 1") != std::string::npos);
  const std::string header = "# varicurve n=2 d=1 N=2\n";
  CHECK(parse_failure(header + "0 0 1 1 0\n").find("expected 2 records") != std::string::npos);
  CHECK(parse_failure(header + "0 0 1 1 0\n1 1 1 0 1 7\n").find("line 3") != std::string::npos);
  CHECK(parse_failure(header + "0 0 1 1 0\n1 x 1 0 1\n").find("line 3") != std::string::npos);
  CHECK(parse_failure(header + "0 0 -1 1 0\n1 1 1 0 1\n").find("line 2") != std::string::npos);
  CHECK(parse_failure(header + "0 0 1 1 0\n1 1 1 0 1\n").find("no error") != std::string::npos);
}

TEST_CASE("OFF with comments and quads") {
  std::istringstream in(
      "OFF\n# a unit square as one quad\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
  const TriMesh mesh = read_off(in);
  REQUIRE(mesh.vertices.size() == 4);
  REQUIRE(mesh.faces.size() == 2);
  CHECK(mesh.face_area(0) + mesh.face_area(1) == 1.0);

  std::stringstream buffer;
  write_off(buffer, mesh);
  const TriMesh again = read_off(buffer);
  CHECK(again.vertices == mesh.vertices);
  CHECK(again.faces == mesh.faces);

  std::istringstream bad("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 5\n");
  CHECK_THROWS_AS(read_off(bad), Error);
}

TEST_CASE("field CSV layout") {
  Mat pts(2, 2);
  pts << 0.0, 1.0, 0.5, 0.25;
  CurvatureField field = CurvatureField::zeros(2, 2);
  field.set(0, Eigen::Vector2d(3.0, 4.0));
  field.set_invalid(1);
  std::ostringstream out;
  write_field_csv(out, pts, field);
  CHECK(out.str() == "index,x,y,Hx,Hy,norm,valid\n0,0,0.5,3,4,5,1\n1,1,0.25,0,0,0,0\n");
}

TEST_CASE("number formatting reads back") {
  testing::Draws draws(70);
  for (int k = 0; k < 1000; ++k) {
    const double x = draws.normal() * std::pow(10.0, draws.uniform(-30, 30));
    REQUIRE(std::stod(format_double(x)) == x);
  }
}
