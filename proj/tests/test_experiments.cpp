#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pathrelax/experiments.hpp"

using namespace pathrelax;
namespace px = pathrelax::experiments;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_dir(const char* leaf) {
  const auto dir = std::filesystem::temp_directory_path() / "pathrelax-tests" / leaf;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

GridSolution flat_solution(double x_left, double x_right, std::size_t n, double value,
                           std::size_t m = 2) {
  GridSolution sol;
  sol.grid = Grid1D::over_interval(x_left, x_right, n);
  sol.u.assign(n, StateVector(m, value));
  return sol;
}

}  // namespace

TEST_CASE("l1_error on matching grids") {
  const GridSolution a = flat_solution(0.0, 2.0, 10, 1.0);
  CHECK(px::l1_error(a, a) == std::vector<double>{0.0, 0.0});

  GridSolution b = flat_solution(0.0, 2.0, 10, 1.25);
  const std::vector<double> err = px::l1_error(a, b);
  CHECK(err[0] == doctest::Approx(0.25 * 2.0).epsilon(1e-14));  // c * L
  CHECK(err[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("l1_error coarsens nested grids by block averaging") {
  // fine solution alternates v - d, v + d: block averages equal v exactly
  GridSolution fine = flat_solution(0.0, 1.0, 16, 0.0);
  for (std::size_t j = 0; j < 16; ++j)
    fine.u[j] = StateVector(2, 3.0 + ((j % 2 == 0) ? -0.5 : 0.5));
  const GridSolution coarse = flat_solution(0.0, 1.0, 4, 3.0);
  const std::vector<double> err = px::l1_error(coarse, fine);
  CHECK(err[0] == doctest::Approx(0.0).epsilon(1e-14));
  // argument order must not matter
  const std::vector<double> err_swapped = px::l1_error(fine, coarse);
  CHECK(err_swapped[0] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("l1_error rejects incompatible grids") {
  const GridSolution a = flat_solution(0.0, 1.0, 10, 1.0);
  CHECK_THROWS_AS(px::l1_error(a, flat_solution(0.0, 2.0, 10, 1.0)), GridMismatch);
  CHECK_THROWS_AS(px::l1_error(a, flat_solution(0.0, 1.0, 30, 1.0)), GridMismatch);
  CHECK_THROWS_AS(px::l1_error(a, flat_solution(0.0, 1.0, 25, 1.0)), GridMismatch);
  CHECK_THROWS_AS(px::l1_error(a, flat_solution(0.0, 1.0, 10, 1.0, 3)), GridMismatch);
}

TEST_CASE("eoc computes pairwise log2 ratios") {
  const std::vector<double> table1 = px::eoc({1.66e-1, 8.80e-2});
  CHECK(std::isnan(table1[0]));
  CHECK(table1[1] == doctest::Approx(0.92).epsilon(0.005));

  const std::vector<double> powers = px::eoc({4.0, 2.0, 1.0});
  CHECK(std::isnan(powers[0]));
  CHECK(powers[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(powers[2] == doctest::Approx(1.0).epsilon(1e-14));

  const std::vector<double> table2 = px::eoc({2.12e-5, 1.11e-5});
  CHECK(table2[1] == doctest::Approx(0.93).epsilon(0.005));

  CHECK_THROWS_AS(px::eoc({1.0}), InvalidParam);
  CHECK_THROWS_AS(px::eoc({1.0, 0.0}), InvalidParam);
  CHECK_THROWS_AS(px::eoc({1.0, -2.0}), InvalidParam);
}

TEST_CASE("make_error_report carries errors and per-component orders") {
  const px::ErrorReport r = px::make_error_report(
      {100.0, 200.0}, {"p", "q"}, {{4.0, 1.0}, {2.0, 0.25}});
  REQUIRE(r.errors.size() == 2);
  CHECK(std::isnan(r.eoc[0][0]));
  CHECK(r.eoc[1][0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.eoc[1][1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("presets carry the benchmark parameters") {
  const px::RunConfig dam = px::preset_config("swe-dambreak");
  CHECK(dam.mu == 25.0);
  CHECK(dam.cfl == 0.9);
  CHECK(dam.t_end == 0.33);
  CHECK(dam.n_cells == 4000);

  const px::RunConfig smooth = px::preset_config("swe-smooth");
  CHECK(smooth.cfl == 0.1);

  const px::RunConfig blood = px::preset_config("blood-coupled");
  CHECK(blood.mu == 0.16);
  CHECK(blood.cfl == 0.9);
  CHECK(blood.t_end == 12.0);
  CHECK(blood.alpha == doctest::Approx(4.0 / 3.0));
  CHECK(blood.young_left == 0.5);
  CHECK(blood.young_right == 0.1);
  CHECK(blood.wall_thickness == 0.05);
  CHECK(blood.a0 == 5.0);
  CHECK(blood.p0 == 2e-3);

  CHECK_THROWS_AS(px::preset_config("unknown"), InvalidParam);
}

TEST_CASE("config validation") {
  px::RunConfig c = px::preset_config("swe-smooth");
  CHECK_NOTHROW(c.validate());

  c.cfl = 1.5;
  CHECK_THROWS_AS(c.validate(), InvalidParam);
  c = px::preset_config("swe-smooth");
  c.scheme = "relaxation";  // epsilon missing
  CHECK_THROWS_AS(c.validate(), InvalidParam);
  c.epsilon = 1e-3;
  CHECK_NOTHROW(c.validate());
  c.scheme = "coupled-relaxed";  // invalid combination
  CHECK_THROWS_AS(c.validate(), InvalidParam);

  c = px::preset_config("blood-coupled");
  c.scheme = "relaxed";
  CHECK_THROWS_AS(c.validate(), InvalidParam);
}

TEST_CASE("flat key = value config files override presets") {
  const std::string dir = temp_dir("config");
  const std::string path = dir + "/run.cfg";
  {
    std::ofstream out(path);
    out << "# comment line\n"
        << "n_cells = 128\n"
        << "cfl = 0.25   # trailing comment\n"
        << "t_end = 0.05\n";
  }
  px::RunConfig c = px::preset_config("swe-smooth");
  px::apply_config_file(c, path);
  CHECK(c.n_cells == 128);
  CHECK(c.cfl == 0.25);
  CHECK(c.t_end == 0.05);

  {
    std::ofstream out(path);
    out << "unknown_key = 3\n";
  }
  CHECK_THROWS_AS(px::apply_config_file(c, path), InvalidParam);
  CHECK_THROWS_AS(px::apply_config_file(c, dir + "/missing.cfg"), IoError);
}

TEST_CASE("initial data of the shallow water presets") {
  const GridSolution dam = px::swe_initial_solution("swe-dambreak", 8);
  CHECK(dam.u.front()[0] == 0.2);
  CHECK(dam.u.front()[2] == 1.8);
  CHECK(dam.u.back()[0] == 1.8);
  CHECK(dam.u.back()[2] == 0.2);

  const GridSolution smooth = px::swe_initial_solution("swe-smooth", 64);
  for (std::size_t j = 0; j < smooth.u.size(); ++j) {
    const double x = smooth.grid.cell_center(j);
    const double h2 = 0.2 + 1.6 / (1.0 + std::exp(-5.0 * x));
    CHECK(smooth.u[j][2] == doctest::Approx(h2).epsilon(1e-14));
    CHECK(smooth.u[j][0] + smooth.u[j][2] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(smooth.u[j][1] == 0.0);
    CHECK(smooth.u[j][3] == 0.0);
  }
}

TEST_CASE("run produces a solution CSV and metadata, deterministically") {
  px::RunConfig c = px::preset_config("swe-dambreak");
  c.n_cells = 40;
  c.t_end = 0.02;
  c.out_dir = temp_dir("run-swe");
  const px::RunArtifacts first = px::run(c);

  const std::string csv = slurp(first.solution_csv);
  CHECK(csv.rfind("x,h1,q1,h2,q2\n", 0) == 0);
  std::size_t rows = 0;
  for (char ch : csv)
    if (ch == '\n') ++rows;
  CHECK(rows == 41);  // header + one row per cell

  const std::string meta = slurp(first.metadata_json);
  CHECK(meta.find("\"dx\"") != std::string::npos);
  CHECK(meta.find("\"dt\"") != std::string::npos);
  CHECK(meta.find("\"preset\"") != std::string::npos);

  // byte-for-byte determinism
  c.out_dir = temp_dir("run-swe-again");
  const px::RunArtifacts second = px::run(c);
  CHECK(slurp(second.solution_csv) == csv);
  CHECK(slurp(second.metadata_json) == meta);
}

TEST_CASE("run executes the coupled preset end to end at desk scale") {
  px::RunConfig c = px::preset_config("blood-coupled");
  c.n_cells = 30;
  c.t_end = 0.5;
  c.out_dir = temp_dir("run-blood");
  const px::RunArtifacts artifacts = px::run(c);

  const std::string csv = slurp(artifacts.solution_csv);
  CHECK(csv.rfind("x,a,u,flow,pressure\n", 0) == 0);
  std::size_t rows = 0;
  for (char ch : csv)
    if (ch == '\n') ++rows;
  CHECK(rows == 61);  // header + 2 x 30 cells

  const std::string meta = slurp(artifacts.metadata_json);
  CHECK(meta.find("\"coupling_error\"") != std::string::npos);
  CHECK(meta.find("\"domain_note\"") != std::string::npos);
}

TEST_CASE("eps and grid studies produce finite reports at desk scale") {
  px::RunConfig base = px::preset_config("swe-smooth");
  base.n_cells = 100;
  base.t_end = 0.05;
  base.out_dir = temp_dir("studies");

  const px::StudyArtifacts eps =
      px::eps_study(base, {std::pow(2.0, -7), std::pow(2.0, -8)});
  REQUIRE(eps.report.errors.size() == 2);
  CHECK(eps.report.errors[1][0] < eps.report.errors[0][0]);
  CHECK(std::filesystem::exists(eps.report_csv));

  const px::StudyArtifacts grid = px::grid_study(base, {25, 50});
  REQUIRE(grid.report.errors.size() == 2);
  CHECK(grid.report.errors[1][2] < grid.report.errors[0][2]);
  CHECK(std::filesystem::exists(grid.metadata_json));
  CHECK(slurp(grid.metadata_json).find("reference_solution") != std::string::npos);
}

TEST_CASE("format_double prints 17 significant digits") {
  CHECK(px::format_double(0.1) == "0.10000000000000001");
  CHECK(px::format_double(1.0) == "1");
  const double v = 0.2 + 1.6 / (1.0 + std::exp(-1.5));
  CHECK(std::stod(px::format_double(v)) == v);  // round trip
}

TEST_CASE("check_suite passes") {
  std::ostringstream out;
  CHECK(px::check_suite(out) == 0);
  CHECK(out.str().find("FAIL") == std::string::npos);
  CHECK(out.str().find("PASS") != std::string::npos);
}
