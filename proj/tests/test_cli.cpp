#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "topmg/bench.hpp"
#include "topmg/config.hpp"
#include "topmg/errors.hpp"
#include "topmg/report.hpp"

using namespace topmg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("topmg_test_" + std::to_string(++counter));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("empty config text yields the square-wall defaults") {
  const RunConfig cfg = parse_config("");
  CHECK(cfg.moduli == std::vector<double>{9.0, 3.0, 1.0, 1e-9});
  CHECK(cfg.volume_fractions == std::vector<double>{0.16, 0.08, 0.08, 0.68});
  CHECK(cfg.filter_radius == 8.0);
  CHECK(cfg.filter_tol == 0.05);
  CHECK(cfg.tol == 1e-3);
  CHECK(cfg.cg_tol == 1e-6);
  CHECK(cfg.cg_max == 1000);
  CHECK(cfg.penalty == 3.0);
  CHECK(cfg.poisson_ratio == 0.3);
  CHECK(cfg.method == Method::pcgmg);
}

TEST_CASE("config parsing reads keys, comments and lists") {
  const std::string text =
      "# a comment line\n"
      "mesh = 64x128\n"
      "moduli = 5, 2, 1e-9   # inline comment\n"
      "volume_fractions = 0.3, 0.2, 0.5\n"
      "mg_levels = 4\n"
      "warm_start = true\n"
      "method = gauss-seidel\n";
  const RunConfig cfg = parse_config(text);
  CHECK(cfg.mesh_nx == 64);
  CHECK(cfg.mesh_ny == 128);
  CHECK(cfg.moduli == std::vector<double>{5.0, 2.0, 1e-9});
  CHECK(cfg.volume_fractions == std::vector<double>{0.3, 0.2, 0.5});
  CHECK(cfg.mg_levels == 4);
  CHECK(cfg.warm_start);
  CHECK(cfg.method == Method::gauss_seidel);
}

TEST_CASE("unknown keys and bad values name the line") {
  try {
    parse_config("tol = 1e-4\nbogus_key = 3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("line 2") != std::string::npos);
    CHECK(what.find("bogus_key") != std::string::npos);
  }

  try {
    parse_config("omega = fast\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("line 1") != std::string::npos);
    CHECK(what.find("omega") != std::string::npos);
  }
}

TEST_CASE("volume fractions that do not sum to one are rejected") {
  try {
    parse_config("moduli = 1, 1, 1\nvolume_fractions = 0.5, 0.5, 0.1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("volume_fractions") != std::string::npos);
    CHECK(what.find("sum") != std::string::npos);
  }
}

TEST_CASE("later sources override earlier ones") {
  // file over defaults, then a flag-style override over the file
  RunConfig cfg = parse_config("mg_levels = 5\n");
  CHECK(cfg.mg_levels == 5);
  cfg.mg_levels = 3;  // what a --mg-levels 3 flag does after the file load
  validate(cfg);
  CHECK(cfg.mg_levels == 3);
}

TEST_CASE("write_config round-trips every field") {
  RunConfig cfg;
  cfg.mesh_nx = 48;
  cfg.mesh_ny = 96;
  cfg.method = Method::damped_jacobi;
  cfg.cg_tol = 3.5e-7;
  cfg.omega = 0.77;
  cfg.moduli = {7.25, 1.5, 1e-9};
  cfg.volume_fractions = {0.25, 0.15, 0.6};
  cfg.filter_radius = 2.5;
  cfg.warm_start = true;
  cfg.images = false;
  cfg.out_dir = "some/dir";
  cfg.source = -2.25;

  const RunConfig back = parse_config(write_config(cfg));
  CHECK(back == cfg);

  // and the defaults round-trip too
  const RunConfig defaults;
  CHECK(parse_config(write_config(defaults)) == defaults);
}

TEST_CASE("method names parse with either separator") {
  CHECK(parse_method("damped-jacobi") == Method::damped_jacobi);
  CHECK(parse_method("damped_jacobi") == Method::damped_jacobi);
  CHECK(parse_method("gauss-seidel") == Method::gauss_seidel);
  CHECK_THROWS_AS(parse_method("sor"), ConfigError);
}

TEST_CASE("phase images are exact PGM rasters") {
  TempDir tmp;
  const DensityField d = DensityField::uniform(5, 3, {0.16, 0.84});
  const std::string path = tmp.file("phase.pgm");
  write_phase_pgm(d, 0, path);

  const std::string data = slurp(path);
  const std::string header = "P5\n5 3\n255\n";
  REQUIRE(data.size() == header.size() + 15);
  CHECK(data.substr(0, header.size()) == header);
  for (std::size_t i = header.size(); i < data.size(); ++i) {
    CHECK(static_cast<unsigned char>(data[i]) == 41);  // round(255 * 0.16)
  }
}

TEST_CASE("composite image maps pure phases to pure channels") {
  TempDir tmp;
  DensityField d(2, 1, 4);
  // element (0,0): pure phase 1; element (1,0): pure void
  d.at(0, 0) = 1.0;
  d.at(0, 1) = d.at(0, 2) = d.at(0, 3) = 0.0;
  d.at(1, 3) = 1.0;
  d.at(1, 0) = d.at(1, 1) = d.at(1, 2) = 0.0;
  const std::string path = tmp.file("composite.ppm");
  write_composite_ppm(d, path);

  const std::string data = slurp(path);
  const std::string header = "P6\n2 1\n255\n";
  REQUIRE(data.size() == header.size() + 6);
  const unsigned char* px = reinterpret_cast<const unsigned char*>(data.data()) +
                            header.size();
  CHECK(px[0] == 255);  // red channel of the pure-phase-1 element
  CHECK(px[1] == 0);
  CHECK(px[2] == 0);
  CHECK(px[3] == 255);  // void renders white
  CHECK(px[4] == 255);
  CHECK(px[5] == 255);
}

TEST_CASE("history csv has one row per outer iteration") {
  TempDir tmp;
  OptimReport rep;
  rep.density = DensityField::uniform(2, 2, {0.5, 0.5});
  rep.compliance_history = {10.0, 8.5, 8.0};
  rep.change_history = {0.2, 0.05, 0.001};
  rep.solver_iteration_history = {12, 9, 7};
  rep.seconds_history = {0.5, 0.4, 0.4};
  rep.outer_iterations = 3;

  const std::string path = tmp.file("history.csv");
  write_history_csv(rep, path);
  const std::string data = slurp(path);
  int lines = 0;
  for (char c : data) lines += (c == '\n');
  CHECK(lines == 4);  // header + 3 rows
  CHECK(data.find("iteration,compliance,max_change,solver_iterations,seconds") !=
        std::string::npos);
  CHECK(data.find("\n1,10,") != std::string::npos);
}

TEST_CASE("an empty bench matrix renders a header-only table") {
  const std::string md = table_markdown(BenchMatrix{});
  int lines = 0;
  for (char c : md) lines += (c == '\n');
  CHECK(lines == 2);  // header and separator, no data rows
  CHECK(md.find("Method") != std::string::npos);
}

TEST_CASE("bench tables pivot meshes into Iter./Time column pairs") {
  BenchMatrix m;
  m.rows.push_back({16, 16, "pcgmg", 9, 0.05, true, ""});
  m.rows.push_back({32, 32, "pcgmg", 10, 0.21, true, ""});
  m.rows.push_back({16, 16, "cholesky", 1, 0.02, true, ""});
  m.rows.push_back({32, 32, "cholesky", 0, 0.0, false, "no survey"});
  const std::string md = table_markdown(m);
  CHECK(md.find("16x16 Iter.") != std::string::npos);
  CHECK(md.find("32x32 Time (s)") != std::string::npos);
  CHECK(md.find("| pcgmg |") != std::string::npos);
  CHECK(md.find("no survey") != std::string::npos);
}

TEST_CASE("emit_outputs writes the full artifact set") {
  TempDir tmp;
  OptimReport rep;
  rep.density = DensityField::uniform(4, 4, {0.16, 0.08, 0.08, 0.68});
  rep.compliance_history = {5.0};
  rep.change_history = {0.1};
  rep.solver_iteration_history = {3};
  rep.seconds_history = {0.1};
  rep.outer_iterations = 1;

  const std::string dir = tmp.file("run1");
  emit_outputs(rep, dir, true, true);
  CHECK(std::filesystem::exists(dir + "/history.csv"));
  for (int i = 1; i <= 4; ++i) {
    CHECK(std::filesystem::exists(dir + "/phase_" + std::to_string(i) + ".pgm"));
  }
  CHECK(std::filesystem::exists(dir + "/composite.ppm"));
}

TEST_CASE("io failures surface the path") {
  OptimReport rep;
  rep.density = DensityField::uniform(2, 2, {1.0});
  try {
    write_history_csv(rep, "/nonexistent_dir_zzz/history.csv");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("/nonexistent_dir_zzz/history.csv") !=
          std::string::npos);
  }
}
