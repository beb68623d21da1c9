#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "spinodal/analysis.hpp"
#include "spinodal/config.hpp"
#include "spinodal/io.hpp"

using namespace spinodal;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "spinodal_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("empty config gives the documented defaults") {
  const RunConfig c = parse_config("");
  CHECK(c.grid.nx == 256);
  CHECK(c.grid.ny == 256);
  CHECK(c.grid.h == 1.0);
  CHECK(c.init.mean == 0.48);
  CHECK(c.init.variance == 1e-3);
  CHECK(c.solver.D == 1.0);
  CHECK(c.solver.kappa == 1.0);
  CHECK(c.solver.dt == 0.0);  // auto
  CHECK(c.analysis.threshold == 0.5);
  CHECK(c.analysis.contrast == 1e-4);
}

TEST_CASE("config round-trips through serialize and parse") {
  RunConfig c = parse_config("[init]\nmean = 0.48\n# comment\n[solver]\ndt = 0.005 ; trailing\nsnapshot_times = 0, 1.5, 20\n");
  CHECK(c.init.mean == 0.48);
  CHECK(c.solver.dt == 0.005);
  CHECK(c.solver.snapshot_times == std::vector<double>{0.0, 1.5, 20.0});
  const std::string text = serialize_config(c);
  const RunConfig d = parse_config(text);
  CHECK(serialize_config(d) == text);
  CHECK(d.init.mean == c.init.mean);
  CHECK(d.solver.snapshot_times == c.solver.snapshot_times);
  c.init.variance = 0.1 + 0.2;  // not representable in short decimal
  CHECK(parse_config(serialize_config(c)).init.variance == c.init.variance);
}

TEST_CASE("config errors name the line and key") {
  try {
    parse_config("[grid]\nnx = 64\n[solver]\ndt = -1\n");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 4);
    CHECK(e.key() == "solver.dt");
    CHECK(std::string(e.what()).find("solver.dt") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("[grid]\nnz = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[mesh]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("nx = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nnx 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[init]\nmean = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[solver]\nsnapshot_times = 5, 1\n"), ConfigError);
}

TEST_CASE("field CSV round-trips at full precision") {
  const auto f = gaussian_field({12, 7, 0.3}, 0.48, 1e-3, 17);
  std::stringstream ss;
  write_field_csv(ss, f);
  const std::string text = ss.str();
  CHECK(text.substr(0, text.find('\n')) == "12,7,0.3");
  const auto g = read_field_csv(ss);
  CHECK(g == f);

  std::stringstream bad("4,4,1\n1,2,3,4\n");
  CHECK_THROWS_AS(read_field_csv(bad), DataError);
}

TEST_CASE("snapshot file names") {
  CHECK(snapshot_filename(0) == "snap_t0.csv");
  CHECK(snapshot_filename(10) == "snap_t10.csv");
  CHECK(snapshot_filename(0.5) == "snap_t0.5.csv");
}

TEST_CASE("PPM pixel mapping") {
  auto pixel = [](double x) {
    const auto b = ppm_bytes(ScalarField2D({4, 4, 1.0}, x));
    const std::string header = "P6\n4 4\n255\n";
    REQUIRE(b.size() == header.size() + 48);
    CHECK(std::string(b.begin(), b.begin() + std::ptrdiff_t(header.size())) == header);
    return std::array<int, 3>{b[header.size()], b[header.size() + 1], b[header.size() + 2]};
  };
  CHECK(pixel(1.0) == std::array<int, 3>{0, 255, 0});
  CHECK(pixel(0.0) == std::array<int, 3>{255, 0, 0});
  CHECK(pixel(0.5) == std::array<int, 3>{128, 128, 0});
  CHECK(pixel(1.7) == std::array<int, 3>{0, 255, 0});
  CHECK(pixel(-0.2) == std::array<int, 3>{255, 0, 0});

  const fs::path p = scratch("f.ppm");
  render_ppm(ScalarField2D({4, 4, 1.0}, 1.0), p);
  CHECK(fs::file_size(p) == 11 + 48);
  CHECK_THROWS_AS(render_ppm(ScalarField2D({4, 4, 1.0}, 1.0), "/nonexistent_dir/x.ppm"), DataError);
}

TEST_CASE("transport CSV reader and report") {
  const fs::path p = scratch("t.csv");
  {
    std::ofstream o(p);
    o << "label,d_m,Rs_ohm_sq,Tc_K,hall_slope_ohm_per_T\n"
      << "TAN,100e-9,132.3,3.2,3.9e-3\n";
  }
  const auto rows = read_transport_csv(p);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].label == "TAN");
  CHECK(rows[0].r_s == 132.3);
  std::stringstream out;
  write_transport_report(out, {analyze_transport(rows[0])});
  CHECK(out.str().find("TAN,100,3.2,132.3") != std::string::npos);
  {
    std::ofstream o(p);
    o << "label,d\nTAN,oops,1,1,1\n";
  }
  CHECK_THROWS_AS(read_transport_csv(p), DataError);
}

TEST_CASE("numeric CSV readers skip one header line") {
  const fs::path p = scratch("s21.csv");
  write_s21_csv(p, {{1e9, {0.5, -0.25}, 1.0}, {2e9, {0.75, 0.125}, 1.0}});
  const auto d = read_s21_csv(p);
  REQUIRE(d.size() == 2);
  CHECK(d[1].x == 2e9);
  CHECK(d[1].y == std::complex<double>(0.75, 0.125));
  CHECK_THROWS_AS(read_hc2_csv(p), DataError);
}

TEST_CASE("analysis of a striped field") {
  ScalarField2D f({32, 32, 1.0}, 0.0);
  for (int j = 0; j < 32; ++j)
    for (int i = 0; i < 32; ++i) f(i, j) = (j / 8) % 2 ? 0.9 : 0.1;
  const auto row = analyze_snapshot(f, 3.0, 0.5, 1e-4);
  CHECK(row.ti_fraction == 0.5);
  CHECK(row.n_clusters == 2);
  CHECK(row.largest_cluster == 256);
  CHECK(row.spans_x);
  CHECK_FALSE(row.spans_y);
  CHECK(row.char_length > 4.0);
  CHECK(row.r_eff_x == doctest::Approx(1.0 / (0.5 + 0.5e-4)).epsilon(1e-6));
  CHECK(row.r_eff_y == doctest::Approx(0.5 * (1.0 + 1e4)).epsilon(1e-6));
}
