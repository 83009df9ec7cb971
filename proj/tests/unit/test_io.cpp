#include "hgks/driver.hpp"
#include "hgks/gas.hpp"
#include "hgks/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

using namespace hgks;

namespace {

const std::string kData = HGKS_TEST_DATA;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SolverConfig parse_text(const std::string& text, const std::vector<std::string>& overrides = {}) {
  std::istringstream in(text);
  return parse_config(in, "test.ini", overrides);
}

// Expects a ConfigError whose message contains every fragment.
void expect_config_error(const std::string& text, const std::vector<std::string>& fragments) {
  try {
    parse_text(text);
    ADD_FAILURE() << "no error for:\n" << text;
  } catch (const ConfigError& e) {
    for (const auto& f : fragments)
      EXPECT_NE(std::string(e.what()).find(f), std::string::npos) << e.what() << " lacks " << f;
  }
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("hgks_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(Config, SodDefaultsFromCaseAlone) {
  const SolverConfig c = parse_config(kData + "/sod_defaults.ini");
  EXPECT_EQ(c.case_name, "sod");
  EXPECT_DOUBLE_EQ(c.options.time.cfl, 2.5);
  EXPECT_EQ(c.options.time.k_a, 4);
  EXPECT_DOUBLE_EQ(c.stop_time, 0.2);
  EXPECT_EQ(c.output.profile, "x 0.05 0.05");
}

TEST(Config, RoundTrip) {
  for (const auto& name : case_names()) {
    SolverConfig c = default_config(name);
    c.options.time.cfl = 0.1 + 1.0 / 3.0;
    c.options.krylov.tol = 1e-10;
    c.output.directory = "some dir";
    std::ostringstream out;
    write_config(c, out);
    EXPECT_EQ(parse_text(out.str()), c) << name << "\n" << out.str();
  }
}

TEST(Config, Errors) {
  expect_config_error("[time]\ncfl = -1\n", {"test.ini:2", "time.cfl"});
  expect_config_error("[case]\nname = sod\n\n[time]\nfoo = 1\n", {"test.ini:5", "time.foo"});
  expect_config_error("[time]\nk_a = three\n", {"test.ini:2", "time.k_a", "integer"});
  expect_config_error("[time]\ncfl = 1.5x\n", {"test.ini:2", "number"});
  expect_config_error("[time]\nk_a = 2\nk_a = 3\n", {"test.ini:3", "duplicate"});
  expect_config_error("cfl = 2\n", {"test.ini:1", "outside a section"});
  expect_config_error("[time\n", {"test.ini:1", "section"});
  expect_config_error("[time]\ncfl 2\n", {"test.ini:2"});
  expect_config_error("[case]\nname = couette\n", {"test.ini:2", "couette"});
  expect_config_error("[case]\nname = sod\nresolution = 50\n", {"fixed mesh"});
  expect_config_error("[time]\nscheme = s2o4_e\n[kinetic]\nflux_time = averaged\n",
                      {"test.ini:4", "kinetic.flux_time"});
  expect_config_error("[case]\nname = sod\n[kinetic]\ncollision = viscous\n", {"kinetic.mu"});
  expect_config_error("[reconstruction]\nflavor = eno\n", {"test.ini:2", "eno"});
  expect_config_error("[output]\nprofile = q 1 2\n", {"test.ini:2", "output.profile"});
  expect_config_error("[implicit]\nkrylov_dim = 0\n", {"implicit.krylov_dim"});
}

TEST(Config, OverridesApplyAfterTheFile) {
  const SolverConfig c = parse_text("[time]\ncfl = 2\n", {"time.cfl=3", "case.name=lax"});
  EXPECT_DOUBLE_EQ(c.options.time.cfl, 3.0);
  EXPECT_EQ(c.case_name, "lax");
  EXPECT_EQ(c.options.time.k_a, 3);
  EXPECT_THROW(parse_text("", {"time.cfll=3"}), ConfigError);
  EXPECT_THROW(parse_text("", {"time.cfl"}), ConfigError);
}

TEST(Config, AllSchemeFlavorCombinationsValid) {
  for (const char* s : {"s2o4_e", "s2o3_l", "s2o3_g"})
    for (const char* f : {"weno", "hweno"})
      EXPECT_NO_THROW(parse_text("", {std::string("time.scheme=") + s,
                                      std::string("reconstruction.flavor=") + f}));
}

TEST(FormatDouble, SeventeenDigitsRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const double v = std::exp(u(rng)) * (k % 2 ? -1.0 : 1.0);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Vtk, SingleHexMatchesGoldenFile) {
  BoxSpec box;
  const Mesh m = generate_box_hex(box);
  std::ostringstream out;
  write_vtk(m, State(1, to_conserved(1.0, 0.5, 0.0, 0.0, 1.0)), out);
  EXPECT_EQ(out.str(), slurp(kData + "/one_hex.vtk"));
}

TEST(Vtk, UniformFieldHasConstantArraysOnTets) {
  BoxSpec box;
  box.n = {2, 1, 1};
  const Mesh m = generate_box_tet6(box);
  const Vec5 q = to_conserved(1.5, 0.25, -0.5, 0.0, 2.0);
  std::ostringstream out;
  write_vtk(m, State(m.n_cells(), q), out);
  std::istringstream in(out.str());
  std::string line;
  int tets = 0;
  bool in_types = false;
  std::map<std::string, std::vector<std::string>> arrays;
  std::string current;
  while (std::getline(in, line)) {
    if (line.rfind("CELL_TYPES", 0) == 0) {
      in_types = true;
      continue;
    }
    if (line.rfind("CELL_DATA", 0) == 0) {
      in_types = false;
      continue;
    }
    if (in_types && line == "10") ++tets;
    if (line.rfind("SCALARS", 0) == 0 || line.rfind("VECTORS", 0) == 0) {
      current = line.substr(8, line.find(' ', 8) - 8);
      continue;
    }
    if (line.rfind("LOOKUP_TABLE", 0) == 0) continue;
    if (!current.empty()) arrays[current].push_back(line);
  }
  EXPECT_EQ(tets, 12);
  ASSERT_EQ(arrays.size(), 4u);
  for (const auto& [name, values] : arrays) {
    EXPECT_EQ(static_cast<int>(values.size()), m.n_cells()) << name;
    for (const auto& v : values) EXPECT_EQ(v, values.front()) << name;
  }
  EXPECT_EQ(std::stod(arrays["density"].front()), 1.5);
  EXPECT_NEAR(std::stod(arrays["pressure"].front()), 2.0, 1e-14);
  EXPECT_NEAR(std::stod(arrays["density_gradient"].front()), 0.0, 1e-14);
}

TEST(Vtk, SizeMismatchAndUnwritablePath) {
  BoxSpec box;
  const Mesh m = generate_box_hex(box);
  std::ostringstream out;
  EXPECT_THROW(write_vtk(m, State(2, to_conserved(1, 0, 0, 0, 1)), out), Error);
  EXPECT_THROW(write_vtk(m, State(1, to_conserved(1, 0, 0, 0, 1)), "/nonexistent/dir/x.vtk"), Error);
}

TEST(Profile, SodCenterlineHasOneSamplePerColumn) {
  const Mesh m = case_sod().build_mesh();
  const State q(m.n_cells(), to_conserved(1.0, 0.1, 0.0, 0.0, 1.0));
  const auto s = extract_profile(m, q, parse_line("x 0.05 0.05"));
  ASSERT_EQ(s.size(), 100u);
  for (std::size_t k = 0; k < s.size(); ++k) {
    EXPECT_NEAR(s[k].coord, 0.005 + 0.01 * k, 1e-12);
    EXPECT_EQ(s[k].rho, 1.0);
    EXPECT_NEAR(s[k].u[0], 0.1, 1e-15);
    EXPECT_NEAR(s[k].p, 1.0, 1e-14);
  }
  EXPECT_THROW(extract_profile(m, q, parse_line("x 2 2")), Error);
}

TEST(Profile, LineSpecs) {
  const LineSpec l = parse_line("y 0.5 0.25");
  EXPECT_EQ(l.axis, 1);
  EXPECT_EQ(l.point[0], 0.5);
  EXPECT_EQ(l.point[2], 0.25);
  EXPECT_EQ(parse_line(to_string(l)), l);
  EXPECT_THROW(parse_line("x 1"), ConfigError);
  EXPECT_THROW(parse_line("xy 1 2"), ConfigError);
  EXPECT_THROW(parse_line("x 1 2 3"), ConfigError);
}

TEST(Profile, CsvRoundTripIsBitIdentical) {
  std::ifstream in(kData + "/profile_sample.csv");
  const auto s = read_profile(in);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[2].rho, 0.42631942817849544);
  std::ostringstream out;
  write_profile(s, out);
  std::istringstream back(out.str());
  const auto t = read_profile(back);
  for (std::size_t k = 0; k < s.size(); ++k) {
    EXPECT_EQ(t[k].coord, s[k].coord);
    EXPECT_EQ(t[k].u, s[k].u);
    EXPECT_EQ(t[k].p, s[k].p);
  }
  std::istringstream bad("coord,rho\n1,2\n");
  EXPECT_THROW(read_profile(bad), Error);
}

TEST(ResidualLog, GoldenSampleRoundTrips) {
  std::ifstream in(kData + "/residuals_sample.log");
  const auto e = read_residual_log(in);
  ASSERT_EQ(e.size(), 4u);
  EXPECT_EQ(e[3].stage, 2);
  EXPECT_EQ(e[3].iteration, 1);
  std::ostringstream out;
  ResidualLog log(out);
  for (const auto& x : e) log(x.step, {x.stage, x.iteration, x.residual});
  EXPECT_EQ(out.str(), slurp(kData + "/residuals_sample.log"));
  EXPECT_EQ(log.lines(), 4);
}

TEST(Report, RoundTripIsFieldForField) {
  RunReport r;
  r.case_name = "cavity1000";
  r.scheme = "s2o3_g";
  r.flavor = "hweno";
  r.cells = 10368;
  r.steps = 2143;
  r.time = 1.0 / 3.0;
  r.min_dt = 0.012345678901234567;
  r.wall_seconds = 123.456;
  r.diverging_steps = 2;
  r.steady = true;
  r.residual_log = "residuals.log";
  r.diagnostics["vortex_height"] = 0.1675;
  r.diagnostics["density_l2"] = 1e-300;
  std::ostringstream out;
  write_report(r, out);
  std::istringstream in(out.str());
  EXPECT_EQ(read_report(in), r);
  std::istringstream bad("steps = many\n");
  EXPECT_THROW(read_report(bad), Error);
}

TEST(ConvergenceTable, Layout) {
  std::ostringstream out;
  write_convergence_table({{5, 750, 0.125, NAN, 1.0}, {10, 6000, 0.015625, 3.0, 8.0}}, out);
  EXPECT_EQ(out.str(), "mesh,error,order\n5^3x6,0.125,-\n10^3x6,0.015625,3\n");
}

TEST(Driver, RunWritesArtifactsAndCountsMatch) {
  const auto dir = scratch_dir("run");
  SolverConfig c = default_config("riemann2d", 6);
  c.stop_time = 0.05;
  c.output.directory = dir.string();
  c.output.vtk_every = 2;
  c.options.time.k_a = 2;
  int loop_steps = 0;
  std::ostringstream progress;
  const Simulation s = simulate(c, true, &progress);
  {
    std::istringstream p(progress.str());
    for (std::string line; std::getline(p, line);) ++loop_steps;
  }
  EXPECT_EQ(s.report.steps, loop_steps);
  EXPECT_NEAR(s.report.time, 0.05, 1e-14);
  for (const char* f : {"field.vtk", "profile.csv", "report.txt", "config.ini", "residuals.log"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  EXPECT_TRUE(std::filesystem::exists(dir / "field_000002.vtk"));
  std::ifstream log(dir / "residuals.log");
  EXPECT_EQ(static_cast<int>(read_residual_log(log).size()), s.report.steps * 2 * 2);
  std::ifstream rep(dir / "report.txt");
  EXPECT_EQ(read_report(rep), s.report);
  EXPECT_EQ(parse_config((dir / "config.ini").string()), c);
  EXPECT_LT(s.report.diagnostics.at("symmetry_error"), 1e-3);
  std::filesystem::remove_all(dir);
}

TEST(Driver, ConvergenceAndCompare) {
  SolverConfig c = default_config("accuracy3d", 2);
  c.stop_time = 0.1;
  const auto rows = convergence_study(c, {2, 3});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(std::isnan(rows[0].order));
  EXPECT_EQ(rows[1].cells, 6 * 27);
  EXPECT_GT(rows[0].error, 0.0);
  const Comparison same = compare_runs(c, c);
  EXPECT_EQ(same.max_density_delta, 0.0);
  EXPECT_GT(same.wall_ratio, 0.0);
  SolverConfig d = c;
  d.resolution = 3;
  EXPECT_THROW(compare_runs(c, d), ConfigError);
  EXPECT_THROW(convergence_study(default_config("sod"), {5}), ConfigError);
}
