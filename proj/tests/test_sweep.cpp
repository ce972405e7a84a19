#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "optomech/config.hpp"
#include "optomech/error.hpp"
#include "optomech/model.hpp"
#include "optomech/sweep.hpp"

using namespace optomech;

namespace {

const std::string kBase = R"(mechanics.frequency_hz = 20e6
mechanics.quality_factor = 1e5
mechanics.mass_kg = 5e-12
cavity.length_m = 1e-3
cavity.wavelength_m = 810e-9
bath.temperature_k = 4e-3
elastic.indices = 20
elastic.omega_base = 1/37
photothermal.chi = 0.13
photothermal.tau_th = 37/20
cavity.kappa1 = 0.05
)";

std::string csv_of(const SweepResult& r) {
  std::ostringstream out;
  write_csv(r, out);
  return out.str();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("output does not depend on the worker count") {
  const Config c = parse_config(kBase + "laser.power_w = 30e-3\nsweep.axis = detuning\n"
                                        "sweep.from = 0.2\nsweep.to = 1.6\nsweep.points = 24\n");
  const std::string one = csv_of(run_sweep(c, 1));
  CHECK(one == csv_of(run_sweep(c, 4)));
  CHECK(one == csv_of(run_sweep(c, 7)));
  CHECK(one == csv_of(run_sweep(c, 1)));
}

TEST_CASE("zero power: every row stable and thermal") {
  const Config c = parse_config(kBase + "laser.power_w = 0\ncavity.kappa2 = 0.05\n"
                                        "sweep.axis = detuning\nsweep.from = 0.2\nsweep.to = 2\n"
                                        "sweep.points = 5\n");
  const auto r = run_sweep(c, 2);
  const auto layout = derive_couplings(c.params, c.elastic, c.elastic_indices);
  const double nm = bose_occupancy(1.0, layout.thermal_ratio);
  const double nn = bose_occupancy(20.0 / 37.0, layout.thermal_ratio);
  REQUIRE(r.rows.size() == 5);
  for (const auto& row : r.rows) {
    CHECK(row.stable);
    CHECK(row.n_eff[0] == doctest::Approx(nm).epsilon(1e-5));
    CHECK(row.n_eff[1] == doctest::Approx(nn).epsilon(1e-5));
    for (double e : row.log_neg) CHECK(e < 1e-12);
  }
}

TEST_CASE("csv layout, unstable rows and round trip") {
  const Config c = parse_config(kBase + "laser.power_w = 60e-3\nsweep.axis = detuning\n"
                                        "sweep.from = 0.2\nsweep.to = 1.2\nsweep.points = 3\n");
  const auto r = run_sweep(c, 1);
  const auto lines = lines_of(csv_of(r));
  REQUIRE(lines.size() == 4);
  const auto header = split(lines[0]);
  CHECK(header[0] == "detuning[omega_m]");
  CHECK(header[1] == "stable");
  CHECK(std::find(header.begin(), header.end(), "n_eff_com[quanta]") != header.end());
  CHECK(std::find(header.begin(), header.end(), "EN_cav_el1[-]") != header.end());
  CHECK(std::find(header.begin(), header.end(), "eta_com_el1[-]") != header.end());

  // 0.2 omega_m at 60 mW is past threshold
  REQUIRE_FALSE(r.rows[0].stable);
  const auto unstable = split(lines[1]);
  REQUIRE(unstable.size() == header.size());
  CHECK(unstable[1] == "false");
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i].starts_with("n_eff") || header[i].starts_with("EN_") ||
        header[i].starts_with("eta_") || header[i] == "converged")
      CHECK(unstable[i].empty());

  REQUIRE(r.rows[2].stable);
  const auto cells = split(lines[3]);
  const auto values = r.cells(2);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!values[i] || cells[i] == "true" || cells[i] == "false") continue;
    const double back = std::strtod(cells[i].c_str(), nullptr);
    CHECK(std::abs(back - *values[i]) <= 1e-11 * std::abs(*values[i]));
  }
}

TEST_CASE("stability rows agree with the margin") {
  const Config c = parse_config(kBase + "laser.power_w = 40e-3\nsweep.axis = detuning\n"
                                        "sweep.from = 0.05\nsweep.to = 2\nsweep.points = 60\n");
  const auto r = run_sweep(c, 2, true);
  CHECK(r.columns().size() == 5);
  for (const auto& row : r.rows) {
    CHECK(row.agreement);
    REQUIRE(row.margin);
    CHECK(row.stable == (*row.margin > 0));
    if (!row.stable) CHECK(row.max_re_eig >= 0.0);
    CHECK(row.n_eff.empty());
  }
}

TEST_CASE("density sweeps are long format") {
  const Config c = parse_config(kBase + "cavity.detuning = 0.4\nsweep.axis = kappa2\n"
                                        "sweep.from = 0\nsweep.to = 0.1\nsweep.points = 3\n"
                                        "sweep.secondary.axis = power\nsweep.secondary.from = 1e-3\n"
                                        "sweep.secondary.to = 3e-3\nsweep.secondary.points = 2\n");
  const auto r = run_sweep(c, 1);
  REQUIRE(r.rows.size() == 6);
  CHECK(r.rows[0].axis_values == std::vector<double>{0.0, 1e-3});
  CHECK(r.rows[1].axis_values == std::vector<double>{0.0, 3e-3});
  CHECK(r.rows[5].axis_values == std::vector<double>{0.1, 3e-3});
  const auto header = split(lines_of(csv_of(r))[0]);
  CHECK(header[0] == "kappa2[omega_m]");
  CHECK(header[1] == "power[W]");
}

TEST_CASE("mode index sweeps and no-CoM rosters") {
  const Config c = parse_config(kBase + "cavity.detuning = 1\nlaser.power_w = 15e-3\n"
                                        "model.include_com = false\nsweep.axis = mode_index\n"
                                        "sweep.values = 30, 37\n");
  const auto r = run_sweep(c, 1);
  CHECK(r.mechanical_labels == std::vector<std::string>{"el1"});
  CHECK(r.pair_labels == std::vector<std::string>{"cav_el1"});
  const auto lines = lines_of(csv_of(r));
  CHECK(lines[1].starts_with("30,"));
  CHECK(lines[2].starts_with("37,"));
}

TEST_CASE("axis overrides") {
  const Config c = parse_config(kBase + "cavity.detuning = 1\nlaser.power_w = 15e-3\n");
  const AxisValue v[] = {{SweepAxis::Kappa2, 0.05}, {SweepAxis::Power, 2e-3},
                         {SweepAxis::ModeIndex, 31}};
  const Config o = apply_axes(c, v);
  CHECK(o.params.kappa2 == doctest::Approx(0.05 * c.params.omega_m));
  CHECK(o.params.laser_power == 2e-3);
  CHECK(o.elastic_indices == std::vector<int>{31});
  const AxisValue bad[] = {{SweepAxis::ModeIndex, 3.5}};
  CHECK_THROWS_AS(apply_axes(c, bad), InvalidArgument);

  const auto p = evaluate_point(c);
  REQUIRE(p.covariance);
  CHECK(p.covariance->entries.rows() == 6);
  CHECK(p.row.stable);
}

TEST_CASE("emit_csv reports unwritable paths") {
  const Config c = parse_config(kBase + "cavity.detuning = 1\nlaser.power_w = 1e-3\n");
  const auto r = run_sweep(c, 1);
  CHECK_THROWS_AS(emit_csv(r, "/nonexistent-dir/out.csv"), IoError);
  const auto path = std::filesystem::temp_directory_path() / "optomech_test_sweep.csv";
  emit_csv(r, path);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(lines_of(text.str()).size() == 2);
  std::filesystem::remove(path);
}

TEST_CASE("thread count from the environment") {
  setenv("OPTOMECH_THREADS", "3", 1);
  CHECK(default_thread_count() == 3);
  setenv("OPTOMECH_THREADS", "zero", 1);
  CHECK(default_thread_count() >= 1);
  unsetenv("OPTOMECH_THREADS");
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(1.5e-9) == "1.5e-09");
}
