// optomech: steady-state cooling and entanglement sweeps from a config file.
//
//   optomech sweep <config> --out <path> [--threads k]
//   optomech stability <config> [--out <path>] [--threads k]
//   optomech point <config> --detuning <x> [--covariance]

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optomech/optomech.h"

namespace {

// Exit codes: 1 config, 2 i/o, 3 anything else.
int exit_code(om_status s) {
  switch (s) {
    case OM_OK: return 0;
    case OM_ERR_PARSE:
    case OM_ERR_INVALID_ARGUMENT: return 1;
    case OM_ERR_IO: return 2;
    default: return 3;
  }
}

int report(om_status s) {
  std::fprintf(stderr, "optomech: %s: %s\n", om_status_string(s), om_last_error());
  return exit_code(s);
}

struct ConfigHandle {
  om_config* ptr = nullptr;
  ~ConfigHandle() { om_config_free(ptr); }
};

struct ResultHandle {
  om_result* ptr = nullptr;
  ~ResultHandle() { om_result_free(ptr); }
};

void print_table(const om_result* r) {
  const size_t cols = om_result_columns(r);
  for (size_t c = 0; c < cols; ++c) std::printf("%s%s", c ? "," : "", om_result_column_name(r, c));
  std::printf("\n");
  for (size_t row = 0; row < om_result_rows(r); ++row) {
    for (size_t c = 0; c < cols; ++c) {
      double v = 0.0;
      if (c) std::printf(",");
      if (om_result_value(r, row, c, &v) == OM_OK) std::printf("%.12g", v);
    }
    std::printf("\n");
  }
}

int summarize(const om_result* r, const char* path) {
  size_t stable = 0, unconverged = 0;
  const size_t rows = om_result_rows(r);
  for (size_t row = 0; row < rows; ++row) {
    for (size_t c = 0; c < om_result_columns(r); ++c) {
      const std::string name = om_result_column_name(r, c);
      double v = 0.0;
      if (om_result_value(r, row, c, &v) != OM_OK) continue;
      if (name == "stable" && v != 0.0) ++stable;
      if (name == "converged" && v == 0.0) ++unconverged;
    }
  }
  std::fprintf(stderr, "%zu points, %zu stable -> %s\n", rows, stable, path);
  if (unconverged)
    std::fprintf(stderr, "warning: quadrature hit the panel cap at %zu points\n", unconverged);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state cooling and entanglement of a cavity-coupled mirror"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(om_version()));

  std::string config_path, out_path;
  unsigned threads = 0;
  double detuning = 0.0;
  bool covariance = false;

  auto* sweep = app.add_subcommand("sweep", "Run the config's sweep and write CSV");
  sweep->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out,-o", out_path, "Output CSV")->required();
  sweep->add_option("--threads,-j", threads, "Worker threads (default OPTOMECH_THREADS or all cores)");

  auto* stability = app.add_subcommand("stability", "Stability verdicts over the sweep grid");
  stability->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  stability->add_option("--out,-o", out_path, "Output CSV (default stdout)");
  stability->add_option("--threads,-j", threads, "Worker threads");

  auto* point = app.add_subcommand("point", "Evaluate a single detuning");
  point->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  point->add_option("--detuning,-d", detuning, "Effective detuning in units of omega_m")->required();
  point->add_flag("--covariance", covariance, "Also print the covariance matrix");

  CLI11_PARSE(app, argc, argv);

  ConfigHandle cfg;
  if (om_status s = om_config_load(config_path.c_str(), &cfg.ptr); s != OM_OK) return report(s);

  ResultHandle res;
  if (*sweep) {
    if (om_status s = om_sweep_run(cfg.ptr, threads, &res.ptr); s != OM_OK) return report(s);
    if (om_status s = om_result_write_csv(res.ptr, out_path.c_str()); s != OM_OK) return report(s);
    return summarize(res.ptr, out_path.c_str());
  }
  if (*stability) {
    if (om_status s = om_stability_run(cfg.ptr, threads, &res.ptr); s != OM_OK) return report(s);
    if (out_path.empty()) {
      print_table(res.ptr);
      return 0;
    }
    if (om_status s = om_result_write_csv(res.ptr, out_path.c_str()); s != OM_OK) return report(s);
    return summarize(res.ptr, out_path.c_str());
  }

  if (om_status s = om_point_run(cfg.ptr, detuning, &res.ptr); s != OM_OK) return report(s);
  for (size_t c = 0; c < om_result_columns(res.ptr); ++c) {
    double v = 0.0;
    const om_status s = om_result_value(res.ptr, 0, c, &v);
    if (s == OM_OK) std::printf("%-24s %.12g\n", om_result_column_name(res.ptr, c), v);
    else std::printf("%-24s -\n", om_result_column_name(res.ptr, c));
  }
  if (covariance) {
    const size_t n = om_result_covariance_dim(res.ptr);
    if (n == 0) {
      std::printf("covariance: none (unstable)\n");
      return 0;
    }
    std::vector<double> v(n * n);
    if (om_status s = om_result_covariance(res.ptr, v.data(), v.size()); s != OM_OK) return report(s);
    std::printf("covariance:\n");
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) std::printf("%s% .10e", j ? " " : "", v[i * n + j]);
      std::printf("\n");
    }
  }
  return 0;
}
