#include "optomech/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "optomech/error.hpp"
#include "optomech/measures.hpp"

namespace optomech {

Config apply_axes(const Config& config, std::span<const AxisValue> values) {
  Config c = config;
  for (const auto& [axis, value] : values) {
    switch (axis) {
      case SweepAxis::Detuning:
        c.detuning = value;
        break;
      case SweepAxis::Kappa2:
        if (value < 0.0) throw InvalidArgument("kappa2 must be >= 0");
        c.params.kappa2 = value * c.params.omega_m;
        break;
      case SweepAxis::Power:
        if (value < 0.0) throw InvalidArgument("laser power must be >= 0");
        c.params.laser_power = value;
        break;
      case SweepAxis::ModeIndex: {
        const double n = std::round(value);
        if (n < 1.0 || n != value) throw InvalidArgument("mode_index must be a positive integer");
        if (c.elastic_indices.size() != 1)
          throw InvalidArgument("a mode_index sweep needs exactly one elastic index");
        c.elastic_indices = {static_cast<int>(n)};
        break;
      }
    }
  }
  if (!c.detuning) throw InvalidArgument("no detuning given for this point");
  return c;
}

PointResult evaluate_point(const Config& config, std::span<const AxisValue> values,
                           bool stability_only) {
  const Config c = apply_axes(config, values);
  PointResult out;
  out.layout = derive_couplings(c.params, c.elastic, c.elastic_indices, c.layout);
  out.steady = steady_state(c.params, out.layout, *c.detuning);
  out.stability = check_stability(out.layout, out.steady);

  SweepRow& row = out.row;
  for (const auto& [axis, value] : values) row.axis_values.push_back(value);
  row.stable = out.stability.stable;
  row.agreement = out.stability.agreement;
  row.margin = out.stability.closed_form_margin;
  row.max_re_eig = out.stability.max_real_eigenvalue;
  if (stability_only || !row.stable) return out;

  const SpectralMatrices matrices(out.layout, out.steady, c.brownian);
  out.covariance = integrate_covariance(matrices, c.quadrature);
  const RealMatrix& v = out.covariance->entries;
  row.converged = out.covariance->converged;
  row.imag_residue = out.covariance->imag_residue;

  const Basis basis(out.layout);
  for (const auto& mode : mechanical_modes(basis)) row.n_eff.push_back(phonon_number(v, mode));
  for (const auto& [a, b] : bipartitions(basis)) {
    const auto r = bipartition(v, a, b);
    row.log_neg.push_back(r.log_neg);
    row.eta.push_back(r.eta_minus);
  }
  return out;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("OPTOMECH_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult make_result(const Config& config, std::vector<SweepAxis> axes,
                        bool stability_only) {
  SweepResult result;
  result.axes = std::move(axes);
  result.stability_only = stability_only;
  // Column labels depend only on the mode roster, which no axis changes.
  const Basis basis(config.layout.include_com, config.elastic_indices.size());
  for (const auto& m : mechanical_modes(basis)) result.mechanical_labels.push_back(m.label());
  for (const auto& [a, b] : bipartitions(basis))
    result.pair_labels.push_back(a.label() + "_" + b.label());
  return result;
}

std::vector<std::vector<AxisValue>> sweep_grid(const Config& config) {
  std::vector<std::vector<AxisValue>> grid;
  if (!config.sweep) {
    grid.push_back({{SweepAxis::Detuning, config.detuning.value_or(0.0)}});
    return grid;
  }
  const auto& s = *config.sweep;
  for (double x : s.primary.grid()) {
    if (!s.secondary) {
      grid.push_back({{s.primary.axis, x}});
      continue;
    }
    for (double y : s.secondary->grid())
      grid.push_back({{s.primary.axis, x}, {s.secondary->axis, y}});
  }
  return grid;
}

SweepResult run_sweep(const Config& config, unsigned threads, bool stability_only) {
  const auto grid = sweep_grid(config);
  std::vector<SweepAxis> axes;
  for (const auto& [axis, value] : grid.front()) axes.push_back(axis);
  SweepResult result = make_result(config, std::move(axes), stability_only);
  result.rows.resize(grid.size());
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, grid.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        result.rows[i] = evaluate_point(config, grid[i], stability_only).row;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = grid.size();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

std::vector<std::string> SweepResult::columns() const {
  std::vector<std::string> cols;
  for (auto axis : axes) cols.push_back(axis_column(axis));
  cols.insert(cols.end(), {"stable", "agreement", "margin[-]", "max_re_eig[omega_m]"});
  if (stability_only) return cols;
  cols.insert(cols.end(), {"converged", "imag_residue[-]"});
  for (const auto& m : mechanical_labels) cols.push_back("n_eff_" + m + "[quanta]");
  for (const auto& p : pair_labels) cols.push_back("EN_" + p + "[-]");
  for (const auto& p : pair_labels) cols.push_back("eta_" + p + "[-]");
  return cols;
}

std::vector<std::optional<double>> SweepResult::cells(std::size_t index) const {
  const SweepRow& row = rows.at(index);
  std::vector<std::optional<double>> out;
  for (double x : row.axis_values) out.emplace_back(x);
  out.emplace_back(row.stable ? 1.0 : 0.0);
  out.emplace_back(row.agreement ? 1.0 : 0.0);
  out.push_back(row.margin);
  out.emplace_back(row.max_re_eig);
  if (stability_only) return out;
  out.push_back(row.converged ? std::optional<double>(*row.converged ? 1.0 : 0.0) : std::nullopt);
  out.push_back(row.imag_residue);
  auto block = [&](const std::vector<double>& values, std::size_t width) {
    for (std::size_t k = 0; k < width; ++k)
      out.push_back(k < values.size() ? std::optional<double>(values[k]) : std::nullopt);
  };
  block(row.n_eff, mechanical_labels.size());
  block(row.log_neg, pair_labels.size());
  block(row.eta, pair_labels.size());
  return out;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_csv(const SweepResult& result, std::ostream& out) {
  const auto cols = result.columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  const std::size_t axes = result.axes.size();
  for (std::size_t r = 0; r < result.rows.size(); ++r) {
    const auto cells = result.cells(r);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      if (!cells[i]) continue;
      const std::string& name = cols[i];
      const bool flag = name == "stable" || name == "agreement" || name == "converged";
      if (flag) out << (*cells[i] != 0.0 ? "true" : "false");
      else if (i < axes && result.axes[i] == SweepAxis::ModeIndex)
        out << static_cast<long>(*cells[i]);
      else out << format_number(*cells[i]);
    }
    out << '\n';
  }
}

void emit_csv(const SweepResult& result, const std::filesystem::path& path) {
  if (result.rows.empty()) throw InvalidArgument("emit_csv: result has no rows");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_csv(result, out);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace optomech
