#ifndef OPTOMECH_SWEEP_HPP
#define OPTOMECH_SWEEP_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "optomech/config.hpp"
#include "optomech/dynamics.hpp"
#include "optomech/solver.hpp"

namespace optomech {

using AxisValue = std::pair<SweepAxis, double>;

/// One grid point. Covariance-derived fields stay empty for unstable points.
struct SweepRow {
  std::vector<double> axis_values;
  bool stable = false;
  bool agreement = true;
  std::optional<double> margin;
  double max_re_eig = 0.0;
  std::optional<bool> converged;
  std::optional<double> imag_residue;
  std::vector<double> n_eff;    ///< per mechanical mode, CoM first
  std::vector<double> log_neg;  ///< per bipartition, see SweepResult::pair_labels
  std::vector<double> eta;
};

struct SweepResult {
  std::vector<SweepAxis> axes;
  std::vector<std::string> mechanical_labels;
  std::vector<std::string> pair_labels;
  bool stability_only = false;
  std::vector<SweepRow> rows;

  std::vector<std::string> columns() const;
  /// Row values aligned with columns(); booleans as 0/1, blanks as nullopt.
  std::vector<std::optional<double>> cells(std::size_t row) const;
};

struct PointResult {
  SweepRow row;
  SystemLayout layout;
  SteadyState steady;
  StabilityReport stability;
  std::optional<CovarianceMatrix> covariance;
};

/// Empty result carrying the axis list and the mode/pair labels of `config`.
SweepResult make_result(const Config& config, std::vector<SweepAxis> axes,
                        bool stability_only = false);

/// Axis values of every grid point in evaluation order (primary outer).
/// A config without a sweep block yields its fixed detuning.
std::vector<std::vector<AxisValue>> sweep_grid(const Config& config);

/// Copy of `config` with the given axis values substituted.
Config apply_axes(const Config& config, std::span<const AxisValue> values);

/// derive couplings -> steady state -> stability -> (if stable) covariance -> measures.
PointResult evaluate_point(const Config& config, std::span<const AxisValue> values = {},
                           bool stability_only = false);

/// Evaluates every grid point of the config's sweep (primary axis outer,
/// secondary inner) on `threads` workers; 0 selects default_thread_count().
/// Rows are stored in grid order, so output does not depend on the worker count.
SweepResult run_sweep(const Config& config, unsigned threads = 0,
                      bool stability_only = false);

/// OPTOMECH_THREADS when set to a positive integer, else the hardware concurrency.
unsigned default_thread_count();

void write_csv(const SweepResult& result, std::ostream& out);
/// Throws IoError if the file cannot be written.
void emit_csv(const SweepResult& result, const std::filesystem::path& path);

/// Shortest round-trippable-to-12-digits text used in CSV cells.
std::string format_number(double x);

}  // namespace optomech

#endif  // OPTOMECH_SWEEP_HPP
