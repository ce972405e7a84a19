#ifndef OPTOMECH_CONFIG_HPP
#define OPTOMECH_CONFIG_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optomech/dynamics.hpp"
#include "optomech/model.hpp"
#include "optomech/solver.hpp"

namespace optomech {

enum class SweepAxis { Detuning, Kappa2, Power, ModeIndex };

/// "detuning", "kappa2", "power", "mode_index".
std::string_view axis_name(SweepAxis axis);
/// CSV header for an axis column, e.g. "detuning[omega_m]".
std::string axis_column(SweepAxis axis);

struct AxisSpec {
  SweepAxis axis = SweepAxis::Detuning;
  double from = 0.0;
  double to = 0.0;
  std::size_t points = 0;
  /// Explicit grid; used for mode_index sweeps.
  std::vector<double> values;

  /// Detuning and kappa2 are in units of omega_m, power in W.
  std::vector<double> grid() const;
};

struct SweepSpec {
  AxisSpec primary;
  std::optional<AxisSpec> secondary;
};

/// A fully validated run description.
struct Config {
  PhysicalParams params;
  ElasticSource elastic;
  std::vector<int> elastic_indices;
  LayoutOptions layout;
  BrownianSpectrum brownian = BrownianSpectrum::Full;
  /// Effective detuning in units of omega_m, used when not swept.
  std::optional<double> detuning;
  std::optional<SweepSpec> sweep;
  QuadratureConfig quadrature;
};

/// Parses the line-oriented `section.key = value` format described in
/// docs/config-format.md. `origin` prefixes every error message.
Config parse_config(std::string_view text, const std::string& origin = "<config>");
Config load_config(const std::filesystem::path& path);

}  // namespace optomech

#endif  // OPTOMECH_CONFIG_HPP
