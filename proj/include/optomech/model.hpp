#ifndef OPTOMECH_MODEL_HPP
#define OPTOMECH_MODEL_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace optomech {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double boltzmann = 1.380649e-23;     // J/K
inline constexpr double speed_of_light = 299792458.0; // m/s
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

/// Mirror, cavity and bath constants in SI units. Rates are angular (rad/s).
struct PhysicalParams {
  double omega_m = 0.0;           ///< CoM angular frequency
  double Q_m = 0.0;               ///< mechanical quality factor
  double mass = 0.0;              ///< kg
  double cavity_length = 0.0;     ///< m
  double laser_wavelength = 0.0;  ///< m
  double bath_temperature = 0.0;  ///< K
  double kappa1 = 0.0;            ///< input-mirror decay rate
  double kappa2 = 0.0;            ///< absorption decay rate
  double laser_power = 0.0;       ///< W

  double kappa_c() const { return kappa1 + kappa2; }
  double laser_frequency() const {
    return 2.0 * constants::pi * constants::speed_of_light / laser_wavelength;
  }
  /// Drive amplitude sqrt(2 kappa1 P / hbar omega_L), in 1/s.
  double drive() const;

  /// Throws InvalidArgument naming the first offending field.
  void validate() const;
};

/// Bulk material and geometry of the mirror, SI units.
struct ElasticMaterial {
  double young_modulus = 0.0;          ///< Pa
  double poisson_ratio = 0.0;          ///< -1 < sigma < 1/2
  double density = 0.0;                ///< kg/m^3
  double specific_heat = 0.0;          ///< J/(kg K)
  double thermal_conductivity = 0.0;   ///< W/(m K)
  double thermal_expansion = 0.0;      ///< 1/K
  double absorption_efficiency = 0.0;  ///< 0 <= beta <= 1
  double mirror_thickness = 0.0;       ///< m
  double mirror_area = 0.0;            ///< m^2
  double spot_radius = 0.0;            ///< m

  void validate() const;

  /// nu^2 = K_th / (rho C), m^2/s.
  double diffusivity() const;
  /// Slowest thermal diffusion time (2 l / pi nu)^2, seconds.
  double thermal_time() const;
  /// Dimensionless photothermal strength for a cavity of the given length.
  double photothermal_strength(double cavity_length) const;
  /// Longitudinal resonance of mode n in rad/s; exactly linear in n.
  double elastic_frequency(int n) const;
};

/// Where the elastic spectrum and photothermal constants come from. Any
/// override present takes precedence over the material value; a quantity
/// with neither source is an error.
struct ElasticSource {
  std::optional<ElasticMaterial> material;
  std::optional<double> omega_base;      ///< Omega_n = n * omega_base, units of omega_m
  std::optional<double> chi;
  std::optional<double> tau_th;          ///< units of 1/omega_m
  std::optional<double> quality_factor;  ///< elastic Q, defaults to Q_m
};

enum class KernelModel {
  SinglePole,  ///< slowest diffusion term only
  FullSeries,  ///< truncated sum over all diffusion terms
};

struct LayoutOptions {
  bool include_com = true;
  KernelModel kernel = KernelModel::SinglePole;
  int kernel_terms = 200;
};

struct ElasticMode {
  int index = 0;
  double Omega = 0.0;  ///< resonance, units of omega_m
  double Gamma = 0.0;  ///< damping, units of omega_m
  double G0 = 0.0;     ///< single-photon radiation-pressure coupling, units of omega_m
};

/// Mode roster plus every derived rate, stored in units of omega_m.
struct SystemLayout {
  double omega_m_si = 0.0;  ///< rad/s; the unit of every rate in this struct
  bool include_com = true;
  double gamma_m = 0.0;
  double g0 = 0.0;
  std::vector<ElasticMode> modes;
  double chi = 0.0;
  double tau_th = 0.0;        ///< units of 1/omega_m
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double thermal_ratio = 0.0; ///< hbar omega_m / (k_B T)
  KernelModel kernel = KernelModel::SinglePole;
  int kernel_terms = 200;

  double kappa_c() const { return kappa1 + kappa2; }
  std::size_t elastic_count() const { return modes.size(); }
  std::size_t dimension() const { return 2 * modes.size() + (include_com ? 4 : 2); }

  /// Photothermal response of elastic slot k at angular frequency omega.
  std::complex<double> kernel_response(std::size_t k, double omega) const;
};

/// Mean fields about which the fluctuations are linearized. Rates in units
/// of omega_m; displacements dimensionless.
struct SteadyState {
  double mean_field = 0.0;     ///< <a>, real and non-negative
  double detuning_eff = 0.0;   ///< Delta_c
  double detuning_bare = 0.0;  ///< Delta_0 recovered from Delta_c and the static shifts
  double q_cm_mean = 0.0;
  std::vector<double> Q_means;
  double g = 0.0;
  std::vector<double> G;
};

/// Single-pole photothermal response 4 n^2 tau / ((4 n^2 - 1)(1 - i omega tau)).
/// tau and omega may be in any reciprocal pair of units.
std::complex<double> response_fourier(int n, double tau_th, double omega);

/// Same response keeping the first `terms` diffusion poles, tau_k = tau / (2k+1)^2.
std::complex<double> response_fourier_series(int n, double tau_th, double omega,
                                             int terms);

SystemLayout derive_couplings(const PhysicalParams& params,
                              const ElasticSource& source,
                              std::span<const int> indices,
                              const LayoutOptions& options = {});

SteadyState steady_state(const PhysicalParams& params, const SystemLayout& layout,
                         double detuning_eff);

/// Bose occupancy at angular frequency omega (units of omega_m).
double bose_occupancy(double omega, double thermal_ratio);

}  // namespace optomech

#endif  // OPTOMECH_MODEL_HPP
