#include "optomech/model.hpp"

#include <cmath>
#include <string>

#include "optomech/error.hpp"

namespace optomech {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

double PhysicalParams::drive() const {
  const double photon_energy = constants::hbar * laser_frequency();
  return std::sqrt(2.0 * kappa1 * laser_power / photon_energy);
}

void PhysicalParams::validate() const {
  require(positive(omega_m), "omega_m must be > 0");
  require(positive(Q_m), "Q_m must be > 0");
  require(positive(mass), "mass must be > 0");
  require(positive(cavity_length), "cavity_length must be > 0");
  require(positive(laser_wavelength), "laser_wavelength must be > 0");
  require(positive(bath_temperature), "bath_temperature must be > 0");
  require(positive(kappa1), "kappa1 must be > 0");
  require(std::isfinite(kappa2) && kappa2 >= 0.0, "kappa2 must be >= 0");
  require(std::isfinite(laser_power) && laser_power >= 0.0, "laser_power must be >= 0");
}

void ElasticMaterial::validate() const {
  require(positive(young_modulus), "young_modulus must be > 0");
  require(std::isfinite(poisson_ratio) && poisson_ratio > -1.0,
          "poisson_ratio must be > -1");
  require(poisson_ratio < 0.5, "poisson_ratio must be < 1/2");
  require(positive(density), "density must be > 0");
  require(positive(specific_heat), "specific_heat must be > 0");
  require(positive(thermal_conductivity), "thermal_conductivity must be > 0");
  require(positive(thermal_expansion), "thermal_expansion must be > 0");
  require(std::isfinite(absorption_efficiency) && absorption_efficiency >= 0.0 &&
              absorption_efficiency <= 1.0,
          "absorption_efficiency must lie in [0, 1]");
  require(positive(mirror_thickness), "mirror_thickness must be > 0");
  require(positive(mirror_area), "mirror_area must be > 0");
  require(positive(spot_radius), "spot_radius must be > 0");
}

double ElasticMaterial::diffusivity() const {
  return thermal_conductivity / (density * specific_heat);
}

double ElasticMaterial::thermal_time() const {
  const double nu = std::sqrt(diffusivity());
  const double t = 2.0 * mirror_thickness / (constants::pi * nu);
  return t * t;
}

double ElasticMaterial::photothermal_strength(double cavity_length) const {
  const double spot = constants::pi * spot_radius * spot_radius;
  return absorption_efficiency * young_modulus * thermal_expansion * cavity_length *
         mirror_area /
         (3.0 * density * specific_heat * spot * mirror_thickness *
          (1.0 - 2.0 * poisson_ratio));
}

double ElasticMaterial::elastic_frequency(int n) const {
  const double s = poisson_ratio;
  const double spot = constants::pi * spot_radius * spot_radius;
  const double stiffness = young_modulus * (1.0 - s) * mirror_area /
                           (density * spot * (1.0 + s) * (1.0 - 2.0 * s));
  return std::sqrt(stiffness) * n * constants::pi / mirror_thickness;
}

std::complex<double> response_fourier(int n, double tau_th, double omega) {
  const double n2 = 4.0 * n * n;
  const std::complex<double> pole(1.0, -omega * tau_th);
  return n2 * tau_th / ((n2 - 1.0) * pole);
}

std::complex<double> response_fourier_series(int n, double tau_th, double omega,
                                             int terms) {
  const double n2 = 4.0 * n * n;
  std::complex<double> sum = 0.0;
  for (int k = terms - 1; k >= 0; --k) {
    const double odd = 2.0 * k + 1.0;
    const double tau_k = tau_th / (odd * odd);
    sum += n2 * tau_k / ((n2 - odd * odd) * std::complex<double>(1.0, -omega * tau_k));
  }
  return sum;
}

std::complex<double> SystemLayout::kernel_response(std::size_t k, double omega) const {
  const int n = modes.at(k).index;
  if (kernel == KernelModel::FullSeries)
    return response_fourier_series(n, tau_th, omega, kernel_terms);
  return response_fourier(n, tau_th, omega);
}

double bose_occupancy(double omega, double thermal_ratio) {
  return 1.0 / std::expm1(thermal_ratio * omega);
}

SystemLayout derive_couplings(const PhysicalParams& params, const ElasticSource& source,
                              std::span<const int> indices,
                              const LayoutOptions& options) {
  params.validate();
  if (source.material) source.material->validate();
  if (!options.include_com && indices.empty())
    throw InvalidArgument("layout without the CoM mode needs at least one elastic mode");
  if (options.kernel_terms < 1) throw InvalidArgument("kernel_terms must be >= 1");

  const double wm = params.omega_m;
  SystemLayout layout;
  layout.omega_m_si = wm;
  layout.include_com = options.include_com;
  layout.gamma_m = 1.0 / params.Q_m;
  layout.kappa1 = params.kappa1 / wm;
  layout.kappa2 = params.kappa2 / wm;
  layout.thermal_ratio =
      constants::hbar * wm / (constants::boltzmann * params.bath_temperature);
  layout.kernel = options.kernel;
  layout.kernel_terms = options.kernel_terms;

  // g0 = (omega_c / L) sqrt(hbar / m omega_m); G0n uses 2 hbar / m Omega_n.
  const double pull = params.laser_frequency() / params.cavity_length;
  layout.g0 = pull * std::sqrt(constants::hbar / (params.mass * wm)) / wm;

  if (source.chi) {
    require(std::isfinite(*source.chi) && *source.chi >= 0.0, "chi must be >= 0");
    layout.chi = *source.chi;
  } else if (source.material) {
    layout.chi = source.material->photothermal_strength(params.cavity_length);
  } else {
    throw InvalidArgument("chi needs either an override or a material block");
  }

  if (source.tau_th) {
    require(positive(*source.tau_th), "tau_th must be > 0");
    layout.tau_th = *source.tau_th;
  } else if (source.material) {
    layout.tau_th = source.material->thermal_time() * wm;
  } else {
    throw InvalidArgument("tau_th needs either an override or a material block");
  }

  if (source.omega_base)
    require(positive(*source.omega_base), "omega_base must be > 0");
  else if (!source.material && !indices.empty())
    throw InvalidArgument("elastic spectrum needs either omega_base or a material block");

  const double q_elastic = source.quality_factor.value_or(params.Q_m);
  require(positive(q_elastic), "elastic quality factor must be > 0");

  layout.modes.reserve(indices.size());
  for (int n : indices) {
    require(n >= 1, "elastic mode indices must be positive, got " + std::to_string(n));
    for (const auto& m : layout.modes)
      require(m.index != n, "duplicate elastic mode index " + std::to_string(n));
    ElasticMode mode;
    mode.index = n;
    mode.Omega = source.omega_base ? n * *source.omega_base
                                   : source.material->elastic_frequency(n) / wm;
    mode.Gamma = mode.Omega / q_elastic;
    mode.G0 = pull * std::sqrt(2.0 * constants::hbar / (params.mass * mode.Omega * wm)) / wm;
    layout.modes.push_back(mode);
  }
  return layout;
}

SteadyState steady_state(const PhysicalParams& params, const SystemLayout& layout,
                         double detuning_eff) {
  params.validate();
  if (!std::isfinite(detuning_eff)) throw InvalidArgument("detuning must be finite");

  const double kc = layout.kappa_c();
  const double drive = params.drive() / layout.omega_m_si;
  SteadyState s;
  s.detuning_eff = detuning_eff;
  s.mean_field = drive / std::hypot(kc, detuning_eff);
  const double photons = s.mean_field * s.mean_field;

  double shift = 0.0;
  if (layout.include_com) {
    s.q_cm_mean = layout.g0 * photons;
    s.g = layout.g0 * s.mean_field * std::sqrt(2.0);
    shift += layout.g0 * s.q_cm_mean;
  }

  // l^2 / nu^2 = (pi/2)^2 tau_th by definition of tau_th.
  const double static_thermal =
      1.0 + layout.kappa2 * layout.chi * 0.25 * constants::pi * constants::pi * layout.tau_th;
  s.Q_means.reserve(layout.modes.size());
  s.G.reserve(layout.modes.size());
  for (const auto& m : layout.modes) {
    const double q = m.G0 * photons / m.Omega * static_thermal;
    s.Q_means.push_back(q);
    s.G.push_back(m.G0 * s.mean_field * std::sqrt(2.0));
    shift += m.G0 * q;
  }
  s.detuning_bare = detuning_eff + shift;
  return s;
}

}  // namespace optomech
