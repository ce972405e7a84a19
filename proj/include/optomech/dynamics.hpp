#ifndef OPTOMECH_DYNAMICS_HPP
#define OPTOMECH_DYNAMICS_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <optional>

#include "optomech/model.hpp"

namespace optomech {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Fixed operator ordering shared by every matrix in the library:
///   [dq_cm, dp_cm, dX_a, dY_a, dQ_1, dP_1, dQ_2, dP_2, ...]
/// With the CoM mode removed the first two rows are absent and the cavity
/// quadratures move to rows 0 and 1.
class Basis {
 public:
  explicit Basis(const SystemLayout& layout)
      : has_com_(layout.include_com), elastic_(layout.elastic_count()) {}
  Basis(bool has_com, std::size_t elastic) : has_com_(has_com), elastic_(elastic) {}

  bool has_com() const { return has_com_; }
  std::size_t elastic_count() const { return elastic_; }
  std::size_t dimension() const { return 2 * elastic_ + (has_com_ ? 4 : 2); }
  std::size_t mode_count() const { return dimension() / 2; }

  std::size_t com_q() const { return 0; }
  std::size_t com_p() const { return 1; }
  std::size_t cavity_x() const { return has_com_ ? 2 : 0; }
  std::size_t cavity_y() const { return cavity_x() + 1; }
  std::size_t elastic_q(std::size_t k) const { return cavity_x() + 2 + 2 * k; }
  std::size_t elastic_p(std::size_t k) const { return elastic_q(k) + 1; }

 private:
  bool has_com_;
  std::size_t elastic_;
};

/// How the thermal Brownian spectrum enters the diffusion matrix.
enum class BrownianSpectrum {
  Full,    ///< omega coth(hbar omega / 2 k_B T), the quantum Brownian spectrum
  Frozen,  ///< coth evaluated once at each mode's own resonance (flat spectrum)
  Omitted, ///< no thermal bath noise; used above the bath cutoff
};

/// omega coth(r omega / 2) with r = hbar omega_m / k_B T and omega in units of
/// omega_m. Below 1e-8 the series 2/r + r omega^2 / 6 is used.
double brownian_factor(double omega, double thermal_ratio);

/// Drift A(omega): the fluctuations obey du/dt = A u + noise in the time domain.
ComplexMatrix build_drift(const SystemLayout& layout, const SteadyState& steady,
                          double omega);

/// Noise spectral matrix D(omega) normalized so that
///   V = (1/2pi) \int M(omega) D(omega) M(omega)^dagger d omega.
/// D is Hermitian; the photothermal cross terms carry the kernel phase, so it is
/// real only when chi or kappa2 vanishes or at omega = 0.
ComplexMatrix build_diffusion(const SystemLayout& layout, const SteadyState& steady,
                              double omega,
                              BrownianSpectrum brownian = BrownianSpectrum::Full);

/// Drift and diffusion bound to one operating point.
class SpectralMatrices {
 public:
  SpectralMatrices(SystemLayout layout, SteadyState steady,
                   BrownianSpectrum brownian = BrownianSpectrum::Full);

  std::size_t dimension() const { return layout_.dimension(); }
  ComplexMatrix drift_at(double omega) const { return build_drift(layout_, steady_, omega); }
  ComplexMatrix diffusion_at(double omega) const {
    return build_diffusion(layout_, steady_, omega, brownian_);
  }

  const SystemLayout& layout() const { return layout_; }
  const SteadyState& steady() const { return steady_; }
  BrownianSpectrum brownian() const { return brownian_; }

 private:
  SystemLayout layout_;
  SteadyState steady_;
  BrownianSpectrum brownian_;
};

struct StabilityReport {
  bool stable = false;
  /// Closed-form margin; empty when the detuning is not positive.
  std::optional<double> closed_form_margin;
  /// Largest real part among the eigenvalues of A(0), units of omega_m.
  double max_real_eigenvalue = 0.0;
  /// True when both verdicts concur (or only the eigenvalue test applies).
  bool agreement = true;
};

StabilityReport check_stability(const SystemLayout& layout, const SteadyState& steady);

/// Closed-form stability margin, valid for detuning > 0.
double stability_margin(const SystemLayout& layout, const SteadyState& steady);

}  // namespace optomech

#endif  // OPTOMECH_DYNAMICS_HPP
