#ifndef OPTOMECH_SOLVER_HPP
#define OPTOMECH_SOLVER_HPP

#include <cstddef>

#include "optomech/dynamics.hpp"
#include "optomech/error.hpp"

namespace optomech {

/// Steady-state symmetrized second moments V_ij = <u_i u_j + u_j u_i> / 2 in
/// the operator ordering of Basis.
struct CovarianceMatrix {
  RealMatrix entries;
  /// Largest |Im V_ij| discarded when the result was made real.
  double imag_residue = 0.0;
  /// False when the panel cap was hit before the tolerance was met.
  bool converged = true;
  /// Summed panel error estimate, same units as the entries.
  double error_estimate = 0.0;
  std::size_t panels = 0;
  std::size_t evaluations = 0;
};

struct QuadratureConfig {
  /// Upper end of the directly integrated band, units of omega_m. Zero selects
  /// 100 x the largest system frequency.
  double omega_max = 0.0;
  double rel_tol = 1e-6;
  /// Refinement stops once this many panels exist; the seed panels are always
  /// evaluated even if they alone exceed it.
  std::size_t max_panels = 20000;
  /// Evaluate the integrand at -omega as well as +omega instead of using the
  /// conjugate symmetry. Costs twice as much; fills imag_residue.
  bool mirror_check = false;

  void validate() const;
};

class UnstableSystem : public Error {
 public:
  explicit UnstableSystem(const StabilityReport& report);
  const StabilityReport& report() const noexcept { return report_; }

 private:
  StabilityReport report_;
};

/// Largest of omega_m, the elastic resonances, kappa_c and |Delta_c| (units of omega_m).
double max_system_frequency(const SystemLayout& layout, const SteadyState& steady);

/// V = (1/2pi) \int M D M^dagger d omega with M = [i omega + A(omega)]^-1.
///
/// The band [0, omega_max] is covered by adaptive Gauss-Kronrod panels seeded
/// at the resonances of M; everything above omega_max is integrated on the
/// mapped variable t = omega_max / omega. Thermal bath noise is cut off at
/// omega_max when the full Brownian spectrum is used (the ohmic momentum
/// variance is otherwise log-divergent); a frozen spectrum is integrated to
/// infinity. Throws UnstableSystem when A(0) is not Hurwitz.
CovarianceMatrix integrate_covariance(const SpectralMatrices& matrices,
                                      const QuadratureConfig& quad = {});

/// Dense solution of A V + V A^T + D = 0 (Bartels-Stewart on the complex Schur
/// form). Throws UnphysicalInput unless A is Hurwitz.
CovarianceMatrix lyapunov_oracle(const RealMatrix& a, const RealMatrix& d);

}  // namespace optomech

#endif  // OPTOMECH_SOLVER_HPP
